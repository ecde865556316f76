"""
qembed.workflow.runconfig
AUTHOR: carter-vin

Reaction run description (JSON).

    {
      "reactant": {"label": "CO2 + slab", "kpoints": {"G": "r/G.fcidump", "K1": "r/K1.fcidump"}},
      "product":  {"label": "CO + O + slab", "kpoints": {"G": "p/G.fcidump", "K1": "p/K1.fcidump"}},
      "method": "vqe_qcc(4)",
      "mapping": "jw",
      "optimizer": "quasi_newton",
      "seeds": [7],
      "shots": 0,
      "n_alpha": 1, "n_beta": 1,
      "forging": {"n_bitstrings": 2, "hop_layout": "chain"},
      "selection": {"pipeline": "dd_no", "budget": 4, "n_occ_select": 2,
                    "ranking": {"reactant": "r/ranking.csv", "product": "p/ranking.csv"}},
      "budgets": [2, 4, 6],
      "out": "out"
    }

Relative paths resolve against the run file's directory. Reactant and product
must list the same k-point labels.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from qembed.operators.mapping import resolve_mapping
from qembed.vqe.optimizers import OPTIMIZERS

CASCI = "casci"
VQE_QUCCSD = "vqe_quccsd"
VQE_QCC = "vqe_qcc"
EF = "ef"
METHODS = (CASCI, VQE_QUCCSD, VQE_QCC, EF)

DD = "dd"
DD_NO = "dd_no"
PIPELINES = (DD, DD_NO)

_QCC_RE = re.compile(r"^vqe_qcc\((\d+)\)$")


@dataclass(frozen=True)
class SelectionSettings:
    """
    Active-space step in front of the solver.

    ranking: per-geometry overlap ranking CSV; without one, occupied orbitals are
    taken from the top of the occupied block downwards and virtuals upwards.
    """

    pipeline: str
    budget: int | None = None
    n_occ_select: int | None = None
    n_occ: int | None = None
    ranking: dict[str, Path] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pipeline": self.pipeline,
            "budget": self.budget,
            "n_occ_select": self.n_occ_select,
            "n_occ": self.n_occ,
            "ranking": {g: str(p) for g, p in sorted(self.ranking.items())},
        }


@dataclass(frozen=True)
class Geometry:
    label: str
    kpoints: dict[str, Path]

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "kpoints": {k: str(p) for k, p in self.kpoints.items()}}


@dataclass(frozen=True)
class RunConfig:
    reactant: Geometry
    product: Geometry
    method: str = CASCI
    pool_size: int | None = None
    mapping: str = "jordan_wigner"
    optimizer: str | None = None
    seeds: tuple[int, ...] = (7,)
    shots: int | None = None
    n_alpha: int | None = None
    n_beta: int | None = None
    n_bitstrings: int | None = None
    hop_layout: str = "chain"
    selection: SelectionSettings | None = None
    budgets: tuple[int, ...] = ()
    out_dir: Path = Path("out")
    solver_config: Path | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {list(METHODS)} or vqe_qcc(m)")
        if self.method == VQE_QCC and (self.pool_size is None or self.pool_size < 0):
            raise ValueError("vqe_qcc needs a pool size m >= 0, e.g. vqe_qcc(4)")
        if self.optimizer is not None and self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {list(OPTIMIZERS)}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if list(self.reactant.kpoints) != list(self.product.kpoints):
            raise ValueError(
                "reactant and product must list the same k-points in the same order: "
                f"{list(self.reactant.kpoints)} vs {list(self.product.kpoints)}"
            )
        if not self.reactant.kpoints:
            raise ValueError("at least one k-point is required")
        if (self.n_alpha is None) != (self.n_beta is None):
            raise ValueError("n_alpha and n_beta must be given together")
        if list(self.budgets) != sorted(self.budgets) or any(b < 2 or b % 2 for b in self.budgets):
            raise ValueError("budgets must be ascending even numbers >= 2")
        if self.selection is not None and self.selection.pipeline not in PIPELINES:
            raise ValueError(f"selection.pipeline must be one of {list(PIPELINES)}")
        resolve_mapping(self.mapping, n_alpha=0, n_beta=0)

    @property
    def kpoints(self) -> list[str]:
        return list(self.reactant.kpoints)

    @property
    def n_k(self) -> int:
        return len(self.reactant.kpoints)

    def geometry(self, name: str) -> Geometry:
        if name == "reactant":
            return self.reactant
        if name == "product":
            return self.product
        raise KeyError(name)

    @property
    def method_label(self) -> str:
        return f"{VQE_QCC}({self.pool_size})" if self.method == VQE_QCC else self.method

    def to_dict(self) -> dict[str, Any]:
        return {
            "reactant": self.reactant.to_dict(),
            "product": self.product.to_dict(),
            "method": self.method_label,
            "mapping": self.mapping,
            "optimizer": self.optimizer,
            "seeds": list(self.seeds),
            "shots": self.shots,
            "n_alpha": self.n_alpha,
            "n_beta": self.n_beta,
            "forging": {"n_bitstrings": self.n_bitstrings, "hop_layout": self.hop_layout},
            "selection": self.selection.to_dict() if self.selection else None,
            "budgets": list(self.budgets),
            "out": str(self.out_dir),
            "config": str(self.solver_config) if self.solver_config else None,
        }


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else base / p


def _geometry(payload: Any, name: str, base: Path) -> Geometry:
    if not isinstance(payload, dict):
        raise ValueError(f"{name} must be an object with a `kpoints` map")
    kpoints = payload.get("kpoints")
    if not isinstance(kpoints, dict) or not kpoints:
        raise ValueError(f"{name}.kpoints must be a non-empty map of label -> Hamiltonian path")
    return Geometry(
        label=str(payload.get("label", name)),
        kpoints={str(k): _resolve(base, str(v)) for k, v in kpoints.items()},
    )


def _parse_method(value: Any, pool_size: Any) -> tuple[str, int | None]:
    text = str(value).strip().lower()
    match = _QCC_RE.match(text)
    if match:
        return VQE_QCC, int(match.group(1))
    return text, None if pool_size is None else int(pool_size)


def parse_run_config(payload: dict[str, Any], *, base_dir: str | Path = ".") -> RunConfig:
    """Raises ValueError naming the offending field."""
    if not isinstance(payload, dict):
        raise ValueError("run config must be a JSON object")
    base = Path(base_dir)
    method, pool_size = _parse_method(payload.get("method", CASCI), payload.get("pool_size"))

    seeds = payload.get("seeds", payload.get("seed", [7]))
    if isinstance(seeds, int):
        seeds = [seeds]

    selection = None
    sel = payload.get("selection")
    if isinstance(sel, dict):
        ranking = sel.get("ranking") or {}
        if not isinstance(ranking, dict):
            raise ValueError("selection.ranking must map geometry -> ranking CSV")
        selection = SelectionSettings(
            pipeline=str(sel.get("pipeline", DD_NO)),
            budget=None if sel.get("budget") is None else int(sel["budget"]),
            n_occ_select=None if sel.get("n_occ_select") is None else int(sel["n_occ_select"]),
            n_occ=None if sel.get("n_occ") is None else int(sel["n_occ"]),
            ranking={str(g): _resolve(base, str(p)) for g, p in ranking.items()},
        )

    forging = payload.get("forging") or {}
    solver_config = payload.get("config")
    try:
        return RunConfig(
            reactant=_geometry(payload.get("reactant"), "reactant", base),
            product=_geometry(payload.get("product"), "product", base),
            method=method,
            pool_size=pool_size,
            mapping=str(payload.get("mapping", "jordan_wigner")),
            optimizer=payload.get("optimizer"),
            seeds=tuple(int(s) for s in seeds),
            shots=None if payload.get("shots") is None else int(payload["shots"]),
            n_alpha=None if payload.get("n_alpha") is None else int(payload["n_alpha"]),
            n_beta=None if payload.get("n_beta") is None else int(payload["n_beta"]),
            n_bitstrings=(
                None if forging.get("n_bitstrings") is None else int(forging["n_bitstrings"])
            ),
            hop_layout=str(forging.get("hop_layout", "chain")),
            selection=selection,
            budgets=tuple(int(b) for b in payload.get("budgets", ())),
            out_dir=_resolve(base, str(payload.get("out", "out"))),
            solver_config=_resolve(base, str(solver_config)) if solver_config else None,
        )
    except (TypeError, KeyError) as e:
        raise ValueError(f"malformed run config: {e}") from None


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON: {e}") from None
    return parse_run_config(payload, base_dir=path.parent)
