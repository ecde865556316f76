"""
qembed.main
------------
AUTHOR: carter-vin

Command-line entry point.

Key contract:
- `qembed --help` shows a Commands section.
- solver commands print a result summary (text or json) and optionally write it with --out
- `react` exits 2 when the report is partial
- invalid inputs exit 1 with an `error:` line on stderr
"""

from __future__ import annotations

import platform
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, NoReturn, Optional

import typer

from qembed import __version__
from qembed.config import (
    _DEFAULTS,
    _ENV_OVERRIDES,
    compute_config_hash,
    config_sources,
    load_config,
)
from qembed.emit import dumps_json, write_csv, write_json
from qembed.errors import DimensionLimitError
from qembed.exact.casci import (
    casci_ground_state,
    dominant_configurations,
    export_ci_csv,
    export_rdm_csv,
    one_rdm,
    wavefunction_summary,
)
from qembed.forging import (
    ef_bitstrings_from_ci,
    ef_optimize,
    load_ef_problem,
    resolve_hop_layout,
    schmidt_gap_report,
)
from qembed.hamiltonian.core import ActiveSpaceHamiltonian
from qembed.hamiltonian.fcidump import load_hamiltonian
from qembed.hamiltonian.qubit import to_qubit_hamiltonian
from qembed.logging import emit_event
from qembed.operators.mapping import JORDAN_WIGNER, reference_bitstring, resolve_mapping
from qembed.render import RENDERER_NAMES, get_renderer
from qembed.selection.active_space import (
    build_dd_active_space,
    build_no_active_space,
    select_occupied,
)
from qembed.selection.cube import load_cube, validate_electron_count
from qembed.selection.overlap import (
    density_difference,
    eta_stability_scan,
    rank_orbitals,
    read_ranking_csv,
    write_ranking_csv,
)
from qembed.vqe.ansatz import QuccsdSpec, build_qcc_ansatz, build_qcc_pool, build_quccsd
from qembed.vqe.optimizers import OPTIMIZERS, SPSA
from qembed.vqe.solver import qcc_energy_scan, vqe_minimize, vqe_property_report, with_properties
from qembed.workflow.curve import convergence_curve
from qembed.workflow.runconfig import DD, PIPELINES, load_run_config
from qembed.workflow.runner import run_reaction
from qembed.workflow.solve import electron_counts
from qembed.workflow.twist import delta_e, read_energy_table, twist_average

# Explicit multi-command CLI
app = typer.Typer(
    add_completion=False,
    help="qembed: active-space embedding workflow (selection, CASCI, VQE, forging, ΔE)",
)

_INPUT_ERRORS = (ValueError, OSError, DimensionLimitError)


# -----------------------------
# DATA CLASSES
# -----------------------------
@dataclass(frozen=True)
class EnvironmentInfo:
    """
    Snapshot of the runtime environment
    """

    python_version: str
    os: str
    machine: str
    utc_now: str


def collect_environment_info() -> EnvironmentInfo:
    return EnvironmentInfo(
        python_version=sys.version.split()[0],
        os=f"{platform.system()} {platform.release()}",
        machine=platform.machine(),
        utc_now=datetime.now(timezone.utc).isoformat(),
    )


# -----------------------------
# Helpers
# -----------------------------
def _fail(message: str, code: int = 1) -> NoReturn:
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(code=code)


def _check_format(output_format: str, allowed: tuple[str, ...] = ("text", "json")) -> None:
    if output_format not in allowed:
        raise typer.BadParameter(f"--format must be one of: {', '.join(allowed)}")


def _parse_ints(text: str | None, option: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise typer.BadParameter(f"{option} must be a comma-separated list of integers") from None


def _parse_floats(text: str | None, option: str) -> list[float]:
    if not text:
        return []
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise typer.BadParameter(f"{option} must be a comma-separated list of numbers") from None


def _load(ham: str) -> ActiveSpaceHamiltonian:
    try:
        return load_hamiltonian(ham)
    except _INPUT_ERRORS as e:
        _fail(f"{ham}: {e}")


def _emit_result(payload: dict[str, Any], text: str, output_format: str, out: str | None) -> None:
    if out:
        write_json(out, payload)
    typer.echo(dumps_json(payload) if output_format == "json" else text)


def _properties_text(props: dict[str, float] | None) -> str:
    if not props:
        return ""
    return f" N={props['N']:.10f} Sz={props['Sz']:.10f} S2={props['S2']:.10f}"


# -----------------------------
# ROOT COMMAND BEHAVIOR
# -----------------------------
@app.callback(invoke_without_command=True)
def main(ctx: typer.Context) -> None:
    """
    Root command behavior: print a hint when no subcommand is given.
    """
    if ctx.invoked_subcommand is None:
        typer.echo("No command provided. Try: qembed --help")


@app.command()
def version() -> None:
    """
    Print toolkit version & runtime env
    """
    env = collect_environment_info()
    typer.echo(f"qembed v{__version__}")
    typer.echo(f"python={env.python_version}")
    typer.echo(f"os={env.os}")
    typer.echo(f"machine={env.machine}")
    typer.echo(f"utc_now={env.utc_now}")


# -----------------------------
# Solvers
# -----------------------------
@app.command("casci")
def casci_cmd(
    ham: str = typer.Option(..., "--ham", help="Extended-FCIDUMP Hamiltonian file."),
    n_alpha: Optional[int] = typer.Option(None, "--nalpha", help="Alpha electrons."),
    n_beta: Optional[int] = typer.Option(None, "--nbeta", help="Beta electrons."),
    top: int = typer.Option(5, "--top", help="Determinants to list.", min=1),
    export_ci: Optional[str] = typer.Option(None, "--export-ci", help="Write CI amplitudes CSV."),
    export_rdm: Optional[str] = typer.Option(None, "--export-rdm", help="Write the 1-RDM CSV."),
    config_path: Optional[str] = typer.Option(None, "--config", help="Path to JSON config file."),
    out: Optional[str] = typer.Option(None, "--out", help="Write the summary JSON here."),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json."),
) -> None:
    """
    Exact ground state in the active space: energy, N / Sz / S^2, Schmidt values
    """
    _check_format(output_format)
    cfg = load_config(config_path)
    H = _load(ham)
    try:
        na, nb = electron_counts(H, n_alpha, n_beta)
        psi = casci_ground_state(H, na, nb, max_determinants=cfg["casci"]["max_determinants"])
        if export_ci:
            export_ci_csv(psi, export_ci)
        if export_rdm:
            export_rdm_csv(one_rdm(psi), export_rdm)
    except _INPUT_ERRORS as e:
        _fail(str(e))
    summary = wavefunction_summary(psi, top)
    summary["schmidt"] = schmidt_gap_report(psi).to_dict()["fidelities"]
    summary["kpoint"] = H.kpoint_label
    text = f"energy={psi.energy:.10f}" + _properties_text(summary["properties"])
    _emit_result(summary, text, output_format, out)


@app.command("vqe")
def vqe_cmd(
    ham: str = typer.Option(..., "--ham", help="Extended-FCIDUMP Hamiltonian file."),
    n_alpha: Optional[int] = typer.Option(None, "--nalpha", help="Alpha electrons."),
    n_beta: Optional[int] = typer.Option(None, "--nbeta", help="Beta electrons."),
    mapping: str = typer.Option("jw", "--mapping", help="Qubit mapping: jw, parity or parity2."),
    ansatz: str = typer.Option("quccsd", "--ansatz", help="Ansatz: quccsd or qcc."),
    pool_size: Optional[int] = typer.Option(
        None, "--pool-size", help="QCC strings to use (default: whole pool).", min=0
    ),
    optimizer: Optional[str] = typer.Option(
        None, "--optimizer", help="quasi_newton, spsa or cobyla_like."
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Optimizer / sampling seed."),
    shots: Optional[int] = typer.Option(
        None, "--shots", help="Shots per evaluation (0 = exact).", min=0
    ),
    scan: Optional[str] = typer.Option(
        None, "--scan", help="QCC only: write the warm-started m = 0..pool-size scan CSV here."
    ),
    circuit_out: Optional[str] = typer.Option(
        None, "--circuit-out", help="Dump the ansatz circuit in text form."
    ),
    config_path: Optional[str] = typer.Option(None, "--config", help="Path to JSON config file."),
    out: Optional[str] = typer.Option(None, "--out", help="Write the result JSON here."),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json."),
) -> None:
    """
    Variational ground state with the qUCCSD or QCC ansatz
    """
    _check_format(output_format)
    if ansatz not in ("quccsd", "qcc"):
        raise typer.BadParameter("--ansatz must be quccsd or qcc")
    if optimizer is not None and optimizer not in OPTIMIZERS:
        raise typer.BadParameter(f"--optimizer must be one of: {', '.join(OPTIMIZERS)}")
    if scan and ansatz != "qcc":
        raise typer.BadParameter("--scan needs --ansatz qcc")
    cfg = load_config(config_path)
    H = _load(ham)
    try:
        na, nb = electron_counts(H, n_alpha, n_beta)
        resolved = resolve_mapping(mapping, n_alpha=na, n_beta=nb)
        Hq = to_qubit_hamiltonian(H, resolved, tol=cfg["operators"]["drop_tol"])
        options: dict[str, Any] = {
            "optimizer": optimizer,
            "seed": seed,
            "shots": shots,
            "config": cfg,
        }
        extra: dict[str, Any] = {"ansatz": ansatz, "mapping": resolved.kind}
        if ansatz == "quccsd":
            circuit = build_quccsd(
                QuccsdSpec(
                    H.n,
                    na,
                    nb,
                    complex_amplitudes=not H.gamma_point,
                    trotter_steps=cfg["vqe"]["trotter_steps"],
                    mapping=resolved.kind,
                )
            )
        else:
            if resolved.kind != JORDAN_WIGNER:
                raise ValueError("the qcc ansatz requires --mapping jw")
            psi = casci_ground_state(
                H, na, nb, max_determinants=cfg["casci"]["max_determinants"]
            )
            hf = reference_bitstring(H.n, na, nb, resolved)
            pool = build_qcc_pool(
                dominant_configurations(psi, psi.amplitudes.size), hf, gamma_point=H.gamma_point
            )
            m = len(pool) if pool_size is None else min(pool_size, len(pool))
            circuit = build_qcc_ansatz(pool, m, hf)
            extra.update({"pool": pool.to_dict(), "m": m, "casci_energy": psi.energy})
            if scan:
                points = qcc_energy_scan(Hq, pool, hf, list(range(m + 1)), **options)
                write_csv(
                    scan,
                    ("m", "energy", "converged"),
                    [(mm, r.energy, int(r.converged)) for mm, r in points],
                )
        if circuit_out:
            circuit.save(circuit_out)
        result = vqe_minimize(Hq, circuit, **options)
        check = vqe_property_report(
            result,
            circuit,
            n_orb=H.n,
            n_alpha=na,
            n_beta=nb,
            mapping=resolved,
            warn_deviation=cfg["properties"]["warn_deviation"],
            gate_deviation=cfg["properties"]["gate_deviation"],
        )
    except _INPUT_ERRORS as e:
        _fail(str(e))
    result = with_properties(result, check)
    payload = {**result.to_dict(), **extra, "property_check": check.to_dict()}
    text = (
        f"energy={result.energy:.10f} converged={str(result.converged).lower()}"
        f" iterations={result.iterations}"
        + _properties_text(check.properties.to_dict())
    )
    _emit_result(payload, text, output_format, out)


@app.command("ef")
def ef_cmd(
    ham: str = typer.Option(..., "--ham", help="Extended-FCIDUMP Hamiltonian file."),
    problem: Optional[str] = typer.Option(
        None, "--problem", help="Forging problem file (`N k`, bitstrings, HOPS)."
    ),
    n_bitstrings: Optional[int] = typer.Option(
        None, "--bitstrings", help="Take the top-k alpha strings of the CASCI state.", min=1
    ),
    hops: str = typer.Option("chain", "--hops", help="Hop layout: chain, none or `0 1 1 2`."),
    n_alpha: Optional[int] = typer.Option(None, "--nalpha", help="Alpha electrons."),
    n_beta: Optional[int] = typer.Option(None, "--nbeta", help="Beta electrons."),
    optimizer: str = typer.Option(SPSA, "--optimizer", help="spsa, quasi_newton or cobyla_like."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Optimizer seed."),
    config_path: Optional[str] = typer.Option(None, "--config", help="Path to JSON config file."),
    out: Optional[str] = typer.Option(None, "--out", help="Write the result JSON here."),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json."),
) -> None:
    """
    Entanglement Forging: Schmidt coefficients solved exactly, hop angles optimized
    """
    _check_format(output_format)
    if optimizer not in OPTIMIZERS:
        raise typer.BadParameter(f"--optimizer must be one of: {', '.join(OPTIMIZERS)}")
    cfg = load_config(config_path)
    H = _load(ham)
    try:
        na, nb = electron_counts(H, n_alpha, n_beta)
        if na != nb:
            raise ValueError("forging needs n_alpha == n_beta")
        Hq = to_qubit_hamiltonian(H, JORDAN_WIGNER, tol=cfg["operators"]["drop_tol"])
        if problem:
            spec = load_ef_problem(problem)
            if spec.n_half != H.n:
                raise ValueError(f"problem has N={spec.n_half}, Hamiltonian has {H.n} orbitals")
            bitstrings, layout = list(spec.bitstrings), list(spec.hop_layout)
        else:
            psi = casci_ground_state(
                H, na, nb, max_determinants=cfg["casci"]["max_determinants"]
            )
            k = n_bitstrings or cfg["forging"]["n_bitstrings"]
            bitstrings = ef_bitstrings_from_ci(psi, k)
            layout = resolve_hop_layout(hops, H.n)
        result = ef_optimize(Hq, bitstrings, layout, seed=seed, optimizer=optimizer, config=cfg)
    except _INPUT_ERRORS as e:
        _fail(str(e))
    payload = result.to_dict()
    text = (
        f"energy={result.energy:.10f} k={len(result.bitstrings)}"
        f" hops={len(result.hop_layout)} converged={str(result.converged).lower()}"
    )
    _emit_result(payload, text, output_format, out)


# -----------------------------
# Selection
# -----------------------------
def _orbital_map(entries: list[str]) -> dict[int, str]:
    out: dict[int, str] = {}
    for entry in entries:
        key, sep, path = entry.partition("=")
        if not sep:
            raise typer.BadParameter(f"--orbital expects ID=PATH, got {entry!r}")
        try:
            out[int(key)] = path
        except ValueError:
            raise typer.BadParameter(f"--orbital id must be an integer: {entry!r}") from None
    return out


@app.command("select")
def select_cmd(
    full: Optional[str] = typer.Option(None, "--full", help="Density cube of the full system."),
    adsorbate: Optional[str] = typer.Option(None, "--adsorbate", help="Adsorbate density cube."),
    slab: Optional[str] = typer.Option(None, "--slab", help="Slab density cube."),
    orbital: Optional[list[str]] = typer.Option(
        None, "--orbital", help="Orbital cube as ID=PATH (repeatable)."
    ),
    occupied: Optional[str] = typer.Option(
        None, "--occupied", help="Occupied orbital ids, comma-separated."
    ),
    n_electrons: Optional[float] = typer.Option(
        None, "--n-electrons", help="Check the full density integrates to this count.", min=0.0
    ),
    eta: Optional[float] = typer.Option(None, "--eta", help="Overlap threshold.", min=0.0),
    eta_scan: Optional[str] = typer.Option(
        None, "--eta-scan", help="Ascending η list for the stability scan."
    ),
    ranking_path: Optional[str] = typer.Option(
        None, "--ranking", help="Reuse a ranking CSV instead of cubes."
    ),
    ham: Optional[str] = typer.Option(None, "--ham", help="Window Hamiltonian."),
    budget: Optional[int] = typer.Option(None, "--budget", help="Active orbitals.", min=2),
    pipeline: str = typer.Option(DD, "--pipeline", help="dd or dd_no."),
    n_occ_select: Optional[int] = typer.Option(
        None, "--n-occ-select", help="Occupied orbitals kept from the ranking.", min=1
    ),
    n_occ: Optional[int] = typer.Option(None, "--n-occ", help="Doubly occupied orbitals in --ham."),
    config_path: Optional[str] = typer.Option(None, "--config", help="Path to JSON config file."),
    out: str = typer.Option("out/selection", "--out", help="Output directory."),
) -> None:
    """
    Rank orbitals by density-difference overlap and build a DD / DD+NO active space
    """
    if pipeline not in PIPELINES:
        raise typer.BadParameter(f"--pipeline must be one of: {', '.join(PIPELINES)}")
    if (ham is None) != (budget is None):
        raise typer.BadParameter("--ham and --budget go together")
    cfg = load_config(config_path)
    eta = cfg["selection"]["eta"] if eta is None else eta
    out_dir = Path(out)
    payload: dict[str, Any] = {}
    try:
        if ranking_path:
            ranking = read_ranking_csv(ranking_path)
        else:
            if not (full and adsorbate and slab and orbital):
                raise typer.BadParameter(
                    "give --ranking, or --full/--adsorbate/--slab and at least one --orbital"
                )
            occ_ids = _parse_ints(occupied, "--occupied")
            rho_full = load_cube(full)
            if n_electrons:
                payload["electron_count_deviation"] = validate_electron_count(
                    rho_full, n_electrons
                )
            rho_dd = density_difference(rho_full, load_cube(adsorbate), load_cube(slab))
            grids = {i: load_cube(p) for i, p in _orbital_map(orbital).items()}
            ranking = rank_orbitals(rho_dd, grids, occ_ids, eta)
            write_ranking_csv(ranking, out_dir / "ranking.csv")
            if eta_scan:
                scan = eta_stability_scan(
                    rho_dd,
                    grids,
                    occ_ids,
                    _parse_floats(eta_scan, "--eta-scan"),
                    top_m=cfg["selection"]["top_m"],
                )
                write_json(out_dir / "eta_scan.json", scan.to_dict())
                payload["eta_scan"] = scan.to_dict()
        payload["ranking"] = ranking.to_dict()

        if ham is not None and budget is not None:
            H = _load(ham)
            n_sel = n_occ_select or cfg["selection"]["n_occ_select"]
            if pipeline == DD:
                selection = build_dd_active_space(ranking, n_sel, H, budget, n_occ=n_occ).to_dict()
            else:
                selection = build_no_active_space(
                    H,
                    select_occupied(ranking, n_sel),
                    budget,
                    n_occ=n_occ,
                    max_determinants=cfg["casci"]["max_determinants"],
                ).to_dict()
            payload["selection"] = selection
    except _INPUT_ERRORS as e:
        _fail(str(e))

    write_json(out_dir / "selection.json", payload)
    emit_event(
        "selection_emitted",
        path=str(out_dir / "selection.json"),
        eta=eta,
        pipeline=pipeline if "selection" in payload else None,
        active=payload.get("selection", {}).get("space", {}).get("active"),
    )


# -----------------------------
# Workflow
# -----------------------------
@app.command("react")
def react_cmd(
    run_path: str = typer.Option(..., "--run", help="Reaction run JSON."),
    config_path: Optional[str] = typer.Option(
        None, "--config", help="Solver config JSON (overrides the run file's `config`)."
    ),
    threads: Optional[int] = typer.Option(
        None, "--threads", help="Worker threads (default: QEMBED_THREADS).", min=1
    ),
    resume: bool = typer.Option(
        True, "--resume/--no-resume", help="Restore finished tasks from checkpoints."
    ),
    output_format: str = typer.Option("text", "--format", help="text, json or table."),
) -> None:
    """
    Per-k solves for reactant and product, twist averages and ΔE
    """
    _check_format(output_format, RENDERER_NAMES)
    try:
        run = load_run_config(run_path)
        cfg = load_config(config_path) if config_path else None
        report = run_reaction(run, config=cfg, threads=threads, resume=resume)
    except _INPUT_ERRORS as e:
        _fail(str(e))
    typer.echo(get_renderer(output_format).render(report, meta={"kpoints": run.kpoints}))
    if report.partial:
        raise typer.Exit(code=2)


@app.command("curve")
def curve_cmd(
    run_path: str = typer.Option(..., "--run", help="Reaction run JSON."),
    budgets: Optional[str] = typer.Option(
        None, "--budgets", help="Ascending even budgets, e.g. 2,4,6 (default: run file)."
    ),
    pipeline: Optional[str] = typer.Option(None, "--pipeline", help="dd or dd_no."),
    config_path: Optional[str] = typer.Option(None, "--config", help="Solver config JSON."),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads.", min=1),
    csv_path: Optional[str] = typer.Option(None, "--csv", help="Curve CSV path."),
) -> None:
    """
    ΔE against active-space budget (CSV for plotting)
    """
    if pipeline is not None and pipeline not in PIPELINES:
        raise typer.BadParameter(f"--pipeline must be one of: {', '.join(PIPELINES)}")
    try:
        run = load_run_config(run_path)
        cfg = load_config(config_path) if config_path else None
        points = convergence_curve(
            run,
            _parse_ints(budgets, "--budgets") or None,
            pipeline=pipeline,
            config=cfg,
            threads=threads,
            csv_path=csv_path,
        )
    except _INPUT_ERRORS as e:
        _fail(str(e))
    for p in points:
        value = "n/a" if p.delta_e_ha is None else f"{p.delta_e_ha:.8f}"
        typer.echo(f"budget={p.budget} delta_e_ha={value} partial={str(p.partial).lower()}")
    if any(p.partial for p in points):
        raise typer.Exit(code=2)


@app.command("twist")
def twist_cmd(
    csv_file: str = typer.Option(..., "--csv", help="`kpoint,energy` table (reactant)."),
    product: Optional[str] = typer.Option(
        None, "--product", help="Second table: print ΔE = product - reactant."
    ),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json."),
) -> None:
    """
    Twist-average a per-k energy table (and ΔE against a second one)
    """
    _check_format(output_format)
    try:
        reactant = read_energy_table(csv_file)
        payload: dict[str, Any] = {
            "n_k": len(reactant),
            "twist_average": twist_average(reactant.values()),
        }
        if product:
            prod = read_energy_table(product)
            if list(prod) != list(reactant):
                raise ValueError("reactant and product tables list different k-points")
            avg = twist_average(prod.values())
            ha, ev = delta_e(avg, payload["twist_average"])
            payload.update({"product_twist_average": avg, "delta_e_ha": ha, "delta_e_ev": ev})
    except _INPUT_ERRORS as e:
        _fail(str(e))
    if output_format == "json":
        typer.echo(dumps_json(payload))
        return
    text = f"n_k={payload['n_k']} twist_average={payload['twist_average']!r}"
    if product:
        text += f" delta_e_ha={payload['delta_e_ha']!r} delta_e_ev={payload['delta_e_ev']!r}"
    typer.echo(text)


# -----------------------------
# Config
# -----------------------------
@app.command("config")
def config_cmd(
    config_path: Optional[str] = typer.Option(None, "--config", help="Path to JSON config file."),
    output_format: str = typer.Option("text", "--format", help="Output format: text or json."),
) -> None:
    """
    Print the fully-resolved configuration with the source of every value
    """
    _check_format(output_format)
    cfg = load_config(config_path)
    cfg_hash = compute_config_hash(cfg)
    sources = config_sources(config_path)

    def _source(section: str, key: str) -> str:
        src = sources[section][key]
        if src == "env":
            env_var = next(e for e, (s, k, _) in _ENV_OVERRIDES.items() if (s, k) == (section, key))
            return f"env: {env_var}"
        if src == "file":
            return f"file: {config_path}"
        return "default"

    if output_format == "json":
        payload: dict[str, Any] = {
            "config_hash": cfg_hash,
            "config_path": config_path,
            "values": {
                f"{section}.{key}": {"value": value, "source": _source(section, key)}
                for section in _DEFAULTS
                for key, value in cfg[section].items()
            },
        }
        typer.echo(dumps_json(payload))
        return

    lines: list[str] = [
        f"config_hash: {cfg_hash}",
        f"config_path: {config_path or 'none'}",
        "",
    ]
    for section in _DEFAULTS:
        for key, value in sorted(cfg[section].items()):
            src = _source(section, key)
            src_tag = f"  ({src})" if src != "default" else ""
            lines.append(f"{section}.{key}: {value}{src_tag}")
    typer.echo("\n".join(lines))


if __name__ == "__main__":
    app()
