"""
qembed.hamiltonian.fcidump
AUTHOR: carter-vin

Extended-FCIDUMP reader and writer.

Format:
- header `&FCI NORB=n,NELEC=m,MS2=s,COMPLEX={0|1},GAMMA={0|1} &END` (may span lines;
  ORBSYM/ISYM keys are accepted and ignored)
- body lines `re [im] i j k l`, 1-based, im present iff COMPLEX=1
- `i j k l` all nonzero → (ij|kl); `i j 0 0` → h_ij; `0 0 0 0` → e0;
  `i 0 0 0` → orbital energy of i
- missing entries are completed from symmetry (4-fold, 8-fold at GAMMA=1)
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any, Iterator

import numpy as np

from qembed.errors import FcidumpError, SymmetryError
from qembed.hamiltonian.core import SYMMETRY_TOL, ActiveSpaceHamiltonian

_KEY = r"[A-Za-z_][A-Za-z0-9_]*"
_KEY_RE = re.compile(rf"({_KEY})\s*=\s*([^=]*?)(?=,?\s*{_KEY}\s*=|\s*$)")


def _parse_header(text: str) -> dict[str, Any]:
    body = text.replace("&FCI", " ").replace("&END", " ").replace("/", " ").strip()
    values: dict[str, Any] = {}
    for key, raw in _KEY_RE.findall(body):
        values[key.upper()] = raw.strip().rstrip(",")
    return values


def _split_header(lines: list[str]) -> tuple[dict[str, Any], int]:
    """Return header fields and the 0-based index of the first body line."""
    if not lines or "&FCI" not in lines[0].upper():
        raise FcidumpError("missing &FCI header", line=1)
    chunk: list[str] = []
    for idx, line in enumerate(lines):
        upper = line.upper()
        chunk.append(upper)
        if "&END" in upper or upper.strip() == "/":
            return _parse_header(" ".join(chunk)), idx + 1
    raise FcidumpError("header is not terminated by &END")


def _int_field(header: dict[str, Any], key: str, default: int | None = None) -> int | None:
    raw = header.get(key)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise FcidumpError(f"header field {key} is not an integer: {raw!r}", line=1) from None


def two_body_orbit(i: int, j: int, k: int, l: int, gamma: bool) -> list[tuple[tuple, bool]]:
    """Positions sharing a value with (ij|kl); flag marks complex-conjugated copies."""
    orbit = [
        ((i, j, k, l), False),
        ((k, l, i, j), False),
        ((j, i, l, k), True),
        ((l, k, j, i), True),
    ]
    if gamma:
        orbit += [
            ((j, i, k, l), False),
            ((i, j, l, k), False),
            ((k, l, j, i), False),
            ((l, k, i, j), False),
        ]
    return orbit


def _canonical(i: int, j: int, k: int, l: int, gamma: bool) -> tuple[int, int, int, int]:
    return min(pos for pos, _ in two_body_orbit(i, j, k, l, gamma))


def _place(
    target: np.ndarray, filled: np.ndarray, pos: tuple, value: complex, lineno: int
) -> None:
    if filled[pos]:
        if abs(target[pos] - value) > SYMMETRY_TOL:
            raise SymmetryError(
                f"line {lineno}: entry {tuple(p + 1 for p in pos)} conflicts with an earlier "
                f"symmetry-equivalent value ({target[pos]} vs {value})"
            )
        return
    target[pos] = value
    filled[pos] = True


def _to_float(token: str) -> float:
    # Fortran writers emit 1.0D-03
    return float(token.replace("D", "E").replace("d", "e"))


def _iter_body(
    lines: list[str], start: int, complex_values: bool
) -> Iterator[tuple[int, complex, tuple]]:
    expected = 6 if complex_values else 5
    for idx in range(start, len(lines)):
        lineno = idx + 1
        fields = lines[idx].split()
        if not fields:
            continue
        if len(fields) != expected:
            raise FcidumpError(
                f"expected {expected} fields (COMPLEX={int(complex_values)}), got {len(fields)}",
                line=lineno,
            )
        try:
            re_part = _to_float(fields[0])
            im_part = _to_float(fields[1]) if complex_values else 0.0
            indices = tuple(int(x) for x in fields[expected - 4 :])
        except ValueError as e:
            raise FcidumpError(f"unparseable entry: {e}", line=lineno) from None
        yield lineno, complex(re_part, im_part), indices


def parse_fcidump(text: str, *, kpoint_label: str = "") -> ActiveSpaceHamiltonian:
    lines = text.splitlines()
    header, start = _split_header(lines)
    norb = _int_field(header, "NORB")
    if norb is None or norb < 1:
        raise FcidumpError("NORB missing or < 1", line=1)
    nelec = _int_field(header, "NELEC")
    ms2 = _int_field(header, "MS2", 0)
    complex_values = bool(_int_field(header, "COMPLEX", 0))
    gamma = bool(_int_field(header, "GAMMA", 0 if complex_values else 1))

    h = np.zeros((norb, norb), dtype=complex)
    h_set = np.zeros((norb, norb), dtype=bool)
    eri = np.zeros((norb,) * 4, dtype=complex)
    eri_set = np.zeros((norb,) * 4, dtype=bool)
    orbital_energies = None
    e0 = 0.0

    for lineno, value, (i, j, k, l) in _iter_body(lines, start, complex_values):
        if any(x < 0 or x > norb for x in (i, j, k, l)):
            raise FcidumpError(f"index out of range 0..{norb}: {(i, j, k, l)}", line=lineno)
        if gamma and abs(value.imag) > SYMMETRY_TOL:
            raise SymmetryError(f"line {lineno}: imaginary entry in a GAMMA=1 file")

        if i and j and k and l:
            for pos, conj in two_body_orbit(i - 1, j - 1, k - 1, l - 1, gamma):
                _place(eri, eri_set, pos, value.conjugate() if conj else value, lineno)
        elif i and j and not k and not l:
            _place(h, h_set, (i - 1, j - 1), value, lineno)
            _place(h, h_set, (j - 1, i - 1), value.conjugate(), lineno)
        elif i and not j and not k and not l:
            if orbital_energies is None:
                orbital_energies = np.zeros(norb)
            orbital_energies[i - 1] = value.real
        elif not (i or j or k or l):
            e0 = value.real
        else:
            raise FcidumpError(f"index pattern {(i, j, k, l)} is not recognized", line=lineno)

    H = ActiveSpaceHamiltonian(
        e0,
        h,
        eri,
        kpoint_label=kpoint_label,
        gamma_point=gamma,
        n_electrons=nelec,
        ms2=ms2,
        orbital_energies=orbital_energies,
    )
    return H.validate()


def load_hamiltonian(
    path: str | Path, *, kpoint_label: str | None = None
) -> ActiveSpaceHamiltonian:
    """
    Load and validate an extended-FCIDUMP file.

    Raises FcidumpError (with line number) on parse problems, SymmetryError
    on symmetry violations.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    label = kpoint_label if kpoint_label is not None else path.stem
    return parse_fcidump(text, kpoint_label=label)


def format_fcidump(H: ActiveSpaceHamiltonian, *, tol: float = 0.0) -> str:
    """Serialize H writing one canonical representative per symmetry orbit."""
    n = H.n
    complex_values = not H.gamma_point
    nelec = H.n_electrons if H.n_electrons is not None else 0
    ms2 = H.ms2 if H.ms2 is not None else 0
    out = [
        f"&FCI NORB={n},NELEC={nelec},MS2={ms2},"
        f"COMPLEX={int(complex_values)},GAMMA={int(H.gamma_point)} &END"
    ]

    def row(value: complex, i: int, j: int, k: int, l: int) -> str:
        if complex_values:
            return f"{value.real:.17g} {value.imag:.17g} {i} {j} {k} {l}"
        return f"{value.real:.17g} {i} {j} {k} {l}"

    for idx in np.ndindex(n, n, n, n):
        if idx != _canonical(*idx, H.gamma_point):
            continue
        value = complex(H.eri[idx])
        if abs(value) > tol:
            out.append(row(value, *(x + 1 for x in idx)))
    for i in range(n):
        for j in range(i + 1):
            value = complex(H.h[i, j])
            if abs(value) > tol:
                out.append(row(value, i + 1, j + 1, 0, 0))
    if H.orbital_energies is not None:
        for i, eps in enumerate(H.orbital_energies):
            out.append(row(complex(eps), i + 1, 0, 0, 0))
    out.append(row(complex(H.e0), 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def save_hamiltonian(H: ActiveSpaceHamiltonian, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_fcidump(H), encoding="utf-8")
