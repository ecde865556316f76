"""
qembed.operators.fermion
AUTHOR: carter-vin

Second-quantized operators over n_orb spatial orbitals and two spins.

Spin-orbital index (block ordering): spin * n_orb + p, spin 0 = up, 1 = down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

UP = 0
DOWN = 1


class LadderOp(NamedTuple):
    mode: int
    spin: int
    dagger: bool

    def index(self, n_orb: int) -> int:
        return self.spin * n_orb + self.mode

    def adjoint(self) -> "LadderOp":
        return LadderOp(self.mode, self.spin, not self.dagger)


def cre(mode: int, spin: int) -> LadderOp:
    return LadderOp(mode, spin, True)


def ann(mode: int, spin: int) -> LadderOp:
    return LadderOp(mode, spin, False)


Term = tuple[complex, tuple[LadderOp, ...]]


@dataclass(frozen=True)
class FermionSum:
    """
    Linear combination of ladder-operator products.

    terms: (coefficient, ordered product); the empty product is the identity.
    """

    n_orb: int
    terms: tuple[Term, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n_orb < 1:
            raise ValueError("n_orb must be >= 1")
        normalized = []
        for coeff, ops in self.terms:
            ops = tuple(LadderOp(*op) for op in ops)
            for op in ops:
                if not 0 <= op.mode < self.n_orb:
                    raise ValueError(f"mode index {op.mode} out of range for {self.n_orb} orbitals")
                if op.spin not in (UP, DOWN):
                    raise ValueError(f"invalid spin {op.spin}")
            normalized.append((complex(coeff), ops))
        object.__setattr__(self, "terms", tuple(normalized))

    @staticmethod
    def constant(n_orb: int, value: complex) -> "FermionSum":
        return FermionSum(n_orb, ((complex(value), ()),))

    @staticmethod
    def from_terms(n_orb: int, terms: Iterable[Term]) -> "FermionSum":
        return FermionSum(n_orb, tuple(terms))

    def __add__(self, other: "FermionSum") -> "FermionSum":
        if not isinstance(other, FermionSum):
            return NotImplemented
        if other.n_orb != self.n_orb:
            raise ValueError(f"orbital count mismatch: {self.n_orb} vs {other.n_orb}")
        return FermionSum(self.n_orb, self.terms + other.terms)

    def __sub__(self, other: "FermionSum") -> "FermionSum":
        return self + other * -1.0

    def __mul__(self, other):
        if isinstance(other, FermionSum):
            if other.n_orb != self.n_orb:
                raise ValueError(f"orbital count mismatch: {self.n_orb} vs {other.n_orb}")
            return FermionSum(
                self.n_orb,
                tuple((c1 * c2, o1 + o2) for c1, o1 in self.terms for c2, o2 in other.terms),
            )
        if isinstance(other, (int, float, complex)):
            return FermionSum(self.n_orb, tuple((c * other, ops) for c, ops in self.terms))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "FermionSum":
        return FermionSum(
            self.n_orb,
            tuple(
                (c.conjugate(), tuple(op.adjoint() for op in reversed(ops)))
                for c, ops in self.terms
            ),
        )

    def normal_ordered(self, tol: float = 0.0) -> "FermionSum":
        """
        Canonical normal-ordered form.

        Creators left of annihilators; within each group, descending spin-orbital
        index. Repeated operators vanish; like terms are merged.
        """
        acc: dict[tuple[LadderOp, ...], complex] = {}
        for coeff, ops in self.terms:
            for c, ordered in _normal_order(coeff, ops, self.n_orb):
                acc[ordered] = acc.get(ordered, 0j) + c
        return FermionSum(
            self.n_orb,
            tuple((c, ops) for ops, c in sorted(acc.items(), key=_term_key) if abs(c) > tol),
        )

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        diff = (self - self.adjoint()).normal_ordered(tol=tol)
        return len(diff.terms) == 0


def _term_key(item: tuple[tuple[LadderOp, ...], complex]) -> tuple:
    ops = item[0]
    return (len(ops), tuple((not op.dagger, -op.spin, -op.mode) for op in ops))


def _normal_order(coeff: complex, ops: tuple[LadderOp, ...], n_orb: int) -> list[Term]:
    """Bubble into canonical order, spawning contraction terms from {a_i, a_j^dag}."""
    out: list[Term] = []
    stack: list[Term] = [(coeff, ops)]

    def rank(op: LadderOp) -> tuple[int, int]:
        return (0 if op.dagger else 1, -op.index(n_orb))

    while stack:
        c, current = stack.pop()
        ops_list = list(current)
        swapped = False
        for i in range(len(ops_list) - 1):
            a, b = ops_list[i], ops_list[i + 1]
            if a == b:
                swapped = True
                break
            if rank(a) > rank(b):
                swapped = True
                ops_list[i], ops_list[i + 1] = b, a
                stack.append((-c, tuple(ops_list)))
                if not a.dagger and b.dagger and a.index(n_orb) == b.index(n_orb):
                    stack.append((c, tuple(ops_list[:i] + ops_list[i + 2 :])))
                break
        if not swapped:
            out.append((c, current))
    return out


def number_operator(n_orb: int, mode: int, spin: int) -> FermionSum:
    return FermionSum(n_orb, ((1.0, (cre(mode, spin), ann(mode, spin))),))


def excitation(
    n_orb: int,
    creators: Iterable[tuple[int, int]],
    annihilators: Iterable[tuple[int, int]],
    coeff: complex = 1.0,
) -> FermionSum:
    """coeff · a†_{c1} a†_{c2} ... a_{a1} a_{a2} ..."""
    ops = tuple(cre(p, s) for p, s in creators) + tuple(ann(p, s) for p, s in annihilators)
    return FermionSum(n_orb, ((coeff, ops),))
