"""
Contract tests for qembed.operators.pauli.

Rules:
- Labels put qubit 0 leftmost; basis index bit q is qubit q
- compose() agrees with dense matrix products (phase included)
- Multiplication is associative; simplify() is idempotent
- Sums merge duplicates on construction
"""

from __future__ import annotations

from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qembed.operators.pauli import PauliString, PauliSum

_SINGLE = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def _dense(label: str) -> np.ndarray:
    # qubit 0 is the least-significant bit: it is the rightmost kron factor
    return reduce(np.kron, [_SINGLE[c] for c in reversed(label)])


labels = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.tuples(*[st.text(alphabet="IXYZ", min_size=n, max_size=n)] * 3)
)


# ---------------------------------------------------------------------------
# Strings
# ---------------------------------------------------------------------------

def test_label_round_trip_and_qubit_order() -> None:
    """XIZ means X on qubit 0 and Z on qubit 2."""
    P = PauliString.from_label("XIZ")
    assert P.label == "XIZ"
    assert P.op_at(0) == "X"
    assert P.op_at(2) == "Z"
    assert P.weight == 2


def test_invalid_label_rejected() -> None:
    with pytest.raises(ValueError, match="invalid Pauli character"):
        PauliString.from_label("XQ")


def test_to_matrix_matches_kron() -> None:
    for label in ["X", "Y", "XY", "ZYX", "IYZI"]:
        np.testing.assert_allclose(
            PauliString.from_label(label).to_matrix().toarray(), _dense(label), atol=1e-14
        )


@given(labels)
@settings(max_examples=60, deadline=None)
def test_compose_matches_dense_product(triple: tuple[str, str, str]) -> None:
    a, b, _ = triple
    phase, product = PauliString.from_label(a).compose(PauliString.from_label(b))
    np.testing.assert_allclose(phase * _dense(product.label), _dense(a) @ _dense(b), atol=1e-12)


@given(labels)
@settings(max_examples=60, deadline=None)
def test_multiplication_is_associative(triple: tuple[str, str, str]) -> None:
    A, B, C = (PauliSum.from_list([(t, 1.0)]) for t in triple)
    left = (A * B) * C
    right = A * (B * C)
    assert left.terms.keys() == right.terms.keys()
    for s in left.terms:
        assert left.terms[s] == pytest.approx(right.terms[s])


@given(labels)
@settings(max_examples=40, deadline=None)
def test_commutation_matches_matrices(triple: tuple[str, str, str]) -> None:
    a, b, _ = triple
    A, B = _dense(a), _dense(b)
    commute = np.allclose(A @ B, B @ A)
    assert PauliString.from_label(a).commutes(PauliString.from_label(b)) == commute


def test_split_cuts_at_qubit_boundary() -> None:
    left, right = PauliString.from_label("XYZI").split(2)
    assert (left.label, right.label) == ("XY", "ZI")


def test_remove_qubits_shifts_higher_qubits_down() -> None:
    assert PauliString.from_label("XYZX").remove_qubits([1, 3]).label == "XZ"


# ---------------------------------------------------------------------------
# Sums
# ---------------------------------------------------------------------------

def test_sum_merges_duplicates() -> None:
    S = PauliSum.from_list([("XZ", 0.5), ("XZ", 0.25), ("II", 1.0)])
    assert len(S) == 2
    assert S.coefficient("XZ") == pytest.approx(0.75)
    assert S.constant() == pytest.approx(1.0)


def test_simplify_drops_small_terms_and_is_idempotent() -> None:
    S = PauliSum.from_list([("XX", 1e-14), ("ZZ", 0.3), ("YY", -1e-3)])
    once = S.simplify(1e-12)
    assert set(s.label for s in once.terms) == {"ZZ", "YY"}
    assert once.simplify(1e-12) == once


def test_simplify_rejects_negative_tolerance() -> None:
    with pytest.raises(ValueError):
        PauliSum.identity(1).simplify(-1.0)


def test_sum_product_matches_dense() -> None:
    A = PauliSum.from_list([("XY", 0.3), ("ZI", -1.2j)])
    B = PauliSum.from_list([("YY", 2.0), ("IX", 0.5)])
    np.testing.assert_allclose((A * B).to_dense(), A.to_dense() @ B.to_dense(), atol=1e-12)


def test_qubit_count_mismatch_raises() -> None:
    with pytest.raises(ValueError, match="qubit count mismatch"):
        PauliSum.identity(2) + PauliSum.identity(3)


def test_apply_matches_matrix() -> None:
    rng = np.random.default_rng(3)
    psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    S = PauliSum.from_list([("XYZ", 0.7), ("ZZI", -0.2), ("III", 0.1)])
    np.testing.assert_allclose(S.apply(psi), S.to_dense() @ psi, atol=1e-12)
