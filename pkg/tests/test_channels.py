import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polaract.channels import (
    BEC,
    BSC,
    CQBinary,
    DensityMatrix2,
    DomainError,
    Erasure,
    PauliSub,
    binary_entropy,
    channel_capacity,
    channel_reliability_seed,
    csym_bounds,
    default_c_low,
    erasure_capacities,
    fidelity,
    frontier_point,
    holevo_symmetric,
    pauli_apply,
    pauli_subchannel_fidelities,
    pauli_to_sub,
    solve_fz_for_lower,
    von_neumann_entropy,
)

KET0 = DensityMatrix2.pure([1, 0])
KET1 = DensityMatrix2.pure([0, 1])
PLUS = DensityMatrix2.pure([1, 1])
MIXED = DensityMatrix2.maximally_mixed()

probs = st.floats(0.0, 1.0, allow_nan=False)
bloch = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda r: r[0] ** 2 + r[1] ** 2 + r[2] ** 2 <= 1.0)


# density matrices

def test_density_rejects_non_hermitian():
    with pytest.raises(DomainError):
        DensityMatrix2([[0.5, 0.1], [0.2, 0.5]])


def test_density_rejects_bad_trace():
    with pytest.raises(DomainError):
        DensityMatrix2([[0.6, 0], [0, 0.6]])


def test_density_rejects_negative_eigenvalue():
    with pytest.raises(DomainError):
        DensityMatrix2([[1.2, 0], [0, -0.2]])


def test_density_rejects_wrong_shape():
    with pytest.raises(DomainError):
        DensityMatrix2(np.eye(3) / 3)


@given(bloch)
def test_bloch_states_are_valid(r):
    rho = DensityMatrix2.from_bloch(r)
    lam = rho.eigenvalues()
    assert lam[0] >= -1e-12
    assert lam.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.sort(np.linalg.eigvalsh(rho.entries)), lam, atol=1e-12)


# entropy and Holevo quantity

def test_entropy_of_pure_and_mixed():
    assert von_neumann_entropy(KET0) == 0.0
    assert von_neumann_entropy(MIXED) == pytest.approx(1.0, abs=1e-15)


def test_holevo_orthogonal_pure_states():
    assert holevo_symmetric(KET0, KET1) == pytest.approx(1.0, abs=1e-12)


def test_holevo_identical_states():
    assert holevo_symmetric(PLUS, PLUS) == pytest.approx(0.0, abs=1e-12)


def test_holevo_pure_versus_mixed():
    # independent oracle: h2(0.25) - 1/2 at 30 digits
    assert holevo_symmetric(KET0, MIXED) == pytest.approx(0.311278124459132863909695792039, abs=1e-12)


@given(bloch, bloch)
def test_holevo_range_and_zero_iff_equal(r0, r1):
    s0, s1 = DensityMatrix2.from_bloch(r0), DensityMatrix2.from_bloch(r1)
    chi = holevo_symmetric(s0, s1)
    assert 0.0 <= chi <= 1.0
    if np.allclose(r0, r1, atol=1e-9):
        assert chi == pytest.approx(0.0, abs=1e-8)
    elif np.linalg.norm(np.subtract(r0, r1)) > 1e-3:
        assert chi > 0.0


# fidelity

def test_fidelity_examples():
    assert fidelity(PLUS, PLUS) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(KET0, KET1) == pytest.approx(0.0, abs=1e-12)
    # independent oracle: scipy sqrtm on sqrt(sigma) rho sqrt(sigma)
    assert fidelity(KET0, MIXED) == pytest.approx(0.5000000000000001, abs=1e-12)


def test_fidelity_general_size_matches_qubit_form():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = (DensityMatrix2.from_bloch(0.9 * v / max(1.0, np.linalg.norm(v))) for v in rng.normal(size=(2, 3)))
        # F(a (x) I/2, b (x) I/2) = F(a, b), evaluated through the 4x4 path
        wide = [np.kron(m.entries, np.eye(2) / 2) for m in (a, b)]
        assert fidelity(*wide) == pytest.approx(fidelity(a, b), abs=1e-9)


def test_fidelity_shape_mismatch():
    with pytest.raises(DomainError):
        fidelity(KET0, np.eye(4) / 4)


@given(bloch, bloch)
def test_fidelity_symmetric(r0, r1):
    a, b = DensityMatrix2.from_bloch(r0), DensityMatrix2.from_bloch(r1)
    assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-12)


# Pauli channel

def test_pauli_identity():
    assert pauli_apply(0, 0, 0, PLUS) == PLUS


def test_pauli_bit_flip():
    assert pauli_apply(1, 0, 0, KET0) == KET1


def test_pauli_dephasing_plus():
    # oracle: (|+><+| + Z|+><+|Z) / 2 by direct matrix products
    assert pauli_apply(0, 0, 0.5, PLUS) == DensityMatrix2(np.eye(2) / 2)


def test_pauli_rejects_excess_probability():
    with pytest.raises(DomainError):
        pauli_apply(0.5, 0.4, 0.3, PLUS)


@settings(max_examples=200)
@given(bloch, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_pauli_output_is_density(r, a, b, c):
    total = a + b + c
    if total > 1:
        a, b, c = a / total, b / total, c / total
    out = pauli_apply(a, b, c, DensityMatrix2.from_bloch(r))
    assert isinstance(out, DensityMatrix2)


def test_pauli_to_sub_splits_y():
    sub = pauli_to_sub(0.1, 0.05, 0.2)
    assert sub.p_z == pytest.approx(0.15)
    assert sub.p_x == pytest.approx(0.25)


# capacities and seeds

@pytest.mark.parametrize("p, d, expected", [
    (0.45, 2, (0.55, 0.10)),
    (0.0, 2, (1.0, 1.0)),
    (0.5, 2, (0.5, 0.0)),
    (0.8, 4, (0.4, 0.0)),
])
def test_erasure_capacities(p, d, expected):
    assert erasure_capacities(p, d) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("p, d", [(-0.1, 2), (1.1, 2), (0.3, 1), (0.3, 2.5)])
def test_erasure_domain_errors(p, d):
    with pytest.raises(DomainError):
        erasure_capacities(p, d)


def test_subchannel_fidelities():
    assert pauli_subchannel_fidelities(0, 0) == (0.0, 0.0)
    assert pauli_subchannel_fidelities(0.5, 0.5) == pytest.approx((1.0, 1.0))
    assert pauli_subchannel_fidelities(0.1, 0.1) == pytest.approx((0.6, 0.6), abs=1e-12)
    with pytest.raises(DomainError):
        pauli_subchannel_fidelities(1.2, 0.0)


def test_reliability_seeds():
    assert channel_reliability_seed(BEC(0.3)) == 0.3
    assert channel_reliability_seed(Erasure(0.3, 3)) == 0.3
    assert channel_reliability_seed(BSC(0.11)) == pytest.approx(0.625779513886480627, abs=1e-12)
    assert channel_reliability_seed(PauliSub(p_z=0.1)) == pytest.approx(0.6, abs=1e-12)
    assert channel_reliability_seed(PauliSub(p_z=0.0, p_x=0.1, subchannel="phase")) == pytest.approx(0.6)
    assert channel_reliability_seed(CQBinary(KET0, MIXED)) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_capacities():
    assert channel_capacity(BEC(0.3)) == pytest.approx(0.7)
    assert channel_capacity(BSC(0.11)) == pytest.approx(0.500084041835472004, abs=1e-12)
    assert channel_capacity(Erasure(0.45, 2)) == pytest.approx(0.55)
    assert channel_capacity(CQBinary(KET0, KET1)) == pytest.approx(1.0)
    assert channel_capacity(PauliSub(0.11)) == pytest.approx(channel_capacity(BSC(0.11)))


def test_binary_entropy_endpoints():
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0


# capacity bounds

def test_csym_bounds_examples():
    b = csym_bounds(0.0, 0.0)
    assert (b.lower, b.upper) == pytest.approx((2.0, 2.0))
    b = csym_bounds(1.0, 1.0)
    assert b.lower == pytest.approx(0.0, abs=1e-15)
    assert b.upper == pytest.approx(2 * math.sqrt(2), abs=1e-12)


def test_csym_bounds_grid_ordering_and_monotonicity():
    axis = np.round(np.arange(0, 101) / 100, 2)
    lower = np.array([[csym_bounds(fz, fx).lower for fx in axis] for fz in axis])
    upper = np.array([[csym_bounds(fz, fx).upper for fx in axis] for fz in axis])
    assert np.all(lower <= upper)
    assert np.all(np.diff(lower, axis=0) <= 1e-15)
    assert np.all(np.diff(lower, axis=1) <= 1e-15)


def test_lower_bound_versus_frontier_along_rays():
    rng = np.random.default_rng(11)
    for fz, fx in rng.random((500, 2)):
        on_frontier = default_c_low(fz, fx)
        here = csym_bounds(fz, fx).lower
        if fz + fx < 1:
            assert here > on_frontier
        elif fz + fx > 1:
            assert here < on_frontier


def test_solve_fz_inverts_lower_bound():
    f = solve_fz_for_lower(1.074)
    assert f == pytest.approx(0.900000765749772011, abs=1e-9)
    with pytest.raises(DomainError):
        solve_fz_for_lower(2.5)


def test_frontier_point_and_default_c_low():
    assert frontier_point(0.3, 0.1) == pytest.approx((0.75, 0.25))
    assert default_c_low(0.9, 0.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        frontier_point(0.0, 0.0)


@given(probs, probs)
def test_csym_bounds_property(fz, fx):
    b = csym_bounds(fz, fx)
    assert 0.0 <= b.lower <= b.upper


def test_pauli_sub_validation():
    with pytest.raises(DomainError):
        PauliSub(0.1, 0.1, "diagonal")
    with pytest.raises(DomainError):
        BSC(-0.01)
