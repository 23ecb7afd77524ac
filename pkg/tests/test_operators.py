import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings as hsettings, strategies as st

from src.core import (
    BranchCutError,
    DensityMatrix,
    NotHermitianError,
    NotUnitaryError,
    Operator,
    UnitaryOperator,
    commutator,
    expectation,
    identity,
    operator_norm,
    partial_trace,
    propagator,
    random_density_matrix,
    random_hermitian,
    random_unitary,
    tensor,
    trace_norm,
    unitary_log,
    variance,
)

pytestmark = pytest.mark.unit

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ----------------------
# Fixtures & Test Data
# ----------------------
@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pauli_z():
    return Operator(SIGMA_Z, hermitian=True)


# ----------------------
# 1. Construction
# ----------------------
def test_operator_rejects_non_square():
    with pytest.raises(ValueError):
        Operator(np.zeros((2, 3)))


def test_operator_rejects_inconsistent_dims():
    with pytest.raises(ValueError):
        Operator(np.eye(6), (2, 2))


def test_operator_entries_are_read_only():
    op = Operator(np.eye(2))
    with pytest.raises(ValueError):
        op.entries[0, 0] = 5


def test_hermitian_flag_is_checked():
    with pytest.raises(NotHermitianError):
        Operator(np.array([[0, 1], [0, 0]]), hermitian=True)


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))


def test_density_matrix_rejects_negative_eigenvalue():
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_from_matrix_divides_out_rounding_drift():
    # Trace 0.9999999999986, as left behind by quadrature over a fine clock grid
    drifted = np.diag([0.3, 0.7]) * (1.0 - 1.4e-12)
    with pytest.raises(ValueError):
        DensityMatrix(drifted)
    rho = DensityMatrix.from_matrix(drifted)
    assert abs(np.trace(rho.entries).real - 1.0) < 1e-15
    np.testing.assert_allclose(np.diag(rho.entries).real, [0.3, 0.7], rtol=1e-11)


def test_from_matrix_rejects_lost_probability():
    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.diag([0.3, 0.6]))


def test_unitary_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        UnitaryOperator(np.diag([1.0, 2.0]))


# ----------------------
# 2. Tensor and Partial Trace
# ----------------------
def test_tensor_identities():
    result = tensor(identity((2,)), identity((3,)))
    assert result.dims == (2, 3)
    np.testing.assert_array_equal(result.entries, np.eye(6))


def test_tensor_diagonal_case(pauli_z):
    result = tensor(pauli_z, identity((2,)))
    np.testing.assert_array_equal(result.entries, np.diag([1, 1, -1, -1]))


def test_tensor_index_formula(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    result = tensor(Operator(a), Operator(b)).entries
    for i in range(2):
        for j in range(2):
            for k in range(3):
                for l in range(3):
                    np.testing.assert_allclose(result[i * 3 + k, j * 3 + l], a[i, j] * b[k, l], rtol=1e-15)


def test_tensor_of_states_is_state(rng):
    joint = tensor(random_density_matrix(rng, 2), random_density_matrix(rng, 3))
    assert isinstance(joint, DensityMatrix)


def test_partial_trace_product_state(rng):
    rho = random_density_matrix(rng, 3)
    sigma = random_density_matrix(rng, 4)
    joint = tensor(rho, sigma)
    np.testing.assert_allclose(partial_trace(joint, 0).entries, rho.entries, atol=1e-14)
    np.testing.assert_allclose(partial_trace(joint, 1).entries, sigma.entries, atol=1e-14)


def test_partial_trace_bell_state():
    bell = DensityMatrix.pure(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
    np.testing.assert_allclose(partial_trace(bell, 0).entries, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_matches_index_loops(rng):
    state = random_density_matrix(rng, 4)
    state = DensityMatrix(state.entries, (2, 2))
    t = state.entries.reshape(2, 2, 2, 2)
    keep_first = np.zeros((2, 2), dtype=complex)
    keep_second = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for a in range(2):
                keep_first[i, j] += t[i, a, j, a]
                keep_second[i, j] += t[a, i, a, j]
    np.testing.assert_allclose(partial_trace(state, 0).entries, keep_first, atol=1e-15)
    np.testing.assert_allclose(partial_trace(state, 1).entries, keep_second, atol=1e-15)


def test_partial_trace_three_factors(rng):
    parts = [random_density_matrix(rng, d) for d in (2, 3, 2)]
    joint = tensor(tensor(parts[0], parts[1]), parts[2])
    np.testing.assert_allclose(partial_trace(joint, 1).entries, parts[1].entries, atol=1e-14)


def test_partial_trace_invalid_index(rng):
    joint = tensor(random_density_matrix(rng, 2), random_density_matrix(rng, 2))
    with pytest.raises(ValueError):
        partial_trace(joint, 2)
    with pytest.raises(ValueError):
        partial_trace(random_density_matrix(rng, 2), 0)


@hsettings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_partial_trace_preserves_trace_and_positivity(seed):
    rng = np.random.default_rng(seed)
    joint = random_density_matrix(rng, 6)
    joint = DensityMatrix(joint.entries, (2, 3))
    for keep in (0, 1):
        reduced = partial_trace(joint, keep)
        assert isinstance(reduced, DensityMatrix)
        assert abs(np.trace(reduced.entries) - 1) < 1e-12


# ----------------------
# 3. Norms
# ----------------------
def test_trace_norm_trivial_cases():
    assert trace_norm(Operator(np.zeros((3, 3)))) == 0.0
    assert trace_norm(identity((4,))) == pytest.approx(4.0, abs=1e-14)


def test_trace_norm_eigenvalue_oracle(rng):
    h = random_hermitian(rng, 3)
    expected = np.sum(np.abs(np.linalg.eigvals(h.entries)))
    assert trace_norm(h) == pytest.approx(expected, abs=1e-12)
    assert trace_norm(Operator(h.entries)) == pytest.approx(expected, abs=1e-12)


def test_operator_norm_cases(rng):
    assert operator_norm(identity((3,))) == pytest.approx(1.0)
    c = 2.5
    assert operator_norm(Operator(np.diag([-c, c]), hermitian=True)) == pytest.approx(c)
    h = random_hermitian(rng, 5)
    assert operator_norm(h) == pytest.approx(np.max(np.abs(np.linalg.eigvals(h.entries))), abs=1e-12)


@hsettings(max_examples=40, deadline=None)
@given(seed=seeds, dim=st.integers(min_value=2, max_value=8))
def test_trace_norm_unitary_invariance(seed, dim):
    rng = np.random.default_rng(seed)
    a = Operator(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    u, v = random_unitary(rng, dim), random_unitary(rng, dim)
    rotated = Operator(u.entries @ a.entries @ v.entries)
    assert trace_norm(rotated) == pytest.approx(trace_norm(a), abs=1e-10)


@hsettings(max_examples=40, deadline=None)
@given(seed=seeds, dim=st.integers(min_value=2, max_value=8))
def test_holder_inequality(seed, dim):
    rng = np.random.default_rng(seed)
    a = Operator(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    b = Operator(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    assert abs(np.trace(a.entries @ b.entries)) <= operator_norm(a) * trace_norm(b) + 1e-10


# ----------------------
# 4. Commutators and Moments
# ----------------------
def test_commutator_cases(rng):
    h = random_hermitian(rng, 4)
    np.testing.assert_allclose(commutator(h, h).entries, 0, atol=1e-14)
    np.testing.assert_allclose(commutator(Operator(SIGMA_X), Operator(SIGMA_Y)).entries, 2j * SIGMA_Z)
    poly = Operator(h.entries @ h.entries @ h.entries - 2 * h.entries + 3 * np.eye(4))
    np.testing.assert_allclose(commutator(h, poly).entries, 0, atol=1e-12)


def test_commutator_dimension_mismatch():
    with pytest.raises(ValueError):
        commutator(identity((2,)), identity((3,)))


def test_expectation_cases(pauli_z, rng):
    assert expectation(pauli_z, DensityMatrix.pure([0, 1])) == pytest.approx(-1.0)
    assert expectation(pauli_z, DensityMatrix(np.eye(2) / 2)) == pytest.approx(0.0)

    h = random_hermitian(rng, 4)
    rho = random_density_matrix(rng, 4)
    oracle = sum(h.entries[i, j] * rho.entries[j, i] for i in range(4) for j in range(4))
    assert expectation(h, rho) == pytest.approx(oracle.real, abs=1e-13)


def test_expectation_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        expectation(Operator(np.array([[0, 1], [0, 0]])), DensityMatrix(np.eye(2) / 2))


def test_variance_cases(pauli_z, rng):
    assert variance(pauli_z, DensityMatrix.pure([1, 0])) == 0.0
    assert variance(pauli_z, DensityMatrix.pure(PLUS)) == pytest.approx(1.0)

    h = random_hermitian(rng, 5)
    rho = random_density_matrix(rng, 5)
    second = np.trace(h.entries @ h.entries @ rho.entries).real
    first = np.trace(h.entries @ rho.entries).real
    assert variance(h, rho) == pytest.approx(second - first**2, abs=1e-12)


# ----------------------
# 5. Propagators and Logarithms
# ----------------------
def test_propagator_trivial_cases(pauli_z):
    zero = Operator(np.zeros((3, 3)), hermitian=True)
    np.testing.assert_allclose(propagator(zero, 1.7).entries, np.eye(3), atol=1e-15)
    expected = np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)])
    np.testing.assert_allclose(propagator(pauli_z, np.pi / 2).entries, expected, atol=1e-15)


def test_propagator_matches_power_series(rng):
    h = random_hermitian(rng, 4, norm=1.0)
    t = 0.37
    generator = -1j * t * h.entries
    series = np.eye(4, dtype=complex)
    term = np.eye(4, dtype=complex)
    for k in range(1, 40):
        term = term @ generator / k
        series = series + term
    np.testing.assert_allclose(propagator(h, t).entries, series, atol=1e-10)


def test_propagator_respects_hbar(rng):
    h = random_hermitian(rng, 3)
    np.testing.assert_allclose(propagator(h, 2.0, hbar=2.0).entries, propagator(h, 1.0).entries, atol=1e-13)


@hsettings(max_examples=30, deadline=None)
@given(seed=seeds, s=st.floats(-3, 3), t=st.floats(-3, 3))
def test_propagator_group_law(seed, s, t):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 4)
    product = propagator(h, s).entries @ propagator(h, t).entries
    np.testing.assert_allclose(product, propagator(h, s + t).entries, atol=1e-10)


def test_unitary_log_identity():
    np.testing.assert_allclose(unitary_log(UnitaryOperator(np.eye(3))).entries, 0, atol=1e-15)


def test_unitary_log_sigma_x():
    log = unitary_log(UnitaryOperator(SIGMA_X))
    np.testing.assert_allclose(scipy.linalg.expm(log.entries), SIGMA_X, atol=1e-10)
    eigenvalues = np.sort_complex(np.linalg.eigvals(log.entries))
    np.testing.assert_allclose(eigenvalues, [0, 1j * np.pi], atol=1e-10)


def test_unitary_log_diagonal():
    thetas = np.array([0.3, -2.9, np.pi])
    log = unitary_log(UnitaryOperator(np.diag(np.exp(1j * thetas))))
    np.testing.assert_allclose(log.entries, np.diag(1j * thetas), atol=1e-12)


def test_unitary_log_rejects_branch_cut():
    near_cut = np.diag([np.exp(-1j * (np.pi - 1e-10)), 1.0])
    with pytest.raises(BranchCutError):
        unitary_log(UnitaryOperator(near_cut))


@hsettings(max_examples=40, deadline=None)
@given(seed=seeds, dim=st.integers(min_value=1, max_value=6))
def test_unitary_log_round_trip(seed, dim):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, dim)
    phases = np.angle(np.linalg.eigvals(u.entries))
    if np.any(np.pi - np.abs(phases) < 1e-6):
        return
    log = unitary_log(u)
    np.testing.assert_allclose(log.entries, -log.entries.conj().T, atol=1e-10)
    np.testing.assert_allclose(scipy.linalg.expm(log.entries), u.entries, atol=1e-10)
