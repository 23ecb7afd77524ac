import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from src.bounds import (
    MachineMeasurement,
    bound_commutator,
    bound_fluctuation,
    bound_report,
    check_commutator_fluctuation_relation,
    check_qsl_chain,
    detectability_timescale,
    measure,
    verify,
)
from src.clockwork import (
    ClockMachineSpec,
    LatticeClock,
    bump_profile,
    build_vs_from_unitary,
    lattice_model,
    optimal_wavefunction,
)
from src.core import (
    DensityMatrix,
    Operator,
    UnitaryOperator,
    basis_projector,
    random_density_matrix,
    random_hermitian,
)
from src.machine import BipartiteModel
from src.scenarios import RandomClockEnsembleSpec, random_clock_machine
from src.scenarios.oscillators import embedded_oscillator_model, oscillator_model

pytestmark = pytest.mark.unit

SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ----------------------
# Fixtures & Test Data
# ----------------------
@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def negative_control():
    """Ground-state storage: dH_W = 0 while the switched beam splitter still delivers power."""
    return oscillator_model(1.0, 2.0, math.pi / 4, [0.0, 1.0], [1.0], levels=2, name="negative-control")


@pytest.fixture(scope="module")
def lattice_clock_model():
    """Small qubit clock machine on a ring: autonomous with the switch-on condition."""
    h_s = Operator(np.diag([-1.0, 1.0]), hermitian=True)
    grid, f = bump_profile(0.5, 256)
    machine = ClockMachineSpec(
        h_s=h_s,
        profile=build_vs_from_unitary(UnitaryOperator(SIGMA_X), f, h_s, grid),
        clock=optimal_wavefunction(1.0, 401),
        rho_s=basis_projector(1, 2),
        name="lattice-qubit",
    )
    return lattice_model(machine, LatticeClock.for_spec(machine, 0.05))


def qubit_clock_machine(rho_s=None, name="qubit-clock"):
    h_s = Operator(np.diag([-1.0, 1.0]), hermitian=True)
    grid, f = bump_profile(0.1, 1024)
    return ClockMachineSpec(
        h_s=h_s,
        profile=build_vs_from_unitary(UnitaryOperator(SIGMA_X), f, h_s, grid),
        clock=optimal_wavefunction(1.0, 801),
        rho_s=basis_projector(1, 2) if rho_s is None else rho_s,
        name=name,
    )


def commuting_model():
    """V = 1 (x) B with B diagonal like H_A and sigma_A: switch-on holds and nothing moves."""
    h_a = Operator(np.diag([0.0, 1.0, 2.5]), hermitian=True)
    v = np.kron(np.eye(2), np.diag([0.3, -0.2, 0.7]))
    return BipartiteModel(
        h_s=Operator(SIGMA_Z, hermitian=True),
        h_a=h_a,
        v=Operator(v, (2, 3), hermitian=True),
        rho_s=DensityMatrix.pure([1, 1]),
        sigma_a=DensityMatrix(np.diag([0.5, 0.3, 0.2])),
        tau=1.0,
        name="commuting",
    )


CHAIN_MACHINES = {
    "qubit_clock": qubit_clock_machine,
    "random_clock": lambda: random_clock_machine(RandomClockEnsembleSpec(seed=5, n_models=1), 0),
    "embedded_oscillator": lambda: embedded_oscillator_model(
        1.0, math.pi / 2, [0.0, 1.0], [1.0], 2, optimal_wavefunction(0.5, 201), 0.5, 0.05
    ),
    "commuting": commuting_model,
}



def measurement(**overrides):
    values = dict(
        name="m",
        work=1.0,
        tau=2.0,
        hbar=1.0,
        h_s_norm=1.0,
        delta_h_a=1.0,
        comm_norm=2.0,
        agent_displacement=2.0,
        system_deviation=1.0,
        condition1_ok=True,
        condition1_residual=0.0,
        autonomous=True,
        tolerance=1e-9,
    )
    values.update(overrides)
    return MachineMeasurement(**values)


# ----------------------
# 1. Bound Values
# ----------------------
def test_bounds_for_pure_qubit_agent():
    h_s = Operator(np.diag([-1.0, 1.0]), hermitian=True)
    h_a = Operator(SIGMA_Z, hermitian=True)
    plus = DensityMatrix.pure([1, 1])
    assert bound_fluctuation(h_s, plus, h_a) == pytest.approx(2.0)
    assert bound_commutator(h_s, plus, h_a) == pytest.approx(2.0)
    assert bound_fluctuation(h_s, plus, h_a, hbar=2.0) == pytest.approx(1.0)


def test_bounds_vanish_for_energy_eigenstate():
    h_s = Operator(np.diag([-1.0, 1.0]), hermitian=True)
    h_a = Operator(SIGMA_Z, hermitian=True)
    ground = basis_projector(1, 2)
    assert bound_fluctuation(h_s, ground, h_a) == pytest.approx(0.0, abs=1e-12)
    assert bound_commutator(h_s, ground, h_a) == pytest.approx(0.0, abs=1e-12)


def test_commutator_bound_never_exceeds_fluctuation_bound(rng):
    for _ in range(50):
        dim = int(rng.integers(2, 7))
        h_s = random_hermitian(rng, 3)
        h_a = random_hermitian(rng, dim)
        sigma = random_density_matrix(rng, dim, rank=int(rng.integers(1, dim + 1)))
        assert bound_commutator(h_s, sigma, h_a) <= bound_fluctuation(h_s, sigma, h_a) + 1e-10


def test_detectability_timescale():
    h_s = Operator(np.diag([-2.0, 0.5]), hermitian=True)
    assert detectability_timescale(h_s) == pytest.approx(0.25)
    assert detectability_timescale(h_s, hbar=3.0) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        detectability_timescale(Operator(np.zeros((2, 2)), hermitian=True))


# ----------------------
# 2. Commutator-Fluctuation Relation
# ----------------------
def test_relation_is_tight_for_pure_states(rng):
    for _ in range(20):
        dim = int(rng.integers(2, 9))
        h = random_hermitian(rng, dim)
        vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        report = check_commutator_fluctuation_relation(h, DensityMatrix.pure(vector))
        assert report.passed
        assert report.residual <= report.tolerance


@pytest.mark.slow
def test_relation_holds_on_thousand_random_pairs():
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        dim = int(rng.integers(2, 17))
        h = random_hermitian(rng, dim)
        sigma = random_density_matrix(rng, dim, rank=int(rng.integers(1, dim + 1)))
        report = check_commutator_fluctuation_relation(h, sigma, tol=1e-10)
        assert report.passed, report.detail


@hsettings(max_examples=50, deadline=None)
@given(seed=seeds, dim=st.integers(min_value=2, max_value=16), scale=st.floats(min_value=1e-3, max_value=1e3))
def test_relation_property(seed, dim, scale):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, dim) * scale
    sigma = random_density_matrix(rng, dim)
    assert check_commutator_fluctuation_relation(h, sigma).passed


# ----------------------
# 3. Reports
# ----------------------
def test_negative_control_is_flagged(negative_control):
    report = verify(negative_control)
    assert report.machine == "negative-control"
    assert report.power == pytest.approx(4.0 / math.pi, abs=1e-10)
    assert report.rhs_fluctuation == pytest.approx(0.0, abs=1e-12)
    assert not report.condition1_ok
    assert not report.autonomous
    assert report.expected_violation
    assert report.passed
    assert report.saturation_fluctuation is None


def test_bound_report_fields():
    report = bound_report(measurement(work=0.5, tau=2.0, h_s_norm=2.0, delta_h_a=1.0, comm_norm=1.5))
    assert report.power == pytest.approx(0.25)
    assert report.rhs_fluctuation == pytest.approx(4.0)
    assert report.rhs_commutator == pytest.approx(3.0)
    assert report.saturation_fluctuation == pytest.approx(0.0625)
    assert report.timescale_estimate == pytest.approx(0.25)
    assert report.signal_to_noise == pytest.approx(0.5)
    assert report.tau_min is None
    assert report.passed and not report.expected_violation


def test_report_identity_holds():
    report = bound_report(measurement(work=0.7, tau=1.3, h_s_norm=1.7, delta_h_a=0.9, comm_norm=1.1, hbar=0.6))
    lhs = report.tau / report.timescale_estimate * report.saturation_fluctuation
    assert lhs == pytest.approx(report.signal_to_noise, rel=1e-12)


def test_clock_reports_carry_tau_min():
    report = bound_report(measurement(delta_h_a=2.0, is_clock=True, hbar=1.5))
    assert report.tau_min == pytest.approx(math.pi * 1.5 / 2.0)


def test_autonomous_violation_fails():
    report = bound_report(measurement(work=10.0, tau=1.0))
    assert not report.passed
    assert not report.expected_violation


def test_negative_work_is_bounded_from_below():
    report = bound_report(measurement(work=-0.5, tau=2.0))
    assert report.power == pytest.approx(-0.25)
    assert report.passed
    assert -report.rhs_commutator <= report.power
    assert report.saturation_commutator == pytest.approx(0.25 / report.rhs_commutator)

    pumped = bound_report(measurement(work=-10.0, tau=1.0))
    assert pumped.power < -pumped.rhs_commutator
    assert not pumped.passed
    assert not pumped.expected_violation


def test_work_done_on_the_system_respects_both_bounds():
    # the clock lifts a ground-state qubit, so W < 0
    report = verify(qubit_clock_machine(rho_s=basis_projector(0, 2), name="lift"))
    assert report.work == pytest.approx(-2.0, abs=1e-3)
    assert report.power < 0
    assert report.passed
    assert -report.rhs_commutator - report.tolerance <= report.power
    assert -report.rhs_fluctuation - report.tolerance <= report.power



def test_measure_rejects_unknown_types():
    with pytest.raises(TypeError):
        measure(object())


def test_measure_passes_measurements_through():
    m = measurement()
    assert measure(m) is m


# ----------------------
# 4. Proof Chain
# ----------------------
def test_qsl_chain_inapplicable_without_switch_on(negative_control):
    report = check_qsl_chain(negative_control)
    assert not report.applicable
    assert not report.passed


def test_qsl_chain_localizes_broken_link():
    report = check_qsl_chain(measurement(work=3.0, h_s_norm=1.0, system_deviation=1.0))
    assert not report.passed
    assert [link.name for link in report.links if not link.passed] == ["hoelder"]


def test_qsl_chain_stationary_agent():
    report = check_qsl_chain(measurement(comm_norm=0.0, agent_displacement=0.0, system_deviation=0.0, work=0.0))
    assert report.passed
    assert report.links[0].name == "speed_limit"


def test_lattice_clock_machine_satisfies_everything(lattice_clock_model):
    report = verify(lattice_clock_model)
    assert report.condition1_ok
    assert report.autonomous
    assert report.passed
    assert abs(report.power) <= report.rhs_commutator + report.tolerance
    chain = check_qsl_chain(lattice_clock_model)
    assert chain.passed, chain.detail
    assert [link.name for link in chain.links] == ["speed_limit", "monotonicity", "hoelder"]


@pytest.mark.parametrize("kind", sorted(CHAIN_MACHINES))
def test_qsl_chain_monotonicity_across_machine_kinds(kind):
    machine = CHAIN_MACHINES[kind]()
    m = measure(machine)
    assert m.condition1_ok, kind
    chain = check_qsl_chain(machine)
    assert chain.applicable
    monotonicity = next(link for link in chain.links if link.name == "monotonicity")
    assert monotonicity.passed, monotonicity.detail
    assert m.system_deviation <= m.agent_displacement + m.tolerance


def test_qsl_chain_monotonicity_on_lattice_clock(lattice_clock_model):
    m = measure(lattice_clock_model)
    monotonicity = next(link for link in check_qsl_chain(lattice_clock_model).links if link.name == "monotonicity")
    assert monotonicity.passed
    assert m.system_deviation <= m.agent_displacement + m.tolerance
