"""
Commuting interactions exchange no work.

If [H_S + H_A, V] = 0 and the agent satisfies the switch-on condition, the
interaction never acts: the joint state stays rho_S(t) (x) sigma_A(t). The
scenario builds such a machine on a small lattice clock, V = lambda |1><1| (x)
|k><k| with the clock state orthogonal to the momentum mode k, then breaks the
commutation with a sigma_x term on the mode the clock occupies most.
"""

import numpy as np

from ..bounds.power import verify
from ..clockwork.lattice import LatticeClock
from ..config.settings import settings
from ..core.operators import DensityMatrix, Operator, basis_projector
from ..machine.conditions import check_condition1, check_conservation_triviality
from ..machine.dynamics import mean_work
from ..machine.model import BipartiteModel
from ..shared_models import ScenarioOutcome
from .outcome import build_outcome, renamed, threshold_check
from .specs import CommutingTrivialitySpec


def _mode_projector(lattice: LatticeClock, mode: int) -> np.ndarray:
    vector = lattice.modes[:, mode]
    return np.outer(vector, vector.conj())


def commuting_triviality(spec: CommutingTrivialitySpec) -> ScenarioOutcome:
    rng = np.random.default_rng(spec.seed)
    hbar = spec.action
    lattice = LatticeClock(
        sites=spec.sites,
        dx=spec.dx,
        origin=-(spec.sites - 1) / 2 * spec.dx,
        nu=settings.clock.nu,
        hbar=hbar,
    )

    mode = int(rng.integers(spec.sites))
    chi = rng.standard_normal(spec.sites) + 1j * rng.standard_normal(spec.sites)
    plane = lattice.modes[:, mode]
    chi = chi - plane * (plane.conj() @ chi)
    chi = chi / np.linalg.norm(chi)
    overlaps = np.abs(lattice.modes.conj().T @ chi) ** 2
    occupied = int(np.argmax(overlaps))

    h_s = Operator(np.diag([-spec.C, spec.C]), hermitian=True)
    excited = basis_projector(1, 2)
    sigma = DensityMatrix.pure(chi, (spec.sites,))
    dims = (2, spec.sites)
    tol = spec.tol("triviality", 1e-10)

    def machine(v: np.ndarray, name: str) -> BipartiteModel:
        return BipartiteModel(
            h_s=h_s,
            h_a=lattice.hamiltonian,
            v=Operator(v, dims, hermitian=True),
            rho_s=excited,
            sigma_a=sigma,
            tau=spec.tau,
            hbar=hbar,
            name=name,
            tolerance=tol,
        )

    commuting = spec.strength * np.kron(excited.entries, _mode_projector(lattice, mode))
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    kick = spec.perturbation * np.kron(sigma_x, _mode_projector(lattice, occupied))

    model = machine(commuting, spec.label)
    free = machine(np.zeros((2 * spec.sites, 2 * spec.sites)), f"{spec.label}[V=0]")
    perturbed = machine(commuting + kick, f"{spec.label}[perturbed]")

    work = mean_work(model)
    perturbed_work = mean_work(perturbed)
    broken = check_conservation_triviality(perturbed)
    threshold = spec.tol("perturbed_work", 1e-4)

    checks = [
        check_condition1(model),
        check_conservation_triviality(model),
        threshold_check("zero_work", abs(work), tol, f"W = {work:.3e}"),
        renamed(check_conservation_triviality(free), "zero_interaction_triviality"),
        threshold_check(
            "perturbation_breaks_commutation",
            0.0 if not broken.applicable else 1.0,
            0.0,
            broken.detail,
        ),
        threshold_check(
            "perturbed_work",
            threshold - abs(perturbed_work),
            0.0,
            f"|W| = {abs(perturbed_work):.6g} must exceed {threshold:g}",
        ),
    ]
    figures = {
        "work": work,
        "perturbed_work": perturbed_work,
        "perturbed_mode_population": float(overlaps[occupied]),
    }
    return build_outcome(spec, checks, [verify(model)], autonomous=True, figures=figures)
