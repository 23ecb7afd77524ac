"""
Self-contained bipartite machine: system, agent and a time-independent
interaction on the joint space ordered (system, agent).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..core.operators import DensityMatrix, Operator, identity, require_hermitian, tensor


@dataclass(frozen=True)
class ConditionWindow:
    """Finite sampling of the times a structural condition is verified at.

    `span` is the length T of the window [-T, 0] (defaults to tau). When
    `step` is set, samples are snapped to integer multiples of it, which keeps
    lattice clocks at translation-exact times.
    """

    span: Optional[float] = None
    samples: int = field(default_factory=lambda: settings.bounds.condition_samples)
    step: Optional[float] = None

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("Condition window needs at least one sample")
        if self.span is not None and self.span <= 0:
            raise ValueError("Condition window span must be positive")
        if self.step is not None and self.step <= 0:
            raise ValueError("Condition window step must be positive")

    def past_times(self, tau: float) -> np.ndarray:
        """Sample times in [-T, 0], ascending, always including 0."""
        return -self._offsets(self.span if self.span is not None else tau)[::-1]

    def interior_times(self, tau: float) -> np.ndarray:
        """Sample times in (0, tau]."""
        offsets = self._offsets(tau)
        return offsets[offsets > 0]

    def future_times(self, tau: float, span: Optional[float] = None) -> np.ndarray:
        """Sample times in [tau, tau + T]."""
        return tau + self._offsets(span if span is not None else tau)

    def _offsets(self, length: float) -> np.ndarray:
        if self.step is None:
            return np.linspace(0.0, length, self.samples) if self.samples > 1 else np.array([0.0])
        n_steps = int(np.floor(length / self.step + 1e-9))
        indices = np.unique(np.round(np.linspace(0, n_steps, min(self.samples, n_steps + 1))).astype(int))
        return indices * self.step


@dataclass(frozen=True, eq=False)
class BipartiteModel:
    """The tuple (H_S, H_A, V, rho_S, sigma_A, tau, hbar) of one machine instance."""

    h_s: Operator
    h_a: Operator
    v: Operator
    rho_s: DensityMatrix
    sigma_a: DensityMatrix
    tau: float
    hbar: float = 1.0
    name: str = "machine"
    autonomous: bool = True
    window: ConditionWindow = field(default_factory=ConditionWindow)
    tolerance: float = field(default_factory=lambda: settings.bounds.semi_analytic_tol)
    lattice_dx: Optional[float] = None

    def __post_init__(self) -> None:
        for op in (self.h_s, self.h_a, self.v):
            require_hermitian(op)
        d_s, d_a = self.h_s.side, self.h_a.side
        if self.v.side != d_s * d_a:
            raise ValueError(f"Interaction side {self.v.side} does not match {d_s} x {d_a}")
        if self.rho_s.side != d_s or self.sigma_a.side != d_a:
            raise ValueError("Initial state dimensions do not match the Hamiltonians")
        if not self.tau > 0:
            raise ValueError(f"Interaction time tau must be positive, got {self.tau}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.h_s.side, self.h_a.side)

    @cached_property
    def h_free(self) -> Operator:
        """H_0 = H_S (x) 1 + 1 (x) H_A."""
        d_s, d_a = self.dims
        return Operator(
            tensor(self.h_s, identity((d_a,))).entries + tensor(identity((d_s,)), self.h_a).entries,
            self.dims,
            hermitian=True,
        )

    @cached_property
    def h_total(self) -> Operator:
        """H = H_0 + V."""
        return Operator(self.h_free.entries + self.v.entries, self.dims, hermitian=True)

    @cached_property
    def initial_state(self) -> DensityMatrix:
        return DensityMatrix(tensor(self.rho_s, self.sigma_a).entries, self.dims)

    @property
    def interaction(self) -> Operator:
        return Operator(self.v.entries, self.dims, hermitian=True)
