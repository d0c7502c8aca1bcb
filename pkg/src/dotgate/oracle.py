"""Independent numerical propagator for validating the closed-form results.

Integrates i dU/dt = H(t) U with an adaptive embedded Runge-Kutta pair
(Dormand-Prince 5(4), scipy's RK45), evolving all columns simultaneously.
Unitarity is monitored, not enforced, so the reported defect doubles as an
error indicator; optional renormalization is off by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import hermiticity_defect, unitarity_defect

__all__ = ["IntegratorConfig", "OracleResult", "StiffnessError", "evolve_numeric"]


class StiffnessError(RuntimeError):
    """Step-size underflow or integrator failure."""


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = field(default=np.inf)
    renormalize: bool = False

    def __post_init__(self):
        for name, tol in (("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)):
            if not (0.0 < tol <= 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2], got {tol}")


@dataclass(frozen=True)
class OracleResult:
    propagator: np.ndarray
    unitarity_defect: float
    n_steps: int


def evolve_numeric(
    h: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    hermiticity_tol: float = 1e-10,
) -> OracleResult:
    """Propagator U(t1, t0) for the Hamiltonian time-function ``h``.

    ``h(t)`` may return a 2x2 or 4x4 complex matrix; it is checked for
    hermiticity at a handful of sample times and rejected if it fails.
    """
    if not t1 > t0:
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    h0 = np.asarray(h(t0), dtype=complex)
    dim = h0.shape[0]
    if h0.shape != (dim, dim) or dim not in (2, 4):
        raise ValueError(f"Hamiltonian must be 2x2 or 4x4, got {h0.shape}")
    for ts in np.linspace(t0, t1, 7):
        defect = hermiticity_defect(h(float(ts)))
        scale = max(float(np.linalg.norm(h(float(ts)))), 1.0)
        if defect > hermiticity_tol * scale:
            raise ValueError(f"Hamiltonian not Hermitian at t={ts}: defect {defect:.3e}")

    n2 = dim * dim

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        u = (y[:n2] + 1j * y[n2:]).reshape(dim, dim)
        du = -1j * (np.asarray(h(t), dtype=complex) @ u)
        return np.concatenate([du.real.ravel(), du.imag.ravel()])

    y0 = np.concatenate([np.eye(dim).ravel(), np.zeros(n2)])
    sol = solve_ivp(
        rhs,
        (t0, t1),
        y0,
        method="RK45",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        dense_output=False,
    )
    if not sol.success:
        raise StiffnessError(f"integration failed: {sol.message}")
    y = sol.y[:, -1]
    u = (y[:n2] + 1j * y[n2:]).reshape(dim, dim)
    if cfg.renormalize:
        # project back onto the unitary group via the polar decomposition
        w, _, vh = np.linalg.svd(u)
        u = w @ vh
    return OracleResult(u, unitarity_defect(u), int(sol.t.size))
