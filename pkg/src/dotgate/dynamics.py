"""Hamiltonians, pulse families and closed-form propagators.

Units: hbar = 1, energies in rad/ps, times in ps.  All magnetic-field
quantities entering the dynamics (bplus, bminus) are Zeeman energies, i.e.
mu_B * g * B already applied.

The four-level problem with parallel z-axis fields reduces to a two-level
problem for the middle spinor components driven by the effective field
K(t) = (J(t), 0, B_minus(t)); the outer components evolve by pure phases.
``lift_two_level`` reassembles the full 4x4 propagator

    R(t) = exp(-(i/2) [ (Sigma3 + rho3) Gamma(t) + Sigma3 rho3 Phi(t) ]) M(u)

where Gamma = int B_plus, Phi = int J, and M embeds the two-level propagator
u in the middle block.  The phase prefactor supplies the exp(+i Phi/2) factor
on the middle block, so the outer components come out as
exp(-i int(J/2 +- B_plus)) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .algebra import (
    IDENTITY2,
    IDENTITY4,
    SIGMA,
    require_unitary,
    sigma_dot_rho,
    swap_operator,
    unitarity_defect,
)

__all__ = [
    "ConstraintError",
    "EffectiveField",
    "EvolutionResult",
    "FreePulse",
    "ConstantPulse",
    "ProportionalPulse",
    "SechPulse",
    "QVectorPath",
    "SampledPulse",
    "build_hamiltonian",
    "build_parallel_hamiltonian",
    "free_evolution",
    "effective_field",
    "lift_two_level",
    "hamiltonian_function",
    "two_level_hamiltonian_function",
    "propagator",
    "swap_probability",
    "sech_two_level_propagator",
    "sech_adiabatic_limit",
    "load_pulse_config",
]


class ConstraintError(ValueError):
    """A q-vector trajectory violates the planar-field constraint."""


# ---------------------------------------------------------------------------
# Hamiltonians


def build_hamiltonian(g: np.ndarray, f: np.ndarray, j: float) -> np.ndarray:
    """H = rho.G + Sigma.F + (J/2) Sigma.rho for two coupled spins."""
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    h = 0.5 * j * sigma_dot_rho()
    for i in range(3):
        h = h + g[i] * np.kron(SIGMA[i], IDENTITY2) + f[i] * np.kron(IDENTITY2, SIGMA[i])
    return h


def build_parallel_hamiltonian(bplus: float, bminus: float, j: float) -> np.ndarray:
    """Parallel z-axis fields expressed through the sum/difference Zeeman
    energies: G3 = (bplus + bminus)/2, F3 = (bplus - bminus)/2."""
    g = np.array([0.0, 0.0, 0.5 * (bplus + bminus)])
    f = np.array([0.0, 0.0, 0.5 * (bplus - bminus)])
    return build_hamiltonian(g, f, j)


def free_evolution(phi: float) -> np.ndarray:
    """Propagator for pure Heisenberg coupling, Phi = int J dt:
    exp(i Phi/2) [I cos(Phi) - i A sin(Phi)].  Phi = pi/4 is sqrt-swap."""
    a = swap_operator()
    return np.exp(0.5j * phi) * (math.cos(phi) * IDENTITY4 - 1j * math.sin(phi) * a)


def lift_two_level(u: np.ndarray, gamma: float, phi: float) -> np.ndarray:
    """Reassemble the 4x4 propagator from the two-level propagator ``u`` of
    the effective field and the accumulated phases Gamma, Phi."""
    u = np.asarray(u, dtype=complex)
    require_unitary(u, name="two-level propagator")
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = np.exp(-1j * (gamma + 0.5 * phi))
    r[3, 3] = np.exp(1j * (gamma - 0.5 * phi))
    r[1:3, 1:3] = np.exp(0.5j * phi) * u
    return r


def swap_probability(lam: float, omega: float) -> float:
    """Up-down <-> down-up transition probability of the proportional
    family: sin^2(lambda) sin^2(omega)."""
    return (math.sin(lam) * math.sin(omega)) ** 2


# ---------------------------------------------------------------------------
# Two-level closed forms


def _axis_propagator(kvec: np.ndarray, angle: float) -> np.ndarray:
    """exp(-i (sigma . khat) angle) for a constant-direction effective field."""
    k = np.asarray(kvec, dtype=float)
    norm = float(np.linalg.norm(k))
    if norm == 0.0:
        return IDENTITY2.copy()
    khat = k / norm
    sk = khat[0] * SIGMA[0] + khat[1] * SIGMA[1] + khat[2] * SIGMA[2]
    return math.cos(angle) * IDENTITY2 - 1j * math.sin(angle) * sk


def _sech_z(omega: float, t: float) -> float:
    # z(t) = (1 - tanh(omega t))/2 evaluated without cancellation at large t
    x = 2.0 * omega * t
    if x > 700.0:
        raise ValueError(f"sech propagator time out of range: omega*t = {omega * t}")
    e = math.exp(-x)
    return e / (1.0 + e)


def _sech_g(z: float, a: float, c: float, omega: float) -> tuple[complex, complex]:
    nu = -0.5j * c / omega
    gam = 0.5 - 2.0 * nu
    lam = abs(a) / omega
    f1 = specfun.gauss_2f1(specfun.HyperParams(lam, -lam, gam, z))
    f2 = specfun.gauss_2f1(specfun.HyperParams(1.0 + lam, 1.0 - lam, gam + 1.0, z))
    zc = complex(z)
    g1 = (2.0 * c - 1j * omega) * zc ** (-nu) * (1.0 - zc) ** nu * f1
    g2 = 2.0 * a * zc ** (0.5 - nu) * (1.0 - zc) ** (nu + 0.5) * f2
    return g1, g2


def sech_two_level_propagator(a: float, c: float, omega: float, t: float) -> np.ndarray:
    """Exact two-level propagator for K = (a sech(omega t), 0, c), t >= 0.

    Built from the hypergeometric pair G1, G2; the t = 0 normalization makes
    u(0) = I exactly.
    """
    if t < 0.0:
        raise ValueError("sech pulse starts at t = 0; negative times unsupported")
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    g1, g2 = _sech_g(_sech_z(omega, t), a, c, omega)
    g10, g20 = _sech_g(0.5, a, c, omega)
    norm = abs(g10) ** 2 + abs(g20) ** 2
    left = np.array([[g1, -np.conj(g2)], [g2, np.conj(g1)]])
    right = np.array([[np.conj(g10), np.conj(g20)], [-g20, g10]])
    return (left @ right) / norm


def sech_adiabatic_limit(c: float, t: float) -> np.ndarray:
    """Large omega*t form of the sech propagator once G2(1/2) = 0:
    exp(-i sigma3 t c)."""
    return np.array([[np.exp(-1j * c * t), 0.0], [0.0, np.exp(1j * c * t)]])


# ---------------------------------------------------------------------------
# Pulse families


@dataclass(frozen=True)
class EffectiveField:
    """Effective two-level driving field K(t) = (J(t), 0, B_minus(t))."""

    k: Callable[[float], np.ndarray]

    def __call__(self, t: float) -> np.ndarray:
        return self.k(t)


@dataclass(frozen=True)
class EvolutionResult:
    propagator: np.ndarray
    gamma: float
    phi: float
    unitarity_defect: float
    oracle_deviation: float | None = None


@dataclass(frozen=True)
class FreePulse:
    """No external fields; only the Heisenberg coupling J(t)."""

    j: Callable[[float], float]
    j_integral: Callable[[float], float]
    t_end: float
    family = "free"

    @classmethod
    def constant(cls, j: float, t_end: float) -> "FreePulse":
        return cls(j=lambda t: j, j_integral=lambda t: j * t, t_end=t_end)

    def bminus(self, t: float) -> float:
        return 0.0

    def bplus(self, t: float) -> float:
        return 0.0

    def phases(self, t: float) -> tuple[float, float]:
        return 0.0, self.j_integral(t)


@dataclass(frozen=True)
class ConstantPulse:
    """Constant J, B_minus and B_plus over [0, t_end]."""

    j: float
    bminus_level: float
    bplus_level: float
    t_end: float
    family = "constant"

    def bminus(self, t: float) -> float:
        return self.bminus_level

    def bplus(self, t: float) -> float:
        return self.bplus_level

    def j_value(self, t: float) -> float:
        return self.j

    def phases(self, t: float) -> tuple[float, float]:
        return self.bplus_level * t, self.j * t


@dataclass(frozen=True)
class ProportionalPulse:
    """B_minus proportional to J: J = q(t) sin(lambda), B_minus = q(t) cos(lambda)."""

    lam: float
    q: Callable[[float], float]
    q_integral: Callable[[float], float]
    bplus_level: float
    t_end: float
    family = "proportional"

    @classmethod
    def constant(cls, lam: float, q0: float, bplus: float, t_end: float) -> "ProportionalPulse":
        return cls(lam=lam, q=lambda t: q0, q_integral=lambda t: q0 * t,
                   bplus_level=bplus, t_end=t_end)

    def j(self, t: float) -> float:
        return self.q(t) * math.sin(self.lam)

    def bminus(self, t: float) -> float:
        return self.q(t) * math.cos(self.lam)

    def bplus(self, t: float) -> float:
        return self.bplus_level

    def omega(self, t: float) -> float:
        return self.q_integral(t)

    def phases(self, t: float) -> tuple[float, float]:
        return self.bplus_level * t, self.q_integral(t) * math.sin(self.lam)


@dataclass(frozen=True)
class SechPulse:
    """Adiabatic interaction pulse J = a sech(omega t) with constant B_minus = c."""

    a: float
    c: float
    omega: float
    bplus_level: float
    t_end: float
    family = "sech"

    def j(self, t: float) -> float:
        return self.a / math.cosh(min(self.omega * t, 350.0))

    def bminus(self, t: float) -> float:
        return self.c

    def bplus(self, t: float) -> float:
        return self.bplus_level

    def phases(self, t: float) -> tuple[float, float]:
        # int_0^t a sech = (a/omega) gd(omega t), gd(x) = 2 atan(e^x) - pi/2
        x = self.omega * t
        gd = 2.0 * math.atan(math.exp(min(x, 700.0))) - 0.5 * math.pi
        return self.bplus_level * t, (self.a / self.omega) * gd


@dataclass(frozen=True)
class QVectorPath:
    """Effective field generated by a real three-vector path q(t):

        K = (qdot + q x qdot) / (1 + q^2)

    Admissible paths satisfy qdot_2 = q_1 qdot_3 - q_3 qdot_1 (K_2 = 0).
    The propagator follows from the path alone:

        u(t) = (1 + q.q0 - i sigma.p) / sqrt((1 + q^2)(1 + q0^2)),
        p = q - q0 + q0 x q.
    """

    q: Callable[[float], np.ndarray]
    qdot: Callable[[float], np.ndarray]
    t_end: float
    bplus_level: float = 0.0
    constraint_tol: float = 1e-8
    family = "qvector"

    def field(self, t: float) -> np.ndarray:
        q = np.asarray(self.q(t), dtype=float)
        qd = np.asarray(self.qdot(t), dtype=float)
        return (qd + np.cross(q, qd)) / (1.0 + float(q @ q))

    def j(self, t: float) -> float:
        return float(self.field(t)[0])

    def bminus(self, t: float) -> float:
        return float(self.field(t)[2])

    def bplus(self, t: float) -> float:
        return self.bplus_level

    def constraint_residual(self, t: float) -> float:
        q = np.asarray(self.q(t), dtype=float)
        qd = np.asarray(self.qdot(t), dtype=float)
        return abs(qd[1] - (q[0] * qd[2] - q[2] * qd[0]))

    def validate(self, n_samples: int = 101) -> None:
        residuals = [self.constraint_residual(float(t))
                     for t in np.linspace(0.0, self.t_end, n_samples)]
        worst = max(residuals)
        if worst > self.constraint_tol:
            raise ConstraintError(
                f"q-path violates qdot_2 = q_1 qdot_3 - q_3 qdot_1: "
                f"max residual {worst:.3e} > {self.constraint_tol:.1e}"
            )

    def two_level_propagator(self, t: float) -> np.ndarray:
        q0 = np.asarray(self.q(0.0), dtype=float)
        q = np.asarray(self.q(t), dtype=float)
        p = q - q0 + np.cross(q0, q)
        sp = p[0] * SIGMA[0] + p[1] * SIGMA[1] + p[2] * SIGMA[2]
        num = (1.0 + float(q @ q0)) * IDENTITY2 - 1j * sp
        den = math.sqrt((1.0 + float(q @ q)) * (1.0 + float(q0 @ q0)))
        return num / den


@dataclass(frozen=True)
class SampledPulse:
    """Tabulated controls with cubic interpolation; no closed-form propagator."""

    times: np.ndarray
    j_samples: np.ndarray
    bminus_samples: np.ndarray
    bplus_samples: np.ndarray
    family = "sampled"

    def __post_init__(self):
        from scipy.interpolate import CubicSpline

        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 4 or np.any(np.diff(t) <= 0):
            raise ValueError("need at least 4 strictly increasing sample times")
        object.__setattr__(self, "_j_spline", CubicSpline(t, self.j_samples))
        object.__setattr__(self, "_bm_spline", CubicSpline(t, self.bminus_samples))
        object.__setattr__(self, "_bp_spline", CubicSpline(t, self.bplus_samples))

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def j(self, t: float) -> float:
        return float(self._j_spline(t))

    def bminus(self, t: float) -> float:
        return float(self._bm_spline(t))

    def bplus(self, t: float) -> float:
        return float(self._bp_spline(t))

    def phases(self, t: float) -> tuple[float, float]:
        return (float(self._bp_spline.antiderivative()(t)),
                float(self._j_spline.antiderivative()(t)))


Pulse = FreePulse | ConstantPulse | ProportionalPulse | SechPulse | QVectorPath | SampledPulse


def effective_field(pulse: Pulse) -> EffectiveField:
    """K(t) = (J(t), 0, B_minus(t)) for any pulse family."""
    if isinstance(pulse, QVectorPath):
        pulse.validate()
        return EffectiveField(pulse.field)
    if isinstance(pulse, FreePulse):
        return EffectiveField(lambda t: np.array([pulse.j(t), 0.0, 0.0]))
    return EffectiveField(lambda t: np.array([_j_of(pulse, t), 0.0, pulse.bminus(t)]))


def _j_of(pulse: Pulse, t: float) -> float:
    if isinstance(pulse, ConstantPulse):
        return pulse.j
    return pulse.j(t)


def hamiltonian_function(pulse: Pulse) -> Callable[[float], np.ndarray]:
    """Full 4x4 Hamiltonian time-function, for the numerical oracle."""
    return lambda t: build_parallel_hamiltonian(pulse.bplus(t), pulse.bminus(t), _j_of(pulse, t))


def two_level_hamiltonian_function(pulse: Pulse) -> Callable[[float], np.ndarray]:
    """Effective two-level Hamiltonian sigma . K(t), for the numerical oracle."""
    field = effective_field(pulse)

    def h(t: float) -> np.ndarray:
        k = field(t)
        return k[0] * SIGMA[0] + k[1] * SIGMA[1] + k[2] * SIGMA[2]

    return h


def _two_level_closed_form(pulse: Pulse, t: float) -> np.ndarray:
    if isinstance(pulse, ConstantPulse):
        k = np.array([pulse.j, 0.0, pulse.bminus_level])
        return _axis_propagator(k, float(np.linalg.norm(k)) * t)
    if isinstance(pulse, ProportionalPulse):
        axis = np.array([math.sin(pulse.lam), 0.0, math.cos(pulse.lam)])
        return _axis_propagator(axis, pulse.q_integral(t))
    if isinstance(pulse, FreePulse):
        return _axis_propagator(np.array([1.0, 0.0, 0.0]), pulse.j_integral(t))
    if isinstance(pulse, SechPulse):
        return sech_two_level_propagator(pulse.a, pulse.c, pulse.omega, t)
    if isinstance(pulse, QVectorPath):
        pulse.validate()
        return pulse.two_level_propagator(t)
    raise ValueError(f"no closed-form propagator for the {pulse.family!r} family")


def propagator(pulse: Pulse, t: float | None = None) -> EvolutionResult:
    """Closed-form 4x4 propagator of a pulse at time ``t`` (default t_end).

    Sampled pulses have no closed form; integrate them with the oracle
    module instead.
    """
    if t is None:
        t = pulse.t_end
    u2 = _two_level_closed_form(pulse, t)
    if isinstance(pulse, QVectorPath):
        gamma = pulse.bplus_level * t
        # Phi from the first field component requires quadrature only for
        # q-paths; all other families carry closed-form phases.
        from scipy.integrate import quad

        phi = quad(pulse.j, 0.0, t, limit=200)[0]
    else:
        gamma, phi = pulse.phases(t)
    r = lift_two_level(u2, gamma, phi)
    return EvolutionResult(r, gamma, phi, unitarity_defect(r))


# ---------------------------------------------------------------------------
# Pulse definition files (key = value lines, '#' comments)


def _parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().lower()] = value.strip()
    return out


def _need(kv: dict[str, str], *keys: str) -> list[float]:
    vals = []
    for k in keys:
        if k not in kv:
            raise ValueError(f"missing required key {k!r}")
        vals.append(float(kv[k]))
    return vals


def load_pulse_config(text: str, base_dir: str = ".") -> Pulse:
    """Build a pulse from the plain-text key/value grammar.

    Families and keys:
      family = free          j, t_end
      family = constant      j, bminus, bplus, t_end
      family = proportional  lambda, q, bplus, t_end           (constant q)
      family = sech          a, c, omega, bplus, t_end
      family = sampled       samples = <csv with t,j,bminus,bplus columns>
    """
    kv = _parse_kv(text)
    family = kv.get("family")
    if family is None:
        raise ValueError("missing required key 'family'")
    family = family.lower()
    if family == "free":
        j, t_end = _need(kv, "j", "t_end")
        return FreePulse.constant(j, t_end)
    if family == "constant":
        j, bminus, bplus, t_end = _need(kv, "j", "bminus", "bplus", "t_end")
        return ConstantPulse(j, bminus, bplus, t_end)
    if family == "proportional":
        lam, q0, bplus, t_end = _need(kv, "lambda", "q", "bplus", "t_end")
        return ProportionalPulse.constant(lam, q0, bplus, t_end)
    if family == "sech":
        a, c, omega, bplus, t_end = _need(kv, "a", "c", "omega", "bplus", "t_end")
        return SechPulse(a, c, omega, bplus, t_end)
    if family == "sampled":
        if "samples" not in kv:
            raise ValueError("sampled family requires 'samples = <csv path>'")
        import os

        path = os.path.join(base_dir, kv["samples"])
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return SampledPulse(data[:, 0], data[:, 1], data[:, 2], data[:, 3])
    raise ValueError(f"unknown pulse family {family!r}")
