"""Heitler-London exchange coupling for two quantum dots in unequal fields.

Two electrons sit in a quartic double-well (harmonic near each minimum at
x = +-a) with perpendicular magnetic fields B1, B2 that may differ between the
dots.  The exchange energy J is the singlet-triplet splitting of the
variational ground states built from the magnetically compressed single-dot
orbitals.

Unit conventions (documented in the README appendix):
  - inputs: tesla, nm, meV; DotParameters.omega0 in rad/ps (hbar = 1);
  - internals: dimensionless ratios b_pm = omega_pm/omega0, d = a/a0,
    Delta = (b_minus - b_plus)/(b_minus + b_plus);
  - Larmor frequency omega_L = e B / 2m in SI (B1 feeds the minus branch,
    B2 the plus branch);
  - outputs: energies in meV.

Note the two distinct field combinations in this code base: the dynamics
modules use Zeeman energies B_pm that include the g-factors, while the
Delta map here takes bare field sums/differences B_pm' = B1 +- B2 in tesla
with no g-factor.  They are never interchanged.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import constants as _const

from .specfun import bessel_i0_scaled

__all__ = [
    "HBAR_MEV_PS",
    "MU_B_MEV_PER_T",
    "ELECTRON_MASS_MEV_PS2_NM2",
    "COULOMB_MEV_NM",
    "DotParameters",
    "FieldPair",
    "ExchangeBreakdown",
    "SingularConfigurationError",
    "dot_frequencies",
    "delta_from_fields",
    "overlap_factor",
    "w_matrix_elements",
    "c_matrix_elements",
    "exchange_J",
]

# hbar in meV.ps
HBAR_MEV_PS = _const.hbar / _const.e * 1e15
# Bohr magneton in meV/T
MU_B_MEV_PER_T = _const.physical_constants["Bohr magneton in eV/T"][0] * 1e3
# bare electron mass in meV.ps^2/nm^2 (m = E/c^2 with c in nm/ps)
_C_NM_PS = _const.c * 1e-3
ELECTRON_MASS_MEV_PS2_NM2 = (
    _const.physical_constants["electron mass energy equivalent in MeV"][0]
    * 1e9
    / _C_NM_PS**2
)
# Coulomb scale e^2/(4 pi eps0) in meV.nm
COULOMB_MEV_NM = _const.e / (4.0 * math.pi * _const.epsilon_0) * 1e12


class SingularConfigurationError(ArithmeticError):
    """Overlap denominator vanished or a radicand went negative."""


@dataclass(frozen=True)
class DotParameters:
    """Double-dot material and geometry parameters.

    omega0: confinement frequency in rad/ps; a: half inter-dot distance in
    nm; kappa: dielectric constant; mass: effective mass in units of the bare
    electron mass; g1, g2: g-factors of the two dots.
    """

    omega0: float
    a: float
    kappa: float
    mass: float
    g1: float
    g2: float

    def __post_init__(self):
        for name in ("omega0", "a", "kappa", "mass"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def gaas(cls, a: float | None = None) -> "DotParameters":
        """GaAs preset: m = 0.067 m_e; hbar*omega0 = 3 meV and kappa = 13.1
        are conventional defaults (not fixed by the model), g = -0.44.
        Default spacing gives d = a/a0 = 0.7."""
        omega0 = 3.0 / HBAR_MEV_PS
        if a is None:
            m = 0.067 * ELECTRON_MASS_MEV_PS2_NM2
            a = 0.7 * math.sqrt(HBAR_MEV_PS / (m * omega0))
        return cls(omega0=omega0, a=a, kappa=13.1, mass=0.067, g1=-0.44, g2=-0.44)

    @property
    def hbar_omega0_mev(self) -> float:
        return HBAR_MEV_PS * self.omega0

    @property
    def bohr_radius_nm(self) -> float:
        """Effective Bohr radius a0 = sqrt(hbar / m omega0)."""
        m = self.mass * ELECTRON_MASS_MEV_PS2_NM2
        return math.sqrt(HBAR_MEV_PS / (m * self.omega0))

    def larmor(self, b_tesla: float) -> float:
        """omega_L = e B / 2m in rad/ps (= mu_B B / (hbar mass))."""
        return MU_B_MEV_PER_T * b_tesla / (HBAR_MEV_PS * self.mass)


@dataclass(frozen=True)
class FieldPair:
    """Magnetic fields (tesla) at dot 1 and dot 2."""

    b1: float
    b2: float

    def __post_init__(self):
        if not (math.isfinite(self.b1) and math.isfinite(self.b2)):
            raise ValueError(f"fields must be finite, got {self.b1}, {self.b2}")


@dataclass(frozen=True)
class ExchangeBreakdown:
    """Exchange energy with its constituent factors, for diagnostics."""

    J: float          # meV
    S2factor: float   # S^2 / (1 - S^4)
    Wterm: float      # meV, potential-mismatch matrix elements
    Cterm: float      # meV, Coulomb matrix elements
    delta: float
    bplus: float
    bminus: float
    d: float


def dot_frequencies(p: DotParameters, f: FieldPair) -> tuple[float, float, float]:
    """(b_minus, b_plus, d): dimensionless dot frequencies and separation.

    B1 drives the minus branch and B2 the plus branch:
    omega_pm = sqrt(omega0^2 + omega_L_pm^2), b_pm = omega_pm/omega0,
    d = a/a0.
    """
    wl_minus = p.larmor(f.b1)
    wl_plus = p.larmor(f.b2)
    bminus = math.sqrt(1.0 + (wl_minus / p.omega0) ** 2)
    bplus = math.sqrt(1.0 + (wl_plus / p.omega0) ** 2)
    return bminus, bplus, p.a / p.bohr_radius_nm


def delta_from_fields(p: DotParameters, bplus_prime: float, bminus_prime: float) -> float:
    """Field-asymmetry parameter Delta from the bare field sum/difference
    B_pm' = B1 +- B2 (tesla, no g-factor):

        Delta = B+'B-' / 2[D^2 + B+'^2 + B-'^2
                           + sqrt((D^2 + B+'^2 + B-'^2)^2 - (2 B+'B-')^2)],
        D = 2 hbar omega0 / mu_B.

    Odd in B-', zero when B-' = 0, |Delta| < 1.
    """
    d_tesla = 2.0 * p.hbar_omega0_mev / MU_B_MEV_PER_T
    s = d_tesla**2 + bplus_prime**2 + bminus_prime**2
    radicand = s**2 - (2.0 * bplus_prime * bminus_prime) ** 2
    # s^2 >= (2 B+ B-)^2 always: s >= B+^2 + B-^2 >= 2|B+ B-|
    return bplus_prime * bminus_prime / (2.0 * (s + math.sqrt(radicand)))


def _asymmetry(bminus: float, bplus: float) -> float:
    return (bminus - bplus) / (bminus + bplus)


def _compression(p: DotParameters, f: FieldPair, bminus: float, bplus: float, d: float) -> float:
    """Overlap exponent M = (2d^2/(b+ + b-)) [b- b+ + (wL+ + wL-)^2 / 4 w0^2]."""
    wl_sum = (p.larmor(f.b1) + p.larmor(f.b2)) / p.omega0
    return (2.0 * d * d / (bplus + bminus)) * (bminus * bplus + 0.25 * wl_sum**2)


def overlap_factor(m: float, delta: float) -> float:
    """S^2/(1 - S^4) = (1 - Delta^2) / (2 sinh 2M + Delta e^{-2M}(2 - Delta^3))."""
    if not m > 0.0:
        raise ValueError(f"overlap exponent M must be positive, got {m}")
    den = 2.0 * math.sinh(2.0 * m) + delta * math.exp(-2.0 * m) * (2.0 - delta**3)
    if abs(den) < 1e-300:
        raise SingularConfigurationError(
            f"overlap denominator vanished at M={m}, Delta={delta}"
        )
    return (1.0 - delta * delta) / den


def w_matrix_elements(p: DotParameters, d: float, bminus: float, bplus: float) -> float:
    """Potential-mismatch contribution <12|W|12> - <12|W|21>/S^2 in meV:

        (hbar w0/2) { 3/(2 d^2 (b-+b+)^2) [(1+D^2)/(1-D^2)^2 - 1]
                      - 3 (D^2-1)/(b-+b+) - (d^2/2)(D^4 - 6 D^2 - 3) },
        D = Delta.
    """
    delta = _asymmetry(bminus, bplus)
    if not abs(delta) < 1.0:
        raise ValueError(f"|Delta| must be < 1, got {delta}")
    d2 = delta * delta
    bsum = bminus + bplus
    bracket = (1.0 + d2) / (1.0 - d2) ** 2 - 1.0
    inner = (
        3.0 / (2.0 * d * d * bsum * bsum) * bracket
        - 3.0 * (d2 - 1.0) / bsum
        - 0.5 * d * d * (d2 * d2 - 6.0 * d2 - 3.0)
    )
    return 0.5 * p.hbar_omega0_mev * inner


def c_matrix_elements(p: DotParameters, d: float, bminus: float, bplus: float) -> float:
    """Coulomb contribution <12|C|12> - Re<12|C|21>/S^2 in meV:

        (e^2/a0 kappa) sqrt(pi bbar/2) { sqrt(1-D^2) e^{-x1} I0(x1)
                                         - e^{x2} I0(x2) },
        x1 = d^2 (1-D^2) bbar,  x2 = (d^2/2) K,
        K = bbar(1+D^2) - 1/bbar + sqrt([(1-D^2) bbar]^2 - 2(1+D^2) + 1/bbar^2),
        bbar = (b- + b+)/2.

    Evaluated through the scaled Bessel function exp(-x) I0(x); the second
    term carries the growing factor exp(2 x2) explicitly.
    """
    delta = _asymmetry(bminus, bplus)
    d2 = delta * delta
    bbar = 0.5 * (bminus + bplus)
    radicand = ((1.0 - d2) * bbar) ** 2 - 2.0 * (1.0 + d2) + 1.0 / bbar**2
    if radicand < 0.0:
        raise SingularConfigurationError(
            f"negative radicand in K at bbar={bbar}, Delta={delta}: {radicand}"
        )
    k = bbar * (1.0 + d2) - 1.0 / bbar + math.sqrt(radicand)
    x1 = d * d * (1.0 - d2) * bbar
    x2 = 0.5 * d * d * k
    scale = COULOMB_MEV_NM / (p.bohr_radius_nm * p.kappa) * math.sqrt(0.5 * math.pi * bbar)
    term1 = math.sqrt(1.0 - d2) * bessel_i0_scaled(x1)
    term2 = math.exp(2.0 * x2) * bessel_i0_scaled(x2)
    return scale * (term1 - term2)


def exchange_J(p: DotParameters, f: FieldPair) -> ExchangeBreakdown:
    """Exchange energy of the double dot:

        J = 2 S^2/(1-S^4) [ L - (hbar w0/4) (b+^2 - b-^2)(b- - b+)/(b+ b-) ],
        L = Wterm + Cterm.

    A warning is emitted when d < 0.7 or |J| > 0.1 hbar*omega0, where the
    two-orbital variational ansatz degrades.
    """
    bminus, bplus, d = dot_frequencies(p, f)
    delta = _asymmetry(bminus, bplus)
    m = _compression(p, f, bminus, bplus, d)
    s2 = overlap_factor(m, delta)
    wterm = w_matrix_elements(p, d, bminus, bplus)
    cterm = c_matrix_elements(p, d, bminus, bplus)
    mismatch = 0.25 * p.hbar_omega0_mev * (bplus**2 - bminus**2) * (bminus - bplus) / (bplus * bminus)
    j = 2.0 * s2 * (wterm + cterm - mismatch)
    if d < 0.7:
        warnings.warn(
            f"d = {d:.3f} < 0.7: two-orbital variational ansatz unreliable",
            stacklevel=2,
        )
    elif abs(j) > 0.1 * p.hbar_omega0_mev:
        warnings.warn(
            f"|J| = {abs(j):.3g} meV exceeds 0.1 hbar*omega0: "
            "two-orbital variational ansatz unreliable",
            stacklevel=2,
        )
    return ExchangeBreakdown(
        J=j, S2factor=s2, Wterm=wterm, Cterm=cterm,
        delta=delta, bplus=bplus, bminus=bminus, d=d,
    )
