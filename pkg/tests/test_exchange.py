"""Exchange-coupling tests: independent quadrature oracle, equal-field
reduction, golden regression curve, and symmetry properties."""

import math
import os
import warnings

import numpy as np
import pytest
from scipy import constants as si
from scipy.integrate import dblquad

from dotgate.exchange import (
    COULOMB_MEV_NM,
    HBAR_MEV_PS,
    MU_B_MEV_PER_T,
    DotParameters,
    ExchangeBreakdown,
    FieldPair,
    SingularConfigurationError,
    _compression,
    c_matrix_elements,
    delta_from_fields,
    dot_frequencies,
    exchange_J,
    overlap_factor,
    w_matrix_elements,
)

GOLDEN = os.path.join(os.path.dirname(__file__), "data", "equal_field_golden.csv")


def quiet_exchange(p, f):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return exchange_J(p, f)


class TestDotFrequencies:
    def test_zero_field(self):
        p = DotParameters.gaas()
        bminus, bplus, d = dot_frequencies(p, FieldPair(0.0, 0.0))
        assert bminus == 1.0 and bplus == 1.0
        assert d == pytest.approx(0.7, abs=1e-12)

    def test_field_swap_exchanges_branches(self):
        p = DotParameters.gaas()
        bm1, bp1, _ = dot_frequencies(p, FieldPair(1.0, 3.0))
        bm2, bp2, _ = dot_frequencies(p, FieldPair(3.0, 1.0))
        assert bm1 == bp2 and bp1 == bm2

    def test_bohr_radius_against_si(self):
        # independent SI evaluation of a0 = sqrt(hbar / m omega0)
        p = DotParameters.gaas()
        hw0_joule = 3.0e-3 * si.e
        m_kg = 0.067 * si.m_e
        a0_m = si.hbar / math.sqrt(m_kg * hw0_joule)
        assert p.bohr_radius_nm == pytest.approx(a0_m * 1e9, rel=1e-9)

    def test_larmor_against_si(self):
        # omega_L = e B / 2m evaluated directly in SI, converted to rad/ps
        p = DotParameters.gaas()
        want = si.e * 1.0 / (2.0 * 0.067 * si.m_e) * 1e-12
        assert p.larmor(1.0) == pytest.approx(want, rel=1e-9)

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            DotParameters(omega0=-1.0, a=10.0, kappa=13.0, mass=0.067, g1=0, g2=0)
        with pytest.raises(ValueError):
            FieldPair(float("inf"), 0.0)


class TestDelta:
    def test_zero_difference(self):
        p = DotParameters.gaas()
        for bp in (0.0, 1.0, 4.0):
            assert delta_from_fields(p, bp, 0.0) == 0.0

    def test_odd_in_difference(self):
        p = DotParameters.gaas()
        for bm in (0.01, 0.5, 2.0):
            assert delta_from_fields(p, 3.0, -bm) == -delta_from_fields(p, 3.0, bm)

    def test_typical_gaas_magnitude(self):
        # hbar omega0 / mu_B is about 50 T for this preset, so at
        # B+' = 4 T, B-' = 0.02 T the first denominator term dominates and
        # Delta ~ B+'B-'/(4 (2 hbar omega0/mu_B)^2) ~ 1e-6
        p = DotParameters.gaas()
        scale_t = p.hbar_omega0_mev / MU_B_MEV_PER_T
        assert 45.0 < scale_t < 60.0
        delta = delta_from_fields(p, 4.0, 0.02)
        d_sq = (2.0 * scale_t) ** 2
        assert d_sq > 100.0 * (4.0**2 + 0.02**2)  # first term dominates
        assert delta == pytest.approx(4.0 * 0.02 / (4.0 * d_sq), rel=1e-2)
        assert 1e-6 < delta < 1e-5

    def test_bounded(self):
        p = DotParameters.gaas()
        for bp, bm in ((100.0, 100.0), (500.0, 499.0), (1.0, 1.0)):
            assert abs(delta_from_fields(p, bp, bm)) < 1.0


class TestOverlapFactor:
    def test_symmetric_case(self):
        m = 0.8
        assert overlap_factor(m, 0.0) == pytest.approx(1.0 / (2.0 * math.sinh(2 * m)))

    def test_exponential_decay_with_separation(self):
        p0 = DotParameters.gaas()
        f = FieldPair(1.0, 1.0)
        logs = []
        for d_target in (3.0, 4.0, 5.0):
            a = d_target * p0.bohr_radius_nm
            p = DotParameters(p0.omega0, a, p0.kappa, p0.mass, p0.g1, p0.g2)
            bminus, bplus, d = dot_frequencies(p, f)
            m = _compression(p, f, bminus, bplus, d)
            logs.append(math.log(overlap_factor(m, 0.0)))
        # log-linear in d^2: second differences of log vs d^2 are small
        slopes = [(logs[i + 1] - logs[i]) / ((i + 4) ** 2 - (i + 3) ** 2)
                  for i in range(2)]
        assert slopes[0] < 0.0
        assert abs(slopes[1] - slopes[0]) < 0.05 * abs(slopes[0])

    def test_equal_field_reduction(self):
        # at B1 = B2 the exponent reduces to the single-field form
        # M = d^2 (2b - 1/b)
        p = DotParameters.gaas()
        for b_field in (0.5, 2.0, 7.0):
            f = FieldPair(b_field, b_field)
            bminus, bplus, d = dot_frequencies(p, f)
            assert bminus == bplus
            want = d * d * (2.0 * bminus - 1.0 / bminus)
            assert _compression(p, f, bminus, bplus, d) == pytest.approx(want, rel=1e-12)

    def test_requires_positive_exponent(self):
        with pytest.raises(ValueError):
            overlap_factor(0.0, 0.1)


class TestWMatrixElements:
    def test_symmetric_substitution(self):
        # Delta = 0, b- = b+ = b gives (hbar w0/2)(3/(2b) + 3 d^2/2)
        # after the bracket term vanishes
        p = DotParameters.gaas()
        for b in (1.0, 1.3, 2.4):
            d = 0.9
            got = w_matrix_elements(p, d, b, b)
            want = 0.5 * p.hbar_omega0_mev * (1.5 / b + 1.5 * d * d)
            assert got == pytest.approx(want, rel=1e-13)

    def test_even_in_asymmetry(self):
        p = DotParameters.gaas()
        assert w_matrix_elements(p, 0.8, 1.7, 1.2) == w_matrix_elements(p, 0.8, 1.2, 1.7)

    def test_regrouped_reimplementation(self):
        # same expression with the bracket expanded and terms regrouped
        p = DotParameters.gaas()
        rng = np.random.default_rng(8)
        for _ in range(40):
            d = float(rng.uniform(0.3, 2.5))
            bminus = float(rng.uniform(1.0, 4.0))
            bplus = float(rng.uniform(1.0, 4.0))
            delta = (bminus - bplus) / (bminus + bplus)
            s = bminus + bplus
            d2 = delta * delta
            regrouped = 0.5 * p.hbar_omega0_mev * (
                3.0 * (1.0 + d2) / (2.0 * d * d * s * s * (1.0 - d2) ** 2)
                - 3.0 / (2.0 * d * d * s * s)
                + 3.0 / s
                - 3.0 * d2 / s
                - 0.5 * d * d * d2 * d2
                + 3.0 * d * d * d2
                + 1.5 * d * d
            )
            got = w_matrix_elements(p, d, bminus, bplus)
            assert got == pytest.approx(regrouped, rel=1e-12)


class TestCMatrixElements:
    def test_vanishes_at_zero_separation(self):
        p = DotParameters.gaas()
        assert c_matrix_elements(p, 1e-12, 1.0, 1.0) == pytest.approx(0.0, abs=1e-10)

    def test_even_in_asymmetry(self):
        p = DotParameters.gaas()
        assert c_matrix_elements(p, 0.7, 1.9, 1.1) == c_matrix_elements(p, 0.7, 1.1, 1.9)

    def test_negative_radicand_rejected(self):
        # only reachable with non-physical b < 1 on one branch
        p = DotParameters.gaas()
        with pytest.raises(SingularConfigurationError):
            c_matrix_elements(p, 0.7, 0.5, 2.0)

    def test_radicand_nonnegative_on_physical_domain(self):
        # the radicand factors as (4/S^2)(b-^2 - 1)(b+^2 - 1) >= 0 for b >= 1
        rng = np.random.default_rng(9)
        p = DotParameters.gaas()
        for _ in range(50):
            bminus = float(rng.uniform(1.0, 6.0))
            bplus = float(rng.uniform(1.0, 6.0))
            c_matrix_elements(p, 0.7, bminus, bplus)  # must not raise


class TestQuadratureOracle:
    def test_gaas_zero_field_point(self):
        """All pieces of J at B = 0, d = 0.7 against direct 2-D quadrature
        of the orbital integrals (dimensionless units)."""
        p = DotParameters.gaas()
        breakdown = quiet_exchange(p, FieldPair(0.0, 0.0))
        d = breakdown.d
        coulomb_scale = COULOMB_MEV_NM / (p.bohr_radius_nm * p.kappa)

        # Coulomb direct term: <1/|u|> with u = r1 - r2 Gaussian-distributed
        # around (-2d, 0) with unit variance per axis; the polar Jacobian
        # cancels the 1/|u| singularity.
        def integrand(r, th):
            ux, uy = r * math.cos(th), r * math.sin(th)
            return math.exp(-(((ux + 2 * d) ** 2) + uy**2) / 2) / (2 * math.pi)

        direct, _ = dblquad(integrand, 0, 2 * math.pi, 0, 30)
        # exchange term: the cross density is a Gaussian at the origin, so
        # <1/|u|>_cross / S^2 = sqrt(pi/2) analytically
        c_quad = coulomb_scale * (direct - math.sqrt(math.pi / 2))
        assert breakdown.Cterm == pytest.approx(c_quad, rel=1e-2)
        assert breakdown.Cterm == pytest.approx(c_quad, rel=1e-10)

        # potential-mismatch terms by quadrature
        def v(x, y):
            return 0.5 * ((x * x - d * d) ** 2 / (4 * d * d) + y * y)

        def vm(x, y):
            return 0.5 * ((x + d) ** 2 + y * y)

        def vp(x, y):
            return 0.5 * ((x - d) ** 2 + y * y)

        def phim(x, y):
            return math.exp(-((x + d) ** 2 + y * y) / 2) / math.sqrt(math.pi)

        def phip(x, y):
            return math.exp(-((x - d) ** 2 + y * y) / 2) / math.sqrt(math.pi)

        def integrate(f2):
            val, _ = dblquad(lambda y, x: f2(x, y), -12, 12, -12, 12,
                             epsabs=1e-12, epsrel=1e-12)
            return val

        s = math.exp(-d * d)
        w12 = (integrate(lambda x, y: phim(x, y) ** 2 * (v(x, y) - vm(x, y)))
               + integrate(lambda x, y: phip(x, y) ** 2 * (v(x, y) - vp(x, y))))
        w_cross = s * (integrate(lambda x, y: phim(x, y) * phip(x, y) * (v(x, y) - vm(x, y)))
                       + integrate(lambda x, y: phim(x, y) * phip(x, y) * (v(x, y) - vp(x, y))))
        w_quad = (w12 - w_cross / s**2) * p.hbar_omega0_mev
        assert breakdown.Wterm == pytest.approx(w_quad, rel=1e-10)

        # overlap factor and full J from first principles
        s2 = s**2 / (1 - s**4)
        assert breakdown.S2factor == pytest.approx(s2, rel=1e-12)
        j_quad = 2 * s2 * (w_quad + c_quad)
        assert breakdown.J == pytest.approx(j_quad, rel=1e-2)
        assert breakdown.J == pytest.approx(j_quad, rel=1e-10)


class TestExchangeJ:
    def test_golden_equal_field_curve(self):
        p = DotParameters.gaas()
        with open(GOLDEN) as fh:
            rows = fh.read().strip().splitlines()[1:]
        assert len(rows) == 101
        for row in rows:
            b_str, j_str = row.split(",")
            b, want = float(b_str), float(j_str)
            got = quiet_exchange(p, FieldPair(b, b)).J
            assert got == pytest.approx(want, rel=1e-12), b

    def test_equal_fields_kill_mismatch_term(self):
        p = DotParameters.gaas()
        r = quiet_exchange(p, FieldPair(2.0, 2.0))
        assert r.delta == 0.0
        assert r.J == pytest.approx(2.0 * r.S2factor * (r.Wterm + r.Cterm), rel=1e-14)

    def test_decays_with_separation(self):
        p0 = DotParameters.gaas()
        values = []
        for d_target in (2.0, 3.0, 4.0, 5.0, 6.0):
            a = d_target * p0.bohr_radius_nm
            p = DotParameters(p0.omega0, a, p0.kappa, p0.mass, p0.g1, p0.g2)
            values.append(abs(quiet_exchange(p, FieldPair(0.0, 0.0)).J))
        assert all(x > y for x, y in zip(values, values[1:]))
        assert values[-1] < 1e-6 * values[0]

    def test_insensitive_to_small_field_difference(self):
        # B+' = 2 T: differences up to 0.1 B+' move J by less than 1%
        p = DotParameters.gaas()
        bp = 2.0
        base = quiet_exchange(p, FieldPair(bp / 2, bp / 2)).J
        for bm in (0.05, 0.1, 0.2):
            f = FieldPair(0.5 * (bp + bm), 0.5 * (bp - bm))
            j = quiet_exchange(p, f).J
            assert abs(j - base) / abs(base) <= 0.01, bm

    def test_continuous_through_equal_fields(self):
        p = DotParameters.gaas()
        h = 1e-4

        def j_of(bm):
            return quiet_exchange(p, FieldPair(1.0 + bm / 2, 1.0 - bm / 2)).J

        derivative = (j_of(h) - j_of(-h)) / (2 * h)
        second = (j_of(h) - 2 * j_of(0.0) + j_of(-h)) / (h * h)
        assert math.isfinite(derivative)
        assert abs(second) < 1e3  # no kink at B-' = 0

    def test_warns_outside_validity(self):
        p0 = DotParameters.gaas()
        small = DotParameters(p0.omega0, 0.4 * p0.bohr_radius_nm,
                              p0.kappa, p0.mass, p0.g1, p0.g2)
        with pytest.warns(UserWarning, match="d ="):
            exchange_J(small, FieldPair(0.0, 0.0))
        with pytest.warns(UserWarning, match="exceeds 0.1"):
            exchange_J(p0, FieldPair(0.0, 0.0))  # default point has J ~ 0.77 meV

    def test_breakdown_fields(self):
        p = DotParameters.gaas()
        r = quiet_exchange(p, FieldPair(1.0, 2.0))
        assert isinstance(r, ExchangeBreakdown)
        assert r.bminus >= 1.0 and r.bplus >= 1.0
        assert abs(r.delta) < 1.0
        assert r.d > 0.0


class TestUnitConstants:
    def test_hbar(self):
        assert HBAR_MEV_PS == pytest.approx(0.6582119569, rel=1e-9)

    def test_mu_b(self):
        assert MU_B_MEV_PER_T == pytest.approx(0.05788381806, rel=1e-8)

    def test_gaas_scale(self):
        p = DotParameters.gaas()
        assert p.hbar_omega0_mev == pytest.approx(3.0, rel=1e-12)
        assert p.bohr_radius_nm == pytest.approx(19.5, rel=0.01)
