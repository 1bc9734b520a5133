import numpy as np
import pytest
from hypothesis import given, strategies as st

from hblab.exceptions import DegenerateOnCircle, ParameterOutOfRange
from hblab.hardy import outer_from_modulus, pair_from_smirnov
from hblab.rational import (
    DIVERGENT,
    SQUARE_SUMMABLE,
    CirclePoles,
    RationalFn,
    circle_poles,
    coefficient_growth_probe,
    divide_by_poles,
    fejer_riesz,
    fejer_riesz_residual,
    gap_counterexample,
    hermite_interpolant,
    rational_membership,
    rational_pair,
    series_of_ratio,
)
from hblab.series import GridFunction, TaylorSeries, cauchy_product, h2_norm, to_grid

GOLDEN = (1 + np.sqrt(5)) / 2


def random_coprime(rng, dp, dq):
    """``p`` with arbitrary roots, ``q`` with roots outside 1.05."""
    rq = rng.uniform(1.05, 3.0, dq) * np.exp(2j * np.pi * rng.uniform(size=dq))
    q = np.poly(rq)[::-1] if dq else np.array([1.0])
    q = q / q[0]
    p = rng.normal(size=dp + 1) + 1j * rng.normal(size=dp + 1)
    return p, q


class TestRationalFn:
    def test_rejects_inside_pole(self):
        with pytest.raises(ValueError):
            RationalFn([1], [1, -2])

    def test_rejects_common_zero(self):
        with pytest.raises(ValueError):
            RationalFn([1, -1], [1, -1])

    def test_series(self):
        np.testing.assert_allclose(RationalFn([1], [1, -1]).series(5).coeffs, np.ones(6))
        np.testing.assert_allclose(RationalFn([1], [1, -2, 1]).series(5).coeffs, np.arange(1, 7))


class TestFejerRiesz:
    def test_trivial(self):
        np.testing.assert_allclose(fejer_riesz([1], [0]).r, [1])

    def test_golden(self):
        fr = fejer_riesz([1], [1, -1])
        np.testing.assert_allclose(fr.r, [GOLDEN, -1 / GOLDEN], atol=1e-9)
        assert fr.root_margin == pytest.approx(GOLDEN ** 2 - 1)

    def test_constant_symbol(self):
        np.testing.assert_allclose(fejer_riesz([0, 1], [1]).r, [np.sqrt(2)], atol=1e-12)

    def test_random(self, rng):
        for _ in range(50):
            p, q = random_coprime(rng, rng.integers(0, 7), rng.integers(0, 7))
            fr = fejer_riesz(p, q)
            assert fr.residual <= 1e-9
            assert fr.r.size - 1 == max(np.trim_zeros(p, "b").size, q.size) - 1
            assert fr.r[0].real > 0 and fr.r[0].imag == 0
            if fr.r.size > 1:
                assert np.min(np.abs(np.roots(fr.r[::-1]))) >= 1 + fr.root_margin - 1e-12

    def test_degenerate(self):
        # p and q share the circle zero at 1
        with pytest.raises(DegenerateOnCircle):
            fejer_riesz([1, -1], [1, -1])


class TestRationalPair:
    def test_golden_pair(self):
        pair = rational_pair(RationalFn([1], [1, -1]), 256)
        inv = series_of_ratio([1], [GOLDEN, -1 / GOLDEN], 256)
        np.testing.assert_allclose(pair.b.coeffs, inv, atol=1e-12)
        np.testing.assert_allclose(pair.a.coeffs, series_of_ratio([1, -1], [GOLDEN, -1 / GOLDEN], 256),
                                   atol=1e-12)
        assert pair.unimodularity_residual < 1e-9

    def test_identity_matches_smirnov(self):
        pair = rational_pair(RationalFn([0, 1], [1]), 8)
        other = pair_from_smirnov(TaylorSeries([0, 1]), 64, 8)
        assert pair.b.equals(other.b, 1e-12) and pair.a.equals(other.a, 1e-12)

    def test_zero(self):
        pair = rational_pair(RationalFn([0], [1]), 4)
        assert h2_norm(pair.b) == 0
        np.testing.assert_allclose(pair.a.coeffs, [1, 0, 0, 0, 0])

    def test_random_pairs(self, rng):
        for _ in range(10):
            p, q = random_coprime(rng, 3, 3)
            phi = RationalFn(p, q)
            pair = rational_pair(phi, 1023, check_outer=True)
            M = 2048
            ag = to_grid(pair.a, M).samples
            ok = np.abs(ag) >= 1e-3
            ratio = to_grid(pair.b, M).samples[ok] / ag[ok]
            assert np.max(np.abs(ratio - phi(GridFunction(ag).points()[ok]))) <= 1e-7

    def test_circle_pole_pair_is_outer(self):
        # pole at -1 sits on a grid node of every even grid
        pair = rational_pair(RationalFn([1, 2], [1, 1]), 2047)
        again = outer_from_modulus(GridFunction(np.abs(to_grid(pair.a, pair.grid_size).samples)),
                                   pair.a.degree)
        assert np.max(np.abs(again.coeffs - pair.a.coeffs)) <= 1e-6


class TestCirclePoles:
    @staticmethod
    def rounded(poles):
        return [(complex(np.round(lam, 8)), m) for lam, m in poles]

    def test_examples(self):
        assert self.rounded(circle_poles([1, -1])) == [(1, 1)]
        assert self.rounded(circle_poles([1, -2, 1])) == [(1, 2)]
        assert circle_poles([1, 0, 0.25]).poles == ()

    def test_mixed(self):
        q = np.convolve(np.convolve([1, -1], [1, -1]), np.convolve([1, 1j], [1, 0, 0.25]))
        poles = circle_poles(q)
        lam = dict((np.round(l, 6), m) for l, m in poles)
        assert lam == {1: 2, np.round(1j, 6): 1}
        assert poles.total == 3

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            circle_poles([1, -1], 1e-3)

    def test_poles_validate(self):
        with pytest.raises(ValueError):
            CirclePoles(((0.5, 1),))


class TestMembership:
    def test_identity(self):
        dec = rational_membership(TaylorSeries([0, 1]), CirclePoles(((1, 1),)))
        np.testing.assert_allclose(dec.interp, [1], atol=1e-12)
        assert dec.g.equals(TaylorSeries([1]), 1e-12)
        assert dec.tail_verdict == SQUARE_SUMMABLE

    def test_no_poles(self):
        f = TaylorSeries([1, 2, 3])
        dec = rational_membership(f, CirclePoles(()))
        assert dec.g.equals(f) and not np.any(dec.interp)

    def test_polynomial_matches_hermite(self, rng):
        poles = CirclePoles(((1, 2), (-1j, 1)))
        f = TaylorSeries(rng.normal(size=9))
        dec = rational_membership(f, poles)
        np.testing.assert_allclose(dec.interp, hermite_interpolant(f, poles), atol=1e-9)
        prod = np.array([1.0 + 0j])
        for lam in poles.nodes():
            prod = np.convolve(prod, [-lam, 1])
        rebuilt = cauchy_product(dec.g, prod, f.degree).padded(f.degree)
        rebuilt[: dec.interp.size] += dec.interp
        np.testing.assert_allclose(rebuilt, f.coeffs, atol=1e-9)

    def test_harmonic_drift(self):
        N = 10 ** 5
        f = np.r_[0, 1 / np.arange(1, N + 1)]
        dec = rational_membership(TaylorSeries(f), CirclePoles(((1, 1),)))
        assert dec.tail_verdict == DIVERGENT
        # direct recurrence: g_n = g_{n-1} - (f - interp)_n with g_{-1} = 0
        x = f.astype(complex)
        x[0] -= dec.interp[0]
        direct = -np.cumsum(x)
        np.testing.assert_allclose(dec.g.coeffs, direct, atol=1e-9)
        H = np.cumsum(f)
        drift = dec.g.coeffs + H
        assert np.ptp(drift.real) < 1e-9

    def test_gap_is_square_summable(self):
        poles = CirclePoles(((1, 2),))
        f = gap_counterexample(poles, 3, 0.75, 1 << 16)
        dec = rational_membership(f, poles)
        assert dec.tail_verdict == SQUARE_SUMMABLE
        np.testing.assert_allclose(dec.interp, 0, atol=1e-3)

    def test_division_forward(self):
        g = TaylorSeries([2, -1, 0.5])
        prod = np.convolve(g.coeffs, [-1j, 1])
        np.testing.assert_allclose(divide_by_poles(prod, CirclePoles(((1j, 1),)))[:3], g.coeffs,
                                   atol=1e-14)


class TestGap:
    def test_example(self):
        f = gap_counterexample(CirclePoles(((1, 2),)), 3, 0.75, 9)
        c = 2 ** -0.75
        np.testing.assert_allclose(f.coeffs, [0, 0, 0, 1, -2, 1, c, -2 * c, c, 3 ** -0.75])

    def test_gap_coefficients_untouched(self):
        N = 3000
        f = gap_counterexample(CirclePoles(((1, 2),)), 4, 0.6, N)
        n = np.arange(1, N // 4 + 1)
        np.testing.assert_allclose(f.coeffs[4 * n], n ** -0.6)

    def test_norm_bound(self):
        N = 1 << 16
        k, alpha = 2, 0.75
        f = gap_counterexample(CirclePoles(((1, 2),)), 3, alpha, N)
        n = np.arange(1, N // 3 + 1)
        assert h2_norm(f) ** 2 <= (k + 1) ** 2 * np.sum(n ** (-2 * alpha))

    @pytest.mark.parametrize("K,alpha,poles", [(2, 0.75, ((1, 2),)), (3, 0.5, ((1, 2),)),
                                               (3, 1.0, ((1, 2),)), (3, 0.75, ((1, 1),))])
    def test_out_of_range(self, K, alpha, poles):
        with pytest.raises(ParameterOutOfRange):
            gap_counterexample(CirclePoles(poles), K, alpha, 100)


class TestGrowthProbe:
    def test_simple_pole(self):
        sup, slope = coefficient_growth_probe(RationalFn([1], [1, -1]), 4096)
        assert sup == pytest.approx(1) and abs(slope) < 1e-9

    def test_double_pole(self):
        _, slope = coefficient_growth_probe(RationalFn([1], [1, -2, 1]), 4096)
        assert slope == pytest.approx(1, abs=0.05) and slope >= 0.9

    def test_outside_pole(self):
        sup, slope = coefficient_growth_probe(RationalFn([1], [1, -0.5]), 256)
        assert sup == 1 and slope < -10

    def test_simple_poles_stable_under_doubling(self):
        q = np.convolve([1, -1], [1, 1j])
        phi = RationalFn([1, 0.3], q)
        s1, _ = coefficient_growth_probe(phi, 2048)
        s2, _ = coefficient_growth_probe(phi, 4096)
        assert s2 / s1 <= 1.05

    @given(st.integers(1, 3))
    def test_pole_order(self, m):
        q = np.array([1.0])
        for _ in range(m):
            q = np.convolve(q, [1, -1])
        _, slope = coefficient_growth_probe(RationalFn([1], q), 2048)
        assert slope == pytest.approx(m - 1, abs=0.05)
