import math
import random
from fractions import Fraction

import pytest

from conepoint.polyseries import MultiPoly, TruncatedSeries
from conepoint.localgeo import DirectionTag, quadratic_point_data
from conepoint.critpoints import find_smooth_critical
from conepoint.asympt import (GammaPoleError, RefusalError, cone_constant,
                              cone_plane_asymptotics, decay_exponent, double_residue,
                              dual_power_derivative, expansion_coefficients,
                              local_degree, oriented_double_residue,
                              quadratic_asymptotics, smooth_asymptotics,
                              total_asymptotics)


def mp(arity, *terms):
    return MultiPoly.from_terms(arity, [(e, c) for c, e in terms])


HALF = Fraction(1, 2)


class TestConstants:
    def test_d3_s1_reduces_to_two_pi(self):
        # the explicit constant collapses to |M|/(2 pi) via the Gamma identities
        assert cone_constant(1, 3, 2) == 2 / (2 * math.pi)
        general = 2 / (2.0 ** 1 * math.pi ** 0.5 * math.gamma(1.0) * math.gamma(0.5))
        assert abs(cone_constant(1, 3, 2) - general) < 1e-13

    def test_gamma_poles_rejected(self):
        with pytest.raises(GammaPoleError):
            cone_constant(0, 3, 1)
        with pytest.raises(GammaPoleError):
            cone_constant(Fraction(1, 2), 3, 1)  # s + 1 - d/2 = 0


class TestExpansionCoefficients:
    def test_pure_quadratic_no_corrections(self):
        q = TruncatedSeries(3, 5, {(2, 0, 0): 1, (0, 2, 0): -1, (0, 0, 2): -1})
        p = TruncatedSeries(3, 5, {(0, 0, 0): 1})
        table = expansion_coefficients(p, q, (), 1, (), 3)
        assert table.entries == {((0, 0, 0), 0, 0): 1}

    def test_aztec_leading_coefficient(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        table = expansion_coefficients(data.p_series, data.q_series, data.h_series,
                                       data.s, (1,), 1)
        assert table.entries[((0, 0, 0), 0, 0)] == HALF

    def test_fls_first_correction_is_minus_beta_remainder(self, fls):
        data = quadratic_point_data(fls.spec, (1, 1, 1))
        table = expansion_coefficients(data.p_series, data.q_series, (), data.s, (), 2)
        beta = Fraction(3, 4)
        q3 = {m: c for m, c in data.q_series.terms.items() if sum(m) == 3}
        for m, c in q3.items():
            # scaled by the unit normalization of the quadratic: c(m,1,0) = -beta R_m
            assert table.entries[(m, 1, 0)] == -beta * c
        # support condition |m| >= 3 l
        assert all(sum(m) >= 3 * ell + 2 * n for (m, ell, n) in table.entries)


class TestDualPowerDerivative:
    def test_plain_power(self, fls):
        data = quadratic_point_data(fls.spec, (1, 1, 1))
        v = dual_power_derivative(data.dual_matrix, Fraction(-3, 4), (0, 0, 0),
                                  (50, 50, 50))
        assert abs(v - 7500.0 ** -0.75) < 1e-15 * abs(v)

    def test_matches_finite_differences(self, fls, aztec):
        rng = random.Random(17)
        duals = [quadratic_point_data(fls.spec, (1, 1, 1)).dual_matrix,
                 quadratic_point_data(aztec.spec, (1, 1, 1)).dual_matrix]
        checked = 0
        while checked < 50:
            dual = duals[rng.randrange(2)]
            alpha = Fraction(rng.randint(-7, 7), rng.choice([2, 3, 4]))
            if alpha == 0:
                continue
            m = [0, 0, 0]
            for _ in range(rng.randint(0, 3)):
                m[rng.randrange(3)] += 1
            r = [rng.uniform(1.0, 3.0) for _ in range(3)]
            if dual is duals[0]:
                r = [abs(x) + 2.0 for x in r]          # interior of the forward cone
            else:
                r = [0.3 * x for x in r[:2]] + [4.0]   # inside the elliptic cone
            qval = sum(r[i] * sum(float(dual[i][j]) * r[j] for j in range(3))
                       for i in range(3))
            if qval < 0.5:
                continue
            checked += 1
            got = dual_power_derivative(dual, alpha, tuple(m), tuple(r))
            want = _fd_derivative(dual, float(alpha), tuple(m), list(r))
            scale = max(1.0, abs(want), abs(float(qval)) ** float(alpha))
            assert abs(got - want) <= 1e-6 * scale, (alpha, m, r)


def _fd_derivative(dual, alpha, m, r, h_rel=1e-4):
    def f(point):
        q = sum(point[i] * sum(float(dual[i][j]) * point[j] for j in range(3))
                for i in range(3))
        return q ** alpha

    h = h_rel * math.sqrt(sum(x * x for x in r))

    def deriv(fun, idx, point):
        p1 = list(point)
        p2 = list(point)
        p1[idx] += h
        p2[idx] -= h
        return (fun(p1) - fun(p2)) / (2 * h)

    fun = f
    for i in range(3):
        for _ in range(m[i]):
            fun = (lambda g, idx: lambda point: deriv(g, idx, point))(fun, i)
    return fun(r)


class TestDoubleResidue:
    def test_aztec_unit_residue(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        assert oriented_double_residue(data) == 1

    def test_grove_half_residue(self, cube_grove):
        data = quadratic_point_data(cube_grove.spec, (1, 1, 1))
        assert oriented_double_residue(data) == HALF

    def test_rescaling_and_pair_invariance(self):
        qt = mp(3, (1, (0, 0, 2)), (-HALF, (2, 0, 0)), (-HALF, (0, 2, 0)))
        ell = (0, 1, 1)
        alpha = (-1, -1, 1)
        v1 = double_residue(qt, ell, alpha)
        v2 = double_residue(qt, ell, tuple(2 * a for a in alpha))
        v3 = double_residue(qt, ell, tuple(-3 * a for a in alpha))
        assert abs(float(v1) - float(v2)) < 1e-12
        assert abs(float(v1) - float(v3)) < 1e-12
        # all three coordinate-pair formulas agree where nondegenerate
        A = [qt.diff(i).eval(list(alpha)) for i in range(3)]
        pairs = [(alpha[2], A[0] * ell[1] - A[1] * ell[0]),
                 (alpha[0], A[1] * ell[2] - A[2] * ell[1]),
                 (alpha[1], A[2] * ell[0] - A[0] * ell[2])]
        vals = [Fraction(num, 1) / den for num, den in pairs if den != 0]
        assert all(v == v1 for v in vals)


class TestConePlane:
    def test_aztec_axis_value(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        val, cls = cone_plane_asymptotics(data, (0, 0, 9))
        assert cls.tag is DirectionTag.InteriorEllipticCone
        assert abs(val - 0.125) < 1e-15

    def test_grove_center_value(self, cube_grove):
        data = quadratic_point_data(cube_grove.spec, (1, 1, 1))
        val, _ = cone_plane_asymptotics(data, (7, 7, 7))
        assert abs(val - 1 / 3) < 1e-14

    def test_angle_is_right_angle_on_crossing_surface(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        # q*(r, ell) = t - 2s = 0 with q*(r,r) > 0: angle pi/2, value P Res2 / 2
        val, _ = cone_plane_asymptotics(data, (1, 10, 20))
        assert abs(val - 0.5 * 0.5) < 1e-14

    def test_arctan_branch_continuity(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        # walk across the crossing surface q*(r,ell) = 0 (s = t/2) inside the cone
        vals = []
        for s in (9998, 9999, 10000, 10001, 10002):
            val, _ = cone_plane_asymptotics(data, (1, s, 20000))
            vals.append(val)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] - vals[0] < 1e-3  # continuous, no branch jump
        mid, _ = cone_plane_asymptotics(data, (0, 10000, 20000))
        # exactly the right angle there: value = P(Z) Res2 / 2
        assert abs(mid - 0.5 * 1.0 / 2) < 1e-9

    def test_obstructed_refusal(self, aztec):
        data = quadratic_point_data(aztec.spec, (1, 1, 1))
        with pytest.raises(RefusalError):
            cone_plane_asymptotics(data, (0, 5, math.sqrt(50)))

    def test_scale_invariance_of_value(self, cube_grove):
        # replacing q by lam q (and the implied dual change) leaves the
        # arctan argument and the residue-numerator combination unchanged
        data = quadratic_point_data(cube_grove.spec, (1, 1, 1))
        lam = Fraction(5, 2)
        scaled = type(data)(**{**data.__dict__,
                               "q_matrix": tuple(tuple(lam * x for x in row)
                                                 for row in data.q_matrix),
                               "dual_matrix": tuple(tuple(x / lam for x in row)
                                                    for row in data.dual_matrix),
                               "numerator_value": data.numerator_value * lam})
        v1, _ = cone_plane_asymptotics(data, (3, 4, 5))
        v2, _ = cone_plane_asymptotics(scaled, (3, 4, 5))
        assert abs(v1 - v2) < 1e-13 * abs(v1)


@pytest.fixture(scope="module")
def binom_setup():
    h = mp(2, (1, (0, 0)), (-1, (1, 0)), (-1, (0, 1)))
    one = MultiPoly.const(2, 1)
    return h, one


class TestSmoothPoint:

    def test_diagonal_binomials(self, binom_setup):
        h, one = binom_setup
        x = [math.log(0.5)] * 2
        cp = find_smooth_critical(h, (1, 1), x, starts=40, seed=0).points[0]
        errs = []
        for n in (8, 16, 32, 64):
            val = smooth_asymptotics(one, h, cp, (n, n), cone_direction_u=(-1, -1))
            exact = math.comb(2 * n, n)
            errs.append(abs(val - exact) / exact)
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 0.02

    def test_off_diagonal_binomials(self, binom_setup):
        h, one = binom_setup
        x = [math.log(2 / 3), math.log(1 / 3)]
        cp = find_smooth_critical(h, (2, 1), x, starts=40, seed=0).points[0]
        errs = []
        for n in (8, 16, 32):
            val = smooth_asymptotics(one, h, cp, (2 * n, n), cone_direction_u=(-1, -1))
            exact = math.comb(3 * n, n)
            errs.append(abs(val - exact) / exact)
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 0.02


class TestDecay:
    def test_qrw_local_degree(self, qrw):
        # numerator vanishes to order 2; quadratic contributes -2, simple pole -1
        deg = local_degree(qrw.spec, (1, 1, 1))
        assert deg == -1
        assert decay_exponent(qrw.spec, [((1, 1, 1), deg)]) == 2.0

    def test_smooth_pole_bound(self, cube_grove):
        deg = local_degree(cube_grove.spec, (1, 1, 1))
        # numerator order 0, quadratic -2, simple pole -1
        assert deg == -3
        assert decay_exponent(cube_grove.spec, [((1, 1, 1), deg)]) == 0.0

    def test_fls_exponent(self, fls):
        deg = local_degree(fls.spec, (1, 1, 1))
        assert deg == Fraction(-3, 2)
        assert decay_exponent(fls.spec, [((1, 1, 1), deg)]) == 1.5


class TestTotals:
    def test_aztec_parity(self, aztec):
        pts = list(aztec.known_points)
        odd = total_asymptotics(aztec.spec, (0, 0, 9), points=pts)
        even = total_asymptotics(aztec.spec, (0, 0, 8), points=pts)
        single = total_asymptotics(aztec.spec, (0, 0, 9), points=pts[:1])
        assert abs(odd.value - 0.25) < 1e-14
        assert even.value == 0.0
        assert abs(odd.value - 2 * single.value) < 1e-15

    def test_fls_direction(self, fls):
        est = total_asymptotics(fls.spec, (50, 50, 50), points=[(1, 1, 1)])
        assert abs(est.value - 0.000222832864642456) < 1e-12
        assert est.decay_exponent == 1.5

    def test_outside_is_zero_with_note(self, aztec):
        est = total_asymptotics(aztec.spec, (1, 0, 1), points=list(aztec.known_points))
        assert est.value == 0.0
        assert est.formula_tag == "exponential-decay"

    def test_quadratic_requires_interior(self, superballot_core):
        with pytest.raises(RefusalError):
            data = quadratic_point_data(superballot_core.spec, (1, 1, 1))
            table = expansion_coefficients(data.p_series, data.q_series, (), data.s, (), 1)
            quadratic_asymptotics(data, table, (1, 0, 0))

    def test_superballot_prediction(self, superballot_core):
        est = total_asymptotics(superballot_core.spec, (10, 20, 30), points=[(1, 1, 1)])
        assert abs(est.value * 2 ** 60 - 2.595e16) < 0.001e16
