import math

from conepoint.polyseries import MultiPoly
from conepoint.critpoints import (find_singular_points, find_smooth_critical,
                                  verify_transverse)


def mp(arity, *terms):
    return MultiPoly.from_terms(arity, [(e, c) for c, e in terms])


def sorted_real_points(report):
    return sorted(tuple(round(z.real, 6) for z in p.Z) for p in report.points)


class TestSingularPoints:
    def test_aztec_both_points(self, aztec):
        rep = find_singular_points(aztec.spec.factors[0][0], [0.0] * 3, starts=200, seed=0)
        assert sorted_real_points(rep) == [(-1.0, -1.0, -1.0), (1.0, 1.0, 1.0)]
        assert all(p.residual <= 1e-10 for p in rep.points)
        assert all(p.exact for p in rep.points)

    def test_grove_single_point(self, cube_grove):
        rep = find_singular_points(cube_grove.spec.factors[1][0], [0.0] * 3,
                                   starts=200, seed=0)
        assert sorted_real_points(rep) == [(1.0, 1.0, 1.0)]

    def test_fls_single_point(self, fls):
        rep = find_singular_points(fls.spec.factors[0][0], [0.0] * 3, starts=200, seed=0)
        assert sorted_real_points(rep) == [(1.0, 1.0, 1.0)]

    def test_superballot_single_point(self, superballot_core):
        rep = find_singular_points(superballot_core.spec.factors[0][0], [0.0] * 3,
                                   starts=200, seed=0)
        assert sorted_real_points(rep) == [(1.0, 1.0, 1.0)]

    def test_smooth_polynomial_has_none(self):
        h = mp(2, (1, (0, 0)), (-1, (1, 0)), (-1, (0, 1)))
        rep = find_singular_points(h, [0.0, 0.0], starts=60, seed=0)
        assert rep.points == [] and not rep.family_detected

    def test_stable_under_doubling_starts(self, aztec):
        a = sorted_real_points(find_singular_points(aztec.spec.factors[0][0], [0.0] * 3,
                                                    starts=100, seed=3))
        b = sorted_real_points(find_singular_points(aztec.spec.factors[0][0], [0.0] * 3,
                                                    starts=200, seed=3))
        assert a == b


class TestSmoothCritical:
    def test_binomial_critical_point(self):
        h = mp(2, (1, (0, 0)), (-1, (1, 0)), (-1, (0, 1)))
        x = [math.log(0.5)] * 2
        rep = find_smooth_critical(h, (1, 1), x, starts=60, seed=0)
        assert sorted_real_points(rep) == [(0.5, 0.5)]
        assert rep.points[0].exact

    def test_constant_log_gradient_family(self):
        h = mp(3, (1, (0, 0, 0)), (-1, (0, 1, 1)))
        rep = find_smooth_critical(h, (0, 1, 1), [0.0] * 3, starts=60, seed=0)
        assert rep.family_detected
        assert rep.cluster_diameter > 1e-3
        assert rep.points == []

    def test_unsatisfiable_parallelism(self):
        h = mp(3, (1, (0, 0, 0)), (-1, (0, 1, 1)))
        rep = find_smooth_critical(h, (1, 1, 1), [0.0] * 3, starts=60, seed=0)
        assert rep.points == [] and not rep.family_detected


class TestTransverse:
    def test_own_span(self):
        assert verify_transverse((0, 1, 1), [(0, 1, 1)])

    def test_rank_defect_detected(self):
        assert not verify_transverse((1, 1, 1), [(0, 1, 1), (-0.5, 0.5, 1)])

    def test_plane_membership(self):
        assert verify_transverse((1, 3, 0), [(1, 0, 0), (0, 1, 0)])
