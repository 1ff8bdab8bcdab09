"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS line through the capture (the `scoreboard`
fixture), so a full run shows the scoreboard; failures surface as ordinary
assertion errors with context.
"""

import math
import statistics
import time
from fractions import Fraction

from conepoint.polyseries import MultiPoly
from conepoint.oracle import (QuasiRationalSpec, coefficient_at, empirical_decay,
                              expand, expand_box, naive_series)
from conepoint.localgeo import dual_quadratic, mat_inverse, quadratic_point_data
from conepoint.critpoints import find_smooth_critical
from conepoint.asympt import (cone_constant, cone_plane_asymptotics, double_residue,
                              dual_power_derivative, oriented_double_residue,
                              smooth_asymptotics, total_asymptotics)
from conepoint.presets import grove_relation_check, qrw_simulate


def mp(arity, *terms):
    return MultiPoly.from_terms(arity, [(e, c) for c, e in terms])


HALF = Fraction(1, 2)


def test_criterion_01_fls_reproduction(fls, scoreboard):
    t0 = time.perf_counter()
    oracle_value = coefficient_at(fls.spec, (50, 50, 50))
    oracle_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    est = total_asymptotics(fls.spec, (50, 50, 50), points=[(1, 1, 1)])
    predict_time = time.perf_counter() - t0
    assert abs(float(oracle_value) - 0.000223464) <= 5e-9
    assert abs(est.value - 0.000222832) <= 5e-9
    rel = abs(est.value - float(oracle_value)) / float(oracle_value)
    assert 0.002 <= rel <= 0.004
    assert oracle_time < 60.0
    assert predict_time < 1.0
    scoreboard(1, f"fls oracle {float(oracle_value):.9f} ({oracle_time:.1f}s), "
              f"prediction {est.value:.9f} ({predict_time:.2f}s), rel err {rel:.5f}")


def test_criterion_02_superballot_reproduction(superballot_core, scoreboard):
    a = coefficient_at(superballot_core.spec, (10, 20, 30))
    N = a * Fraction(2) ** 60
    assert N.denominator == 1
    est = total_asymptotics(superballot_core.spec, (10, 20, 30), points=[(1, 1, 1)])
    pred = est.value * 2 ** 60
    assert abs(float(N) - 2.547e16) <= 0.005 * 2.547e16
    assert abs(pred - 2.595e16) <= 0.005 * 2.595e16
    rel = abs(pred - float(N)) / float(N)
    assert 0.014 <= rel <= 0.024
    scoreboard(2, f"superballot oracle {float(N):.4e} (exact integer {N}), "
              f"prediction {pred:.4e}, rel err {rel:.4f}")


def test_criterion_03_dual_quadratic_identities(aztec, cube_grove, fls, superballot_core, scoreboard):
    for pr in (aztec, cube_grove, fls, superballot_core):
        data = quadratic_point_data(pr.spec, (1, 1, 1))
        prod = [[sum(data.dual_matrix[i][k] * data.q_matrix[k][j] for k in range(3))
                 for j in range(3)] for i in range(3)]
        assert prod == [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert quadratic_point_data(fls.spec, (1, 1, 1)).normalizer_absdet == 2
    assert quadratic_point_data(superballot_core.spec, (1, 1, 1)).normalizer_absdet == 2
    grove_dual = quadratic_point_data(cube_grove.spec, (1, 1, 1)).dual_matrix
    assert grove_dual == ((-HALF, HALF, HALF), (HALF, -HALF, HALF), (HALF, HALF, -HALF))
    scoreboard(3, "dual * q = identity exactly for all four quadratics; "
              "|M| = 2 exactly (fls, superballot); grove dual matches the half-matrix")


def test_criterion_04_double_residues(aztec, cube_grove, scoreboard):
    az = quadratic_point_data(aztec.spec, (1, 1, 1))
    cg = quadratic_point_data(cube_grove.spec, (1, 1, 1))
    assert oriented_double_residue(az) == 1
    assert oriented_double_residue(cg) == HALF
    # invariance under rescaling and across the coordinate-pair formulas
    qt = mp(3, (1, (0, 0, 2)), (-HALF, (2, 0, 0)), (-HALF, (0, 2, 0)))
    ell = (0, 1, 1)
    base = double_residue(qt, ell, (-1, -1, 1))
    for scale in (2, -3, Fraction(7, 5)):
        v = double_residue(qt, ell, tuple(scale * a for a in (-1, -1, 1)))
        assert abs(float(v) - float(base)) <= 1e-12
    A = [qt.diff(i).eval([-1, -1, 1]) for i in range(3)]
    pair_vals = [(1, A[0] * ell[1] - A[1] * ell[0]),
                 (-1, A[1] * ell[2] - A[2] * ell[1]),
                 (-1, A[2] * ell[0] - A[0] * ell[2])]
    for num, den in pair_vals:
        if den != 0:
            assert abs(float(Fraction(num, 1) / den) - float(base)) <= 1e-12
    scoreboard(4, "residues exact (aztec 1, grove 1/2), invariant under rescaling "
              "and coordinate-pair choice")


def test_criterion_05_aztec_convergence(aztec, scoreboard):
    t_start = time.perf_counter()
    lam = [k / 10 for k in range(-9, 10)]
    medians = []
    for T in (19, 29, 39):
        table = expand(aztec.spec, T)
        errs = []
        for l1 in lam:
            for l2 in lam:
                if 2 * l1 * l1 + 2 * l2 * l2 > 0.8:
                    continue
                r = (math.floor(l1 * T), math.floor(l2 * T), T)
                est = total_asymptotics(aztec.spec, r, points=list(aztec.known_points))
                o = table.value_at(r)
                if sum(r) % 2 == 0:
                    assert o == 0 and est.value == 0.0
                else:
                    errs.append(abs(est.value - float(o)) / abs(float(o)))
        medians.append(statistics.median(errs))
    elapsed = time.perf_counter() - t_start
    assert medians[0] > medians[1] > medians[2]
    assert medians[2] < 0.10
    assert elapsed < 300.0
    scoreboard(5, f"aztec medians {[round(m, 4) for m in medians]} decreasing, "
              f"even indices exactly zero, {elapsed:.0f}s")


def test_criterion_06_grove_convergence(cube_grove, scoreboard):
    lam = [k / 10 for k in range(2, 21)]
    medians = []
    for T in (20, 30, 40):
        targets = set()
        for l1 in lam:
            for l2 in lam:
                r = (math.floor(l1 * T), math.floor(l2 * T), T)
                q = 2 * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]) \
                    - (r[0] ** 2 + r[1] ** 2 + r[2] ** 2)
                if q > 0.2 * (r[0] ** 2 + r[1] ** 2 + r[2] ** 2):
                    targets.add(r)
        hi = tuple(max(t[i] for t in targets) for i in range(3))
        table = expand_box(cube_grove.spec, (0, 0, 0), hi)
        errs = []
        for r in sorted(targets):
            est = total_asymptotics(cube_grove.spec, r, points=[(1, 1, 1)])
            o = float(table.value_at(r))
            errs.append(abs(est.value - o) / abs(o))
        medians.append(statistics.median(errs))
    assert medians[0] > medians[1] > medians[2]
    assert medians[2] < 0.10
    edge = expand(cube_grove.spec, 20)
    create = expand(cube_grove.companions["creation"], 20)
    for n in range(1, 21):
        assert grove_relation_check(n, edge_table=edge, create_table=create)
    scoreboard(6, f"grove medians {[round(m, 4) for m in medians]} decreasing, "
              f"creation-rate relation exact for n <= 20")


def test_criterion_07_qrw_properties(qrw, scoreboard):
    T_exact = 16
    tables = {ch: expand(qrw.companions[ch], T_exact) for ch in "ENWS"}
    for t in range(T_exact + 1):
        sim = qrw_simulate(t)
        seen = set()
        for x in range(-t, t + 1):
            for y in range(-t, t + 1):
                for i, ch in enumerate("ENWS"):
                    assert tables[ch].value_at((x, y, t)) == sim.get((x, y, i), Fraction(0))
        for (x, y, i) in sim:
            assert abs(x) <= t and abs(y) <= t
    scaling = []
    for t in range(8, 65, 4):
        sim = qrw_simulate(t)
        if t <= 32:
            assert sum(v * v for v in sim.values()) == 1
        p = sum(sim.get((t // 4, t // 4, xi), Fraction(0)) ** 2 for xi in range(4))
        scaling.append((t, math.sqrt(float(p)) * t))
    first = max(v for t, v in scaling if t <= 36)
    second = max(v for t, v in scaling if t > 36)
    assert second <= 1.25 * first
    assert all(v < 2.0 for _, v in scaling)
    scoreboard(7, f"oracle == simulation exactly through t={T_exact}; unitarity exact to "
              f"t=32; amp*t in [{min(v for _, v in scaling):.3f}, "
              f"{max(v for _, v in scaling):.3f}] over t=8..64")


def test_criterion_08_decay_classification(aztec, scoreboard):
    outside = empirical_decay(aztec.spec, (1, 0, 1), [12, 16, 20, 24])
    for t, rate in outside:
        if t >= 20:
            assert rate <= -0.05  # identically zero along this ray: rate is -inf
    # a ray outside the normal cone but inside the series support, where the
    # coefficients are nonzero yet exponentially small
    outside_nz = empirical_decay(aztec.spec, (4, 0, 5), [1, 3, 5])
    assert all(rate <= -0.05 and rate > float("-inf") for _, rate in outside_nz)
    interior = empirical_decay(aztec.spec, (0, 0, 1), [9, 15, 21, 27, 33])
    mags = [abs(rate) for _, rate in interior]
    assert mags == sorted(mags, reverse=True)
    assert mags[-1] < 0.05
    scoreboard(8, f"outside rates <= -0.05 (parity ray -inf, support ray "
                  f"{outside_nz[-1][1]:.2f}); interior |rate| declines to {mags[-1]:.4f}")


def test_criterion_09_property_suites(fls, aztec, scoreboard):
    import random
    rng = random.Random(101)
    # dual involution + covariance on 100 random Lorentzian forms
    D = ((Fraction(1), Fraction(0), Fraction(0)),
         (Fraction(0), Fraction(-1), Fraction(0)),
         (Fraction(0), Fraction(0), Fraction(-1)))
    count = 0
    while count < 100:
        L = tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(3)) for _ in range(3))
        try:
            Linv = mat_inverse(L)
        except Exception:
            continue
        count += 1
        M = _mul(_mul(_tr(L), D), L)
        dual = dual_quadratic(M)
        assert dual_quadratic(dual) == M
        M2 = _mul(_mul(_tr(L), M), L)
        assert dual_quadratic(M2) == _mul(_mul(Linv, dual), _tr(Linv))
    # derivative of dual powers vs central finite differences, 50 cases
    data_f = quadratic_point_data(fls.spec, (1, 1, 1))
    checked = 0
    while checked < 50:
        alpha = Fraction(rng.randint(-7, 7), rng.choice([2, 3, 4]))
        if alpha == 0:
            continue
        m = [0, 0, 0]
        for _ in range(rng.randint(0, 3)):
            m[rng.randrange(3)] += 1
        r = [abs(rng.uniform(1.0, 3.0)) + 2.0 for _ in range(3)]
        qval = data_f.dual_eval(r, r)
        if float(qval) < 0.5:
            continue
        checked += 1
        got = dual_power_derivative(data_f.dual_matrix, alpha, tuple(m), tuple(r))
        want = _fd(data_f.dual_matrix, float(alpha), tuple(m), r)
        assert abs(got - want) <= 1e-6 * max(1.0, abs(want),
                                             float(qval) ** float(alpha))
    # oracle recurrence vs naive inversion, 30 random small specs
    for _ in range(30):
        arity = rng.randint(1, 3)
        terms = {(0,) * arity: Fraction(rng.randint(1, 3))}
        for _ in range(rng.randint(1, 4)):
            mm = tuple(rng.randint(0, 2) for _ in range(arity))
            if sum(mm):
                terms[mm] = Fraction(rng.randint(-3, 3))
        spec = QuasiRationalSpec(arity, MultiPoly.const(arity, 1),
                                 ((MultiPoly(arity, terms), rng.randint(1, 2)),),
                                 (-1,) * arity)
        table = expand(spec, 6)
        ns = naive_series(spec, 6)
        assert all(table.value_at(mm) == c for mm, c in ns.terms.items())
    # arctan branch continuity: exactly pi/2 on the crossing surface
    data_a = quadratic_point_data(aztec.spec, (1, 1, 1))
    val, _ = cone_plane_asymptotics(data_a, (0, 10000, 20000))
    theta = val * math.pi / (0.5 * 1.0)
    assert abs(theta - math.pi / 2) <= 1e-9
    # d=3, s=1 constant reduction
    assert cone_constant(1, 3, Fraction(2)) == 2 / (2 * math.pi)
    scoreboard(9, "dual involution/covariance x100, derivative-vs-FD x50, "
              "recurrence-vs-naive x30, branch continuity, constant reduction")


def test_criterion_10_smooth_benchmark(scoreboard):
    h = mp(2, (1, (0, 0)), (-1, (1, 0)), (-1, (0, 1)))
    one = MultiPoly.const(2, 1)
    cp = find_smooth_critical(h, (1, 1), [math.log(0.5)] * 2, starts=40, seed=0).points[0]
    errs = []
    for n in (8, 16, 32, 64):
        val = smooth_asymptotics(one, h, cp, (n, n), cone_direction_u=(-1, -1))
        exact = math.comb(2 * n, n)
        errs.append(abs(val - exact) / exact)
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 0.02
    scoreboard(10, f"diagonal binomial formula errors {[round(e, 4) for e in errs]} "
               f"decreasing, {errs[-1]:.4f} < 2% at n=64")


def _tr(A):
    return tuple(tuple(col) for col in zip(*A))


def _mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _fd(dual, alpha, m, r, h_rel=1e-4):
    def f(point):
        q = sum(point[i] * sum(float(dual[i][j]) * point[j] for j in range(3))
                for i in range(3))
        return q ** alpha

    h = h_rel * math.sqrt(sum(x * x for x in r))

    def deriv(fun, idx, point):
        p1, p2 = list(point), list(point)
        p1[idx] += h
        p2[idx] -= h
        return (fun(p1) - fun(p2)) / (2 * h)

    fun = f
    for i in range(3):
        for _ in range(m[i]):
            fun = (lambda g, idx: lambda point: deriv(g, idx, point))(fun, i)
    return fun(list(r))
