"""Asymptotic contribution formulas at quadratic cone points.

For a function P/Q^s whose log-composition vanishes quadratically at a
torus point Z with Lorentzian homogeneous part q, the coefficients along
interior directions r behave like

    Z^(-r) * |M| / (2^(2s-1) pi^(d/2-1) Gamma(s) Gamma(s+1-d/2))
           * sum c(m,l) (-1)^|m| d^m/dr^m [ qdual(r)^(s+l-d/2) ],

where qdual is the inverse-matrix dual form, |M| = |det q|^(-1/2), and the
c(m,l) come from re-expanding the local series in falling powers of q.
With one additional smooth factor (d=3, s=1) the leading term instead
involves an iterated residue and the angle

    theta = atan2( sqrt(qdual(r,r)) sqrt(-qdual(l,l)), qdual(r,l) )

taken in (0, pi): contribution = Z^(-r) P(Z) Res2/pi * theta inside the
elliptic cone, and Z^(-r) P(Z) Res2 on the nonconvex flange.  Smooth
(simple-pole) critical points contribute the classical Gaussian-curvature
term.  Everything is summed over the discovered critical points, which
handles parity cancellation between conjugate points automatically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .polyseries import MultiPoly, TruncatedSeries
from .oracle import QuasiRationalSpec, _as_int
from .localgeo import (DegenerateError, DirectionTag, GeometryError, Matrix,
                       QuadraticPointData, classify_direction, homogeneous_part,
                       log_compose_taylor, quadratic_point_data, vanishing_degree)
from . import critpoints as _crit


class GammaPoleError(ValueError):
    """The power s hits a pole of the explicit constant."""


class RefusalError(RuntimeError):
    """Raised when asymptotics are declined (obstructed or unsupported)."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def gamma_strict(x: float) -> float:
    xf = float(x)
    if abs(xf - round(xf)) < 1e-9 and round(xf) <= 0:
        raise GammaPoleError(f"gamma pole at {x}")
    return math.gamma(xf)


def cone_constant(s, d: int, absdet) -> float:
    """|M| / (2^(2s-1) pi^(d/2-1) Gamma(s) Gamma(s+1-d/2)).

    The d=3, s=1 case reduces to |M|/(2 pi) by the Gamma identities; that
    reduction is applied exactly and asserted against the general formula
    at import time.
    """
    sf = float(s)
    g1 = gamma_strict(sf)
    g2 = gamma_strict(sf + 1.0 - d / 2.0)
    if d == 3 and sf == 1.0:
        return float(absdet) / (2.0 * math.pi)
    return float(absdet) / (2.0 ** (2.0 * sf - 1.0) * math.pi ** (d / 2.0 - 1.0) * g1 * g2)


# the simplified d=3, s=1 constant must agree with the general expression
assert abs(2.0 ** 1 * math.pi ** 0.5 * gamma_strict(1.0) * gamma_strict(0.5)
           - 2.0 * math.pi) < 1e-13 * 2.0 * math.pi


def z_power_neg(Z: Sequence, r: Sequence[int]):
    """Z^(-r), exact for rational Z and integer r."""
    out = Fraction(1)
    for z, e in zip(Z, r):
        e = int(e)
        if isinstance(z, (int, Fraction)):
            out = out * (Fraction(z) ** (-e))
        else:
            out = complex(out) * complex(z) ** (-e)
    if isinstance(out, complex) and abs(out.imag) < 1e-14 * (1 + abs(out)):
        out = out.real
    return out


# -- local series expansion table ------------------------------------------------


@dataclass
class ExpansionTable:
    """Coefficients c(m, l, n) of the falling-power re-expansion

        p * q^(-s) * prod_j h_j^(-n_j)
          = sum c(m,l,n) y^m qtilde(y)^(-s-l) prod_j htilde_j(y)^(-n_j-n).

    c(m,l,n) vanishes unless |m| >= 3l + (k+1)n; the table is complete for
    all |m| - 2l - kn < max_order.
    """

    entries: Dict[Tuple[Tuple[int, ...], int, int], object]
    max_order: int
    k: int

    def items(self):
        return self.entries.items()


def _binom_general(alpha, n: int):
    out = Fraction(1) if not isinstance(alpha, float) else 1.0
    a = Fraction(alpha) if not isinstance(alpha, float) else alpha
    for i in range(n):
        out = out * (a - i) / (i + 1)
    return out


def expansion_coefficients(p_series: TruncatedSeries, q_series: TruncatedSeries,
                           h_series_list: Sequence[TruncatedSeries], s,
                           n_list: Sequence[int], N: int) -> ExpansionTable:
    """Build the c(m,l,n) table by binomial re-expansion of the remainders."""
    k = len(h_series_list)
    if k > 1:
        raise GeometryError("expansion supports at most one linear factor")
    qt = homogeneous_part(q_series)
    if qt.total_degree() != 2:
        raise GeometryError("quadratic factor must vanish to order exactly 2")
    Rq = q_series - TruncatedSeries.from_poly(qt, q_series.order)
    if k == 1:
        ht = homogeneous_part(h_series_list[0])
        if ht.total_degree() != 1:
            raise GeometryError("smooth factor must vanish to order exactly 1")
        Rh = h_series_list[0] - TruncatedSeries.from_poly(ht, h_series_list[0].order)
        n1 = n_list[0]
    entries: Dict[Tuple[Tuple[int, ...], int, int], object] = {}
    # truncated products are exact within their order, so entries beyond the
    # available local order are simply absent rather than wrong
    rq_pow = TruncatedSeries.const(p_series.arity, 1, p_series.order)
    for ell in range(0, N):
        if ell > 0:
            rq_pow = rq_pow * Rq
            if rq_pow.is_zero():
                break
        c_ell = _binom_general(-s if not isinstance(s, float) else -float(s), ell)
        inner = rq_pow * p_series
        if k == 0:
            _collect(entries, inner, ell, 0, c_ell, N, k)
        else:
            rh_pow = TruncatedSeries.const(p_series.arity, 1, p_series.order)
            for n in range(0, N):
                if n > 0:
                    rh_pow = rh_pow * Rh
                    if rh_pow.is_zero():
                        break
                c_n = _binom_general(-Fraction(n1), n)
                _collect(entries, inner * rh_pow, ell, n, c_ell * c_n, N, k)
    return ExpansionTable(entries, N, k)


def _collect(entries, series: TruncatedSeries, ell: int, n: int, coeff, N: int, k: int):
    for m, c in series.terms.items():
        if sum(m) - 2 * ell - k * n < N:
            key = (m, ell, n)
            entries[key] = entries.get(key, 0) + coeff * c


# -- derivatives of dual-form powers ----------------------------------------------


def dual_power_derivative(dual_matrix: Matrix, alpha, m: Sequence[int], r: Sequence):
    """Value of d^m/dr^m [ qdual(r,r)^alpha ] at r.

    Carried out by the exact product-rule recursion on pairs
    (polynomial, power offset); only the final powers of qdual(r,r) are
    floating point (and exact for integer exponents over rationals).
    """
    d = len(dual_matrix)
    grad_rows = [MultiPoly(d, {tuple(int(i == j) for i in range(d)): 2 * dual_matrix[row][j]
                               for j in range(d) if dual_matrix[row][j] != 0})
                 for row in range(d)]
    terms: Dict[int, MultiPoly] = {0: MultiPoly.const(d, 1)}
    a = Fraction(alpha) if not isinstance(alpha, float) else alpha
    for i, cnt in enumerate(m):
        for _ in range(int(cnt)):
            new: Dict[int, MultiPoly] = {}
            for off, poly in terms.items():
                dp = poly.diff(i)
                if not dp.is_zero():
                    _acc(new, off, dp)
                factor = poly * grad_rows[i]
                if not factor.is_zero():
                    _acc(new, off + 1, factor.scale(a - off))
            terms = new
    qval = sum(r[i] * sum(dual_matrix[i][j] * r[j] for j in range(d)) for i in range(d))
    total = 0
    for off, poly in terms.items():
        expo = a - off
        pv = poly.eval(list(r))
        if pv == 0:
            continue
        if qval == 0:
            if expo < 0:
                raise DegenerateError("dual form vanishes at r with a negative power")
            total += pv * (0.0 if expo > 0 else 1.0)
            continue
        if isinstance(expo, Fraction) and expo.denominator == 1 and isinstance(qval, Fraction):
            total = total + pv * qval ** int(expo)
        else:
            if float(qval) < 0:
                raise DegenerateError("dual form negative where a fractional power is needed")
            total = total + float(pv) * float(qval) ** float(expo)
    return total


def _acc(store: Dict[int, MultiPoly], key: int, poly: MultiPoly):
    if key in store:
        store[key] = store[key] + poly
    else:
        store[key] = poly


# -- the quadratic-point series ----------------------------------------------------


def quadratic_asymptotics(data: QuadraticPointData, table: ExpansionTable,
                          r: Sequence[int], N: Optional[int] = None):
    """Contribution of a bare quadratic point (no linear factors) at direction r."""
    if data.k != 0:
        raise GeometryError("quadratic-point series requires k = 0")
    cls = classify_direction(data, r)
    if cls.tag is not DirectionTag.InteriorEllipticCone:
        raise RefusalError(f"direction {tuple(r)} is {cls.tag.value}",
                           {"class": cls.tag.value, "margin": cls.margin})
    N = table.max_order if N is None else N
    d = data.arity
    s = data.s
    C = cone_constant(s, d, data.normalizer_absdet)
    acc = 0.0
    for (m, ell, n), c in table.items():
        if n != 0 or sum(m) - 2 * ell >= N:
            continue
        alpha = (Fraction(s) if not isinstance(s, float) else s) + ell - Fraction(d, 2)
        deriv = dual_power_derivative(data.dual_matrix, alpha, m, r)
        acc = acc + float(c) * (-1.0) ** sum(m) * float(deriv)
    return z_power_neg(data.point_Z, r) * C * acc


# -- double residue & the cone-plane formula ----------------------------------------


def double_residue(qtilde: MultiPoly, ell: Sequence, alpha: Sequence, tol: float = 1e-12):
    """Iterated residue of the projective form along a common zero line.

    Of the three coordinate-pair expressions (all equal where defined,
    by the Euler relations on the zero line) the one with the largest
    denominator is used.  Exact over the rationals.
    """
    if qtilde.arity != 3:
        raise GeometryError("double residue is a 3-variable construction")
    L = MultiPoly(3, {tuple(int(i == j) for i in range(3)): ell[j]
                      for j in range(3) if ell[j] != 0})
    qa = qtilde.eval(list(alpha))
    la = L.eval(list(alpha))
    size = max(abs(float(x)) for x in alpha)
    if abs(complex(qa)) > tol * max(1.0, size ** 2) or abs(complex(la)) > tol * max(1.0, size):
        raise GeometryError("representative point is not on the common zero line")
    A = [qtilde.diff(i).eval(list(alpha)) for i in range(3)]
    Lg = [L.diff(i).eval(list(alpha)) for i in range(3)]
    x, y, z = alpha
    cands = [
        (z, A[0] * Lg[1] - A[1] * Lg[0]),
        (x, A[1] * Lg[2] - A[2] * Lg[1]),
        (y, A[2] * Lg[0] - A[0] * Lg[2]),
    ]
    num, den = max(cands, key=lambda t: abs(complex(t[1])))
    if abs(complex(den)) <= tol * max(1.0, size):
        raise DegenerateError("all three residue denominators are degenerate")
    if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
        return Fraction(num, 1) / Fraction(den)
    return num / den


def intersection_lines(data: QuadraticPointData) -> List[Tuple[object, ...]]:
    """The two projective lines where the quadratic and the plane both vanish.

    Returned as affine representative points; exact rational when the
    discriminant is a perfect square (all shipped applications).
    """
    if data.k != 1:
        raise GeometryError("intersection lines need exactly one linear factor")
    ell = data.linear_factors[0][0]
    piv = max(range(3), key=lambda i: abs(float(ell[i])))
    basis = []
    for j in range(3):
        if j == piv:
            continue
        v = [Fraction(0)] * 3
        v[j] = Fraction(ell[piv])
        v[piv] = -Fraction(ell[j])
        basis.append(tuple(v))
    v1, v2 = basis
    M = data.q_matrix
    a = _bili(M, v1, v1)
    b = 2 * _bili(M, v1, v2)
    c = _bili(M, v2, v2)
    # roots of a t^2 + b t + c = 0 as (lam : mu)
    if a == 0 and c == 0:
        pairs = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    elif a == 0:
        pairs = [(Fraction(1), Fraction(0)), (-Fraction(c), Fraction(b))]
    else:
        disc = b * b - 4 * a * c
        if float(disc) <= 0:
            raise GeometryError("intersection lines are not real and distinct")
        root = _sqrt_maybe_exact(disc)
        pairs = [((-b + root) / (2 * a) if not isinstance(root, float)
                  else (float(-b) + root) / float(2 * a), 1),
                 ((-b - root) / (2 * a) if not isinstance(root, float)
                  else (float(-b) - root) / float(2 * a), 1)]
    out = []
    for lam, mu in pairs:
        pt = tuple(lam * a1 + mu * a2 for a1, a2 in zip(v1, v2))
        scale = max(abs(float(x)) for x in pt)
        if scale == 0:
            raise DegenerateError("degenerate intersection representative")
        out.append(pt)
    return out


def _sqrt_maybe_exact(x):
    if isinstance(x, Fraction):
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
    return math.sqrt(float(x))


def _bili(M, a, b):
    return sum(a[i] * sum(M[i][j] * b[j] for j in range(len(b))) for i in range(len(a)))


def oriented_double_residue(data: QuadraticPointData, tol: float = 1e-12):
    """Res2 with the orientation fixed to the positive branch.

    The two intersection lines carry opposite residue values; the
    contribution formulas use the branch that continuity across the
    flange boundary realizes in the probability applications, which is
    the positive one.
    """
    qt = MultiPoly(3, {})
    d = data.arity
    terms = {}
    for i in range(d):
        for j in range(i, d):
            c = data.q_matrix[i][j] if i == j else 2 * data.q_matrix[i][j]
            if c != 0:
                m = [0] * d
                m[i] += 1
                m[j] += 1
                terms[tuple(m)] = c
    qt = MultiPoly(d, terms)
    ell = data.linear_factors[0][0]
    vals = [double_residue(qt, ell, alpha, tol) for alpha in intersection_lines(data)]
    if len(vals) == 2 and abs(float(vals[0]) + float(vals[1])) > 1e-9 * abs(float(vals[0])):
        raise GeometryError("inconsistent residue orientation between the two lines")
    pos = [v for v in vals if float(v) > 0]
    if not pos:
        raise DegenerateError("no positive residue branch found")
    return pos[0]


def cone_plane_asymptotics(data: QuadraticPointData, r: Sequence[int],
                           tol: float = 1e-9):
    """Leading contribution with one quadratic and one smooth factor (d=3, s=1)."""
    if data.arity != 3:
        raise GeometryError("cone-plane formula is three-dimensional")
    if _as_int(data.s) != 1:
        raise GeometryError("cone-plane formula needs the quadratic to first power")
    if data.k != 1 or data.linear_factors[0][1] != 1:
        raise GeometryError("cone-plane formula needs exactly one simple smooth factor")
    if data.numerator_value == 0:
        raise RefusalError("numerator vanishes at the point; only a decay bound is available",
                           {"numerator_valuation": data.numerator_valuation})
    ell = data.linear_factors[0][0]
    qll = data.dual_eval(ell, ell)
    if float(qll) >= 0:
        raise GeometryError("dual pairing of the smooth factor must be negative "
                            "(real distinct intersections)")
    cls = classify_direction(data, r, tol)
    res2 = oriented_double_residue(data)
    zr = z_power_neg(data.point_Z, r)
    pz = data.numerator_value
    if cls.tag is DirectionTag.InteriorEllipticCone:
        qrr = data.dual_eval(r, r)
        qrl = data.dual_eval(r, ell)
        theta = math.atan2(math.sqrt(float(qrr)) * math.sqrt(-float(qll)), float(qrl))
        return zr * pz * float(res2) / math.pi * theta, cls
    if cls.tag is DirectionTag.InteriorE:
        return zr * pz * float(res2), cls
    if cls.tag is DirectionTag.OutsideNormalCone:
        return 0 * zr, cls
    raise RefusalError(f"direction {tuple(r)} is {cls.tag.value}; no asymptotics on "
                       "the obstructed arc", {"class": cls.tag.value, "margin": cls.margin})


# -- smooth (simple-pole) contributions ----------------------------------------------


def smooth_asymptotics(P: MultiPoly, H: MultiPoly, cp: _crit.CriticalPoint,
                       r: Sequence[int], cone_direction_u: Optional[Sequence] = None,
                       nonvanishing_value=1, tol: float = 1e-9):
    """Leading smooth-point contribution via the log-variety curvature.

    The defining factor is sign-normalized to be positive on the
    convergence side (probed along cone_direction_u); the curvature is the
    determinant of the second fundamental form of the log-variety in a
    tangent frame, with principal square roots.  Honest only up to phase
    at non-real points.
    """
    d = H.arity
    Z = cp.Z
    z = [cmath.log(complex(v)) for v in Z]
    g = np.array([complex(Z[i]) * complex(H.diff(i).eval(Z)) for i in range(d)])
    hess = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            v = complex(Z[i]) * complex(Z[j]) * complex(H.diff(i).diff(j).eval(Z))
            if i == j:
                v += g[i]
            hess[i][j] = v
    if cone_direction_u is not None:
        side = complex(np.dot(g, np.array([complex(x) for x in cone_direction_u])))
        if side.real < 0:
            g = -g
            hess = -hess
    gnorm2 = complex(np.dot(g, g))  # bilinear, not hermitian
    gnorm = cmath.sqrt(gnorm2)
    if abs(gnorm) < tol:
        raise DegenerateError("vanishing log-gradient at the smooth point")
    frame = _bilinear_tangent_frame(g)
    II = np.empty((d - 1, d - 1), dtype=complex)
    for a in range(d - 1):
        for b in range(d - 1):
            II[a][b] = -np.dot(frame[a], hess @ frame[b]) / gnorm
    eig = np.linalg.eigvals(II)
    kappa = np.prod(eig)
    if abs(kappa) < tol:
        raise DegenerateError("curvature-degenerate smooth point")
    sqrt_kappa = np.prod([cmath.sqrt(e) for e in eig])
    rnorm = math.sqrt(sum(float(x) ** 2 for x in r))
    pval = complex(P.eval(Z)) * complex(nonvanishing_value)
    zr = complex(np.prod([complex(Z[i]) ** (-int(r[i])) for i in range(d)]))
    val = complex((2.0 * math.pi * rnorm) ** ((1 - d) / 2.0) * pval / (sqrt_kappa * gnorm) * zr)
    if abs(val.imag) < 1e-12 * (1 + abs(val)):
        return val.real
    return val


def _bilinear_tangent_frame(g: np.ndarray) -> List[np.ndarray]:
    """Vectors spanning {v : g.v = 0}, orthonormal for the bilinear form."""
    d = len(g)
    _, _, vh = np.linalg.svd(g.reshape(1, d))
    cand = [vh[i].conj() for i in range(1, d)]
    frame: List[np.ndarray] = []
    for v in cand:
        v = v - (v @ g) / (g @ g) * g
        for w in frame:
            v = v - (v @ w) * w
        n2 = complex(v @ v)
        if abs(n2) < 1e-12:
            raise DegenerateError("isotropic tangent frame; curvature needs a regular frame")
        frame.append(v / cmath.sqrt(n2))
    return frame


# -- decay exponents -------------------------------------------------------------------


def local_degree(spec: QuasiRationalSpec, Z: Sequence, order: int = 6) -> int:
    """Homogeneous degree of the function at Z: numerator valuation minus
    power-weighted factor valuations."""
    pv = log_compose_taylor(spec.numerator, Z, order)
    deg = order + 1 if pv.is_zero() else vanishing_degree(pv)
    for poly, power in spec.factors:
        series = log_compose_taylor(poly, Z, order)
        v = 0 if series.is_zero() else vanishing_degree(series)
        deg -= float(power) * v if isinstance(power, float) else Fraction(power) * v
    return deg


def decay_exponent(spec: QuasiRationalSpec, points: Sequence[Tuple[Sequence, object]]) -> float:
    """Upper-bound decay exponent: a_r = O(|Z|^-r |r|^-alpha) with
    alpha = d + max over contributing points of the local degree."""
    if not points:
        raise ValueError("need at least one point")
    return float(spec.arity + max(float(deg) for _, deg in points))


# -- totals ------------------------------------------------------------------------------


@dataclass(frozen=True)
class PointContribution:
    Z: Tuple[object, ...]
    formula: str
    direction_class: str
    value: object


@dataclass(frozen=True)
class AsymptoticEstimate:
    direction: Tuple[int, ...]
    value: object
    decay_exponent: float
    per_point: Tuple[PointContribution, ...]
    formula_tag: str
    notes: Tuple[str, ...] = ()


def total_asymptotics(spec: QuasiRationalSpec, r: Sequence[int],
                      points: Optional[Sequence[Sequence]] = None,
                      order_terms: int = 1, x: Optional[Sequence[float]] = None,
                      series_order: int = 8, tol: float = 1e-9,
                      seed: int = 0) -> AsymptoticEstimate:
    """Sum the quadratic-point contributions over the critical set.

    points may be supplied (e.g. from a preset); otherwise the singular
    points of every factor on the |Z_j| = e^{x_j} torus are discovered
    numerically.  Directions outside the normal cone at every point yield
    a zero estimate flagged as exponentially small; obstructed directions
    raise RefusalError.
    """
    r = tuple(int(e) for e in r)
    if points is None:
        x = x or [0.0] * spec.arity
        found = []
        for poly, _ in spec.factors:
            rep = _crit.find_singular_points(poly, x, seed=seed)
            found.extend(p.Z for p in rep.points)
        points = found
        if not points:
            raise RefusalError("no quadratic points found on the torus",
                               {"x": list(x)})
    contribs: List[PointContribution] = []
    notes: List[str] = []
    total = 0
    degs = []
    any_interior = False
    for Z in points:
        data = quadratic_point_data(spec, Z, order=series_order, tol=tol)
        degs.append((Z, local_degree(spec, Z)))
        if data.k == 0:
            cls = classify_direction(data, r, tol)
            if cls.tag is DirectionTag.OutsideNormalCone:
                contribs.append(PointContribution(tuple(Z), "quadratic-point-series",
                                                  cls.tag.value, 0))
                continue
            table = expansion_coefficients(data.p_series, data.q_series, (), data.s, (),
                                           order_terms)
            val = quadratic_asymptotics(data, table, r, order_terms)
            contribs.append(PointContribution(tuple(Z), "quadratic-point-series",
                                              cls.tag.value, val))
            any_interior = True
            total = total + val
        elif data.k == 1:
            val, cls = cone_plane_asymptotics(data, r, tol)
            tag = ("cone-plane-arctan" if cls.tag is DirectionTag.InteriorEllipticCone
                   else "cone-plane-flange" if cls.tag is DirectionTag.InteriorE
                   else "outside")
            contribs.append(PointContribution(tuple(Z), tag, cls.tag.value, val))
            if cls.tag is not DirectionTag.OutsideNormalCone:
                any_interior = True
                total = total + val
        else:
            raise RefusalError("more than one smooth factor through a quadratic point "
                               "is unsupported", {"k": data.k})
    if not any_interior:
        notes.append("direction outside every normal cone: coefficients are "
                     "exponentially small")
        tag = "exponential-decay"
    else:
        tag = contribs[0].formula if len({c.formula for c in contribs if c.value != 0}) <= 1 \
            else "mixed"
    alpha = decay_exponent(spec, degs) if degs else float(spec.arity)
    if isinstance(total, complex) and abs(total.imag) < 1e-12 * (1 + abs(total)):
        total = total.real
    return AsymptoticEstimate(r, total, alpha, tuple(contribs), tag, tuple(notes))
