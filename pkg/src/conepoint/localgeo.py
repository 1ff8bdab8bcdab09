"""Local geometry at a candidate singular point.

Given a quasirational function and a point Z on the appropriate torus,
this module extracts the local data driving the asymptotic formulas: the
homogeneous part of each log-composed factor, the Lorentzian quadratic and
its dual form, the normalizing constant |M| = |det q|^(-1/2), the linear
factor covectors, and the classification of a query direction r against
the normal-cone geometry (elliptic cone interior, the nonconvex flange
reachable through the linear factor, the obstructed boundary arc, or
outside).

The dual form convention is strictly "matrix inverse of the quadratic's
matrix".  All computations stay in exact rational arithmetic whenever the
point and coefficients are rational.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .polyseries import (FIELD_RATIONAL, MultiPoly, TruncatedSeries,
                         log_compose_taylor)
from .oracle import QuasiRationalSpec, _as_int


class GeometryError(ValueError):
    """Raised when local data violates the quadratic-point requirements."""


class DegenerateError(GeometryError):
    pass


class SignatureError(GeometryError):
    pass


# -- series probes -----------------------------------------------------------


def vanishing_degree(s: TruncatedSeries) -> int:
    """Minimal total degree with a nonzero coefficient."""
    if s.is_zero():
        raise DegenerateError("series vanishes identically to its order")
    return min(sum(m) for m in s.terms)


def homogeneous_part(s: TruncatedSeries) -> MultiPoly:
    """All minimal-total-degree terms, as a homogeneous polynomial."""
    return s.homogeneous_component(vanishing_degree(s))


# -- small exact matrix helpers ----------------------------------------------

Matrix = Tuple[Tuple[object, ...], ...]


def _mat_is_exact(M: Matrix) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in M for x in row)


def mat_det(M: Matrix):
    n = len(M)
    A = [[Fraction(x) if not isinstance(x, (float, complex)) else x for x in row] for row in M]
    det = Fraction(1) if _mat_is_exact(M) else 1.0
    for col in range(n):
        piv = None
        for r in range(col, n):
            if A[r][col] != 0:
                piv = r
                break
        if piv is None:
            return det * 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        inv = 1 / A[col][col] if not isinstance(A[col][col], Fraction) \
            else Fraction(1) / A[col][col]
        for r in range(col + 1, n):
            f = A[r][col] * inv
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


def mat_inverse(M: Matrix) -> Matrix:
    """Exact Gauss-Jordan inverse (Fractions in, Fractions out)."""
    n = len(M)
    exact = _mat_is_exact(M)
    A = [[Fraction(x) if exact else float(x) for x in row] + [
        (Fraction(1) if exact else 1.0) if i == j else (Fraction(0) if exact else 0.0)
        for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise DegenerateError("singular quadratic form")
        A[col], A[piv] = A[piv], A[col]
        pivval = A[col][col]
        A[col] = [x / pivval for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


def mat_vec(M: Matrix, v: Sequence):
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


# -- quadratic classification -------------------------------------------------


def classify_quadratic(h: MultiPoly, u: Sequence, tol: float = 1e-9) -> Tuple[Matrix, bool]:
    """Symmetric matrix of a homogeneous quadratic, sign-fixed so q(u) > 0.

    Complex coefficients are allowed if they share a global phase (the
    phase of the largest coefficient is removed, residual imaginary parts
    must stay below tol).  The signature must be Lorentzian: one positive
    and d-1 negative eigenvalues.
    """
    d = h.arity
    if h.is_zero() or any(sum(m) != 2 for m in h.terms):
        raise GeometryError("expected a homogeneous quadratic")
    terms = dict(h.terms)
    if any(isinstance(c, complex) for c in terms.values()):
        cmax = max(terms.values(), key=abs)
        phase = cmax / abs(cmax)
        terms = {m: c / phase for m, c in terms.items()}
        scale = max(abs(c) for c in terms.values())
        if any(abs(c.imag) > tol * scale for c in terms.values()):
            raise GeometryError("quadratic part is not a phase multiple of a real form")
        terms = {m: c.real for m, c in terms.items()}
    M = [[Fraction(0) if h.field_tag == FIELD_RATIONAL else 0.0] * d for _ in range(d)]
    for m, c in terms.items():
        idx = [i for i in range(d) for _ in range(m[i])]
        i, j = idx[0], idx[1]
        if i == j:
            M[i][i] = c
        else:
            half = c / 2 if not isinstance(c, Fraction) else c / Fraction(2)
            M[i][j] = M[j][i] = half
    M = tuple(tuple(row) for row in M)
    qu = _bilinear(M, u, u)
    flipped = False
    if qu < 0:
        M = tuple(tuple(-x for x in row) for row in M)
        flipped = True
    elif qu == 0:
        raise GeometryError("reference direction lies on the quadratic's null cone")
    eig = np.linalg.eigvalsh(np.array(M, dtype=float))
    emax = max(abs(e) for e in eig)
    if any(abs(e) <= 1e-12 * emax for e in eig):
        raise DegenerateError("quadratic form is singular")
    npos = sum(1 for e in eig if e > 0)
    if npos != 1:
        raise SignatureError(f"signature ({npos},{len(eig) - npos}) is not Lorentzian")
    return M, flipped


def dual_quadratic(q_matrix: Matrix) -> Matrix:
    """Matrix of the dual quadratic form: the inverse matrix."""
    return mat_inverse(q_matrix)


def normalizer_absdet(q_matrix: Matrix):
    """|det q|^(-1/2); exact when 1/|det| is a perfect rational square."""
    det = mat_det(q_matrix)
    if det == 0:
        raise DegenerateError("singular quadratic form")
    if isinstance(det, Fraction):
        x = 1 / abs(det)
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
        return math.sqrt(float(x))
    return 1.0 / math.sqrt(abs(det))


def _bilinear(M: Matrix, a: Sequence, b: Sequence):
    return sum(a[i] * sum(M[i][j] * b[j] for j in range(len(b))) for i in range(len(a)))


# -- point data ----------------------------------------------------------------


class DirectionTag(Enum):
    InteriorEllipticCone = "InteriorEllipticCone"
    InteriorE = "InteriorE"
    ObstructedBoundary = "ObstructedBoundary"
    OutsideNormalCone = "OutsideNormalCone"
    Indeterminate = "Indeterminate"


@dataclass(frozen=True)
class DirectionClass:
    tag: DirectionTag
    margin: float  # signed proxy distance used for tolerance decisions


@dataclass(frozen=True)
class QuadraticPointData:
    """Everything local to one quadratic singular point."""

    arity: int
    point_Z: Tuple[object, ...]
    log_point: Tuple[complex, ...]
    s: object                      # power of the quadratic factor
    q_matrix: Matrix
    dual_matrix: Matrix
    normalizer_absdet: object
    numerator_value: object        # collected numerator value P(Z)
    linear_factors: Tuple[Tuple[Tuple[object, ...], int], ...]
    cone_direction_u: Tuple[object, ...]
    sign_flipped: bool
    p_series: TruncatedSeries
    q_series: TruncatedSeries
    h_series: Tuple[TruncatedSeries, ...]
    numerator_valuation: int

    @property
    def k(self) -> int:
        return len(self.linear_factors)

    def dual_eval(self, a: Sequence, b: Sequence):
        return _bilinear(self.dual_matrix, a, b)


def dual_eval(data: QuadraticPointData, a: Sequence, b: Sequence):
    """Pairing a^T (dual matrix) b."""
    return data.dual_eval(a, b)


def quadratic_point_data(spec: QuasiRationalSpec, Z: Sequence, order: int = 6,
                         tol: float = 1e-9) -> QuadraticPointData:
    """Assemble the local data of a quadratic point of the pole variety.

    Factors are split by their vanishing degree at Z: nonvanishing factors
    are absorbed into the numerator, degree-1 factors become linear
    covectors (sign-fixed against the cone direction), and exactly one
    degree-2 factor supplies the Lorentzian quadratic.
    """
    u = spec.cone_direction_u
    p_series = log_compose_taylor(spec.numerator, Z, order)
    q_series = None
    s_quad = None
    linear: List[Tuple[Tuple[object, ...], int]] = []
    h_series = []
    for poly, power in spec.factors:
        series = log_compose_taylor(poly, Z, order)
        if series.is_zero():
            raise GeometryError("a factor vanishes identically at the point")
        v = vanishing_degree(series)
        if v == 0:
            p_series = p_series * series.pow_real(-power if isinstance(power, (int, float))
                                                  else -Fraction(power))
        elif v == 1:
            n = _as_int(power)
            if n is None or n < 1:
                raise GeometryError("linear factors must carry positive integer powers")
            ell = _linear_covector(homogeneous_part(series), u, tol)
            linear.append((ell, n))
            h_series.append(series)
        elif v == 2:
            if q_series is not None:
                raise GeometryError("more than one quadratic factor vanishes at the point")
            q_series = series
            s_quad = power
        else:
            raise GeometryError(f"factor vanishes to order {v}; only quadratic cone points "
                                "and smooth factors are supported")
    if q_series is None:
        raise GeometryError("no quadratic factor vanishes at the point")
    q_matrix, flipped = classify_quadratic(homogeneous_part(q_series), u, tol)
    dual = dual_quadratic(q_matrix)
    log_pt = tuple(cmath.log(complex(z)) for z in Z)
    return QuadraticPointData(
        arity=spec.arity,
        point_Z=tuple(Z),
        log_point=log_pt,
        s=s_quad,
        q_matrix=q_matrix,
        dual_matrix=dual,
        normalizer_absdet=normalizer_absdet(q_matrix),
        numerator_value=p_series.constant_term(),
        linear_factors=tuple(linear),
        cone_direction_u=tuple(u),
        sign_flipped=flipped,
        p_series=p_series,
        q_series=q_series,
        h_series=tuple(h_series),
        numerator_valuation=(0 if not p_series.is_zero() and p_series.constant_term() != 0
                             else (vanishing_degree(p_series) if not p_series.is_zero() else order + 1)),
    )


def _linear_covector(h: MultiPoly, u: Sequence, tol: float) -> Tuple[object, ...]:
    """Covector of a linear homogeneous part, oriented so that ell . u < 0."""
    d = h.arity
    ell = [Fraction(0)] * d
    for m, c in h.terms.items():
        i = next(j for j in range(d) if m[j] == 1)
        if isinstance(c, complex):
            if abs(c.imag) > tol * abs(c):
                raise GeometryError("linear factor covector is not real")
            c = c.real
        ell[i] = c
    lu = sum(a * b for a, b in zip(ell, u))
    if lu == 0:
        raise GeometryError("linear factor is tangent to the cone direction")
    if lu > 0:
        ell = [-x for x in ell]
    return tuple(ell)


# -- direction classification ---------------------------------------------------


def classify_direction(data: QuadraticPointData, r: Sequence, tol: float = 1e-9) -> DirectionClass:
    """Place a direction r against the local normal-cone geometry.

    With no linear factor the test is membership in the dual elliptic cone
    (dual form positive, r on the correct side of the axis).  With one
    linear factor, directions outside the elliptic cone may still be
    reachable as r = lambda*ell + w with w interior to the cone; whether
    the concave quadratic lambda -> q*(r - lambda*ell) admits such a
    lambda is decided in closed form.  Within tol of any decision surface
    the answer is Indeterminate rather than a guess.
    """
    if data.k > 1:
        raise GeometryError("direction classification supports at most one linear factor")
    r = tuple(r)
    u = data.cone_direction_u
    rn2 = float(sum(float(x) * float(x) for x in r))
    if rn2 == 0:
        raise ValueError("zero direction")
    un = math.sqrt(sum(float(x) * float(x) for x in u))
    qrr = data.dual_eval(r, r)
    ru = sum(float(a) * float(b) for a, b in zip(r, u))
    axis_ok = ru < -tol * math.sqrt(rn2) * un
    inside = float(qrr) > tol * rn2 and axis_ok
    on_boundary = abs(float(qrr)) <= tol * rn2

    if data.k == 0:
        if inside:
            return DirectionClass(DirectionTag.InteriorEllipticCone, float(qrr) / rn2)
        if on_boundary:
            return DirectionClass(DirectionTag.Indeterminate, float(qrr) / rn2)
        return DirectionClass(DirectionTag.OutsideNormalCone, float(qrr) / rn2)

    ell, _ = data.linear_factors[0]
    ln2 = sum(float(x) * float(x) for x in ell)
    qll = data.dual_eval(ell, ell)
    if float(qll) >= -tol * ln2:
        raise GeometryError("linear factor lies inside the closed dual cone; "
                            "the intersection points are not real and distinct")
    qrl = data.dual_eval(r, ell)
    if inside:
        return DirectionClass(DirectionTag.InteriorEllipticCone, float(qrr) / rn2)
    if on_boundary:
        if float(qrl) < -tol * math.sqrt(rn2 * ln2):
            return DirectionClass(DirectionTag.ObstructedBoundary, float(qrr) / rn2)
        return DirectionClass(DirectionTag.Indeterminate, float(qrr) / rn2)

    # E test: does r = lambda*ell + w admit lambda > 0 with w interior?
    scale2 = rn2 * ln2
    lu = sum(float(a) * float(b) for a, b in zip(ell, u))  # < 0 by orientation
    disc = float(qrl) ** 2 - float(qll) * float(qrr)
    if abs(disc) <= tol * scale2:
        # r sits on a tangent line of the hull; decide by the double root
        lam_star = float(qrl) / float(qll)
        feasible = lam_star > tol * math.sqrt(rn2 / ln2) and (
            ru - lam_star * lu < -tol * math.sqrt(rn2) * un)
        if feasible:
            return DirectionClass(DirectionTag.Indeterminate, disc / scale2)
        return DirectionClass(DirectionTag.OutsideNormalCone, disc / scale2)
    if disc < 0:
        return DirectionClass(DirectionTag.OutsideNormalCone, disc / scale2)
    root = math.sqrt(disc)
    lam_lo = (float(qrl) + root) / float(qll)
    lam_hi = (float(qrl) - root) / float(qll)
    # w . u = r.u - lambda * (ell.u) must stay negative
    lam_cap = (ru - 0.0) / lu if lu < 0 else float("inf")
    lo = max(lam_lo, tol * math.sqrt(rn2 / ln2))
    hi = min(lam_hi, lam_cap)
    width = hi - lo
    if width > tol * math.sqrt(rn2 / ln2):
        return DirectionClass(DirectionTag.InteriorE, width / math.sqrt(rn2 / ln2))
    if width > -tol * math.sqrt(rn2 / ln2):
        return DirectionClass(DirectionTag.Indeterminate, width)
    return DirectionClass(DirectionTag.OutsideNormalCone, width)


# -- sampling hyperbolicity check ------------------------------------------------


def hyperbolicity_check(h: MultiPoly, v: Sequence, samples: int = 64,
                        seed: int = 0, tol: float = 1e-8) -> bool:
    """Sampled root-reality test: h(x + t v) has only real roots in t.

    This is the definition of hyperbolicity in direction v, checked on
    `samples` random real base points.
    """
    val = h.eval(list(v))
    if val == 0:
        raise GeometryError("h(v) = 0: not a valid hyperbolicity direction")
    deg = h.total_degree()
    rng = random.Random(seed)
    d = h.arity
    for _ in range(samples):
        x = [rng.gauss(0.0, 1.0) for _ in range(d)]
        coeffs = _line_restriction(h, x, v, deg)
        roots = np.roots(coeffs[::-1])
        for z in roots:
            if abs(z.imag) > tol * (1.0 + abs(z)):
                return False
    return True


def _line_restriction(h: MultiPoly, x: Sequence[float], v: Sequence[float],
                      deg: int) -> List[float]:
    """Coefficients (ascending) of t -> h(x + t v)."""
    out = [0.0] * (deg + 1)
    for m, c in h.terms.items():
        poly = [float(c)]
        for i, e in enumerate(m):
            for _ in range(e):
                poly = _mul_linear(poly, float(x[i]), float(v[i]))
        for k, a in enumerate(poly):
            out[k] += a
    return out


def _mul_linear(poly: List[float], a: float, b: float) -> List[float]:
    out = [0.0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += c * a
        out[i + 1] += c * b
    return out
