"""The five shipped applications as ready-made quasirational specs.

Each preset bundles the spec, its known quadratic points on the unit
torus, a closed-form reference evaluator for the final asymptotic answer
(implemented directly from the constants here, independently of the
formula engine), and an independent membership test for the validity
region.  Cross-model identities (creation rates, step-simulation of the
quantum walk, superballot closed forms) live here too, as the honest
checks that the machinery reproduces known combinatorics.

Conventions fixed by simulation:

* the quantum-walk amplitude generating functions are derived as
  cofactors of I - M where M is the coin matrix with row xi scaled by
  Z X^{v_xi}; starting state ((0,0), N) corresponds to column N.  Sign and
  row/column orientation conventions vary between derivations of this
  system, so the construction shipped here is matched exactly against the
  step simulator for all positions, chiralities and t <= 16.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .polyseries import MultiPoly
from .oracle import CoeffTable, QuasiRationalSpec, expand
from .localgeo import DirectionTag


def _mp(arity, *terms) -> MultiPoly:
    return MultiPoly.from_terms(arity, [(e, c) for c, e in terms])


_HALF = Fraction(1, 2)

# denominator shared by the Aztec diamond and the 2-D Hadamard walk
_Q_CHECKER = _mp(3, (1, (0, 0, 0)), (-_HALF, (1, 0, 1)), (-_HALF, (-1, 0, 1)),
                 (-_HALF, (0, 1, 1)), (-_HALF, (0, -1, 1)), (1, (0, 0, 2)))
_H_AZTEC = _mp(3, (1, (0, 0, 0)), (-1, (0, 1, 1)))          # 1 - YZ
_P_AZTEC = _mp(3, (_HALF, (0, 0, 1)))                       # Z/2

_Q_GROVE = _mp(3, (3, (0, 0, 0)), (3, (1, 1, 1)), (-1, (1, 0, 0)), (-1, (0, 1, 0)),
               (-1, (0, 0, 1)), (-1, (1, 1, 0)), (-1, (1, 0, 1)), (-1, (0, 1, 1)))
_H_GROVE = _mp(3, (1, (0, 0, 0)), (-1, (0, 0, 1)))          # 1 - Z
_P_GROVE = _mp(3, (2, (0, 0, 2)))                           # 2 Z^2

_Q_FLS = _mp(3, (3, (0, 0, 0)), (-2, (1, 0, 0)), (-2, (0, 1, 0)), (-2, (0, 0, 1)),
             (1, (1, 1, 0)), (1, (1, 0, 1)), (1, (0, 1, 1)))

_Q_SUPER_CORE = _mp(3, (2, (0, 0, 0)), (-1, (1, 0, 0)), (-1, (0, 1, 0)),
                    (-1, (0, 0, 1)), (1, (1, 1, 1)))        # 2 - X - Y - Z + XYZ
_Q_SUPER_SQRT = _mp(3, (1, (0, 0, 0)), (-4, (1, 0, 1)))     # 1 - 4XZ
_Q_SUPER_POLE = _mp(3, (1, (0, 0, 0)), (-1, (1, 0, 0)), (-1, (0, 1, 0)),
                    (-1, (0, 0, 1)), (4, (1, 1, 1)))        # 1 - X - Y - Z + 4XYZ
_P_SUPER = _mp(3, (1, (0, 0, 0)), (-2, (1, 0, 0)))          # 1 - 2X


@dataclass(frozen=True)
class Preset:
    name: str
    spec: QuasiRationalSpec
    known_points: Tuple[Tuple[object, ...], ...]
    reference_formula: Optional[Callable[[Sequence[int]], object]]
    validity_region: Optional[Callable[[Sequence], DirectionTag]]
    companions: Dict[str, QuasiRationalSpec] = field(default_factory=dict)
    notes: str = ""


def _hull_region_factory(qdual: Callable[[Sequence[float]], float],
                         ell: Tuple[float, ...], u: Tuple[float, ...],
                         tol: float = 1e-9) -> Callable[[Sequence], DirectionTag]:
    """Membership in the hull of the elliptic cone and the covector ray,
    decided by dense sampling of the decomposition parameter (an
    implementation independent of the closed-form classifier)."""

    def region(r: Sequence) -> DirectionTag:
        rf = [float(x) for x in r]
        rn2 = sum(x * x for x in rf)
        ru = sum(a * b for a, b in zip(rf, u))
        q = qdual(rf)
        if q > tol * rn2 and ru < 0:
            return DirectionTag.InteriorEllipticCone
        if abs(q) <= tol * rn2:
            qrl_proxy = qdual([a + 1e-7 * b for a, b in zip(rf, ell)]) - q
            return (DirectionTag.ObstructedBoundary if qrl_proxy < 0
                    else DirectionTag.Indeterminate)
        lam_hi = 4.0 * math.sqrt(rn2) / math.sqrt(sum(x * x for x in ell))
        lu = sum(a * b for a, b in zip(ell, u))
        for k in range(1, 4001):
            lam = lam_hi * k / 4000.0
            w = [a - lam * b for a, b in zip(rf, ell)]
            if qdual(w) > tol * rn2 and sum(a * b for a, b in zip(w, u)) < 0 \
                    and ru - lam * lu < 0:
                return DirectionTag.InteriorE
        return DirectionTag.OutsideNormalCone

    return region


# -- Aztec diamond --------------------------------------------------------------


def _aztec_reference(r: Sequence[int]):
    """Closed-form northgoing-probability limit: zero at even total index,
    else arctan(sqrt(t^2-2i^2-2j^2)/(t-2j))/pi on the interior."""
    i, j, t = (int(x) for x in r)
    if (i + j + t) % 2 == 0:
        return 0.0
    q = t * t - 2 * i * i - 2 * j * j
    if q <= 0:
        return None
    return math.atan2(math.sqrt(q), t - 2 * j) / math.pi


def _aztec() -> Preset:
    spec = QuasiRationalSpec(3, _P_AZTEC, ((_Q_CHECKER, 1), (_H_AZTEC, 1)),
                             (0, 0, -1), name="aztec")
    # the creation rates carry a factor 2 in their definition, so their
    # generating function is Z/Q rather than (Z/2)/Q
    creation = QuasiRationalSpec(3, _mp(3, (1, (0, 0, 1))), ((_Q_CHECKER, 1),),
                                 (0, 0, -1), name="aztec-creation")
    region = _hull_region_factory(lambda v: v[2] ** 2 - 2 * v[0] ** 2 - 2 * v[1] ** 2,
                                  (0.0, 1.0, 1.0), (0.0, 0.0, -1.0))
    return Preset("aztec", spec, ((1, 1, 1), (-1, -1, -1)), _aztec_reference, region,
                  {"creation": creation},
                  "northgoing domino placement probabilities; indices (i,j,n), "
                  "support -n < i,j <= n with i+j+n odd")


# -- cube groves ----------------------------------------------------------------


def _grove_reference(r: Sequence[int]):
    a, b, c = (float(x) for x in r)
    q = 2 * (a * b + a * c + b * c) - (a * a + b * b + c * c)
    if q <= 0:
        return None
    return math.atan2(math.sqrt(q), a + b - c) / math.pi


def _cube_grove() -> Preset:
    spec = QuasiRationalSpec(3, _P_GROVE, ((_H_GROVE, 1), (_Q_GROVE, 1)),
                             (-1, -1, -1), name="cube_grove")
    creation = QuasiRationalSpec(3, _mp(3, (3, (0, 0, 1))), ((_Q_GROVE, 1),),
                                 (-1, -1, -1), name="cube_grove-creation")
    region = _hull_region_factory(
        lambda v: 2 * (v[0] * v[1] + v[0] * v[2] + v[1] * v[2])
        - (v[0] ** 2 + v[1] ** 2 + v[2] ** 2),
        (0.0, 0.0, 1.0), (-1.0, -1.0, -1.0))
    return Preset("cube_grove", spec, ((1, 1, 1),), _grove_reference, region,
                  {"creation": creation},
                  "horizontal-edge placement probabilities in barycentric indices")


def grove_relation_check(n: int, edge_table: Optional[CoeffTable] = None,
                         create_table: Optional[CoeffTable] = None) -> bool:
    """Creation rates vs probability differences, checked via the oracle.

    For order n >= 1 the identity reads (with barycentric tables)
    create(i,j,k-1) = (3/2) * (edge(i,j,k) - edge(i,j,k-1)) at every
    (i,j,k) with i+j+k = n.  The empty order n = 0 is skipped by
    convention (there are no faces to shuffle).
    """
    if n < 1:
        raise ValueError("relation is defined for n >= 1; n = 0 is skipped by convention")
    g = _cube_grove()
    if edge_table is None:
        edge_table = expand(g.spec, n)
    if create_table is None:
        create_table = expand(g.companions["creation"], n)
    three_half = Fraction(3, 2)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = n - i - j
            lhs = create_table.value_at((i, j, k - 1)) if k >= 1 else Fraction(0)
            prev = edge_table.value_at((i, j, k - 1)) if k >= 1 else Fraction(0)
            rhs = three_half * (edge_table.value_at((i, j, k)) - prev)
            if lhs != rhs:
                return False
    return True


def aztec_creation_check(n_max: int, p_table: Optional[CoeffTable] = None,
                         c_table: Optional[CoeffTable] = None) -> bool:
    """c(i,j,n) = 2 (p(i,j,n) - p(i,j-1,n-1)) for all levels <= n_max."""
    a = _aztec()
    if p_table is None:
        p_table = expand(a.spec, n_max)
    if c_table is None:
        c_table = expand(a.companions["creation"], n_max)
    for (i, j, n), c in c_table.nonzero_items():
        if n > n_max - 1:
            continue
        if c != 2 * (p_table.value_at((i, j, n)) - p_table.value_at((i, j - 1, n - 1))):
            return False
    for (i, j, n), p in p_table.nonzero_items():
        if n > n_max - 1:
            continue
        lhs = c_table.value_at((i, j, n))
        if lhs != 2 * (p - p_table.value_at((i, j - 1, n - 1))):
            return False
    return True


# -- two-dimensional Hadamard quantum walk ----------------------------------------

_QRW_STATES = "ENWS"
_QRW_DISP = ((1, 0), (0, 1), (-1, 0), (0, -1))
_QRW_COIN = tuple(tuple(_HALF if i == j else -_HALF for j in range(4)) for i in range(4))
_QRW_START = 1  # chirality N


def _det_poly(rows: List[List[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = MultiPoly.zero(rows[0][0].arity)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det_poly(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def _qrw_system() -> Tuple[List[List[MultiPoly]], MultiPoly]:
    monos = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]
    I_minus_M = [[MultiPoly.const(3, 1 if i == j else 0)
                  - _mp(3, (_QRW_COIN[i][j], monos[i])) for j in range(4)]
                 for i in range(4)]
    return I_minus_M, _det_poly(I_minus_M)


def _qrw_numerators() -> List[MultiPoly]:
    rows, _ = _qrw_system()
    out = []
    for xi in range(4):
        sub = [r[:xi] + r[xi + 1:] for k, r in enumerate(rows) if k != _QRW_START]
        c = _det_poly(sub)
        if (_QRW_START + xi) % 2 == 1:
            c = -c
        out.append(c)
    return out


def _qrw() -> Preset:
    _, det = _qrw_system()
    one_minus_z = _mp(3, (1, (0, 0, 0)), (-1, (0, 0, 1)))
    one_plus_z = _mp(3, (1, (0, 0, 0)), (1, (0, 0, 1)))
    if det != _Q_CHECKER * one_minus_z * one_plus_z:
        raise AssertionError("walk determinant does not factor as (1-Z^2) Q")
    numerators = _qrw_numerators()
    specs = {ch: QuasiRationalSpec(3, numerators[i],
                                   ((_Q_CHECKER, 1), (one_minus_z, 1), (one_plus_z, 1)),
                                   (0, 0, -1), name=f"qrw2d-{ch}")
             for i, ch in enumerate(_QRW_STATES)}
    region = _hull_region_factory(lambda v: v[2] ** 2 - 2 * v[0] ** 2 - 2 * v[1] ** 2,
                                  (0.0, 0.0, 1.0), (0.0, 0.0, -1.0))
    return Preset("qrw2d", specs["N"], ((1, 1, 1), (-1, -1, -1)), None, region,
                  dict(specs),
                  "amplitude generating functions per ending chirality, start ((0,0),N); "
                  "probabilities are the summed squared amplitudes")


def qrw_simulate(t: int) -> Dict[Tuple[int, int, int], Fraction]:
    """Exact state after t coin-then-shift steps from ((0,0),N).

    Keys are (x, y, chirality index in ENWS); values are rational
    amplitudes.  This is the independent oracle the generating functions
    are checked against.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    state: Dict[Tuple[int, int, int], Fraction] = {(0, 0, _QRW_START): Fraction(1)}
    for _ in range(t):
        new: Dict[Tuple[int, int, int], Fraction] = {}
        for (x, y, eta), amp in state.items():
            for xi in range(4):
                c = _QRW_COIN[xi][eta] * amp
                if c:
                    key = (x + _QRW_DISP[xi][0], y + _QRW_DISP[xi][1], xi)
                    val = new.get(key, Fraction(0)) + c
                    if val:
                        new[key] = val
                    elif key in new:
                        del new[key]
        state = new
    return state


# -- graph-polynomial fractional powers --------------------------------------------


def _fls_reference_factory(beta):
    bf = float(beta)
    const = 4.0 ** (1.0 - bf) / (math.sqrt(math.pi) * math.gamma(bf) * math.gamma(bf - 0.5))

    def ref(r: Sequence[int]):
        a, b, c = (float(x) for x in r)
        q = 2 * (a * b + a * c + b * c) - (a * a + b * b + c * c)
        if q <= 0:
            return None
        return const * q ** (bf - 1.5)

    return ref


def _k0_region_factory(region):
    def k0_region(r):
        tag = region(r)
        return tag if tag in (DirectionTag.InteriorEllipticCone,
                              DirectionTag.Indeterminate) else DirectionTag.OutsideNormalCone
    return k0_region


def _fls(beta=Fraction(3, 4)) -> Preset:
    beta = Fraction(beta) if not isinstance(beta, float) else beta
    if not float(beta) > 0.5:
        raise ValueError("the graph-polynomial preset needs beta > 1/2")
    spec = QuasiRationalSpec(3, MultiPoly.const(3, 1), ((_Q_FLS, beta),),
                             (-1, -1, -1), name="fls")
    region = _hull_region_factory(
        lambda v: 2 * (v[0] * v[1] + v[0] * v[2] + v[1] * v[2])
        - (v[0] ** 2 + v[1] ** 2 + v[2] ** 2),
        (0.0, 0.0, 1.0), (-1.0, -1.0, -1.0))
    return Preset("fls", spec, ((1, 1, 1),), _fls_reference_factory(beta),
                  _k0_region_factory(region), notes=f"fractional power beta = {beta}")


# -- superballot numbers --------------------------------------------------------------


def superballot_number(n: int, k: int, r: int) -> int:
    """Closed form (k+2r)! (2n+k-1)! / ((k-1)! r! n! (n+k+r)!)."""
    num = math.factorial(k + 2 * r) * math.factorial(2 * n + k - 1)
    den = (math.factorial(k - 1) * math.factorial(r) * math.factorial(n)
           * math.factorial(n + k + r))
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("superballot closed form is not integral here")
    return q


def _superballot_core_reference(r: Sequence[int]):
    a, b, c = (float(x) for x in r)
    q = 2 * (a * b + a * c + b * c) - (a * a + b * b + c * c)
    if q <= 0:
        return None
    return (2.0 / math.pi) * q ** -0.5


def _superballot(core: bool) -> Preset:
    full = QuasiRationalSpec(3, _P_SUPER, ((_Q_SUPER_SQRT, Fraction(1, 2)),
                                           (_Q_SUPER_POLE, 1)), (-1, -1, -1),
                             name="superballot")
    core_spec = QuasiRationalSpec(3, MultiPoly.const(3, 2), ((_Q_SUPER_CORE, 1),),
                                  (-1, -1, -1), name="superballot-core")
    region = _hull_region_factory(
        lambda v: 2 * (v[0] * v[1] + v[0] * v[2] + v[1] * v[2])
        - (v[0] ** 2 + v[1] ** 2 + v[2] ** 2),
        (0.0, 0.0, 1.0), (-1.0, -1.0, -1.0))
    notes = ("core coefficients of 2/(2-X-Y-Z+XYZ) are 2^-(a+b+c) times the "
             "multiset-permutation counts N(a,b,c); the square-root spec is "
             "oracle-only (its algebraic factor is outside the contour formulas)")
    if core:
        return Preset("superballot-core", core_spec, ((1, 1, 1),),
                      _superballot_core_reference, _k0_region_factory(region),
                      {"full": full}, notes)
    return Preset("superballot", full, ((Fraction(1, 2),) * 3,), None, None,
                  {"core": core_spec}, notes)


# -- registry ----------------------------------------------------------------------------

PRESET_NAMES = ("aztec", "cube_grove", "qrw2d", "fls", "superballot", "superballot-core")


def preset(name: str, beta=None) -> Preset:
    """Look up a shipped application by name (`fls` takes beta > 1/2)."""
    if name == "aztec":
        return _aztec()
    if name == "cube_grove":
        return _cube_grove()
    if name == "qrw2d":
        return _qrw()
    if name == "fls":
        return _fls(beta if beta is not None else Fraction(3, 4))
    if name == "superballot":
        return _superballot(core=False)
    if name == "superballot-core":
        return _superballot(core=True)
    raise KeyError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
