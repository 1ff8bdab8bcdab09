"""JSON and CSV serialization for specs, tables, and reports.

Exact rationals serialize as "num/den" strings and round-trip bit-exactly;
floats serialize as JSON numbers, complex values as [re, im] pairs.  The
canonical JSON form (sorted keys, minimal separators, terms sorted by
exponent) is idempotent under parse/re-serialize.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import List, Optional, Sequence

from .polyseries import MultiPoly
from .oracle import CoeffTable, QuasiRationalSpec


class SpecFormatError(ValueError):
    """Malformed spec JSON, with a best-effort location message."""


def scalar_to_json(c):
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return str(c)
    if isinstance(c, complex):
        return [c.real, c.imag]
    return float(c)


def scalar_from_json(obj, where: str = "coeff"):
    if isinstance(obj, str):
        try:
            if "/" in obj:
                num, den = obj.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(obj))
        except (ValueError, ZeroDivisionError) as e:
            raise SpecFormatError(f"{where}: bad rational literal {obj!r}: {e}") from None
    if isinstance(obj, bool):
        raise SpecFormatError(f"{where}: booleans are not scalars")
    if isinstance(obj, (int, float)):
        return float(obj) if isinstance(obj, float) else Fraction(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise SpecFormatError(f"{where}: unrecognized scalar {obj!r}")


def poly_to_json(p: MultiPoly) -> List[dict]:
    return [{"coeff": scalar_to_json(c), "exponents": list(m)}
            for m, c in sorted(p.terms.items())]


def poly_from_json(arity: int, items, where: str = "poly") -> MultiPoly:
    if not isinstance(items, list):
        raise SpecFormatError(f"{where}: expected a list of terms")
    terms = []
    for i, t in enumerate(items):
        try:
            exps = [int(e) for e in t["exponents"]]
            coeff = scalar_from_json(t["coeff"], f"{where}[{i}].coeff")
        except (KeyError, TypeError) as e:
            raise SpecFormatError(f"{where}[{i}]: missing field {e}") from None
        if len(exps) != arity:
            raise SpecFormatError(f"{where}[{i}]: exponent length {len(exps)} != arity {arity}")
        terms.append((exps, coeff))
    return MultiPoly.from_terms(arity, terms)


def _power_to_json(p):
    return scalar_to_json(Fraction(p) if not isinstance(p, float) else p)


def spec_to_json(spec: QuasiRationalSpec, points: Optional[Sequence] = None) -> dict:
    d = spec.arity
    names = ["X", "Y", "Z"][:d] if d <= 3 else [f"X{i+1}" for i in range(d)]
    out = {
        "variables": names,
        "numerator": poly_to_json(spec.numerator),
        "factors": [{"poly": poly_to_json(poly), "power": _power_to_json(power)}
                    for poly, power in spec.factors],
        "cone_direction_u": [scalar_to_json(Fraction(x)) if not isinstance(x, float)
                             else float(x) for x in spec.cone_direction_u],
        "laurent_shift": list(spec.laurent_shift),
    }
    if spec.name:
        out["name"] = spec.name
    if points is not None:
        out["points"] = [[scalar_to_json(Fraction(z) if not isinstance(z, (float, complex))
                                         else z) for z in Z] for Z in points]
    return out


def spec_from_json(obj: dict) -> QuasiRationalSpec:
    try:
        variables = obj["variables"]
    except (KeyError, TypeError):
        raise SpecFormatError("top level: missing 'variables'") from None
    d = len(variables)
    if d < 1:
        raise SpecFormatError("variables: need at least one")
    numer = poly_from_json(d, obj.get("numerator", [{"coeff": "1", "exponents": [0] * d}]),
                           "numerator")
    factors = []
    for i, f in enumerate(obj.get("factors", [])):
        try:
            poly = poly_from_json(d, f["poly"], f"factors[{i}].poly")
            power = scalar_from_json(f["power"], f"factors[{i}].power")
        except (KeyError, TypeError) as e:
            raise SpecFormatError(f"factors[{i}]: missing field {e}") from None
        factors.append((poly, power))
    u = obj.get("cone_direction_u", [-1] * d)
    if len(u) != d:
        raise SpecFormatError("cone_direction_u: wrong length")
    u = tuple(scalar_from_json(x, "cone_direction_u") if isinstance(x, str) else x
              for x in u)
    shift = obj.get("laurent_shift", [0] * d)
    return QuasiRationalSpec(d, numer, tuple(factors), u, tuple(int(e) for e in shift),
                             name=obj.get("name", ""))


def spec_points_from_json(obj: dict) -> Optional[List[tuple]]:
    pts = obj.get("points")
    if pts is None:
        return None
    return [tuple(scalar_from_json(z, "points") if isinstance(z, str) else
                  (complex(z[0], z[1]) if isinstance(z, list) else z) for z in Z)
            for Z in pts]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def format_value(v, float_digits: Optional[int] = None) -> str:
    if isinstance(v, Fraction) and float_digits is None:
        return scalar_to_json(v)
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 else ''}{v.imag!r}j"
    f = float(v)
    return repr(f) if float_digits is None else f"{f:.{float_digits}g}"


def table_to_csv(table: CoeffTable, float_digits: Optional[int] = None) -> str:
    header = ",".join(f"r{i+1}" for i in range(table.arity)) + ",value"
    lines = [header]
    for m in sorted(table.values):
        lines.append(",".join(str(e) for e in m) + "," +
                     format_value(table.value_at(m), float_digits))
    return "\n".join(lines) + "\n"


def table_to_json(table: CoeffTable, float_digits: Optional[int] = None) -> dict:
    lo, hi = table.bounds()
    return {
        "arity": table.arity,
        "grading": list(table.grading_w),
        "max_level": table.max_level,
        "bounds": {"min": list(lo), "max": list(hi)},
        "scale": scalar_to_json(table.scale),
        "coefficients": [
            {"r": list(m), "value": scalar_to_json(table.value_at(m))
             if float_digits is None else float(table.value_at(m))}
            for m in sorted(table.values)],
    }


def _num(v):
    if isinstance(v, (int, Fraction)):
        return scalar_to_json(Fraction(v))
    if isinstance(v, complex):
        return [v.real, v.imag]
    return float(v)


def estimate_to_json(est) -> dict:
    def num(v):
        if isinstance(v, complex):
            return [v.real, v.imag]
        return float(v)

    return {
        "direction": list(est.direction),
        "value": num(est.value),
        "decay_exponent": est.decay_exponent,
        "formula": est.formula_tag,
        "notes": list(est.notes),
        "per_point": [
            {"point": [_num(z) for z in c.Z],
             "formula": c.formula,
             "direction_class": c.direction_class,
             "value": num(c.value)} for c in est.per_point],
    }


def point_data_to_json(data) -> dict:
    def mat(M):
        return [[scalar_to_json(x) for x in row] for row in M]

    return {
        "point": [_num(z) for z in data.point_Z],
        "power": _num(data.s),
        "q_matrix": mat(data.q_matrix),
        "dual_matrix": mat(data.dual_matrix),
        "normalizer_absdet": _num(data.normalizer_absdet),
        "numerator_value": _num(data.numerator_value),
        "linear_factors": [{"covector": [scalar_to_json(x) for x in ell], "power": n}
                           for ell, n in data.linear_factors],
        "sign_flipped": data.sign_flipped,
    }
