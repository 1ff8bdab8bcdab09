"""Superballot numbers and multiset-permutation counts.

Two specs share this model: the fractional-power generating function
(1-2X)/(sqrt(1-4XZ) (1-X-Y-Z+4XYZ)) for the superballot numbers B(a,b,c)
(series oracle only - the algebraic factor is outside the closed-form
contour machinery), and the core 2/(2-X-Y-Z+XYZ) whose coefficients are
2^-(a+b+c) N(a,b,c) with N the multiset-permutation counts.  The core has
a bare quadratic point at (1,1,1), so its asymptotics are a single dual-
form power.
"""

from fractions import Fraction

from conepoint import coefficient_at, expand, total_asymptotics
from conepoint.presets import preset, superballot_number

full = preset("superballot")
core = preset("superballot-core")

print("=== superballot numbers from the series vs the closed form ===")
table = expand(full.spec, 10)
print("    (a,b,c)    series    closed form")
for (a, b, c) in [(0, 3, 1), (1, 4, 2), (2, 6, 1), (1, 5, 3), (0, 5, 2)]:
    got = table.value_at((a, b, c))
    want = superballot_number(a, b - a - c, c)
    print(f"   ({a},{b},{c})     {got!s:>6}    {want}")

print("\n=== multiset-permutation counts: exact integers after 2^(a+b+c) scaling ===")
for r in [(2, 2, 2), (4, 4, 4), (10, 20, 30)]:
    a = coefficient_at(core.spec, r)
    N = a * Fraction(2) ** sum(r)
    print(f"  N{r} = {N}")

print("\n=== prediction vs exact count at (10,20,30) ===")
a = coefficient_at(core.spec, (10, 20, 30))
N = float(a * Fraction(2) ** 60)
est = total_asymptotics(core.spec, (10, 20, 30), points=[(1, 1, 1)])
pred = est.value * 2 ** 60
print(f"  exact      {N:.4e}")
print(f"  predicted  {pred:.4e}")
print(f"  rel err    {abs(pred - N) / N:.4f}")
