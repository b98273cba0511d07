"""Which p-cones are strictly convex?

The unit ball of |.|_p has flat pieces exactly when p = 1 or p = inf.  A flat
piece shows up as unit vectors x != y with |x + y|_p = 2.  Random search
never finds one for 1 < p < inf, and finds many for the two polyhedral cases.
"""

import math

from homcone import PConeSpec, strict_convexity

print(f"{'p':>5} {'strictly convex':>16} {'flat pairs found':>17}  witness")
for p in (1.0, 1.1, 1.5, 2.0, 3.0, 10.0, math.inf):
    res = strict_convexity(PConeSpec(4, p), samples=50_000, seed=0)
    wit = "" if res.witness is None else f"x={res.witness[0]}, y={res.witness[1]}"
    print(f"{p:>5} {str(res.verdict):>16} {res.sampled_hits:>17}  {wit}")
