"""
Centers of z^3 + c and the angles that go with them.

Run:  python3 demos/centers_and_angles.py

Newton on f_c^4(0) = 0 from rough seeds lands on the centers of period-4
components.  Alongside, the exact orbits of a few angles under tripling
show which periods the characteristic rays have.
"""
from fractions import Fraction

import numpy as np

from artifact import center_solve, verify_parameter, angle_orbit, itinerary

seeds = [0.21 + 1.09j, -0.24 + 1.32j, -0.21 + 1.09j, 0.60 - 0.68j]

print("period-4 centers of z^3 + c")
for s in seeds:
    p = center_solve(3, 4, s)
    print(f"  seed {s:>14}  ->  c = {p.parameter:.6f}   "
          f"|f^4(0)| = {p.residual:.1e}   newton steps {p.iterations}")
    # the orbit of 0 really returns after 4 steps and not before
    assert verify_parameter(p) < 1e-10

print()
print("angle orbits under t -> 3t")
for t in (Fraction(11, 80), Fraction(19, 80), Fraction(22, 80), Fraction(24, 80)):
    o = angle_orbit(t, 3)
    pts = [Fraction(int(n), o.denominator) for n in o.numerators[:-1]]
    print(f"  {str(t):>6}: preperiod {o.preperiod}, period {o.period}, orbit "
          + " ".join(str(x) for x in pts))

# the numerators are exact integers, so long orbits cost nothing in accuracy
o = angle_orbit(Fraction(12345, 999983), 7)
num = np.array(o.numerators)
print(f"\n12345/999983 under t -> 7t: period {o.period}, "
      f"max numerator {num.max()}, exact return {num[-1] == num[0]}")

print("\nitinerary of 1/7 relative to the pair (1/7, 2/7):",
      itinerary(Fraction(1, 7), (Fraction(1, 7), Fraction(2, 7)), 2))
