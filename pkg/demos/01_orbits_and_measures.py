"""
Orbits of x2, x3 on residues and their uniform measures
=======================================================

"""

from fractions import Fraction

from xpq.dynsys import make_system, orbits
from xpq.states import ergodic_measures, is_invariant, mixture, moment

# the action of Z^2 on Z/35: (m, n) . k = 2^m 3^n k mod 35
sys = make_system(2, 3, 35)
for o in orbits(sys):
    print(o.representative, len(o), o.members)

# one ergodic measure per orbit, uniform on it
ms = ergodic_measures(sys)
print(len(ms), "ergodic measures")
print([str(w) for w in ms[1].weights])

# mixtures stay invariant but are no longer ergodic
mu = mixture(ms[:2], [Fraction(1, 3), Fraction(2, 3)])
print("invariant:", is_invariant(sys, mu.weights))

# Fourier moments are exact cyclotomic numbers
for k in range(4):
    print(k, moment(ms[1], k))
