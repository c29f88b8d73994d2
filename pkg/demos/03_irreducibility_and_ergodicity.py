"""
Commutants, fixed vectors and the ergodicity test
=================================================

"""

from fractions import Fraction

from xpq.dynsys import make_system
from xpq.gns import covariant_rep
from xpq.repanalysis import (commutant_dim, ergodicity_criterion, fixed_space, intertwiner_dim,
                             noncommutative_counterexample)
from xpq.states import ergodic_measures, mixture, point_mass, uniform_on

sys = make_system(2, 3, 5)

# ergodic: scalar commutant, one fixed direction
rep = covariant_rep(sys, uniform_on(sys, [1, 2, 3, 4]))
print("commutant", commutant_dim(rep), "fixed", len(fixed_space(rep)))

# half point mass at 0, half uniform on the nonzero residues
mix = mixture([point_mass(sys, 0), uniform_on(sys, [1, 2, 3, 4])], [Fraction(1, 2)] * 2)
res = ergodicity_criterion(covariant_rep(sys, mix))
print("ergodic", res.ergodic, "phi(T*T) =", res.phi_TT, "|phi(T)|^2 =", res.phi_T_sq)

# different orbits give inequivalent representations
big = make_system(2, 3, 35)
a, b = (covariant_rep(big, m) for m in ergodic_measures(big)[2:4])
print("intertwiners between distinct orbits:", intertwiner_dim(a, b))

# with a noncommutative algebra, irreducible does not force one fixed vector
ops = noncommutative_counterexample()
print("2x2 matrices: commutant", commutant_dim(ops), "fixed", len(fixed_space(ops)))
