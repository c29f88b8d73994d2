"""
Crossed product elements and the covariant representation
=========================================================

"""

import numpy as np

from xpq.algebra import adjoint, convolve, indicator, random_crossed
from xpq.dynsys import GroupElement, make_system
from xpq.gns import covariance_holds, covariant_rep, evaluate, lift
from xpq.linalg import as_array
from xpq.states import ergodic_measures

rng = np.random.default_rng(0)
sys = make_system(2, 3, 7)
mu = ergodic_measures(sys)[1]          # uniform on {1, ..., 6}
rep = covariant_rep(sys, mu)
print("dim", rep.dim, "support", rep.support)

# the Koopman unitary of (1, 0) is a permutation matrix
print(as_array(rep.u(GroupElement(1, 0))).real.astype(int))

# pi(alpha_g(a)) = U_g pi(a) U_g^*
print(all(covariance_holds(rep, indicator(sys, x), GroupElement(1, 0), 0.0) for x in range(7)))

# rho is a *-homomorphism on random elements, exactly
f, g = random_crossed(sys, rng), random_crossed(sys, rng)
print(evaluate(rep, convolve(sys, f, g)) == evaluate(rep, f) @ evaluate(rep, g))
print(evaluate(rep, adjoint(sys, f)) == evaluate(rep, f).H)

# the lifted vector state restricts back to the measure
print([str(x) for x in lift(mu).restriction()])
