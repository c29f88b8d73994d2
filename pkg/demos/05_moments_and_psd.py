"""
Toeplitz moment matrices and positive combinations
==================================================

"""

from fractions import Fraction

from xpq.cyclotomic import gaussian
from xpq.dynsys import make_system
from xpq.states import ergodic_measures, moment, positive_combination_check, psd_certificate, uniform_on

sys = make_system(2, 3, 11)
mu = ergodic_measures(sys)[1]

# exact LDL certificate on the order-12 Toeplitz matrix
cert = psd_certificate(mu, 12)
print("exact:", cert.psd, cert.reason)

# the same measure in floating point
fmu = uniform_on(sys, mu.support, exact=False)
fcert = psd_certificate(fmu, 12)
print("float:", fcert.psd, "min eigenvalue %.3g" % fcert.min_eigenvalue)

# first moments
print([complex(moment(fmu, k)) for k in range(4)])

# nu(|sum lambda chi|^2) >= 0 for characters of Z[1/6]
coeffs = {(1, 0, 0): gaussian(1, 0), (1, 1, -1): gaussian(0, Fraction(-2, 3)), (5, 0, 2): gaussian(-1, 1)}
print(positive_combination_check(mu, coeffs))
