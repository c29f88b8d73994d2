"""
Finite representations of st = ts, sz = z^p s, tz = z^q t
=========================================================

"""

from xpq.furstenberg import (catalog, check_relations, coprime_reduction, span_check,
                             verify_characterization)

entries = catalog(2, 3, 40)
print(len(entries), "primitive orbits with M <= 40")

for e in entries[:8]:
    c = verify_characterization(e)
    ok = span_check(e, c.fixed_basis[0], c.N_found)
    print(e.key, "dim", e.rep.dim, "N", c.N_found, check_relations(e), "spans:", ok)

# any N splits as M 2^i 3^j with M coprime to 6
for N in (1, 12, 35, 360, 9720):
    r = coprime_reduction(2, 3, N)
    print(N, "=", r.M, "* 2 ^", r.i, "* 3 ^", r.j)

# shared prime factors in p and q: the split needs an extra factor K
print(coprime_reduction(5, 9, 165))
