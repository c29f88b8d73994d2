"""Finite-scale models of x p, x q dynamics as C*-dynamical systems:
orbits, crossed-product elements, invariant states, GNS representations and
the checks that connect ergodicity with irreducibility."""

__version__ = "0.1.0"

from .dynsys import (CoprimalityError, DomainError, FiniteSystem, GroupElement, Orbit, act,
                     make_system, orbit_of, orbits)
from .algebra import CrossedElement, FunctionElement, IndexMismatch, adjoint, convolve
from .states import (InvariantMeasure, NotInvariant, ergodic_measures, measure, moment,
                     psd_certificate, uniform_on)
from .gns import CovariantRep, covariant_rep, evaluate, gns, lift, vector_state
from .repanalysis import (OperatorSet, commutant_dim, ergodicity_criterion, fixed_space,
                          intertwiner_dim, is_irreducible)
from .furstenberg import CatalogEntry, build_rep, catalog, coprime_reduction, verify_characterization

__all__ = [name for name in dir() if not name.startswith("_")]
