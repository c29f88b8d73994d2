"""Deterministic JSON reports and the per-entry verification suite.

Serialization rules: dict keys keep insertion order, floats are written with
17 significant digits, rationals as "num/den" strings, cyclotomic numbers as
{"root_order": n, "coefficients": [...]} in the basis 1, zeta, zeta^2, ...
The stdlib encoder always uses the shortest repr for floats, so the writer
below handles scalars itself and defers to json only for string escaping.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import (adjoint, convolve, indicator, monomial, random_crossed,
                      random_function, u)
from .cyclotomic import Cyclotomic
from .dynsys import GroupElement, multiplicatively_dependent
from .furstenberg import (CatalogEntry, catalog, check_relations, coprime_reduction,
                          dimension_bound_check, mz_power_identity, span_check,
                          verify_characterization)
from .gns import covariance_holds, evaluate, lift
from .linalg import ExactMatrix, as_array, matrices_equal
from .repanalysis import ergodicity_criterion
from .states import moment, psd_certificate

CHECK_ORDER = (
    "relations", "covariance", "homomorphism", "resinv", "restriction", "ergodicity",
    "irreducible", "fixed_dim", "characterization", "dimension_bound", "span",
    "mz_power", "psd",
)

SIGNED_GENERATORS = (GroupElement(1, 0), GroupElement(-1, 0), GroupElement(0, 1), GroupElement(0, -1))


# --------------------------------------------------------------------------
# serialization


def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def scalar(x):
    """JSON-ready form of one number."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, Cyclotomic):
        return {"root_order": x.order, "coefficients": [rational(c) for c in x.coefficients]}
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (float, np.floating)):
        return float(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite float in report")
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _emit(obj, indent: int, level: int, out: list):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for n, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if n < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, np.integer, str)) and not isinstance(v, bool) for v in obj):
            out.append("[" + ", ".join(str(int(v)) if not isinstance(v, str) else json.dumps(v)
                                       for v in obj) + "]")
            return
        out.append("[\n")
        for n, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if n < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        _emit(scalar(obj), indent, level, out)


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def parse_scalar(v):
    """Inverse of :func:`scalar` for rationals and complex floats."""
    if isinstance(v, str) and "/" in v:
        return Fraction(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(v["re"], v["im"])
    return v


# --------------------------------------------------------------------------
# documents


def header(command: str, p: int, q: int, **extra) -> dict:
    doc = {"tool_version": __version__, "command": command, "p": p, "q": q}
    doc.update(extra)
    return doc


def orbits_document(sys, orbit_list) -> dict:
    return header("orbits", sys.p, sys.q, modulus=sys.M,
                  multiplicatively_dependent=multiplicatively_dependent(sys.p, sys.q),
                  orbits=[list(o.members) for o in orbit_list])


def entry_summary(e: CatalogEntry) -> dict:
    return {"M": e.M, "orbit_representative": e.orbit.representative,
            "orbit_size": len(e.orbit), "orbit": list(e.orbit.members),
            "weight": scalar(e.measure.weights[e.orbit.representative])}


def catalog_document(p: int, q: int, max_modulus: int, entries) -> dict:
    return header("catalog", p, q, max_modulus=max_modulus,
                  multiplicatively_dependent=multiplicatively_dependent(p, q),
                  reduction_unique=all(coprime_reduction(p, q, e.M).unique for e in entries),
                  entries=[entry_summary(e) for e in entries])


def moments_document(sys, orbit, mu, ks, cert) -> dict:
    return header("moments", sys.p, sys.q, modulus=sys.M,
                  orbit_representative=orbit.representative, orbit=list(orbit.members),
                  moments=[{"k": k, "value": scalar(moment(mu, k))} for k in ks],
                  psd={"order": cert.order, "psd": cert.psd, "exact": cert.exact,
                       "min_eigenvalue": None if cert.exact else cert.min_eigenvalue,
                       "reason": cert.reason})


# --------------------------------------------------------------------------
# verification suite


class SuiteConfig:
    def __init__(self, exact: bool = True, tol: float = 1e-10, seed: int = 0,
                 pairs: int = 3, psd_order: int = 8):
        self.exact = exact
        self.tol = tol
        self.seed = seed
        self.pairs = pairs
        self.psd_order = psd_order


def _mat_eq(a, b, cfg: SuiteConfig) -> bool:
    if cfg.exact:
        return a == b
    scale = max(1.0, float(np.max(np.abs(as_array(a)))) if np.size(as_array(a)) else 1.0)
    return matrices_equal(a, b, max(cfg.tol, 1e-12) * scale)


def _adj(m):
    return m.H if isinstance(m, ExactMatrix) else np.conj(m).T


def _val_eq(a, b, cfg: SuiteConfig) -> bool:
    return a == b if cfg.exact else abs(complex(a) - complex(b)) <= max(cfg.tol, 1e-12)


def check_covariance(e: CatalogEntry, cfg: SuiteConfig) -> bool:
    rep = e.rep
    for k in e.orbit.members:
        a = indicator(e.sys, k, exact=cfg.exact)
        for g in (GroupElement(1, 0), GroupElement(0, 1)):
            if not covariance_holds(rep, a, g, 0.0 if cfg.exact else max(cfg.tol, 1e-12)):
                return False
    return True


def check_homomorphism(e: CatalogEntry, cfg: SuiteConfig, rng) -> bool:
    rep = e.rep
    for _ in range(cfg.pairs):
        f = random_crossed(e.sys, rng, exact=cfg.exact)
        g = random_crossed(e.sys, rng, exact=cfg.exact)
        rf, rg = evaluate(rep, f), evaluate(rep, g)
        if not _mat_eq(evaluate(rep, convolve(e.sys, f, g)), rf @ rg, cfg):
            return False
        if not _mat_eq(evaluate(rep, adjoint(e.sys, f)), _adj(rf), cfg):
            return False
    return True


def check_resinv(e: CatalogEntry, cfg: SuiteConfig, rng) -> bool:
    """psi(u_s a u_t) = phi(a) for the lifted state psi."""
    psi = lift(e.measure)
    a = random_function(e.sys, rng, exact=cfg.exact)
    target = e.measure(a)
    for s in SIGNED_GENERATORS:
        for t in SIGNED_GENERATORS:
            b = convolve(e.sys, convolve(e.sys, u(e.sys, s, cfg.exact), monomial(a)), u(e.sys, t, cfg.exact))
            if not _val_eq(psi(b), target, cfg):
                return False
    return True


def check_restriction(e: CatalogEntry, cfg: SuiteConfig) -> bool:
    """The restriction of the lifted state to C(X) is the measure itself."""
    got = lift(e.measure).restriction()
    return all(_val_eq(x, w, cfg) for x, w in zip(got, e.measure.weights))


def verify_entry(e: CatalogEntry, cfg: SuiteConfig) -> dict:
    rng = np.random.default_rng([cfg.seed, e.M, e.orbit.representative])
    checks: dict[str, bool] = {}
    checks["relations"] = all(check_relations(e, max(cfg.tol, 1e-12)).values())
    checks["covariance"] = check_covariance(e, cfg)
    checks["homomorphism"] = check_homomorphism(e, cfg, rng)
    checks["resinv"] = check_resinv(e, cfg, rng)
    checks["restriction"] = check_restriction(e, cfg)
    erg = ergodicity_criterion(e.rep, cfg.tol)
    checks["ergodicity"] = erg.ergodic
    char = verify_characterization(e, e.M, cfg.tol)
    checks["irreducible"] = char.irreducible
    checks["fixed_dim"] = char.fixed_dim == 1
    checks["characterization"] = char.passed and char.N_found is not None and e.M % char.N_found == 0
    checks["dimension_bound"] = dimension_bound_check(e, char.N_found)
    checks["span"] = bool(char.fixed_basis) and char.N_found is not None and \
        span_check(e, char.fixed_basis[0], char.N_found, cfg.tol)
    checks["mz_power"] = mz_power_identity(e)
    cert = psd_certificate(e.measure, cfg.psd_order)
    checks["psd"] = cert.psd
    failed = [name for name in CHECK_ORDER if not checks[name]]
    out = entry_summary(e)
    out.update({
        "dim": e.rep.dim,
        "commutant_dim": erg.commutant_dim,
        "fixed_dim": char.fixed_dim,
        "N_found": char.N_found,
        "reduction": dict(zip(("M", "i", "j"), coprime_reduction(e.p, e.q, e.M))),
        "moments": [scalar(moment(e.measure, k)) for k in range(min(cfg.psd_order, 4))],
        "psd_min_eigenvalue": None if cert.exact else cert.min_eigenvalue,
        "checks": {name: checks[name] for name in CHECK_ORDER},
        "witness": None if erg.ergodic else {"phi_TT": scalar(erg.phi_TT), "phi_T_sq": scalar(erg.phi_T_sq)},
        "first_failure": failed[0] if failed else None,
    })
    return out


def run_verification(p: int, q: int, max_modulus: int, exact: bool = True, tol: float = 1e-10,
                     threads: int | None = None, psd_order: int = 8, entries=None) -> dict:
    cfg = SuiteConfig(exact=exact, tol=tol, psd_order=psd_order)
    if entries is None:
        entries = catalog(p, q, max_modulus, exact=exact, threads=threads)
    results = [verify_entry(e, cfg) for e in entries]
    first = next(({"M": r["M"], "orbit_representative": r["orbit_representative"],
                   "check": r["first_failure"]} for r in results if r["first_failure"]), None)
    return header("verify", p, q, max_modulus=max_modulus, mode="exact" if exact else "float",
                  tolerance=tol, multiplicatively_dependent=multiplicatively_dependent(p, q),
                  reduction_unique=all(coprime_reduction(p, q, r["M"]).unique for r in results),
                  entries=results,
                  summary={"entries": len(results), "passed": first is None, "first_failure": first})
