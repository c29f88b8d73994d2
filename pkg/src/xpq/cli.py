"""Command-line front end: orbits, catalog, verify, moments.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .dynsys import DomainError, make_system, orbit_of, orbits
from .furstenberg import catalog
from .report import catalog_document, dumps, moments_document, orbits_document, run_verification
from .states import psd_certificate, uniform_on

MAX_MODULUS_CAP = 10_000


class InputError(Exception):
    pass


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check_pq(args):
    if args.p < 2 or args.q < 2:
        raise InputError("p and q must be at least 2")


def _check_cap(args):
    if args.max_modulus < 1:
        raise InputError("--max-modulus must be positive")
    if args.max_modulus > MAX_MODULUS_CAP and not args.force:
        raise InputError(f"--max-modulus above {MAX_MODULUS_CAP} needs --force")


def cmd_orbits(args) -> int:
    _check_pq(args)
    sys_ = make_system(args.p, args.q, args.modulus)
    _write(dumps(orbits_document(sys_, orbits(sys_))), args.out)
    return 0


def cmd_catalog(args) -> int:
    _check_pq(args)
    _check_cap(args)
    entries = catalog(args.p, args.q, args.max_modulus, threads=args.threads)
    _write(dumps(catalog_document(args.p, args.q, args.max_modulus, entries)), args.out)
    return 0


def cmd_verify(args) -> int:
    _check_pq(args)
    _check_cap(args)
    if args.tolerance <= 0:
        raise InputError("--tolerance must be positive")
    doc = run_verification(args.p, args.q, args.max_modulus, exact=args.mode == "exact",
                           tol=args.tolerance, threads=args.threads, psd_order=args.psd_order)
    _write(dumps(doc), args.out)
    first = doc["summary"]["first_failure"]
    if first:
        print(f"verification failed: check '{first['check']}' at M={first['M']} "
              f"orbit {first['orbit_representative']}", file=sys.stderr)
        return 1
    return 0


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return range(int(lo), int(hi) + 1)
        return range(int(text) + 1)
    except ValueError:
        raise InputError(f"bad --range {text!r}; use R or A..B") from None


def cmd_moments(args) -> int:
    _check_pq(args)
    sys_ = make_system(args.p, args.q, args.modulus)
    orbit = orbit_of(sys_, args.orbit_rep)
    if args.psd_order < 1:
        raise InputError("--psd-order must be positive")
    mu = uniform_on(sys_, orbit.members, exact=args.mode == "exact")
    cert = psd_certificate(mu, args.psd_order)
    _write(dumps(moments_document(sys_, orbit, mu, list(_parse_range(args.range)), cert)), args.out)
    return 0 if cert.psd else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xpq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"xpq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--out", default=None, help="write JSON here instead of stdout")

    sp = sub.add_parser("orbits", help="orbits of x p, x q on Z/M")
    common(sp)
    sp.add_argument("--modulus", type=int, required=True)
    sp.set_defaults(func=cmd_orbits)

    for name, func in (("catalog", cmd_catalog), ("verify", cmd_verify)):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--max-modulus", type=int, required=True)
        sp.add_argument("--force", action="store_true", help="allow moduli above the cap")
        sp.add_argument("--threads", type=int, default=None, help="defaults to XPQ_THREADS")
        if name == "verify":
            sp.add_argument("--mode", choices=("exact", "float"), default="exact")
            sp.add_argument("--tolerance", type=float, default=1e-10)
            sp.add_argument("--psd-order", type=int, default=8)
        sp.set_defaults(func=func)

    sp = sub.add_parser("moments", help="moment table and Toeplitz PSD certificate")
    common(sp)
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--orbit-rep", type=int, required=True)
    sp.add_argument("--range", default="5", help="R for 0..R, or A..B")
    sp.add_argument("--psd-order", type=int, default=4)
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.set_defaults(func=cmd_moments)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
