"""
Command-line entry point.

Exit status is 0 on success, 1 when a verification fails (the first
counterexample is written out) and 2 when the input cannot be parsed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .symplectic import ValidationError

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


def _angle(text: str) -> float | Fraction:
    """Radians as a float, or exact turns written ``p/q`` (``1/3`` is ``e^{2 pi i/3}``)."""
    if "/" in text:
        return Fraction(text)
    return float(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(io.dump_json(obj) + "\n", out)


# verbs


def cmd_index(args) -> int:
    from .lagrangian import i_L, i_omega_L0

    path = io.parse_path(io.load_json(args.input))
    if args.family == "omegaL0":
        if args.theta is None:
            raise io.ParseError("--theta is required for family omegaL0")
        from .omega import as_theta

        rec = i_omega_L0(path, as_theta(_angle(args.theta)))
    else:
        rec = i_L(path, int(args.family[1]))
    _emit_json(rec.to_dict(), args.out)
    return EXIT_OK


def cmd_omega_index(args) -> int:
    from .omega import i_nu_omega, omega_profile

    path = io.parse_path(io.load_json(args.input))
    if args.profile:
        _emit(omega_profile(path, args.resolution).to_csv(), args.out)
    else:
        _emit_json(i_nu_omega(path, _angle(args.omega)).to_dict(), args.out)
    return EXIT_OK


def cmd_iterate(args) -> int:
    from .iteration import iterate_brake, iterate_periodic
    from .lagrangian import i_L, i_sqrt
    from .omega import i_nu_omega

    path = io.parse_path(io.load_json(args.input))
    if args.sense == "brake":
        it = iterate_brake(path, args.k)
        records = [i_L(it, 0), i_L(it, 1), i_sqrt(it)]
        count = args.k
    else:
        it = iterate_periodic(path, args.m)
        records = [i_nu_omega(it, 0.0)]
        count = args.m
    doc = {"sense": args.sense, "iterations": count, "tau": float(it.grid[-1]),
           "records": [r.to_dict() for r in records]}
    if args.samples:
        doc["path"] = {"grid": it.grid.tolist(), "samples": it.samples.tolist()}
    _emit_json(doc, args.out)
    return EXIT_OK


def cmd_verify_bott(args) -> int:
    from .iteration import IndexCache, bott_L0, bott_periodic, bott_sqrt

    path = io.parse_path(io.load_json(args.input))
    cache = IndexCache(path)
    reps = [bott_L0(path, k, cache) for k in range(1, args.k + 1)]
    reps += [bott_sqrt(path, k, cache) for k in range(1, args.k + 1)]
    for z in args.z:
        reps += [bott_periodic(path, Fraction(z), m) for m in range(1, args.m + 1)]
    _emit_json([r.to_dict() for r in reps], args.out)
    return EXIT_OK if all(r.agree for r in reps) else EXIT_FAIL


def cmd_signature(args) -> int:
    from .signature import sgn_m_eps

    M = io.parse_matrix(io.load_json(args.input))
    _emit_json(sgn_m_eps(M, args.side).to_dict(), args.out)
    return EXIT_OK


def cmd_galerkin(args) -> int:
    from .galerkin import index_from_galerkin

    family = args.family or {"E": "L0", "check": "L1", "hat": "sqrt"}[args.space]
    B = io.parse_coefficient_path(io.load_json(args.input))
    res = index_from_galerkin(B, family, m_max=args.m_max)
    _emit(res.sweep_csv(), args.csv)
    _emit_json({"record": res.record.to_dict(), "m_stable": res.m_stable}, args.out)
    return EXIT_OK


def cmd_orbit(args) -> int:
    import warnings

    from .orbits import TrivialOrbitWarning, minimal_period, shoot_brake, period_spotcheck

    H = io.parse_hamiltonian(io.load_json(args.input))
    try:
        q0 = [float(v) for v in args.q0.split(",")]
    except ValueError as exc:
        raise io.ParseError(f"bad --q0: {exc}") from exc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialOrbitWarning)
        orbit = shoot_brake(H, args.T, q0)
    tau, k = minimal_period(orbit)
    report = {"orbit": orbit.to_dict(), "minimal_period": tau, "k": k}
    status = EXIT_OK
    if args.spotcheck:
        checks = [period_spotcheck(orbit, w) for w in args.spotcheck]
        report["spotchecks"] = [c.to_dict() for c in checks]
        if any(c.passed is False for c in checks):
            status = EXIT_FAIL
    _emit(orbit.to_csv(), args.csv)
    _emit_json(report, args.out)
    return status


def cmd_verify_all(args) -> int:
    from .suites import run_suite

    if not 1 <= args.n <= 4:
        raise io.ParseError("--n must lie in 1..4")
    rep = run_suite(args.seed, args.cases, n_max=args.n, workers=args.workers)
    sys.stdout.write(rep.table())
    if args.out:
        Path(args.out).write_text(io.dump_json(rep.to_dict()) + "\n", encoding="utf-8")
    if not rep.ok:
        name = next(iter(rep.first_failure))
        sys.stderr.write(f"first counterexample ({name}):\n")
        sys.stderr.write(io.dump_json(rep.first_failure[name]) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brake-index", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_, needs_input=True):
        sp = sub.add_parser(name, help=help_)
        if needs_input:
            sp.add_argument("input", help="JSON file, or - for stdin")
        sp.add_argument("--out", help="write the JSON result here instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("index", cmd_index, "Lagrangian index of a path")
    sp.add_argument("--family", choices=["L0", "L1", "omegaL0"], default="L0")
    sp.add_argument("--theta", help="angle in radians, or turns as p/q")

    sp = verb("omega-index", cmd_omega_index, "periodic omega-index or its rotation profile")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--omega", help="angle in radians, or turns as p/q")
    g.add_argument("--profile", action="store_true", help="CSV theta_start,theta_end,index")
    sp.add_argument("--resolution", type=int, default=360)

    sp = verb("iterate", cmd_iterate, "indices of an iterated path")
    sp.add_argument("--sense", choices=["brake", "periodic"], default="brake")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--samples", action="store_true", help="include the iterated samples")

    sp = verb("verify-bott", cmd_verify_bott, "iteration formulas, direct against formula")
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--m", type=int, default=6)
    sp.add_argument("--z", nargs="*", default=["0", "1/2", "1/3"], help="z as exact turns")

    sp = verb("signature", cmd_signature, "stabilized signature of M_eps")
    sp.add_argument("--side", choices=["plus", "minus"], default="plus")

    sp = verb("galerkin", cmd_galerkin, "index from Fourier truncations")
    sp.add_argument("--space", choices=["E", "check", "hat"], default="E")
    sp.add_argument("--family", choices=["L0", "L1", "sqrt"], help="overrides --space")
    sp.add_argument("--m-max", type=int, default=256)
    sp.add_argument("--csv", help="write the band-count sweep here instead of stdout")

    sp = verb("orbit", cmd_orbit, "shoot a brake orbit and check period bounds")
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--q0", required=True, help="comma-separated initial positions")
    sp.add_argument("--spotcheck", nargs="*", choices=["brake", "brake-planar", "brake-shifted", "symmetric", "symmetric-shifted"])
    sp.add_argument("--csv", help="write the orbit samples here instead of stdout")

    sp = verb("verify-all", cmd_verify_all, "randomized identity suite", needs_input=False)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--cases", type=int, default=100)
    sp.add_argument("--n", type=int, default=3, help="largest half-dimension")
    sp.add_argument("--tol", type=float, help="reserved; identities are exact integer checks")
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    np.set_printoptions(precision=17)
    try:
        return args.fn(args)
    except (io.ParseError, ValidationError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
