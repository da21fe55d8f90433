"""Command-line front door: JSON in, JSON out.

Subcommands: classify (matrix or algebra-element file), basin (coverage
report for a non-elliptic element), lattice (Hirzebruch square-one scan,
exceptional-class enumeration, signatures) and replay (construction
scripts, built-in or from a file).

Exit codes: 0 success, 1 domain error, 2 input error.  Successful runs
print a JSON payload on stdout; failures print a one-line JSON error
object on stderr and nothing on stdout.  The environment variable
CP2LAB_TOL, when set, supplies the default for --tol.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dynamics, jsonio, lattice, replay, su12
from .errors import Cp2LabError, AssertionFailed, InputFormatError

ENV_TOL = "CP2LAB_TOL"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser(default_tol: float | None) -> _Parser:
    parser = _Parser(prog="cp2lab", description=__doc__)
    parser.add_argument("--tol", type=float, default=default_tol,
                        help="override the default tolerances uniformly")
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="classify a group element")
    p_classify.add_argument("input", help="JSON file: 3x3 matrix, or algebra element with --exp")
    p_classify.add_argument("--exp", action="store_true",
                            help="input is an algebra element; exponentiate it first")

    p_basin = sub.add_parser("basin", help="basin coverage report")
    p_basin.add_argument("input", help="JSON file with a 3x3 matrix")
    p_basin.add_argument("--samples", type=int, default=1000)
    p_basin.add_argument("--line-samples", type=int, default=None)
    p_basin.add_argument("--seed", type=int, default=0)
    p_basin.add_argument("--max-iter", type=int, default=dynamics.DEFAULT_MAX_ITER)

    p_lattice = sub.add_parser("lattice", help="exact lattice queries")
    lat_sub = p_lattice.add_subparsers(dest="lattice_command", required=True)

    p_hirz = lat_sub.add_parser("hirzebruch", help="Hirzebruch surface lattice queries")
    p_hirz.add_argument("--n", type=int, required=True)
    p_hirz.add_argument("--square-one", action="store_true",
                        help="list (a, b) with (aF + bB)^2 = 1")
    p_hirz.add_argument("--bound", type=int, default=1000)

    p_exc = lat_sub.add_parser("exceptional", help="enumerate exceptional classes")
    p_exc.add_argument("--blowups", type=int, required=True)
    p_exc.add_argument("--bound", type=int, default=3)

    p_sig = lat_sub.add_parser("signature", help="signature of a lattice")
    group = p_sig.add_mutually_exclusive_group(required=True)
    group.add_argument("--blowups", type=int, help="blow-ups of the projective plane")
    group.add_argument("--hirzebruch", type=int, help="Hirzebruch surface index")

    p_replay = sub.add_parser("replay", help="run a construction script")
    p_replay.add_argument("script", nargs="?", help="script JSON file")
    p_replay.add_argument("--builtin", choices=["sigma0", "sigma2", "sigma-steps", "standard"],
                          help="run a built-in script instead of a file")
    p_replay.add_argument("--k", type=int, default=0,
                          help="step count for sigma-steps / standard")
    return parser


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON in {path}: {exc}") from exc


def _tolerances(tol: float | None) -> dict:
    if tol is None:
        return {}
    return {"unit_tol": tol, "merge_tol": tol, "boundary_tol": tol}


def _cmd_classify(args) -> dict:
    obj = _load_json(args.input)
    if args.exp:
        algebra = jsonio.algebra_from_json(obj)
        matrix = su12.mat_exp(algebra.matrix())
    else:
        matrix = jsonio.mat3_from_json(obj)
    cls = su12.classify(matrix, **_tolerances(args.tol))
    return jsonio.classification_report(matrix, cls)


def _cmd_basin(args) -> dict:
    matrix = jsonio.mat3_from_json(_load_json(args.input))
    report = dynamics.basin_coverage_check(
        matrix,
        samples=args.samples,
        line_samples=args.line_samples,
        seed=args.seed,
        max_iter=args.max_iter,
        tol=args.tol if args.tol is not None else dynamics.DEFAULT_TOL,
    )
    return jsonio.basin_report_to_json(report)


def _cmd_lattice(args):
    if args.lattice_command == "hirzebruch":
        if not args.square_one:
            return jsonio.lattice_to_json(lattice.hirzebruch_lattice(args.n))
        pairs = lattice.square_one_classes(args.n, args.bound)
        return [list(p) for p in pairs]
    if args.lattice_command == "exceptional":
        lat = lattice.p2_lattice()
        for _ in range(args.blowups):
            lat = lat.blow_up()
        classes = lattice.enumerate_exceptional_classes(lat, args.bound)
        return [list(d.coeffs) for d in classes]
    if args.lattice_command == "signature":
        if args.blowups is not None:
            lat = lattice.p2_lattice()
            for _ in range(args.blowups):
                lat = lat.blow_up()
        else:
            lat = lattice.hirzebruch_lattice(args.hirzebruch)
        return {"rank": lat.rank, "signature": list(lat.signature())}
    raise _UsageError(f"unknown lattice subcommand {args.lattice_command!r}")


def _cmd_replay(args) -> dict:
    if (args.script is None) == (args.builtin is None):
        raise _UsageError("provide exactly one of a script file or --builtin")
    if args.builtin is not None:
        if args.builtin == "sigma0":
            script = replay.builtin_sigma0_singular()
        elif args.builtin == "sigma2":
            script = replay.builtin_sigma2_singular()
        elif args.builtin == "sigma-steps":
            script = replay.builtin_sigma_chain(args.k)
        else:
            script = replay.builtin_standard_blowups(args.k)
    else:
        script = replay.script_from_json(_load_json(args.script))
    state = replay.run(script)
    return replay.state_to_json(state)


def _emit_error(kind: str, exc: Exception) -> None:
    payload = {"error": kind, "detail": str(exc)}
    if isinstance(exc, AssertionFailed):
        payload["step"] = exc.step
        payload["expected"] = exc.expected
        payload["got"] = exc.got
    print(json.dumps(payload), file=sys.stderr)


def main(argv=None) -> int:
    env_tol = os.environ.get(ENV_TOL)
    default_tol = float(env_tol) if env_tol else None
    parser = _build_parser(default_tol)
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _emit_error("usage", exc)
        return 2

    np.seterr(all="ignore")
    try:
        if args.command == "classify":
            payload = _cmd_classify(args)
        elif args.command == "basin":
            payload = _cmd_basin(args)
        elif args.command == "lattice":
            payload = _cmd_lattice(args)
        elif args.command == "replay":
            payload = _cmd_replay(args)
        else:
            raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        _emit_error("usage", exc)
        return 2
    except InputFormatError as exc:
        _emit_error("input", exc)
        return 2
    except Cp2LabError as exc:
        _emit_error(type(exc).__name__, exc)
        return 1

    json.dump(payload, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
