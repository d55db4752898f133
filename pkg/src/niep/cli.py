"""``niep`` command-line interface.

Problems arrive as a JSON envelope on stdin or from ``--input``::

    {"spectrum": [[4, 0], [0, 1], [0, -1]],
     "diagonal": [2, 1, 1],
     "options": {"tolerance": 1e-9, "k_max": 6, "m_max": 3, "seed": 0}}

``verify`` additionally reads ``"matrix"`` (row-major array of arrays).
Results are JSON on stdout; a one-line summary goes to stderr.

Exit codes: 0 success, 1 infeasible or failed check, 2 invalid input,
3 internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from ._tol import DEFAULT_TOL
from .errors import (
    Infeasible,
    InternalContradiction,
    InvalidInput,
    NoPerron,
    NotRealisable,
    PreconditionViolated,
)
from .realize import CompanionDiagonalMatrix, diag_range, realize
from .selftest import run_all
from .spectra import as_diagonal, check_diag_necessary, check_necessary, parse_spectrum
from .verify import certify, certify_dense

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def _emit(payload: dict, args) -> None:
    indent = 2 if args.pretty else None
    json.dump(payload, sys.stdout, cls=_Encoder, indent=indent)
    sys.stdout.write("\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_envelope(args) -> dict:
    try:
        if args.input in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        env = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read problem: {exc}") from exc
    if not isinstance(env, dict) or "spectrum" not in env:
        raise InvalidInput('envelope must be a JSON object with a "spectrum" field')
    if not isinstance(env["spectrum"], list) or not env["spectrum"]:
        raise InvalidInput("spectrum must be a nonempty array of [re, im] pairs")
    opts = env.get("options") or {}
    if not isinstance(opts, dict):
        raise InvalidInput("options must be an object")
    env["options"] = opts
    return env


def _tolerance(args, env) -> float:
    if args.tolerance is not None:
        return args.tolerance
    return float(env["options"].get("tolerance", DEFAULT_TOL))


def _diagonal(env, sigma, tol, required: bool):
    if env.get("diagonal") is None:
        if required:
            raise InvalidInput('this command needs a "diagonal" array')
        return None
    a = as_diagonal(env["diagonal"], tol)
    if a.size != sigma.n:
        raise InvalidInput(f"diagonal has {a.size} entries, spectrum has {sigma.n}")
    return a


def cmd_check(args) -> int:
    env = _read_envelope(args)
    tol = _tolerance(args, env)
    sigma = parse_spectrum(env["spectrum"])
    opts = env["options"]
    report = check_necessary(
        sigma, int(opts.get("k_max", 6)), int(opts.get("m_max", 3)), tol
    )
    out = {"spectrum": sigma.to_pairs(), "necessary": report.to_dict()}
    ok = report.ok
    delta = _diagonal(env, sigma, tol, required=False)
    if delta is not None:
        diag_report = check_diag_necessary(sigma, delta, tol=tol)
        out["diagonal"] = diag_report.to_dict()
        ok = ok and diag_report.ok
    out["ok"] = ok
    _emit(out, args)
    failed = [r.condition for r in report.failed()]
    if delta is not None:
        failed += [r.condition for r in diag_report.failed()]
    _note("all necessary conditions hold" if ok else "failed: " + ", ".join(failed))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_realize(args) -> int:
    env = _read_envelope(args)
    tol = _tolerance(args, env)
    sigma = parse_spectrum(env["spectrum"])
    delta = _diagonal(env, sigma, tol, required=True)
    try:
        result = realize(sigma, delta, tol, sort=not args.no_sort)
    except Infeasible as exc:
        out = {"status": "infeasible", "violations": [v.to_dict() for v in exc.violations]}
        if exc.matrix is not None:
            out["b"] = list(exc.matrix.b)
            out["matrix"] = exc.matrix.dense()
            out["certificate"] = exc.certificate.to_dict()
        _emit(out, args)
        _note(f"infeasible: {exc}")
        return EXIT_FAIL
    _emit(
        {
            "status": "feasible",
            "matrix": result.dense(),
            "b": list(result.b),
            "certificate": result.certificate.to_dict(),
            "permutation": result.permutation,
        },
        args,
    )
    _note(f"realised {sigma.n}x{sigma.n}; bottom row {list(result.matrix.bottom_row())}")
    return EXIT_OK


def cmd_diag_range(args) -> int:
    env = _read_envelope(args)
    tol = _tolerance(args, env)
    try:
        # a list without a Perron entry answers the realisability question
        sigma = parse_spectrum(env["spectrum"])
        rng = diag_range(sigma, tol)
    except (NoPerron, NotRealisable, PreconditionViolated) as exc:
        _emit({"status": "not_realisable", "reason": str(exc)}, args)
        _note(f"not realisable: {exc}")
        return EXIT_FAIL
    _emit(
        {
            "status": "ok",
            "a_min": rng.a_min,
            "a_max": rng.a_max,
            "witness_example": rng.witness(rng.a_max),
        },
        args,
    )
    _note(f"diagonal entries range over [{rng.a_min:.10g}, {rng.a_max:.10g}]")
    return EXIT_OK


def structured_form(A: np.ndarray, tol: float = DEFAULT_TOL) -> CompanionDiagonalMatrix | None:
    """Recover the companion-plus-diagonal form of ``A``, or ``None``."""
    n = A.shape[0]
    expected = np.zeros_like(A, dtype=bool)
    expected[np.diag_indices(n)] = True
    expected[n - 1, :] = True
    sup = (np.arange(n - 1), np.arange(1, n))
    expected[sup] = True
    if np.any(np.abs(A[~expected]) > tol) or np.any(np.abs(A[sup] - 1.0) > tol):
        return None
    return CompanionDiagonalMatrix(tuple(np.diag(A).tolist()), tuple(A[n - 1, : n - 1][::-1].tolist()))


def cmd_verify(args) -> int:
    env = _read_envelope(args)
    tol = _tolerance(args, env)
    sigma = parse_spectrum(env["spectrum"])
    try:
        A = np.array(env["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f'need a numeric "matrix" array of arrays: {exc}') from exc
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != sigma.n:
        raise InvalidInput(f"matrix shape {A.shape} does not match spectrum of length {sigma.n}")
    m = structured_form(A, tol)
    report = certify(m, sigma, tol) if m is not None else certify_dense(A, sigma, tol)
    _emit({"form": "structured" if m is not None else "dense", "certificate": report.to_dict()}, args)
    _note("certified" if report.ok else "certificate FAILED")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    seed = 0 if args.seed is None else args.seed
    count = 200 if args.count is None else args.count
    if count < 0:
        raise InvalidInput("--count must be >= 0")
    suites = run_all(seed, count)
    ok = all(s.ok for s in suites)
    _emit({"ok": ok, "seed": seed, "count": count, "suites": [s.to_dict() for s in suites]}, args)
    for s in suites:
        d = s.to_dict()
        _note(f"{d['suite']:<22} cases={d['cases']:<7} failures={d['failures']:<4} worst={d['worst_margin']}")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "check": cmd_check,
    "realize": cmd_realize,
    "diag-range": cmd_diag_range,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="problem JSON file, '-' for stdin")
    common.add_argument("--tolerance", type=float, default=None, help="comparison tolerance")
    common.add_argument("--no-sort", action="store_true", help="keep the diagonal order as given")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--count", type=int, default=None)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    common.set_defaults(pretty=False)

    parser = argparse.ArgumentParser(
        prog="niep",
        description="Nonnegative realisation of spectra with prescribed diagonal elements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except InvalidInput as exc:
        _note(f"invalid input: {exc}")
        return EXIT_INPUT
    except (InternalContradiction, PreconditionViolated) as exc:
        _note(f"internal contradiction: {exc}")
        return EXIT_INTERNAL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
