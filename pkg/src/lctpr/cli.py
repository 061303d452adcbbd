"""Command line interface: ``lctpr <command> ...``.

Exit codes: 0 ok/pass, 1 verification failed, 2 I/O or parse error,
3 degenerate or invalid parameters, 4 root pairing/convergence failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .ambiguity import (
    enumerate_solutions,
    trivial_reflect,
    trivial_rotate,
    trivial_shift,
    verify_intensity_match,
)
from .continuous import autocorrelation_identity_check, parse_variant, verify_prop31
from .core import FrequencyGrid, LctParams, forward, make_params, preset
from .errors import (
    ConvergenceError,
    DegenerateError,
    DegenerateParameterError,
    DeterminantError,
    PairingError,
)

log = logging.getLogger("lctpr")

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_PARAMS, EXIT_PAIRING = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_params(abcd: str | None, preset_spec: str | None) -> LctParams:
    """``--abcd a,b,c,d`` or ``--preset fourier|fresnel:alpha|frft:alpha``."""
    try:
        if abcd is not None:
            parts = [float(v) for v in abcd.split(",")]
            if len(parts) != 4:
                raise ValueError("--abcd needs exactly four comma-separated numbers")
            p = make_params(*parts)
        else:
            kind, _, arg = preset_spec.partition(":")
            p = preset(kind, float(arg) if arg else None)
    except (DegenerateParameterError, DeterminantError) as exc:
        raise CliError(str(exc), EXIT_PARAMS) from exc
    except ValueError as exc:
        raise CliError(f"bad parameter spec: {exc}", EXIT_IO) from exc
    if p.degenerate:
        raise CliError(
            f"degenerate parameters: b = {p.b!r} is zero, transforms need b != 0",
            EXIT_PARAMS,
        )
    return p


def _params(args) -> LctParams:
    return parse_params(args.abcd, args.preset)


def _read_signal(path):
    try:
        return io.read_signal(path)
    except io.FileFormatError as exc:
        raise CliError(str(exc), EXIT_IO) from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _grid(p: LctParams, N: int, points: int | None, omega: str | None):
    if omega:
        try:
            pts = np.array([float(v) for v in omega.split(",")])
            return FrequencyGrid(pts, p.period, extended=True)
        except ValueError as exc:
            raise CliError(f"bad --omega list: {exc}", EXIT_IO) from exc
    return FrequencyGrid.uniform(p, points if points else 4 * N)


def cmd_transform(args) -> int:
    x = _read_signal(args.signal)
    p = _params(args)
    grid = _grid(p, x.N, args.points, args.omega)
    _emit(io.transform_csv(grid.points, forward(x, p, grid)), args.output)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    x = _read_signal(args.signal)
    p = _params(args)
    try:
        sols = enumerate_solutions(x, p, tol=args.tol, pair_tol=args.pair_tol)
    except (PairingError, ConvergenceError, DegenerateError) as exc:
        raise CliError(f"cannot enumerate solutions: {exc}", EXIT_PAIRING) from exc
    report = {
        "params": dict(zip("abcd", p.as_tuple())),
        "N": x.N,
        "tol": args.tol,
        "count": len(sols),
        "classes": [io.signal_to_dict(s.canonical) for s in sols],
        "verification": [
            {"selection": s.selection, "max_rel_err": s.max_rel_err, "pass": s.max_rel_err <= args.tol}
            for s in sols
        ],
    }
    _emit(io.dumps(report) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    x = _read_signal(args.signal_a)
    y = _read_signal(args.signal_b)
    p = _params(args)
    rep = verify_intensity_match(x, y, p, args.grid or 4 * max(x.N, y.N), args.tol)
    out = {"max_rel_err": rep.max_rel_err, "tol": args.tol, "pass": rep.passed}
    sys.stdout.write(io.dumps(out) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _apply_trivial(x, p, spec: str):
    name, _, arg = spec.partition(":")
    try:
        if name == "rotate":
            return trivial_rotate(x, float(arg))
        if name == "shift":
            return trivial_shift(x, int(arg), p)
        if name == "reflect" and not arg:
            return trivial_reflect(x, p)
    except ValueError as exc:
        raise CliError(f"bad variant {spec!r}: {exc}", EXIT_IO) from exc
    raise CliError(f"unknown variant {spec!r}; use rotate:a, shift:n or reflect", EXIT_IO)


def cmd_trivials(args) -> int:
    x = _read_signal(args.signal)
    p = _params(args)
    outdir = Path(args.out_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {outdir}: {exc}", EXIT_IO) from exc
    stem = Path(args.signal).stem
    results = []
    for spec in args.variants:
        y = _apply_trivial(x, p, spec)
        path = outdir / f"{stem}.{spec.replace(':', '_')}.json"
        try:
            io.write_signal(path, y)
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc
        rep = verify_intensity_match(x, y, p, 4 * x.N, args.tol)
        results.append(
            {"variant": spec, "path": str(path), "max_rel_err": rep.max_rel_err, "pass": rep.passed}
        )
    sys.stdout.write(io.dumps({"outputs": results}) + "\n")
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_FAIL


def cmd_continuous_check(args) -> int:
    try:
        f = io.read_function(args.samples)
    except io.FileFormatError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    p = _params(args)
    if args.omega:
        try:
            omega = np.array([float(v) for v in args.omega.split(",")])
        except ValueError as exc:
            raise CliError(f"bad --omega list: {exc}", EXIT_IO) from exc
    else:
        rng = np.random.default_rng(args.seed)
        omega = np.sort(rng.uniform(-args.omega_max, args.omega_max, args.n_omega))
    nodes = args.nodes or max(f.samples.size, 2048)
    if args.check == "prop31":
        variants = args.variant or ["rotate:2.1", "shift:0.7", "reflect"]
        try:
            variants = [parse_variant(v) for v in variants]
        except ValueError as exc:
            raise CliError(str(exc), EXIT_IO) from exc
        reports = [verify_prop31(f, p, v, omega, nodes).as_dict() for v in variants]
        out = {
            "check": "prop31",
            "nodes": nodes,
            "max_deviation": max(r["max_deviation"] for r in reports),
            "reports": reports,
        }
    else:
        out = {"check": "autocorr", **autocorrelation_identity_check(f, p, omega, nodes).as_dict()}
    _emit(io.dumps(out) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    params = argparse.ArgumentParser(add_help=False)
    grp = params.add_mutually_exclusive_group(required=True)
    grp.add_argument("--abcd", help="LCT matrix entries a,b,c,d with ad-bc=1")
    grp.add_argument("--preset", help="fourier | fresnel:ALPHA | frft:ALPHA")

    parser = argparse.ArgumentParser(
        prog="lctpr",
        description="Linear canonical transforms and phase retrieval ambiguities",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", parents=[params], help="evaluate |LCT| on a grid (CSV)")
    sp.add_argument("signal")
    sp.add_argument("--points", type=int, help="equispaced points over one period (default 4N)")
    sp.add_argument("--omega", help="explicit comma-separated frequencies")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("enumerate", parents=[params], help="list all ambiguity classes (JSON)")
    sp.add_argument("signal")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--pair-tol", type=float, default=1e-7)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", parents=[params], help="compare intensities of two signals")
    sp.add_argument("signal_a")
    sp.add_argument("signal_b")
    sp.add_argument("--grid", type=int, help="grid size (default 4N)")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("trivials", parents=[params], help="write trivially ambiguous variants")
    sp.add_argument("signal")
    sp.add_argument("variants", nargs="+", metavar="VARIANT", help="rotate:A | shift:N | reflect")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_trivials)

    sp = sub.add_parser(
        "continuous-check", parents=[params], help="quadrature checks for sampled functions"
    )
    sp.add_argument("samples")
    sp.add_argument("check", choices=["prop31", "autocorr"])
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--variant", action="append", help="rotate:A | shift:T | reflect (repeatable)")
    sp.add_argument("--omega", help="explicit comma-separated frequencies")
    sp.add_argument("--n-omega", type=int, default=16)
    sp.add_argument("--omega-max", type=float, default=4.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_continuous_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"lctpr {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateParameterError as exc:
        print(f"lctpr {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
