"""Command-line front end.

One subcommand per module entry point:

    weight           evaluate the conformal weight h at a point
    brennan          refinement study of the integral of |psi'|^(2-s)
    inverse-brennan  same study parameterized by alpha = 2 - s
    kpq              dilatation integral K_{p,q} for composition bounds
    exponents        admissible exponent arithmetic (bounds or q from (p,s))
    constant         Poincare constant of the unit disc
    solve            Dirichlet problem -Delta u = f h via disc transfer
    verify           full cross-module invariant suite

Output is one JSON object (floats as shortest round-trip decimals, keys
sorted) or a CSV table (17 significant digits, config echoed on `#` lines).
Every run echoes its fully resolved configuration.  Exit codes: 0 for
success / Converged, 1 for Divergent, Inconclusive or infeasible inputs,
2 for usage errors.  Complex values are written as "re,im".
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .errors import ConfweightError
from .exponents import (DEFAULT_ALPHA0, exponent_bounds, poincare_constant_disc,
                        q_from_ps)
from .fields import PolarGrid, make_bump_family
from .maps import ConformalMap, DomainFamily
from .poisson import DirichletProblem, RhsSpec, solve_dirichlet
from .quadrature import (QuadResult, Verdict, brennan_direct, inverse_brennan,
                         kpq_norm)
from .util import default_seed, fmt17
from .verify import run_verify
from .weights import WeightField

_FAMILY_NAMES = tuple(f.value for f in DomainFamily)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex value {text!r}: {exc}") from None


def _parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected 'xmin,xmax,ymin,ymax', got {text!r}")
    xmin, xmax, ymin, ymax = (float(p) for p in parts)
    if not (xmin < xmax and ymin < ymax):
        raise argparse.ArgumentTypeError("window must satisfy xmin < xmax and ymin < ymax")
    return xmin, xmax, ymin, ymax


def _parse_rhs(text: str) -> RhsSpec:
    try:
        return RhsSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="confweight",
                                     description="conformal weight toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, domain=True):
        if domain:
            p.add_argument("--domain", required=True, choices=_FAMILY_NAMES)
        p.add_argument("--output", choices=("json", "csv"), default=None)
        p.add_argument("--out", dest="out_path", default=None, metavar="PATH")

    p = sub.add_parser("weight", help="evaluate h(z) = |phi'(z)|^2")
    common(p)
    p.add_argument("--at", required=True, type=_parse_complex, metavar="RE,IM")

    for name, xflag in (("brennan", "--s"), ("inverse-brennan", "--alpha")):
        p = sub.add_parser(name, help="refinement study of a weight-power integral")
        common(p)
        p.add_argument(xflag, dest="exponent", required=True, type=float)
        p.add_argument("--levels", type=int, default=8)
        p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("kpq", help="dilatation integral K_{p,q}")
    common(p)
    p.add_argument("--p", required=True, type=float)
    p.add_argument("--q", required=True, type=float)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("exponents", help="admissible exponent arithmetic")
    common(p, domain=False)
    p.add_argument("--p", required=True, type=float)
    p.add_argument("--s", type=float, default=None,
                   help="report q(p,s); omit to report bounds from --alpha0")
    p.add_argument("--alpha0", type=float, default=DEFAULT_ALPHA0)

    p = sub.add_parser("constant", help="Poincare constant of the unit disc")
    common(p, domain=False)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--nr", type=int, default=128)
    p.add_argument("--ntheta", type=int, default=128)
    p.add_argument("--bumps", type=int, default=64,
                   help="bump-family size for r != 2 lower bounds")

    p = sub.add_parser("solve", help="Dirichlet solve by conformal transfer")
    common(p)
    p.add_argument("--f", dest="rhs", required=True, type=_parse_rhs,
                   metavar="const:C|quartic")
    p.add_argument("--nr", type=int, default=128)
    p.add_argument("--ntheta", type=int, default=128)
    p.add_argument("--export", choices=("pushforward", "lattice"),
                   default="pushforward")
    p.add_argument("--window", type=_parse_window, default=(-1.0, 1.0, -1.0, 1.0),
                   metavar="XMIN,XMAX,YMIN,YMAX", help="lattice bounding box")
    p.add_argument("--lattice-n", type=int, default=64,
                   help="lattice points per axis")

    p = sub.add_parser("verify", help="run the full invariant suite")
    common(p, domain=False)
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(config: dict, payload: dict, out_path) -> None:
    doc = dict(payload)
    doc["config"] = config
    _emit(json.dumps(doc, sort_keys=True) + "\n", out_path)


def _emit_csv(config: dict, header: list[str], rows, out_path) -> None:
    buf = io.StringIO()
    for key in sorted(config):
        buf.write(f"# {key}={config[key]}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt17(v) if isinstance(v, float) else str(v)
                           for v in row) + "\n")
    _emit(buf.getvalue(), out_path)


def _config_echo(args, skip=("output", "out_path")) -> dict:
    cfg = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        if isinstance(val, complex):
            val = f"{val.real:g},{val.imag:g}"
        elif isinstance(val, RhsSpec):
            val = val.label
        elif isinstance(val, tuple):
            val = ",".join(f"{v:g}" for v in val)
        cfg[key] = val
    return cfg


def _quad_payload(res: QuadResult) -> dict:
    return {
        "value": res.value,
        "error_estimate": res.error_estimate,
        "levels_used": res.levels_used,
        "verdict": res.verdict.value,
        "level_values": list(res.level_values),
    }


def _verdict_exit(res: QuadResult) -> int:
    return 0 if res.verdict is Verdict.CONVERGED else 1


def _scalar_output(args, config: dict, payload: dict) -> None:
    if (args.output or "json") == "json":
        _emit_json(config, payload, args.out_path)
    else:
        keys = sorted(payload)
        flat = []
        for k in keys:
            v = payload[k]
            flat.append(" ".join(map(str, v)) if isinstance(v, list) else v)
        _emit_csv(config, keys, [flat], args.out_path)


def _cmd_weight(args) -> int:
    field = WeightField(ConformalMap.to_disc(DomainFamily(args.domain)))
    h = float(field.evaluate(args.at))
    _scalar_output(args, _config_echo(args), {"h": h})
    return 0


def _cmd_brennan(args) -> int:
    mapping = ConformalMap.to_disc(DomainFamily(args.domain))
    res = brennan_direct(mapping, args.exponent, tol=args.tol, max_levels=args.levels)
    _scalar_output(args, _config_echo(args), _quad_payload(res))
    return _verdict_exit(res)


def _cmd_inverse_brennan(args) -> int:
    mapping = ConformalMap.to_disc(DomainFamily(args.domain))
    res = inverse_brennan(mapping, args.exponent, tol=args.tol, max_levels=args.levels)
    _scalar_output(args, _config_echo(args), _quad_payload(res))
    return _verdict_exit(res)


def _cmd_kpq(args) -> int:
    mapping = ConformalMap.to_disc(DomainFamily(args.domain))
    res = kpq_norm(mapping, args.p, args.q, tol=args.tol, max_levels=args.levels)
    _scalar_output(args, _config_echo(args), _quad_payload(res))
    return _verdict_exit(res)


def _cmd_exponents(args) -> int:
    if args.s is not None:
        payload = {"q": q_from_ps(args.p, args.s)}
    else:
        b = exponent_bounds(args.p, args.alpha0)
        payload = {"p_min": b.p_min, "q_max": b.q_max, "r_max": b.r_max,
                   "conjectural": b.conjectural}
    _scalar_output(args, _config_echo(args), payload)
    return 0


def _cmd_constant(args) -> int:
    grid = PolarGrid(args.nr, args.ntheta)
    bumps = None
    if args.r != 2.0:
        rng = np.random.default_rng(default_seed())
        bumps = make_bump_family(args.bumps, rng=rng)
    est = poincare_constant_disc(args.r, grid, bumps=bumps)
    payload = {"value": est.value, "method": est.method.value,
               "tolerance": est.tolerance, "iterations": est.iterations}
    _scalar_output(args, _config_echo(args), payload)
    return 0


def _cmd_solve(args) -> int:
    mapping = ConformalMap.to_disc(DomainFamily(args.domain))
    problem = DirichletProblem(mapping, args.rhs)
    solution = solve_dirichlet(problem, PolarGrid(args.nr, args.ntheta))
    config = _config_echo(args)
    lattice = None
    if args.export == "lattice":
        xmin, xmax, ymin, ymax = args.window
        xs = np.linspace(xmin, xmax, args.lattice_n)
        ys = np.linspace(ymin, ymax, args.lattice_n)
        lattice = (xs[None, :] + 1j * ys[:, None]).ravel()
    if (args.output or "csv") == "csv":
        buf = io.StringIO()
        for key in sorted(config):
            buf.write(f"# {key}={config[key]}\n")
        solution.to_csv(buf, lattice=lattice)
        _emit(buf.getvalue(), args.out_path)
    else:
        vals = solution.field.values
        _emit_json(config, {"u_min": float(vals.min()), "u_max": float(vals.max()),
                            "n_r": args.nr, "n_theta": args.ntheta},
                   args.out_path)
    return 0


def _cmd_verify(args) -> int:
    report = run_verify()
    if (args.output or "json") == "json":
        _emit_json(_config_echo(args), report, args.out_path)
    else:
        rows = [(c["name"], "pass" if c["passed"] else "FAIL") for c in report["checks"]]
        rows += [(f"mismatch.{m['family']}", "pass" if m["mismatch"] else "FAIL")
                 for m in report["mismatch_reports"]]
        _emit_csv(_config_echo(args), ["check", "status"], rows, args.out_path)
    return 0 if report["passed"] else 1


_DISPATCH = {
    "weight": _cmd_weight,
    "brennan": _cmd_brennan,
    "inverse-brennan": _cmd_inverse_brennan,
    "kpq": _cmd_kpq,
    "exponents": _cmd_exponents,
    "constant": _cmd_constant,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except BrokenPipeError:
        return 0
    except (ConfweightError, ValueError, OSError) as exc:
        # ValueError covers grid/seed validation, OSError a bad --out path
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
