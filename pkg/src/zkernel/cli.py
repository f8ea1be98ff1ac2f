"""Command-line front end.

Subcommands: classify, kernel, validate, converge, sample.  Complex
parameters are written RE+IMi (for example 1.5+2i or 0.3-0.25i); floats
in outputs carry 17 significant digits so files round-trip bit-faithfully.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import ZKernelError
from .kernels import DiscreteKernel, RSBundle, kernel_L_kv, kernel_O_kv
from .sampling import (
    FiniteKernelMatrix,
    dpp_sample,
    empirical_correlations,
)
from .scaling import ContinuumKernel, convergence_study, default_grid, kernel_P
from .zmeasure import Params, classify_pair, in_u0, is_admissible
from . import validate as validate_suites


def parse_complex(text: str) -> complex:
    """Parse RE, RE+IMi or RE-IMi (also plain 'i' forms)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise argparse.ArgumentTypeError("empty complex literal")
    t = t.replace("I", "i").replace("j", "i")
    try:
        if t.endswith("i"):
            return complex(t[:-1] + "j")
        return complex(float(t))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}") from exc


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}i"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _params_from(args) -> Params:
    return Params(args.z, args.zp, args.a, args.b)


def _require_admissible(params: Params, unsafe: bool):
    if unsafe:
        if not in_u0(params):
            raise ZKernelError("parameters outside the nonvanishing domain")
        return
    if not is_admissible(params):
        raise ZKernelError("parameters not admissible (use --unsafe to relax to the nonvanishing domain)")


def _out_stream(path):
    return open(path, "w", newline="") if path else None


def cmd_classify(args) -> int:
    cls = classify_pair(args.z, args.zp)
    params = Params(args.z, args.zp, args.a, args.b)
    adm = is_admissible(params)
    print(f"classification: {cls}")
    print(f"admissible: {adm}")
    print(f"epsilon: {_fmt(params.epsilon)}  sigma: {_fmt(params.sigma)}")
    return 0 if (adm or args.unsafe) else 1


def _parse_grid(spec: str) -> list[float]:
    return [float(t) for t in spec.split(",") if t.strip()]


def cmd_kernel(args) -> int:
    params = _params_from(args)
    _require_admissible(params, args.unsafe)
    stream = _out_stream(args.out) or sys.stdout
    writer = csv.writer(stream)
    if args.kind in ("O", "L"):
        pts = [int(v) for v in _parse_grid(args.grid)] if args.grid else list(range(20))
        handle = DiscreteKernel(params, args.n, args.kind)
        fn = kernel_O_kv if args.kind == "O" else kernel_L_kv
        header = ["x", "y", "value", "max_term"]
        if args.kind == "L":
            header.append("block")
        writer.writerow(header)
        for x in pts:
            for y in pts:
                kv = fn(x, y, handle)
                row = [x, y, _fmt(kv.value.real), _fmt(kv.max_term)]
                if args.kind == "L":
                    row.append(("g" if x >= args.n else "l") + ("g" if y >= args.n else "l"))
                writer.writerow(row)
    else:
        pts = _parse_grid(args.grid) if args.grid else [0.25, 0.5, 0.75, 1.5, 2.0, 4.0]
        pts = [p for p in pts if p > 0 and p != 1.0]
        ck = ContinuumKernel(params)
        writer.writerow(["x", "y", "value", "max_term"])
        for x in pts:
            for y in pts:
                writer.writerow([_fmt(x), _fmt(y), _fmt(kernel_P(x, y, ck)), _fmt(0.0)])
    if stream is not sys.stdout:
        stream.close()
    return 0


def cmd_validate(args) -> int:
    report = validate_suites.run_suite(args.suite, draws=args.draws, seed=args.seed)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["pass"] else 1


def cmd_converge(args) -> int:
    params = _params_from(args)
    _require_admissible(params, args.unsafe)
    if args.grid:
        vals = _parse_grid(args.grid)
        if any(v == 1.0 for v in vals):
            raise ZKernelError("grid values must avoid x = 1")
        grid = [(v, v) for v in vals]
    else:
        grid = default_grid()
    levels = [int(v) for v in _parse_grid(args.levels)]
    rows = convergence_study(params, grid, levels)
    stream = _out_stream(args.out) or sys.stdout
    writer = csv.writer(stream)
    writer.writerow(["N", "x", "y", "scaled_kernel", "limit_kernel", "abs_err", "ratio_flag"])
    by_pt: dict[tuple, dict[int, float]] = {}
    for r in rows:
        by_pt.setdefault((r.x, r.y), {})[r.n_level] = r.abs_err
    for r in rows:
        errs = by_pt[(r.x, r.y)]
        flag = ""
        if r.n_level * 2 in errs:
            ratio = errs[r.n_level * 2] / max(errs[r.n_level], 1e-300)
            flag = "ok" if (ratio < 0.7 or errs[r.n_level * 2] < 1e-12) else "slow"
        writer.writerow(
            [r.n_level, _fmt(r.x), _fmt(r.y), _fmt(r.scaled_kernel), _fmt(r.limit_kernel), _fmt(r.abs_err), flag]
        )
    if stream is not sys.stdout:
        stream.close()
    ok = all(
        errs[2 * n] / max(errs[n], 1e-300) < 0.7 or errs[2 * n] < 1e-12
        for errs in by_pt.values()
        for n in errs
        if 2 * n in errs
    )
    return 0 if ok else 1


def cmd_sample(args) -> int:
    params = _params_from(args)
    _require_admissible(params, args.unsafe)
    from .kernels import kernel_O
    from .sampling import complement_config, racah_parameters
    from .zmeasure import PointConfig, classify_pair, degenerate_order

    n = args.n
    cls = classify_pair(params.z, params.z_prime)
    k = degenerate_order(cls)
    if k is None:
        raise ZKernelError("sampling requires degenerate parameters (finite ground set)")
    ground = list(range(n + k))
    handle = DiscreteKernel(params, n, "O")
    ko = np.array([[kernel_O(x, y, handle) for y in ground] for x in ground])
    if args.complement:
        ko = np.eye(len(ground)) - ko
    kernel = FiniteKernelMatrix(tuple(ground), ko)
    batch = dpp_sample(kernel, seed=args.seed, count=args.count)
    stream = _out_stream(args.out) or sys.stdout
    header = {
        "seed": batch.seed,
        "z": _fmt(params.z),
        "zp": _fmt(params.z_prime),
        "a": params.a,
        "b": params.b,
        "n": n,
        "count": args.count,
        "kind": "complement" if args.complement else "points",
    }
    stream.write(json.dumps(header) + "\n")
    for cfg in batch.configs:
        stream.write(json.dumps(list(cfg)) + "\n")
    rho1 = {str(x): empirical_correlations(batch, (x,))["estimate"] for x in ground}
    stream.write(json.dumps({"empirical_rho1": rho1}) + "\n")
    if stream is not sys.stdout:
        stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zkernel", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_params(p):
        p.add_argument("--z", type=parse_complex, required=True)
        p.add_argument("--zp", type=parse_complex, required=True)
        p.add_argument("--a", type=float, default=0.0)
        p.add_argument("--b", type=float, default=0.0)
        p.add_argument("--unsafe", action="store_true", help="relax admissibility to the nonvanishing domain")
        p.add_argument("--out", default=None)

    p = sub.add_parser("classify", help="classify a parameter pair")
    add_params(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("kernel", help="emit a kernel grid as CSV")
    add_params(p)
    p.add_argument("--kind", choices=["O", "L", "P"], default="O")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--grid", default=None, help="comma separated coordinates")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("validate", help="run a verification suite, emit JSON")
    p.add_argument("--suite", choices=["identities", "orthogonality", "drhp", "oracle", "all"], default="all")
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("converge", help="lattice-to-continuum convergence table")
    add_params(p)
    p.add_argument("--grid", default=None, help="comma separated diagonal grid values")
    p.add_argument("--levels", default="25,50,100,200")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("sample", help="exact sampling in the degenerate case (JSONL)")
    add_params(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--complement", action="store_true", help="sample the complement ensemble")
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ZKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
