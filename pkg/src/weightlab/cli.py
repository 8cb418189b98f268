"""Command-line entry point.

Subcommands: constants, solve, bellman, extremal, dyadic, sweep, selftest.
Exit codes: 0 success, 1 a verification failed (an inequality or tolerance
was violated), 2 usage or input error.  All reals are printed with 15
significant digits; identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bellman, constants, dyadic, extremals, selftest, solvers, weights
from .errors import WeightLabError

__all__ = ["main"]


def _fmt(x: float) -> float:
    """Round a float to 15 significant digits for stable output."""
    if not math.isfinite(x):
        return x
    return float(f"{x:.15g}")


def _clean(obj):
    """Recursively apply 15-digit rounding to every float in a report."""
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    except OSError as exc:
        raise WeightLabError(f"cannot write {path}: {exc}") from exc


def _emit_json(payload: dict, path: str | None) -> None:
    _write(json.dumps(_clean(payload), indent=2), path)


def _emit_csv(header: str, rows: list[tuple], path: str | None) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(f"{v:.15g}" if isinstance(v, float) else str(v) for v in row))
    _write("\n".join(lines), path)


def _interval_json(iv: weights.Interval) -> list[float]:
    return [iv.a, iv.b]


def _load_weight_arg(path: str) -> weights.Weight:
    try:
        return weights.load_weight(path)
    except OSError as exc:
        raise WeightLabError(f"cannot read weight file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands

def _cmd_constants(args) -> int:
    w = _load_weight_arg(args.weight)
    which = tuple(s.strip() for s in args.which.split(",") if s.strip())
    p_values = tuple(float(s) for s in args.p_values.split(",") if s.strip())
    report = constants.compute_report(
        w,
        resolution=args.resolution,
        which=which,
        p_values=p_values,
        maximal_resolution=args.maximal_resolution,
    )
    entries: dict = {"resolution": report.resolution}
    pairs = []
    for name in ("rh1", "ainf", "rh1_prime", "rh1_doubleprime"):
        got = getattr(report, name)
        if got is not None:
            entries[name] = {"value": got[0], "interval": _interval_json(got[1])}
            pairs.append((name, got[0], got[1]))
    for label, table in (("rh_p", report.rh_p), ("a_p", report.a_p)):
        if table:
            entries[label] = {
                str(_fmt(p)): {"value": v, "interval": _interval_json(iv)}
                for p, (v, iv) in table.items()
            }
            pairs.extend((f"{label}[{_fmt(p)}]", v, iv) for p, (v, iv) in table.items())
    if args.format == "json":
        _emit_json(entries, args.output)
    else:
        rows = [(n, v, iv.a, iv.b) for n, v, iv in pairs]
        _emit_csv("constant,value,interval_a,interval_b", rows, args.output)
    return 0


def _cmd_solve(args) -> int:
    eq = args.equation
    if eq == "gamma-log":
        res = solvers.gamma_log(args.q)
        payload = {"equation": eq, "q": args.q, "root": res.root, "residual": res.residual}
    elif eq == "gamma-entropy":
        minus, plus = solvers.gamma_entropy_roots(args.q)
        payload = {
            "equation": eq,
            "q": args.q,
            "root_minus": minus.root,
            "residual_minus": minus.residual,
            "root_plus": plus.root,
            "residual_plus": plus.residual,
        }
    elif eq == "eps-minus":
        res = solvers.eps_minus(args.q)
        payload = {"equation": eq, "q": args.q, "root": res.root, "residual": res.residual}
    elif eq == "gehring-sharp":
        res = solvers.gehring_sharp_eps(args.p, args.k)
        payload = {
            "equation": eq,
            "p": args.p,
            "k": args.k,
            "root": res.root,
            "residual": res.residual,
        }
    elif eq == "gehring-n":
        val = solvers.gehring_dim_n_eps(args.n, args.q)
        alpha, beta = solvers.good_lambda_params(args.q)
        payload = {
            "equation": eq,
            "n": args.n,
            "q": args.q,
            "eps": val,
            "good_lambda_alpha": alpha,
            "good_lambda_beta": beta,
            "log_product_gap": solvers.good_lambda_verify(args.n, args.q),
        }
    elif eq == "funny":
        payload = {
            "equation": eq,
            "q": args.q,
            "value": solvers.funny_bound(args.q),
            "log_value": solvers.funny_bound_log(args.q),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise WeightLabError(f"unknown equation {eq}")
    _emit_json(payload, args.output)
    return 0


_SURFACES = {
    "ainf-upper": bellman.SurfaceKind.AINF_UPPER,
    "gehring": bellman.SurfaceKind.GEHRING,
    "ainf-lower": bellman.SurfaceKind.AINF_LOWER,
}


def _cmd_bellman(args) -> int:
    kind = _SURFACES[args.surface]
    surface = bellman.BellmanSurface(kind, args.q, eps=args.eps)
    if args.eval is not None:
        try:
            sx, sy = args.eval.split(",")
            x, y = float(sx), float(sy)
        except ValueError:
            raise WeightLabError(f"--eval expects 'x,y', got {args.eval!r}") from None
        tp = bellman.tangent_point(surface, x, y)
        payload = {
            "surface": args.surface,
            "q": args.q,
            "eps": args.eps,
            "x": x,
            "y": y,
            "value": bellman.evaluate(surface, x, y),
            "tangent": tp.root,
            "tangent_residual": tp.residual,
        }
        _emit_json(payload, args.output)
        return 0
    ok, payload = _verify_surface(surface, args.verify, args.grid)
    payload = {"surface": args.surface, "q": args.q, "eps": args.eps, **payload}
    _emit_json(payload, args.output)
    return 0 if ok else 1


def _interior_grid(surface: bellman.BellmanSurface, n: int):
    xs = np.linspace(0.3, 3.0, n)
    fracs = np.linspace(0.02, 0.98, n)
    xg, fg = np.meshgrid(xs, fracs)
    if surface.entropy_coordinates:
        base = xg * np.log(xg)
        yg = base + fg * surface.q * xg
    else:
        yg = np.log(xg) - fg * math.log(surface.q)
    return xg.ravel(), yg.ravel()


def _verify_surface(surface, what: str, grid: int):
    if what == "bounds":
        if surface.kind is not bellman.SurfaceKind.AINF_UPPER:
            raise WeightLabError("--verify bounds applies to the ainf-upper surface")
        rep = bellman.bounds_check_ainf(surface.q, grid=grid)
        ok = rep.max_lower_violation <= 1e-9 and rep.max_upper_violation <= 1e-9
        return ok, {
            "check": "bounds",
            "grid": rep.grid,
            "max_lower_violation": rep.max_lower_violation,
            "max_upper_violation": rep.max_upper_violation,
            "ratio_max": rep.ratio_max,
            "ratio_bound": rep.ratio_bound,
            "passed": ok,
        }
    if what == "tangent":
        vs = np.linspace(0.5, 2.0, max(grid, 2))
        devs = [bellman.tangent_linearity_check(surface, float(v)) for v in vs]
        worst = int(np.argmax(devs))
        ok = devs[worst] <= 1e-9
        return ok, {
            "check": "tangent",
            "samples": len(devs),
            "max_deviation": float(devs[worst]),
            "worst_v": float(vs[worst]),
            "passed": ok,
        }
    if what == "hessian":
        xs, ys = _interior_grid(surface, max(grid, 2))
        worst_val = -math.inf
        worst_pt = (math.nan, math.nan)
        for x, y in zip(xs, ys):
            res = bellman.hessian(surface, float(x), float(y))
            if surface.kind is bellman.SurfaceKind.AINF_UPPER:
                scale = max(1.0, float(np.max(np.abs(res.matrix))) ** 2)
                val = abs(res.det) / scale
                val = max(val, res.matrix[1, 1])  # B_yy must stay <= 0
            elif surface.kind is bellman.SurfaceKind.GEHRING:
                val = max(res.eigenvalues)
            else:
                val = -min(res.eigenvalues)
            if val > worst_val:
                worst_val, worst_pt = val, (float(x), float(y))
        threshold = 1e-6 if surface.kind is bellman.SurfaceKind.AINF_UPPER else 1e-8
        ok = worst_val <= threshold
        return ok, {
            "check": "hessian",
            "points": len(xs),
            "worst_value": worst_val,
            "threshold": threshold,
            "worst_point": [worst_pt[0], worst_pt[1]],
            "passed": ok,
        }
    raise WeightLabError(f"unknown verification {what!r}")


_FAMILIES = {
    "ainf": extremals.Family.AINF_UPPER,
    "gehring-boundary": extremals.Family.GEHRING_BOUNDARY,
    "gehring-interior": extremals.Family.GEHRING_INTERIOR,
    "funny": extremals.Family.FUNNY,
}


def _cmd_extremal(args) -> int:
    family = _FAMILIES[args.family]
    target = None
    if (args.x is None) != (args.y is None):
        raise WeightLabError("--x and --y must be given together")
    if args.x is not None:
        target = (args.x, args.y)
    spec = extremals.ExtremalSpec(family, args.q, target=target, eps=args.eps)
    w = extremals.build(spec)
    payload = {
        "family": args.family,
        "q": args.q,
        "eps": args.eps,
        "target": list(extremals.default_target(spec) if target is None else target),
        "pieces": weights.weight_to_dict(w)["pieces"],
    }
    if family is extremals.Family.GEHRING_BOUNDARY or args.eps is not None or family in (
        extremals.Family.AINF_UPPER,
        extremals.Family.FUNNY,
    ):
        try:
            rep = extremals.attainment_check(spec)
            payload["surface_value"] = rep.surface_value
            payload["weight_value"] = rep.weight_value
            payload["gap"] = rep.gap
        except WeightLabError:
            pass  # gehring families without eps: attainment needs eps
    if args.emit is not None:
        if args.emit.endswith(".json"):
            weights.save_weight(w, args.emit)
        elif args.emit.endswith(".csv"):
            ts = np.linspace(1.0 / 1024, 1.0, 1024)
            rows = [(float(t), weights.evaluate(w, float(t))) for t in ts]
            _emit_csv("t,w", rows, args.emit)
        else:
            raise WeightLabError("--emit path must end in .json or .csv")
        payload["emitted"] = args.emit
    _emit_json(payload, args.output)
    return 0


def _node_json(node: dyadic.PartitionNode) -> dict:
    out = {
        "interval": [node.interval.a, node.interval.b],
        "point": [node.point[0], node.point[1]],
    }
    if node.children:
        out["children"] = [_node_json(c) for c in node.children]
    return out


def _cmd_dyadic(args) -> int:
    w = _load_weight_arg(args.weight)
    cfg = dyadic.SplitConfig(q=args.q, q1=args.q1, delta0=args.delta0)
    mode = dyadic.SplitMode.LOG if args.mode == "log" else dyadic.SplitMode.ENTROPY
    tree = dyadic.build_partition(w, cfg, mode, max_depth=args.depth)
    if not args.verify:
        payload = {
            "mode": args.mode,
            "q": args.q,
            "q1": args.q1,
            "depth": args.depth,
            "tree": _node_json(tree.root),
        }
        _emit_json(payload, args.output)
        return 0
    if mode is dyadic.SplitMode.LOG:
        surface = bellman.BellmanSurface(bellman.SurfaceKind.AINF_UPPER, args.q1)
    else:
        if args.eps is None:
            gp = solvers.gamma_entropy_roots(args.q1)[1].root
            eps = 0.5 / (gp - 1.0)
        else:
            eps = args.eps
        surface = bellman.BellmanSurface(bellman.SurfaceKind.GEHRING, args.q1, eps=eps)
    rep = dyadic.chain_verify(surface, w, tree)
    ok = rep.monotone and rep.meets_target
    if args.format == "csv":
        rows = [(k, s) for k, s in enumerate(rep.sums)]
        _emit_csv("generation,sum", rows, args.output)
    else:
        payload = {
            "mode": args.mode,
            "q": args.q,
            "q1": args.q1,
            "depth": args.depth,
            "eps": getattr(surface, "eps", None),
            "sums": list(rep.sums),
            "target": rep.target,
            "monotone": rep.monotone,
            "meets_target": rep.meets_target,
            "final_gap": rep.final_gap,
        }
        _emit_json(payload, args.output)
    return 0 if ok else 1


def _cmd_sweep(args) -> int:
    q_values = tuple(float(s) for s in args.q_list.split(",") if s.strip())
    rows = extremals.sharpness_sweep(q_values)
    if args.format == "json":
        payload = {
            "rows": [
                {"q": q, "e_ratio": a, "funny_ratio": b} for q, a, b in rows
            ]
        }
        _emit_json(payload, args.output)
    else:
        _emit_csv("Q,e_ratio,funny_ratio", [tuple(r) for r in rows], args.output)
    return 0


def _cmd_selftest(args) -> int:
    only = None
    if args.only:
        only = tuple(s.strip() for s in args.only.split(",") if s.strip())
    results = selftest.run(only=only)
    if not results:
        raise WeightLabError(f"no checks match --only {args.only!r}")
    all_ok = True
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        all_ok = all_ok and ok
    print(f"{'OK' if all_ok else 'FAILED'} ({sum(ok for _, ok, _ in results)}/{len(results)})")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weightlab",
        description="Weight constants, sharp-constant equations, Bellman surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="scan the weight constants of a weight file")
    p.add_argument("--weight", required=True, help="weight JSON file")
    p.add_argument("--resolution", type=int, default=constants.DEFAULT_RESOLUTION)
    p.add_argument(
        "--which",
        default="rh1,ainf",
        help="comma list from rh1,ainf,rhp,ap,rh1_prime,rh1_doubleprime",
    )
    p.add_argument("--p-values", default="2.0", help="comma list of exponents for rhp/ap")
    p.add_argument(
        "--maximal-resolution",
        type=int,
        default=constants.DEFAULT_MAXIMAL_RESOLUTION,
        help="resolution for the two nested-scan constants",
    )
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("solve", help="solve one of the constant equations")
    p.add_argument(
        "--equation",
        required=True,
        choices=("gamma-log", "gamma-entropy", "eps-minus", "gehring-sharp", "gehring-n", "funny"),
    )
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bellman", help="evaluate or verify a Bellman surface")
    p.add_argument("--surface", required=True, choices=tuple(_SURFACES))
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--eps", type=float, default=None)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eval", default=None, metavar="X,Y")
    group.add_argument("--verify", choices=("hessian", "bounds", "tangent"), default=None)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_bellman)

    p = sub.add_parser("extremal", help="build an extremal weight")
    p.add_argument("--family", required=True, choices=tuple(_FAMILIES))
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--emit", default=None, help="write the weight to a .json or .csv file")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("dyadic", help="build a splitting tree and verify the chain")
    p.add_argument("--weight", required=True)
    p.add_argument("--mode", choices=("log", "entropy"), default="log")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--q1", type=float, required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--delta0", type=float, default=0.05)
    p.add_argument("--verify", action="store_true", help="run the telescoping chain check")
    p.add_argument("--eps", type=float, default=None, help="entropy-mode surface exponent")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_dyadic)

    p = sub.add_parser("sweep", help="sharpness ratio table over a list of q values")
    p.add_argument("--q-list", required=True, help="comma list of q values (may be empty)")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("selftest", help="run the acceptance and invariant suites")
    p.add_argument("--only", default=None, help="comma list of check-name substrings")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WeightLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
