"""Command-line entry point: ``capillum <subcommand> ...``."""

import argparse
import csv
import io
import json
import sys

import numpy as np

from capillum import __version__
from capillum.explicit import explicit_report
from capillum.ilp import Grid, build_weights, solve_exact
from capillum.oracle import (
    CapBody,
    DirectionSet,
    IlluminationFailed,
    InvalidCapBody,
    PackingCounterexample,
    check_packing_lemma,
    illuminate,
    in_both_caps,
    in_cap,
    in_union,
    make_rng,
    mc_estimate_measure,
    sample_sphere,
    verify_illumination,
)
from capillum.search import PUBLISHED, direction_count, sweep
from capillum.sphere import (
    DEFAULT_STEPS,
    Family,
    VertexFamily,
    cap_measure,
    cap_measure_bounds,
    intersection_measure_exact,
    intersection_measure_upper,
    union_measure,
)

SCHEMA_VERSION = 1


class CliError(Exception):
    """Computation failed; maps to exit status 1."""


def _int_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        return [int(lo)]
    return list(range(int(lo), int(hi) + 1))


def _emit(args, payload, rows=None, columns=None):
    fmt = getattr(args, "format", "json")
    if fmt == "json" or rows is None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        widths = {c: max(len(c), *(len(_fmt_cell(r.get(c))) for r in rows)) for c in columns}
        lines = ["  ".join(c.rjust(widths[c]) for c in columns)]
        for r in rows:
            lines.append("  ".join(_fmt_cell(r.get(c)).rjust(widths[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _envelope(kind, body, **config):
    return {"schema": SCHEMA_VERSION, "version": __version__, "kind": kind, "config": config, **body}


def _report_row(rep, timing=False):
    row = rep.as_dict()
    row.pop("counts")
    if not timing:
        row.pop("runtime")
    published = PUBLISHED.get(rep.n)
    if published:
        row["published_bound"], row["published_s"], row["published_l"] = published
    return row


def cmd_table(args):
    dims = _int_range(args.dims)
    rows = []
    for n in dims:
        grid = Grid.degree(n) if args.grid == "degree" else Grid.uniform(n, args.t)
        rows.append(_report_row(sweep(n, steps=args.N, grid=grid), args.timing))
    columns = ["n", "rounded", "s", "l", "M", "directions", "ratio_to_2n",
               "published_bound", "published_s", "published_l"]
    if args.timing:
        columns.insert(7, "runtime")
    _emit(args, _envelope("table", {"rows": rows}, t=args.t, N=args.N, grid=args.grid), rows, columns)


def cmd_bound(args):
    grid = Grid.degree(args.n) if args.grid == "degree" else Grid.uniform(args.n, args.t)
    rep = sweep(args.n, steps=args.N, grid=grid)
    row = _report_row(rep, args.timing)
    row["counts"] = {str(k): v for k, v in rep.counts.items()}
    _emit(args, _envelope("bound", row, t=grid.t, N=args.N, grid=args.grid))


def cmd_ilp(args):
    grid = Grid.degree(args.n) if args.grid == "degree" else Grid.uniform(args.n, args.t)
    table = build_weights(args.n, grid, args.N)
    sol = solve_exact(table.instance(args.s, args.l))
    dirs = direction_count(args.n, args.s, args.l)
    body = {
        "n": args.n,
        "s": args.s,
        "l": args.l,
        "M": sol.value,
        "total_bound": sol.value + dirs,
        "assignment": {str(k): v for k, v in sol.sparse().items()},
        "lp_bound": sol.lp_bound,
        "nodes_explored": sol.nodes,
    }
    _emit(args, _envelope("ilp", body, t=grid.t, N=args.N, grid=args.grid))


def cmd_explicit(args):
    dims = _int_range(args.sweep) if args.sweep else [args.n]
    rows = [explicit_report(n).as_dict() for n in dims]
    columns = ["n", "p", "q", "x0", "direction_count", "mvt_bound", "rhs_eq1", "passes_2n"]
    _emit(args, _envelope("explicit", {"rows": rows}), rows, columns)


def cmd_measures(args):
    n, theta = args.n, args.theta
    rows = [{"n": n, "theta": theta, "quantity": "cap", "kind": "exact", "value": cap_measure(n, theta)}]
    if theta > 0:
        lower, upper = cap_measure_bounds(n, theta)
        rows.append({"n": n, "theta": theta, "quantity": "cap", "kind": "lower-bound", "value": lower})
        if upper is not None:
            rows.append({"n": n, "theta": theta, "quantity": "cap", "kind": "upper-bound", "value": upper})
        for fam in (Family.SIMPLEX, Family.CROSS_POLYTOPE):
            m = union_measure(VertexFamily(fam, n), theta, steps=args.N)
            rows.append({"n": n, "theta": theta, "quantity": f"union-{fam.value}",
                         "kind": m.kind.value, "value": m.value})
    if args.beta is not None:
        if n < 4:
            raise argparse.ArgumentTypeError("intersection measures need n >= 4")
        exact = intersection_measure_exact(n, theta, args.beta)
        upper = intersection_measure_upper(n, theta, args.beta, args.N)
        for m in (exact, upper):
            rows.append({"n": n, "theta": theta, "beta": args.beta, "quantity": "intersection",
                         "kind": m.kind.value, "value": m.value})
    _emit(args, _envelope("measures", {"rows": rows}, N=args.N), rows,
          ["n", "theta", "quantity", "kind", "value"])


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_verify(args):
    try:
        body = CapBody.from_json(_load_json(args.body))
    except InvalidCapBody as exc:
        raise CliError(f"invalid cap body: {exc}") from exc
    if args.dirs:
        dirs = DirectionSet.from_json(_load_json(args.dirs))
    else:
        try:
            dirs = illuminate(body, args.s, args.l, args.extra, make_rng(args.seed), args.retries)
        except IlluminationFailed as exc:
            raise CliError(str(exc)) from exc
    verdict = verify_illumination(body, dirs)
    rows = [{"vertex": i, "radius": float(body.radii[i]), "illuminated": bool(lit)}
            for i, lit in enumerate(verdict.vertex_lit)]
    payload = {
        "n": body.n,
        "directions": len(dirs),
        "positive_hull_spans": verdict.spans,
        "illuminated": verdict.illuminated,
        "vertices": rows,
    }
    if not args.dirs:
        payload["direction_vectors"] = dirs.directions.tolist()
    _emit(args, _envelope("verify", payload, seed=args.seed), rows, ["vertex", "radius", "illuminated"])


def cmd_stress(args):
    rng = make_rng(args.seed)
    packing = []
    for n in _int_range(args.dims):
        found = 0
        for _ in range(args.trials):
            try:
                check_packing_lemma(sample_sphere(n, n + 2, rng))
                found += 1
            except PackingCounterexample:
                pass
        packing.append({"n": n, "trials": args.trials, "witnessed": found})
    agreement = []
    for n in _int_range(args.measure_dims):
        for theta in (0.3, 0.6, 0.9, 1.2):
            est, se = mc_estimate_measure(n, in_cap(np.eye(n)[0], theta), args.samples, rng)
            agreement.append(_agree(n, theta, "cap", cap_measure(n, theta), est, se, exact=True))
            if n >= 4:
                beta = 0.5 * theta
                est, se = mc_estimate_measure(n, in_both_caps(n, theta, beta), args.samples, rng)
                val = intersection_measure_exact(n, theta, beta).value
                agreement.append(_agree(n, theta, "intersection", val, est, se, exact=True))
            for fam in (Family.SIMPLEX, Family.CROSS_POLYTOPE):
                vf = VertexFamily(fam, n)
                m = union_measure(vf, theta, steps=None)
                est, se = mc_estimate_measure(n, in_union(vf.points(), theta), args.samples, rng)
                agreement.append(_agree(n, theta, f"union-{fam.value}", m.value, est, se,
                                        exact=m.kind.value == "exact"))
    ok = all(p["witnessed"] == p["trials"] for p in packing) and all(a["ok"] for a in agreement)
    payload = {"packing": packing, "measures": agreement, "ok": ok}
    _emit(args, _envelope("stress", payload, seed=args.seed, samples=args.samples))
    if not ok:
        raise CliError("stress checks failed")


def _agree(n, theta, quantity, value, est, se, exact):
    slack = 4.0 * se + 1e-12
    ok = abs(value - est) <= slack if exact else value <= est + slack
    return {"n": n, "theta": theta, "quantity": quantity, "value": value,
            "estimate": est, "std_error": se, "ok": bool(ok)}


def _add_output(p, formats=("json",)):
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--out", help="write output to this file instead of stdout")


def _add_grid(p):
    p.add_argument("--t", type=int, default=200, help="number of radius buckets")
    p.add_argument("--N", type=int, default=DEFAULT_STEPS, help="steps in the intersection bound")
    p.add_argument("--grid", choices=("uniform", "degree"), default="uniform")


def _add_timing(p):
    p.add_argument("--timing", action="store_true", help="include wall-clock runtime in the output")


def build_parser():
    parser = argparse.ArgumentParser(prog="capillum", description="Illumination bounds for cap bodies.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    tabular = ("json", "csv", "table")

    p = sub.add_parser("table", help="best bound for each dimension 4..15")
    p.add_argument("--dims", default="4..15")
    _add_grid(p)
    _add_timing(p)
    _add_output(p, tabular)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("bound", help="best bound for one dimension")
    p.add_argument("--n", type=int, required=True)
    _add_grid(p)
    _add_timing(p)
    _add_output(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("ilp", help="solve the integer program for fixed (s, l)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_ilp)

    p = sub.add_parser("explicit", help="closed-form bound from cross-polytopes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int)
    group.add_argument("--sweep", help="dimension range such as 13..40")
    _add_output(p, tabular)
    p.set_defaults(func=cmd_explicit)

    p = sub.add_parser("measures", help="cap, union and intersection measures")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True, help="cap radius in radians")
    p.add_argument("--beta", type=float, help="half-distance between two caps of radius theta")
    p.add_argument("--N", type=int, default=DEFAULT_STEPS)
    _add_output(p, tabular)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("verify", help="check that directions illuminate a cap body")
    p.add_argument("--body", required=True, help='JSON file {"n": int, "vertices": [[...], ...]}')
    p.add_argument("--dirs", help='JSON file {"directions": [[...], ...]}; omit to construct them')
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--extra", type=int, default=0)
    p.add_argument("--retries", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p, tabular)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stress", help="packing-lemma and Monte Carlo agreement checks")
    p.add_argument("--dims", default="3..10")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--measure-dims", default="4..6")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_stress)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        parser.error(str(exc))
    except CliError as exc:
        print(f"capillum: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
