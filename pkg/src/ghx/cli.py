"""Command line front end.

Subcommands: basis, matrix, rank, homology, table, check, shade, bench.
Global flags: --data-dir (or GHX_DATA_DIR), --prime (default 32189),
--over-q, --jobs, --force.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .engine import Engine, SliceSpec, Store
from .families import hairy_vanishing_range, ordinary_vertex_range, \
    register_all
from .linalg import DEFAULT_PRIME
from . import tables as T


def make_engine(args):
    store = Store(args.data_dir)
    return register_all(Engine(store, prime=args.prime, over_q=args.over_q,
                               force=args.force))


def slice_from_args(args):
    fam = args.family
    if fam in ("ordinary", "merkulov34", "merkulov56"):
        return SliceSpec(fam, args.n_parity, args.loops, args.vertices)
    if fam == "hairy":
        return SliceSpec(fam, args.n_parity, args.loops, args.vertices,
                         hairs=args.hairs, m_parity=args.m_parity)
    if fam == "chairy":
        return SliceSpec(fam, args.n_parity, args.loops, args.vertices,
                         hairs=args.hairs)
    if fam == "forested":
        return SliceSpec(fam, args.n_parity, args.loops, hairs=args.hairs,
                         marked=args.marked, excess=args.excess,
                         bridgeless=not args.full)
    raise SystemExit(f"unknown family {fam}")


def add_slice_args(p, families):
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--n-parity", "--parity", dest="n_parity",
                   choices=("even", "odd"), required=True)
    p.add_argument("--m-parity", choices=("even", "odd"), default="even")
    p.add_argument("--loops", "-g", type=int, required=True)
    p.add_argument("--vertices", "-v", type=int, default=0)
    p.add_argument("--hairs", type=int, default=0)
    p.add_argument("--marked", "-m", type=int, default=0)
    p.add_argument("--excess", type=int, default=0)
    p.add_argument("--full", action="store_true",
                   help="forested: drop the bridgeless restriction")


ALL_FAMILIES = ("ordinary", "merkulov34", "merkulov56", "hairy", "chairy",
                "forested")


def cmd_basis(args):
    eng = make_engine(args)
    spec = slice_from_args(args)
    basis = eng.basis(spec)
    print(f"{spec.path()}: dimension {basis.dimension}")
    return 0


def cmd_matrix(args):
    eng = make_engine(args)
    spec = slice_from_args(args)
    h = eng.operator(args.op, spec)
    m = h.matrix
    print(f"d_{args.op} on {spec.path()}: {m.rows} x {m.cols}, {m.nnz} entries")
    return 0


def cmd_rank(args):
    eng = make_engine(args)
    spec = slice_from_args(args)
    r = eng.rank(args.op, spec)
    print(f"rank d_{args.op} on {spec.path()} = {r.rank} over {r.field}")
    return 0


def cmd_homology(args):
    eng = make_engine(args)
    spec = slice_from_args(args)
    if args.family == "forested":
        from .forested import forested_homology
        val, exact = forested_homology(eng, args.n_parity, args.loops,
                                       args.marked, args.hairs)
    else:
        from .engine import homology_three_term
        dim = eng.dim(spec)
        leaving = eng.rank("d", spec) if dim else T.ZERO_RANK
        up = spec.with_vertices(spec.vertices + 1)
        entering = eng.rank("d", up) if eng.dim(up) else T.ZERO_RANK
        val, exact = homology_three_term(dim, leaving, entering)
    marker = "" if exact else " (mod-p bound)"
    print(f"homology at {spec.path()}: {'-' if val is None else val}{marker}")
    return 0


def _prebuild_worker(payload):
    data_dir, prime, spec_kwargs = payload
    eng = register_all(Engine(Store(data_dir), prime=prime))
    try:
        eng.basis(SliceSpec(**spec_kwargs))
    except Exception as exc:  # report, don't kill the pool
        return f"{spec_kwargs}: {exc}"
    return None


def _prebuild(args, specs):
    if args.jobs <= 1:
        return
    payloads = [(args.data_dir or os.environ.get("GHX_DATA_DIR", "ghx-data"),
                 args.prime, spec.__dict__.copy()) for spec in specs]
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for err in pool.map(_prebuild_worker, payloads):
            if err:
                print("warning:", err, file=sys.stderr)


def _table_specs(args):
    """All slices a table command will need (for parallel prebuild)."""
    out = []
    if args.family == "ordinary":
        for g in range(3, args.max_loops + 1):
            for v in ordinary_vertex_range(g):
                out.append(SliceSpec("ordinary", args.n_parity, g, v))
    elif args.family == "hairy":
        for g in range(1, args.max_loops + 1):
            lo, hi = hairy_vanishing_range(g, args.hairs)
            for v in range(max(lo, 1), hi + 1):
                out.append(SliceSpec("hairy", args.n_parity, g, v,
                                     hairs=args.hairs,
                                     m_parity=args.m_parity))
    return out


def cmd_table(args):
    eng = make_engine(args)
    t0 = time.time()
    _prebuild(args, _table_specs(args))
    fam = args.family
    if fam == "ordinary":
        table = T.ordinary_table(eng, args.n_parity, args.max_loops)
        ref = T.load_reference(f"ordinary-{args.n_parity}")
    elif fam == "merkulov":
        table = T.merkulov_table(eng, args.n_parity, args.max_loops)
        ref = T.load_reference(f"merkulov-{args.n_parity}")
    elif fam == "hairy":
        table = T.hairy_table(eng, args.n_parity, args.m_parity, args.hairs,
                              args.max_loops)
        ref = T.load_reference(
            f"hairy-n{args.n_parity}-m{args.m_parity}")
    elif fam == "chairy":
        table = T.chairy_table(eng, args.n_parity, args.hairs,
                               args.max_loops, with_irreps=args.irreps)
        ref = T.load_reference(f"chairy-n{args.n_parity}")
    elif fam == "forested":
        table = T.forested_table(eng, args.n_parity, args.hairs,
                                 args.max_loops)
        ref = T.load_reference(f"forested-n{args.n_parity}")
    else:
        raise SystemExit(f"no table for family {fam}")
    print(table.render_text())
    print(f"# computed in {time.time() - t0:.1f}s; * marks mod-p bounds")
    if args.csv:
        with open(args.csv, "w") as f:
            f.write(table.render_csv())
        print(f"# csv written to {args.csv}")
    if args.compare:
        hairs_key = (f"h{args.hairs}"
                     if fam in ("hairy", "chairy", "forested") else None)
        mism = T.compare_with_reference(table, ref, hairs_key)
        print(f"# reference comparison: {len(mism)} mismatches")
        for m in mism:
            print("#   ", m)
        return 1 if mism else 0
    return 0


def cmd_shade(args):
    if args.family == "forested":
        cols = range(0, 2 * args.loops - 2 + args.hairs)
    elif args.family in ("hairy", "chairy"):
        cols = range(0, 2 * args.loops + args.hairs + 1)
    else:
        cols = range(3, 2 * args.loops + 1)
    mask = T.shading_mask(args.family, args.loops, args.hairs, list(cols))
    shaded = [c for c, s in sorted(mask.items()) if s]
    print(f"{args.family} g={args.loops}"
          + (f" h={args.hairs}" if args.hairs else "")
          + f": known-vanishing columns {shaded}")
    return 0


def cmd_check(args):
    from . import checks

    eng = make_engine(args)
    failures = checks.run_suite(eng, args.suite, max_loops=args.max_loops,
                                figure=args.figure, hairs=args.hairs,
                                verbose=True)
    print(f"check {args.suite}: {'PASS' if not failures else 'FAIL'}")
    for f in failures:
        print("  ", f)
    return 1 if failures else 0


def cmd_bench(args):
    from . import bench

    bench.run(trials=args.trials)
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="ghx",
        description="graph complex homology computations")
    ap.add_argument("--data-dir", default=None,
                    help="artifact store root (default GHX_DATA_DIR or ./ghx-data)")
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--over-q", action="store_true",
                    help="use exact rational ranks where feasible")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--force", action="store_true",
                    help="ignore the basis-size capacity guardrail")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("basis", help="build one slice basis")
    add_slice_args(p, ALL_FAMILIES)
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("matrix", help="build one operator matrix")
    add_slice_args(p, ALL_FAMILIES)
    p.add_argument("--op", default="d",
                   help="d, d_1, d_2, d_12, d_u, d_c, d_uc, hair_removal")
    p.set_defaults(fn=cmd_matrix)

    p = sub.add_parser("rank", help="rank of one operator")
    add_slice_args(p, ALL_FAMILIES)
    p.add_argument("--op", default="d")
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("homology", help="homology dimension of one slice")
    add_slice_args(p, ALL_FAMILIES)
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("table", help="compute a homology table")
    p.add_argument("--family", required=True,
                   choices=("ordinary", "merkulov", "hairy", "chairy",
                            "forested"))
    p.add_argument("--n-parity", "--parity", dest="n_parity",
                   choices=("even", "odd"), required=True)
    p.add_argument("--m-parity", choices=("even", "odd"), default="even")
    p.add_argument("--hairs", type=int, default=0)
    p.add_argument("--max-loops", type=int, required=True)
    p.add_argument("--irreps", action="store_true",
                   help="chairy: decompose entries into irreducibles")
    p.add_argument("--csv", default=None, help="write a CSV twin here")
    p.add_argument("--compare", action="store_true",
                   help="compare against the bundled reference table")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("shade", help="known-vanishing mask for one row")
    p.add_argument("--family", required=True,
                   choices=("ordinary", "merkulov", "hairy", "chairy",
                            "forested"))
    p.add_argument("--loops", "-g", type=int, required=True)
    p.add_argument("--hairs", type=int, default=0)
    p.set_defaults(fn=cmd_shade)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite",
                   choices=("d2", "anticommute", "isotypic", "euler",
                            "vanishing", "excess", "reference", "all"))
    p.add_argument("--max-loops", type=int, default=4)
    p.add_argument("--figure", default=None,
                   help="reference suite: figure id or alias (1-8)")
    p.add_argument("--hairs", type=int, default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bench", help="compare compiled and pure kernels")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_bench)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
