"""Verification suites behind `ghx check`: square-zero, anticommutativity,
isotypic completeness, Euler consistency, vanishing windows, excess
concentration, and reference-table comparison."""

from __future__ import annotations

from .engine import SliceSpec, square_zero_check
from .families import hairy_vanishing_range, ordinary_vertex_range
from .forested import forested_slice, slice_vertex_count
from .linalg import is_zero, multiply_mod_p
from . import tables as T


def check_d2(engine, max_loops=4):
    """d^2 = 0 for ordinary and hairy rows."""
    failures = []
    for parity in ("even", "odd"):
        for g in range(3, max_loops + 1):
            specs = [SliceSpec("ordinary", parity, g, v)
                     for v in ordinary_vertex_range(g)]
            rep = square_zero_check(engine, "d", specs)
            failures.extend(
                {"family": "ordinary", "parity": parity, "g": g, **f}
                for f in rep["failures"])
    for parity in ("even", "odd"):
        for m_parity in ("even", "odd"):
            for g in range(2, min(max_loops, 4) + 1):
                lo, hi = hairy_vanishing_range(g, 1)
                specs = [SliceSpec("hairy", parity, g, v, hairs=1,
                                   m_parity=m_parity)
                         for v in range(max(lo, 1), hi + 1)]
                rep = square_zero_check(engine, "d", specs)
                failures.extend(
                    {"family": "hairy", "parity": parity, "g": g, **f}
                    for f in rep["failures"])
    return failures


def check_anticommute(engine, max_loops=3):
    """d_u^2 = 0, d_c^2 = 0 and d_c d_u + d_u d_c = 0 on forested slices."""
    failures = []
    p = engine.prime
    for parity in ("even", "odd"):
        for g in range(2, max_loops + 1):
            vmax = 2 * g - 2
            for m in range(1, vmax):
                s00 = forested_slice(parity, g, m, 0, 0)
                if engine.dim(s00) == 0:
                    continue
                du = engine.operator("d_u", s00).matrix
                dc = engine.operator("d_c", s00).matrix
                s_low0 = forested_slice(parity, g, m - 1, 0, 0)
                s_low1 = forested_slice(parity, g, m - 1, 0, 1)
                if m >= 2 and engine.dim(s_low0):
                    uu = multiply_mod_p(
                        engine.operator("d_u", s_low0).matrix, du, p)
                    if not is_zero(uu):
                        failures.append({"identity": "d_u^2", "parity": parity,
                                         "g": g, "m": m})
                    cu = multiply_mod_p(
                        engine.operator("d_c", s_low0).matrix, du, p)
                    uc = multiply_mod_p(
                        engine.operator("d_u", s_low1).matrix, dc, p)
                    acc = {}
                    for r, c, v in cu.entries:
                        acc[(r, c)] = v
                    for r, c, v in uc.entries:
                        acc[(r, c)] = (acc.get((r, c), 0) + v) % p
                    if any(v % p for v in acc.values()):
                        failures.append({"identity": "d_c d_u + d_u d_c",
                                         "parity": parity, "g": g, "m": m})
                if m >= 2 and engine.dim(s_low1):
                    cc = multiply_mod_p(
                        engine.operator("d_c", s_low1).matrix, dc, p)
                    if not is_zero(cc):
                        failures.append({"identity": "d_c^2", "parity": parity,
                                         "g": g, "m": m})
    return failures


def check_isotypic(engine, max_loops=2, max_hairs=4):
    """Sum over lambda of isotypic dims equals the total homology dim."""
    from .symrep import isotypic_homology, partitions

    failures = []
    for parity in ("even", "odd"):
        for r in range(2, max_hairs + 1):
            for g in range(0, max_loops + 1):
                lo, hi = max(g + r - 2, 1), 2 * g + r - 2
                for v in range(lo, hi + 1):
                    spec = SliceSpec("chairy", parity, g, v, hairs=r)
                    dim = engine.dim(spec)
                    if dim == 0:
                        continue
                    leaving = engine.rank("d", spec)
                    up = spec.with_vertices(v + 1)
                    entering = (engine.rank("d", up) if engine.dim(up)
                                else T.ZERO_RANK)
                    total = dim - leaving.rank - entering.rank
                    parts = sum(
                        isotypic_homology(engine, lam, spec) or 0
                        for lam in partitions(r))
                    if parts != total:
                        failures.append({"parity": parity, "r": r, "g": g,
                                         "v": v, "total": total,
                                         "sum_isotypic": parts})
    return failures


def check_euler(engine, max_loops=5):
    """Alternating dim sum equals alternating homology sum per row."""
    failures = []
    for parity in ("even", "odd"):
        table = T.ordinary_table(engine, parity, max_loops)
        for g, row in table.rows.items():
            hom = sum(e.numeric() if e.value != "?" else 0
                      for v, e in row.items() if v % 2 == 0) - \
                sum(e.numeric() if e.value != "?" else 0
                    for v, e in row.items() if v % 2 == 1)
            if g in table.chi and hom != table.chi[g]:
                failures.append({"family": "ordinary", "parity": parity,
                                 "g": g, "chi_dims": table.chi[g],
                                 "chi_homology": hom})
            ref = T.load_reference(f"ordinary-{parity}")
            want = ref["table"].get("chi_ref", {}).get(str(g))
            if want not in (None, "?") and g in table.chi \
                    and table.chi[g] != want:
                failures.append({"family": "ordinary", "parity": parity,
                                 "g": g, "chi": table.chi[g],
                                 "chi_ref": want})
    return failures


def check_vanishing(engine, max_loops=4, hairs=1):
    """Hairy homology vanishes outside [g+h-2, 2g+h-2]."""
    failures = []
    for parity in ("even", "odd"):
        for m_parity in ("even", "odd"):
            for g in range(1, max_loops + 1):
                lo, hi = hairy_vanishing_range(g, hairs)
                for v in [lo - 1, hi + 1, hi + 2]:
                    if v < 1:
                        continue
                    spec = SliceSpec("hairy", parity, g, v, hairs=hairs,
                                     m_parity=m_parity)
                    dim = engine.dim(spec)
                    if dim == 0:
                        continue
                    leaving = engine.rank("d", spec)
                    up = spec.with_vertices(v + 1)
                    entering = (engine.rank("d", up) if engine.dim(up)
                                else T.ZERO_RANK)
                    val = dim - leaving.rank - entering.rank
                    if val != 0:
                        failures.append({"parity": parity,
                                         "m_parity": m_parity, "g": g,
                                         "v": v, "value": val})
    return failures


def check_excess(engine, max_loops=3, max_hairs=2):
    """Excess concentration: the d_c complex is exact in excess >= 1 on
    bridgeless slices: dim ker(d_c from excess e) = rank(d_c from e+1)."""
    failures = []
    for parity in ("even", "odd"):
        n01 = 0 if parity == "even" else 1
        for g in range(2, max_loops + 1):
            for r in range(0, max_hairs + 1):
                for e in range(1, 2 * g - 3 + r + 1):
                    for m in range(0, 2 * g - 2 + r):
                        spec = forested_slice(parity, g, m, r, e)
                        if slice_vertex_count(spec) is None:
                            continue
                        dim = engine.dim(spec)
                        if dim == 0:
                            continue
                        out_rank = 0
                        tgt = forested_slice(parity, g, m - 1, r, e + 1)
                        if m >= 1 and slice_vertex_count(tgt) is not None \
                                and engine.dim(tgt):
                            out_rank = engine.rank("d_c", spec).rank
                        src = forested_slice(parity, g, m + 1, r, e - 1)
                        in_rank = 0
                        if slice_vertex_count(src) is not None \
                                and engine.dim(src):
                            in_rank = engine.rank("d_c", src).rank
                        if dim - out_rank != in_rank:
                            failures.append({"parity": parity, "g": g,
                                             "r": r, "excess": e, "m": m,
                                             "ker": dim - out_rank,
                                             "rank_in": in_rank})
    return failures


def check_reference(engine, figure=None, max_loops=4, hairs=None):
    """Every computed cell overlapping a bundled figure matches exactly."""
    keys = []
    if figure is None:
        keys = ["ordinary-odd", "ordinary-even", "forested-neven",
                "forested-nodd"]
    elif figure in T.FIGURE_ALIASES:
        keys = list(T.FIGURE_ALIASES[figure])
    elif figure in T.REFERENCE_FILES:
        keys = [figure]
    else:
        raise ValueError(f"unknown figure {figure!r}")
    failures = []
    for key in keys:
        ref = T.load_reference(key)
        if key.startswith("ordinary"):
            parity = key.split("-")[1]
            table = T.ordinary_table(engine, parity, max_loops)
            failures += [{"figure": key, **m}
                         for m in T.compare_with_reference(table, ref)]
            failures += [{"figure": key, **m} for m in T.compare_chi(table, ref)]
        elif key.startswith("merkulov"):
            parity = key.split("-")[1]
            table = T.merkulov_table(engine, parity, max_loops)
            failures += [{"figure": key, **m}
                         for m in T.compare_with_reference(table, ref)]
        elif key.startswith("hairy"):
            nparity = "odd" if "nodd" in key else "even"
            mparity = "odd" if "modd" in key else "even"
            for h in ([hairs] if hairs else (1, 2)):
                table = T.hairy_table(engine, nparity, mparity, h, max_loops)
                failures += [{"figure": key, "hairs": h, **m}
                             for m in T.compare_with_reference(
                                 table, ref, f"h{h}")]
        elif key.startswith("chairy"):
            nparity = "odd" if "nodd" in key else "even"
            for h in ([hairs] if hairs else (2, 3, 4)):
                table = T.chairy_table(engine, nparity, h,
                                       min(max_loops, 2), with_irreps=True)
                failures += [{"figure": key, "hairs": h, **m}
                             for m in T.compare_with_reference(
                                 table, ref, f"h{h}")]
        elif key.startswith("forested"):
            nparity = "odd" if "nodd" in key else "even"
            for h in ([hairs] if hairs is not None else (0,)):
                table = T.forested_table(engine, nparity, h, max_loops)
                failures += [{"figure": key, "hairs": h, **m}
                             for m in T.compare_with_reference(
                                 table, ref, f"h{h}")]
    return failures


SUITES = {
    "d2": check_d2,
    "anticommute": check_anticommute,
    "isotypic": check_isotypic,
    "euler": check_euler,
    "vanishing": check_vanishing,
    "excess": check_excess,
    "reference": check_reference,
}


def run_suite(engine, suite, max_loops=4, figure=None, hairs=None,
              verbose=False):
    if suite == "all":
        failures = []
        for name, fn in SUITES.items():
            if verbose:
                print(f"... running {name}")
            if name == "reference":
                failures += fn(engine, figure=figure, max_loops=max_loops,
                               hairs=hairs)
            elif name in ("vanishing",):
                failures += fn(engine, max_loops=max_loops,
                               hairs=hairs or 1)
            elif name in ("anticommute", "excess"):
                failures += fn(engine, max_loops=min(max_loops, 3))
            elif name == "isotypic":
                failures += fn(engine, max_loops=min(max_loops, 2))
            else:
                failures += fn(engine, max_loops=max_loops)
        return failures
    fn = SUITES[suite]
    if suite == "reference":
        return fn(engine, figure=figure, max_loops=max_loops, hairs=hairs)
    if suite == "vanishing":
        return fn(engine, max_loops=max_loops, hairs=hairs or 1)
    return fn(engine, max_loops=max_loops)
