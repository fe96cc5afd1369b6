"""Homology tables: assembly, certification, rendering, known-vanishing
shading, and comparison against the bundled reference data."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources

from .engine import (
    STATUS_EMPTY,
    STATUS_EXACT,
    STATUS_MODP,
    HomologyEntry,
    SliceSpec,
    certify,
    homology_three_term,
)
from .families import hairy_vanishing_range, ordinary_vertex_range
from .forested import dc_rank_by_euler, forested_slice
from .linalg import CapacityError, RankResult

ZERO_RANK = RankResult(0, "Q", "exact")

REFERENCE_FILES = {
    "ordinary-odd": "ordinary_nodd.json",
    "ordinary-even": "ordinary_neven.json",
    "merkulov-odd": "merkulov_nodd.json",
    "merkulov-even": "merkulov_neven.json",
    "hairy-nodd-meven": "hairy_nodd_meven.json",
    "hairy-nodd-modd": "hairy_nodd_modd.json",
    "hairy-neven-meven": "hairy_neven_meven.json",
    "hairy-neven-modd": "hairy_neven_modd.json",
    "chairy-neven": "chairy_neven.json",
    "chairy-nodd": "chairy_nodd.json",
    "forested-nodd": "forested_nodd.json",
    "forested-neven": "forested_neven.json",
}

# numeric aliases for `check reference --figure N`
FIGURE_ALIASES = {
    "1": ("ordinary-odd", "ordinary-even"),
    "2": ("merkulov-odd", "merkulov-even"),
    "3": ("hairy-nodd-meven",),
    "4": ("hairy-nodd-modd",),
    "5": ("chairy-neven",),
    "6": ("chairy-nodd",),
    "7": ("forested-nodd",),
    "8": ("forested-neven",),
}


def load_reference(key):
    name = REFERENCE_FILES[key]
    text = resources.files("ghx.refdata").joinpath(name).read_text()
    return json.loads(text)


@dataclass
class HomologyTable:
    family: str
    params: dict
    row_label: str
    col_label: str
    rows: dict = field(default_factory=dict)   # l -> {v -> HomologyEntry}
    shaded: dict = field(default_factory=dict)  # l -> set of shaded columns
    chi: dict = field(default_factory=dict)
    chi_ref: dict = field(default_factory=dict)
    irreps: dict = field(default_factory=dict)  # (l, v) -> {label: mult}

    def cell(self, l, v):
        return self.rows.get(l, {}).get(v)

    def columns(self):
        cols = set()
        for row in self.rows.values():
            cols.update(row)
        return sorted(cols)

    def render_text(self):
        cols = self.columns()
        header = [f"{self.row_label}\\{self.col_label}"] + [
            str(c) for c in cols]
        if self.chi:
            header.append("chi")
        if self.chi_ref:
            header.append("chi_ref")
        lines = [header]
        for l in sorted(self.rows):
            out = [str(l)]
            for c in cols:
                e = self.rows[l].get(c)
                txt = e.render() if e else ""
                if (l, c) in self.irreps and self.irreps[(l, c)]:
                    parts = "+".join(
                        (f"{m}s_{lab}" if m > 1 else f"s_{lab}")
                        for lab, m in sorted(self.irreps[(l, c)].items()))
                    txt += f" ({parts})"
                out.append(txt)
            if self.chi:
                out.append(str(self.chi.get(l, "")))
            if self.chi_ref:
                out.append(str(self.chi_ref.get(l, "")))
            lines.append(out)
        widths = [max(len(r[i]) for r in lines if i < len(r))
                  for i in range(max(len(r) for r in lines))]
        return "\n".join(
            "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()
            for r in lines)

    def render_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        cols = self.columns()
        w.writerow([self.row_label] + [str(c) for c in cols]
                   + (["chi"] if self.chi else []))
        for l in sorted(self.rows):
            row = [l]
            for c in cols:
                e = self.rows[l].get(c)
                row.append("" if e is None else e.render())
            if self.chi:
                row.append(self.chi.get(l, ""))
            w.writerow(row)
        return buf.getvalue()


def _entry(dim, rank_leaving, rank_entering):
    value, exact = homology_three_term(dim, rank_leaving, rank_entering)
    if value is None:
        return HomologyEntry("-", STATUS_EMPTY)
    return HomologyEntry(value, STATUS_EXACT if exact else STATUS_MODP)


def _three_term_row(engine, specs_by_col, squeeze=True):
    """Build one table row for a plain contraction family."""
    dims = {}
    ranks = {}
    skipped = set()
    for c, spec in specs_by_col.items():
        try:
            dims[c] = engine.dim(spec)
            ranks[c] = engine.rank("d", spec) if dims[c] else ZERO_RANK
        except CapacityError:
            skipped.add(c)
    cols = sorted(specs_by_col)
    entries = {}
    ordered = []
    for c in cols:
        if c in skipped or (c + 1 in specs_by_col and c + 1 in skipped):
            entries[c] = HomologyEntry("?", STATUS_MODP)
            ordered.append(entries[c])
            continue
        e = _entry(dims[c], ranks[c], ranks.get(c + 1, ZERO_RANK))
        entries[c] = e
        ordered.append(e)
    certify(ordered, squeeze=squeeze)
    chi = 0
    complete = not skipped
    for c in cols:
        if c in dims:
            chi += dims[c] if c % 2 == 0 else -dims[c]
    return entries, (chi if complete else None)


def ordinary_table(engine, parity, max_loops, min_loops=3):
    t = HomologyTable("ordinary", {"n_parity": parity}, "l", "v")
    for g in range(min_loops, max_loops + 1):
        vr = list(ordinary_vertex_range(g))
        specs = {v: SliceSpec("ordinary", parity, g, v) for v in vr}
        entries, chi = _three_term_row(engine, specs)
        t.rows[g] = entries
        if chi is not None:
            t.chi[g] = chi
        t.shaded[g] = set()
    return t


def merkulov_table(engine, parity, max_loops, min_loops=3):
    """Merkulov rows via D = dim V34 - rank d12(v) - rank d12(v+1)
    + rank d2(v+1); never certified by the squeeze (plus-term)."""
    t = HomologyTable("merkulov", {"n_parity": parity}, "l", "v")
    for g in range(min_loops, max_loops + 1):
        vr = [v for v in range(3, 2 * g - 1)]
        dims, r12, r2 = {}, {}, {}
        for v in vr + [2 * g - 1]:
            spec = SliceSpec("merkulov34", parity, g, v)
            dims[v] = engine.dim(spec)
            if dims[v]:
                r12[v] = engine.rank("d_12", spec)
                r2[v] = engine.rank("d_2", spec)
            else:
                r12[v] = r2[v] = ZERO_RANK
        row = {}
        for v in vr:
            if dims[v] == 0:
                row[v] = HomologyEntry("-", STATUS_EMPTY)
                continue
            value = (dims[v] - r12[v].rank - r12.get(v + 1, ZERO_RANK).rank
                     + r2.get(v + 1, ZERO_RANK).rank)
            if value < 0:
                from .engine import NegativeHomologyError
                raise NegativeHomologyError(
                    f"negative Merkulov dimension at g={g} v={v}")
            exact = all(r.exact_over_q for r in
                        (r12[v], r12.get(v + 1, ZERO_RANK),
                         r2.get(v + 1, ZERO_RANK)))
            row[v] = HomologyEntry(value,
                                   STATUS_EXACT if exact else STATUS_MODP)
        t.rows[g] = row
    return t


def hairy_table(engine, n_parity, m_parity, hairs, max_loops, min_loops=1):
    t = HomologyTable("hairy", {"n_parity": n_parity, "m_parity": m_parity,
                                "hairs": hairs}, "l", "v")
    for g in range(min_loops, max_loops + 1):
        lo, hi = hairy_vanishing_range(g, hairs)
        lo = max(lo, 1)
        specs = {v: SliceSpec("hairy", n_parity, g, v, hairs=hairs,
                              m_parity=m_parity) for v in range(lo, hi + 1)}
        entries, chi = _three_term_row(engine, specs)
        t.rows[g] = entries
        if chi is not None:
            t.chi[g] = chi
        t.shaded[g] = set()
    return t


def chairy_table(engine, parity, hairs, max_loops, min_loops=0,
                 with_irreps=False):
    from .symrep import isotypic_decomposition

    t = HomologyTable("chairy", {"n_parity": parity, "hairs": hairs},
                      "l", "v")
    for g in range(min_loops, max_loops + 1):
        lo, hi = (max(g + hairs - 2, 1), 2 * g + hairs - 2)
        specs = {v: SliceSpec("chairy", parity, g, v, hairs=hairs)
                 for v in range(lo, hi + 1)}
        entries, chi = _three_term_row(engine, specs)
        t.rows[g] = entries
        if chi is not None:
            t.chi[g] = chi
        if with_irreps:
            for v, e in entries.items():
                if e.value not in ("-", "?", 0):
                    t.irreps[(g, v)] = isotypic_decomposition(
                        engine, specs[v])
    return t


def forested_table(engine, n_parity, hairs, max_loops, min_loops=1):
    """Forested rows: D = dim - rank d_uc(m) - rank d_uc(m+1)
    + exact d_c rank from the excess Euler sum."""
    t = HomologyTable("forested", {"n_parity": n_parity, "hairs": hairs},
                      "l", "m")
    for g in range(min_loops, max_loops + 1):
        vmax = 2 * g - 2 + hairs
        row = {}
        dims, ruc = {}, {}
        for m in range(0, vmax + 1):
            spec = forested_slice(n_parity, g, m, hairs)
            dims[m] = engine.dim(spec)
            ruc[m] = (engine.rank("d_uc", spec)
                      if dims[m] and m >= 1 else ZERO_RANK)
        ordered = []
        for m in range(0, vmax):
            if dims[m] == 0:
                e = HomologyEntry("-", STATUS_EMPTY)
            else:
                dc_exact = 0
                if dims.get(m + 1):
                    dc_exact = dc_rank_by_euler(engine, n_parity, g, m + 1,
                                                hairs)
                value = (dims[m] - ruc[m].rank
                         - ruc.get(m + 1, ZERO_RANK).rank + dc_exact)
                if value < 0:
                    from .engine import NegativeHomologyError
                    raise NegativeHomologyError(
                        f"negative forested dimension at g={g} m={m}")
                exact = (ruc[m].exact_over_q
                         and ruc.get(m + 1, ZERO_RANK).exact_over_q)
                e = HomologyEntry(value,
                                  STATUS_EXACT if exact else STATUS_MODP)
            row[m] = e
            ordered.append(e)
        certify(ordered, squeeze=True)
        t.rows[g] = row
    return t


# -- known-vanishing shading ---------------------------------------------------

def shade_ordinary(g):
    """Columns v where the ordinary homology is known zero or empty."""
    feasible = set(ordinary_vertex_range(g))
    return {"trivalence_max": 2 * g - 2, "outside": lambda v: v not in feasible}


def shade_hairy(g, h):
    lo, hi = hairy_vanishing_range(g, h)
    return {"window": (lo, hi), "outside": lambda v: not lo <= v <= hi}


def shade_forested_out(g, m):
    """Out(F_g) stability shading for 0-hair tables: degree m homology
    vanishes when 5m < 4g - 5."""
    return 5 * m < 4 * g - 5


def shading_mask(family, g, hairs=0, cols=()):
    if family == "ordinary" or family == "merkulov":
        rule = shade_ordinary(g)["outside"]
    elif family in ("hairy", "chairy"):
        rule = shade_hairy(g, hairs)["outside"]
    elif family == "forested":
        return {m: shade_forested_out(g, m) for m in cols}
    else:
        raise ValueError(f"no shading rule for {family}")
    return {v: rule(v) for v in cols}


# -- reference comparison ------------------------------------------------------

def compare_with_reference(table, ref_table_json, hairs_key=None):
    """Cell-for-cell value comparison on the overlap.

    '-' and 0 compare equal (the reference data uses the two markers
    interchangeably at corner cells); '?' cells are skipped on either side.
    Returns a list of mismatch records.
    """
    if "tables" in ref_table_json:
        ref = ref_table_json["tables"][hairs_key]
    else:
        ref = ref_table_json["table"]
    mism = []
    for l, row in table.rows.items():
        ref_row = ref["rows"].get(str(l))
        if ref_row is None:
            continue
        for v, entry in row.items():
            cell = ref_row.get(str(v))
            if cell is None or cell["value"] == "?" or entry.value == "?":
                continue
            refval = 0 if cell["value"] == "-" else cell["value"]
            if entry.numeric() != refval:
                mism.append({"row": l, "col": v, "computed": entry.numeric(),
                             "reference": refval})
            want_irr = cell.get("irreps")
            got_irr = table.irreps.get((l, v))
            if want_irr and got_irr is not None and got_irr != want_irr:
                mism.append({"row": l, "col": v, "computed": got_irr,
                             "reference": want_irr, "kind": "irreps"})
    return mism


def compare_chi(table, ref_table_json):
    ref = ref_table_json["table"]
    mism = []
    for l, chi in table.chi.items():
        want = ref.get("chi_ref", {}).get(str(l))
        if want in (None, "?"):
            continue
        if chi != want:
            mism.append({"row": l, "computed_chi": chi, "reference": want})
    return mism


def merkulov_homology(engine, n_parity, g, v):
    """One Merkulov cell by the rank-corrected formula."""
    table = merkulov_table(engine, n_parity, max_loops=g, min_loops=g)
    entry = table.cell(g, v)
    if entry is None:
        return HomologyEntry("-", STATUS_EMPTY)
    return entry
