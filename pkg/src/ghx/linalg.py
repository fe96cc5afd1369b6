"""Exact sparse linear algebra over F_p and Q, plus the SMS text format.

Matrices follow the column convention of the engine: columns index the
domain basis, rows the target basis, so rank(matrix) = rank(operator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels

DEFAULT_PRIME = 32189

RATIONAL_CAP = 4_000_000  # rows*cols guardrail for fraction-free elimination


class CapacityError(RuntimeError):
    """Raised instead of risking a wrong answer when resource limits hit."""


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: tuple  # ((r, c, v), ...) sorted, v != 0, no duplicate positions

    @staticmethod
    def build(rows, cols, entries):
        seen = set()
        norm = []
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if (r, c) in seen:
                raise ValueError(f"duplicate position ({r},{c})")
            seen.add((r, c))
            if v != 0:
                norm.append((r, c, int(v)))
        norm.sort()
        return SparseIntMatrix(rows, cols, tuple(norm))

    @staticmethod
    def from_dict(rows, cols, data):
        return SparseIntMatrix.build(rows, cols,
                                     [(r, c, v) for (r, c), v in data.items()])

    @staticmethod
    def zero(rows, cols):
        return SparseIntMatrix(rows, cols, ())

    @property
    def nnz(self):
        return len(self.entries)

    def transpose(self):
        return SparseIntMatrix.build(self.cols, self.rows,
                                     [(c, r, v) for r, c, v in self.entries])

    def to_dense(self):
        m = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            m[r][c] = v
        return m

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            rows[r][c] = v
        return rows

    def stack(self, other):
        """Vertical stack [self; other]; column spaces must agree."""
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        ents = list(self.entries)
        ents.extend((r + self.rows, c, v) for r, c, v in other.entries)
        return SparseIntMatrix.build(self.rows + other.rows, self.cols, ents)


@dataclass(frozen=True)
class RankResult:
    rank: int
    field: str        # "F_32189" or "Q"
    exactness: str    # "exact" over the named field; F_p results are
                      # additionally a lower bound for the rank over Q

    @property
    def exact_over_q(self):
        return self.field == "Q"


def rank_mod_p(m, p=DEFAULT_PRIME):
    """Exact rank of m over F_p (deterministic sparse elimination).

    The value is also a lower bound for the rank over Q.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p >= 2 ** 31:
        raise ValueError("prime too large")
    r = kernels.modp_rank(m.rows, m.cols, m.entries, p)
    return RankResult(r, f"F_{p}", "exact")


def rank_rational(m):
    """Exact rank over Q by fraction-free (Bareiss) elimination.

    Intended for small matrices; raises CapacityError beyond the guardrail
    rather than risking wrong output.
    """
    if m.rows * m.cols > RATIONAL_CAP:
        raise CapacityError(
            f"rational rank limited to {RATIONAL_CAP} cells, "
            f"got {m.rows}x{m.cols}")
    from math import gcd

    rows = {}
    colrows = {}
    for r, c, v in m.entries:
        rows.setdefault(r, {})[c] = v
        colrows.setdefault(c, set()).add(r)
    rank = 0
    while rows:
        # smallest row, then smallest column: deterministic and keeps fill low
        pr = min(rows, key=lambda r: (len(rows[r]), r))
        prow = rows.pop(pr)
        pc = min(prow, key=lambda c: (len(colrows[c]), c))
        pv = prow[pc]
        for c in prow:
            colrows[c].discard(pr)
        rank += 1
        for r in list(colrows.get(pc, ())):
            row = rows[r]
            f = row.pop(pc)
            colrows[pc].discard(r)
            g = 0
            for c, v in prow.items():
                if c == pc:
                    continue
                nv = pv * row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        colrows.setdefault(c, set()).add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    colrows[c].discard(r)
            for c in list(row):
                if c not in prow:
                    row[c] = pv * row[c]
            for v in row.values():
                g = gcd(g, v)
            if g > 1:
                for c in row:
                    row[c] //= g
            if not row:
                del rows[r]
    return RankResult(rank, "Q", "exact")


def multiply_mod_p(a, b, p=DEFAULT_PRIME):
    """Exact sparse product a.b with entries reduced into [0, p)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch {a.rows}x{a.cols} . {b.rows}x{b.cols}")
    brows = b.row_dicts()
    out = {}
    arows = a.row_dicts()
    for r, arow in enumerate(arows):
        acc = {}
        for k, av in arow.items():
            for c, bv in brows[k].items():
                acc[c] = (acc.get(c, 0) + av * bv) % p
        for c, v in acc.items():
            if v % p:
                out[(r, c)] = v % p
    return SparseIntMatrix.from_dict(a.rows, b.cols, out)


def multiply_rational(a, b):
    """Exact integer sparse product (no reduction)."""
    if a.cols != b.rows:
        raise ValueError("dimension mismatch")
    brows = b.row_dicts()
    out = {}
    for r, arow in enumerate(a.row_dicts()):
        acc = {}
        for k, av in arow.items():
            for c, bv in brows[k].items():
                acc[c] = acc.get(c, 0) + av * bv
        for c, v in acc.items():
            if v:
                out[(r, c)] = v
    return SparseIntMatrix.from_dict(a.rows, b.cols, out)


def is_zero(m):
    return not m.entries


# -- mod-p echelon utilities (nullspace, membership) -------------------------

def _echelon_mod_p(dense_rows, p):
    """Row-reduce in place; returns list of pivot column indices."""
    pivots = []
    r = 0
    ncols = len(dense_rows[0]) if dense_rows else 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(dense_rows)):
            if dense_rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        dense_rows[r], dense_rows[piv] = dense_rows[piv], dense_rows[r]
        inv = pow(dense_rows[r][c] % p, p - 2, p)
        dense_rows[r] = [(x * inv) % p for x in dense_rows[r]]
        for i in range(len(dense_rows)):
            if i != r and dense_rows[i][c] % p:
                f = dense_rows[i][c] % p
                dense_rows[i] = [(x - f * y) % p
                                 for x, y in zip(dense_rows[i], dense_rows[r])]
        pivots.append(c)
        r += 1
        if r == len(dense_rows):
            break
    return pivots


def nullspace_mod_p(m, p=DEFAULT_PRIME):
    """Basis of ker(m) over F_p as a SparseIntMatrix whose columns span it."""
    dense = m.to_dense()
    if not dense:
        dense = []
    pivots = _echelon_mod_p(dense, p)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    cols = []
    for fc in free:
        vec = [0] * m.cols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-dense[r][fc]) % p
        cols.append(vec)
    ents = []
    for j, vec in enumerate(cols):
        for i, v in enumerate(vec):
            if v % p:
                ents.append((i, j, v % p))
    return SparseIntMatrix.build(m.cols, len(cols), ents)


def in_column_span_mod_p(m, vec, p=DEFAULT_PRIME):
    """Whether vec (dict row->value) lies in the column span of m over F_p."""
    ra = rank_mod_p(m, p).rank
    ents = list(m.entries)
    for r, v in vec.items():
        if v % p:
            ents.append((r, m.cols, v % p))
    aug = SparseIntMatrix.build(m.rows, m.cols + 1, ents)
    return rank_mod_p(aug, p).rank == ra


# -- SMS text format ----------------------------------------------------------

def sms_write(m):
    """SMS text: header `rows cols M`, 1-indexed triples, `0 0 0` end."""
    lines = [f"{m.rows} {m.cols} M"]
    for r, c, v in m.entries:
        lines.append(f"{r + 1} {c + 1} {v}")
    lines.append("0 0 0")
    return "\n".join(lines) + "\n"


def sms_read(text):
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty SMS input")
    head = lines[0].split()
    if len(head) != 3 or head[2] != "M":
        raise ValueError(f"malformed SMS header: {lines[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    if lines[-1].split() != ["0", "0", "0"]:
        raise ValueError("missing SMS terminator")
    ents = []
    for ln in lines[1:-1]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"malformed SMS entry: {ln!r}")
        r, c, v = int(parts[0]), int(parts[1]), int(parts[2])
        if not (1 <= r <= rows and 1 <= c <= cols):
            raise ValueError(f"SMS entry out of range: {ln!r}")
        ents.append((r - 1, c - 1, v))
    return SparseIntMatrix.build(rows, cols, ents)


def rank_exact_dense_oracle(m):
    """Independent rank oracle: Gaussian elimination over Fraction (tests)."""
    dense = [[Fraction(x) for x in row] for row in m.to_dense()]
    rank = 0
    for c in range(m.cols):
        piv = None
        for r in range(rank, m.rows):
            if dense[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        dense[rank], dense[piv] = dense[piv], dense[rank]
        pr = dense[rank]
        for r in range(m.rows):
            if r != rank and dense[r][c] != 0:
                f = dense[r][c] / pr[c]
                dense[r] = [x - f * y for x, y in zip(dense[r], pr)]
        rank += 1
    return rank
