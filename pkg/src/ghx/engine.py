"""The graded-vector-space framework: slice specs, persisted bases and
operator matrices, the three-term homology formula, and certification.

On-disk layout (root = --data-dir or GHX_DATA_DIR or ./ghx-data):
    <root>/<family path>/basis.g6          one canonical graph per line
    <root>/<family path>/d_<op>.sms        operator matrix, SMS format
each with a .sha256 sidecar; writes are atomic (temp file + rename) so
concurrent builders never observe partial artifacts.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field, replace

from .graphs import read_line, write_line
from .linalg import (
    DEFAULT_PRIME,
    CapacityError,
    RankResult,
    SparseIntMatrix,
    is_zero,
    multiply_mod_p,
    rank_mod_p,
    rank_rational,
    sms_read,
    sms_write,
)

FAMILIES = ("ordinary", "merkulov34", "merkulov56", "hairy", "chairy",
            "forested")

BASIS_CAP = 5_000_000  # refuse larger slices without force


class StoreCorrupt(RuntimeError):
    """A cached artifact does not match its checksum sidecar."""


class NegativeHomologyError(RuntimeError):
    """dim - rank - rank came out negative: a rank bug, never clamped."""


@dataclass(frozen=True)
class SliceSpec:
    """One finite-dimensional graded piece of one complex family."""

    family: str
    n_parity: str            # "even" | "odd"
    loops: int
    vertices: int = 0        # internal vertices (not used by forested)
    hairs: int = 0
    m_parity: str = ""       # hairy only
    marked: int = 0          # forested only
    excess: int = 0          # forested only
    bridgeless: bool = False  # forested only

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n_parity not in ("even", "odd"):
            raise ValueError("n_parity must be 'even' or 'odd'")
        if self.family == "hairy":
            if self.m_parity not in ("even", "odd"):
                raise ValueError("hairy slices need m_parity")
            if self.hairs < 1:
                raise ValueError("hairy slices need hairs >= 1")
        if self.family == "chairy" and self.hairs < 1:
            raise ValueError("chairy slices need hairs >= 1")
        if self.family not in ("hairy", "chairy", "forested") and self.hairs:
            raise ValueError(f"{self.family} has no hairs")
        if self.family != "forested" and (self.marked or self.excess
                                          or self.bridgeless):
            raise ValueError(f"{self.family} has no forested parameters")

    def path(self):
        parts = [self.family, f"n{self.n_parity}"]
        if self.family == "hairy":
            parts.append(f"m{self.m_parity}")
        if self.hairs or self.family in ("hairy", "chairy", "forested"):
            parts.append(f"h{self.hairs}")
        parts.append(f"g{self.loops}")
        if self.family == "forested":
            parts.append(f"e{self.excess}")
            parts.append(f"m{self.marked}")
            parts.append("bl" if self.bridgeless else "full")
        else:
            parts.append(f"v{self.vertices}")
        return os.path.join(*parts)

    def with_vertices(self, v):
        return replace(self, vertices=v)


@dataclass
class Basis:
    spec: SliceSpec
    graphs: list                    # canonical ColoredGraph, sorted by line
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {g.key(): i for i, g in enumerate(self.graphs)}

    @property
    def dimension(self):
        return len(self.graphs)


@dataclass
class OperatorHandle:
    name: str
    domain: SliceSpec
    targets: list           # list of SliceSpec, stacked in row-block order
    matrix: SparseIntMatrix


class Store:
    """Content-addressed directory of bases and matrices, resumable."""

    def __init__(self, root=None):
        if root is None:
            root = os.environ.get("GHX_DATA_DIR", "ghx-data")
        self.root = root

    def _paths(self, spec, filename):
        d = os.path.join(self.root, spec.path())
        return d, os.path.join(d, filename)

    @staticmethod
    def _sha(text):
        return hashlib.sha256(text.encode()).hexdigest()

    def _write(self, directory, path, text):
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as f:
            f.write(self._sha(text))
        os.replace(tmp, path + ".sha256")

    def _read(self, path):
        if not os.path.exists(path):
            return None
        with open(path) as f:
            text = f.read()
        sidecar = path + ".sha256"
        if os.path.exists(sidecar):
            with open(sidecar) as f:
                want = f.read().strip()
            if want != self._sha(text):
                raise StoreCorrupt(f"checksum mismatch for {path}")
        return text

    def load_basis(self, spec):
        _, path = self._paths(spec, "basis.g6")
        text = self._read(path)
        if text is None:
            return None
        graphs = [read_line(ln) for ln in text.splitlines() if ln.strip()]
        return Basis(spec, graphs)

    def save_basis(self, spec, graphs):
        d, path = self._paths(spec, "basis.g6")
        self._write(d, path, "".join(write_line(g) + "\n" for g in graphs))

    def load_matrix(self, spec, op_name):
        _, path = self._paths(spec, f"d_{op_name}.sms")
        text = self._read(path)
        if text is None:
            return None
        return sms_read(text)

    def save_matrix(self, spec, op_name, matrix):
        d, path = self._paths(spec, f"d_{op_name}.sms")
        self._write(d, path, sms_write(matrix))


class Engine:
    """Builds bases and operators on demand through a family registry."""

    def __init__(self, store=None, prime=DEFAULT_PRIME, over_q=False,
                 force=False):
        self.store = store or Store()
        self.prime = prime
        self.over_q = over_q
        self.force = force
        self._families = {}
        self._basis_cache = {}
        self._rank_cache = {}

    def register(self, family):
        self._families[family.name] = family

    def family(self, name):
        if name not in self._families:
            raise ValueError(f"family {name!r} not registered")
        return self._families[name]

    # -- bases ---------------------------------------------------------------

    def basis(self, spec):
        """Generate (or reload) the slice basis: one canonical graph per
        isomorphism class of admissible graphs, zero graphs dropped, sorted."""
        ck = spec.path()
        if ck in self._basis_cache:
            return self._basis_cache[ck]
        loaded = self.store.load_basis(spec)
        if loaded is None:
            fam = self.family(spec.family)
            graphs = fam.generate(self, spec)
            graphs = sorted(graphs, key=write_line)
            if len(graphs) > BASIS_CAP and not self.force:
                raise CapacityError(
                    f"slice {spec.path()} has {len(graphs)} basis elements; "
                    "pass force to proceed")
            self.store.save_basis(spec, graphs)
            loaded = Basis(spec, graphs)
        self._basis_cache[ck] = loaded
        return loaded

    def dim(self, spec):
        return self.basis(spec).dimension

    # -- operators -------------------------------------------------------------

    def operator(self, op_name, spec):
        """Matrix of op_name on the slice: columns index the domain basis,
        rows the concatenated target bases."""
        fam = self.family(spec.family)
        targets = fam.op_targets(op_name, spec)
        cached = self.store.load_matrix(spec, op_name)
        domain = self.basis(spec)
        tbases = [self.basis(t) for t in targets]
        nrows = sum(b.dimension for b in tbases)
        if cached is not None:
            if cached.rows != nrows or cached.cols != domain.dimension:
                raise StoreCorrupt(
                    f"cached {op_name} on {spec.path()} has wrong shape")
            return OperatorHandle(op_name, spec, targets, cached)
        offsets = []
        off = 0
        for b in tbases:
            offsets.append(off)
            off += b.dimension
        entries = {}
        for col, graph in enumerate(domain.graphs):
            for slot, tgraph, coeff in fam.op_terms(self, op_name, spec, graph):
                if coeff == 0:
                    continue
                tb = tbases[slot]
                row = tb.index.get(tgraph.key())
                if row is None:
                    raise RuntimeError(
                        f"{op_name} on {spec.path()}: image graph not in "
                        f"target basis {targets[slot].path()}")
                pos = (offsets[slot] + row, col)
                entries[pos] = entries.get(pos, 0) + coeff
        matrix = SparseIntMatrix.from_dict(nrows, domain.dimension, entries)
        self.store.save_matrix(spec, op_name, matrix)
        return OperatorHandle(op_name, spec, targets, matrix)

    # -- ranks -----------------------------------------------------------------

    def rank(self, op_name, spec, over_q=None):
        """Rank of the operator; empty domain or target gives 0."""
        if over_q is None:
            over_q = self.over_q
        ck = (op_name, spec.path(), "Q" if over_q else self.prime)
        if ck in self._rank_cache:
            return self._rank_cache[ck]
        handle = self.operator(op_name, spec)
        m = handle.matrix
        if m.rows == 0 or m.cols == 0:
            res = RankResult(0, "Q", "exact")
        elif over_q:
            res = rank_rational(m)
        else:
            res = rank_mod_p(m, self.prime)
        self._rank_cache[ck] = res
        return res


def homology_three_term(dim_v, rank_leaving, rank_entering):
    """dim V - rank(d out of the slice) - rank(d into the slice).

    Returns (value, exact_over_q); negative values are a hard error.
    """
    if dim_v == 0:
        return None, True
    value = dim_v - rank_leaving.rank - rank_entering.rank
    if value < 0:
        raise NegativeHomologyError(
            f"negative homology dimension {value}: rank bug or mod-p loss")
    exact = rank_leaving.exact_over_q and rank_entering.exact_over_q
    return value, exact


STATUS_EMPTY = "empty"
STATUS_EXACT = "certified-exact-Q"
STATUS_MODP = "mod-p-bound"
STATUS_UNKNOWN = "unknown"


@dataclass
class HomologyEntry:
    value: object            # int, or "-" (empty slice), or "?" (skipped)
    status: str

    def render(self):
        if self.value in ("-", "?"):
            return str(self.value)
        mark = "" if self.status == STATUS_EXACT else "*"
        return f"{self.value}{mark}"

    def numeric(self):
        """Value with '-' coerced to 0 (empty slice has zero homology)."""
        return 0 if self.value == "-" else self.value


def certify(entries, squeeze=True):
    """Upgrade mod-p statuses along one table row.

    entries: ordered list of HomologyEntry for consecutive slices. A mod-p
    entry of value 0 is exact by the lower-bound squeeze; a nonzero entry is
    exact when both horizontal neighbors are certified zero or empty.
    Families whose rank formula has a plus term (Merkulov) pass
    squeeze=False and keep their mod-p statuses.
    """
    if not squeeze:
        return entries
    for e in entries:
        if e.status == STATUS_MODP and e.value == 0:
            e.status = STATUS_EXACT

    def certified_zero(e):
        return e.value == "-" or (e.value == 0 and e.status == STATUS_EXACT)

    for i, e in enumerate(entries):
        if e.status != STATUS_MODP or e.value in ("-", "?"):
            continue
        left_ok = i == 0 or certified_zero(entries[i - 1])
        right_ok = i == len(entries) - 1 or certified_zero(entries[i + 1])
        if left_ok and right_ok:
            e.status = STATUS_EXACT
    return entries


def euler_characteristic(dims_by_degree):
    """Alternating sum over a fully known row: sum (-1)^k dim_k."""
    chi = 0
    for k, d in dims_by_degree.items():
        chi += d if k % 2 == 0 else -d
    return chi


def square_zero_check(engine, op_name, specs, over_q_limit=500):
    """Verify d . d = 0 over consecutive slices.

    specs: list ordered so that op on specs[i+1] lands in specs[i]. Returns a
    report dict; any failure carries a witness column.
    """
    failures = []
    checked = 0
    for low, high in zip(specs, specs[1:]):
        a = engine.operator(op_name, low)
        b = engine.operator(op_name, high)
        if a.matrix.cols == 0 or b.matrix.cols == 0:
            continue
        prod = multiply_mod_p(a.matrix, b.matrix, engine.prime)
        checked += 1
        if not is_zero(prod):
            col = min(c for _, c, _ in prod.entries)
            failures.append({"domain": high.path(), "witness_column": col})
            continue
        if engine.over_q or (b.matrix.cols <= over_q_limit
                             and a.matrix.rows <= over_q_limit):
            from .linalg import multiply_rational
            if not is_zero(multiply_rational(a.matrix, b.matrix)):
                failures.append({"domain": high.path(),
                                 "witness_column": "rational"})
    return {"op": op_name, "pairs_checked": checked, "failures": failures}
