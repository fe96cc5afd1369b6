"""Symmetric group machinery: partitions, irreducible characters via the
Murnaghan-Nakayama recursion, the signed permutation action on colored-hairy
slices, and the isotypic projectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial

from .graphs import canonicalize
from .linalg import SparseIntMatrix, multiply_mod_p, rank_mod_p
from .orientation import map_object, reference_word, word_parity


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be weakly decreasing")

    @property
    def size(self):
        return sum(self.parts)

    def label(self):
        return "[" + ",".join(str(p) for p in self.parts) + "]"

    def dimension(self):
        """Dimension of the irreducible by the hook length formula."""
        parts = self.parts
        if not parts:
            return 1
        cols = [0] * parts[0]
        for p in parts:
            for j in range(p):
                cols[j] += 1
        num = factorial(self.size)
        for i, p in enumerate(parts):
            for j in range(p):
                num //= (p - j) + (cols[j] - i) - 1
        return num


def partitions(r):
    """All partitions of r, lexicographically sorted descending-first."""
    if r < 0:
        raise ValueError("r must be nonnegative")

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(cap, rest), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return [Partition(p) for p in rec(r, r)]


@lru_cache(maxsize=None)
def _mn(beta, rho):
    """Murnaghan-Nakayama on the abacus: beta is the strictly decreasing
    beta-set (first-column hook lengths) of the shape.  Removing a border
    strip of length k means replacing some b by b-k; the sign is the parity
    of the number of beads passed over."""
    if not rho:
        return 1
    k = rho[0]
    rest = rho[1:]
    total = 0
    bset = set(beta)
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        passed = sum(1 for c in beta if nb < c < b)
        new = tuple(sorted([x for x in beta if x != b] + [nb], reverse=True))
        total += (-1) ** passed * _mn(_normalize_beta(new), rest)
    return total


def _normalize_beta(beta):
    """Strip trailing beads 0,1,2,... that encode empty rows."""
    beta = list(beta)
    while beta and beta[-1] == 0:
        beta.pop()
        beta = [b - 1 for b in beta]
    return tuple(beta)


def _beta_set(parts):
    ell = len(parts)
    return tuple(parts[i] + (ell - 1 - i) for i in range(ell))


def character(lam, cycle_type):
    """chi_lambda(sigma) for sigma of the given cycle type, by the
    Murnaghan-Nakayama recursion."""
    if lam.size != cycle_type.size:
        raise ValueError("partition sizes differ")
    rho = tuple(sorted(cycle_type.parts, reverse=True))
    return _mn(_normalize_beta(_beta_set(tuple(lam.parts))), rho)


def cycle_type_of(perm_images):
    n = len(perm_images)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i]:
            continue
        j = i
        ln = 0
        while not seen[j]:
            seen[j] = True
            j = perm_images[j]
            ln += 1
        parts.append(ln)
    parts.sort(reverse=True)
    return Partition(tuple(parts))


def conjugacy_classes(r):
    """(cycle type, class size) pairs for S_r."""
    out = []
    for lam in partitions(r):
        counts = {}
        for p in lam.parts:
            counts[p] = counts.get(p, 0) + 1
        size = factorial(r)
        for p, c in counts.items():
            size //= (p ** c) * factorial(c)
        out.append((lam, size))
    return out


def permutation_action(engine, spec, sigma):
    """Signed matrix of the hair renumbering sigma on a colored-hairy slice.

    sigma is a tuple of images on {0..r-1}; hair color i+1 becomes
    sigma[i]+1.  Entry (i,j) = sign of the isomorphism identifying the
    renumbered basis graph j with basis graph i.
    """
    from .families import convention, hair_vertices

    basis = engine.basis(spec)
    conv = convention(spec)
    ents = []
    recolor = {i + 1: sigma[i] + 1 for i in range(spec.hairs)}
    for j, g in enumerate(basis.graphs):
        renumbered = type(g)(
            g.vertex_count,
            tuple(recolor.get(c, c) for c in g.colors),
            g.edges)
        canon, rel = canonicalize(renumbered)
        i = basis.index[canon.key()]
        vmap = rel.images
        src = reference_word(g, conv, internal=None, hairs=hair_vertices(g))
        tgt = reference_word(canon, conv, internal=None,
                             hairs=hair_vertices(canon))
        sign = word_parity([map_object(o, vmap) for o in src], tgt)
        ents.append((i, j, sign))
    return SparseIntMatrix.build(basis.dimension, basis.dimension, ents)


@dataclass
class ProjectorMatrix:
    lam: Partition
    spec: object
    matrix: SparseIntMatrix   # integer matrix; true projector = matrix/denominator
    denominator: int


def isotypic_projector(engine, lam, spec):
    """P_lambda = (dim/r!) sum_sigma chi(sigma) rho(sigma), scaled by r!.

    Returned integer matrix equals r! * P_lambda with denominator r!; the
    scaling leaves every rank unchanged as long as the working prime does
    not divide r!.
    """
    r = spec.hairs
    if lam.size != r:
        raise ValueError("partition size != hair count")
    dim = engine.dim(spec)
    acc = {}
    dlam = lam.dimension()
    for images in permutations(range(r)):
        chi = character(lam, cycle_type_of(images))
        if chi == 0:
            continue
        rho = permutation_action(engine, spec, images)
        for (i, j, v) in rho.entries:
            acc[(i, j)] = acc.get((i, j), 0) + dlam * chi * v
    matrix = SparseIntMatrix.from_dict(dim, dim, acc)
    return ProjectorMatrix(lam, spec, matrix, factorial(r))


def isotypic_homology(engine, lam, spec, prime=None):
    """Dimension of the lambda-isotypic homology of a colored-hairy slice:
    rank P - rank(d P) - rank(d' P') with P' the projector one slice up."""
    prime = prime or engine.prime
    if factorial(spec.hairs) % prime == 0:
        raise ValueError("prime divides r!, projector ranks unreliable")
    dim_v = engine.dim(spec)
    if dim_v == 0:
        return None
    p_v = isotypic_projector(engine, lam, spec)
    rk_p = rank_mod_p(p_v.matrix, prime).rank
    up = spec.with_vertices(spec.vertices + 1)
    down = spec.with_vertices(spec.vertices - 1)
    rk_dp = 0
    if engine.dim(down) > 0:
        d_v = engine.operator("d", spec).matrix
        rk_dp = rank_mod_p(multiply_mod_p(d_v, p_v.matrix, prime), prime).rank
    rk_dp_up = 0
    if engine.dim(up) > 0:
        p_up = isotypic_projector(engine, lam, up)
        d_up = engine.operator("d", up).matrix
        rk_dp_up = rank_mod_p(multiply_mod_p(d_up, p_up.matrix, prime),
                              prime).rank
    value = rk_p - rk_dp - rk_dp_up
    if value < 0:
        from .engine import NegativeHomologyError
        raise NegativeHomologyError(
            f"negative isotypic dimension {value} at {spec.path()} {lam.label()}")
    return value


def isotypic_decomposition(engine, spec, prime=None):
    """Irreducible multiplicities {partition label: count} of the homology.

    The isotypic dimension of each lambda must be a multiple of dim(lambda);
    anything else signals a rank bug.
    """
    out = {}
    for lam in partitions(spec.hairs):
        val = isotypic_homology(engine, lam, spec, prime=prime)
        if val:
            dl = lam.dimension()
            if val % dl:
                raise RuntimeError(
                    f"isotypic dimension {val} not a multiple of dim "
                    f"{lam.label()} = {dl} at {spec.path()}")
            out[lam.label()] = val // dl
    return out


def isotypic_total(decomposition, r):
    """Total homology dimension from a multiplicity decomposition."""
    table = {lam.label(): lam.dimension() for lam in partitions(r)}
    return sum(table[k] * m for k, m in decomposition.items())
