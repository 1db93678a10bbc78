"""Signatures, weights, boundary partitions and stable dual trees in genus 0.

All arithmetic is exact: weights are `fractions.Fraction`, multiplicities are
Python integers.  The basic input everywhere is a *signature* ``(d, kappa)``
with ``d >= 2``, ``k_i >= 1 - d`` and ``sum(kappa) == -2*d``; the derived
weight of the i-th marked point is ``mu_i = -k_i / d``, so ``mu_i < 1`` and
``sum(mu) == 2`` hold automatically.

Markings are 1-based (``1..n``); vertices of a dual tree are 0-based list
indices.  A two-block partition ``{I0, I1}`` is always numbered so that
``mu(I0) <= 1 <= mu(I1)``; when both sides have weight exactly 1 the block
containing marking 1 is called ``I0`` (the choice only affects bookkeeping,
never a computed invariant).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "StrataError",
    "BadD",
    "TooFewMarks",
    "EntryTooSmall",
    "SumMismatch",
    "NumberingViolation",
    "NoSuchEdge",
    "NotInPHat",
    "TwoBlockHasNoOrders",
    "Signature",
    "WeightVector",
    "TwoBlockPartition",
    "MultiBlockPartition",
    "StableTree",
    "ExponentVector",
    "WeilDivisorData",
    "validate_signature",
    "bundle_rank",
    "enumerate_two_block",
    "boundary_weight",
    "enumerate_stable_trees",
    "node_weights",
    "edge_weight",
    "principal_subcurves",
    "exponent_vector",
    "ideal_generators",
    "in_ideal_support",
    "fiber_projective_dim",
    "enumerate_p_hat",
    "m_value",
    "exceptional_divisor",
    "vanishing_orders",
]


class StrataError(ValueError):
    """Base class for invalid combinatorial input."""


class BadD(StrataError):
    pass


class TooFewMarks(StrataError):
    pass


class EntryTooSmall(StrataError):
    pass


class SumMismatch(StrataError):
    pass


class NumberingViolation(StrataError):
    pass


class NoSuchEdge(StrataError):
    pass


class NotInPHat(StrataError):
    pass


class TwoBlockHasNoOrders(StrataError):
    pass


# ---------------------------------------------------------------------------
# signatures and weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightVector:
    """Marked-point weights ``mu_i = -k_i / d`` together with the level ``d``.

    ``d`` is kept so that integrality statements (``d * mu(S) in ZZ``) can be
    checked without re-deriving the common denominator.
    """

    mu: tuple[Fraction, ...]
    d: int

    @property
    def n(self) -> int:
        return len(self.mu)

    def of(self, i: int) -> Fraction:
        """Weight of marking ``i`` (1-based)."""
        return self.mu[i - 1]

    def total(self, marks: Iterable[int]) -> Fraction:
        """``mu(I) = sum_{i in I} mu_i``."""
        return sum((self.mu[i - 1] for i in marks), Fraction(0))


@dataclass(frozen=True)
class Signature:
    """A level ``d >= 2`` and zero/pole orders ``kappa`` summing to ``-2d``."""

    d: int
    kappa: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.d < 2:
            raise BadD(f"d must be >= 2, got {self.d}")
        if len(self.kappa) < 3:
            raise TooFewMarks(f"need at least 3 markings, got {len(self.kappa)}")
        for i, k in enumerate(self.kappa, start=1):
            if k < 1 - self.d:
                raise EntryTooSmall(f"k_{i} = {k} < 1 - d = {1 - self.d}")
        total = sum(self.kappa)
        if total != -2 * self.d:
            raise SumMismatch(f"sum(kappa) = {total}, expected {-2 * self.d}")

    @property
    def n(self) -> int:
        return len(self.kappa)

    def weights(self) -> WeightVector:
        return WeightVector(tuple(Fraction(-k, self.d) for k in self.kappa), self.d)

    def relabeled(self, sigma: Sequence[int]) -> "Signature":
        """Signature after sending marking ``i`` to ``sigma[i-1]``."""
        new = [0] * self.n
        for i, k in enumerate(self.kappa, start=1):
            new[sigma[i - 1] - 1] = k
        return Signature(self.d, tuple(new))


def validate_signature(d: int, kappa: Sequence[int]) -> Signature:
    """Validate ``(d, kappa)`` and return the signature.

    Raises :class:`BadD`, :class:`TooFewMarks`, :class:`EntryTooSmall` or
    :class:`SumMismatch` on invalid input.
    """
    return Signature(int(d), tuple(int(k) for k in kappa))


def bundle_rank(sig: Signature) -> int:
    """Rank ``(d-1)(n-2) - 1`` of the bundle of finite-area d-differentials."""
    return (sig.d - 1) * (sig.n - 2) - 1


# ---------------------------------------------------------------------------
# boundary partitions
# ---------------------------------------------------------------------------


def _relabel_set(marks: Iterable[int], sigma: Sequence[int]) -> frozenset[int]:
    return frozenset(sigma[i - 1] for i in marks)


@dataclass(frozen=True)
class TwoBlockPartition:
    """An unordered partition ``{I0, I1}`` of ``{1..n}`` with both sides >= 2.

    Stored in weight order: ``mu(I0) <= 1 <= mu(I1)``, ties broken by putting
    the block containing marking 1 first.
    """

    i0: frozenset[int]
    i1: frozenset[int]

    @staticmethod
    def from_blocks(a: Iterable[int], b: Iterable[int], w: WeightVector) -> "TwoBlockPartition":
        a, b = frozenset(a), frozenset(b)
        if not a or not b or (a & b) or (a | b) != frozenset(range(1, w.n + 1)):
            raise StrataError("blocks must be disjoint, nonempty and cover 1..n")
        if min(len(a), len(b)) < 2:
            raise StrataError("both blocks must have at least 2 markings")
        wa, wb = w.total(a), w.total(b)
        if wa < wb:
            return TwoBlockPartition(a, b)
        if wb < wa:
            return TwoBlockPartition(b, a)
        # balanced: the block containing marking 1 is I0
        return TwoBlockPartition(a, b) if 1 in a else TwoBlockPartition(b, a)

    @property
    def n(self) -> int:
        return len(self.i0) + len(self.i1)

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.i0)), tuple(sorted(self.i1)))

    def relabeled(self, sigma: Sequence[int], w: WeightVector) -> "TwoBlockPartition":
        """Image partition under a relabeling, renumbered for the new weights."""
        return TwoBlockPartition.from_blocks(
            _relabel_set(self.i0, sigma), _relabel_set(self.i1, sigma), w
        )


@dataclass(frozen=True)
class MultiBlockPartition:
    """An ordered partition ``{I0, I1, ..., Ir}`` of ``{1..n}``, ``r >= 1``.

    ``I0`` is the light block; for ``r >= 2`` membership in the boundary index
    set requires ``mu(I0) < 1`` and ``mu(Ij) > 1`` for every ``j >= 1``.  The
    heavy blocks are stored sorted by least element.
    """

    blocks: tuple[frozenset[int], ...]

    @staticmethod
    def from_blocks(i0: Iterable[int], heavy: Iterable[Iterable[int]]) -> "MultiBlockPartition":
        hs = sorted((frozenset(h) for h in heavy), key=min)
        return MultiBlockPartition((frozenset(i0),) + tuple(hs))

    @staticmethod
    def from_two_block(part: TwoBlockPartition) -> "MultiBlockPartition":
        return MultiBlockPartition((part.i0, part.i1))

    @property
    def r(self) -> int:
        return len(self.blocks) - 1

    @property
    def size(self) -> int:
        """Number of blocks ``|S| = r + 1``."""
        return len(self.blocks)

    def sort_key(self) -> tuple:
        return (self.r, tuple(tuple(sorted(b)) for b in self.blocks))

    def relabeled(self, sigma: Sequence[int], w: WeightVector) -> "MultiBlockPartition":
        imgs = [_relabel_set(b, sigma) for b in self.blocks]
        if self.r == 1:
            return MultiBlockPartition.from_two_block(
                TwoBlockPartition.from_blocks(imgs[0], imgs[1], w)
            )
        return MultiBlockPartition.from_blocks(imgs[0], imgs[1:])


def enumerate_two_block(sig: Signature) -> list[TwoBlockPartition]:
    """All boundary partitions of ``{1..n}``: both blocks of size >= 2.

    There are exactly ``2**(n-1) - n - 1`` of them.
    """
    n = sig.n
    w = sig.weights()
    others = list(range(2, n + 1))
    out = []
    # enumerate the side containing marking 1; sizes 2..n-2
    for size in range(1, n - 2):
        for rest in itertools.combinations(others, size):
            side = frozenset((1,) + rest)
            out.append(TwoBlockPartition.from_blocks(side, frozenset(range(1, n + 1)) - side, w))
    out.sort(key=TwoBlockPartition.sort_key)
    return out


def boundary_weight(part: TwoBlockPartition, w: WeightVector) -> Fraction:
    """Weight ``mu_S = 1 - mu(I0) = (mu(I1) - mu(I0)) / 2`` of a boundary divisor."""
    w0 = w.total(part.i0)
    if w0 > 1:
        raise NumberingViolation(f"mu(I0) = {w0} > 1; blocks are misnumbered")
    return 1 - w0


# ---------------------------------------------------------------------------
# stable dual trees
# ---------------------------------------------------------------------------


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class StableTree:
    """Dual tree of a stable n-pointed genus-0 curve.

    ``vertex_marks[j]`` is the (possibly empty) set of markings on component
    ``j``; ``edges`` are unordered vertex pairs, one per node.  Stability means
    ``|marks| + degree >= 3`` at every vertex.
    """

    vertex_marks: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        nv = len(self.vertex_marks)
        object.__setattr__(self, "edges", tuple(sorted(_norm_edge(u, v) for u, v in self.edges)))
        if len(self.edges) != nv - 1:
            raise StrataError(f"a tree on {nv} vertices needs {nv - 1} edges")
        seen: set[int] = set()
        for marks in self.vertex_marks:
            if marks & seen:
                raise StrataError("vertex marking sets must be disjoint")
            seen |= marks
        if seen != set(range(1, len(seen) + 1)):
            raise StrataError("markings must be exactly 1..n")
        deg = [0] * nv
        adj: list[list[int]] = [[] for _ in range(nv)]
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv) or u == v:
                raise StrataError(f"bad edge ({u},{v})")
            deg[u] += 1
            deg[v] += 1
            adj[u].append(v)
            adj[v].append(u)
        for j in range(nv):
            if len(self.vertex_marks[j]) + deg[j] < 3:
                raise StrataError(f"vertex {j} is unstable")
        # connectivity (edge count already matches a tree)
        if nv > 1:
            stack, reached = [0], {0}
            while stack:
                for v in adj[stack.pop()]:
                    if v not in reached:
                        reached.add(v)
                        stack.append(v)
            if len(reached) != nv:
                raise StrataError("tree is not connected")

    @property
    def n(self) -> int:
        return sum(len(m) for m in self.vertex_marks)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_marks)

    def neighbors(self, j: int) -> list[int]:
        out = []
        for u, v in self.edges:
            if u == j:
                out.append(v)
            elif v == j:
                out.append(u)
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in set(self.edges)

    def far_marks(self, j: int, k: int) -> frozenset[int]:
        """Markings on the ``k``-side of the edge ``{j, k}``."""
        if not self.has_edge(j, k):
            raise NoSuchEdge(f"no edge between vertices {j} and {k}")
        reached = {k}
        stack = [k]
        while stack:
            cur = stack.pop()
            for nxt in self.neighbors(cur):
                if nxt != j and nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        out: set[int] = set()
        for v in reached:
            out |= self.vertex_marks[v]
        return frozenset(out)

    def edge_partition(self, u: int, v: int, w: WeightVector) -> TwoBlockPartition:
        """Two-block partition cut out by the edge ``{u, v}``."""
        return TwoBlockPartition.from_blocks(self.far_marks(v, u), self.far_marks(u, v), w)

    def canonical_key(self) -> tuple:
        """Isomorphism-invariant key (stable marked trees are rigid)."""
        return _canonical_form(self)[0]

    def canonical(self) -> "StableTree":
        return _canonical_form(self)[1]

    def relabeled(self, sigma: Sequence[int]) -> "StableTree":
        return StableTree(
            tuple(_relabel_set(m, sigma) for m in self.vertex_marks), self.edges
        )


def _canonical_form(tree: StableTree) -> tuple[tuple, StableTree]:
    """Deterministic vertex renumbering: root at the vertex holding the least
    marking, children ordered by the least marking in their subtree."""
    nv = tree.num_vertices
    if nv == 1:
        t = StableTree(tree.vertex_marks, ())
        return ((tuple(sorted(tree.vertex_marks[0])),), ()), t
    adj: list[list[int]] = [[] for _ in range(nv)]
    for u, v in tree.edges:
        adj[u].append(v)
        adj[v].append(u)
    lo = min(min(m) for m in tree.vertex_marks if m)
    root = next(j for j, m in enumerate(tree.vertex_marks) if lo in m)

    submin: dict[tuple[int, int], int] = {}

    def min_beyond(parent: int, child: int) -> int:
        key = (parent, child)
        if key not in submin:
            vals = [min(tree.vertex_marks[child])] if tree.vertex_marks[child] else []
            vals += [min_beyond(child, g) for g in adj[child] if g != parent]
            submin[key] = min(vals)
        return submin[key]

    order: list[int] = []

    def visit(v: int, parent: int) -> None:
        order.append(v)
        for c in sorted((c for c in adj[v] if c != parent), key=lambda c: min_beyond(v, c)):
            visit(c, v)

    visit(root, -1)
    perm = {old: new for new, old in enumerate(order)}
    marks = tuple(tree.vertex_marks[old] for old in order)
    edges = tuple(sorted(_norm_edge(perm[u], perm[v]) for u, v in tree.edges))
    canon = StableTree(marks, edges)
    key = (tuple(tuple(sorted(m)) for m in marks), edges)
    return key, canon


def _vertex_splits(tree: StableTree, j: int) -> Iterator[tuple[frozenset[int], list[int]]]:
    """All ways to split vertex ``j`` in two, both halves keeping >= 2 flags.

    Yields ``(moved_marks, moved_neighbor_list)``; the first flag always stays.
    """
    flags: list[tuple[str, int]] = [("m", i) for i in sorted(tree.vertex_marks[j])]
    flags += [("e", k) for k in sorted(tree.neighbors(j))]
    f = len(flags)
    if f < 4:
        return
    rest = flags[1:]
    for size in range(2, f - 1):
        for moved in itertools.combinations(rest, size):
            marks = frozenset(i for kind, i in moved if kind == "m")
            nbrs = [i for kind, i in moved if kind == "e"]
            yield marks, nbrs


def _split_vertex(tree: StableTree, j: int, marks: frozenset[int], nbrs: list[int]) -> StableTree:
    nv = tree.num_vertices
    new_marks = list(tree.vertex_marks)
    new_marks[j] = tree.vertex_marks[j] - marks
    new_marks.append(marks)
    moved = set(nbrs)
    edges = []
    for u, v in tree.edges:
        if u == j and v in moved:
            edges.append((nv, v))
        elif v == j and u in moved:
            edges.append((u, nv))
        else:
            edges.append((u, v))
    edges.append((j, nv))
    return StableTree(tuple(new_marks), tuple(edges))


def enumerate_stable_trees(sig: Signature, max_edges: int) -> list[StableTree]:
    """All isomorphism classes of stable trees with 0..max_edges edges.

    The 0-edge tree (smooth curve) is included.  Trees are returned in
    canonical form, sorted by edge count then canonical key.
    """
    n = sig.n
    if max_edges > n - 3:
        raise StrataError(f"max_edges = {max_edges} exceeds n - 3 = {n - 3}")
    base = StableTree((frozenset(range(1, n + 1)),), ())
    levels: list[dict[tuple, StableTree]] = [{base.canonical_key(): base}]
    for _ in range(max_edges):
        nxt: dict[tuple, StableTree] = {}
        for tree in levels[-1].values():
            for j in range(tree.num_vertices):
                for marks, nbrs in _vertex_splits(tree, j):
                    refined = _split_vertex(tree, j, marks, nbrs).canonical()
                    nxt.setdefault(refined.canonical_key(), refined)
        levels.append(nxt)
    out: list[StableTree] = []
    for level in levels:
        out.extend(level[key] for key in sorted(level))
    return out


# ---------------------------------------------------------------------------
# node and edge weights, principal subcurves
# ---------------------------------------------------------------------------


def node_weights(tree: StableTree, edge: tuple[int, int], w: WeightVector) -> tuple[Fraction, Fraction]:
    """Weights ``(mu(y_{jj'}), mu(y_{j'j}))`` of the two branches of a node.

    The weight at the branch on component ``j`` is the total weight of the
    markings on the far side of the edge; the two values sum to 2.
    """
    j, jp = edge
    return w.total(tree.far_marks(j, jp)), w.total(tree.far_marks(jp, j))


def edge_weight(tree: StableTree, oriented_edge: tuple[int, int], w: WeightVector) -> Fraction:
    """Oriented edge weight ``mu(e_{jj'}) = mu(y_{j'j}) - mu(y_{jj'})``.

    Antisymmetric under orientation reversal; its absolute value is twice the
    weight of the boundary divisor the edge cuts out.
    """
    a, b = node_weights(tree, oriented_edge, w)
    return b - a


def _contracted_groups(tree: StableTree, w: WeightVector) -> list[set[int]]:
    """Vertex groups after contracting all zero-weight edges."""
    parent = list(range(tree.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in tree.edges:
        if edge_weight(tree, (u, v), w) == 0:
            parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for j in range(tree.num_vertices):
        groups.setdefault(find(j), set()).add(j)
    return sorted(groups.values(), key=min)


def principal_subcurves(
    tree: StableTree, w: WeightVector
) -> tuple[list[frozenset[int]], frozenset[int]]:
    """Principal subcurves of a stable curve.

    Zero-weight nodes are contracted first; a contracted component is
    principal when every edge leaving it points towards strictly lighter
    total weight (``mu`` of the far side < 1).  Returns the principal groups
    as sets of original vertex indices, plus the remaining vertices.  At least
    one principal subcurve always exists.
    """
    groups = _contracted_groups(tree, w)
    principal: list[frozenset[int]] = []
    rest: set[int] = set()
    for grp in groups:
        ok = True
        for u, v in tree.edges:
            if u in grp and v not in grp:
                inner, outer = u, v
            elif v in grp and u not in grp:
                inner, outer = v, u
            else:
                continue
            if edge_weight(tree, (inner, outer), w) <= 0:
                ok = False
                break
        if ok:
            principal.append(frozenset(grp))
        else:
            rest |= grp
    return principal, frozenset(rest)


# ---------------------------------------------------------------------------
# exponent vectors and the ideal data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentVector:
    """Nonnegative exponents, one per node, of the monomial attached to a component."""

    entries: tuple[tuple[tuple[int, int], int], ...]

    @staticmethod
    def from_dict(d: dict[tuple[int, int], int]) -> "ExponentVector":
        return ExponentVector(tuple(sorted(d.items())))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return all(p == 0 for _, p in self.entries)

    def __getitem__(self, edge: tuple[int, int]) -> int:
        return self.as_dict()[_norm_edge(*edge)]


def exponent_vector(tree: StableTree, j: int, w: WeightVector) -> ExponentVector:
    """Exponents ``beta_j``: ``d * mu_S`` at each node whose light side holds ``v_j``."""
    d = w.d
    entries: dict[tuple[int, int], int] = {}
    for u, v in tree.edges:
        part = tree.edge_partition(u, v, w)
        mu_s = boundary_weight(part, w)
        val = d * mu_s
        if val.denominator != 1:
            raise StrataError(f"d * mu_S = {val} is not an integer")
        # which endpoint sits on the light side?
        light_end = u if tree.far_marks(v, u) == part.i0 else v
        on_light = _separated_same_side(tree, j, light_end, (u, v))
        entries[(u, v)] = int(val) if on_light else 0
    return ExponentVector.from_dict(entries)


def _separated_same_side(tree: StableTree, j: int, anchor: int, edge: tuple[int, int]) -> bool:
    """True when vertex ``j`` lies on the ``anchor`` side of ``edge``."""
    u, v = edge
    block = v if anchor == u else u
    reached = {anchor}
    stack = [anchor]
    while stack:
        cur = stack.pop()
        for nxt in tree.neighbors(cur):
            if (cur, nxt) in ((u, v), (v, u)):
                continue
            if nxt not in reached:
                reached.add(nxt)
                stack.append(nxt)
    return j in reached


def ideal_generators(tree: StableTree, w: WeightVector) -> frozenset[ExponentVector]:
    """Monomial generators of the local ideal: one exponent vector per
    principal subcurve (components of one subcurve share their vector)."""
    principal, _ = principal_subcurves(tree, w)
    gens = set()
    for grp in principal:
        vecs = {exponent_vector(tree, j, w) for j in grp}
        if len(vecs) != 1:
            raise StrataError("components of a principal subcurve disagree on beta")
        gens |= vecs
    return frozenset(gens)


def in_ideal_support(tree: StableTree, w: WeightVector) -> bool:
    """True when the stratum of this tree lies in the support of the ideal,
    i.e. when there are at least two principal subcurves."""
    principal, _ = principal_subcurves(tree, w)
    return len(principal) >= 2


def fiber_projective_dim(tree: StableTree, w: WeightVector) -> int:
    """Dimension ``r0 - 1`` of the projective fiber over this stratum."""
    principal, _ = principal_subcurves(tree, w)
    return len(principal) - 1


# ---------------------------------------------------------------------------
# the boundary index set of the blow-up
# ---------------------------------------------------------------------------


def _heavy_block_partitions(
    pool: list[int], w: WeightVector, min_blocks: int
) -> Iterator[list[frozenset[int]]]:
    """Partitions of ``pool`` into >= min_blocks blocks, each of weight > 1.

    Canonical: the first remaining element anchors the next block.
    """
    if not pool:
        if min_blocks <= 0:
            yield []
        return
    first, rest = pool[0], pool[1:]
    for size in range(0, len(rest) + 1):
        for extra in itertools.combinations(rest, size):
            block = frozenset((first,) + extra)
            if w.total(block) <= 1:
                continue
            remaining = [x for x in rest if x not in block]
            for tail in _heavy_block_partitions(remaining, w, min_blocks - 1):
                yield [block] + tail


def enumerate_p_hat(sig: Signature) -> list[MultiBlockPartition]:
    """Partitions indexing the boundary divisors of the blow-up.

    All two-block boundary partitions, plus every ``{I0, I1, .., Ir}`` with
    ``r >= 2``, ``mu(I0) < 1`` and ``mu(Ij) > 1`` for ``j >= 1``.  Blocks are
    nonempty; ``I0`` comes first, heavy blocks sorted by least element.
    """
    w = sig.weights()
    out = [MultiBlockPartition.from_two_block(p) for p in enumerate_two_block(sig)]
    n = sig.n
    marks = list(range(1, n + 1))
    for size in range(1, n - 3):
        for i0 in itertools.combinations(marks, size):
            i0set = frozenset(i0)
            if w.total(i0set) >= 1:
                continue
            pool = [m for m in marks if m not in i0set]
            for heavy in _heavy_block_partitions(pool, w, 2):
                if len(heavy) >= 2:
                    out.append(MultiBlockPartition.from_blocks(i0set, heavy))
    out.sort(key=MultiBlockPartition.sort_key)
    return out


def _check_in_p_hat(part: MultiBlockPartition, sig: Signature) -> WeightVector:
    w = sig.weights()
    universe: set[int] = set()
    for b in part.blocks:
        if not b:
            raise NotInPHat("empty block")
        if b & universe:
            raise NotInPHat("blocks overlap")
        universe |= b
    if universe != set(range(1, sig.n + 1)):
        raise NotInPHat("blocks do not cover 1..n")
    if part.r == 1:
        if min(len(part.blocks[0]), len(part.blocks[1])) < 2:
            raise NotInPHat("two-block partitions need both sides >= 2")
        if w.total(part.blocks[0]) > 1:
            raise NotInPHat("I0 must be the light block")
    elif part.r >= 2:
        if w.total(part.blocks[0]) >= 1:
            raise NotInPHat("mu(I0) must be < 1")
        for b in part.blocks[1:]:
            if w.total(b) <= 1:
                raise NotInPHat("every heavy block needs mu > 1")
    else:
        raise NotInPHat("need at least two blocks")
    return w


def _m_factors(part: MultiBlockPartition, sig: Signature) -> list[int]:
    w = _check_in_p_hat(part, sig)
    out = []
    for b in part.blocks[1:]:
        val = sig.d * (w.total(b) - 1)
        if val.denominator != 1:
            raise StrataError(f"d * (mu(I_j) - 1) = {val} is not an integer")
        out.append(int(val))
    return out


def m_value(part: MultiBlockPartition, sig: Signature) -> int:
    """Multiplicity ``m(S) = prod_j d * (mu(Ij) - 1)`` over the heavy blocks.

    For a two-block partition this is the single factor ``d * mu_S``.
    """
    prod = 1
    for f in _m_factors(part, sig):
        prod *= f
    return prod


@dataclass
class WeilDivisorData:
    """Formal sum of boundary partitions with integer coefficients."""

    terms: dict[MultiBlockPartition, int]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.terms.values())

    def nonzero(self) -> dict[MultiBlockPartition, int]:
        return {p: c for p, c in self.terms.items() if c != 0}


def exceptional_divisor(sig: Signature) -> WeilDivisorData:
    """Weil coefficients ``(|S| - 2) * m(S)`` of the exceptional divisor.

    Two-block partitions always get coefficient 0.
    """
    terms: dict[MultiBlockPartition, int] = {}
    for part in enumerate_p_hat(sig):
        terms[part] = (part.size - 2) * m_value(part, sig)
    return WeilDivisorData(terms)


def vanishing_orders(part: MultiBlockPartition, sig: Signature) -> dict[int, int]:
    """Vanishing order of each node coordinate ``t_j`` along the divisor of a
    multi-block partition: ``order(t_j) = prod_i m_i / m_j``."""
    if part.r == 1:
        _check_in_p_hat(part, sig)
        raise TwoBlockHasNoOrders("two-block divisors carry no node orders")
    factors = _m_factors(part, sig)
    total = 1
    for f in factors:
        total *= f
    return {j: total // factors[j - 1] for j in range(1, part.r + 1)}
