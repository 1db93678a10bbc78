"""Exact rational-point verification of the local model of the universal curve.

Near a stratum with dual tree T the family of curves is cut out, inside a
product of projective lines, by one equation per node:

    (z_j - b_{jj'}) (z_{j'} - b_{j'j}) = t_a,        a = {j, j'},

where ``b_{jj'}`` is the coordinate of the node on the component ``j`` and
``t_a`` the smoothing parameter.  Each component carries a candidate
differential

    Phi_j = prod_i (z_j - a_{ji})^{k_i} (dz_j)^d

(the factor of a marked point sitting at infinity in that chart is omitted),
and the monomials ``t^beta_j`` rescale these to a single holomorphic family:
the ratio of any two rescaled candidates is a constant of the chart data,

    t^{beta_j} Phi_j = f_{jk} * t^{beta_k} Phi_k.

All verification here is by exact evaluation at random rational points of the
curve, with retry on degenerate draws: an identity of rational functions that
holds at a generic exact sample holds identically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from strata0.strata import (
    ExponentVector,
    NoSuchEdge,
    Signature,
    StableTree,
    StrataError,
    exponent_vector,
)

__all__ = [
    "DenominatorVanishes",
    "PoleHit",
    "BadBlocks",
    "INF",
    "LocalChart",
    "SectionValue",
    "DEFAULT_SEED",
    "make_sampler",
    "build_chart",
    "build_codim2_chart",
    "marked_point_coords",
    "sample_curve_point",
    "evaluate_phi",
    "beta_monomial",
    "ratio_constant",
    "section_in_frame",
    "verify_ratio_identity",
    "classify_codim2_case",
]


class DenominatorVanishes(ArithmeticError):
    pass


class PoleHit(ArithmeticError):
    pass


class BadBlocks(ValueError):
    pass


class _Infinity:
    """The point at infinity of the projective line over Q."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"


INF = _Infinity()
Coord = Fraction | _Infinity

DEFAULT_SEED = 20237

_BOUND = 10 ** 6


def make_sampler(seed: int | None = None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-_BOUND, _BOUND), rng.randint(1, _BOUND))


def _propagate(x: Coord, b_near: Fraction, b_far: Fraction, t: Fraction) -> Coord:
    """Coordinate of a point across one node: ``b_far + t / (x - b_near)``."""
    if x is INF:
        return b_far
    if x == b_near:
        if t == 0:
            raise DenominatorVanishes("point sits exactly on a fully degenerate node")
        return INF
    return b_far + t / (x - b_near)


@dataclass
class LocalChart:
    """Coordinates for one local family over a stratum.

    ``mark_coords[j][i]`` is the coordinate ``a_{ji}`` of marking ``i`` on its
    home component ``j`` (possibly ``INF``); ``node_coords[j][j']`` is the
    finite coordinate ``b_{jj'}``; ``node_params`` holds one rational ``t``
    per edge (zero allowed: that node stays pinched).
    """

    sig: Signature
    tree: StableTree
    node_params: dict[tuple[int, int], Fraction]
    mark_coords: dict[int, dict[int, Coord]]
    node_coords: dict[int, dict[int, Fraction]]
    seed: int | None = None
    _coords_cache: dict[int, tuple[Coord, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        edges = set(self.tree.edges)
        if set(self.node_params) != edges:
            raise StrataError("need exactly one node parameter per edge")
        for j in range(self.tree.num_vertices):
            special: list[Coord] = list(self.mark_coords.get(j, {}).values())
            nodes = self.node_coords.get(j, {})
            if set(nodes) != set(self.tree.neighbors(j)):
                raise StrataError(f"vertex {j}: need one node coordinate per neighbor")
            if set(self.mark_coords.get(j, {})) != set(self.tree.vertex_marks[j]):
                raise StrataError(f"vertex {j}: need one coordinate per marking")
            special += list(nodes.values())
            finite = [c for c in special if c is not INF]
            if len(set(finite)) != len(finite) or special.count(INF) > 1:
                raise StrataError(f"vertex {j}: special points must be pairwise distinct")

    def t(self, u: int, v: int) -> Fraction:
        return self.node_params[(u, v) if u < v else (v, u)]

    def home_vertex(self, i: int) -> int:
        for j, marks in enumerate(self.tree.vertex_marks):
            if i in marks:
                return j
        raise StrataError(f"marking {i} not in tree")

    def path(self, j: int, k: int) -> list[int]:
        """Vertices of the unique path from ``j`` to ``k`` (inclusive)."""
        parent = {j: None}
        queue = [j]
        while queue:
            cur = queue.pop(0)
            if cur == k:
                break
            for nxt in self.tree.neighbors(cur):
                if nxt not in parent:
                    parent[nxt] = cur
                    queue.append(nxt)
        out = [k]
        while out[-1] != j:
            out.append(parent[out[-1]])
        return out[::-1]


# ---------------------------------------------------------------------------
# chart construction
# ---------------------------------------------------------------------------


def _fresh(rng: random.Random, used: set[Fraction]) -> Fraction:
    for _ in range(200):
        x = _rand_rational(rng)
        if x not in used:
            used.add(x)
            return x
    raise DenominatorVanishes("could not draw a fresh coordinate")


def build_chart(
    sig: Signature,
    tree: StableTree,
    node_params: Mapping[tuple[int, int], Fraction] | None = None,
    seed: int | None = None,
    pin: bool = True,
) -> LocalChart:
    """Random chart for a tree, with deterministic draws from ``seed``.

    With ``pin=True`` each component uses its Moebius freedom the usual way:
    its first node goes to 0, a second node to 1, and its last markings fill
    the remaining slots among {infinity, 1, 0}.  Unpinned coordinates are
    random rationals; node parameters default to random nonzero rationals.
    """
    rng = make_sampler(seed)
    params: dict[tuple[int, int], Fraction] = {}
    for u, v in tree.edges:
        if node_params is not None and (u, v) in node_params:
            params[(u, v)] = Fraction(node_params[(u, v)])
        else:
            t = _rand_rational(rng)
            while t == 0:
                t = _rand_rational(rng)
            params[(u, v)] = t
    mark_coords: dict[int, dict[int, Coord]] = {}
    node_coords: dict[int, dict[int, Fraction]] = {}
    for j in range(tree.num_vertices):
        nbrs = sorted(tree.neighbors(j))
        marks = sorted(tree.vertex_marks[j])
        used: set[Fraction] = set()
        ncoords: dict[int, Fraction] = {}
        mcoords: dict[int, Coord] = {}
        slots: list[Coord] = []
        if pin:
            node_pins = [Fraction(0), Fraction(1)][: len(nbrs)]
            for w, val in zip(nbrs, node_pins):
                ncoords[w] = val
                used.add(val)
            leftover = [INF, Fraction(1), Fraction(0)][: max(0, 3 - len(node_pins))]
            # assign to the last markings: ..., third-last -> 0, second-last -> 1, last -> INF
            for val, i in zip(leftover, reversed(marks)):
                mcoords[i] = val
                if val is not INF:
                    used.add(val)
        for w in nbrs:
            if w not in ncoords:
                ncoords[w] = _fresh(rng, used)
        for i in marks:
            if i not in mcoords:
                mcoords[i] = _fresh(rng, used)
        mark_coords[j] = mcoords
        node_coords[j] = ncoords
    return LocalChart(sig, tree, params, mark_coords, node_coords, seed=seed)


def build_codim2_chart(
    sig: Signature,
    blocks: Sequence[Iterable[int]],
    t1: Fraction | int | None = None,
    t2: Fraction | int | None = None,
    seed: int | None = None,
    pin: bool = True,
) -> LocalChart:
    """Chart over a codimension-2 chain: a center component carrying ``I0``
    meeting two components carrying ``I1`` and ``I2``."""
    i0, i1, i2 = (frozenset(b) for b in blocks)
    _check_chain_blocks(sig, i0, i1, i2)
    tree = StableTree((i0, i1, i2), ((0, 1), (0, 2)))
    params = {}
    if t1 is not None:
        params[(0, 1)] = Fraction(t1)
    if t2 is not None:
        params[(0, 2)] = Fraction(t2)
    return build_chart(sig, tree, params or None, seed=seed, pin=pin)


# ---------------------------------------------------------------------------
# sections and marked points
# ---------------------------------------------------------------------------


def marked_point_coords(chart: LocalChart, i: int) -> tuple[Coord, ...]:
    """Full coordinate tuple of the section of marking ``i``.

    The home component stores the coordinate directly; every other component
    sees the point through the chain of node relations.  With all node
    parameters zero the point collapses onto node coordinates away from home.
    """
    cached = chart._coords_cache.get(i)
    if cached is not None:
        return cached
    tree = chart.tree
    home = chart.home_vertex(i)
    coords: dict[int, Coord] = {home: chart.mark_coords[home][i]}
    stack = [home]
    while stack:
        cur = stack.pop()
        for nxt in tree.neighbors(cur):
            if nxt in coords:
                continue
            coords[nxt] = _propagate(
                coords[cur],
                chart.node_coords[cur][nxt],
                chart.node_coords[nxt][cur],
                chart.t(cur, nxt),
            )
            stack.append(nxt)
    out = tuple(coords[j] for j in range(tree.num_vertices))
    chart._coords_cache[i] = out
    return out


def sample_curve_point(
    chart: LocalChart,
    rng: random.Random,
    base: int = 0,
    retries: int = 100,
    check_vertices: Iterable[int] | None = None,
) -> tuple[Coord, ...]:
    """A random rational point of the fiber, satisfying every node equation.

    The base coordinate is drawn at random and pushed through the node
    relations; draws landing on a special point (a pole of some ``Phi_j`` or a
    node) are rejected and retried.  On a pinched fiber the coordinates away
    from the base collapse to node values, so genericity can only be demanded
    on the components listed in ``check_vertices`` (default: all).
    """
    tree = chart.tree
    check = list(range(tree.num_vertices)) if check_vertices is None else list(check_vertices)
    all_marks = [marked_point_coords(chart, i) for i in range(1, chart.sig.n + 1)]
    for _ in range(retries):
        z: dict[int, Coord] = {base: _rand_rational(rng)}
        stack = [base]
        ok = True
        while stack and ok:
            cur = stack.pop()
            for nxt in tree.neighbors(cur):
                if nxt in z:
                    continue
                try:
                    z[nxt] = _propagate(
                        z[cur],
                        chart.node_coords[cur][nxt],
                        chart.node_coords[nxt][cur],
                        chart.t(cur, nxt),
                    )
                except DenominatorVanishes:
                    ok = False
                    break
                stack.append(nxt)
        if not ok:
            continue
        for j in check:
            if z[j] is INF:
                ok = False
                break
            if any(z[j] == a[j] for a in all_marks):
                ok = False
                break
            if any(z[j] == b for b in chart.node_coords[j].values()):
                ok = False
                break
        if ok:
            return tuple(z[j] for j in range(tree.num_vertices))
    raise DenominatorVanishes("no valid sample point found; chart too degenerate")


@dataclass(frozen=True)
class SectionValue:
    """Coefficient of ``(dz_j)^d`` of a candidate differential at a point."""

    value: Fraction
    vertex: int


def evaluate_phi(chart: LocalChart, j: int, point: Sequence[Coord]) -> SectionValue:
    """Evaluate ``Phi_j`` at a curve point, in the ``j``-th coordinate frame.

    Factors with the marked point at infinity in this chart are omitted; a
    sample coordinate equal to some ``a_{ji}`` is a pole or zero of the
    product and raises :class:`PoleHit`.
    """
    z = point[j]
    if z is INF:
        raise PoleHit("sample point at infinity; use a finite draw")
    val = Fraction(1)
    for i in range(1, chart.sig.n + 1):
        a = marked_point_coords(chart, i)[j]
        if a is INF:
            continue
        base = z - a
        if base == 0:
            raise PoleHit(f"sample coordinate equals a_({j},{i})")
        val *= base ** chart.sig.kappa[i - 1]
    return SectionValue(val, j)


def beta_monomial(chart: LocalChart, j: int) -> Fraction:
    """Value of ``t^beta_j`` at the chart's node parameters (with ``0^0 = 1``)."""
    beta = exponent_vector(chart.tree, j, chart.sig.weights())
    val = Fraction(1)
    for edge, p in beta.entries:
        val *= chart.node_params[edge] ** p
    return val


def _adjacent_ratio_constant(chart: LocalChart, j: int, k: int) -> Fraction:
    """Closed form of ``f_{jk}`` for adjacent components.

    With ``j`` on the heavy side of the node and ``k`` on the light side,

        f_{jk} = (-1)^(d + sum_F k_i)
                 * prod_{i in F, heavy} (a_{ji} - b_{jk})^{k_i}
                 / prod_{i in F, light} (a_{ki} - b_{kj})^{k_i},

    where F drops the markings at infinity in either chart.  For ``j`` on the
    light side the reciprocal applies.
    """
    tree = chart.tree
    if not tree.has_edge(j, k):
        raise NoSuchEdge(f"vertices {j} and {k} are not adjacent")
    w = chart.sig.weights()
    part = tree.edge_partition(j, k, w)
    side_j = tree.far_marks(k, j)
    j_is_heavy = side_j == part.i1
    if not j_is_heavy:
        return 1 / _adjacent_ratio_constant(chart, k, j)
    d = chart.sig.d
    kappa = chart.sig.kappa
    b_jk = chart.node_coords[j][k]
    b_kj = chart.node_coords[k][j]
    num = Fraction(1)
    den = Fraction(1)
    ksum = d
    for i in range(1, chart.sig.n + 1):
        a_j = marked_point_coords(chart, i)[j]
        a_k = marked_point_coords(chart, i)[k]
        if a_j is INF or a_k is INF:
            continue
        ksum += kappa[i - 1]
        if i in part.i1:
            base = a_j - b_jk
            if base == 0:
                raise DenominatorVanishes(f"a_({j},{i}) hits the node coordinate")
            num *= base ** kappa[i - 1]
        else:
            base = a_k - b_kj
            if base == 0:
                raise DenominatorVanishes(f"a_({k},{i}) hits the node coordinate")
            den *= base ** kappa[i - 1]
    sign = -1 if ksum % 2 else 1
    return sign * num / den


def ratio_constant(chart: LocalChart, j: int, k: int) -> Fraction:
    """The constant ``f_{jk}`` with ``t^{beta_j} Phi_j = f_{jk} t^{beta_k} Phi_k``.

    For adjacent components this is the closed form; in general the constants
    compose along the path between the components.
    """
    if j == k:
        return Fraction(1)
    path = chart.path(j, k)
    val = Fraction(1)
    for a, b in zip(path, path[1:]):
        val *= _adjacent_ratio_constant(chart, a, b)
    return val


def _frame_jacobian(chart: LocalChart, j: int, k: int, point: Sequence[Coord]) -> Fraction:
    """``dz_j / dz_k`` along the curve at a sample point."""
    if j == k:
        return Fraction(1)
    path = chart.path(j, k)
    jac = Fraction(1)
    for a, b in zip(path, path[1:]):
        zb = point[b]
        if zb is INF:
            raise PoleHit("frame change through a point at infinity")
        diff = zb - chart.node_coords[b][a]
        if diff == 0:
            raise PoleHit("frame change degenerate at a node")
        jac *= -chart.t(a, b) / diff ** 2
    return jac


def section_in_frame(
    chart: LocalChart, j: int, point: Sequence[Coord], frame: int
) -> Fraction:
    """Value of the rescaled section ``t^{beta_j} Phi_j`` in the frame of
    component ``frame`` at a sample point."""
    phi = evaluate_phi(chart, j, point).value
    jac = _frame_jacobian(chart, j, frame, point)
    return beta_monomial(chart, j) * phi * jac ** chart.sig.d


def verify_ratio_identity(
    chart: LocalChart,
    j: int,
    k: int,
    samples: int = 20,
    seed: int | None = None,
) -> bool:
    """Exact check of ``t^{beta_j} Phi_j = f_{jk} t^{beta_k} Phi_k``.

    Evaluates both sides at ``samples`` random rational curve points (all node
    parameters must be nonzero so the fiber is smooth).  Exact arithmetic
    makes one generic sample already decisive; several guard against a
    degenerate draw.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if any(t == 0 for t in chart.node_params.values()):
        raise DenominatorVanishes("ratio verification needs a smooth fiber (t != 0)")
    if j == k:
        return True
    rng = make_sampler(chart.seed if seed is None else seed)
    f = ratio_constant(chart, j, k)
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 100 * samples:
            raise DenominatorVanishes("sampling kept hitting degenerate points")
        try:
            point = sample_curve_point(chart, rng)
            lhs = section_in_frame(chart, j, point, k)
            rhs = f * section_in_frame(chart, k, point, k)
        except (PoleHit, DenominatorVanishes):
            continue
        if lhs != rhs:
            return False
        done += 1
    return True


# ---------------------------------------------------------------------------
# the codimension-2 trichotomy
# ---------------------------------------------------------------------------


def _check_chain_blocks(
    sig: Signature, i0: frozenset[int], i1: frozenset[int], i2: frozenset[int]
) -> None:
    if (i0 | i1 | i2) != set(range(1, sig.n + 1)) or (i0 & i1) or (i0 & i2) or (i1 & i2):
        raise BadBlocks("blocks must partition 1..n")
    if len(i0) < 1 or len(i1) < 2 or len(i2) < 2:
        raise BadBlocks("chain stability needs |I0| >= 1 and |I1|, |I2| >= 2")


def classify_codim2_case(sig: Signature, blocks: Sequence[Iterable[int]]) -> str:
    """Which of the three local shapes a codimension-2 chain falls into.

    With ``nu_j = -d - sum_{i in Ij} k_i`` for the two outer blocks:
    ``'a'`` when both are <= 0 (the center component carries the limit),
    ``'c'`` when both are >= 0 and not 'a' (every candidate dies on the
    pinched fiber), ``'b'`` otherwise.  The doubly-degenerate tie goes to 'a'.
    """
    if len(blocks) != 3:
        raise BadBlocks("need exactly three blocks")
    i0, i1, i2 = (frozenset(b) for b in blocks)
    _check_chain_blocks(sig, i0, i1, i2)
    nu1 = -sig.d - sum(sig.kappa[i - 1] for i in i1)
    nu2 = -sig.d - sum(sig.kappa[i - 1] for i in i2)
    if nu1 <= 0 and nu2 <= 0:
        return "a"
    if nu1 >= 0 and nu2 >= 0:
        return "c"
    return "b"
