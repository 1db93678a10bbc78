"""Exact top intersection numbers of psi and boundary divisor classes on
the moduli space of stable n-pointed genus-0 curves.

Classes are held as Q-linear combinations of *decorated boundary strata*: a
stable dual tree together with a power of the cotangent class at each flag
(a marking leg or an edge branch).  Multiplying by a divisor symbol applies
the classical genus-0 rules:

* a boundary divisor whose split crosses the stratum kills the term;
* a boundary divisor equal to the split of an existing edge contributes the
  excess term ``-(psi' + psi'')`` at the two branches of that node;
* otherwise the divisor refines a unique vertex by one new edge;
* a psi class raises the decoration at its leg.

A top-degree decorated stratum integrates to a product of one multinomial
per vertex, ``(m_v - 3)! / prod_f a_f!`` when the decorations at each vertex
sum to ``m_v - 3`` (and 0 otherwise).

Marking sets are stored as bitmasks (bit ``i-1`` is marking ``i``); strata are
kept in a canonical vertex order so equal classes combine, which is what keeps
intermediate term counts polynomial in practice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Iterable, Mapping, Sequence, Union

from strata0.strata import TwoBlockPartition

__all__ = [
    "DegreeOverflow",
    "WrongDegree",
    "Psi",
    "Boundary",
    "DivisorSymbol",
    "DivisorExpression",
    "DecoratedStratum",
    "ChowElement",
    "unit",
    "multiply",
    "integrate",
    "product_number",
    "keel_relation",
    "psi_boundary_expression",
]


class DegreeOverflow(ValueError):
    pass


class WrongDegree(ValueError):
    pass


def _mask(marks: Iterable[int]) -> int:
    m = 0
    for i in marks:
        m |= 1 << (i - 1)
    return m


def _unmask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# divisor symbols and expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Psi:
    """Cotangent class at marking ``i``."""

    i: int


@dataclass(frozen=True)
class Boundary:
    """Boundary divisor of a two-block split, stored as the side holding marking 1."""

    n: int
    key: int  # bitmask of the side containing marking 1

    @staticmethod
    def of(n: int, side: Iterable[int]) -> "Boundary":
        m = _mask(side)
        full = (1 << n) - 1
        if m & ~full or m == 0 or m == full:
            raise ValueError("side must be a proper nonempty subset of 1..n")
        key = m if m & 1 else full ^ m
        if bin(key).count("1") < 2 or bin(full ^ key).count("1") < 2:
            raise ValueError("both sides of a boundary split need >= 2 markings")
        return Boundary(n, key)

    @staticmethod
    def from_partition(part: TwoBlockPartition) -> "Boundary":
        return Boundary.of(part.n, part.i0)

    def sides(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        full = (1 << self.n) - 1
        return _unmask(self.key), _unmask(full ^ self.key)


DivisorSymbol = Union[Psi, Boundary]


def _symbol_order(sym: DivisorSymbol) -> tuple:
    if isinstance(sym, Psi):
        return (0, sym.i)
    return (1, sym.key)


class DivisorExpression:
    """Formal Q-linear combination of psi and boundary symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[DivisorSymbol, Fraction] | None = None):
        self.terms: dict[DivisorSymbol, Fraction] = {}
        if terms:
            for sym, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[sym] = c

    def __add__(self, other: "DivisorExpression") -> "DivisorExpression":
        out = dict(self.terms)
        for sym, c in other.terms.items():
            out[sym] = out.get(sym, Fraction(0)) + c
        return DivisorExpression(out)

    def __sub__(self, other: "DivisorExpression") -> "DivisorExpression":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "DivisorExpression":
        s = Fraction(scalar)
        return DivisorExpression({sym: s * c for sym, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, DivisorExpression) and self.terms == other.terms

    def __repr__(self) -> str:
        bits = [f"{c}*{sym}" for sym, c in sorted(self.terms.items(), key=lambda t: _symbol_order(t[0]))]
        return " + ".join(bits) if bits else "0"

    def items(self):
        return self.terms.items()


# ---------------------------------------------------------------------------
# decorated strata
# ---------------------------------------------------------------------------

# a flag is (vertex, kind, ident): kind 0 = marking leg, kind 1 = branch
# towards the neighbouring vertex `ident`
Flag = tuple[int, int, int]


@dataclass(frozen=True)
class DecoratedStratum:
    """A stable dual tree with cotangent decorations, in canonical form."""

    n: int
    verts: tuple[int, ...]  # marking bitmask per vertex
    edges: tuple[tuple[int, int], ...]
    dec: tuple[tuple[Flag, int], ...]  # sorted, positive powers only

    @property
    def degree(self) -> int:
        return len(self.edges) + sum(p for _, p in self.dec)

    def marking_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(_unmask(m)) for m in self.verts)


class _Info:
    """Cached structural data for one stratum."""

    __slots__ = ("nbr", "far", "flags", "split_edge")

    def __init__(self, s: DecoratedStratum):
        nv = len(s.verts)
        nbr: list[list[int]] = [[] for _ in range(nv)]
        for u, v in s.edges:
            nbr[u].append(v)
            nbr[v].append(u)
        self.nbr = nbr
        far: dict[tuple[int, int], int] = {}

        def far_mask(a: int, b: int) -> int:
            # markings on the b-side of edge {a,b}
            if (a, b) not in far:
                m = s.verts[b]
                for c in nbr[b]:
                    if c != a:
                        m |= far_mask(b, c)
                far[(a, b)] = m
            return far[(a, b)]

        for u, v in s.edges:
            far_mask(u, v)
            far_mask(v, u)
        self.far = far
        flags: list[list[tuple[int, int, int]]] = []
        for v in range(nv):
            fl = [(0, i, 1 << (i - 1)) for i in _unmask(s.verts[v])]
            fl += [(1, w, far[(v, w)]) for w in sorted(nbr[v])]
            flags.append(fl)
        self.flags = flags
        full = (1 << s.n) - 1
        self.split_edge: dict[int, tuple[int, int]] = {}
        for u, v in s.edges:
            m = far[(u, v)]
            key = m if m & 1 else full ^ m
            self.split_edge[key] = (u, v)


_INFO: dict[DecoratedStratum, _Info] = {}


def _info(s: DecoratedStratum) -> _Info:
    info = _INFO.get(s)
    if info is None:
        info = _INFO[s] = _Info(s)
    return info


def _canonical(n: int, verts: Sequence[int], edges: Iterable[tuple[int, int]],
               dec: Mapping[Flag, int]) -> DecoratedStratum:
    """Renumber vertices deterministically: root at the vertex holding marking
    1, children ordered by the least marking beyond them."""
    nv = len(verts)
    if nv == 1:
        dd = tuple(sorted((f, p) for f, p in dec.items() if p))
        return DecoratedStratum(n, (verts[0],), (), dd)
    nbr: list[list[int]] = [[] for _ in range(nv)]
    for u, v in edges:
        nbr[u].append(v)
        nbr[v].append(u)
    root = next(j for j in range(nv) if verts[j] & 1)

    submin: dict[tuple[int, int], int] = {}

    def min_beyond(parent: int, child: int) -> int:
        key = (parent, child)
        got = submin.get(key)
        if got is None:
            best = (verts[child] & -verts[child]) if verts[child] else 1 << n
            for g in nbr[child]:
                if g != parent:
                    m = min_beyond(child, g)
                    if m < best:
                        best = m
            submin[key] = got = best
        return got

    order: list[int] = []
    stack: list[tuple[int, int]] = [(root, -1)]
    while stack:
        v, parent = stack.pop()
        order.append(v)
        kids = sorted((c for c in nbr[v] if c != parent),
                      key=lambda c: min_beyond(v, c), reverse=True)
        for c in kids:
            stack.append((c, v))
    perm = [0] * nv
    for new, old in enumerate(order):
        perm[old] = new
    new_verts = tuple(verts[old] for old in order)
    new_edges = tuple(sorted((perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])
                             for u, v in edges))
    new_dec = []
    for (v, kind, ident), p in dec.items():
        if p:
            new_dec.append(((perm[v], kind, perm[ident] if kind == 1 else ident), p))
    return DecoratedStratum(n, new_verts, new_edges, tuple(sorted(new_dec)))


@dataclass
class ChowElement:
    """Q-linear combination of decorated strata of one common degree."""

    n: int
    terms: dict[DecoratedStratum, Fraction]

    @property
    def degree(self) -> int:
        for s in self.terms:
            return s.degree
        return 0

    def __eq__(self, other) -> bool:
        return isinstance(other, ChowElement) and self.n == other.n and self.terms == other.terms


def unit(n: int) -> ChowElement:
    """The fundamental class: one smooth vertex, no decorations."""
    if n < 3:
        raise ValueError("need n >= 3")
    s = DecoratedStratum(n, ((1 << n) - 1,), (), ())
    return ChowElement(n, {s: Fraction(1)})


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------


def _bump(s: DecoratedStratum, flag: Flag) -> DecoratedStratum:
    d = dict(s.dec)
    d[flag] = d.get(flag, 0) + 1
    return DecoratedStratum(s.n, s.verts, s.edges, tuple(sorted(d.items())))


def _psi_target(s: DecoratedStratum, i: int) -> DecoratedStratum:
    bit = 1 << (i - 1)
    v = next(j for j, m in enumerate(s.verts) if m & bit)
    return _bump(s, (v, 0, i))


def _refine(s: DecoratedStratum, v: int, moved: Sequence[tuple[int, int, int]]) -> DecoratedStratum:
    """Split vertex ``v``: flags in ``moved`` migrate to a new vertex."""
    nv = len(s.verts)
    w = nv
    moved_marks = 0
    moved_nbrs = set()
    for kind, ident, mmask in moved:
        if kind == 0:
            moved_marks |= mmask
        else:
            moved_nbrs.add(ident)
    verts = list(s.verts)
    verts[v] &= ~moved_marks
    verts.append(moved_marks)
    edges = []
    for a, b in s.edges:
        if a == v and b in moved_nbrs:
            edges.append((w, b))
        elif b == v and a in moved_nbrs:
            edges.append((a, w))
        else:
            edges.append((a, b))
    edges.append((v, w))
    dec: dict[Flag, int] = {}
    for (a, kind, ident), p in s.dec:
        if a == v and kind == 0 and (1 << (ident - 1)) & moved_marks:
            dec[(w, 0, ident)] = p
        elif a == v and kind == 1 and ident in moved_nbrs:
            dec[(w, 1, ident)] = p
        elif kind == 1 and ident == v and a in moved_nbrs:
            dec[(a, 1, w)] = p
        else:
            dec[(a, kind, ident)] = p
    return _canonical(s.n, verts, edges, dec)


_PRODUCTS: dict[DecoratedStratum, dict[int, tuple[tuple[DecoratedStratum, int], ...]]] = {}


def _boundary_products(s: DecoratedStratum) -> dict[int, tuple[tuple[DecoratedStratum, int], ...]]:
    """All nonzero products of this stratum with boundary divisors.

    Keyed by the split mask (side containing marking 1); each value lists
    ``(stratum, +-1)`` output terms.  Splits not present as keys annihilate
    the stratum.
    """
    got = _PRODUCTS.get(s)
    if got is not None:
        return got
    info = _info(s)
    full = (1 << s.n) - 1
    out: dict[int, tuple[tuple[DecoratedStratum, int], ...]] = {}
    # excess terms: the split of an existing edge
    for key, (u, v) in info.split_edge.items():
        out[key] = ((_bump(s, (u, 1, v)), -1), (_bump(s, (v, 1, u)), -1))
    # refinements at each vertex
    for v, flags in enumerate(info.flags):
        f = len(flags)
        if f < 4:
            continue
        rest = flags[1:]
        nrest = f - 1
        for bits in range(1, 1 << nrest):
            size = bits.bit_count()
            if size < 2 or size > f - 2:
                continue
            moved = [rest[t] for t in range(nrest) if bits >> t & 1]
            mmask = 0
            for _, _, fm in moved:
                mmask |= fm
            key = mmask if mmask & 1 else full ^ mmask
            assert key not in out  # splits name refinements uniquely on a tree
            out[key] = ((_refine(s, v, moved), 1),)
    _PRODUCTS[s] = out
    return out


def multiply(elem: ChowElement, sym: DivisorSymbol) -> ChowElement:
    """Multiply a class by one divisor symbol; the degree rises by one."""
    if elem.degree >= elem.n - 3:
        raise DegreeOverflow(f"degree {elem.degree} is already top for n = {elem.n}")
    out: dict[DecoratedStratum, Fraction] = {}
    if isinstance(sym, Psi):
        for s, c in elem.terms.items():
            t = _psi_target(s, sym.i)
            out[t] = out.get(t, Fraction(0)) + c
    else:
        if sym.n != elem.n:
            raise ValueError("symbol and class live on different moduli spaces")
        for s, c in elem.terms.items():
            for t, sign in _boundary_products(s).get(sym.key, ()):
                out[t] = out.get(t, Fraction(0)) + sign * c
    return ChowElement(elem.n, {t: c for t, c in out.items() if c})


def integrate(elem: ChowElement) -> Fraction:
    """Degree of a top-dimensional class against the fundamental cycle."""
    if elem.degree != elem.n - 3 and elem.terms:
        raise WrongDegree(f"degree {elem.degree} != n - 3 = {elem.n - 3}")
    total = Fraction(0)
    for s, c in elem.terms.items():
        total += c * _stratum_integral(s)
    return total


def _stratum_integral(s: DecoratedStratum) -> int:
    info = _info(s)
    per_vertex = [0] * len(s.verts)
    denom = [1] * len(s.verts)
    for (v, _, _), p in s.dec:
        per_vertex[v] += p
        denom[v] *= factorial(p)
    val = 1
    for v, flags in enumerate(info.flags):
        if per_vertex[v] != len(flags) - 3:
            return 0
        val *= factorial(len(flags) - 3) // denom[v]
    return val


# ---------------------------------------------------------------------------
# products of divisor expressions
# ---------------------------------------------------------------------------


def _scaled_parts(n: int, expr: DivisorExpression) -> tuple[int, dict[int, int], dict[int, int]]:
    """Clear denominators: returns (denominator, psi numerators, boundary numerators)."""
    den = 1
    for c in expr.terms.values():
        den = lcm(den, c.denominator)
    psis: dict[int, int] = {}
    bnds: dict[int, int] = {}
    for sym, c in expr.terms.items():
        num = int(c * den)
        if isinstance(sym, Psi):
            psis[sym.i] = psis.get(sym.i, 0) + num
        else:
            if sym.n != n:
                raise ValueError("boundary symbol for the wrong n")
            bnds[sym.key] = bnds.get(sym.key, 0) + num
    return den, psis, bnds


class _Profile:
    """Per-stratum working data for the product fold (not cached)."""

    __slots__ = ("flags", "decsum", "denfac", "edge_keys")

    def __init__(self, s: DecoratedStratum):
        n = s.n
        nv = len(s.verts)
        nbr: list[list[int]] = [[] for _ in range(nv)]
        for u, v in s.edges:
            nbr[u].append(v)
            nbr[v].append(u)
        far: dict[tuple[int, int], int] = {}

        def far_mask(a: int, b: int) -> int:
            got = far.get((a, b))
            if got is None:
                got = s.verts[b]
                for c in nbr[b]:
                    if c != a:
                        got |= far_mask(b, c)
                far[(a, b)] = got
            return got

        full = (1 << n) - 1
        self.edge_keys = []
        for u, v in s.edges:
            m = far_mask(u, v)
            self.edge_keys.append((u, v, m if m & 1 else full ^ m))
            far_mask(v, u)
        self.flags = [
            [(0, i, 1 << (i - 1)) for i in _unmask(s.verts[v])]
            + [(1, w, far[(v, w)]) for w in sorted(nbr[v])]
            for v in range(nv)
        ]
        self.decsum = [0] * nv
        self.denfac = [1] * nv
        for (v, _, _), p in s.dec:
            self.decsum[v] += p
            self.denfac[v] *= factorial(p)


def _alive(s: DecoratedStratum) -> bool:
    """Capacity check: every vertex can still absorb its decorations.

    A vertex whose decoration sum exceeds ``#flags - 3`` integrates to zero
    against every continuation (decorations never shrink, and splitting a
    vertex only lowers the total slack), so such terms can be dropped inside
    a top-degree product.
    """
    nv = len(s.verts)
    flags = [bin(m).count("1") for m in s.verts]
    for u, v in s.edges:
        flags[u] += 1
        flags[v] += 1
    decsum = [0] * nv
    for (v, _, _), p in s.dec:
        decsum[v] += p
    return all(decsum[v] <= flags[v] - 3 for v in range(nv))


def _fold_step(
    n: int,
    state: dict[DecoratedStratum, int],
    psis: dict[int, int],
    bnds: dict[int, int],
) -> dict[DecoratedStratum, int]:
    """One multiplication step with dead-term pruning."""
    full = (1 << n) - 1
    nxt: dict[DecoratedStratum, int] = {}
    get = nxt.get
    for s, c in state.items():
        prof = _Profile(s)
        if bnds:
            for u, v, key in prof.edge_keys:
                q = bnds.get(key)
                if q:
                    cq = c * q
                    for end_a, end_b in ((u, v), (v, u)):
                        if prof.decsum[end_a] + 1 <= len(prof.flags[end_a]) - 3:
                            t = _bump(s, (end_a, 1, end_b))
                            nxt[t] = get(t, 0) - cq
            for v, flags in enumerate(prof.flags):
                f = len(flags)
                if f < 4:
                    continue
                rest = flags[1:]
                nrest = f - 1
                for bits in range(1, 1 << nrest):
                    size = bits.bit_count()
                    if size < 2 or size > f - 2:
                        continue
                    mmask = 0
                    for t_i in range(nrest):
                        if bits >> t_i & 1:
                            mmask |= rest[t_i][2]
                    key = mmask if mmask & 1 else full ^ mmask
                    q = bnds.get(key)
                    if q:
                        moved = [rest[t_i] for t_i in range(nrest) if bits >> t_i & 1]
                        t = _refine(s, v, moved)
                        if _alive(t):
                            nxt[t] = get(t, 0) + c * q
        for i, q in psis.items():
            bit = 1 << (i - 1)
            v = next(j for j, m in enumerate(s.verts) if m & bit)
            if prof.decsum[v] + 1 <= len(prof.flags[v]) - 3:
                t = _bump(s, (v, 0, i))
                nxt[t] = get(t, 0) + c * q
    return {t: c for t, c in nxt.items() if c}


def _pair_final(
    n: int,
    state: dict[DecoratedStratum, int],
    psis: dict[int, int],
    bnds: dict[int, int],
) -> int:
    """Pair a degree ``n - 4`` state with the last factor.

    At this depth every live stratum has exactly one vertex with one unit of
    slack; only symbols acting there contribute, and each contribution is a
    product of per-vertex multinomials evaluated in place (no new strata).
    """
    full = (1 << n) - 1
    total = 0
    for s, c in state.items():
        prof = _Profile(s)
        flags, decsum, denfac = prof.flags, prof.decsum, prof.denfac
        deficit = [len(fl) - 3 - d for fl, d in zip(flags, decsum)]
        star = next((v for v, d in enumerate(deficit) if d), None)
        if star is None or deficit[star] != 1 or any(
            d != 0 for v, d in enumerate(deficit) if v != star
        ):
            continue
        base = 1
        for v in range(len(flags)):
            if v != star:
                base *= factorial(len(flags[v]) - 3) // denfac[v]
        mstar = len(flags[star])
        dec_map = dict(s.dec)
        acc = 0
        if bnds:
            # excess at edges meeting the slack vertex
            for u, v, key in prof.edge_keys:
                q = bnds.get(key)
                if not q:
                    continue
                for end, other in ((u, v), (v, u)):
                    if end != star:
                        continue
                    p = dec_map.get((end, 1, other), 0)
                    val = factorial(mstar - 3) // (denfac[star] * (p + 1))
                    acc -= q * val
            # refinements at the slack vertex
            fl = flags[star]
            f = len(fl)
            if f >= 4:
                rest = fl[1:]
                nrest = f - 1
                powers = [dec_map.get((star, kind, ident), 0) for kind, ident, _ in fl]
                den_all = denfac[star]
                for bits in range(1, 1 << nrest):
                    size = bits.bit_count()
                    if size < 2 or size > f - 2:
                        continue
                    mmask = 0
                    dmoved = 0
                    den_moved = 1
                    for t_i in range(nrest):
                        if bits >> t_i & 1:
                            mmask |= rest[t_i][2]
                            p = powers[t_i + 1]
                            dmoved += p
                            den_moved *= factorial(p)
                    key = mmask if mmask & 1 else full ^ mmask
                    q = bnds.get(key)
                    if not q:
                        continue
                    m_moved = size + 1
                    m_keep = f - size + 1
                    d_keep = decsum[star] - dmoved
                    if dmoved != m_moved - 3 or d_keep != m_keep - 3:
                        continue
                    val = (factorial(m_moved - 3) // den_moved) * (
                        factorial(m_keep - 3) // (den_all // den_moved)
                    )
                    acc += q * val
        for i, q in psis.items():
            bit = 1 << (i - 1)
            if s.verts[star] & bit:
                p = dec_map.get((star, 0, i), 0)
                val = factorial(mstar - 3) // (denfac[star] * (p + 1))
                acc += q * val
        total += c * base * acc
    return total


def product_number(n: int, factors: Sequence[DivisorExpression]) -> Fraction:
    """Intersection number of ``n - 3`` divisor expressions.

    Expands linearly, folding one factor at a time over the fundamental class;
    the result does not depend on the factor order.  Boundary-only factors are
    folded first so that crossing splits annihilate terms early; the last
    factor is paired directly without materialising the top-degree layer.
    """
    if len(factors) != n - 3:
        raise WrongDegree(f"need exactly n - 3 = {n - 3} factors, got {len(factors)}")
    if n == 3:
        return Fraction(1)
    parts = [_scaled_parts(n, f) for f in factors]
    # boundary-only factors first: cheaper and prunes harder
    parts.sort(key=lambda t: bool(t[1]))
    den_total = 1
    for den, _, _ in parts:
        den_total *= den
    state: dict[DecoratedStratum, int] = {next(iter(unit(n).terms)): 1}
    for den, psis, bnds in parts[:-1]:
        state = _fold_step(n, state, psis, bnds)
        if not state:
            return Fraction(0)
    _, psis, bnds = parts[-1]
    total = _pair_final(n, state, psis, bnds)
    return Fraction(total, den_total)


# ---------------------------------------------------------------------------
# linear-equivalence helpers
# ---------------------------------------------------------------------------


def keel_relation(n: int, i: int, j: int, k: int, l: int) -> DivisorExpression:
    """The degree-0 class ``sum D(ij|kl) - sum D(ik|jl)``.

    Sums run over all splits with the named pairs on opposite sides; the
    expression pairs to zero against every complementary monomial.
    """
    if len({i, j, k, l}) != 4:
        raise ValueError("need four distinct markings")
    others = [m for m in range(1, n + 1) if m not in (i, j, k, l)]
    terms: dict[DivisorSymbol, Fraction] = {}

    def add(a: int, b: int, sign: int) -> None:
        # splits with a, b on one side and the other named pair opposite
        for size in range(len(others) + 1):
            for extra in itertools.combinations(others, size):
                sym = Boundary.of(n, frozenset((a, b) + extra))
                terms[sym] = terms.get(sym, Fraction(0)) + sign

    add(i, j, 1)
    add(i, k, -1)
    return DivisorExpression(terms)


def psi_boundary_expression(n: int, i: int, j: int, k: int) -> DivisorExpression:
    """Boundary representative of ``psi_i``: the sum of all divisors whose
    ``i``-side avoids ``j`` and ``k``."""
    if len({i, j, k}) != 3:
        raise ValueError("need three distinct markings")
    others = [m for m in range(1, n + 1) if m not in (i, j, k)]
    terms: dict[DivisorSymbol, Fraction] = {}
    for size in range(1, len(others) + 1):
        for extra in itertools.combinations(others, size):
            sym = Boundary.of(n, frozenset((i,) + extra))
            terms[sym] = terms.get(sym, Fraction(0)) + 1
    return DivisorExpression(terms)
