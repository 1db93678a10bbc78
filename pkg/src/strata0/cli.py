"""Command-line interface.

Every subcommand takes the signature as ``--d`` and ``--kappa`` (a
comma-separated list of signed integers) and prints either a table (default)
or machine-readable JSON (``--json``).  Rationals are emitted as
``{"num": "...", "den": "..."}`` so nothing is lost to floating point;
partitions are arrays of arrays of 1-based markings with the light block
first.  Identical invocations produce byte-identical output.

Tree and chart specs share a mini-format: the first token lists the vertex
marking groups joined by ``;`` (``1,2;3,4;5,6``; an empty group is allowed),
the following tokens are edges ``j-k`` between 0-based vertex indices, and a
chart may pin node parameters with ``t[j-k]=p/q``.  Example:

    strata0 principal --d 2 --kappa=2,-1,-1,-1,-1,-1,-1 --tree "1;2,3,4;5,6,7 0-1 0-2"
    strata0 verify-family --d 2 --kappa=1,1,-1,-1,-1,-1,-1,-1 \\
        --chart "1,2;3,4,5;6,7,8 0-1 0-2 t[0-1]=1/3 t[0-2]=2/7" --samples 20

Exit codes: 0 success, 2 invalid input, 3 when the volume is requested but the
exceptional divisor is nontrivial, 4 when a family verification fails.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from strata0 import strata
from strata0.divisors import (
    ExceptionalDivisorNontrivial,
    blowup_is_trivial,
    d_mu_boundary_form,
    d_mu_psi_form,
    volume,
)
from strata0.intersection import Boundary, DivisorExpression, Psi, product_number
from strata0.local_family import (
    DEFAULT_SEED,
    DenominatorVanishes,
    PoleHit,
    build_chart,
    verify_ratio_identity,
)
from strata0.strata import (
    MultiBlockPartition,
    Signature,
    StableTree,
    StrataError,
    boundary_weight,
    enumerate_p_hat,
    enumerate_stable_trees,
    enumerate_two_block,
    exceptional_divisor,
    exponent_vector,
    fiber_projective_dim,
    ideal_generators,
    in_ideal_support,
    m_value,
    principal_subcurves,
    validate_signature,
    vanishing_orders,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EXCEPTIONAL = 3
EXIT_VERIFY_FAILED = 4


class SpecParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# spec parsing
# ---------------------------------------------------------------------------

_EDGE_RE = re.compile(r"^(\d+)-(\d+)$")
_PARAM_RE = re.compile(r"^t\[(\d+)-(\d+)\]=(-?\d+)(?:/(-?\d+))?$")


def parse_kappa(text: str) -> list[int]:
    out = []
    for pos, piece in _split_with_positions(text, ","):
        piece = piece.strip()
        if not re.fullmatch(r"-?\d+", piece):
            raise SpecParseError(f"bad integer {piece!r} in kappa", pos)
        out.append(int(piece))
    return out


def _split_with_positions(text: str, sep: str) -> list[tuple[int, str]]:
    out = []
    start = 0
    for piece in text.split(sep):
        out.append((start, piece))
        start += len(piece) + len(sep)
    return out


def parse_tree_spec(
    text: str,
) -> tuple[tuple[frozenset[int], ...], list[tuple[int, int]], dict[tuple[int, int], Fraction]]:
    """Parse a tree/chart spec into (marking groups, edges, node parameters)."""
    tokens = [(m.start(), m.group()) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise SpecParseError("empty tree spec", 0)
    gpos, gtok = tokens[0]
    groups: list[frozenset[int]] = []
    for pos, piece in _split_with_positions(gtok, ";"):
        piece = piece.strip()
        if not piece:
            groups.append(frozenset())
            continue
        marks = set()
        for mpos, m in _split_with_positions(piece, ","):
            if not re.fullmatch(r"\d+", m):
                raise SpecParseError(f"bad marking {m!r}", gpos + pos + mpos)
            marks.add(int(m))
        groups.append(frozenset(marks))
    edges: list[tuple[int, int]] = []
    params: dict[tuple[int, int], Fraction] = {}
    nv = len(groups)
    for pos, tok in tokens[1:]:
        em = _EDGE_RE.match(tok)
        pm = _PARAM_RE.match(tok)
        if em:
            u, v = int(em.group(1)), int(em.group(2))
        elif pm:
            u, v = int(pm.group(1)), int(pm.group(2))
            den = int(pm.group(4)) if pm.group(4) else 1
            if den == 0:
                raise SpecParseError("zero denominator in node parameter", pos)
            params[(u, v) if u < v else (v, u)] = Fraction(int(pm.group(3)), den)
            continue
        else:
            raise SpecParseError(f"expected 'j-k' or 't[j-k]=p/q', got {tok!r}", pos)
        if u == v or not (0 <= u < nv and 0 <= v < nv):
            raise SpecParseError(f"edge {tok!r} references a missing vertex", pos)
        edges.append((u, v) if u < v else (v, u))
    for (u, v) in params:
        if (u, v) not in edges:
            raise SpecParseError(f"parameter for non-edge {u}-{v}", 0)
    return tuple(groups), edges, params


_FACTOR_RE = re.compile(r"^(psi_(\d+)|D\{([\d,]+)\}|Dmu|Dmu_psi)$")


def _split_factor_list(text: str) -> list[tuple[int, str]]:
    """Split on commas outside braces (sides of ``D{...}`` keep their commas)."""
    out = []
    depth = 0
    start = 0
    for idx, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((start, text[start:idx]))
            start = idx + 1
    out.append((start, text[start:]))
    return out


def parse_factors(text: str, sig: Signature) -> list[DivisorExpression]:
    """Comma-separated product factors: ``psi_3``, ``D{1,2}``, ``Dmu``, ``Dmu_psi``."""
    out = []
    for pos, piece in _split_factor_list(text):
        piece = piece.strip()
        m = _FACTOR_RE.match(piece)
        if not m:
            raise SpecParseError(f"bad factor {piece!r}", pos)
        if m.group(2):
            i = int(m.group(2))
            if not 1 <= i <= sig.n:
                raise SpecParseError(f"psi index {i} out of range", pos)
            out.append(DivisorExpression({Psi(i): Fraction(1)}))
        elif m.group(3):
            side = {int(x) for x in m.group(3).split(",") if x}
            out.append(DivisorExpression({Boundary.of(sig.n, side): Fraction(1)}))
        elif piece == "Dmu":
            out.append(d_mu_boundary_form(sig))
        else:
            out.append(d_mu_psi_form(sig))
    return out


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------


def _rat(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _blocks(part: MultiBlockPartition | strata.TwoBlockPartition) -> list[list[int]]:
    if isinstance(part, strata.TwoBlockPartition):
        return [sorted(part.i0), sorted(part.i1)]
    return [sorted(b) for b in part.blocks]


def _symbol_json(sym, sig: Signature) -> dict:
    if isinstance(sym, Psi):
        return {"psi": sym.i}
    w = sig.weights()
    a, b = sym.sides()
    part = strata.TwoBlockPartition.from_blocks(a, b, w)
    return {"boundary": _blocks(part)}


def _expression_json(expr: DivisorExpression, sig: Signature) -> list[dict]:
    def order(item):
        sym, _ = item
        if isinstance(sym, Psi):
            return (0, sym.i, ())
        return (1, 0, tuple(sorted(sym.sides()[0])))

    return [
        {**_symbol_json(sym, sig), "coefficient": _rat(c)}
        for sym, c in sorted(expr.items(), key=order)
    ]


def _emit(payload: dict, args, table_lines: list[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.json:
        sys.stdout.write(text)
    else:
        sys.stdout.write("\n".join(table_lines) + "\n")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)


def _fmt_blocks(blocks: list[list[int]]) -> str:
    return " | ".join(",".join(map(str, b)) for b in blocks)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_boundary(sig: Signature, args) -> int:
    w = sig.weights()
    rows = []
    for part in enumerate_two_block(sig):
        rows.append({"blocks": _blocks(part), "mu_s": _rat(boundary_weight(part, w))})
    payload = {"command": "boundary", "d": sig.d, "kappa": list(sig.kappa), "n": sig.n,
               "count": len(rows), "partitions": rows}
    lines = [f"boundary divisors of the base (n = {sig.n}): {len(rows)}"]
    for row in rows:
        mu = Fraction(int(row["mu_s"]["num"]), int(row["mu_s"]["den"]))
        lines.append(f"  {_fmt_blocks(row['blocks']):<40} mu_S = {mu}")
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_phat(sig: Signature, args) -> int:
    rows = []
    for part in enumerate_p_hat(sig):
        rows.append({"blocks": _blocks(part), "r": part.r, "m": m_value(part, sig)})
    payload = {"command": "phat", "d": sig.d, "kappa": list(sig.kappa), "n": sig.n,
               "count": len(rows), "partitions": rows}
    lines = [f"boundary divisors of the blow-up: {len(rows)}"]
    for row in rows:
        lines.append(f"  r={row['r']}  {_fmt_blocks(row['blocks']):<40} m = {row['m']}")
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_exceptional(sig: Signature, args) -> int:
    exc = exceptional_divisor(sig)
    rows = []
    for part in sorted(exc.terms, key=MultiBlockPartition.sort_key):
        coeff = exc.terms[part]
        orders = None
        if part.r >= 2:
            od = vanishing_orders(part, sig)
            orders = [od[j] for j in range(1, part.r + 1)]
        rows.append({"blocks": _blocks(part), "coefficient": coeff, "orders": orders})
    payload = {"command": "exceptional", "d": sig.d, "kappa": list(sig.kappa),
               "n": sig.n, "trivial": exc.is_zero(), "terms": rows}
    lines = [f"exceptional Weil divisor ({'zero' if exc.is_zero() else 'nonzero'}):"]
    for row in rows:
        extra = f"  orders = {row['orders']}" if row["orders"] else ""
        lines.append(f"  {_fmt_blocks(row['blocks']):<40} coeff = {row['coefficient']}{extra}")
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_principal(sig: Signature, args) -> int:
    groups, edges, params = parse_tree_spec(args.tree)
    if params:
        raise SpecParseError("node parameters belong to charts, not trees", 0)
    tree = StableTree(groups, tuple(edges))
    if tree.n != sig.n:
        raise StrataError(f"tree carries {tree.n} markings but n = {sig.n}")
    w = sig.weights()
    principal, rest = principal_subcurves(tree, w)
    betas = [exponent_vector(tree, j, w) for j in range(tree.num_vertices)]
    gens = sorted(g.entries for g in ideal_generators(tree, w))
    payload = {
        "command": "principal",
        "d": sig.d,
        "kappa": list(sig.kappa),
        "tree": {"vertices": [sorted(m) for m in groups], "edges": [list(e) for e in tree.edges]},
        "principal_subcurves": [sorted(g) for g in principal],
        "non_principal_vertices": sorted(rest),
        "beta": [{"vertex": j, "exponents": [[list(e), p] for e, p in b.entries]}
                 for j, b in enumerate(betas)],
        "generators": [[[list(e), p] for e, p in g] for g in gens],
        "fiber_projective_dim": fiber_projective_dim(tree, w),
        "in_ideal_support": in_ideal_support(tree, w),
    }
    lines = [
        f"principal subcurves: {[sorted(g) for g in principal]}",
        f"non-principal vertices: {sorted(rest)}",
        f"in ideal support: {payload['in_ideal_support']}",
        f"fiber projective dimension: {payload['fiber_projective_dim']}",
    ]
    for j, b in enumerate(betas):
        lines.append(f"  beta_{j} = {dict(b.entries)}")
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_divisor(sig: Signature, args) -> int:
    bf = d_mu_boundary_form(sig)
    pf = d_mu_psi_form(sig)
    payload = {"command": "divisor", "d": sig.d, "kappa": list(sig.kappa),
               "boundary_form": _expression_json(bf, sig),
               "psi_form": _expression_json(pf, sig)}
    lines = ["distinguished divisor, boundary form:"]
    for row in payload["boundary_form"]:
        c = Fraction(int(row["coefficient"]["num"]), int(row["coefficient"]["den"]))
        lines.append(f"  {_fmt_blocks(row['boundary']):<40} {c}")
    lines.append("psi form:")
    for row in payload["psi_form"]:
        c = Fraction(int(row["coefficient"]["num"]), int(row["coefficient"]["den"]))
        name = f"psi_{row['psi']}" if "psi" in row else _fmt_blocks(row["boundary"])
        lines.append(f"  {name:<40} {c}")
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_intersect(sig: Signature, args) -> int:
    factors = parse_factors(args.factors, sig)
    value = product_number(sig.n, factors)
    payload = {"command": "intersect", "d": sig.d, "kappa": list(sig.kappa),
               "factors": args.factors, "value": _rat(value)}
    _emit(payload, args, [f"product = {value}"])
    return EXIT_OK


def _cmd_volume(sig: Signature, args) -> int:
    if args.max_codim is not None:
        depth = min(args.max_codim, sig.n - 3)
        w = sig.weights()
        tree_ok = all(
            not in_ideal_support(t, w) for t in enumerate_stable_trees(sig, depth)
        )
        if tree_ok != blowup_is_trivial(sig) and depth == sig.n - 3:
            raise StrataError("triviality criteria disagree; please report")
    res = volume(sig)
    payload = {
        "command": "volume",
        "d": sig.d,
        "kappa": list(sig.kappa),
        "coefficient": _rat(res.coefficient),
        "pi_power": res.pi_power,
        "intersection_number": _rat(res.intersection_number),
        "signed_decimal": res.signed_decimal(),
        "abs_decimal": res.abs_decimal(),
        "e_trivial": res.e_trivial,
        "warnings": res.warnings,
    }
    lines = [
        f"top self-intersection: {res.intersection_number}",
        f"volume = {res.coefficient} * pi^{res.pi_power}",
        f"       = {res.signed_decimal()}  (|.| = {res.abs_decimal()})",
    ] + [f"note: {wng}" for wng in res.warnings]
    _emit(payload, args, lines)
    return EXIT_OK


def _cmd_verify_family(sig: Signature, args) -> int:
    groups, edges, params = parse_tree_spec(args.chart)
    tree = StableTree(groups, tuple(edges))
    if tree.n != sig.n:
        raise StrataError(f"chart carries {tree.n} markings but n = {sig.n}")
    seed = DEFAULT_SEED if args.seed is None else args.seed
    chart = build_chart(sig, tree, params or None, seed=seed)
    if any(t == 0 for t in chart.node_params.values()):
        raise StrataError("family verification needs nonzero node parameters")
    pairs = []
    all_ok = True
    for u, v in tree.edges:
        try:
            ok = verify_ratio_identity(chart, u, v, samples=args.samples, seed=seed)
        except (PoleHit, DenominatorVanishes) as exc:
            pairs.append({"j": u, "k": v, "ok": False, "error": str(exc)})
            all_ok = False
            continue
        pairs.append({"j": u, "k": v, "ok": ok})
        all_ok = all_ok and ok
    payload = {
        "command": "verify-family",
        "d": sig.d,
        "kappa": list(sig.kappa),
        "chart": args.chart,
        "seed": seed,
        "samples": args.samples,
        "node_params": {f"{u}-{v}": _rat(t) for (u, v), t in sorted(chart.node_params.items())},
        "pairs": pairs,
        "all_ok": all_ok,
    }
    lines = [f"seed = {seed}, samples per pair = {args.samples}"]
    for p in pairs:
        lines.append(f"  sections at vertices {p['j']},{p['k']}: {'ok' if p['ok'] else 'FAILED'}")
    lines.append("family verification " + ("passed" if all_ok else "FAILED"))
    _emit(payload, args, lines)
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


_TREE_HELP = (
    "Tree/chart mini-format: '1,2;3,4;5,6 0-1 1-2 t[0-1]=1/3'.  The first "
    "token lists the vertex marking groups joined by ';' (an empty group is "
    "an unmarked component); the remaining tokens are edges 'j-k' between "
    "0-based vertex indices and, for charts, node parameters 't[j-k]=p/q'."
)
_FACTOR_HELP = (
    "Factors are comma separated: 'psi_i' (cotangent class), 'D{...}' (one "
    "side of a two-block split), 'Dmu' (boundary representation of the "
    "distinguished divisor), 'Dmu_psi' (its psi representation)."
)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="strata0",
        description="Exact boundary combinatorics, intersection numbers and "
        "volumes for genus-0 strata of d-differentials.",
        epilog=_TREE_HELP + "  " + _FACTOR_HELP,
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--d", type=int, required=True, help="level d >= 2")
        p.add_argument("--kappa", type=str, required=True,
                       help="comma-separated zero/pole orders summing to -2d")
        p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
        p.add_argument("--out", type=str, default=None, help="also write the JSON to a file")

    p = sub.add_parser("boundary", help="list the boundary partitions with their weights")
    common(p)
    p.set_defaults(func=_cmd_boundary)

    p = sub.add_parser("phat", help="list the boundary partitions of the blow-up with m(S)")
    common(p)
    p.set_defaults(func=_cmd_phat)

    p = sub.add_parser("exceptional", help="exceptional Weil coefficients and vanishing orders")
    common(p)
    p.set_defaults(func=_cmd_exceptional)

    p = sub.add_parser("principal", help="principal subcurves and ideal data of one tree",
                       epilog=_TREE_HELP)
    common(p)
    p.add_argument("--tree", type=str, required=True, help="tree spec (see below)")
    p.set_defaults(func=_cmd_principal)

    p = sub.add_parser("divisor", help="the distinguished divisor in both representations")
    common(p)
    p.set_defaults(func=_cmd_divisor)

    p = sub.add_parser("intersect", help="top intersection number of n-3 factors",
                       epilog=_FACTOR_HELP)
    common(p)
    p.add_argument("--factors", type=str, required=True,
                   help="comma-separated factors: psi_i, D{...}, Dmu, Dmu_psi")
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("volume", help="volume of the projectivized stratum")
    common(p)
    p.add_argument("--max-codim", type=int, default=None,
                   help="also cross-check triviality on all trees up to this codimension")
    p.set_defaults(func=_cmd_volume)

    p = sub.add_parser("verify-family", help="verify the local family section identities",
                       epilog=_TREE_HELP)
    common(p)
    p.add_argument("--chart", type=str, required=True, help="chart spec (see below)")
    p.add_argument("--samples", type=int, default=20, help="sample points per identity")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default fixed)")
    p.set_defaults(func=_cmd_verify_family)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        sig = validate_signature(args.d, parse_kappa(args.kappa))
        if getattr(args, "samples", 1) < 1:
            raise StrataError("--samples must be >= 1")
        return args.func(sig, args)
    except ExceptionalDivisorNontrivial as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXCEPTIONAL
    except (StrataError, SpecParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PoleHit, DenominatorVanishes) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
