"""The distinguished divisor of a signature, in both of its representations,
and the volume of the projectivized stratum.

For a signature with weights ``mu`` the class of interest can be written
purely in boundary divisors,

    (d / ((n-2)(n-1))) * sum_S (|I0|-1) (|I1|-1-(n-1) mu_S) D_S,

or, equivalently up to linear equivalence, with psi classes,

    (d/2) (sum_i -mu_i psi_i + sum_S (1 - mu_S) D_S).

When the exceptional divisor of the blow-up has vanishing Weil coefficients
the top self-intersection can be computed downstairs, and the volume of the
projectivized stratum is the rational multiple

    (-1)^(n-3) / (d^(n-3) (n-2)!) * (top self-intersection)

of ``pi^(n-2)``.  The sign of this normalization is reported verbatim along
with its absolute value; no sign convention is imposed on the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from strata0.intersection import Boundary, DivisorExpression, Psi, product_number
from strata0.strata import (
    Signature,
    boundary_weight,
    enumerate_p_hat,
    enumerate_stable_trees,
    enumerate_two_block,
    exceptional_divisor,
    in_ideal_support,
)

__all__ = [
    "ExceptionalDivisorNontrivial",
    "VolumeResult",
    "d_mu_boundary_form",
    "d_mu_psi_form",
    "blowup_is_trivial",
    "volume",
]


class ExceptionalDivisorNontrivial(ValueError):
    """The exceptional divisor carries a nonzero Weil coefficient, so the top
    self-intersection lives on the blow-up and is not computed here."""

    def __init__(self, terms):
        self.terms = terms
        shown = ", ".join(
            "{" + " | ".join(",".join(map(str, sorted(b))) for b in p.blocks) + f"}} -> {c}"
            for p, c in list(terms.items())[:3]
        )
        super().__init__(f"nonzero exceptional coefficients: {shown}")


def d_mu_boundary_form(sig: Signature) -> DivisorExpression:
    """Boundary-divisor representation of the distinguished class."""
    n = sig.n
    w = sig.weights()
    lead = Fraction(sig.d, (n - 2) * (n - 1))
    terms = {}
    for part in enumerate_two_block(sig):
        mu_s = boundary_weight(part, w)
        c = lead * (len(part.i0) - 1) * (len(part.i1) - 1 - (n - 1) * mu_s)
        if c:
            terms[Boundary.from_partition(part)] = c
    return DivisorExpression(terms)


def d_mu_psi_form(sig: Signature) -> DivisorExpression:
    """Psi-and-boundary representation, linearly equivalent to the boundary form."""
    w = sig.weights()
    half_d = Fraction(sig.d, 2)
    terms: dict = {}
    for i in range(1, sig.n + 1):
        c = -half_d * w.of(i)
        if c:
            terms[Psi(i)] = c
    for part in enumerate_two_block(sig):
        c = half_d * (1 - boundary_weight(part, w))
        if c:
            sym = Boundary.from_partition(part)
            terms[sym] = terms.get(sym, Fraction(0)) + c
    return DivisorExpression(terms)


def blowup_is_trivial(sig: Signature, exhaustive: bool = False) -> bool:
    """True when the blow-up changes nothing.

    Default criterion: the boundary index set has no multi-block element (so
    the exceptional Weil coefficients all vanish).  With ``exhaustive=True``
    the stratum-by-stratum criterion is used instead: every stable tree, in
    every codimension, must have a unique principal subcurve.  The two agree;
    the slow mode exists as a cross-check.
    """
    if exhaustive:
        w = sig.weights()
        for tree in enumerate_stable_trees(sig, sig.n - 3):
            if in_ideal_support(tree, w):
                return False
        return True
    return all(p.r == 1 for p in enumerate_p_hat(sig))


@dataclass
class VolumeResult:
    """Exact volume data: ``coefficient * pi**pi_power``.

    ``intersection_number`` is the top self-intersection of the distinguished
    divisor; ``coefficient`` folds in the sign and normalization constants.
    """

    coefficient: Fraction
    pi_power: int
    intersection_number: Fraction
    e_trivial: bool
    warnings: list[str] = field(default_factory=list)

    def signed_decimal(self, digits: int = 12) -> str:
        return f"{float(self.coefficient) * math.pi ** self.pi_power:.{digits}g}"

    def abs_decimal(self, digits: int = 12) -> str:
        return f"{abs(float(self.coefficient)) * math.pi ** self.pi_power:.{digits}g}"


def volume(sig: Signature) -> VolumeResult:
    """Volume of the projectivized stratum as an exact multiple of ``pi^(n-2)``.

    Raises :class:`ExceptionalDivisorNontrivial` when some exceptional Weil
    coefficient is positive; warns (but proceeds) when ``d`` divides one of
    the ``k_i``, where the closed formula is stated under the contrary
    hypothesis.
    """
    n = sig.n
    exc = exceptional_divisor(sig)
    nonzero = exc.nonzero()
    if nonzero:
        raise ExceptionalDivisorNontrivial(nonzero)
    warnings = []
    divisible = [i for i, k in enumerate(sig.kappa, start=1) if k % sig.d == 0]
    if divisible:
        warnings.append(
            "d divides k_i for i in "
            + ",".join(map(str, divisible))
            + "; the volume normalization is only stated for nondivisible orders"
        )
    warnings.append(
        "all exceptional Weil coefficients vanish; the self-intersection is "
        "computed on the base via the projection formula"
    )
    expr = d_mu_boundary_form(sig)
    inter = product_number(n, [expr] * (n - 3))
    coeff = Fraction((-1) ** (n - 3), sig.d ** (n - 3) * math.factorial(n - 2)) * inter
    return VolumeResult(
        coefficient=coeff,
        pi_power=n - 2,
        intersection_number=inter,
        e_trivial=True,
        warnings=warnings,
    )
