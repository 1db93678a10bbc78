"""The distinguished divisor, blow-up triviality, and volumes."""

import itertools
import random
from fractions import Fraction as F

import pytest

from strata0.divisors import (
    ExceptionalDivisorNontrivial,
    blowup_is_trivial,
    d_mu_boundary_form,
    d_mu_psi_form,
    volume,
)
from strata0.intersection import Boundary, DivisorExpression, Psi, keel_relation, product_number
from strata0.strata import validate_signature

SIG_QUAD4 = validate_signature(2, [-1, -1, -1, -1])
SIG_POLE6 = validate_signature(2, [-1, -1, -1, -1, -1, 1])
SIG_STAR7 = validate_signature(2, [2, -1, -1, -1, -1, -1, -1])
SIG_CUBIC6 = validate_signature(3, [-1] * 6)


class TestBoundaryForm:
    def test_quad4_coefficients(self):
        bf = d_mu_boundary_form(SIG_QUAD4)
        assert sorted(bf.terms.values()) == [F(1, 3)] * 3

    def test_cubic6_coefficient(self):
        # d/((n-2)(n-1)) * (|I0|-1) * (|I1|-1-(n-1) mu_S)
        #   = 3/20 * 1 * (3 - 5/3) = 1/5 for I0 = {1,2}
        bf = d_mu_boundary_form(SIG_CUBIC6)
        assert bf.terms[Boundary.of(6, {1, 2})] == F(1, 5)

    def test_balanced_coefficient_closed_form(self):
        # mu_S = 0 gives d (|I0|-1)(|I1|-1) / ((n-2)(n-1))
        for sig in (SIG_QUAD4, SIG_POLE6):
            n = sig.n
            w = sig.weights()
            bf = d_mu_boundary_form(sig)
            from strata0.strata import boundary_weight, enumerate_two_block

            for part in enumerate_two_block(sig):
                if boundary_weight(part, w) == 0:
                    expect = F(sig.d * (len(part.i0) - 1) * (len(part.i1) - 1), (n - 2) * (n - 1))
                    assert bf.terms.get(Boundary.from_partition(part), 0) == expect


class TestPsiForm:
    def test_quad4(self):
        pf = d_mu_psi_form(SIG_QUAD4)
        for i in range(1, 5):
            assert pf.terms[Psi(i)] == F(-1, 2)
        assert pf.terms[Boundary.of(4, {1, 2})] == 1

    def test_cubic6_psi_coefficients(self):
        pf = d_mu_psi_form(SIG_CUBIC6)
        for i in range(1, 7):
            assert pf.terms[Psi(i)] == F(-1, 2)

    @pytest.mark.parametrize("sig", [SIG_QUAD4, SIG_POLE6, SIG_CUBIC6],
                             ids=["quad4", "pole6", "cubic6"])
    def test_representation_equivalence_all_mixes(self, sig):
        n = sig.n
        bf, pf = d_mu_boundary_form(sig), d_mu_psi_form(sig)
        values = {
            product_number(n, list(mix))
            for mix in itertools.product([bf, pf], repeat=n - 3)
        }
        assert len(values) == 1

    def test_pairing_equality_against_monomials(self):
        # the two forms pair identically with every single-symbol complement
        n = 5
        sig = validate_signature(2, [-1, -1, -1, -1, 0])
        bf, pf = d_mu_boundary_form(sig), d_mu_psi_form(sig)
        syms = [Psi(i) for i in range(1, 6)]
        syms += [Boundary.of(5, {1, i}) for i in range(2, 6)]
        syms += [Boundary.of(5, {i, j}) for i, j in itertools.combinations(range(2, 6), 2)]
        for s in syms:
            comp = DivisorExpression({s: F(1)})
            assert product_number(n, [bf, comp]) == product_number(n, [pf, comp])


class TestKeelInvariance:
    def test_adding_keel_multiple_keeps_products(self):
        sig = SIG_CUBIC6
        n = sig.n
        bf = d_mu_boundary_form(sig)
        shifted = bf + F(5, 7) * keel_relation(n, 1, 2, 3, 4)
        assert product_number(n, [bf] * 3) == product_number(n, [shifted] * 3)
        assert product_number(n, [bf, bf, shifted]) == product_number(n, [bf] * 3)


class TestTriviality:
    @pytest.mark.parametrize(
        "sig,expected",
        [(SIG_POLE6, True), (SIG_STAR7, False), (SIG_QUAD4, True), (SIG_CUBIC6, True)],
        ids=["pole6", "star7", "quad4", "cubic6"],
    )
    def test_both_criteria_agree(self, sig, expected):
        assert blowup_is_trivial(sig) is expected
        assert blowup_is_trivial(sig, exhaustive=True) is expected

    def test_trivial_implies_zero_exceptional(self):
        from strata0.strata import exceptional_divisor

        rng = random.Random(23)
        for _ in range(30):
            d = rng.randint(2, 4)
            n = rng.randint(4, 6)
            kappa = [rng.randint(1 - d, d) for _ in range(n - 1)]
            last = -2 * d - sum(kappa)
            if last < 1 - d:
                continue
            sig = validate_signature(d, kappa + [last])
            if blowup_is_trivial(sig):
                assert exceptional_divisor(sig).is_zero()


class TestVolume:
    def test_quad4(self):
        res = volume(SIG_QUAD4)
        assert res.intersection_number == 1
        assert res.coefficient == F(-1, 4)
        assert res.pi_power == 2
        assert res.e_trivial

    def test_star7_raises(self):
        with pytest.raises(ExceptionalDivisorNontrivial):
            volume(SIG_STAR7)

    def test_cubic6_dual_representation(self):
        res = volume(SIG_CUBIC6)
        alt = product_number(6, [d_mu_psi_form(SIG_CUBIC6)] * 3)
        assert res.intersection_number == alt == 3
        # (-1)^3 / (3^3 * 4!) * 3
        assert res.coefficient == F(-1, 216)

    def test_cubic6_against_naive_trilinear_expansion(self):
        # expand the cube over all symbol triples through the incremental
        # multiply path; agrees with the folded product
        from strata0.intersection import integrate, multiply, unit

        bf = d_mu_boundary_form(SIG_CUBIC6)
        syms = list(bf.terms.items())
        total = F(0)
        for s1, c1 in syms:
            e1 = multiply(unit(6), s1)
            for s2, c2 in syms:
                e2 = multiply(e1, s2)
                if not e2.terms:
                    continue
                for s3, c3 in syms:
                    total += c1 * c2 * c3 * integrate(multiply(e2, s3))
        assert total == 3

    def test_divisible_order_warns(self):
        sig = validate_signature(2, [-1, -1, -1, -1, 0])
        res = volume(sig)
        assert any("divides" in w for w in res.warnings)

    def test_n4_closed_form_family(self):
        # on a projective line every boundary divisor has degree 1, so the
        # self-intersection is the plain sum of the boundary coefficients
        for d in range(2, 7):
            for kappa in itertools.product(range(1 - d, d - 2), repeat=4):
                if sum(kappa) != -2 * d:
                    continue
                sig = validate_signature(d, list(kappa))
                res = volume(sig)
                total = sum(d_mu_boundary_form(sig).terms.values())
                assert res.intersection_number == total

    def test_relabeling_invariance(self):
        rng = random.Random(31)
        for _ in range(20):
            d = rng.randint(2, 4)
            n = rng.randint(4, 6)
            kappa = [rng.randint(1 - d, d) for _ in range(n - 1)]
            last = -2 * d - sum(kappa)
            if last < 1 - d:
                continue
            sig = validate_signature(d, kappa + [last])
            sigma = list(range(1, n + 1))
            rng.shuffle(sigma)
            rsig = sig.relabeled(sigma)
            try:
                a = volume(sig)
            except ExceptionalDivisorNontrivial:
                with pytest.raises(ExceptionalDivisorNontrivial):
                    volume(rsig)
                continue
            b = volume(rsig)
            assert (a.coefficient, a.intersection_number) == (b.coefficient, b.intersection_number)
