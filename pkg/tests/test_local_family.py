"""Exact checks of the local universal-curve model: section propagation,
candidate differentials, ratio constants and the codimension-2 trichotomy."""

import random
from fractions import Fraction as F

import pytest

from strata0.local_family import (
    INF,
    BadBlocks,
    DenominatorVanishes,
    PoleHit,
    LocalChart,
    beta_monomial,
    build_chart,
    build_codim2_chart,
    classify_codim2_case,
    evaluate_phi,
    make_sampler,
    marked_point_coords,
    ratio_constant,
    sample_curve_point,
    section_in_frame,
    verify_ratio_identity,
)
from strata0.strata import NoSuchEdge, StableTree, StrataError, validate_signature

SIG_C = validate_signature(2, [1, 1, -1, -1, -1, -1, -1, -1])
BLOCKS_C = [{1, 2}, {3, 4, 5}, {6, 7, 8}]
SIG_A = validate_signature(2, [-1, -1, -1, -1, -1, -1, 1, 1])
BLOCKS_A = [{1, 2, 3}, {5, 6, 7}, {4, 8}]
BLOCKS_B = [{1, 6, 7}, {3, 4, 5}, {2, 8}]


class TestChartValidation:
    def test_duplicate_coordinates_rejected(self):
        tree = StableTree((frozenset({1, 2, 3}), frozenset({4, 5, 6})), ((0, 1),))
        sig = validate_signature(2, [-1, -1, -1, -1, -1, 1])
        with pytest.raises(StrataError):
            LocalChart(
                sig,
                tree,
                {(0, 1): F(1, 2)},
                {0: {1: F(0), 2: F(1), 3: F(1)}, 1: {4: F(2), 5: F(3), 6: F(4)}},
                {0: {1: F(5)}, 1: {0: F(6)}},
            )

    def test_missing_node_param_rejected(self):
        tree = StableTree((frozenset({1, 2, 3}), frozenset({4, 5, 6})), ((0, 1),))
        sig = validate_signature(2, [-1, -1, -1, -1, -1, 1])
        with pytest.raises(StrataError):
            LocalChart(sig, tree, {}, {0: {1: F(0), 2: F(1), 3: F(2)},
                                       1: {4: F(0), 5: F(1), 6: F(2)}},
                       {0: {1: F(5)}, 1: {0: F(6)}})

    def test_builder_produces_valid_pinned_chart(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=2)
        assert chart.node_coords[0] == {1: F(0), 2: F(1)}
        assert chart.node_coords[1][0] == 0 and chart.node_coords[2][0] == 0
        # one marking at infinity per outer component
        assert chart.mark_coords[1][5] is INF and chart.mark_coords[1][4] == 1
        assert chart.mark_coords[2][8] is INF and chart.mark_coords[2][7] == 1


class TestMarkedPointCoords:
    def test_chain_closed_forms(self):
        t1, t2 = F(3, 7), F(5, 11)
        chart = build_codim2_chart(SIG_C, BLOCKS_C, t1=t1, t2=t2, seed=1)
        for i in (1, 2):
            x = chart.mark_coords[0][i]
            expect = (INF, F(0), F(0)) if x is INF else (x, t1 / x, t2 / (x - 1))
            assert marked_point_coords(chart, i) == expect
        for i in (3, 4, 5):
            y = chart.mark_coords[1][i]
            if y is not INF:
                assert marked_point_coords(chart, i) == (t1 / y, y, t2 * y / (t1 - y))
        for i in (6, 7, 8):
            z = chart.mark_coords[2][i]
            if z is not INF:
                assert marked_point_coords(chart, i) == ((t2 + z) / z, t1 * z / (t2 + z), z)

    def test_infinity_lands_on_nodes(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, t1=F(3, 7), t2=F(5, 11), seed=1)
        # the infinity marking of the first outer component projects to the
        # node coordinate on the center and onward
        assert marked_point_coords(chart, 5)[0] == chart.node_coords[0][1]

    def test_pinched_fiber_collapse(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, t1=0, t2=0, seed=4)
        for i in (1, 2):
            coords = marked_point_coords(chart, i)
            assert coords[1] == chart.node_coords[1][0]
            assert coords[2] == chart.node_coords[2][0]

    def test_curve_equations_hold(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=6)
        for i in range(1, 9):
            c = marked_point_coords(chart, i)
            for (u, v) in chart.tree.edges:
                zu, zv = c[u], c[v]
                bu, bv = chart.node_coords[u][v], chart.node_coords[v][u]
                if zu is INF or zv is INF:
                    continue
                assert (zu - bu) * (zv - bv) == chart.t(u, v)


class TestSamplingAndPhi:
    def test_sampled_points_satisfy_equations(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=8)
        rng = make_sampler(12)
        for _ in range(5):
            z = sample_curve_point(chart, rng)
            for (u, v) in chart.tree.edges:
                bu, bv = chart.node_coords[u][v], chart.node_coords[v][u]
                assert (z[u] - bu) * (z[v] - bv) == chart.t(u, v)

    def test_phi_is_direct_product(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=8, pin=False)
        rng = make_sampler(13)
        z = sample_curve_point(chart, rng)
        val = evaluate_phi(chart, 0, z).value
        direct = F(1)
        for i in range(1, 9):
            a = marked_point_coords(chart, i)[0]
            direct *= (z[0] - a) ** SIG_C.kappa[i - 1]
        assert val == direct

    def test_pole_hit(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=8, pin=False)
        a = marked_point_coords(chart, 1)[0]
        point = (a, F(123), F(456))
        with pytest.raises(PoleHit):
            evaluate_phi(chart, 0, point)

    def test_decay_at_infinity_by_substitution(self):
        # a smooth chart with all markings finite: substituting z = 1/w gives
        # phi(1/w) (-1/w^2)^d = (-1)^d prod (1 - a_i w)^{k_i}, which is finite
        # and nonzero at w = 0 exactly because the orders sum to -2d
        sig = validate_signature(2, [-1, -1, -1, -1])
        tree = StableTree((frozenset({1, 2, 3, 4}),), ())
        chart = build_chart(sig, tree, seed=3, pin=False)
        a = [marked_point_coords(chart, i)[0] for i in range(1, 5)]
        d = sig.d
        rng = make_sampler(5)
        for _ in range(5):
            w = rng.randint(1, 10 ** 6)
            w = F(1, w)
            z = 1 / w
            lhs = evaluate_phi(chart, 0, (z,)).value * (-1 / w ** 2) ** d
            rhs = (-1) ** d
            for i, ai in enumerate(a, start=1):
                rhs *= (1 - ai * w) ** sig.kappa[i - 1]
            assert lhs == rhs
        # the w -> 0 limit of the right-hand side
        assert (-1) ** d == 1


class TestRatioConstant:
    def test_reciprocity(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=9)
        for j, k in ((0, 1), (0, 2), (1, 2)):
            assert ratio_constant(chart, j, k) * ratio_constant(chart, k, j) == 1

    def test_identity_for_same_vertex(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=9)
        assert ratio_constant(chart, 1, 1) == 1

    def test_closed_form_matches_sampled_ratio(self):
        for sig, blocks in [(SIG_C, BLOCKS_C), (SIG_A, BLOCKS_A), (SIG_C, BLOCKS_B)]:
            chart = build_codim2_chart(sig, blocks, seed=10)
            rng = make_sampler(11)
            z = sample_curve_point(chart, rng)
            for j, k in ((0, 1), (1, 0), (0, 2), (1, 2)):
                f = ratio_constant(chart, j, k)
                lhs = section_in_frame(chart, j, z, k)
                rhs = f * section_in_frame(chart, k, z, k)
                assert lhs == rhs, (blocks, j, k)

    def test_case_a_displayed_ratio(self):
        # on a finite chart with nodes at the chain positions (0 and 1 on the
        # center, 0 on the outer components):
        # t^{b1} Phi1 / Phi0 = (-1)^d prod_{I1} y_i^{k_i} / prod_{I0} x_i^{k_i}
        #                      * prod_{I2} (z_i / (t2 + z_i))^{k_i}
        sig, blocks = SIG_A, BLOCKS_A
        d = sig.d
        i0, i1, i2 = (sorted(b) for b in blocks)
        chart = _chain_chart_finite(sig, blocks, seed=15)
        t1, t2 = chart.t(0, 1), chart.t(0, 2)
        xs = {i: chart.mark_coords[0][i] for i in i0}
        ys = {i: chart.mark_coords[1][i] for i in i1}
        zs = {i: chart.mark_coords[2][i] for i in i2}
        expect = F((-1) ** d)
        for i in i1:
            expect *= ys[i] ** sig.kappa[i - 1]
        for i in i0:
            expect /= xs[i] ** sig.kappa[i - 1]
        for i in i2:
            expect *= (zs[i] / (t2 + zs[i])) ** sig.kappa[i - 1]
        assert ratio_constant(chart, 1, 0) == expect

    def test_no_such_edge(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=9)
        from strata0.local_family import _adjacent_ratio_constant

        with pytest.raises(NoSuchEdge):
            _adjacent_ratio_constant(chart, 1, 2)

    def test_balanced_split_closed_form_vs_sampled(self):
        # even d, balanced two-block split: both orientations of the constant
        # agree with the sampled section ratio
        sig = validate_signature(2, [-1, -1, -1, -1])
        tree = StableTree((frozenset({1, 2}), frozenset({3, 4})), ((0, 1),))
        chart = build_chart(sig, tree, seed=33)
        rng = make_sampler(34)
        z = sample_curve_point(chart, rng)
        for j, k in ((0, 1), (1, 0)):
            f = ratio_constant(chart, j, k)
            assert section_in_frame(chart, j, z, k) == f * section_in_frame(chart, k, z, k)
        assert verify_ratio_identity(chart, 0, 1, samples=5)


def _chain_chart_finite(sig, blocks, seed):
    """Chain chart with nodes at (0, 1), (0), (0) and random finite markings."""
    i0, i1, i2 = (frozenset(b) for b in blocks)
    tree = StableTree((i0, i1, i2), ((0, 1), (0, 2)))
    rng = make_sampler(seed)
    taken = {F(0), F(1)}

    def fresh():
        while True:
            v = F(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
            if v not in taken:
                taken.add(v)
                return v

    t1 = fresh()
    t2 = fresh()
    return LocalChart(
        sig,
        tree,
        {(0, 1): t1, (0, 2): t2},
        {0: {i: fresh() for i in sorted(i0)},
         1: {i: fresh() for i in sorted(i1)},
         2: {i: fresh() for i in sorted(i2)}},
        {0: {1: F(0), 2: F(1)}, 1: {0: F(0)}, 2: {0: F(0)}},
        seed=seed,
    )


class TestVerifyRatioIdentity:
    @pytest.mark.parametrize(
        "sig,blocks",
        [(SIG_A, BLOCKS_A), (SIG_C, BLOCKS_B), (SIG_C, BLOCKS_C)],
        ids=["case-a", "case-b", "case-c"],
    )
    def test_all_pairs(self, sig, blocks):
        chart = build_codim2_chart(sig, blocks, seed=21)
        for j in range(3):
            for k in range(3):
                assert verify_ratio_identity(chart, j, k, samples=4)

    def test_trivial_pair(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=21)
        assert verify_ratio_identity(chart, 2, 2, samples=1)

    def test_smooth_fiber_required(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, t1=0, seed=21)
        with pytest.raises(DenominatorVanishes):
            verify_ratio_identity(chart, 0, 1, samples=1)

    def test_detects_wrong_constant(self):
        # damaging the candidate ratio must fail the sampled comparison
        chart = build_codim2_chart(SIG_C, BLOCKS_C, seed=22)
        rng = make_sampler(23)
        z = sample_curve_point(chart, rng)
        f = ratio_constant(chart, 0, 1)
        lhs = section_in_frame(chart, 0, z, 1)
        rhs = section_in_frame(chart, 1, z, 1)
        assert lhs == f * rhs
        assert lhs != (f + 1) * rhs

    def test_path_independence_of_ratios(self):
        # a 4-component chain: the composite constants multiply along paths
        sig = validate_signature(2, [1, 1, -1, -1, -1, -1, -1, -1, -1, -1, 1, 1])
        tree = StableTree(
            (
                frozenset({1, 2}),
                frozenset({3, 4, 5}),
                frozenset({6, 7}),
                frozenset({8, 9, 10, 11, 12}),
            ),
            ((0, 1), (1, 2), (2, 3)),
        )
        chart = build_chart(sig, tree, seed=25)
        f03 = ratio_constant(chart, 0, 3)
        assert f03 == (
            ratio_constant(chart, 0, 1)
            * ratio_constant(chart, 1, 2)
            * ratio_constant(chart, 2, 3)
        )
        assert verify_ratio_identity(chart, 0, 3, samples=3)


class TestDegeneration:
    def test_single_node_pinched_slice(self):
        # with one parameter set to zero, the rescaled section of a component
        # whose monomial avoids that node stays finite and nonzero on it
        from strata0.strata import exponent_vector

        sig, blocks = SIG_C, BLOCKS_C
        w = sig.weights()
        for pinched_edge, kwargs in (((0, 1), {"t1": 0}), ((0, 2), {"t2": 0})):
            chart = build_codim2_chart(sig, blocks, seed=27, **kwargs)
            hit = 0
            for j in range(3):
                beta = exponent_vector(chart.tree, j, w).as_dict()
                if beta[pinched_edge] == 0:
                    rng = make_sampler(31)
                    pt = sample_curve_point(chart, rng, base=j, check_vertices=[j])
                    val = beta_monomial(chart, j) * evaluate_phi(chart, j, pt).value
                    assert val != 0
                    hit += 1
            assert hit >= 1

    def test_case_c_everything_vanishes_on_pinched_fiber(self):
        chart = build_codim2_chart(SIG_C, BLOCKS_C, t1=0, t2=0, seed=28)
        for m in range(3):
            assert beta_monomial(chart, m) == 0
            rng = make_sampler(29)
            pt = sample_curve_point(chart, rng, base=m, check_vertices=[m])
            assert evaluate_phi(chart, m, pt).value != 0
        for j, k in ((0, 1), (0, 2)):
            assert ratio_constant(chart, j, k) != 0


class TestClassification:
    def test_trichotomy_examples(self):
        # d=2: block order sums -3,-3 -> nu = (1,1): case c
        sig = validate_signature(2, [1, 1, -1, -1, -1, -1, -1, -1])
        assert classify_codim2_case(sig, [{1, 2}, {3, 4, 5}, {6, 7, 8}]) == "c"
        # sums -1, -1 -> nu = (-1,-1): case a
        siga = validate_signature(2, [-1, -1, -1, -1, -1, -1, 1, 1])
        assert classify_codim2_case(siga, [{1, 2, 3}, {5, 6, 7}, {4, 8}]) == "a"
        # mixed: case b
        assert classify_codim2_case(sig, [{1, 6, 7}, {3, 4, 5}, {2, 8}]) == "b"

    def test_tie_goes_to_a(self):
        # nu1 = nu2 = 0
        sig = validate_signature(2, [-1, -1, -1, -1, -1, 1])
        posed = [{5, 6}, {1, 2}, {3, 4}]
        d, kap = sig.d, sig.kappa
        nu1 = -d - sum(kap[i - 1] for i in posed[1])
        nu2 = -d - sum(kap[i - 1] for i in posed[2])
        assert (nu1, nu2) == (0, 0)
        assert classify_codim2_case(sig, posed) == "a"

    def test_bad_blocks(self):
        sig = validate_signature(2, [1, 1, -1, -1, -1, -1, -1, -1])
        with pytest.raises(BadBlocks):
            classify_codim2_case(sig, [{1}, {2}, {3, 4, 5, 6, 7, 8}])
        with pytest.raises(BadBlocks):
            classify_codim2_case(sig, [{1, 2}, {3, 4, 5}, {6, 7}])
        with pytest.raises(BadBlocks):
            classify_codim2_case(sig, [{1, 2}, {3, 4, 5}])
