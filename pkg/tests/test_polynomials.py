"""Polynomial invariants: golden values, specialisations, oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from ribbontensor.arrow import ArrowPresentation, boundary_components
from ribbontensor.errors import SizeLimitExceeded
from ribbontensor.packaged import (
    PackagedPresentation,
    Partition,
    k_presentations,
    make_packaged,
)
from ribbontensor.poly import MultiPoly, VarRegistry, parse_poly, standard_registry
from ribbontensor.polynomials import (
    Multigraph,
    WeightSystem,
    br_poly,
    graph_of_presentation,
    mv_br_poly,
    q_multivariate,
    q_poly,
    q_state_table,
    q_table_value,
    q_value,
    qhat_poly,
    state_sum_oracle,
    transition_poly,
    tutte_poly,
    z_poly,
    zdot_tutte,
    zhat_poly,
)
from ribbontensor.randgen import random_blocks, random_packaged, random_presentation

REG = standard_registry()
K1, K2, K3, K4, K5 = k_presentations()


def P(text, registry=REG):
    return parse_poly(text, registry)


# ---- the one-edge golden values (the transfer-matrix columns) -------------

K_COLUMNS = {
    # weight name -> factor, for each basis presentation
    1: "a*alpha^2*beta^2*gamma + b*alpha*beta*gamma + c*alpha*beta*gamma"
       " + x*alpha^2*beta*gamma + y*alpha*beta*gamma",
    2: "a*alpha*beta*gamma + b*alpha^2*beta*gamma^2 + c*alpha*beta*gamma"
       " + x*alpha*beta*gamma + y*alpha^2*beta*gamma",
    3: "a*alpha*beta*gamma + b*alpha*beta*gamma + c*alpha^2*beta*gamma"
       " + x*alpha*beta*gamma + y*alpha*beta*gamma",
    4: "a*alpha^2*beta*gamma + b*alpha*beta*gamma + c*alpha*beta*gamma"
       " + x*alpha^2*beta*gamma + y*alpha*beta*gamma",
    5: "a*alpha*beta*gamma + b*alpha^2*beta*gamma + c*alpha*beta*gamma"
       " + x*alpha*beta*gamma + y*alpha^2*beta*gamma",
}


def test_q_on_basis_presentations():
    for i, k in enumerate((K1, K2, K3, K4, K5), 1):
        assert q_poly(k) == P(K_COLUMNS[i]), f"K{i}"


def test_q_base_case():
    pg = make_packaged(
        ArrowPresentation.from_circles([[], []]), bblocks=[[0, 1]]
    )
    assert q_poly(pg) == P("alpha^2*beta^2*gamma")


def test_q_zero_weights_vanish():
    w = WeightSystem.from_mapping(
        REG, {"e": tuple(MultiPoly.zero(REG) for _ in range(5))}
    )
    assert q_multivariate(K3, w).is_zero()


def test_q_order_independence():
    rng = random.Random(30)
    for _ in range(40):
        pg = random_packaged(rng, max_edges=5, min_edges=1)
        labels = sorted(pg.ap.edges)
        o1, o2 = labels[:], labels[:]
        rng.shuffle(o1)
        rng.shuffle(o2)
        w = WeightSystem.per_edge(standard_registry(pg.ap.edges))
        assert q_multivariate(pg, w, order=o1) == q_multivariate(pg, w, order=o2)


def test_state_sum_matches_recursion():
    rng = random.Random(31)
    for _ in range(25):
        pg = random_packaged(rng, max_edges=4)
        w = WeightSystem.per_edge(standard_registry(pg.ap.edges))
        assert q_multivariate(pg, w) == state_sum_oracle(pg, w)


def test_state_sum_edgeless_and_single_edge():
    pg = make_packaged(ArrowPresentation.from_circles([[]]))
    assert state_sum_oracle(pg, WeightSystem.global_weights(REG)) == P("alpha*beta*gamma")
    assert len(state_sum_oracle(K1, WeightSystem.global_weights(REG)).terms) == 5


def test_state_sum_cap():
    circles = [[(f"e{i}", True) for i in range(13)], [(f"e{i}", True) for i in range(13)]]
    pg = make_packaged(ArrowPresentation.from_circles(circles))
    with pytest.raises(SizeLimitExceeded):
        state_sum_oracle(pg, WeightSystem.global_weights(standard_registry()))


def test_disjoint_union_rule():
    rng = random.Random(32)
    for _ in range(100):
        ap = random_presentation(rng, 3, 0, extra_circle_rate=0)
        vb = random_blocks(rng, len(ap.circles))
        bb = random_blocks(rng, len(boundary_components(ap)))
        pg = make_packaged(ap, vb, bb)
        ap2 = ArrowPresentation.from_circles(list(ap.circles) + [()])
        pg2 = make_packaged(
            ap2,
            vb + [[len(ap.circles)]],
            bb + [[len(boundary_components(ap))]],
        )
        w = WeightSystem.per_edge(standard_registry(ap.edges))
        assert q_multivariate(pg2, w) == P("alpha*beta*gamma", w.registry) * q_multivariate(pg, w)


def test_disjoint_union_rule_merged_blocks():
    # new circle sharing a class contributes alpha only
    ap = ArrowPresentation.from_circles([[("e", True), ("e", True)]])
    pg = make_packaged(ap)
    ap2 = ArrowPresentation.from_circles([[("e", True), ("e", True)], []])
    pg2 = make_packaged(ap2, [[0, 1]], None)
    pg_merged = make_packaged(ap, [[0]], None)
    # the extra circle shares a vertex class (no beta) but its bare boundary
    # is a singleton class (one gamma)
    assert q_poly(pg2) == P("alpha*gamma") * q_poly(pg_merged)


def test_z_poly_k1():
    assert z_poly(K1) == P("a*alpha^2*beta^2*gamma + b*alpha*beta*gamma")


def test_z_is_q_specialised():
    rng = random.Random(33)
    for _ in range(100):
        pg = random_packaged(rng, max_edges=4)
        q = q_poly(pg)
        zero = {name: MultiPoly.zero(REG) for name in ("c", "x", "y")}
        assert z_poly(pg) == q.substitute(zero)


def test_zhat_examples():
    assert zhat_poly(K1) == P("a*alpha^2*beta^2 + b*alpha*beta")
    pg = make_packaged(ArrowPresentation.from_circles([[], []]), vblocks=[[0, 1]])
    assert zhat_poly(pg) == P("alpha^2*beta")


def test_qhat_specialisations():
    rng = random.Random(34)
    for _ in range(50):
        pg = random_packaged(rng, max_edges=4)
        q = q_poly(pg)
        assert qhat_poly(pg) == q.substitute({"y": MultiPoly.zero(REG)}).set_to_one("gamma")
        zero = {name: MultiPoly.zero(REG) for name in ("c", "x")}
        assert qhat_poly(pg).substitute(zero) == zhat_poly(pg)


def test_boundary_partition_never_matters_for_hatted_polys():
    rng = random.Random(35)
    for _ in range(50):
        ap = random_presentation(rng, 4, 0)
        vb = random_blocks(rng, len(ap.circles))
        nb = len(boundary_components(ap))
        z_vals = {zhat_poly(make_packaged(ap, vb, random_blocks(rng, nb))) for _ in range(3)}
        q_vals = {qhat_poly(make_packaged(ap, vb, random_blocks(rng, nb))) for _ in range(3)}
        assert len(z_vals) == 1 and len(q_vals) == 1


def test_transition_loops():
    reg = standard_registry(["e"])
    aligned = ArrowPresentation.from_circles([[("e", True), ("e", True)]])
    anti = ArrowPresentation.from_circles([[("e", True), ("e", False)]])
    assert transition_poly(aligned, registry=reg) == parse_poly(
        "a_e*t^2 + b_e*t + c_e*t", reg
    )
    assert transition_poly(anti, registry=reg) == parse_poly(
        "a_e*t + b_e*t + c_e*t^2", reg
    )


def test_transition_is_q_with_swapped_weights():
    rng = random.Random(36)
    for _ in range(40):
        ap = random_presentation(rng, 4, 1, extra_circle_rate=0)
        reg = standard_registry(ap.edges)
        pg = PackagedPresentation(
            ap,
            Partition.one_block(range(len(ap.circles))),
            Partition.one_block(range(len(boundary_components(ap)))),
        )
        zero = MultiPoly.zero(reg)
        w = WeightSystem.from_mapping(
            reg,
            {
                l: (
                    MultiPoly.var(reg, f"b_{l}"),
                    MultiPoly.var(reg, f"a_{l}"),
                    MultiPoly.var(reg, f"c_{l}"),
                    zero,
                    zero,
                )
                for l in ap.edges
            },
        )
        q = q_multivariate(pg, w).set_to_one("beta").set_to_one("gamma")
        q = q.substitute({"alpha": MultiPoly.var(reg, "t")})
        assert q == transition_poly(ap, registry=reg)


def test_mv_br_examples():
    edgeless = ArrowPresentation.from_circles([[], [], []])
    reg = VarRegistry.of("a", "c")
    assert mv_br_poly(edgeless) == parse_poly("a^3*c^3", mv_br_poly(edgeless).registry)
    single = ArrowPresentation.from_circles([[("e", True)], [("e", True)]])
    p = mv_br_poly(single)
    assert p == parse_poly("b_e*a*c + a^2*c^2", p.registry)


def test_mv_br_is_q_specialised():
    rng = random.Random(37)
    for _ in range(30):
        ap = random_presentation(rng, 4, 0, extra_circle_rate=0.2)
        reg = standard_registry(ap.edges)
        pg = make_packaged(ap)
        one = MultiPoly.const(reg, 1)
        zero = MultiPoly.zero(reg)
        w = WeightSystem.from_mapping(
            reg,
            {l: (one, zero, zero, zero, MultiPoly.var(reg, f"b_{l}")) for l in ap.edges},
        )
        q = q_multivariate(pg, w).set_to_one("gamma").substitute(
            {"alpha": MultiPoly.var(reg, "c"), "beta": MultiPoly.var(reg, "a")}
        )
        z = mv_br_poly(ap)
        z_std = MultiPoly.zero(reg)
        for exps, coeff in z.terms.items():
            z_std = z_std + MultiPoly.monomial(
                reg, {n: e for n, e in zip(z.registry.names, exps) if e}, coeff
            )
        assert q == z_std


def test_br_examples():
    single = ArrowPresentation.from_circles([[("e", True)], [("e", True)]])
    reg = VarRegistry.of("x", "y", "z")
    assert br_poly(single) == parse_poly("x", reg)
    anti = ArrowPresentation.from_circles([[("e", True), ("e", False)]])
    assert br_poly(anti) == parse_poly("1 + y*z", reg)
    aligned = ArrowPresentation.from_circles([[("e", True), ("e", True)]])
    assert br_poly(aligned) == parse_poly("1 + y", reg)


def test_br_genus_exponent_parity():
    # orientable spanning sub-presentations contribute even z-powers
    rng = random.Random(38)
    from ribbontensor.arrow import surface_stats
    from ribbontensor.polynomials import _spanning

    for _ in range(30):
        ap = random_presentation(rng, 4, 0, extra_circle_rate=0)
        for bits in itertools.product((0, 1), repeat=len(ap.edges)):
            subset = [l for l, b in zip(sorted(ap.edges), bits) if b]
            st = surface_stats(_spanning(ap, subset))
            if st.orientable:
                assert st.euler_genus % 2 == 0


def test_zdot_and_tutte_examples():
    single = Multigraph.make(2, [(0, 1)])
    assert zdot_tutte(single) == parse_poly("a*b + a^2*c", zdot_tutte(single).registry)
    assert tutte_poly(single) == parse_poly("x", VarRegistry.of("x", "y"))
    loop = Multigraph.make(1, [(0, 0)])
    assert tutte_poly(loop) == parse_poly("y", VarRegistry.of("x", "y"))


def test_zdot_deletion_contraction():
    rng = random.Random(39)
    from ribbontensor.randgen import random_connected_multigraph

    reg = VarRegistry.of("a", "b", "c")
    b, c = MultiPoly.var(reg, "b"), MultiPoly.var(reg, "c")
    for _ in range(40):
        g = random_connected_multigraph(rng, max_edges=5, min_edges=1)
        i = rng.randrange(g.m)
        lhs = zdot_tutte(g)
        rhs = c * zdot_tutte(g.delete(i)) + b * zdot_tutte(g.contract(i))
        assert lhs == rhs


def test_graph_of_presentation():
    g = graph_of_presentation(
        ArrowPresentation.from_circles(
            [[("e", True), ("f", True)], [("e", True)], [("f", False)]]
        )
    )
    assert g.n == 3 and sorted(g.edge_list) == [(0, 1), (0, 2)]


def test_q_table_matches_direct_value():
    rng = random.Random(40)
    for _ in range(15):
        pg = random_packaged(rng, max_edges=3)
        weights = {
            l: tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(5))
            for l in pg.ap.edges
        }
        args = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)]
        assert q_table_value(q_state_table(pg), weights, *args) == q_value(
            pg, weights, *args
        )


def test_numeric_fast_paths_match_symbolic_evaluation():
    # the verifier's rational evaluators must agree with the polynomials
    rng = random.Random(46)
    from ribbontensor.polynomials import (
        mv_br_value,
        transition_state_table,
        transition_table_value,
        tutte_value,
        zdot_value,
    )
    from ribbontensor.randgen import random_connected_multigraph

    for _ in range(20):
        ap = random_presentation(rng, 4, 0, extra_circle_rate=0.2)
        reg = standard_registry(ap.edges)
        pt = {n: Fraction(rng.randint(1, 30), rng.randint(1, 30)) for n in reg.names}
        # transition
        tr = transition_poly(ap, registry=reg)
        weights = {l: (pt[f"a_{l}"], pt[f"b_{l}"], pt[f"c_{l}"]) for l in ap.edges}
        assert tr.eval_at(pt) == transition_table_value(
            transition_state_table(ap), weights, pt["t"]
        )
        # multivariate subset expansion
        z = mv_br_poly(ap)
        zpt = {"a": pt["a"], "c": pt["c"]}
        zpt.update({f"b_{l}": pt[f"b_{l}"] for l in ap.edges})
        b_by = {l: pt[f"b_{l}"] for l in ap.edges}
        assert z.eval_at(zpt) == mv_br_value(ap, pt["a"], b_by, pt["c"])
        # graph expansions
        g = random_connected_multigraph(rng, max_edges=4, min_edges=0)
        gz = zdot_tutte(g)
        gt = tutte_poly(g)
        gpt = {"a": pt["a"], "b": pt["b"], "c": pt["c"]}
        tpt = {"x": pt["x"], "y": pt["y"]}
        assert gz.eval_at(gpt) == zdot_value(g, pt["a"], pt["b"], pt["c"])
        assert gt.eval_at(tpt) == tutte_value(g, pt["x"], pt["y"])
