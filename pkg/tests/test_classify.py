import itertools

import pytest

from macposet import (LevelSubset, PosetError, box, check_macaulay,
                      disjoint_union, find_macaulay_order, lex_order, path,
                      upper_shadow)
from macposet.classify import (FamilySpec, build_heart, cartesian_counterexamples,
                               conjecture_6_7_search, diamond_box_predicate,
                               heart_order_choice, heart_predicate,
                               resolve_heart_order, ring_product_factor,
                               staircase_ideal, two_variable_quotients,
                               union_simplicial_equivalence_check,
                               verify_family, y_poset)
from macposet.orders import initial_segment


class TestHeartPredicate:
    def test_paper_examples(self):
        assert heart_predicate(4, 1, 3, 3) is False
        assert heart_predicate(5, 2, 2, 5) is True
        for a0, a1 in itertools.product(range(1, 5), repeat=2):
            assert heart_predicate(a0, a1, a0, a1) is True

    def test_symmetries(self):
        for t in itertools.product(range(1, 5), repeat=4):
            a0, a1, b0, b1 = t
            assert heart_predicate(*t) == heart_predicate(b0, b1, a0, a1)
            assert heart_predicate(*t) == heart_predicate(a1, a0, b1, b0)

    def test_rejects_bad_params(self):
        with pytest.raises(PosetError):
            heart_predicate(0, 1, 1, 1)


class TestHeartOrderChoice:
    def test_twist_case(self):
        c = heart_order_choice(5, 2, 2, 5)
        assert c.kind == "twist" and not c.swap_xy

    def test_lex_case(self):
        c = heart_order_choice(4, 3, 3, 4)
        assert c.kind == "lex" and not c.swap_xy

    def test_degenerate_box(self):
        assert heart_order_choice(3, 2, 3, 2).kind == "lex"

    def test_error_when_not_macaulay(self):
        with pytest.raises(PosetError):
            heart_order_choice(4, 1, 3, 3)

    def test_recommended_order_certifies(self):
        for t in itertools.product(range(1, 5), repeat=4):
            if not heart_predicate(*t):
                continue
            hp = build_heart(*t)
            fam = resolve_heart_order(hp, heart_order_choice(*t))
            assert check_macaulay(hp, fam).ok, t


class TestDiamondBoxPredicate:
    def test_isomorphic(self):
        assert diamond_box_predicate((3, 4), (3, 4)) is True
        assert diamond_box_predicate((3, 4), (4, 3)) is True

    def test_path_and_2xk(self):
        assert diamond_box_predicate((6,), (2, 5)) is True
        assert diamond_box_predicate((6,), (3, 4)) is False

    def test_dimension_gap(self):
        assert diamond_box_predicate((2, 2, 2), (4,)) is False

    def test_rank_mismatch_rejected(self):
        with pytest.raises(PosetError, match="equal top ranks"):
            diamond_box_predicate((2, 2), (4,))

    def test_ones_are_dropped(self):
        assert diamond_box_predicate((6, 1), (2, 5)) is True
        assert diamond_box_predicate((2, 1), (2,)) is True

    def test_symmetry(self):
        assert diamond_box_predicate((2, 5), (6,)) is True


class TestWedgeBoxPredicate:
    def test_2d_examples(self):
        from macposet.classify import wedge_box_predicate
        assert wedge_box_predicate("2d", (2, 3, 3, 4)) is True
        assert wedge_box_predicate("2d", (2, 5, 3, 4)) is False
        assert wedge_box_predicate("path", (4, 2, 9)) is True
        assert wedge_box_predicate("path", (6, 3, 4)) is False

    def test_malformed(self):
        from macposet.classify import wedge_box_predicate
        with pytest.raises(PosetError):
            wedge_box_predicate("2d", (3, 2, 2, 3))
        with pytest.raises(PosetError):
            wedge_box_predicate("weird", (1, 2, 3))


def monomial_shadow_size(a, b, m, n):
    # upper shadow of x^m y^n inside the a x b box
    if m == a - 1 and n == b - 1:
        return 0
    if m < a - 1 and n < b - 1:
        return 2
    return 1


class TestBoxShadowLemmas:
    """Shadow-size formulas for 2-D boxes, against brute force."""

    def segment_ids(self, fam, d, s, e):
        return list(fam.descending(d)[s:e])

    @pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 6)
                                     for b in range(1, 6)])
    def test_monomial_formula(self, a, b):
        p = box(a, b)
        for i, (m, n) in enumerate(p.labels):
            got = len(upper_shadow(p, LevelSubset.of(p, [i])))
            assert got == monomial_shadow_size(a, b, m, n)

    @pytest.mark.parametrize("a,b", [(3, 3), (4, 3), (5, 2), (5, 5)])
    def test_segment_sum_formula(self, a, b):
        p = box(a, b)
        for priority in (("x", "y"), ("y", "x")):
            fam = lex_order(p, priority)
            for d in range(p.max_rank + 1):
                nd = len(p.level(d))
                for s in range(nd):
                    for e in range(s + 1, nd + 1):
                        ids = self.segment_ids(fam, d, s, e)
                        sh = len(upper_shadow(p, LevelSubset.of(p, ids, level=d)))
                        parts = sum(
                            len(upper_shadow(p, LevelSubset.of(p, [i])))
                            for i in ids)
                        assert sh == parts - len(ids) + 1

    @pytest.mark.parametrize("a,b", [(3, 3), (4, 3), (5, 5)])
    def test_new_shadow_formula(self, a, b):
        from macposet import new_shadow
        p = box(a, b)
        for priority in (("x", "y"), ("y", "x")):
            fam = lex_order(p, priority)
            for d in range(p.max_rank + 1):
                nd = len(p.level(d))
                for s in range(nd):
                    for e in range(s + 1, nd + 1):
                        ids = self.segment_ids(fam, d, s, e)
                        sh = len(upper_shadow(p, LevelSubset.of(p, ids, level=d)))
                        got = len(new_shadow(fam, d, s, e))
                        assert got == (sh if s == 0 else sh - 1)

    @pytest.mark.parametrize("a,b", [(3, 3), (4, 3), (3, 4), (5, 2), (4, 4)])
    def test_box_segment_classes(self, a, b):
        # proper nonempty segments only: the closed formulas do not
        # cover a full level inside the shrinking band (shadow capped
        # by the next level) nor the top rank (shadow empty)
        p = box(a, b)
        for priority in (("y", "x"), ("x", "y")):
            fam = lex_order(p, priority)
            swap = priority == ("x", "y")
            init_break = (b if not swap else a) - 2
            fin_break = (a if not swap else b) - 2
            for d in range(p.max_rank + 1):
                nd = len(p.level(d))
                for s in range(nd):
                    for e in range(s + 1, nd + 1):
                        if s == 0 and e == nd:
                            continue
                        ids = self.segment_ids(fam, d, s, e)
                        sh = len(upper_shadow(p, LevelSubset.of(p, ids, level=d)))
                        q = e - s
                        if s == 0:
                            expect = q + 1 if d <= init_break else q
                        elif e == nd:
                            expect = q + 1 if d <= fin_break else q
                        else:
                            expect = q + 1
                        assert sh == expect, (a, b, priority, d, s, e)


class TestInitialSegmentsGeneralLemma:
    def test_inequality_spot_check(self):
        # hypotheses: a0 > b0, b1 > a1, a0 >= b1, a0+a1 >= b0+b1;
        # the second factor is the b1 x b0 box, lex y > x throughout
        tuples = [(5, 2, 2, 5), (5, 3, 2, 4), (6, 2, 3, 5), (4, 3, 2, 4)]
        for a0, a1, b0, b1 in tuples:
            assert a0 > b0 and b1 > a1 and a0 >= b1 and a0 + a1 >= b0 + b1
            P = box(a0, a1)
            Q = box(b1, b0)
            res = disjoint_union([P, Q])  # Q's elements sit on top
            M = res.poset
            po = lex_order(P, ("y", "x"))
            qo = lex_order(Q, ("y", "x"))
            from macposet import union_simplicial_order
            fam = union_simplicial_order(res, [po, qo])
            prov = res.provenance.sources
            of_p = {s: i for i, rec in enumerate(prov)
                    for f, s in rec if f == 0}
            of_q = {s: i for i, rec in enumerate(prov)
                    for f, s in rec if f == 1}
            for d in range(a1 + b0 - 1, a0 + a1 - 1):
                np_, nq = len(P.level(d)), len(Q.level(d))
                for q0 in range(np_ + 1):
                    for q1 in range(nq + 1):
                        seg = initial_segment(fam, d, q0 + q1)
                        sp = upper_shadow(M, seg)
                        sa = upper_shadow(M, LevelSubset.of(
                            M, [of_p[i] for i in po.descending(d)[:q0]], level=d))
                        sb = upper_shadow(M, LevelSubset.of(
                            M, [of_q[i] for i in qo.descending(d)[:q1]], level=d))
                        assert len(sp) <= len(sa) + len(sb), (a0, a1, b0, b1, d, q0, q1)


class TestHarness:
    def test_heart_grid_small(self):
        rep = verify_family(FamilySpec("heart", {"side": (1, 3)}))
        assert rep.all_agree and not rep.inconclusive
        assert len(rep.rows) == 81

    def test_equivalence_instances(self):
        res = union_simplicial_equivalence_check([box(2, 2), box(2, 2)])
        assert res["agree"]
        forms = {k: v.get("search") for k, v in res["forms"].items() if v["defined"]}
        assert set(forms.values()) == {"found"}

    def test_diamond_not_wedge_instance(self):
        from macposet.construct import adjoin_extreme
        b = box(2, 2)
        res = union_simplicial_equivalence_check(
            [adjoin_extreme(b, "bottom"), adjoin_extreme(b, "top")])
        assert res["agree"]
        assert res["forms"]["wedge"]["search"] == "none"
        assert res["forms"]["diamond"]["search"] == "found"

    def test_cartesian_counterexamples(self):
        rep = cartesian_counterexamples()
        assert rep.all_agree
        assert [r["search"] for r in rep.rows] == ["none"] * 3
        assert [r["elements"] for r in rep.rows] == [8, 12, 10]

    def test_ring_factor_is_macaulay_alone(self):
        assert find_macaulay_order(ring_product_factor()).status == "found"
        assert find_macaulay_order(y_poset()).status == "found"
        assert find_macaulay_order(path(1)).status == "found"

    def test_unknown_family(self):
        with pytest.raises(PosetError):
            verify_family(FamilySpec("nope"))


class TestConjectureScan:
    def test_quotient_enumeration(self):
        assert len(two_variable_quotients(4)) == 69
        assert len(two_variable_quotients(2)) == 5

    def test_staircase_ideal_roundtrip(self):
        from macposet import standard_monomial_poset
        for hs in two_variable_quotients(3):
            p = standard_monomial_poset(staircase_ideal(hs))
            heights = [0] * len(hs)
            for (i, j) in p.labels:
                heights[i] = max(heights[i], j + 1)
            assert tuple(heights) == hs

    def test_small_scan(self):
        rep = conjecture_6_7_search(max_exp=2, extra_steps=2,
                                    include_special=False)
        assert not rep.inconclusive
        assert not [r for r in rep.rows if r.get("counterexample")]

    def test_special_quotient_regression(self):
        rep = conjecture_6_7_search(max_exp=2, extra_steps=1,
                                    include_special=True)
        reg = [r for r in rep.rows if r.get("slice") == "conj66-regression"]
        assert len(reg) == 1 and reg[0]["search"] == "none"
