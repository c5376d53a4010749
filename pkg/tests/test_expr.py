import pytest

from macposet import are_isomorphic, box, check_macaulay, path, spider, wedge
from macposet.expr import (Explicit, Mono, Node, ParseError, evaluate,
                           parse_expression, parse_order, print_expression,
                           print_order, resolve_order)


class TestParsing:
    def test_wedge_of_boxes(self):
        ast = parse_expression("wedge(box(2,3), box(2,4))")
        assert ast.fn == "wedge" and len(ast.args) == 2
        assert ast.args[0] == Node("box", (2, 3))

    def test_ideal_quotient(self):
        ast = parse_expression("poset(ideal(x^4, y^3, x^3*y))")
        assert ast.fn == "poset"
        inner = ast.args[0]
        assert inner.fn == "ideal"
        assert inner.args[2] == Mono((("x", 3), ("y", 1)))

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_expression("diamond(path(3), box(2,3)")
        assert "position" in str(err.value)

    def test_unknown_function(self):
        with pytest.raises(ParseError, match="unknown function"):
            parse_expression("pyramid(3)")

    def test_arity_errors(self):
        with pytest.raises(ParseError, match="arguments"):
            parse_expression("cart(path(1))")
        with pytest.raises(ParseError, match="arguments"):
            parse_expression("heart(1,2,3)")

    def test_explicit_literal(self):
        ast = parse_expression("explicit{4; 0 1 2 2; 0 1, 1 2, 1 3}")
        assert isinstance(ast, Explicit)
        assert ast.ranks == (0, 1, 2, 2)
        assert ast.covers == ((0, 1), (1, 2), (1, 3))

    def test_explicit_count_mismatch(self):
        with pytest.raises(ParseError, match="ranks"):
            parse_expression("explicit{3; 0 1; 0 1}")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError, match="trailing"):
            parse_expression("path(3) path(2)")


CORPUS = [
    "path(0)",
    "box(2, 3, 4)",
    "spider(1, 2, 2)",
    "heart(5, 2, 2, 5)",
    "poset(ideal(x^4, y^3, x^3*y))",
    "poset(ideal(1))",
    "union(path(1), path(2), box(2, 2))",
    "wedge(poset(ideal(x^2)), poset(ideal(y^3)))",
    "diamond(hat(box(2, 2)), uhat(box(2, 2)))",
    "cart(path(1), explicit{4; 0 1 2 2; 0 1, 1 2, 1 3})",
    "fiber(poset(ideal(x^4, y)), poset(ideal(x^3, y^3)))",
    "bar(hat(spider(2, 2)))",
    "ubar(box(2, 2))",
]


class TestRoundTrip:
    @pytest.mark.parametrize("text", CORPUS)
    def test_parse_print_parse(self, text):
        ast = parse_expression(text)
        printed = print_expression(ast)
        assert parse_expression(printed) == ast
        assert print_expression(parse_expression(printed)) == printed


class TestEvaluation:
    def test_heart_via_fiber_matches_ideal_route(self):
        lhs = evaluate(parse_expression(
            "fiber(poset(ideal(x^4, y)), poset(ideal(x^3, y^3)))")).poset
        rhs = evaluate(parse_expression("poset(ideal(x^4, y^3, x^3*y))")).poset
        assert are_isomorphic(lhs, rhs) is not None

    def test_heart_expression(self):
        h = evaluate(parse_expression("heart(5,2,2,5)"))
        assert h.poset.level_sizes() == (1, 2, 3, 4, 4, 2)

    def test_operations(self):
        ev = evaluate(parse_expression("wedge(path(1), path(2))"))
        assert are_isomorphic(ev.poset, spider(1, 2).poset) is not None
        ev = evaluate(parse_expression("cart(path(2), path(3))"))
        assert are_isomorphic(ev.poset, box(3, 4)) is not None

    def test_extremes(self):
        ev = evaluate(parse_expression("bar(hat(box(2,2)))"))
        assert are_isomorphic(ev.poset, box(2, 2)) is not None

    def test_fiber_needs_ideals_or_map(self):
        from macposet import PosetError
        with pytest.raises(PosetError, match="ideal containment"):
            evaluate(parse_expression("fiber(path(2), path(2))"))


class TestOrderExpressions:
    def test_round_trip(self):
        for text in ["lex(x, y)", "twist", "us(lex(x, y), lex(x, y))",
                     'lists("order.txt")']:
            node = parse_order(text)
            assert print_order(parse_order(print_order(node))) == print_order(node)

    def test_lex_resolution(self):
        ev = evaluate(parse_expression("box(3,4)"))
        fam = resolve_order(parse_order("lex(x,y)"), ev)
        assert check_macaulay(ev.poset, fam).ok

    def test_twist_resolution(self):
        ev = evaluate(parse_expression("heart(5,2,2,5)"))
        fam = resolve_order(parse_order("twist"), ev)
        assert check_macaulay(ev.poset, fam).ok

    def test_twist_on_mirrored_params(self):
        ev = evaluate(parse_expression("heart(2,5,5,2)"))
        fam = resolve_order(parse_order("twist"), ev)
        assert check_macaulay(ev.poset, fam).ok

    def test_us_resolution_and_arity(self):
        ev = evaluate(parse_expression("wedge(box(2,2), box(2,2))"))
        fam = resolve_order(parse_order("us(lex(x,y), lex(x,y))"), ev)
        assert check_macaulay(ev.poset, fam).ok
        from macposet import PosetError
        with pytest.raises(PosetError, match="arity"):
            resolve_order(parse_order("us(lex(x,y))"), ev)

    def test_twist_rejected_outside_hearts(self):
        from macposet import PosetError
        ev = evaluate(parse_expression("box(3,4)"))
        with pytest.raises(PosetError, match="heart"):
            resolve_order(parse_order("twist"), ev)
