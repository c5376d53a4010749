"""Surface syntax for posets and orders: a small recursive-descent DSL.

Poset expressions::

    path(3)  box(2,3,4)  spider(1,2,2)  heart(5,2,2,5)
    poset(ideal(x^4, y^3, x^3*y))
    union(e,...)  wedge(e,...)  diamond(e,...)  cart(e,e)
    fiber(poset(ideal(...)), poset(ideal(...)))      # glued over the ideal sum
    fiber(e, e, "maps.txt")                          # explicit map file
    hat(e)  uhat(e)  bar(e)  ubar(e)
    explicit{5; 0 1 1 2 2; 0 1, 0 2, 1 3, 2 3, 1 4, 2 4}

Order expressions::

    lex(x,y)   us(lex(x,y), lex(x,y))   twist   lists("order.txt")

print() of a parse tree is canonical: parse -> print -> parse is the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import construct, ideals
from .core import PosetError, RankedPoset


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Node:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Mono:
    factors: tuple  # ((name, exponent), ...) in written order


@dataclass(frozen=True)
class FileRef:
    path: str


@dataclass(frozen=True)
class Explicit:
    count: int
    ranks: tuple
    covers: tuple


_PUNCT = "(){},;^*"


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in _PUNCT:
                self.toks.append((c, c, i))
                i += 1
                continue
            if c == '"':
                j = text.find('"', i + 1)
                if j < 0:
                    raise ParseError("unterminated string", i)
                self.toks.append(("STR", text[i + 1:j], i))
                i = j + 1
                continue
            if c.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("INT", int(text[i:j]), i))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("NAME", text[i:j], i))
                i = j
                continue
            raise ParseError(f"unexpected character {c!r}", i)
        self.toks.append(("EOF", None, len(text)))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def next(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t


_POSET_FNS = {"path", "box", "spider", "heart", "poset", "union", "wedge",
              "diamond", "cart", "fiber", "hat", "uhat", "bar", "ubar"}
_ARITY = {"path": (1, 1), "box": (1, None), "spider": (1, None),
          "heart": (4, 4), "poset": (1, 1), "union": (1, None),
          "wedge": (1, None), "diamond": (1, None), "cart": (2, 2),
          "fiber": (2, 3), "hat": (1, 1), "uhat": (1, 1), "bar": (1, 1),
          "ubar": (1, 1)}


def parse_expression(text: str) -> Node | Explicit:
    toks = _Tokens(text)
    node = _parse_expr(toks)
    t = toks.peek()
    if t[0] != "EOF":
        raise ParseError(f"trailing input {t[1]!r}", t[2])
    return node


def _parse_expr(toks: _Tokens):
    kind, val, pos = toks.peek()
    if kind != "NAME":
        raise ParseError(f"expected an expression, found {val!r}", pos)
    if val == "explicit":
        return _parse_explicit(toks)
    toks.next()
    fn = val
    if fn not in _POSET_FNS and fn != "ideal":
        raise ParseError(f"unknown function {fn!r}", pos)
    toks.expect("(")
    args = []
    if toks.peek()[0] != ")":
        while True:
            args.append(_parse_arg(toks, fn))
            if toks.peek()[0] == ",":
                toks.next()
                continue
            break
    close = toks.next()
    if close[0] != ")":
        raise ParseError(f"expected ')' or ',', found {close[1]!r}", close[2])
    lo, hi = _ARITY.get(fn, (1, None))
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise ParseError(f"{fn} takes {lo}{'' if hi == lo else '+' if hi is None else f'..{hi}'}"
                         f" arguments, got {len(args)}", pos)
    return Node(fn, tuple(args))


def _parse_arg(toks: _Tokens, fn: str):
    kind, val, pos = toks.peek()
    if kind == "INT":
        nxt = toks.toks[toks.k + 1]
        if fn == "ideal":
            # a bare integer inside ideal() is the monomial 1
            toks.next()
            if val != 1:
                raise ParseError("only the monomial 1 may be a bare integer", pos)
            return Mono(())
        toks.next()
        if nxt[0] in ("^", "*"):
            raise ParseError("monomials may not start with a number", nxt[2])
        return val
    if kind == "STR":
        toks.next()
        return FileRef(val)
    if kind == "NAME":
        if fn == "ideal":
            return _parse_monomial(toks)
        return _parse_expr(toks)
    raise ParseError(f"unexpected token {val!r}", pos)


def _parse_monomial(toks: _Tokens) -> Mono:
    factors = []
    while True:
        name = toks.expect("NAME")[1]
        exp = 1
        if toks.peek()[0] == "^":
            toks.next()
            exp = toks.expect("INT")[1]
        factors.append((name, exp))
        if toks.peek()[0] == "*":
            toks.next()
            continue
        break
    return Mono(tuple(factors))


def _parse_explicit(toks: _Tokens) -> Explicit:
    toks.expect("NAME")
    toks.expect("{")
    count = toks.expect("INT")[1]
    toks.expect(";")
    ranks = []
    while toks.peek()[0] == "INT":
        ranks.append(toks.next()[1])
    toks.expect(";")
    covers = []
    if toks.peek()[0] == "INT":
        while True:
            a = toks.expect("INT")[1]
            b = toks.expect("INT")[1]
            covers.append((a, b))
            if toks.peek()[0] == ",":
                toks.next()
                continue
            break
    t = toks.expect("}")
    if len(ranks) != count:
        raise ParseError(f"explicit lists {len(ranks)} ranks for {count} elements", t[2])
    return Explicit(count, tuple(ranks), tuple(covers))


def print_expression(node) -> str:
    if isinstance(node, int):
        return str(node)
    if isinstance(node, FileRef):
        return f'"{node.path}"'
    if isinstance(node, Mono):
        if not node.factors:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in node.factors)
    if isinstance(node, Explicit):
        ranks = " ".join(str(r) for r in node.ranks)
        covers = ", ".join(f"{a} {b}" for a, b in node.covers)
        return f"explicit{{{node.count}; {ranks}; {covers}}}"
    return f"{node.fn}(" + ", ".join(print_expression(a) for a in node.args) + ")"


# ------------------------------------------------------------------ evaluator

@dataclass
class EvalResult:
    poset: RankedPoset
    kind: str
    result: construct.OperationResult | None = None
    children: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _eval_ideal(node: Node) -> ideals.MonomialIdeal:
    names: list = []
    raw = []
    for m in node.args:
        if not isinstance(m, Mono):
            raise PosetError("ideal() takes monomial literals")
        exps, names = ideals.parse_monomial(print_expression(m), names)
        raw.append(exps)
    gens = [tuple(e.get(v, 0) for v in names) for e in raw]
    return ideals.ideal_from_generators(gens, tuple(names))


def evaluate(node, read_fibermap=None) -> EvalResult:
    """Build the poset an expression denotes.

    ``read_fibermap`` loads an explicit fiber map file; injected by the
    CLI layer so this module stays filesystem-free.
    """
    if isinstance(node, Explicit):
        p = RankedPoset(node.ranks, node.covers, name="explicit")
        return EvalResult(p, "explicit")
    fn = node.fn
    if fn == "path":
        return EvalResult(construct.path(node.args[0]), "path")
    if fn == "box":
        return EvalResult(construct.box(*node.args), "box",
                          meta={"dims": list(node.args)})
    if fn == "spider":
        res = construct.spider(*node.args)
        return EvalResult(res.poset, "spider", result=res)
    if fn == "heart":
        from .classify import build_heart
        a0, a1, b0, b1 = node.args
        return EvalResult(build_heart(a0, a1, b0, b1), "heart",
                          meta={"params": (a0, a1, b0, b1)})
    if fn == "poset":
        ideal = _eval_ideal(node.args[0])
        return EvalResult(ideals.standard_monomial_poset(ideal), "quotient",
                          meta={"ideal": ideal})
    if fn in ("union", "wedge", "diamond"):
        children = [evaluate(a, read_fibermap) for a in node.args]
        op = {"union": construct.disjoint_union, "wedge": construct.wedge,
              "diamond": construct.diamond}[fn]
        res = op([c.poset for c in children])
        return EvalResult(res.poset, fn, result=res, children=children)
    if fn == "cart":
        children = [evaluate(a, read_fibermap) for a in node.args]
        res = construct.cartesian_product(children[0].poset, children[1].poset)
        return EvalResult(res.poset, "cart", result=res, children=children)
    if fn == "fiber":
        return _eval_fiber(node, read_fibermap)
    if fn in ("hat", "uhat", "bar", "ubar"):
        child = evaluate(node.args[0], read_fibermap)
        which = "top" if fn in ("hat", "bar") else "bottom"
        if fn in ("hat", "uhat"):
            p = construct.adjoin_extreme(child.poset, which)
        else:
            p = construct.remove_extreme(child.poset, which)
        return EvalResult(p, fn, children=[child])
    raise PosetError(f"cannot evaluate {fn!r}")


def _eval_fiber(node: Node, read_fibermap) -> EvalResult:
    children = [evaluate(a, read_fibermap) for a in node.args[:2]]
    if len(node.args) == 3:
        if not isinstance(node.args[2], FileRef):
            raise PosetError("third fiber argument must be a map file string")
        if read_fibermap is None:
            raise PosetError("no map-file reader available in this context")
        triples = read_fibermap(node.args[2].path)
        from .core import induced_subposet
        pa, pb = children[0].poset, children[1].poset
        sub = induced_subposet(pa, [a for _, a, _ in triples])
        into_a = {}
        into_b = {}
        for c, a, b in triples:
            into_a[sub.new_of_old[a]] = a
            into_b[sub.new_of_old[a]] = b
        res = construct.fiber_product(pa, pb, sub.poset, into_a, into_b)
        return EvalResult(res.poset, "fiber", result=res, children=children)
    ia = children[0].meta.get("ideal")
    ib = children[1].meta.get("ideal")
    if ia is None or ib is None:
        raise PosetError("fiber over ideal containment needs poset(ideal(...)) "
                         "factors; otherwise pass an explicit map file")
    base = ideals.ideal_sum(ia, ib)
    pc = ideals.standard_monomial_poset(base)
    pa, pb = children[0].poset, children[1].poset
    res = construct.fiber_product(
        pa, pb, pc,
        ideals.inclusion_map(ia, base, poset_i=pa, poset_j=pc),
        ideals.inclusion_map(ib, base, poset_i=pb, poset_j=pc))
    return EvalResult(res.poset, "fiber", result=res, children=children,
                      meta={"base_ideal": base})


# ------------------------------------------------------------- order language

@dataclass(frozen=True)
class OrderNode:
    fn: str  # lex | us | twist | lists
    args: tuple


def parse_order(text: str) -> OrderNode:
    toks = _Tokens(text)
    node = _parse_order(toks)
    t = toks.peek()
    if t[0] != "EOF":
        raise ParseError(f"trailing input {t[1]!r}", t[2])
    return node


def _parse_order(toks: _Tokens) -> OrderNode:
    kind, val, pos = toks.next()
    if kind != "NAME":
        raise ParseError(f"expected an order expression, found {val!r}", pos)
    if val == "twist":
        return OrderNode("twist", ())
    if val == "lex":
        toks.expect("(")
        names = [toks.expect("NAME")[1]]
        while toks.peek()[0] == ",":
            toks.next()
            names.append(toks.expect("NAME")[1])
        toks.expect(")")
        return OrderNode("lex", tuple(names))
    if val == "us":
        toks.expect("(")
        subs = [_parse_order(toks)]
        while toks.peek()[0] == ",":
            toks.next()
            subs.append(_parse_order(toks))
        toks.expect(")")
        return OrderNode("us", tuple(subs))
    if val == "lists":
        toks.expect("(")
        path = toks.expect("STR")[1]
        toks.expect(")")
        return OrderNode("lists", (FileRef(path),))
    raise ParseError(f"unknown order {val!r}", pos)


def print_order(node: OrderNode) -> str:
    if node.fn == "twist":
        return "twist"
    if node.fn == "lex":
        return "lex(" + ", ".join(node.args) + ")"
    if node.fn == "us":
        return "us(" + ", ".join(print_order(a) for a in node.args) + ")"
    return f'lists("{node.args[0].path}")'


def resolve_order(node: OrderNode, ev: EvalResult, read_order_lists=None):
    """Resolve an order expression against the structure of a built poset."""
    from .orders import lex_order, order_from_lists, twist_order, union_simplicial_order
    if node.fn == "lex":
        return lex_order(ev.poset, node.args)
    if node.fn == "twist":
        if ev.kind != "heart":
            raise PosetError("twist order applies to heart(...) expressions")
        a0, a1, b0, b1 = ev.meta["params"]
        if b1 < a1:  # relabel the factors; the poset is unchanged
            a0, a1, b0, b1 = b0, b1, a0, a1
        return twist_order(ev.poset, a0, a1, b0, b1)
    if node.fn == "us":
        if ev.result is None or not ev.children:
            raise PosetError("us(...) applies to union/wedge/diamond expressions")
        if len(node.args) != len(ev.children):
            raise PosetError(f"us arity {len(node.args)} does not match "
                             f"operation arity {len(ev.children)}")
        factor_orders = [resolve_order(sub, child, read_order_lists)
                         for sub, child in zip(node.args, ev.children)]
        return union_simplicial_order(ev.result, factor_orders)
    if node.fn == "lists":
        if read_order_lists is None:
            raise PosetError("no order-list reader available in this context")
        lists = read_order_lists(node.args[0].path)
        return order_from_lists(ev.poset, lists)
    raise PosetError(f"cannot resolve order {node.fn!r}")
