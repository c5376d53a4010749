"""Monomial-ideal arithmetic and standard-monomial posets.

Monomials are exponent tuples; an ideal keeps its minimal generators as
an antichain in canonical (lex-descending) order.  Quotients with a pure
power of every variable are finite, and their standard monomials form a
ranked poset under divisibility.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import PosetError, RankedPoset, format_monomial


def default_var_names(n: int) -> tuple:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def divides(a, b) -> bool:
    """Componentwise a <= b, i.e. x^a divides x^b."""
    if len(a) != len(b):
        raise PosetError(f"arity mismatch: {len(a)} vs {len(b)}")
    return all(ai <= bi for ai, bi in zip(a, b))


def lcm(a, b):
    if len(a) != len(b):
        raise PosetError(f"arity mismatch: {len(a)} vs {len(b)}")
    return tuple(max(ai, bi) for ai, bi in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators.

    Construct through :func:`ideal_from_generators`, which drops
    redundant generators and sorts the rest lex-descending so equal
    ideals compare equal.
    """

    arity: int
    generators: tuple  # antichain of exponent tuples, lex descending
    var_names: tuple

    def member(self, m) -> bool:
        if len(m) != self.arity:
            raise PosetError(f"arity mismatch: {len(m)} vs {self.arity}")
        return any(divides(g, m) for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(format_monomial(g, self.var_names) for g in self.generators) + ")"


def ideal_from_generators(gens, var_names=None) -> MonomialIdeal:
    """Minimalize and canonicalize a generating set."""
    gens = [tuple(int(e) for e in g) for g in gens]
    arity = len(gens[0]) if gens else (len(var_names) if var_names else 0)
    for g in gens:
        if len(g) != arity:
            raise PosetError("generators have mixed arities")
        if any(e < 0 for e in g):
            raise PosetError("exponents must be nonnegative")
    if var_names is None:
        var_names = default_var_names(arity)
    if len(var_names) != arity:
        raise PosetError("variable name count disagrees with arity")
    uniq = sorted(set(gens))
    minimal = [g for g in uniq
               if not any(h != g and divides(h, g) for h in uniq)]
    minimal.sort(reverse=True)  # lex descending on exponent vectors
    return MonomialIdeal(arity, tuple(minimal), tuple(var_names))


def pure_power_ideal(caps, var_names=None) -> MonomialIdeal:
    """(x1^d1, ..., xn^dn); its quotient is the d1 x ... x dn box."""
    caps = list(caps)
    n = len(caps)
    gens = []
    for i, d in enumerate(caps):
        g = [0] * n
        g[i] = int(d)
        gens.append(tuple(g))
    return ideal_from_generators(gens, var_names)


def ideal_sum(i: MonomialIdeal, j: MonomialIdeal) -> MonomialIdeal:
    if i.arity != j.arity:
        raise PosetError("arity mismatch in ideal sum")
    return ideal_from_generators(i.generators + j.generators, i.var_names)


def ideal_intersection(i: MonomialIdeal, j: MonomialIdeal) -> MonomialIdeal:
    """Pairwise lcms of generators, minimalized."""
    if i.arity != j.arity:
        raise PosetError("arity mismatch in ideal intersection")
    if i.is_zero() or j.is_zero():
        return ideal_from_generators([], i.var_names)
    gens = [lcm(g, h) for g in i.generators for h in j.generators]
    return ideal_from_generators(gens, i.var_names)


def ideal_contains(i: MonomialIdeal, j: MonomialIdeal) -> bool:
    """i is contained in j, i.e. every generator of i is a member of j."""
    if i.arity != j.arity:
        raise PosetError("arity mismatch in containment test")
    return all(j.member(g) for g in i.generators)


def quotient_is_finite(i: MonomialIdeal) -> bool:
    """True iff for every variable some generator is a pure power of it."""
    for v in range(i.arity):
        if not any(all(e == 0 for k, e in enumerate(g) if k != v)
                   for g in i.generators):
            return False
    return True


def _pure_power_caps(i: MonomialIdeal):
    caps = [None] * i.arity
    for g in i.generators:
        nz = [k for k, e in enumerate(g) if e > 0]
        if len(nz) <= 1:
            v = nz[0] if nz else 0
            if caps[v] is None or g[v] < caps[v]:
                caps[v] = g[v]
    return caps


def standard_monomials_by_degree(i: MonomialIdeal):
    """Levels of the finite quotient: lists of exponent tuples, lex descending."""
    if not quotient_is_finite(i):
        raise PosetError(f"quotient of {i} is not finite")
    one = tuple([0] * i.arity)
    if i.member(one):
        return []
    caps = _pure_power_caps(i)
    levels = [[one]]
    while True:
        seen = set()
        for m in levels[-1]:
            for v in range(i.arity):
                if m[v] + 1 >= caps[v]:
                    continue
                cand = m[:v] + (m[v] + 1,) + m[v + 1:]
                if cand not in seen and not i.member(cand):
                    seen.add(cand)
        if not seen:
            return levels
        levels.append(sorted(seen, reverse=True))


def standard_monomial_poset(i: MonomialIdeal, name="") -> RankedPoset:
    """Divisibility poset of the monomials outside a finite-quotient ideal.

    Ids are assigned by degree, lex-descending within a degree;
    covers multiply by one variable and stay outside the ideal.
    """
    levels = standard_monomials_by_degree(i)
    labels = [m for lv in levels for m in lv]
    index = {m: k for k, m in enumerate(labels)}
    ranks = [sum(m) for m in labels]
    covers = []
    for m, a in index.items():
        for v in range(i.arity):
            up = m[:v] + (m[v] + 1,) + m[v + 1:]
            b = index.get(up)
            if b is not None:
                covers.append((a, b))
    return RankedPoset(ranks, covers, labels=labels, var_names=i.var_names,
                       name=name or f"poset{i}")


def inclusion_map(i: MonomialIdeal, j: MonomialIdeal,
                  poset_i: RankedPoset | None = None,
                  poset_j: RankedPoset | None = None) -> dict:
    """Embedding of the quotient poset of j into the quotient poset of i.

    Requires i contained in j (so R/j has fewer standard monomials); each
    standard monomial of R/j maps to the same monomial in R/i.  Returns
    id-in-poset(j) -> id-in-poset(i).
    """
    if not ideal_contains(i, j):
        raise PosetError(f"{i} is not contained in {j}")
    pi = poset_i if poset_i is not None else standard_monomial_poset(i)
    pj = poset_j if poset_j is not None else standard_monomial_poset(j)
    of_label = {m: k for k, m in enumerate(pi.labels)}
    return {a: of_label[m] for a, m in enumerate(pj.labels)}


def parse_monomial(text: str, var_names=None):
    """Parse '1', 'x', 'x^4', 'x1^3*x2' into (exponents, names-in-order-seen)."""
    text = text.strip()
    seen: list = list(var_names) if var_names else []
    exps: dict = {}
    if text == "1":
        return exps, seen
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            v, _, e = factor.partition("^")
            v, e = v.strip(), int(e)
        else:
            v, e = factor, 1
        if not v.isidentifier():
            raise PosetError(f"bad variable name {v!r}")
        if v not in seen:
            seen.append(v)
        exps[v] = exps.get(v, 0) + e
    return exps, seen
