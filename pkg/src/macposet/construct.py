"""Poset constructors and operations: paths, boxes, spiders, disjoint
union, wedge, diamond, fiber and cartesian products, extreme-element
transforms.  Every operation output carries provenance so downstream
orders can tell which factor an element came from."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (InducedSubposet, PosetError, RankedPoset, _bit_positions,
                   induced_subposet, validate_poset)
from .ideals import pure_power_ideal, standard_monomial_poset


@dataclass(frozen=True)
class Provenance:
    """Per-element origin records for an operation output.

    ``sources[i]`` is a tuple of (factor_index, source_id) pairs; glue
    points created by identifying factor extremes carry one pair per
    factor and are flagged merged.  Fiber products additionally record
    the base-poset id with the sentinel factor index -2.
    """

    sources: tuple

    def is_merged(self, i: int) -> bool:
        return len(self.sources[i]) > 1

    def single(self, i: int):
        if self.is_merged(i):
            raise PosetError(f"element {i} is a merged glue point")
        return self.sources[i][0]

    def arity(self) -> int:
        return 1 + max(f for rec in self.sources for f, _ in rec if f >= 0)

    def to_json(self):
        return [[list(p) for p in rec] for rec in self.sources]


@dataclass(frozen=True)
class OperationResult:
    poset: RankedPoset
    provenance: Provenance
    operation: str  # disjoint_union | wedge | diamond | fiber | cartesian
    factors: tuple = ()


def path(d: int) -> RankedPoset:
    """Chain of d+1 elements at ranks 0..d."""
    if d < 0:
        raise PosetError("path length must be >= 0")
    return RankedPoset(range(d + 1), [(i, i + 1) for i in range(d)],
                       name=f"path({d})")


def box(*dims) -> RankedPoset:
    """Box poset: exponent vectors below the given caps, ordered by divisibility."""
    if len(dims) == 1 and not isinstance(dims[0], int):
        dims = tuple(dims[0])
    if not dims or any(d < 1 for d in dims):
        raise PosetError("box needs side lengths >= 1")
    ideal = pure_power_ideal(dims)
    tag = "box(" + ",".join(str(d) for d in dims) + ")"
    return standard_monomial_poset(ideal, name=tag)


def spider(*legs) -> OperationResult:
    """Wedge of paths sharing their minimum."""
    if len(legs) == 1 and not isinstance(legs[0], int):
        legs = tuple(legs[0])
    if not legs or any(l < 1 for l in legs):
        raise PosetError("spider needs leg lengths >= 1")
    res = wedge([path(l) for l in legs])
    renamed = RankedPoset(res.poset.rank, _cover_pairs(res.poset),
                          name="spider(" + ",".join(str(l) for l in legs) + ")")
    return OperationResult(renamed, res.provenance, res.operation, res.factors)


def _cover_pairs(p: RankedPoset):
    return [(a, b) for a in range(p.n) for b in p.up[a]]


def disjoint_union(ps) -> OperationResult:
    """Side-by-side copies with no cross relations; ranks preserved."""
    ps = list(ps)
    covers, ranks, sources = [], [], []
    offset = 0
    for k, p in enumerate(ps):
        ranks.extend(p.rank)
        covers.extend((a + offset, b + offset) for a, b in _cover_pairs(p))
        sources.extend(((k, i),) for i in range(p.n))
        offset += p.n
    name = "union(" + ",".join(p.name or "?" for p in ps) + ")"
    poset = RankedPoset(ranks, covers, name=name)
    return OperationResult(poset, Provenance(tuple(sources)), "disjoint_union",
                           tuple(ps))


def _unique_min(p: RankedPoset, k: int) -> int:
    mins = p.minimal_elements()
    if len(mins) != 1:
        raise PosetError(f"factor {k} has {len(mins)} minimal elements, needs exactly 1")
    return mins[0]


def _unique_max(p: RankedPoset, k: int) -> int:
    maxs = p.maximal_elements()
    if len(maxs) != 1:
        raise PosetError(f"factor {k} has {len(maxs)} maximal elements, needs exactly 1")
    return maxs[0]


def wedge(ps) -> OperationResult:
    """Disjoint union with the unique factor minima identified."""
    ps = list(ps)
    mins = [_unique_min(p, k) for k, p in enumerate(ps)]
    glue_rank = ps[0].rank[mins[0]]
    for k, p in enumerate(ps):
        if p.rank[mins[k]] != glue_rank:
            raise PosetError(f"factor {k} minimum has rank {p.rank[mins[k]]}, "
                             f"expected {glue_rank}")
    ranks = [glue_rank]
    sources = [tuple((k, mins[k]) for k in range(len(ps)))]
    covers = []
    new_id = {}
    nxt = 1
    for k, p in enumerate(ps):
        for i in range(p.n):
            if i == mins[k]:
                new_id[(k, i)] = 0
            else:
                new_id[(k, i)] = nxt
                ranks.append(p.rank[i])
                sources.append(((k, i),))
                nxt += 1
        covers.extend((new_id[(k, a)], new_id[(k, b)]) for a, b in _cover_pairs(p))
    name = "wedge(" + ",".join(p.name or "?" for p in ps) + ")"
    poset = RankedPoset(ranks, covers, name=name)
    return OperationResult(poset, Provenance(tuple(sources)), "wedge", tuple(ps))


def diamond(ps) -> OperationResult:
    """Disjoint union with minima identified and maxima identified."""
    ps = list(ps)
    mins = [_unique_min(p, k) for k, p in enumerate(ps)]
    maxs = [_unique_max(p, k) for k, p in enumerate(ps)]
    for k, p in enumerate(ps):
        if mins[k] == maxs[k]:
            raise PosetError(f"factor {k} has its minimum equal to its maximum")
    bot_rank = ps[0].rank[mins[0]]
    top_rank = ps[0].rank[maxs[0]]
    for k, p in enumerate(ps):
        if p.rank[mins[k]] != bot_rank:
            raise PosetError(f"factor {k} minimum rank differs")
        if p.rank[maxs[k]] != top_rank:
            raise PosetError(f"factor {k} maximum has rank {p.rank[maxs[k]]}, "
                             f"expected {top_rank}")
    ranks = [bot_rank]
    sources = [tuple((k, mins[k]) for k in range(len(ps)))]
    covers = []
    new_id = {}
    nxt = 1
    for k, p in enumerate(ps):
        for i in range(p.n):
            if i == mins[k]:
                new_id[(k, i)] = 0
            elif i == maxs[k]:
                continue
            else:
                new_id[(k, i)] = nxt
                ranks.append(p.rank[i])
                sources.append(((k, i),))
                nxt += 1
    top = nxt
    ranks.append(top_rank)
    sources.append(tuple((k, maxs[k]) for k in range(len(ps))))
    for k, p in enumerate(ps):
        new_id[(k, maxs[k])] = top
        covers.extend((new_id[(k, a)], new_id[(k, b)]) for a, b in _cover_pairs(p))
    name = "diamond(" + ",".join(p.name or "?" for p in ps) + ")"
    poset = RankedPoset(ranks, covers, name=name)
    return OperationResult(poset, Provenance(tuple(sources)), "diamond", tuple(ps))


def _validate_embedding(pc: RankedPoset, px: RankedPoset, inj: dict, which: str):
    if sorted(inj.keys()) != list(range(pc.n)):
        raise PosetError(f"{which}: map must be defined on every base element")
    img = list(inj.values())
    if len(set(img)) != len(img):
        raise PosetError(f"{which}: map is not injective")
    for c, x in inj.items():
        if not 0 <= x < px.n:
            raise PosetError(f"{which}: image {x} out of range")
        if pc.rank[c] != px.rank[x]:
            raise PosetError(f"{which}: not rank-preserving at base element {c}")
    for c1 in range(pc.n):
        for c2 in range(pc.n):
            if pc.leq(c1, c2) != px.leq(inj[c1], inj[c2]):
                raise PosetError(f"{which}: not an order embedding at ({c1},{c2})")
    image = set(img)
    for x in image:
        for b in px.down[x]:
            if b not in image:
                raise PosetError(f"{which}: image is not a down-set "
                                 f"(element {x} covers {b} outside the image)")


def fiber_product(pa: RankedPoset, pb: RankedPoset, pc: RankedPoset,
                  into_a: dict, into_b: dict) -> OperationResult:
    """Glue pa and pb along rank-preserving embeddings of the base pc.

    The defining clauses give an order relation, not covers; covers are
    recomputed as the transitive reduction of that relation.  Both
    images must be down-sets, which every ideal-containment inclusion
    satisfies; without it the glued relation can skip ranks.
    """
    _validate_embedding(pc, pa, into_a, "into_a")
    _validate_embedding(pc, pb, into_b, "into_b")
    img_a = set(into_a.values())
    img_b = set(into_b.values())
    rest_a = [i for i in range(pa.n) if i not in img_a]
    rest_b = [i for i in range(pb.n) if i not in img_b]
    n = pc.n + len(rest_a) + len(rest_b)
    ranks = [pc.rank[c] for c in range(pc.n)]
    ranks += [pa.rank[i] for i in rest_a]
    ranks += [pb.rank[i] for i in rest_b]
    a_new = {a: pc.n + k for k, a in enumerate(rest_a)}
    b_new = {b: pc.n + len(rest_a) + k for k, b in enumerate(rest_b)}
    sources = [((0, into_a[c]), (1, into_b[c]), (-2, c)) for c in range(pc.n)]
    sources += [((0, a),) for a in rest_a]
    sources += [((1, b),) for b in rest_b]

    # strict order relation as per-element up-masks over new ids
    rel = [0] * n
    for c1 in range(pc.n):
        for c2 in range(pc.n):
            if c1 != c2 and pc.leq(c1, c2):
                rel[c1] |= 1 << c2
    c_of_a = {x: c for c, x in into_a.items()}
    c_of_b = {x: c for c, x in into_b.items()}
    for a in rest_a:
        for x in range(pa.n):
            if x != a and pa.leq(x, a):
                rel[c_of_a[x] if x in c_of_a else a_new[x]] |= 1 << a_new[a]
            if x != a and pa.leq(a, x) and x not in c_of_a:
                rel[a_new[a]] |= 1 << a_new[x]
    for b in rest_b:
        for x in range(pb.n):
            if x != b and pb.leq(x, b):
                rel[c_of_b[x] if x in c_of_b else b_new[x]] |= 1 << b_new[b]
            if x != b and pb.leq(b, x) and x not in c_of_b:
                rel[b_new[b]] |= 1 << b_new[x]

    pred = [0] * n
    for a in range(n):
        for b in _bit_positions(rel[a]):
            pred[b] |= 1 << a
    covers = []
    for a in range(n):
        for b in _bit_positions(rel[a]):
            if rel[a] & pred[b] == 0:
                covers.append((a, b))

    labels = None
    var_names = None
    if (pa.labels is not None and pb.labels is not None and pc.labels is not None
            and pa.var_names == pb.var_names == pc.var_names):
        consistent = all(pc.labels[c] == pa.labels[into_a[c]] == pb.labels[into_b[c]]
                         for c in range(pc.n))
        if consistent:
            labels = [pc.labels[c] for c in range(pc.n)]
            labels += [pa.labels[a] for a in rest_a]
            labels += [pb.labels[b] for b in rest_b]
            var_names = pa.var_names

    name = f"fiber({pa.name or '?'},{pb.name or '?'};{pc.name or '?'})"
    poset = RankedPoset(ranks, covers, labels=labels, var_names=var_names, name=name)
    verdict = validate_poset(poset)
    if not verdict.ok:
        raise PosetError(f"fiber product violates rank law: {verdict.witness.detail}")
    return OperationResult(poset, Provenance(tuple(sources)), "fiber", (pa, pb, pc))


def cartesian_product(p: RankedPoset, q: RankedPoset) -> OperationResult:
    """Pairs ordered componentwise; covers step one coordinate, ranks add."""
    pairs = sorted(((a, b) for a in range(p.n) for b in range(q.n)),
                   key=lambda ab: (p.rank[ab[0]] + q.rank[ab[1]], ab[0], ab[1]))
    idx = {ab: k for k, ab in enumerate(pairs)}
    ranks = [p.rank[a] + q.rank[b] for a, b in pairs]
    covers = []
    for (a, b), k in idx.items():
        for a2 in p.up[a]:
            covers.append((k, idx[(a2, b)]))
        for b2 in q.up[b]:
            covers.append((k, idx[(a, b2)]))
    labels = None
    var_names = None
    if (p.labels is not None and q.labels is not None and p.var_names and q.var_names
            and not set(p.var_names) & set(q.var_names)):
        labels = [p.labels[a] + q.labels[b] for a, b in pairs]
        var_names = p.var_names + q.var_names
    sources = tuple(((0, a), (1, b)) for a, b in pairs)
    name = f"cart({p.name or '?'},{q.name or '?'})"
    poset = RankedPoset(ranks, covers, labels=labels, var_names=var_names, name=name)
    return OperationResult(poset, Provenance(sources), "cartesian", (p, q))


def adjoin_extreme(p: RankedPoset, which: str) -> RankedPoset:
    """Add a new top above all maxima, or a new bottom below all minima.

    Adding a top needs every maximal element at one rank; adding a
    bottom shifts all ranks up by one and needs every minimal element
    at old rank 0, so the new rank-0 minimum covers them lawfully.
    """
    covers = _cover_pairs(p)
    if which == "top":
        maxs = p.maximal_elements()
        ranks_seen = {p.rank[i] for i in maxs}
        if len(ranks_seen) != 1:
            raise PosetError(f"maximal elements at mixed ranks {sorted(ranks_seen)}")
        r = ranks_seen.pop()
        ranks = list(p.rank) + [r + 1]
        covers += [(i, p.n) for i in maxs]
        return RankedPoset(ranks, covers, name=f"hat({p.name or '?'})")
    if which == "bottom":
        mins = p.minimal_elements()
        ranks_seen = {p.rank[i] for i in mins}
        if ranks_seen != {0}:
            raise PosetError(f"minimal elements at ranks {sorted(ranks_seen)}, need all 0")
        ranks = [r + 1 for r in p.rank] + [0]
        covers += [(p.n, i) for i in mins]
        return RankedPoset(ranks, covers, name=f"uhat({p.name or '?'})")
    raise PosetError(f"which must be 'top' or 'bottom', not {which!r}")


def remove_extreme(p: RankedPoset, which: str) -> RankedPoset:
    """Drop the unique top or bottom; surviving ranks are unchanged."""
    if which == "top":
        ext = p.maximal_elements()
    elif which == "bottom":
        ext = p.minimal_elements()
    else:
        raise PosetError(f"which must be 'top' or 'bottom', not {which!r}")
    if len(ext) != 1:
        raise PosetError(f"poset has {len(ext)} {which} extremes, needs exactly 1")
    gone = ext[0]
    keep = [i for i in range(p.n) if i != gone]
    renum = {o: k for k, o in enumerate(keep)}
    ranks = [p.rank[o] for o in keep]
    covers = [(renum[a], renum[b]) for a, b in _cover_pairs(p)
              if a != gone and b != gone]
    labels = [p.labels[o] for o in keep] if p.labels is not None else None
    tag = "bar" if which == "top" else "ubar"
    return RankedPoset(ranks, covers, labels=labels, var_names=p.var_names,
                       name=f"{tag}({p.name or '?'})")


def relabel_swap_xy(p: RankedPoset) -> RankedPoset:
    """Mirror a two-variable labeled poset by swapping exponent coordinates."""
    if p.labels is None or len(p.var_names or ()) != 2:
        raise PosetError("swap needs a two-variable labeled poset")
    labels = [(b, a) for a, b in p.labels]
    return RankedPoset(p.rank, _cover_pairs(p), labels=labels,
                       var_names=p.var_names, name=f"swapxy({p.name or '?'})")


def restrict_to_factors(res: OperationResult, factor_indices) -> InducedSubposet:
    """Induced subposet on the elements coming from the given factors.

    Glue points whose sources meet the chosen factors are kept, so the
    restriction of a diamond to two factors is again their diamond.
    """
    wanted = set(factor_indices)
    ids = [i for i, rec in enumerate(res.provenance.sources)
           if any(f in wanted for f, _ in rec)]
    return induced_subposet(res.poset, ids)
