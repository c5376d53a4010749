"""Finite ranked posets: data model, validation, shadow calculus, isomorphism."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class PosetError(ValueError):
    """Raised when an operation's preconditions are violated."""


@dataclass(frozen=True)
class Witness:
    """Replayable evidence for a failed check.

    ``kind`` is one of: cover-rank, self-cover, min-shadow-beaten,
    shadow-not-initial, segment-inequality.  ``elements`` carries the
    offending element ids, ``rival`` the competing set (the beating
    subset, the expected prefix, ...), ``sizes`` the measured numbers.
    """

    kind: str
    level: int | None = None
    q: int | None = None
    elements: tuple = ()
    rival: tuple = ()
    sizes: tuple = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "q": self.q,
            "elements": list(self.elements),
            "rival": list(self.rival),
            "sizes": list(self.sizes),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Verdict:
    status: str  # "ok" | "violation"
    witness: Witness | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @staticmethod
    def passing() -> "Verdict":
        return Verdict("ok")

    @staticmethod
    def failing(witness: Witness) -> "Verdict":
        return Verdict("violation", witness)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness.to_json() if self.witness else None,
        }


class RankedPoset:
    """Finite poset presented by a rank function and a cover relation.

    Elements are dense ids ``0..n-1``.  ``levels[d]`` lists the ids of
    rank ``d`` in ascending id order, which makes every derived object
    (orders, tables, witnesses) deterministic.  A level may be empty:
    removing a unique minimum, for instance, leaves the survivors at
    their old ranks.  Values are immutable after construction and safe
    to share across threads.
    """

    __slots__ = ("n", "rank", "up", "down", "levels", "labels", "var_names",
                 "name", "pos_in_level", "_leq")

    def __init__(self, ranks, covers, labels=None, var_names=None, name=""):
        self.n = len(ranks)
        self.rank = tuple(int(r) for r in ranks)
        if any(r < 0 for r in self.rank):
            raise PosetError("ranks must be nonnegative")
        up = [set() for _ in range(self.n)]
        down = [set() for _ in range(self.n)]
        for a, b in covers:  # b covers a
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise PosetError(f"cover ({a},{b}) references unknown element")
            up[a].add(b)
            down[b].add(a)
        self.up = tuple(tuple(sorted(s)) for s in up)
        self.down = tuple(tuple(sorted(s)) for s in down)
        height = max(self.rank, default=-1) + 1
        lv = [[] for _ in range(height)]
        for i, r in enumerate(self.rank):
            lv[r].append(i)
        self.levels = tuple(tuple(l) for l in lv)
        pos = [0] * self.n
        for l in self.levels:
            for k, i in enumerate(l):
                pos[i] = k
        self.pos_in_level = tuple(pos)
        self.labels = tuple(tuple(v) for v in labels) if labels is not None else None
        self.var_names = tuple(var_names) if var_names is not None else None
        self.name = name
        self._leq = None

    @property
    def max_rank(self) -> int:
        return len(self.levels) - 1

    def level(self, d: int) -> tuple:
        if 0 <= d < len(self.levels):
            return self.levels[d]
        return ()

    def level_sizes(self) -> tuple:
        return tuple(len(l) for l in self.levels)

    def minimal_elements(self) -> tuple:
        return tuple(i for i in range(self.n) if not self.down[i])

    def maximal_elements(self) -> tuple:
        return tuple(i for i in range(self.n) if not self.up[i])

    def leq(self, a: int, b: int) -> bool:
        """Partial-order comparison, a <= b (reflexive-transitive closure of covers)."""
        return bool(self._leq_masks()[a] >> b & 1)

    def _leq_masks(self):
        # _leq[a] = bitmask over ids b with a <= b; computed once on demand.
        if self._leq is None:
            masks = [1 << i for i in range(self.n)]
            order = sorted(range(self.n), key=lambda i: -self.rank[i])
            for a in order:
                m = masks[a]
                for b in self.up[a]:
                    m |= masks[b]
                masks[a] = m
            self._leq = tuple(masks)
        return self._leq

    def element_name(self, i: int) -> str:
        if self.labels is not None:
            return format_monomial(self.labels[i], self.var_names)
        return f"#{i}"

    def __repr__(self):
        tag = self.name or "poset"
        return f"<RankedPoset {tag}: {self.n} elements, ranks 0..{self.max_rank}>"


def format_monomial(exps, names) -> str:
    parts = []
    for e, v in zip(exps, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def validate_poset(p: RankedPoset) -> Verdict:
    """Check the ranked-poset invariants, reporting the first violation.

    Covers must raise rank by exactly one and may not be loops; levels
    and the up/down maps are consistent by construction.  Acyclicity
    (hence antisymmetry) follows from the rank condition.
    """
    for a in range(p.n):
        for b in p.up[a]:
            if a == b:
                return Verdict.failing(Witness(
                    "self-cover", level=p.rank[a], elements=(a,),
                    detail=f"element {a} covers itself"))
            delta = p.rank[b] - p.rank[a]
            if delta != 1:
                return Verdict.failing(Witness(
                    "cover-rank", level=p.rank[a], elements=(a, b),
                    sizes=(delta,),
                    detail=f"cover raises rank by {delta}"))
    for d, l in enumerate(p.levels):
        for i in l:
            if p.rank[i] != d:
                return Verdict.failing(Witness(
                    "level-mismatch", level=d, elements=(i,),
                    detail="levels disagree with rank_of"))
    return Verdict.passing()


class LevelSubset:
    """A set of elements within one level, as a bitmask over level positions.

    Membership is O(1) and union/intersection/difference are single
    word-parallel integer operations; the Macaulay checker enumerates up
    to 2^|level| of these.
    """

    __slots__ = ("poset", "level", "bits")

    def __init__(self, poset: RankedPoset, level: int, bits: int = 0):
        self.poset = poset
        self.level = level
        self.bits = bits

    @classmethod
    def of(cls, poset: RankedPoset, ids, level: int | None = None) -> "LevelSubset":
        ids = list(ids)
        if not ids:
            if level is None:
                raise PosetError("empty LevelSubset needs an explicit level")
            return cls(poset, level, 0)
        lvl = poset.rank[ids[0]]
        bits = 0
        for i in ids:
            if poset.rank[i] != lvl:
                raise PosetError(f"elements {ids[0]} and {i} are not of the same rank")
            bits |= 1 << poset.pos_in_level[i]
        if level is not None and level != lvl:
            raise PosetError(f"members have rank {lvl}, not {level}")
        return cls(poset, lvl, bits)

    def ids(self) -> tuple:
        lv = self.poset.level(self.level)
        return tuple(lv[k] for k in _bit_positions(self.bits))

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, i: int) -> bool:
        return (self.poset.rank[i] == self.level
                and self.bits >> self.poset.pos_in_level[i] & 1 == 1)

    def _check_peer(self, other: "LevelSubset"):
        if self.poset is not other.poset or self.level != other.level:
            raise PosetError("set algebra needs subsets of one level of one poset")

    def __or__(self, other):
        self._check_peer(other)
        return LevelSubset(self.poset, self.level, self.bits | other.bits)

    def __and__(self, other):
        self._check_peer(other)
        return LevelSubset(self.poset, self.level, self.bits & other.bits)

    def __sub__(self, other):
        self._check_peer(other)
        return LevelSubset(self.poset, self.level, self.bits & ~other.bits)

    def __eq__(self, other):
        return (isinstance(other, LevelSubset) and self.poset is other.poset
                and self.level == other.level and self.bits == other.bits)

    def __le__(self, other):
        self._check_peer(other)
        return self.bits & ~other.bits == 0

    def __hash__(self):
        return hash((id(self.poset), self.level, self.bits))

    def __repr__(self):
        names = ", ".join(self.poset.element_name(i) for i in self.ids())
        return f"{{{names}}}@rank{self.level}"


def _bit_positions(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def upper_shadow(p: RankedPoset, a: LevelSubset) -> LevelSubset:
    """Elements covering some element of ``a``; lives one level up."""
    if a.poset is not p:
        raise PosetError("subset belongs to a different poset")
    out = 0
    lv = p.level(a.level)
    for k in _bit_positions(a.bits):
        for b in p.up[lv[k]]:
            out |= 1 << p.pos_in_level[b]
    return LevelSubset(p, a.level + 1, out)


def lower_shadow(p: RankedPoset, a: LevelSubset) -> LevelSubset:
    """Elements covered by some element of ``a``; lives one level down."""
    if a.poset is not p:
        raise PosetError("subset belongs to a different poset")
    if a.bits == 0:
        return LevelSubset(p, max(a.level - 1, 0), 0)
    out = 0
    lv = p.level(a.level)
    for k in _bit_positions(a.bits):
        for b in p.down[lv[k]]:
            out |= 1 << p.pos_in_level[b]
    return LevelSubset(p, a.level - 1, out)


@dataclass(frozen=True)
class PosetIso:
    """A rank- and cover-preserving bijection between two posets."""

    mapping: tuple  # mapping[i] = image of i

    def apply(self, i: int) -> int:
        return self.mapping[i]

    def inverse(self) -> "PosetIso":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return PosetIso(tuple(inv))

    def compose(self, other: "PosetIso") -> "PosetIso":
        """self after other: i -> self(other(i))."""
        return PosetIso(tuple(self.mapping[j] for j in other.mapping))

    def is_valid(self, p: RankedPoset, q: RankedPoset) -> bool:
        m = self.mapping
        if len(m) != p.n or p.n != q.n or sorted(m) != list(range(q.n)):
            return False
        for i in range(p.n):
            if p.rank[i] != q.rank[m[i]]:
                return False
            if sorted(m[b] for b in p.up[i]) != list(q.up[m[i]]):
                return False
        return True


def _refined_signatures(p: RankedPoset, rounds: int = 2):
    sig = [(p.rank[i], len(p.up[i]), len(p.down[i])) for i in range(p.n)]
    for _ in range(rounds):
        sig = [
            (sig[i], tuple(sorted(sig[b] for b in p.up[i])),
             tuple(sorted(sig[b] for b in p.down[i])))
            for i in range(p.n)
        ]
    return sig


def are_isomorphic(p: RankedPoset, q: RankedPoset) -> PosetIso | None:
    """Search for an isomorphism; None when provably absent.

    Backtracking over rank-respecting candidate maps, pruned by refined
    (rank, up-degree, down-degree) signatures.  Candidates are tried in
    ascending id order, so the returned map is deterministic.
    """
    if p.n != q.n or p.level_sizes() != q.level_sizes():
        return None
    sp = _refined_signatures(p)
    sq = _refined_signatures(q)
    if sorted(map(repr, sp)) != sorted(map(repr, sq)):
        return None
    by_sig: dict = {}
    for j in range(q.n):
        by_sig.setdefault(repr(sq[j]), []).append(j)
    cands = [by_sig.get(repr(sp[i]), []) for i in range(p.n)]
    # most-constrained-first, ties by id for determinism
    order = sorted(range(p.n), key=lambda i: (len(cands[i]), i))
    mapping = [-1] * p.n
    used = [False] * q.n

    def fits(i, j):
        for b in p.up[i]:
            jb = mapping[b]
            if jb >= 0 and jb not in q.up[j]:
                return False
        for b in p.down[i]:
            jb = mapping[b]
            if jb >= 0 and j not in q.up[jb]:
                return False
        # mapped q-covers of j must be hit by covers of i
        for jb in q.up[j]:
            if used[jb]:
                src = mapping.index(jb)
                if src not in p.up[i]:
                    return False
        for jb in q.down[j]:
            if used[jb]:
                src = mapping.index(jb)
                if src not in p.down[i]:
                    return False
        return True

    def extend(k):
        if k == p.n:
            return True
        i = order[k]
        for j in cands[i]:
            if not used[j] and fits(i, j):
                mapping[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                mapping[i] = -1
                used[j] = False
        return False

    if extend(0):
        iso = PosetIso(tuple(mapping))
        assert iso.is_valid(p, q)
        return iso
    return None


@dataclass(frozen=True)
class InducedSubposet:
    """A subposet on a subset of elements, with covers of the induced order."""

    poset: RankedPoset
    old_of_new: tuple
    new_of_old: dict = field(hash=False)


def induced_subposet(p: RankedPoset, ids, name="") -> InducedSubposet:
    """Restrict p to ``ids``; covers are recomputed from the induced order."""
    old = tuple(sorted(set(ids)))
    new_of_old = {o: k for k, o in enumerate(old)}
    masks = p._leq_masks()
    keep = 0
    for o in old:
        keep |= 1 << o
    # strict induced relation, then transitive reduction
    rel = [(masks[o] & keep) & ~(1 << o) for o in old]
    covers = []
    for a, o in enumerate(old):
        above = rel[a]
        for b_old in _bit_positions(above):
            b = new_of_old[b_old]
            mid = False
            for c_old in _bit_positions(above & ~(1 << b_old)):
                if masks[c_old] >> b_old & 1:
                    mid = True
                    break
            if not mid:
                covers.append((a, b))
    labels = [p.labels[o] for o in old] if p.labels is not None else None
    sub = RankedPoset([p.rank[o] for o in old], covers, labels=labels,
                      var_names=p.var_names, name=name or f"sub({p.name})")
    return InducedSubposet(sub, old, new_of_old)
