"""Subgroup machinery: closures, derived series, solvability, quotients, radical."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolationError
from .group import FiniteGroup


@dataclass(eq=False)
class SubgroupSet:
    """A subgroup of a parent group, held as a sorted index tuple.

    Instances are deduplicated per parent through ``closure``, so the cached
    verdicts (solvability, derived-series sizes) accumulate across callers.
    The member tuple doubles as the canonical cache key.
    """

    parent: FiniteGroup
    members: tuple[int, ...]
    solvable: bool | None = None
    derived_sizes: tuple[int, ...] | None = None
    _member_set: frozenset = field(default=None, repr=False)

    def __post_init__(self):
        if self._member_set is None:
            self._member_set = frozenset(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def canonical_key(self) -> tuple[int, ...]:
        return self.members

    @property
    def member_set(self) -> frozenset:
        return self._member_set

    def __contains__(self, index: int) -> bool:
        return index in self._member_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupSet)
            and other.parent is self.parent
            and other.members == self.members
        )

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"SubgroupSet(order={self.size} of {self.parent.name})"


def _close_indices(table: np.ndarray, seed: np.ndarray) -> np.ndarray:
    """Smallest product-closed superset of seed (seed must contain the identity)."""
    cur = np.unique(seed)
    while True:
        nxt = np.unique(table[np.ix_(cur, cur)])
        if nxt.size == cur.size:
            return nxt
        cur = nxt


def _register(G: FiniteGroup, members: tuple[int, ...]) -> SubgroupSet:
    sub = G._subgroup_registry.get(members)
    if sub is None:
        sub = SubgroupSet(G, members)
        G._subgroup_registry[members] = sub
    return sub


def closure(G: FiniteGroup, seed) -> SubgroupSet:
    """Smallest subgroup of G containing the seed indices."""
    seed = np.fromiter((int(s) for s in seed), dtype=np.int64) if not isinstance(
        seed, np.ndarray
    ) else seed.astype(np.int64)
    seed = np.append(seed, G.identity)
    members = tuple(int(i) for i in _close_indices(G.table, seed))
    return _register(G, members)


def two_generated(G: FiniteGroup, x: int, y: int) -> SubgroupSet:
    """The subgroup generated by x and y (symmetric in its arguments)."""
    key = (x, y) if x <= y else (y, x)
    members = G._pair_subgroup.get(key)
    if members is None:
        sub = closure(G, key)
        G._pair_subgroup[key] = sub.members
        return sub
    return _register(G, members)


def derived_subgroup(G: FiniteGroup, S: SubgroupSet) -> SubgroupSet:
    """Closure of all commutators a^-1 b^-1 a b with a, b in S."""
    m = np.fromiter(S.members, dtype=np.int64)
    im = G.inverse[m]
    comm = G.table[G.table[np.ix_(im, im)], G.table[np.ix_(m, m)]]
    members = tuple(int(i) for i in _close_indices(G.table, np.unique(comm)))
    return _register(G, members)


def is_solvable(G: FiniteGroup, S: SubgroupSet) -> bool:
    """Whether the derived series of S reaches the trivial subgroup."""
    if S.solvable is not None:
        return S.solvable
    sizes = [S.size]
    cur = S
    chain = [S]
    while True:
        if cur.size == 1:
            verdict = True
            break
        if cur.solvable is not None:
            verdict = cur.solvable
            break
        nxt = derived_subgroup(G, cur)
        if nxt.size == cur.size:
            verdict = False
            break
        sizes.append(nxt.size)
        chain.append(nxt)
        cur = nxt
    for i, sub in enumerate(chain):
        sub.solvable = verdict
        if verdict and sub.derived_sizes is None:
            sub.derived_sizes = tuple(sizes[i:])
    return verdict


def is_normal(G: FiniteGroup, S: SubgroupSet) -> bool:
    """Whether gSg^-1 = S for every generator g of G."""
    m = np.fromiter(S.members, dtype=np.int64)
    for g in G.generator_indices:
        conj = G.table[G.table[g, m], G.inverse[g]]
        if not np.array_equal(np.sort(conj), m):
            return False
    return True


def conjugate_subgroup(G: FiniteGroup, g: int, S: SubgroupSet) -> SubgroupSet:
    m = np.fromiter(S.members, dtype=np.int64)
    conj = np.sort(G.table[G.table[g, m], G.inverse[g]])
    return _register(G, tuple(int(i) for i in conj))


def whole_group(G: FiniteGroup) -> SubgroupSet:
    return _register(G, tuple(range(G.order)))


def trivial_subgroup(G: FiniteGroup) -> SubgroupSet:
    return _register(G, (G.identity,))


def normalizer_of_subgroup(G: FiniteGroup, S: SubgroupSet) -> tuple[int, ...]:
    """Sorted indices of all g with gSg^-1 = S."""
    m = np.fromiter(S.members, dtype=np.int64)
    out = []
    member_mask = np.zeros(G.order, dtype=bool)
    member_mask[m] = True
    for g in range(G.order):
        conj = G.table[G.table[g, m], G.inverse[g]]
        if member_mask[conj].all():
            out.append(g)
    return tuple(out)


def solvable_radical(G: FiniteGroup) -> SubgroupSet:
    """Elements x with <x, y> solvable for every y; verified to be a normal
    solvable subgroup (any failure signals an engine bug)."""
    if G._radical is not None:
        return G._radical
    classes, class_id, _ = G.conjugacy_classes()
    full: list[int] = []
    for cls in classes:
        rep = cls[0]
        if all(is_solvable(G, two_generated(G, rep, y)) for y in range(G.order)):
            full.extend(cls)
    members = tuple(sorted(full))
    radical = _register(G, members)

    check = closure(G, members)
    if check.members != members:
        raise InvariantViolationError(
            "solvable radical candidate is not closed under the group operation"
        )
    if not is_normal(G, radical):
        raise InvariantViolationError("solvable radical candidate is not normal")
    if not is_solvable(G, radical):
        raise InvariantViolationError("solvable radical candidate is not solvable")
    G._radical = radical
    return radical


def subgroup_as_group(G: FiniteGroup, S: SubgroupSet, *, name: str | None = None) -> FiniteGroup:
    """Promote a subgroup to a standalone group on reindexed elements.

    Element i of the result corresponds to ``S.members[i]``; labels carry
    over from the parent.
    """
    m = np.fromiter(S.members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[m] = np.arange(m.size)
    table = pos[G.table[np.ix_(m, m)]]
    if (table < 0).any():
        raise InvariantViolationError("member set is not closed under the group operation")
    labels = [G.label(int(i)) for i in m]
    return FiniteGroup.from_table(
        table.astype(np.int32),
        name=name or f"{G.name}-sub{S.size}",
        labels=labels,
    )


@dataclass
class QuotientGroup:
    """G/N realized on coset indices through a representative table."""

    parent: FiniteGroup
    normal_subgroup: SubgroupSet
    cosets: tuple[int, ...]  # least-element representative per coset index
    coset_of: np.ndarray  # element index -> coset index
    group: FiniteGroup

    def coset_members(self, c: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.coset_of == c)[0])


def quotient_group(G: FiniteGroup, N: SubgroupSet) -> QuotientGroup:
    """Quotient by a normal subgroup, multiplication induced by representatives."""
    if not is_normal(G, N):
        raise ValueError("cannot form the quotient: subgroup is not normal")
    n = G.order
    nm = np.fromiter(N.members, dtype=np.int64)
    coset_of = np.full(n, -1, dtype=np.int64)
    reps: list[int] = []
    for i in range(n):
        if coset_of[i] >= 0:
            continue
        block = G.table[i, nm]
        coset_of[block] = len(reps)
        reps.append(i)
    q = len(reps)
    rep_arr = np.fromiter(reps, dtype=np.int64)
    qtable = coset_of[G.table[np.ix_(rep_arr, rep_arr)]].astype(np.int32)
    labels = [f"[{G.label(r)}]" for r in reps]
    gen_cosets: list[int] = []
    for g in G.generator_indices:
        c = int(coset_of[g])
        if c != 0 and c not in gen_cosets:
            gen_cosets.append(c)
    group = FiniteGroup.from_table(
        qtable,
        name=f"{G.name}/N{N.size}",
        labels=labels,
        generator_indices=gen_cosets if q > 1 else (),
    )
    return QuotientGroup(
        parent=G,
        normal_subgroup=N,
        cosets=tuple(reps),
        coset_of=coset_of,
        group=group,
    )


def all_normal_subgroups(
    G: FiniteGroup, *, within: SubgroupSet | None = None, cap: int = 512
) -> tuple[list[SubgroupSet], bool]:
    """Normal subgroups of G, optionally only those contained in ``within``.

    Every normal subgroup is a join of normal closures of single conjugacy
    classes, so the join-closure of those base subgroups enumerates the whole
    set.  Enumeration stops at ``cap`` subgroups; the second return value is
    False when it was truncated.
    """
    classes, _, _ = G.conjugacy_classes()
    pool: dict[tuple[int, ...], SubgroupSet] = {}
    triv = trivial_subgroup(G)
    pool[triv.members] = triv
    for cls in classes:
        sub = closure(G, cls)
        pool.setdefault(sub.members, sub)
    complete = True
    worklist = list(pool.values())
    while worklist and complete:
        cur = worklist.pop()
        for other in list(pool.values()):
            joined = closure(G, cur.members + other.members)
            if joined.members not in pool:
                pool[joined.members] = joined
                worklist.append(joined)
                if len(pool) > cap:
                    complete = False
                    break
    subs = [s for s in pool.values() if within is None or s.member_set <= within.member_set]
    subs.sort(key=lambda s: (s.size, s.members))
    return subs, complete
