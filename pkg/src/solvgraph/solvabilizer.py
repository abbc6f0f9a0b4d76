"""Solvabilizer computation: per-element sets, degrees, and size profiles.

The solvabilizer of x is the set of all y that generate a solvable subgroup
together with x; the vertex degree of x in the non-solvable graph is the
complement count.  The full per-element map is computed directly only for
one representative per conjugacy class (collapsed further across coprime
powers, which share solvabilizers) and transported by conjugation; a seeded
fraction of transported results is re-verified by direct scan.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError
from .group import FiniteGroup
from .subgroups import is_solvable, solvable_radical, two_generated

DEFAULT_AUDIT_FRACTION = 0.1
DEFAULT_SEED = 12345


@dataclass(frozen=True)
class SolvabilizerResult:
    """Solvabilizer of one element, with its degree and a coset decomposition.

    ``members`` is the sorted index set; it equals the disjoint union of the
    cosets ``rep * <element>`` over ``coset_reps``.
    """

    element: int
    order: int
    members: tuple[int, ...]
    degree: int
    coset_reps: tuple[int, ...]

    @property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def nonsolvable_witness_key(self, G: FiniteGroup, y: int) -> tuple[int, ...] | None:
        """Cache key of <element, y> when that subgroup is known non-solvable."""
        if y in self.member_set:
            return None
        return two_generated(G, self.element, y).canonical_key

    def to_json(self) -> dict:
        return {
            "element": int(self.element),
            "order": int(self.order),
            "members-count": len(self.members),
            "degree": int(self.degree),
            "cosets": [int(r) for r in self.coset_reps],
        }


@dataclass(frozen=True)
class OrdSolProfile:
    """Multiset of solvabilizer sizes over all elements, as a size -> count map."""

    counts: tuple[tuple[int, int], ...]  # sorted by size

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def sizes(self) -> tuple[int, ...]:
        """The distinct sizes occurring (the profile with multiplicity dropped)."""
        return tuple(s for s, _ in self.counts)

    def to_json(self) -> dict:
        return {"profile": {str(s): int(c) for s, c in self.counts}}

    @classmethod
    def from_sizes(cls, sizes) -> "OrdSolProfile":
        counts: dict[int, int] = {}
        for s in sizes:
            counts[s] = counts.get(s, 0) + 1
        return cls(tuple(sorted(counts.items())))


def sol_pair(G: FiniteGroup, x: int, y: int) -> bool:
    """Whether x and y generate a solvable subgroup (symmetric, cached)."""
    if x == y or x == G.identity or y == G.identity:
        return True
    return is_solvable(G, two_generated(G, x, y))


def _direct_member_scan(G: FiniteGroup, x: int) -> np.ndarray:
    hits = [y for y in range(G.order) if sol_pair(G, x, y)]
    return np.fromiter(hits, dtype=np.int64)


def _conjugate_set(G: FiniteGroup, h: int, members: np.ndarray) -> np.ndarray:
    return np.sort(G.table[G.table[h, members], G.inverse[h]])


def _coset_decomposition(G: FiniteGroup, x: int, members: tuple[int, ...]) -> tuple[int, ...]:
    """Greedy sweep: take the least uncovered member, emit its rep*<x> coset."""
    cyc = np.fromiter(G.cyclic_subgroup(x), dtype=np.int64)
    in_members = np.zeros(G.order, dtype=bool)
    in_members[np.fromiter(members, dtype=np.int64)] = True
    covered = np.zeros(G.order, dtype=bool)
    reps: list[int] = []
    for m in members:
        if covered[m]:
            continue
        coset = G.table[m, cyc]
        if not in_members[coset].all() or covered[coset].any():
            raise InvariantViolationError(
                f"solvabilizer of element {m} is not a disjoint union of cosets "
                f"of the cyclic subgroup"
            )
        covered[coset] = True
        reps.append(int(m))
    return tuple(reps)


def _make_result(G: FiniteGroup, x: int, members: tuple[int, ...]) -> SolvabilizerResult:
    radical = solvable_radical(G)
    member_set = frozenset(members)
    if x not in member_set:
        raise InvariantViolationError(f"element {x} missing from its own solvabilizer")
    if not radical.member_set <= member_set:
        raise InvariantViolationError("solvable radical escapes a solvabilizer")
    if not member_set.issuperset(G.normalizer_of_cyclic(x)):
        raise InvariantViolationError(
            "normalizer of the cyclic subgroup escapes the solvabilizer"
        )
    size = len(members)
    order = int(G.element_orders[x])
    cent = len(G.centralizer(x))
    for divisor, what in ((radical.size, "radical order"), (order, "element order"),
                          (cent, "centralizer order")):
        if size % divisor != 0:
            raise InvariantViolationError(
                f"solvabilizer size {size} of element {x} is not divisible by "
                f"the {what} {divisor}"
            )
    return SolvabilizerResult(
        element=x,
        order=order,
        members=members,
        degree=G.order - size,
        coset_reps=_coset_decomposition(G, x, members),
    )


def solvabilizer(G: FiniteGroup, x: int) -> SolvabilizerResult:
    """Direct scan for one element, with all structural invariants asserted."""
    members = tuple(int(i) for i in _direct_member_scan(G, x))
    return _make_result(G, x, members)


def solvabilizer_of_set(G: FiniteGroup, A, B) -> tuple[int, ...]:
    """Elements of A whose pair with every element of B is solvable."""
    A = tuple(A)
    B = tuple(B)
    if not A or not B:
        raise ValueError("solvabilizer of empty sets is undefined")
    return tuple(a for a in sorted(set(A)) if all(sol_pair(G, a, b) for b in B))


def _coprime_power_families(G: FiniteGroup):
    """Map each class id to (base element, in-class power of the base).

    Coprime powers of a base share its solvabilizer as a set, so one direct
    scan per family suffices.
    """
    classes, class_id, _ = G.conjugacy_classes()
    family: dict[int, tuple[int, int]] = {}
    for cls in classes:
        rep = cls[0]
        cid = int(class_id[rep])
        if cid in family:
            continue
        family[cid] = (rep, rep)
        o = int(G.element_orders[rep])
        for i in range(2, o):
            if math.gcd(i, o) == 1:
                z = G.power(rep, i)
                family.setdefault(int(class_id[z]), (rep, z))
    return family


def all_solvabilizers(
    G: FiniteGroup,
    *,
    audit_fraction: float = DEFAULT_AUDIT_FRACTION,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> dict[int, SolvabilizerResult]:
    """Solvabilizer results for every element of G.

    Direct scans run once per conjugacy-class family; every other element's
    set is transported along a conjugating element.  ``audit_fraction`` of
    the transported sets are re-verified by direct scan (deterministic under
    ``seed``); any mismatch raises ``InvariantViolationError``.
    """
    if G._solv_results is not None:
        return G._solv_results
    classes, class_id, conjugator = G.conjugacy_classes()
    family = _coprime_power_families(G)
    bases = sorted({base for base, _ in family.values()})

    if jobs > 1 and len(bases) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scans = list(pool.map(lambda b: _direct_member_scan(G, b), bases))
        base_members = dict(zip(bases, scans))
    else:
        base_members = {b: _direct_member_scan(G, b) for b in bases}

    results: dict[int, SolvabilizerResult] = {}
    transported: list[int] = []
    for e in range(G.order):
        base, z = family[int(class_id[e])]
        if e == base:
            members = base_members[base]
        else:
            h = int(G.table[conjugator[e], G.inverse[conjugator[z]]])
            members = _conjugate_set(G, h, base_members[base])
            transported.append(e)
        results[e] = _make_result(G, e, tuple(int(i) for i in members))

    if audit_fraction > 0 and transported:
        rng = random.Random(seed)
        k = max(1, round(audit_fraction * len(transported)))
        for e in rng.sample(transported, min(k, len(transported))):
            direct = tuple(int(i) for i in _direct_member_scan(G, e))
            if direct != results[e].members:
                raise InvariantViolationError(
                    f"transported solvabilizer of element {e} disagrees with a "
                    f"direct scan"
                )

    G._solv_results = results
    return results


def ord_sol(
    G: FiniteGroup,
    *,
    audit_fraction: float = DEFAULT_AUDIT_FRACTION,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> OrdSolProfile:
    """The multiset of solvabilizer sizes over all elements."""
    results = all_solvabilizers(G, audit_fraction=audit_fraction, seed=seed, jobs=jobs)
    return OrdSolProfile.from_sizes(len(r.members) for r in results.values())
