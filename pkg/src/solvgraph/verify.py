"""The verification battery: structural facts checked on a concrete group.

Each check re-establishes one fact about solvabilizers or the non-solvable
graph and reports pass/fail with a witness.  Checks that only make sense for
non-solvable input report not-applicable on solvable groups rather than a
vacuous pass.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._version import __version__
from .config import SCHEMA_VERSION, RunConfig
from .engine import AnalysisContext, group_descriptor
from .errors import InvariantViolationError, SearchBudgetExceededError
from .graph import diameter, find_k44, is_regular, is_tree
from .group import FiniteGroup
from .solvabilizer import sol_pair, solvabilizer, solvabilizer_of_set
from .subgroups import (
    closure,
    is_normal,
    is_solvable,
    normalizer_of_subgroup,
    solvable_radical,
    subgroup_as_group,
)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
NOT_APPLICABLE = "not-applicable"


@dataclass
class CheckResult:
    check_id: str
    statement: str
    status: str
    witness: dict | None
    elapsed_ms: float

    def to_json(self, *, include_timings: bool = False) -> dict:
        return {
            "id": self.check_id,
            "statement": self.statement,
            "status": self.status,
            "witness": self.witness,
            "ms": round(self.elapsed_ms, 3) if include_timings else None,
        }


@dataclass
class VerificationReport:
    group: dict
    params: dict
    checks: list[CheckResult]

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0, NOT_APPLICABLE: 0}
        for c in self.checks:
            counts[c.status] += 1
        counts["total"] = len(self.checks)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_json(self, *, include_timings: bool = False) -> dict:
        return {
            "schema-version": SCHEMA_VERSION,
            "engine-version": __version__,
            "group": self.group,
            "params": self.params,
            "checks": [c.to_json(include_timings=include_timings) for c in self.checks],
            "summary": self.summary(),
        }

    def to_json_text(self, *, include_timings: bool = False) -> str:
        return json.dumps(self.to_json(include_timings=include_timings), indent=2,
                          sort_keys=True) + "\n"


def _el(G: FiniteGroup, i: int) -> dict:
    return {"index": int(i), "label": G.label(int(i))}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _conj_sorted(G: FiniteGroup, h: int, members) -> tuple[int, ...]:
    m = np.fromiter(members, dtype=np.int64)
    return tuple(int(i) for i in np.sort(G.table[G.table[h, m], G.inverse[h]]))


# -- the checks -----------------------------------------------------------


def _check_connectivity_witness(ctx: AnalysisContext, rng) -> tuple[str, dict | None]:
    g = ctx.graph("induced")
    adj = g.adjacency.astype(np.int32)
    counts = adj @ adj
    v = g.vertex_count
    for p in range(v):
        for q in range(v):
            if counts[p, q] == 0:
                return FAIL, {
                    "x": _el(ctx.group, g.vertex_elements[p]),
                    "y": _el(ctx.group, g.vertex_elements[q]),
                    "reason": "no common non-solvable partner",
                }
    sample = None
    for p in range(v):
        hits = np.nonzero(~g.adjacency[p])[0]
        hits = hits[hits > p]
        if hits.size:
            q = int(hits[0])
            z = int(np.nonzero(g.adjacency[p] & g.adjacency[q])[0][0])
            sample = {
                "x": _el(ctx.group, g.vertex_elements[p]),
                "y": _el(ctx.group, g.vertex_elements[q]),
                "z": _el(ctx.group, g.vertex_elements[z]),
            }
            break
    return PASS, {"pairs-checked": int(v * v), "sample": sample}


def _check_diam_2(ctx: AnalysisContext, rng):
    d = diameter(ctx.graph("induced"))
    if d == 2:
        return PASS, {"diameter": 2}
    return FAIL, {"diameter": d if d != float("inf") else "inf"}


def _check_involution_pairs(ctx: AnalysisContext, rng):
    G = ctx.group
    involutions = [i for i in range(G.order) if int(G.element_orders[i]) == 2]
    for a in range(len(involutions)):
        for b in range(a + 1, len(involutions)):
            x, y = involutions[a], involutions[b]
            if not sol_pair(G, x, y):
                return FAIL, {"x": _el(G, x), "y": _el(G, y)}
    return PASS, {"involutions": len(involutions)}


def _check_quotient_solvabilizer(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    entries, complete = ctx.quotient_contexts()
    for N, q, qctx in entries:
        qres = qctx.results
        coset_of = q.coset_of
        for x in range(G.order):
            image = sorted({int(coset_of[y]) for y in results[x].members})
            expected = list(qres[int(coset_of[x])].members)
            if image != expected:
                return FAIL, {
                    "normal-subgroup-size": N.size,
                    "x": _el(G, x),
                    "image-size": len(image),
                    "quotient-solvabilizer-size": len(expected),
                }
    return PASS, {"normal-subgroups-tested": len(entries), "exhaustive": complete}


def _check_conjugation_solvabilizer(ctx: AnalysisContext, rng):
    G = ctx.group
    n = G.order
    samples = [(rng.randrange(n), rng.randrange(n)) for _ in range(min(5, n))]
    for g_, x in samples:
        left = solvabilizer(G, G.conjugate(g_, x)).members
        right = _conj_sorted(G, g_, solvabilizer(G, x).members)
        if left != right:
            return FAIL, {"g": _el(G, g_), "x": _el(G, x)}
    return PASS, {"samples": [[int(a), int(b)] for a, b in samples]}


def _check_monotone_solvabilizer(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    checked = 0
    for members, x in ctx.distinct_cyclic_subgroups():
        inner = solvabilizer_of_set(G, members, (x,))
        if not set(inner) <= results[x].member_set:
            return FAIL, {"subset-size": len(members), "x": _el(G, x)}
        checked += 1
    for sub in ctx.two_generated_subgroups(solvable_only=True):
        x = sub.members[1] if sub.size > 1 else sub.members[0]
        inner = solvabilizer_of_set(G, sub.members, (x,))
        if not set(inner) <= results[x].member_set:
            return FAIL, {"subset-size": sub.size, "x": _el(G, x)}
        checked += 1
    n = G.order
    for _ in range(3):
        x = rng.randrange(n)
        a = sorted(set(rng.sample(range(n), min(n, 1 + n // 3))) | {x})
        b = sorted(set(a) | set(rng.sample(range(n), min(n, 1 + n // 2))))
        inner = set(solvabilizer_of_set(G, a, (x,)))
        outer = set(solvabilizer_of_set(G, b, (x,)))
        if not inner <= outer:
            return FAIL, {"x": _el(G, x), "a-size": len(a), "b-size": len(b)}
        checked += 1
    return PASS, {"chains-checked": checked}


def _check_divisibility(ctx: AnalysisContext, rng):
    G = ctx.group
    rad = ctx.radical.size
    for x, r in ctx.results.items():
        size = len(r.members)
        cent = len(G.centralizer(x))
        for d, what in ((rad, "radical"), (r.order, "element-order"), (cent, "centralizer")):
            if size % d != 0:
                return FAIL, {"x": _el(G, x), "size": size, "divisor": d, "kind": what}
    return PASS, {"elements": G.order}


def _check_coprime_power(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    pairs = 0
    for x in range(G.order):
        o = int(G.element_orders[x])
        for i in range(2, o):
            if math.gcd(i, o) != 1:
                continue
            y = G.power(x, i)
            if results[x].members != results[y].members or results[x].degree != results[y].degree:
                return FAIL, {"x": _el(G, x), "power": i, "y": _el(G, y)}
            pairs += 1
    candidates = [x for x in range(G.order) if int(G.element_orders[x]) > 2]
    for x in rng.sample(candidates, min(3, len(candidates))):
        o = int(G.element_orders[x])
        i = next(k for k in range(2, o) if math.gcd(k, o) == 1)
        direct = solvabilizer(G, G.power(x, i)).members
        if direct != results[x].members:
            return FAIL, {"x": _el(G, x), "power": i, "kind": "direct-rescan"}
    return PASS, {"coprime-pairs": pairs}


def _check_absorption(ctx: AnalysisContext, rng):
    results = ctx.results
    subs = ctx.two_generated_subgroups(solvable_only=True)
    for sub in subs:
        for x in sub.members:
            if not sub.member_set <= results[x].member_set:
                return FAIL, {"subgroup-size": sub.size, "x": _el(ctx.group, x)}
    return PASS, {"solvable-two-generated-subgroups": len(subs)}


def _check_degree_bounds(ctx: AnalysisContext, rng):
    G = ctx.group
    n_hat = ctx.vertex_count
    for x, r in ctx.results.items():
        if x in ctx.radical.member_set:
            continue
        d = r.degree
        cent = len(G.centralizer(x))
        if 2 * r.order > d:
            return FAIL, {"x": _el(G, x), "degree": d, "bound": "2*order"}
        if not (5 < d < n_hat - 1):
            return FAIL, {"x": _el(G, x), "degree": d, "bound": "5 < degree < n-1"}
        if _is_prime(d):
            return FAIL, {"x": _el(G, x), "degree": d, "bound": "not-prime"}
        if d % cent != 0:
            return FAIL, {"x": _el(G, x), "degree": d, "bound": "centralizer-divides"}
    return PASS, {"vertices": n_hat}


def _check_s_group_dichotomy(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    if ctx.group_solvable:
        for x, r in results.items():
            if len(r.members) != G.order:
                return FAIL, {"x": _el(G, x), "solvabilizer-size": len(r.members)}
        return PASS, {"direction": "solvable: every solvabilizer is the whole group"}
    for x in range(G.order):
        if x in ctx.radical.member_set:
            continue
        m = np.fromiter(results[x].members, dtype=np.int64)
        in_m = np.zeros(G.order, dtype=bool)
        in_m[m] = True
        prod = G.table[np.ix_(m, m)]
        bad = np.argwhere(~in_m[prod])
        if bad.size:
            i, j = bad[0]
            y, z = int(m[i]), int(m[j])
            return PASS, {
                "direction": "non-solvable: a solvabilizer is not closed",
                "x": _el(G, x),
                "y": _el(G, y),
                "z": _el(G, z),
                "yz": _el(G, int(prod[i, j])),
            }
    return FAIL, {"reason": "every solvabilizer is closed although the group is not solvable"}


def _check_k44(ctx: AnalysisContext, rng):
    g = ctx.graph("induced")
    witness = find_k44(g, ctx.config.k44_budget)
    if witness is None:
        return FAIL, {"reason": "no complete bipartite 4x4 subgraph found"}
    left = [g.position_of(e) for e in witness["left"]]
    right = [g.position_of(e) for e in witness["right"]]
    if not all(g.adjacency[p, q] for p in left for q in right):
        raise InvariantViolationError("4x4 witness fails adjacency re-verification")
    return PASS, {"left": witness["left"], "right": witness["right"], "planar": False}


def _check_irregular(ctx: AnalysisContext, rng):
    g = ctx.graph("induced")
    regular, witness = is_regular(g)
    if regular:
        return FAIL, {"reason": "all vertex degrees agree"}
    a, b = witness
    return PASS, {
        "high": _el(ctx.group, a),
        "high-degree": int(g.degrees[g.position_of(a)]),
        "low": _el(ctx.group, b),
        "low-degree": int(g.degrees[g.position_of(b)]),
    }


def _check_not_tree(ctx: AnalysisContext, rng):
    g = ctx.graph("induced")
    if is_tree(g):
        return FAIL, {"vertices": g.vertex_count, "edges": g.edge_count}
    return PASS, {"vertices": g.vertex_count, "edges": g.edge_count}


def _check_alpha_bound(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    max_order = int(G.element_orders.max())
    witness: dict = {"max-element-order": max_order}
    for mode in ("full", "induced"):
        info = ctx.independence(mode)
        g = ctx.graph(mode)
        chosen = [g.position_of(e) for e in info["set"]]
        for i in range(len(chosen)):
            for j in range(i + 1, len(chosen)):
                if g.adjacency[chosen[i], chosen[j]]:
                    return FAIL, {"mode": mode, "reason": "reported set is not independent"}
        # every member's solvabilizer absorbs the set and the radical
        need = set(info["set"]) | set(ctx.radical.members)
        for e in info["set"]:
            if not need <= results[int(e)].member_set:
                return FAIL, {"mode": mode, "reason": "independent set escapes a solvabilizer"}
        witness[mode] = {"value": info["value"], "kind": info["kind"]}
    if witness["full"]["value"] < max_order:
        return FAIL, witness
    return PASS, witness


def _embedding_candidates(ctx: AnalysisContext):
    """Subgroups containing the radical, deduplicated and sorted by size."""
    pool: set[tuple[int, ...]] = set()
    for members, _ in ctx.distinct_cyclic_subgroups():
        pool.add(members)
    for sub in ctx.two_generated_subgroups(solvable_only=True):
        pool.add(sub.members)
    for sub in ctx.two_generated_subgroups(solvable_only=False):
        pool.add(sub.members)
    radical_set = ctx.radical.member_set
    picked = []
    for members in sorted(pool, key=lambda m: (len(m), m)):
        if radical_set <= set(members):
            picked.append(closure(ctx.group, members))
    return picked


def _check_subgraph_embedding(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    vacuous = 0
    embedded = 0
    for sub in _embedding_candidates(ctx):
        if is_solvable(G, sub):
            vacuous += 1
            continue
        Hg = subgroup_as_group(G, sub)
        hctx = AnalysisContext(Hg, ctx.config)
        hind = hctx.graph("induced")
        for p in range(hind.vertex_count):
            parent = sub.members[int(hind.vertex_elements[p])]
            if parent in ctx.radical.member_set:
                return FAIL, {
                    "subgroup-size": sub.size,
                    "reason": "vertex of the subgroup graph is radical in the parent",
                }
        for p in range(hind.vertex_count):
            row = np.nonzero(hind.adjacency[p])[0]
            a = sub.members[int(hind.vertex_elements[p])]
            for q in row:
                if int(q) < p:
                    continue
                b = sub.members[int(hind.vertex_elements[int(q)])]
                if b in results[a].member_set:
                    return FAIL, {
                        "subgroup-size": sub.size,
                        "x": _el(G, a),
                        "y": _el(G, b),
                        "reason": "edge of the subgroup graph is missing in the parent",
                    }
        embedded += 1
    # quotient adjacency equivalence
    entries, _ = ctx.quotient_contexts()
    for N, q, qctx in entries:
        qres = qctx.results
        coset_of = q.coset_of
        non_radical = [x for x in range(G.order) if x not in ctx.radical.member_set]
        for x in non_radical:
            sol_x = results[x].member_set
            qsol_x = qres[int(coset_of[x])].member_set
            for y in non_radical:
                if (y in sol_x) != (int(coset_of[y]) in qsol_x):
                    return FAIL, {
                        "normal-subgroup-size": N.size,
                        "x": _el(G, x),
                        "y": _el(G, y),
                        "reason": "quotient adjacency disagrees",
                    }
    return PASS, {
        "subgroups-embedded": embedded,
        "solvable-subgroups-vacuous": vacuous,
        "quotients-tested": len(entries),
    }


def _check_vertex_count_nonisomorphism(ctx: AnalysisContext, rng):
    G = ctx.group
    n_hat = ctx.vertex_count
    proper = 0
    for sub in _embedding_candidates(ctx):
        if sub.size == G.order:
            continue
        if is_solvable(G, sub):
            value = 0
        else:
            Hg = subgroup_as_group(G, sub)
            value = Hg.order - solvable_radical(Hg).size
        if value == n_hat:
            return FAIL, {"subgroup-size": sub.size, "vertex-count": value}
        proper += 1
    quotients = 0
    entries, _ = ctx.quotient_contexts()
    for N, q, qctx in entries:
        if N.size == 1:
            continue
        value = qctx.vertex_count
        if value == n_hat:
            return FAIL, {"normal-subgroup-size": N.size, "vertex-count": value}
        quotients += 1
    return PASS, {"proper-subgroups-tested": proper, "proper-quotients-tested": quotients}


def _check_normalizer_in_solvabilizer(ctx: AnalysisContext, rng):
    G = ctx.group
    results = ctx.results
    for x in range(G.order):
        if not set(G.normalizer_of_cyclic(x)) <= results[x].member_set:
            return FAIL, {"x": _el(G, x), "kind": "cyclic"}
    local = 0
    pool = set()
    for members, _ in ctx.distinct_cyclic_subgroups():
        if len(members) > 1:
            pool.add(members)
    for sub in ctx.two_generated_subgroups(solvable_only=True):
        if sub.size > 1:
            pool.add(sub.members)
    for members in sorted(pool, key=lambda m: (len(m), m)):
        sub = closure(G, members)
        if not is_solvable(G, sub):
            continue
        K = set(normalizer_of_subgroup(G, sub))
        for x in sub.members:
            if not K <= results[x].member_set:
                return FAIL, {"x": _el(G, x), "kind": "local", "subgroup-size": sub.size}
        local += 1
    return PASS, {"elements": G.order, "local-subgroups-tested": local}


def _check_dedekind_corollary(ctx: AnalysisContext, rng):
    G = ctx.group
    for members, x in ctx.distinct_cyclic_subgroups():
        if not is_normal(G, closure(G, members)):
            return NOT_APPLICABLE, {
                "reason": "some cyclic subgroup is not normal",
                "example": _el(G, x),
            }
    if ctx.group_solvable:
        return PASS, {"cyclic-subgroups": len(ctx.distinct_cyclic_subgroups())}
    return FAIL, {"reason": "all cyclic subgroups normal yet the group is not solvable"}


def _check_deg_not_n_minus_2(ctx: AnalysisContext, rng):
    n_hat = ctx.vertex_count
    worst = 0
    for x, r in ctx.results.items():
        if x in ctx.radical.member_set:
            continue
        if r.degree == n_hat - 2:
            return FAIL, {"x": _el(ctx.group, x), "degree": r.degree}
        worst = max(worst, r.degree)
    return PASS, {"max-degree": worst, "vertex-count": n_hat}


def _check_radical_isolated(ctx: AnalysisContext, rng):
    g = ctx.graph("full")
    isolated = {
        int(g.vertex_elements[p]) for p in range(g.vertex_count) if g.degrees[p] == 0
    }
    radical = set(ctx.radical.members)
    if isolated != radical:
        return FAIL, {
            "isolated-not-radical": sorted(isolated - radical),
            "radical-not-isolated": sorted(radical - isolated),
        }
    return PASS, {"radical-size": len(radical)}


@dataclass(frozen=True)
class CheckSpec:
    number: str
    check_id: str
    statement: str
    scope: str  # "always" or "nonsolvable"
    fn: Callable


CHECKS: list[CheckSpec] = [
    CheckSpec("C01", "connectivity-witness",
              "every two non-radical elements share a common non-solvable partner",
              "nonsolvable", _check_connectivity_witness),
    CheckSpec("C02", "diam-2",
              "the induced non-solvable graph has diameter exactly 2",
              "nonsolvable", _check_diam_2),
    CheckSpec("C03", "involution-pairs",
              "any two involutions generate a solvable subgroup",
              "always", _check_involution_pairs),
    CheckSpec("C04", "quotient-solvabilizer",
              "solvabilizers project onto quotient solvabilizers for normal subgroups "
              "inside the radical",
              "always", _check_quotient_solvabilizer),
    CheckSpec("C05", "conjugation-solvabilizer",
              "conjugation carries solvabilizers to solvabilizers",
              "always", _check_conjugation_solvabilizer),
    CheckSpec("C06", "monotone-solvabilizer",
              "solvabilizers grow with the ambient subset",
              "always", _check_monotone_solvabilizer),
    CheckSpec("C07", "divisibility",
              "solvabilizer sizes are divisible by the radical, element, and "
              "centralizer orders",
              "always", _check_divisibility),
    CheckSpec("C08", "coprime-power",
              "coprime powers share solvabilizers and degrees",
              "always", _check_coprime_power),
    CheckSpec("C09", "absorption",
              "a solvable two-generated subgroup lies inside the solvabilizer of each "
              "of its elements",
              "always", _check_absorption),
    CheckSpec("C10", "degree-bounds",
              "vertex degrees satisfy 2*order <= degree, 5 < degree < n-1, are never "
              "prime, and are divisible by the centralizer order",
              "nonsolvable", _check_degree_bounds),
    CheckSpec("C11", "s-group-dichotomy",
              "every solvabilizer is a subgroup exactly when the group is solvable",
              "always", _check_s_group_dichotomy),
    CheckSpec("C12", "k44-and-nonplanar",
              "the induced graph contains a complete bipartite 4x4 subgraph, hence is "
              "not planar",
              "nonsolvable", _check_k44),
    CheckSpec("C13", "irregular",
              "the induced graph is irregular",
              "nonsolvable", _check_irregular),
    CheckSpec("C14", "not-tree",
              "the induced graph is not a tree",
              "nonsolvable", _check_not_tree),
    CheckSpec("C15", "alpha-bound",
              "the independence number is at least the largest element order",
              "nonsolvable", _check_alpha_bound),
    CheckSpec("C16", "subgraph-embedding",
              "induced graphs of subgroups containing the radical embed; quotient "
              "adjacency matches",
              "nonsolvable", _check_subgraph_embedding),
    CheckSpec("C17", "vertex-count-nonisomorphism",
              "proper subgroups over the radical and proper quotients have different "
              "induced vertex counts",
              "nonsolvable", _check_vertex_count_nonisomorphism),
    CheckSpec("C18", "normalizer-in-solvabilizer",
              "normalizers of cyclic subgroups, and of solvable subgroups, land in "
              "solvabilizers",
              "always", _check_normalizer_in_solvabilizer),
    CheckSpec("C19", "dedekind-corollary",
              "a group whose cyclic subgroups are all normal is solvable",
              "always", _check_dedekind_corollary),
    CheckSpec("C20", "deg-not-n-minus-2",
              "no vertex degree equals the vertex count minus 2",
              "nonsolvable", _check_deg_not_n_minus_2),
    CheckSpec("C21", "radical-isolated",
              "radical elements are exactly the isolated vertices of the full graph",
              "always", _check_radical_isolated),
]

_BY_ID = {spec.check_id: spec for spec in CHECKS}
_ALIASES = {"s-group-witness": "s-group-dichotomy"}


def _run_spec(ctx: AnalysisContext, spec: CheckSpec) -> CheckResult:
    start = time.perf_counter()
    if spec.scope == "nonsolvable" and ctx.group_solvable:
        status, witness = NOT_APPLICABLE, {"reason": "group is solvable"}
    else:
        rng = random.Random(f"{ctx.config.seed}:{spec.check_id}")
        try:
            status, witness = spec.fn(ctx, rng)
        except SearchBudgetExceededError as exc:
            status, witness = SKIPPED, {"reason": str(exc), "budget": exc.budget}
        except InvariantViolationError as exc:
            status, witness = FAIL, {"reason": str(exc)}
    elapsed = (time.perf_counter() - start) * 1000.0
    return CheckResult(spec.check_id, spec.statement, status, witness, elapsed)


def verify_check(G: FiniteGroup, check_id: str, config: RunConfig | None = None) -> CheckResult:
    """Run exactly one registered check."""
    resolved = _ALIASES.get(check_id, check_id)
    spec = _BY_ID.get(resolved)
    if spec is None:
        raise ValueError(f"unknown check id {check_id!r}")
    ctx = G if isinstance(G, AnalysisContext) else AnalysisContext(G, config)
    return _run_spec(ctx, spec)


def verify_all(
    G: FiniteGroup,
    config: RunConfig | None = None,
    *,
    source: str | None = None,
) -> VerificationReport:
    """Run every registered check and assemble the report."""
    ctx = G if isinstance(G, AnalysisContext) else AnalysisContext(G, config)
    checks = [_run_spec(ctx, spec) for spec in CHECKS]
    return VerificationReport(
        group=group_descriptor(ctx.group, source),
        params=ctx.config.params_json(),
        checks=checks,
    )
