"""Shared lazily-computed analysis state for one group, plus the analyze report."""

from __future__ import annotations

from ._version import __version__
from .config import SCHEMA_VERSION, RunConfig
from .graph import build_graph, degree_sequence, diameter, find_k44, has_odd_cycle, \
    independence_number, is_regular, is_tree
from .group import FiniteGroup
from .solvabilizer import all_solvabilizers, ord_sol
from .subgroups import (
    SubgroupSet,
    all_normal_subgroups,
    is_solvable,
    quotient_group,
    solvable_radical,
    whole_group,
)
from .errors import SearchBudgetExceededError


class AnalysisContext:
    """Caches the expensive per-group artifacts so checks and reports share them."""

    def __init__(self, group: FiniteGroup, config: RunConfig | None = None):
        self.group = group
        self.config = config or RunConfig()
        self._graphs: dict = {}
        self._quotients = None
        self._independence: dict = {}

    @property
    def radical(self) -> SubgroupSet:
        return solvable_radical(self.group)

    @property
    def group_solvable(self) -> bool:
        return self.radical.size == self.group.order

    @property
    def vertex_count(self) -> int:
        """Vertices of the induced graph: group order minus radical size."""
        return self.group.order - self.radical.size

    @property
    def results(self):
        return all_solvabilizers(
            self.group,
            audit_fraction=self.config.audit_fraction,
            seed=self.config.seed,
            jobs=self.config.jobs,
        )

    def graph(self, mode: str):
        if mode not in self._graphs:
            self._graphs[mode] = build_graph(
                self.group,
                mode,
                audit_fraction=self.config.audit_fraction,
                seed=self.config.seed,
                jobs=self.config.jobs,
            )
        return self._graphs[mode]

    def independence(self, mode: str) -> dict:
        if mode not in self._independence:
            self._independence[mode] = independence_number(
                self.graph(mode), self.config.independence_exact_limit
            )
        return self._independence[mode]

    def quotient_contexts(self):
        """(N, quotient, context) per normal subgroup inside the radical,
        plus whether that list is exhaustive."""
        if self._quotients is None:
            subs, complete = all_normal_subgroups(self.group, within=self.radical)
            entries = []
            for N in subs:
                q = quotient_group(self.group, N)
                entries.append((N, q, AnalysisContext(q.group, self.config)))
            self._quotients = (entries, complete)
        return self._quotients

    def distinct_cyclic_subgroups(self):
        seen: dict[tuple[int, ...], int] = {}
        for x in range(self.group.order):
            members = self.group.cyclic_subgroup(x)
            seen.setdefault(members, x)
        return sorted(seen.items())  # (members, generating element)

    def two_generated_subgroups(self, solvable_only: bool):
        """Distinct subgroups discovered by the pair sweep, sorted by size."""
        G = self.group
        out = {}
        for members in G._pair_subgroup.values():
            sub = G._subgroup_registry[members]
            verdict = is_solvable(G, sub)
            if verdict == solvable_only:
                out[members] = sub
        return [out[k] for k in sorted(out, key=lambda m: (len(m), m))]


def group_descriptor(G: FiniteGroup, source: str | None = None) -> dict:
    desc = {
        "name": G.name,
        "order": int(G.order),
        "degree": int(G.degree) if G.degree is not None else None,
        "generators": [p.cycle_string() for p in G.generators]
        if G.generators
        else [G.label(i) for i in G.generator_indices],
    }
    if source is not None:
        desc["source"] = source
    return desc


def analyze_report(ctx: AnalysisContext, *, source: str | None = None) -> dict:
    """Full analysis document: radical, solvabilizer summary, graph invariants."""
    G = ctx.group
    results = ctx.results
    radical = ctx.radical
    classes, class_id, _ = G.conjugacy_classes()

    per_class = []
    for cls in classes:
        rep = cls[0]
        r = results[rep]
        per_class.append(
            {
                "class-representative": int(rep),
                "representative-label": G.label(rep),
                "class-size": len(cls),
                "order": int(r.order),
                "members-count": len(r.members),
                "degree": int(r.degree),
                "cosets-count": len(r.coset_reps),
            }
        )

    report = {
        "schema-version": SCHEMA_VERSION,
        "engine-version": __version__,
        "group": group_descriptor(G, source),
        "radical": {
            "size": radical.size,
            "members": [int(i) for i in radical.members],
            "solvable-group": ctx.group_solvable,
        },
        "solvabilizers": per_class,
        "ord-sol": ord_sol(G).to_json(),
        "degree-sequence": degree_sequence(ctx.graph("full")),
        "graph": {},
    }

    for mode in ("full", "induced"):
        g = ctx.graph(mode)
        info: dict = {
            "vertices": g.vertex_count,
            "edges": g.edge_count,
        }
        if mode == "induced" and g.vertex_count > 0:
            info["diameter"] = diameter(g)
            regular, witness = is_regular(g)
            info["regular"] = regular
            if witness is not None:
                info["irregularity-witness"] = list(witness)
            info["tree"] = is_tree(g)
            odd, cycle = has_odd_cycle(g)
            info["odd-cycle"] = cycle if odd else None
            try:
                info["k44"] = find_k44(g, ctx.config.k44_budget)
                info["planar"] = info["k44"] is None
            except SearchBudgetExceededError:
                info["k44"] = {"budget-exceeded": int(ctx.config.k44_budget)}
                info["planar"] = None
        info["independence"] = ctx.independence(mode)
        report["graph"][mode] = info
    return report
