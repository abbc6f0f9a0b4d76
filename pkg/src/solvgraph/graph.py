"""The non-solvable graph: construction, invariants, witnesses, and export.

Vertices are group elements; two vertices are adjacent exactly when the
subgroup they generate together is not solvable.  ``full`` mode keeps every
element (radical elements are the isolated vertices); ``induced`` mode drops
the radical.
"""

from __future__ import annotations

import json
import math
from itertools import combinations
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvariantViolationError, SearchBudgetExceededError
from .group import FiniteGroup
from .solvabilizer import all_solvabilizers
from .subgroups import solvable_radical

SCHEMA_VERSION = 1

DEFAULT_EXACT_LIMIT = 150
DEFAULT_K44_BUDGET = 10_000_000


class NsGraph:
    """Adjacency structure plus an invariant cache.

    Group-backed graphs know element labels and orders; synthetic graphs
    (fixtures, reloaded exports) carry adjacency only.
    """

    def __init__(
        self,
        vertex_elements,
        adjacency: np.ndarray,
        mode: str,
        *,
        group: FiniteGroup | None = None,
        labels: list[str] | None = None,
        orders=None,
    ):
        self.vertex_elements = np.asarray(vertex_elements, dtype=np.int64)
        adjacency = np.asarray(adjacency, dtype=bool)
        v = self.vertex_elements.size
        if adjacency.shape != (v, v):
            raise ValueError(f"adjacency must be {v}x{v}, got {adjacency.shape}")
        if adjacency.diagonal().any():
            raise InvariantViolationError("non-solvable graph has a loop")
        if not np.array_equal(adjacency, adjacency.T):
            raise InvariantViolationError("adjacency is not symmetric")
        if mode not in ("full", "induced"):
            raise ValueError(f"mode must be 'full' or 'induced', got {mode!r}")
        self.adjacency = adjacency
        self.mode = mode
        self.group = group
        self.labels = labels
        self.orders = None if orders is None else np.asarray(orders, dtype=np.int64)
        self.degrees = adjacency.sum(axis=1).astype(np.int64)
        self.invariants: dict = {}
        self._pos = {int(e): p for p, e in enumerate(self.vertex_elements)}
        self._bitrows: list[int] | None = None
        if mode == "induced" and v and (self.degrees == 0).any():
            raise InvariantViolationError("induced graph has an isolated vertex")

    @property
    def vertex_count(self) -> int:
        return int(self.vertex_elements.size)

    @property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    def position_of(self, element: int) -> int:
        return self._pos[int(element)]

    def label_of(self, position: int) -> str:
        if self.labels is not None:
            return self.labels[position]
        return str(int(self.vertex_elements[position]))

    def bitrows(self) -> list[int]:
        """Adjacency rows packed as ints, for set-intersection searches."""
        if self._bitrows is None:
            rows = []
            for r in range(self.vertex_count):
                bits = 0
                for q in np.nonzero(self.adjacency[r])[0]:
                    bits |= 1 << int(q)
                rows.append(bits)
            self._bitrows = rows
        return self._bitrows


def build_graph(
    G: FiniteGroup,
    mode: str = "induced",
    *,
    audit_fraction: float = 0.1,
    seed: int = 12345,
    jobs: int = 1,
) -> NsGraph:
    """Build the non-solvable graph of G in the requested mode."""
    results = all_solvabilizers(G, audit_fraction=audit_fraction, seed=seed, jobs=jobs)
    radical = solvable_radical(G)
    if mode == "induced":
        vertices = np.fromiter(
            (i for i in range(G.order) if i not in radical.member_set), dtype=np.int64
        )
    else:
        vertices = np.arange(G.order, dtype=np.int64)
    v = vertices.size
    adjacency = np.zeros((v, v), dtype=bool)
    for p, e in enumerate(vertices):
        members = np.fromiter(results[int(e)].members, dtype=np.int64)
        row = ~np.isin(vertices, members)
        adjacency[p] = row
    graph = NsGraph(
        vertices,
        adjacency,
        mode,
        group=G,
        labels=[G.label(int(e)) for e in vertices],
        orders=[int(G.element_orders[int(e)]) for e in vertices],
    )
    for p, e in enumerate(vertices):
        expected = G.order - len(results[int(e)].members)
        if int(graph.degrees[p]) != expected:
            raise InvariantViolationError(
                f"vertex degree of element {int(e)} disagrees with its "
                f"solvabilizer complement"
            )
    return graph


def degree_sequence(g: NsGraph) -> list[int]:
    """Vertex degrees as a sorted multiset."""
    return sorted(int(d) for d in g.degrees)


def diameter(g: NsGraph) -> float:
    """Greatest BFS eccentricity; inf when disconnected (an engine bug for
    induced graphs of non-solvable groups)."""
    v = g.vertex_count
    if v <= 1:
        return 0
    adj = g.adjacency
    worst = 0
    for s in range(v):
        dist = np.full(v, -1, dtype=np.int64)
        dist[s] = 0
        frontier = np.zeros(v, dtype=bool)
        frontier[s] = True
        d = 0
        while frontier.any():
            d += 1
            reach = adj[frontier].any(axis=0) & (dist < 0)
            dist[reach] = d
            frontier = reach
        if (dist < 0).any():
            if g.mode == "induced":
                raise InvariantViolationError("induced non-solvable graph is disconnected")
            return math.inf
        worst = max(worst, int(dist.max()))
    return worst


def common_neighbor_witnesses(g: NsGraph) -> dict[tuple[int, int], int]:
    """For every nonadjacent vertex pair, the least common neighbor.

    Keys and values are element ids.  Raises if some pair has none (for an
    induced graph that contradicts diameter 2).
    """
    out: dict[tuple[int, int], int] = {}
    v = g.vertex_count
    for p in range(v):
        for q in range(p + 1, v):
            if g.adjacency[p, q]:
                continue
            both = np.nonzero(g.adjacency[p] & g.adjacency[q])[0]
            if both.size == 0:
                raise InvariantViolationError(
                    f"vertices {int(g.vertex_elements[p])} and "
                    f"{int(g.vertex_elements[q])} have no common neighbor"
                )
            out[(int(g.vertex_elements[p]), int(g.vertex_elements[q]))] = int(
                g.vertex_elements[both[0]]
            )
    return out


def is_regular(g: NsGraph) -> tuple[bool, tuple[int, int] | None]:
    """Whether all degrees agree; on failure, a witness pair of element ids
    with distinct degrees."""
    if g.vertex_count == 0:
        return True, None
    lo = int(g.degrees.argmin())
    hi = int(g.degrees.argmax())
    if g.degrees[lo] == g.degrees[hi]:
        return True, None
    return False, (int(g.vertex_elements[hi]), int(g.vertex_elements[lo]))


def is_tree(g: NsGraph) -> bool:
    """Connected and acyclic."""
    v = g.vertex_count
    if v == 0:
        return False
    if g.edge_count != v - 1:
        return False
    seen = np.zeros(v, dtype=bool)
    seen[0] = True
    frontier = np.zeros(v, dtype=bool)
    frontier[0] = True
    while frontier.any():
        reach = g.adjacency[frontier].any(axis=0) & ~seen
        seen |= reach
        frontier = reach
    return bool(seen.all())


def has_odd_cycle(g: NsGraph) -> tuple[bool, list[int] | None]:
    """BFS two-coloring; on failure returns an explicit odd cycle of element ids."""
    v = g.vertex_count
    color = np.full(v, -1, dtype=np.int64)
    parent = np.full(v, -1, dtype=np.int64)
    for s in range(v):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = [s]
        while queue:
            cur = queue.pop(0)
            for nxt in np.nonzero(g.adjacency[cur])[0]:
                nxt = int(nxt)
                if color[nxt] < 0:
                    color[nxt] = 1 - color[cur]
                    parent[nxt] = cur
                    queue.append(nxt)
                elif color[nxt] == color[cur]:
                    path_a = _root_path(parent, cur)
                    path_b = _root_path(parent, nxt)
                    shared = set(path_a) & set(path_b)
                    lca = next(p for p in path_a if p in shared)
                    cycle = _assemble_cycle(path_a, path_b, lca)
                    return True, [int(g.vertex_elements[p]) for p in cycle]
    return False, None


def _root_path(parent: np.ndarray, v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    return path


def _assemble_cycle(path_a: list[int], path_b: list[int], lca: int) -> list[int]:
    up = path_a[: path_a.index(lca) + 1]  # cur .. lca
    down = path_b[: path_b.index(lca)]  # nxt .. just below lca
    return up + down[::-1]


# -- independence number -------------------------------------------------


def _greedy_extend(bitrows: list[int], v: int, start_bits: int) -> int:
    """Extend an independent set greedily by ascending degree."""
    order = sorted(range(v), key=lambda p: (bitrows[p].bit_count(), p))
    chosen = start_bits
    blocked = 0
    cur = start_bits
    while cur:
        low = cur & -cur
        blocked |= bitrows[low.bit_length() - 1]
        cur &= cur - 1
    for p in order:
        bit = 1 << p
        if chosen & bit or blocked & bit:
            continue
        chosen |= bit
        blocked |= bitrows[p]
    return chosen


def _mis_exact(bitrows: list[int], v: int, initial: int) -> int:
    """Branch-and-bound maximum independent set; returns a best set bitmask."""
    best = [initial, initial.bit_count()]

    def recurse(cand: int, size: int, chosen: int):
        if size + cand.bit_count() <= best[1]:
            return
        if cand == 0:
            best[0], best[1] = chosen, size
            return
        # peel vertices isolated within the candidate set: always taken
        while cand:
            iso = 0
            rest = cand
            while rest:
                low = rest & -rest
                p = low.bit_length() - 1
                if bitrows[p] & cand == 0:
                    iso |= low
                rest &= rest - 1
            if not iso:
                break
            chosen |= iso
            size += iso.bit_count()
            cand &= ~iso
        if cand == 0:
            if size > best[1]:
                best[0], best[1] = chosen, size
            return
        if size + cand.bit_count() <= best[1]:
            return
        # pivot on the candidate vertex with most candidate neighbors
        pivot, pivot_deg = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            p = low.bit_length() - 1
            d = (bitrows[p] & cand).bit_count()
            if d > pivot_deg:
                pivot, pivot_deg = p, d
            rest &= rest - 1
        bit = 1 << pivot
        recurse(cand & ~bit & ~bitrows[pivot], size + 1, chosen | bit)
        recurse(cand & ~bit, size, chosen)

    recurse((1 << v) - 1, 0, 0)
    return best[0]


def _improve_by_swaps(bitrows: list[int], v: int, chosen: int, passes: int = 3) -> int:
    """(1,2)-swap local search: drop one vertex, insert two if possible."""
    for _ in range(passes):
        improved = False
        members = [p for p in range(v) if chosen >> p & 1]
        for p in members:
            without = chosen & ~(1 << p)
            blocked = 0
            cur = without
            while cur:
                low = cur & -cur
                blocked |= bitrows[low.bit_length() - 1]
                cur &= cur - 1
            free = [q for q in range(v) if not (without >> q & 1) and not (blocked >> q & 1)]
            added = 0
            added_bits = 0
            for q in free:
                if added_bits & bitrows[q] or added_bits >> q & 1:
                    continue
                added_bits |= 1 << q
                added += 1
                if added == 2:
                    break
            if added >= 2:
                chosen = without | added_bits
                improved = True
                break
        if not improved:
            break
    return chosen


def _seed_sets(g: NsGraph) -> list[int]:
    """Known independent sets to start from: involutions, a maximal cyclic
    subgroup, and (in full mode) the radical."""
    seeds = [0]
    if g.group is None or g.orders is None:
        return seeds
    inv_bits = 0
    for p in range(g.vertex_count):
        if g.orders[p] == 2:
            inv_bits |= 1 << p
    if inv_bits:
        seeds.append(inv_bits)
    G = g.group
    best_order = int(G.element_orders.max())
    x = int(G.element_orders.argmax())
    cyc_bits = 0
    for m in G.cyclic_subgroup(x):
        if int(m) in g._pos:
            cyc_bits |= 1 << g._pos[int(m)]
    radical_bits = 0
    if g.mode == "full":
        for m in solvable_radical(G).members:
            radical_bits |= 1 << g._pos[int(m)]
    seeds.append(cyc_bits | radical_bits)
    return seeds


def independence_number(g: NsGraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> dict:
    """Largest known pairwise-nonadjacent vertex set.

    Exact (branch and bound) when the vertex count is at most ``exact_limit``;
    otherwise a greedy-plus-local-search lower bound.  The returned dict has
    ``value``, ``kind`` (``exact`` or ``lower-bound``), the chosen ``set`` of
    element ids, and the limit used.
    """
    v = g.vertex_count
    if v == 0:
        return {"value": 0, "kind": "exact", "set": [], "exact-limit": int(exact_limit)}
    bitrows = g.bitrows()
    best = 0
    for seed in _seed_sets(g):
        cand = _greedy_extend(bitrows, v, seed)
        if cand.bit_count() > best.bit_count():
            best = cand
    if v <= exact_limit:
        best = _mis_exact(bitrows, v, best)
        kind = "exact"
    else:
        best = _improve_by_swaps(bitrows, v, best)
        kind = "lower-bound"
    members = [p for p in range(v) if best >> p & 1]
    for p, q in combinations(members, 2):
        if g.adjacency[p, q]:
            raise InvariantViolationError("independent-set search returned adjacent vertices")
    return {
        "value": len(members),
        "kind": kind,
        "set": [int(g.vertex_elements[p]) for p in members],
        "exact-limit": int(exact_limit),
    }


# -- complete bipartite subgraph search ----------------------------------


def _verify_k44(g: NsGraph, left: list[int], right: list[int]) -> bool:
    return all(g.adjacency[p, q] for p in left for q in right)


def find_k44(g: NsGraph, budget: int = DEFAULT_K44_BUDGET) -> dict | None:
    """A complete bipartite 4x4 subgraph witness, or None when none exists.

    Returns {"left": [...], "right": [...]} with element ids; the parts are
    disjoint and every cross pair is adjacent (parts may contain internal
    edges).  Group-backed graphs seed the search from the two largest
    conjugacy classes before the general common-neighborhood enumeration.
    Raises ``SearchBudgetExceededError`` when the probe budget runs out, and
    ``InvariantViolationError`` when exhaustive search finds nothing for a
    non-solvable group.
    """
    v = g.vertex_count
    spent = 0

    def found(left_positions, right_positions):
        left = sorted(int(g.vertex_elements[p]) for p in left_positions)
        right = sorted(int(g.vertex_elements[p]) for p in right_positions)
        return {"left": left, "right": right}

    if v >= 8:
        bitrows = g.bitrows()

        def common(positions):
            acc = (1 << v) - 1
            for p in positions:
                acc &= bitrows[p]
            return acc

        pools: list[list[int]] = []
        if g.group is not None:
            classes, _, _ = g.group.conjugacy_classes()
            in_graph = [
                sorted(g._pos[int(e)] for e in cls if int(e) in g._pos) for cls in classes
            ]
            in_graph = [c for c in in_graph if len(c) >= 4]
            in_graph.sort(key=len, reverse=True)
            pools.extend(in_graph[:2])
        by_degree = sorted(range(v), key=lambda p: (-int(g.degrees[p]), p))
        pools.append(by_degree)

        for pool in pools:
            for quad in combinations(pool, 4):
                spent += 4 * v
                if spent > budget:
                    raise SearchBudgetExceededError(budget, "4x4 bipartite search")
                mask = common(quad)
                for p in quad:
                    mask &= ~(1 << p)
                if mask.bit_count() >= 4:
                    right = []
                    while mask and len(right) < 4:
                        low = mask & -mask
                        right.append(low.bit_length() - 1)
                        mask &= mask - 1
                    spent += 16
                    if _verify_k44(g, list(quad), right):
                        return found(quad, right)

    if g.group is not None and g.mode == "induced" and g.vertex_count > 0:
        raise InvariantViolationError(
            "no complete bipartite 4x4 subgraph found in the induced graph of a "
            "non-solvable group"
        )
    return None


# -- export ---------------------------------------------------------------


def _sorted_edges(g: NsGraph) -> list[tuple[int, int]]:
    edges = []
    for p in range(g.vertex_count):
        for q in np.nonzero(g.adjacency[p])[0]:
            if int(q) > p:
                edges.append((int(g.vertex_elements[p]), int(g.vertex_elements[int(q)])))
    edges.sort()
    return edges


def _vertex_records(g: NsGraph) -> list[dict]:
    out = []
    for p in range(g.vertex_count):
        out.append(
            {
                "id": int(g.vertex_elements[p]),
                "label": g.label_of(p),
                "order": int(g.orders[p]) if g.orders is not None else None,
                "degree": int(g.degrees[p]),
            }
        )
    return out


def graph_to_json(g: NsGraph) -> dict:
    return {
        "schema-version": SCHEMA_VERSION,
        "mode": g.mode,
        "group": g.group.name if g.group is not None else None,
        "vertices": _vertex_records(g),
        "edges": [[a, b] for a, b in _sorted_edges(g)],
        "invariants": g.invariants,
    }


def _dot_document(g: NsGraph) -> str:
    lines = ["graph nonsolvable {"]
    for rec in _vertex_records(g):
        label = f"{rec['label']}|{rec['order']}" if rec["order"] is not None else rec["label"]
        lines.append(f'  {rec["id"]} [label="{label}"];')
    for a, b in _sorted_edges(g):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml_document(g: NsGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="order" for="node" attr.name="order" attr.type="int"/>',
        '  <key id="degree" for="node" attr.name="degree" attr.type="int"/>',
        f'  <graph id="{escape(g.mode)}" edgedefault="undirected">',
    ]
    for rec in _vertex_records(g):
        lines.append(f'    <node id="n{rec["id"]}">')
        lines.append(f'      <data key="label">{escape(rec["label"])}</data>')
        if rec["order"] is not None:
            lines.append(f'      <data key="order">{rec["order"]}</data>')
        lines.append(f'      <data key="degree">{rec["degree"]}</data>')
        lines.append("    </node>")
    for a, b in _sorted_edges(g):
        lines.append(f'    <edge source="n{a}" target="n{b}"/>')
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def export_graph(g: NsGraph, fmt: str, path) -> None:
    """Write the graph deterministically as dot, graphml, or json."""
    if fmt == "dot":
        text = _dot_document(g)
    elif fmt == "graphml":
        text = _graphml_document(g)
    elif fmt == "json":
        text = json.dumps(graph_to_json(g), indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_graph_json(path) -> NsGraph:
    """Reload a JSON export as a synthetic graph with identical adjacency."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    vertices = [rec["id"] for rec in doc["vertices"]]
    labels = [rec["label"] for rec in doc["vertices"]]
    orders = [rec["order"] for rec in doc["vertices"]]
    pos = {e: p for p, e in enumerate(vertices)}
    v = len(vertices)
    adj = np.zeros((v, v), dtype=bool)
    for a, b in doc["edges"]:
        adj[pos[a], pos[b]] = True
        adj[pos[b], pos[a]] = True
    graph = NsGraph(
        vertices,
        adj,
        doc["mode"],
        labels=labels,
        orders=orders if all(o is not None for o in orders) else None,
    )
    graph.invariants = doc.get("invariants", {})
    return graph
