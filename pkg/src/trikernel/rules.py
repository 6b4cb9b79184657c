"""The nine reduction rules, the fixpoint driver, traces, and lifting.

Rules are applied in strict priority order R1 < R2 < ... < R9; after any rule
fires, scanning restarts from R1.  Rules 1-4 look only at the graph, Rule 5
compares the working packing against ``k``, Rules 6-8 rewrite the packing
without touching the graph, and Rule 9 shrinks the graph through a fat-head
crown.  The packing is rebuilt from scratch whenever the graph changes and is
re-maximalized after every packing rewrite.

Every graph mutation is recorded as a :class:`RuleEvent`; replaying a trace
against the original graph reproduces the reduced graph exactly, and playing
it backwards lifts a solution of the reduced instance to the original one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .crown import FatHeadCrown, build_span_bipartite, extract_crown, max_matching
from .graph import (
    Edge,
    Graph,
    GraphError,
    Instance,
    Triangle,
    Variant,
    edge_key,
    triangle_edges,
    triangle_key,
)
from .packing import TrianglePacking, greedy_maximal_packing, labeled_edges, remaximalize

RULE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9")


@dataclass
class RuleEvent:
    """One rule application; carries enough payload for replay and lifting."""

    rule: str
    k_delta: int = 0
    removed_vertices: list[int] = field(default_factory=list)
    removed_edges: list[Edge] = field(default_factory=list)
    split_vertex: int | None = None
    split_part1: list[Edge] = field(default_factory=list)
    split_part2: list[Edge] = field(default_factory=list)
    split_minted: tuple[int, int] | None = None
    quad: tuple[int, int, int, int] | None = None
    crown_vertices: list[int] = field(default_factory=list)
    head_edges: list[Edge] = field(default_factory=list)
    crown_witness: list[tuple[int, Edge]] = field(default_factory=list)
    packing_removed: list[Triangle] = field(default_factory=list)
    packing_added: list[Triangle] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"rule": self.rule, "k_delta": self.k_delta}
        if self.removed_vertices:
            out["removed_vertices"] = list(self.removed_vertices)
        if self.removed_edges:
            out["removed_edges"] = [list(e) for e in self.removed_edges]
        if self.split_vertex is not None:
            out["split"] = {
                "vertex": self.split_vertex,
                "part1": [list(e) for e in self.split_part1],
                "part2": [list(e) for e in self.split_part2],
                "minted": list(self.split_minted or ()),
            }
        if self.quad is not None:
            out["quad"] = list(self.quad)
        if self.crown_vertices:
            out["crown"] = {
                "vertices": list(self.crown_vertices),
                "head": [list(e) for e in self.head_edges],
                "witness": [[c, list(e)] for c, e in self.crown_witness],
            }
        if self.packing_removed or self.packing_added:
            out["packing_removed"] = [list(t) for t in self.packing_removed]
            out["packing_added"] = [list(t) for t in self.packing_added]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RuleEvent":
        ev = cls(rule=data["rule"], k_delta=data.get("k_delta", 0))
        ev.removed_vertices = list(data.get("removed_vertices", []))
        ev.removed_edges = [tuple(e) for e in data.get("removed_edges", [])]
        split = data.get("split")
        if split:
            ev.split_vertex = split["vertex"]
            ev.split_part1 = [tuple(e) for e in split["part1"]]
            ev.split_part2 = [tuple(e) for e in split["part2"]]
            ev.split_minted = tuple(split["minted"])  # type: ignore[assignment]
        if "quad" in data:
            ev.quad = tuple(data["quad"])  # type: ignore[assignment]
        crowndata = data.get("crown")
        if crowndata:
            ev.crown_vertices = list(crowndata["vertices"])
            ev.head_edges = [tuple(e) for e in crowndata["head"]]
            ev.crown_witness = [(c, tuple(e)) for c, e in crowndata["witness"]]
        ev.packing_removed = [tuple(t) for t in data.get("packing_removed", [])]
        ev.packing_added = [tuple(t) for t in data.get("packing_added", [])]
        return ev


def trace_to_json(trace: Sequence[RuleEvent]) -> str:
    return json.dumps({"events": [ev.to_json() for ev in trace]}, indent=1)


def trace_from_json(text: str) -> list[RuleEvent]:
    return [RuleEvent.from_json(item) for item in json.loads(text)["events"]]


@dataclass
class KernelOutcome:
    verdict: str                       # "yes" | "no" | "reduced"
    instance: Instance | None          # the reduced instance when verdict == "reduced"
    packing: TrianglePacking | None    # final working packing (None for R1 verdicts)
    trace: list[RuleEvent]
    counters: dict[str, int]
    verdict_rule: str | None = None    # which rule produced a yes/no


# -- individual rule finders -------------------------------------------------


def terminal_verdict(g: Graph, k: int, variant: Variant) -> str | None:
    """Rule 1.  'Empty' means edgeless: no edges, no triangles either way."""
    if variant is Variant.ETP:
        if k <= 0:
            return "yes"
        if g.m == 0:
            return "no"
    else:
        if k < 0:
            return "no"
        if g.m == 0:
            return "yes"
    return None


def find_prunable(g: Graph) -> tuple[list[int], list[Edge]] | None:
    """Rule 2 sweep: all vertices and edges lying in no triangle.

    One application removes the whole set (deleting triangle-free material
    never destroys a triangle, so the batch is the single-deletion fixpoint).
    Returned edges exclude those incident to returned vertices.
    """
    live_edges: set[Edge] = set()
    for u, v in g.iter_edges():
        if g.adj[u] & g.adj[v]:
            live_edges.add((u, v))
    live_vertices = {v for e in live_edges for v in e}
    dead_vertices = sorted(v for v in g.adj if v not in live_vertices)
    dead = set(dead_vertices)
    dead_edges = sorted(e for e in g.iter_edges()
                        if e not in live_edges and e[0] not in dead and e[1] not in dead)
    if not dead_vertices and not dead_edges:
        return None
    return dead_vertices, dead_edges


def _is_exclusive_k4(g: Graph, quad: Sequence[int]) -> bool:
    members = set(quad)
    for a, b in combinations(sorted(quad), 2):
        if not g.has_edge(a, b):
            return False
        if g.common_neighbors(a, b) != members - {a, b}:
            return False
    return True


def find_exclusive_k4(g: Graph) -> tuple[int, int, int, int] | None:
    """Rule 3: four vertices inducing a K4 whose six edges lie only in the
    four internal triangles.  Each edge of such a K4 has exactly the other
    two members as common neighbors, so edges with |common| != 2 are skipped
    immediately."""
    for u, v in g.edges():
        common = g.common_neighbors(u, v)
        if len(common) != 2:
            continue
        w, x = sorted(common)
        quad = tuple(sorted((u, v, w, x)))
        if (u, v) != quad[:2]:
            continue  # visit each quadruple once, from its smallest edge
        if g.has_edge(w, x) and _is_exclusive_k4(g, quad):
            return quad  # type: ignore[return-value]
    return None


def find_splittable(g: Graph) -> tuple[int, list[Edge], list[Edge]] | None:
    """Rule 4: smallest vertex whose incident edges separate into triangle-
    disconnected parts.  Triangles through ``v`` pair exactly the adjacent
    neighbors of ``v``, so the parts are the connected components of the
    graph induced on ``N(v)``; the first part grows from the smallest
    incident edge."""
    for v in sorted(g.adj):
        nbrs = g.adj[v]
        if len(nbrs) < 2:
            continue
        seed_edge = min(edge_key(v, u) for u in nbrs)
        seed = seed_edge[1] if seed_edge[0] == v else seed_edge[0]
        comp = {seed}
        queue = [seed]
        while queue:
            u = queue.pop()
            for w in g.adj[u] & nbrs:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        if comp != nbrs:
            part1 = sorted(edge_key(v, u) for u in comp)
            part2 = sorted(edge_key(v, u) for u in nbrs - comp)
            return v, part1, part2
    return None


def _strict_spanners(g: Graph, s: TrianglePacking) -> dict[Edge, list[int]]:
    """For each packed edge, the vertices spanning it through two free edges.

    These are exactly the candidate replacement triangles that use one packed
    edge and two edges outside the packing; vertices of the owning triangle
    disqualify themselves because their side edges are packed.
    """
    packed = s.edge_index
    out: dict[Edge, list[int]] = {}
    for e in packed:
        a, b = e
        ws = [w for w in sorted(g.common_neighbors(a, b))
              if edge_key(a, w) not in packed and edge_key(b, w) not in packed]
        if ws:
            out[e] = ws
    return out


def find_augment_one(
    g: Graph, s: TrianglePacking,
    spanners: dict[Edge, list[int]] | None = None,
) -> tuple[Triangle, list[Triangle]] | None:
    """Rule 6: one packed triangle replaceable by two edge-disjoint triangles
    drawn from its own edges plus free edges.

    Any candidate triangle in that spanned subgraph uses exactly one edge of
    ``t`` (all three would be ``t`` itself, and two is impossible), and two
    candidates over different edges of ``t`` are edge-disjoint exactly when
    their spanning vertices differ.
    """
    if spanners is None:
        spanners = _strict_spanners(g, s)
    for t in s.sorted_triangles():
        es = [e for e in triangle_edges(t) if e in spanners]
        if len(es) < 2:
            continue
        for e1, e2 in combinations(es, 2):
            for w1 in spanners[e1]:
                for w2 in spanners[e2]:
                    if w1 != w2:
                        return t, [triangle_key(*e1, w1), triangle_key(*e2, w2)]
    return None


def _pair_candidates(
    g: Graph, s: TrianglePacking, t1: Triangle, t2: Triangle,
    spanners: dict[Edge, list[int]],
    vertex_filter: set[int] | None = None,
) -> list[Triangle]:
    """Triangles whose edges all lie in R plus the edges of ``t1``/``t2``."""
    packed = s.edge_index
    cands = {t1, t2}
    for t in (t1, t2):
        for e in triangle_edges(t):
            for w in spanners.get(e, ()):
                if vertex_filter is None or w in vertex_filter:
                    cands.add(triangle_key(*e, w))
    shared = set(t1) & set(t2)
    for v in shared:
        for a in t1:
            if a == v:
                continue
            for b in t2:
                if b == v:
                    continue
                if g.has_edge(a, b) and edge_key(a, b) not in packed:
                    cands.add(triangle_key(v, a, b))
    return sorted(cands)


def _find_disjoint(cands: list[Triangle], need: int) -> list[Triangle] | None:
    """Lexicographically first ``need`` pairwise edge-disjoint triangles."""
    sets = [frozenset(triangle_edges(t)) for t in cands]
    chosen: list[Triangle] = []

    def descend(start: int, used: frozenset) -> bool:
        if len(chosen) == need:
            return True
        for i in range(start, len(cands)):
            if len(cands) - i < need - len(chosen):
                return False
            if used & sets[i]:
                continue
            chosen.append(cands[i])
            if descend(i + 1, used | sets[i]):
                return True
            chosen.pop()
        return False

    return list(chosen) if descend(0, frozenset()) else None


def find_augment_two(
    g: Graph, s: TrianglePacking,
    spanners: dict[Edge, list[int]] | None = None,
) -> tuple[Triangle, Triangle, list[Triangle]] | None:
    """Rule 7: two packed triangles replaceable by three edge-disjoint ones.

    Requires Rule 6 to be exhausted; then no two disjoint candidates exist
    over a single triangle's edges, so any witness triple needs a candidate
    touching both triangles - which exists only when they share a vertex.
    Only vertex-sharing pairs are scanned.
    """
    if spanners is None:
        spanners = _strict_spanners(g, s)
    tris = s.sorted_triangles()
    index = {t: i for i, t in enumerate(tris)}
    by_vertex: dict[int, list[Triangle]] = {}
    for t in tris:
        for v in t:
            by_vertex.setdefault(v, []).append(t)
    pairs = sorted({(min(a, b, key=index.get), max(a, b, key=index.get))
                    for group in by_vertex.values() if len(group) > 1
                    for a, b in combinations(group, 2)},
                   key=lambda p: (index[p[0]], index[p[1]]))
    for t1, t2 in pairs:
        cands = _pair_candidates(g, s, t1, t2, spanners)
        if len(cands) < 3:
            continue
        found = _find_disjoint(cands, 3)
        if found is not None:
            return t1, t2, found
    return None


def find_revertex(
    g: Graph, s: TrianglePacking,
    spanners: dict[Edge, list[int]] | None = None,
) -> tuple[Triangle, Triangle, list[Triangle]] | None:
    """Rule 8: swap two packed triangles for two edge-disjoint triangles on
    the free vertices plus their own six, covering strictly more vertices.

    Replacements are restricted to edges in R plus the pair's own edges, so
    the rest of the packing stays edge-disjoint.  Growth needs a spanning
    vertex outside the packing, so pairs without one are skipped.
    """
    if spanners is None:
        spanners = _strict_spanners(g, s)
    free = g.vertex_set() - s.vertex_set()
    tris = s.sorted_triangles()

    def has_free_spanner(t: Triangle) -> bool:
        return any(w in free
                   for e in triangle_edges(t) for w in spanners.get(e, ()))

    flagged = [has_free_spanner(t) for t in tris]
    for i, t1 in enumerate(tris):
        for j in range(i + 1, len(tris)):
            t2 = tris[j]
            if not (flagged[i] or flagged[j]):
                continue
            base = set(t1) | set(t2)
            cands = _pair_candidates(g, s, t1, t2, spanners,
                                     vertex_filter=free | base)
            for a, b in combinations(cands, 2):
                if frozenset(triangle_edges(a)) & frozenset(triangle_edges(b)):
                    continue
                if len(set(a) | set(b)) > len(base):
                    return t1, t2, [a, b]
    return None


def find_crown(g: Graph, s: TrianglePacking,
               labeled: set[Edge]) -> FatHeadCrown | None:
    """Rule 9: a fat-head crown among the vertices off the labeled edges."""
    if not labeled:
        return None
    candidates = g.vertex_set() - {v for e in labeled for v in e}
    bip = build_span_bipartite(g, candidates, labeled)
    return extract_crown(bip, max_matching(bip))


# -- public single-application rule operations -------------------------------


def rule_terminal(inst: Instance) -> str | None:
    return terminal_verdict(inst.graph, inst.k, inst.variant)


def rule_prune(inst: Instance) -> Instance | None:
    found = find_prunable(inst.graph)
    if found is None:
        return None
    out = inst.copy()
    verts, edges = found
    for v in verts:
        out.graph.remove_vertex(v)
    for e in edges:
        out.graph.remove_edge(*e)
    return out


def rule_k4(inst: Instance) -> Instance | None:
    quad = find_exclusive_k4(inst.graph)
    if quad is None:
        return None
    out = inst.copy()
    for a, b in combinations(quad, 2):
        out.graph.remove_edge(a, b)
    out.k -= 1 if inst.variant is Variant.ETP else 2
    return out


def rule_split(inst: Instance) -> Instance | None:
    found = find_splittable(inst.graph)
    if found is None:
        return None
    v, part1, part2 = found
    out = inst.copy()
    out.graph.split(v, part1, part2)
    return out


def rule_threshold(inst: Instance, s: TrianglePacking) -> str | None:
    if len(s) > inst.k:
        return "yes" if inst.variant is Variant.ETP else "no"
    return None


def _swap(s: TrianglePacking, removed: Sequence[Triangle],
          added: Sequence[Triangle]) -> TrianglePacking:
    out = s.copy()
    for t in removed:
        out.remove(t)
    for t in added:
        out.add(t)
    return out


def rule_augment_one(inst: Instance, s: TrianglePacking) -> TrianglePacking | None:
    found = find_augment_one(inst.graph, s)
    if found is None:
        return None
    t, new = found
    return _swap(s, [t], new)


def rule_augment_two(inst: Instance, s: TrianglePacking) -> TrianglePacking | None:
    found = find_augment_two(inst.graph, s)
    if found is None:
        return None
    t1, t2, new = found
    return _swap(s, [t1, t2], new)


def rule_revertex(inst: Instance, s: TrianglePacking) -> TrianglePacking | None:
    found = find_revertex(inst.graph, s)
    if found is None:
        return None
    t1, t2, new = found
    return _swap(s, [t1, t2], new)


def rule_crown_reduce(inst: Instance, s: TrianglePacking) -> Instance | None:
    fc = find_crown(inst.graph, s, labeled_edges(inst.graph, s))
    if fc is None:
        return None
    out = inst.copy()
    for c in sorted(fc.crown):
        out.graph.remove_vertex(c)
    for e in sorted(fc.head):
        out.graph.remove_edge(*e)
    out.k -= len(fc.head)
    return out


# -- the fixpoint driver ------------------------------------------------------


def kernelize(inst: Instance) -> KernelOutcome:
    g = inst.graph.copy()
    k = inst.k
    variant = inst.variant
    trace: list[RuleEvent] = []
    counters = {r: 0 for r in RULE_IDS}
    s: TrianglePacking | None = None
    structure_clean = False  # True once rules 2-4 are known inapplicable

    while True:
        verdict = terminal_verdict(g, k, variant)
        if verdict is not None:
            counters["R1"] += 1
            return KernelOutcome(verdict, None, s, trace, counters, "R1")

        if not structure_clean:
            pruned = find_prunable(g)
            if pruned is not None:
                verts, edges = pruned
                for v in verts:
                    g.remove_vertex(v)
                for e in edges:
                    g.remove_edge(*e)
                counters["R2"] += 1
                trace.append(RuleEvent("R2", removed_vertices=verts,
                                       removed_edges=edges))
                s = None
                continue

            quad = find_exclusive_k4(g)
            if quad is not None:
                removed = [edge_key(a, b) for a, b in combinations(quad, 2)]
                for e in removed:
                    g.remove_edge(*e)
                delta = -1 if variant is Variant.ETP else -2
                k += delta
                counters["R3"] += 1
                trace.append(RuleEvent("R3", k_delta=delta, quad=quad,
                                       removed_edges=removed))
                s = None
                continue

            split = find_splittable(g)
            if split is not None:
                v, part1, part2 = split
                minted = g.split(v, part1, part2)
                counters["R4"] += 1
                trace.append(RuleEvent("R4", split_vertex=v, split_part1=part1,
                                       split_part2=part2, split_minted=minted))
                s = None
                continue

            structure_clean = True

        if s is None:
            s = greedy_maximal_packing(g)

        if len(s) > k:
            counters["R5"] += 1
            return KernelOutcome("yes" if variant is Variant.ETP else "no",
                                 None, s, trace, counters, "R5")

        spanners = _strict_spanners(g, s)

        grown = find_augment_one(g, s, spanners)
        if grown is not None:
            t, new = grown
            s.remove(t)
            for nt in new:
                s.add(nt)
            remaximalize(g, s)
            s.validate(g)
            counters["R6"] += 1
            trace.append(RuleEvent("R6", packing_removed=[t], packing_added=new))
            continue

        grown2 = find_augment_two(g, s, spanners)
        if grown2 is not None:
            t1, t2, new = grown2
            s.remove(t1)
            s.remove(t2)
            for nt in new:
                s.add(nt)
            remaximalize(g, s)
            s.validate(g)
            counters["R7"] += 1
            trace.append(RuleEvent("R7", packing_removed=[t1, t2],
                                   packing_added=new))
            continue

        swap = find_revertex(g, s, spanners)
        if swap is not None:
            t1, t2, new = swap
            before = len(s.vertex_set())
            s.remove(t1)
            s.remove(t2)
            for nt in new:
                s.add(nt)
            remaximalize(g, s)
            s.validate(g)
            if len(s.vertex_set()) <= before:
                raise GraphError("packing vertex count did not grow")
            counters["R8"] += 1
            trace.append(RuleEvent("R8", packing_removed=[t1, t2],
                                   packing_added=new))
            continue

        fc = find_crown(g, s, labeled_edges(g, s))
        if fc is not None:
            verts = sorted(fc.crown)
            head = sorted(fc.head)
            for v in verts:
                g.remove_vertex(v)
            for e in head:
                g.remove_edge(*e)
            k -= len(head)
            counters["R9"] += 1
            trace.append(RuleEvent("R9", k_delta=-len(head),
                                   crown_vertices=verts, head_edges=head,
                                   crown_witness=sorted(fc.witness)))
            s = None
            structure_clean = False
            continue

        return KernelOutcome("reduced", Instance(g, k, variant), s, trace,
                             counters, None)


# -- trace replay -------------------------------------------------------------


def replay_trace(g: Graph, trace: Sequence[RuleEvent]) -> Graph:
    """Re-apply the recorded graph mutations; packing rewrites are no-ops."""
    out = g.copy()
    for ev in trace:
        if ev.rule == "R2":
            for v in ev.removed_vertices:
                out.remove_vertex(v)
            for e in ev.removed_edges:
                out.remove_edge(*e)
        elif ev.rule == "R3":
            for e in ev.removed_edges:
                out.remove_edge(*e)
        elif ev.rule == "R4":
            minted = out.split(ev.split_vertex, ev.split_part1, ev.split_part2)
            if minted != tuple(ev.split_minted):
                raise GraphError(f"replay minted {minted}, trace says {ev.split_minted}")
        elif ev.rule == "R9":
            for v in ev.crown_vertices:
                out.remove_vertex(v)
            for e in ev.head_edges:
                out.remove_edge(*e)
    return out


# -- solution lifting ---------------------------------------------------------


def lift_solution(trace: Sequence[RuleEvent], reduced_solution: Sequence,
                  variant: Variant) -> list:
    """Transform a solution of the reduced instance into one of the original.

    Walking the trace backwards: a crown event contributes its witness
    triangles (packing) or its head edges (covering); an exclusive-K4 event
    contributes one of its triangles (packing) or a perfect pair of its edges
    (covering); a split event renames the minted vertices back.
    """
    if variant is Variant.ETP:
        solution = {triangle_key(*t) for t in reduced_solution}
    else:
        solution = {edge_key(*e) for e in reduced_solution}

    for ev in reversed(trace):
        if ev.rule == "R9":
            if variant is Variant.ETP:
                solution.update(triangle_key(c, *e) for c, e in ev.crown_witness)
            else:
                solution.update(ev.head_edges)
        elif ev.rule == "R3":
            a, b, c, d = ev.quad
            if variant is Variant.ETP:
                solution.add(triangle_key(a, b, c))
            else:
                solution.add(edge_key(a, b))
                solution.add(edge_key(c, d))
        elif ev.rule == "R4":
            v = ev.split_vertex
            minted = set(ev.split_minted)
            if variant is Variant.ETP:
                solution = {
                    triangle_key(*(v if x in minted else x for x in t))
                    for t in solution
                }
            else:
                solution = {
                    edge_key(*(v if x in minted else x for x in e))
                    for e in solution
                }
    return sorted(solution)


# -- solution validation -------------------------------------------------------


def is_valid_packing_solution(g: Graph, triangles: Sequence[Triangle], k: int) -> bool:
    """At least ``k`` pairwise edge-disjoint triangles of ``g``."""
    used: set[Edge] = set()
    for t in triangles:
        for e in triangle_edges(triangle_key(*t)):
            if not g.has_edge(*e) or e in used:
                return False
            used.add(e)
    return len(triangles) >= k


def is_valid_cover_solution(g: Graph, edges: Sequence[Edge], k: int) -> bool:
    """At most ``k`` edges of ``g`` whose removal leaves it triangle-free."""
    removed = {edge_key(*e) for e in edges}
    if len(removed) != len(list(edges)) or len(removed) > k:
        return False
    for e in removed:
        if not g.has_edge(*e):
            return False
    for u, v in g.iter_edges():
        if (u, v) in removed:
            continue
        for w in g.common_neighbors(u, v):
            if edge_key(u, w) not in removed and edge_key(v, w) not in removed:
                return False
    return True
