"""Shared builders and hypothesis strategies."""

from __future__ import annotations

from itertools import combinations

from hypothesis import strategies as st

from trikernel.graph import Graph


def complete_graph(n: int, offset: int = 0) -> Graph:
    g = Graph()
    for v in range(offset, offset + n):
        g.add_vertex(v)
    for u, v in combinations(range(offset, offset + n), 2):
        g.add_edge(u, v)
    return g


def cycle_graph(n: int) -> Graph:
    g = Graph()
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def petersen_graph() -> Graph:
    g = Graph()
    for i in range(5):
        g.add_edge(i, (i + 1) % 5)          # outer cycle
        g.add_edge(i, i + 5)                # spokes
        g.add_edge(5 + i, 5 + (i + 2) % 5)  # inner pentagram
    return g


def disjoint_triangles(count: int) -> Graph:
    g = Graph()
    for i in range(count):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        g.add_edge(a, b)
        g.add_edge(a, c)
        g.add_edge(b, c)
    return g


def bowtie() -> Graph:
    """Two triangles sharing the cut vertex 0."""
    return Graph.from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def spanned_triangle(fans: int) -> Graph:
    """Triangle (0,1,2) plus ``fans`` outside vertices adjacent to 0 and 1."""
    g = Graph.from_edges([(0, 1), (0, 2), (1, 2)])
    for j in range(fans):
        g.add_edge(3 + j, 0)
        g.add_edge(3 + j, 1)
    return g


@st.composite
def graphs(draw, max_n: int = 8, min_n: int = 0):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    g = Graph()
    for v in range(n):
        g.add_vertex(v)
    pairs = list(combinations(range(n), 2))
    if pairs:
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True,
                               max_size=len(pairs)))
        for u, v in chosen:
            g.add_edge(u, v)
    return g
