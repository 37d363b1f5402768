"""Candidate graphs and the 2-coloring side of the decoder.

Vertices are 1-based user ids.  Edges are stored as (i, j) tuples with
i < j.  An edge lies on an odd simple cycle iff its biconnected block is
non-bipartite, which gives a linear-time predicate; exact minimum edge
bipartization is branch and bound over odd-cycle covers with a hard node
budget (never a silent approximation).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np


class BudgetExceededError(RuntimeError):
    """Raised when the bipartization search would exceed its node budget."""

    def __init__(self, nodes: int):
        super().__init__(f"bipartization search exceeded its budget after {nodes} nodes")
        self.nodes = nodes


def norm_edge(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"self-loop {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class CandidateGraph:
    """Undirected graph over users; marginal_passed records whether the
    observed feedback passed its own typicality test (a failed test yields
    an empty graph, distinguishable from a genuinely empty edge set)."""

    n_vertices: int
    edges: frozenset = field(default_factory=frozenset)
    marginal_passed: bool = True

    def __post_init__(self):
        edges = frozenset(norm_edge(i, j) for (i, j) in self.edges)
        object.__setattr__(self, "edges", edges)
        for (i, j) in edges:
            if not (1 <= i <= self.n_vertices and 1 <= j <= self.n_vertices):
                raise ValueError(f"edge {(i, j)} outside vertex range 1..{self.n_vertices}")

    def has_edge(self, i: int, j: int) -> bool:
        return norm_edge(i, j) in self.edges

    def adjacency(self) -> dict:
        adj = {v: set() for v in range(1, self.n_vertices + 1)}
        for (i, j) in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n_vertices + 1))
        g.add_edges_from(self.edges)
        return g


def dump_edge_list(g: CandidateGraph) -> str:
    """Debug text format: first line "N M", then one "i j" line per edge, i<j, 1-based."""
    lines = [f"{g.n_vertices} {len(g.edges)}"]
    lines += [f"{i} {j}" for (i, j) in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> CandidateGraph:
    rows = text.split()
    n, m = int(rows[0]), int(rows[1])
    flat = [int(tok) for tok in rows[2:]]
    if len(flat) != 2 * m:
        raise ValueError("edge count does not match header")
    edges = frozenset(norm_edge(flat[2 * k], flat[2 * k + 1]) for k in range(m))
    return CandidateGraph(n_vertices=n, edges=edges)


def lies_on_odd_cycle(g: CandidateGraph, edge) -> bool:
    """True iff some odd-length simple cycle of g contains the edge.

    Equivalent to: the biconnected component containing the edge is
    non-bipartite (bridges form single-edge components and return False).
    """
    e = norm_edge(*edge)
    if e not in g.edges:
        raise ValueError(f"edge {e} not in graph")
    gx = g.to_networkx()
    for comp in nx.biconnected_component_edges(gx):
        comp_edges = {norm_edge(*ce) for ce in comp}
        if e in comp_edges:
            if len(comp_edges) == 1:
                return False
            block = nx.Graph(list(comp_edges))
            return not nx.is_bipartite(block)
    raise AssertionError("edge not found in any biconnected component")


def _find_odd_cycle(adj: dict, removed: set) -> list | None:
    """Return the edge list of one odd cycle, or None if bipartite.

    BFS 2-coloring; on a same-color conflict the two tree paths to the
    lowest common ancestor plus the conflict edge form a simple odd cycle.
    """
    color = {}
    parent = {}
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if norm_edge(v, w) in removed:
                    continue
                if w not in color:
                    color[w] = color[v] ^ 1
                    parent[w] = v
                    queue.append(w)
                elif color[w] == color[v]:
                    return _conflict_cycle(v, w, parent)
    return None


def _conflict_cycle(v: int, w: int, parent: dict) -> list:
    ancestors = set()
    cur = v
    while cur is not None:
        ancestors.add(cur)
        cur = parent[cur]
    lca = w
    while lca not in ancestors:
        lca = parent[lca]
    # edges along v..lca, lca..w, plus the conflict edge (w, v)
    edges = []
    for start in (v, w):
        cur = start
        while cur != lca:
            edges.append(norm_edge(cur, parent[cur]))
            cur = parent[cur]
    edges.append(norm_edge(v, w))
    return edges


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceededError(self.used)


def _exists_cover(adj: dict, removed: set, k: int, min_edge, budget: _Budget) -> bool:
    """Is there a set of <= k deletable edges (each >= min_edge in lex order,
    not already removed) whose removal makes the graph bipartite?"""
    budget.spend()
    cycle = _find_odd_cycle(adj, removed)
    if cycle is None:
        return True
    if k == 0:
        return False
    for e in sorted(cycle):
        if min_edge is not None and e < min_edge:
            continue
        removed.add(e)
        ok = _exists_cover(adj, removed, k - 1, min_edge, budget)
        removed.discard(e)
        if ok:
            return True
    return False


def min_edge_bipartize(g: CandidateGraph, node_budget: int = 10**6):
    """Delete the minimum number of edges so the rest is bipartite.

    Returns (kept: CandidateGraph, deleted: list of edges).  Among all
    minimum deletion sets the lexicographically smallest sorted edge list
    is returned.  Exceeding the node budget raises BudgetExceededError.
    """
    adj = g.adjacency()
    budget = _Budget(node_budget)
    k = 0
    while not _exists_cover(adj, set(), k, None, budget):
        k += 1
    deleted = []
    removed = set()
    remaining = k
    floor = None
    while remaining > 0:
        placed = False
        for e in sorted(g.edges):
            if e in removed or (floor is not None and e <= floor):
                continue
            removed.add(e)
            if _exists_cover(adj, removed, remaining - 1, _next_edge(e), budget):
                deleted.append(e)
                floor = e
                remaining -= 1
                placed = True
                break
            removed.discard(e)
        if not placed:
            raise AssertionError("no completion found for a feasible deletion size")
    kept = CandidateGraph(
        n_vertices=g.n_vertices,
        edges=frozenset(g.edges - set(deleted)),
        marginal_passed=g.marginal_passed,
    )
    return kept, sorted(deleted)


def _next_edge(e):
    # strict lex lower bound for the remaining choices
    return (e[0], e[1] + 1)


def two_coloring(g: CandidateGraph) -> np.ndarray:
    """Canonical proper 2-coloring: BFS from the lowest-index vertex of each
    component, roots get label 1, neighbours alternate; an edgeless graph
    (the only all-ones outcome) is fixed up to (1, 2, 2, ..., 2).

    Returns labels[i] in {1, 2} for user i+1; both labels always occur.
    """
    adj = g.adjacency()
    labels = np.zeros(g.n_vertices, dtype=np.int64)
    for root in range(1, g.n_vertices + 1):
        if labels[root - 1] != 0:
            continue
        labels[root - 1] = 1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if labels[w - 1] == 0:
                    labels[w - 1] = 3 - labels[v - 1]
                    queue.append(w)
                elif labels[w - 1] == labels[v - 1]:
                    raise ValueError("graph is not bipartite")
    if np.all(labels == 1):
        labels[1:] = 2
    return labels


def is_valid_partition(labels: np.ndarray, k: int = 2) -> bool:
    labels = np.asarray(labels)
    return bool(np.all((labels >= 1) & (labels <= k)) and len(np.unique(labels)) == k)
