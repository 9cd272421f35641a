"""Simple undirected graphs, relabeling and mapping checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Base class for malformed graph input."""


class IndexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class SizeMismatch(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on nodes ``0..num_nodes-1``.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted.
    ``adjacency[u]`` is the ascending tuple of neighbors of ``u``.
    Build instances with :func:`from_edges`.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.adjacency)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    @property
    def _edge_set(self) -> frozenset[tuple[int, int]]:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_es"]
        except KeyError:
            es = frozenset(self.edges)
            object.__setattr__(self, "_es", es)
            return es

    def is_connected(self) -> bool:
        if self.num_nodes <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.num_nodes

    def __repr__(self) -> str:
        return f"Graph(M={self.num_nodes}, K={self.num_edges})"


def from_edges(num_nodes: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a normalized graph; duplicate edges collapse, self-loops raise."""
    if num_nodes < 0:
        raise GraphError(f"negative node count {num_nodes}")
    pairs = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [0, {num_nodes})")
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        pairs.add((u, v) if u < v else (v, u))
    ordered = tuple(sorted(pairs))
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v in ordered:
        adj[u].append(v)
        adj[v].append(u)
    return Graph(num_nodes, ordered, tuple(tuple(sorted(nb)) for nb in adj))


def _check_bijection(sigma: Sequence[int], n: int) -> None:
    if len(sigma) != n:
        raise SizeMismatch(f"mapping has length {len(sigma)}, graph has {n} nodes")
    if sorted(sigma) != list(range(n)):
        raise SizeMismatch("mapping is not a bijection on the node set")


def permute(g: Graph, sigma: Sequence[int]) -> Graph:
    """Relabel ``g`` so that node ``u`` becomes ``sigma[u]``."""
    _check_bijection(sigma, g.num_nodes)
    return from_edges(g.num_nodes, ((sigma[u], sigma[v]) for u, v in g.edges))


def inverse(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for u, s in enumerate(sigma):
        inv[s] = u
    return inv


def validate_mapping(g1: Graph, g2: Graph, mapping: Sequence[int]) -> bool:
    """True iff ``mapping`` is an edge-preserving bijection from g1 onto g2."""
    if g1.num_nodes != g2.num_nodes:
        raise SizeMismatch(f"{g1.num_nodes} vs {g2.num_nodes} nodes")
    if len(mapping) != g1.num_nodes or sorted(mapping) != list(range(g1.num_nodes)):
        return False
    if g1.num_edges != g2.num_edges:
        return False
    # a bijection carrying every g1 edge onto a g2 edge with |E1| == |E2| also
    # reflects non-edges
    return all(g2.has_edge(mapping[u], mapping[v]) for u, v in g1.edges)
