"""Bipartite node/edge representation and the degree-based cell partition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mpiso.graph import Graph, from_edges


@dataclass(frozen=True, order=True)
class CellSignature:
    degree: int
    neighbor_degrees: tuple[int, ...]  # descending

    def sort_key(self) -> tuple:
        # degree descending, then neighbor sequence lexicographically descending
        return (-self.degree, tuple(-d for d in self.neighbor_degrees))


@dataclass(frozen=True)
class CellPartition:
    """Ordered cells over canonical node positions.

    Cells occupy contiguous position ranges: ``cells[r]`` lists positions
    ``starts[r] .. starts[r] + len - 1``.
    """

    signatures: tuple[CellSignature, ...]
    cells: tuple[tuple[int, ...], ...]
    cell_of: np.ndarray

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def similar(self, i: int, j: int) -> bool:
        return bool(self.cell_of[i] == self.cell_of[j])


def similar(p: CellPartition, i: int, j: int) -> bool:
    return p.similar(i, j)


def cell_structures_match(p1: CellPartition, p2: CellPartition) -> bool:
    return p1.signatures == p2.signatures and p1.sizes() == p2.sizes()


@dataclass(frozen=True)
class CanonicalGraph:
    """Canonical bipartite form of a graph.

    Node positions (nu) follow the sorted cell order.  Original edge ``k``
    becomes xi-node ``k`` with bipartite edges ``2k`` and ``2k + 1``, so the
    complement edge of ``E`` inside its xi-node is ``E ^ 1``.

    ``nu_order[orig]`` is the position of an original node and ``nodes[pos]``
    the original node at a position.
    """

    graph: Graph
    nu_order: np.ndarray
    nodes: np.ndarray
    partition: CellPartition
    xi_nodes: np.ndarray  # (K, 2) nu positions bounding each xi, ascending
    edge_nu: np.ndarray  # (2K,) nu position of each bipartite edge
    incidence: tuple[tuple[int, ...], ...]  # Q(nu): bipartite edges at each nu
    # node-grouped edge permutation used for per-node sums
    csr_edges: np.ndarray
    csr_starts: np.ndarray
    csr_nonempty: np.ndarray

    @property
    def nu_count(self) -> int:
        return self.graph.num_nodes

    @property
    def xi_count(self) -> int:
        return len(self.xi_nodes)

    @property
    def edge_count(self) -> int:
        return 2 * self.xi_count

    def xi_ends(self, k: int) -> tuple[int, int]:
        return (2 * k, 2 * k + 1)

    def degree(self, pos: int) -> int:
        return len(self.incidence[pos])

    def to_graph(self) -> Graph:
        """Rebuild a graph on nu positions from the bipartite incidence."""
        return from_edges(self.nu_count, ((int(u), int(v)) for u, v in self.xi_nodes))


def node_signature(g: Graph, u: int) -> CellSignature:
    nd = sorted((g.degree(v) for v in g.adjacency[u]), reverse=True)
    return CellSignature(g.degree(u), tuple(nd))


def canonicalize(g: Graph) -> CanonicalGraph:
    n = g.num_nodes
    sigs = [node_signature(g, u) for u in range(n)]
    # ties inside a cell keep ascending original index
    nodes = sorted(range(n), key=lambda u: (sigs[u].sort_key(), u))
    nu_order = np.empty(n, dtype=np.int64)
    nu_order[nodes] = np.arange(n)

    signatures: list[CellSignature] = []
    cells: list[list[int]] = []
    cell_of = np.empty(n, dtype=np.int64)
    for pos, u in enumerate(nodes):
        if not signatures or sigs[u] != signatures[-1]:
            signatures.append(sigs[u])
            cells.append([])
        cells[-1].append(pos)
        cell_of[pos] = len(cells) - 1
    partition = CellPartition(tuple(signatures), tuple(tuple(c) for c in cells), cell_of)

    ends = [tuple(sorted((int(nu_order[u]), int(nu_order[v])))) for u, v in g.edges]
    ends.sort(key=lambda e: (cell_of[e[0]], cell_of[e[1]], e[0], e[1]))
    xi_nodes = np.array(ends, dtype=np.int64).reshape(-1, 2)
    edge_nu = xi_nodes.reshape(-1).copy()

    incidence: list[list[int]] = [[] for _ in range(n)]
    for e, pos in enumerate(edge_nu):
        incidence[pos].append(e)
    csr_edges = np.array([e for inc in incidence for e in inc], dtype=np.int64)
    degs = np.array([len(inc) for inc in incidence], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(degs)[:-1])) if n else np.zeros(0, dtype=np.int64)
    nonempty = np.flatnonzero(degs > 0)

    return CanonicalGraph(
        graph=g,
        nu_order=nu_order,
        nodes=np.array(nodes, dtype=np.int64),
        partition=partition,
        xi_nodes=xi_nodes,
        edge_nu=edge_nu,
        incidence=tuple(tuple(inc) for inc in incidence),
        csr_edges=csr_edges,
        csr_starts=offsets[nonempty].astype(np.int64),
        csr_nonempty=nonempty,
    )


def to_json_dict(c: CanonicalGraph) -> dict:
    """Plain-data dump used by the ``canon`` subcommand."""
    p = c.partition
    return {
        "nu_count": c.nu_count,
        "xi_count": c.xi_count,
        "edge_count": c.edge_count,
        "nu_order": [int(x) for x in c.nu_order],
        "cells": [
            {
                "degree": sig.degree,
                "neighbor_degrees": list(sig.neighbor_degrees),
                "nu": list(cell),
                "original": [int(c.nodes[pos]) for pos in cell],
            }
            for sig, cell in zip(p.signatures, p.cells)
        ],
        "xi": [[int(u), int(v)] for u, v in c.xi_nodes],
    }
