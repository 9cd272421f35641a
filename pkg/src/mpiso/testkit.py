"""Brute-force isomorphism oracles and seeded graph generators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from mpiso.graph import Graph, from_edges, permute


class TooLarge(ValueError):
    pass


class UnsatisfiableSpec(ValueError):
    pass


# ---------------------------------------------------------------- oracles


def _local_signature(g: Graph, u: int) -> tuple:
    return (g.degree(u), tuple(sorted((g.degree(v) for v in g.adjacency[u]), reverse=True)))


def brute_force_isomorphic(g1: Graph, g2: Graph, max_nodes: int = 16) -> list[int] | None:
    """Backtracking search for an isomorphism g1 -> g2.

    Candidates are restricted to nodes with equal degree and neighbor
    degrees; each extension is checked against all previously placed nodes.
    Returns a mapping list or None.
    """
    n = g1.num_nodes
    if n != g2.num_nodes or g1.num_edges != g2.num_edges:
        return None
    if n > max_nodes:
        raise TooLarge(f"{n} nodes exceeds oracle cap {max_nodes}")
    sig1 = [_local_signature(g1, u) for u in range(n)]
    sig2 = [_local_signature(g2, u) for u in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    adj1 = [set(nb) for nb in g1.adjacency]
    adj2 = [set(nb) for nb in g2.adjacency]

    # place nodes so that each one is adjacent to earlier ones when possible
    order: list[int] = []
    placed = set()
    for root in sorted(range(n), key=lambda u: -g1.degree(u)):
        if root in placed:
            continue
        queue = [root]
        placed.add(root)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for v in sorted(adj1[u], key=lambda w: -g1.degree(w)):
                if v not in placed:
                    placed.add(v)
                    queue.append(v)

    mapping = [-1] * n
    used = [False] * n

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        u = order[depth]
        for v in range(n):
            if used[v] or sig2[v] != sig1[u]:
                continue
            if all((w in adj1[u]) == (mapping[w] in adj2[v]) for w in order[:depth]):
                mapping[u] = v
                used[v] = True
                if extend(depth + 1):
                    return True
                used[v] = False
        mapping[u] = -1
        return False

    return list(mapping) if extend(0) else None


def permutation_isomorphic(g1: Graph, g2: Graph, max_nodes: int = 8) -> list[int] | None:
    """Try every permutation; no pruning at all."""
    n = g1.num_nodes
    if n != g2.num_nodes or g1.num_edges != g2.num_edges:
        return None
    if n > max_nodes:
        raise TooLarge(f"{n} nodes exceeds permutation oracle cap {max_nodes}")
    target = set(g2.edges)
    for perm in itertools.permutations(range(n)):
        if all(tuple(sorted((perm[u], perm[v]))) in target for u, v in g1.edges):
            return list(perm)
    return None


def all_automorphisms(g: Graph, max_nodes: int = 8) -> list[tuple[int, ...]]:
    n = g.num_nodes
    if n > max_nodes:
        raise TooLarge(f"{n} nodes exceeds permutation oracle cap {max_nodes}")
    edges = set(g.edges)
    return [
        perm
        for perm in itertools.permutations(range(n))
        if all(tuple(sorted((perm[u], perm[v]))) in edges for u, v in g.edges)
    ]


# ------------------------------------------------------------- generators


def path(n: int) -> Graph:
    return from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise UnsatisfiableSpec("a simple cycle needs at least 3 nodes")
    return from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    return from_edges(n, itertools.combinations(range(n), 2))


def mesh2d(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return from_edges(rows * cols, edges)


def mesh3d(x: int, y: int, z: int) -> Graph:
    idx = lambda i, j, k: (i * y + j) * z + k  # noqa: E731
    edges = []
    for i, j, k in itertools.product(range(x), range(y), range(z)):
        if i + 1 < x:
            edges.append((idx(i, j, k), idx(i + 1, j, k)))
        if j + 1 < y:
            edges.append((idx(i, j, k), idx(i, j + 1, k)))
        if k + 1 < z:
            edges.append((idx(i, j, k), idx(i, j, k + 1)))
    return from_edges(x * y * z, edges)


def disjoint_union(graphs: list[Graph]) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.num_nodes
    return from_edges(offset, edges)


def random_graph(n: int, rho: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, rho)."""
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < rho
    return from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def random_connected_graph(n: int, rho: float, rng: np.random.Generator) -> Graph:
    """G(n, rho) overlaid on a random recursive spanning tree."""
    g = random_graph(n, rho, rng)
    order = rng.permutation(n).tolist()
    tree = [(order[t], order[int(rng.integers(t))]) for t in range(1, n)]
    return from_edges(n, list(g.edges) + tree)


def random_regular(n: int, d: int, rng: np.random.Generator, attempts: int = 1000) -> Graph:
    """Uniform-ish simple d-regular graph via the pairing model with rejection."""
    if (n * d) % 2 or d >= n:
        raise UnsatisfiableSpec(f"no simple {d}-regular graph on {n} nodes")
    stubs = np.repeat(np.arange(n), d)
    for _ in range(attempts):
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        canon = {tuple(sorted(p)) for p in pairs.tolist()}
        if len(canon) == len(pairs):
            return from_edges(n, canon)
    raise UnsatisfiableSpec(f"pairing model failed for n={n}, d={d}")


def rook_graph_4x4() -> Graph:
    """K4 x K4: nodes (r, c), adjacent when they share a row or a column."""
    edges = [
        (4 * r1 + c1, 4 * r2 + c2)
        for r1, c1, r2, c2 in itertools.product(range(4), repeat=4)
        if (r1, c1) < (r2, c2) and (r1 == r2 or c1 == c2)
    ]
    return from_edges(16, edges)


def shrikhande_graph() -> Graph:
    """Cayley graph on Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1)."""
    steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = [
        (4 * r + c, 4 * ((r + dr) % 4) + (c + dc) % 4)
        for r, c in itertools.product(range(4), repeat=2)
        for dr, dc in steps
    ]
    return from_edges(16, edges)


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a test graph.

    ``kind`` is one of random, mesh2d, mesh3d, cycle, path, complete,
    regular, union, named.  ``params`` holds the sizes (``n``/``rho``,
    ``rows``/``cols``, ``x``/``y``/``z``, ``d``, ``name``); ``parts`` the
    component specs of a union.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    connected: bool = False
    parts: tuple["GeneratorSpec", ...] = ()
    max_attempts: int = 1000

    def label(self) -> str:
        if self.kind == "random":
            return f"random_r{self.params['rho']}"
        return self.kind


NAMED = {
    "c6": lambda: cycle(6),
    "2c3": lambda: disjoint_union([cycle(3), cycle(3)]),
    "rook4x4": rook_graph_4x4,
    "shrikhande": shrikhande_graph,
    "paw": lambda: from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]),
}


def _build(spec: GeneratorSpec, rng: np.random.Generator) -> Graph:
    p = spec.params
    k = spec.kind
    if k == "random":
        if spec.connected:
            return random_connected_graph(int(p["n"]), float(p["rho"]), rng)
        return random_graph(int(p["n"]), float(p["rho"]), rng)
    if k == "mesh2d":
        return mesh2d(int(p["rows"]), int(p["cols"]))
    if k == "mesh3d":
        return mesh3d(int(p["x"]), int(p["y"]), int(p["z"]))
    if k == "cycle":
        return cycle(int(p["n"]))
    if k == "path":
        return path(int(p["n"]))
    if k == "complete":
        return complete(int(p["n"]))
    if k == "regular":
        return random_regular(int(p["n"]), int(p["d"]), rng)
    if k == "union":
        return disjoint_union([_build(part, rng) for part in spec.parts])
    if k == "named":
        try:
            return NAMED[p["name"]]()
        except KeyError:
            raise UnsatisfiableSpec(f"unknown named graph {p.get('name')!r}") from None
    raise UnsatisfiableSpec(f"unknown generator kind {k!r}")


def generate(spec: GeneratorSpec) -> Graph:
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "random" and spec.connected and int(spec.params["n"]) > 1 and float(spec.params["rho"]) <= 0:
        raise UnsatisfiableSpec("rho = 0 cannot produce a connected graph")
    for _ in range(spec.max_attempts if spec.connected else 1):
        g = _build(spec, rng)
        if not spec.connected or g.is_connected():
            return g
        if spec.kind not in ("random", "regular", "union"):
            break
    raise UnsatisfiableSpec(f"no connected graph for {spec} within {spec.max_attempts} attempts")


def random_permutation(n: int, seed: int | None) -> list[int]:
    """Uniform permutation for ``seed``; identity when ``seed`` is None."""
    if seed is None:
        return list(range(n))
    return np.random.default_rng(seed).permutation(n).tolist()


def isomorphic_pair(spec: GeneratorSpec, perm_seed: int | None) -> tuple[Graph, Graph, list[int]]:
    g = generate(spec)
    sigma = random_permutation(g.num_nodes, perm_seed)
    return g, permute(g, sigma), sigma


def degree_preserving_variant(g: Graph, rng: np.random.Generator, swaps: int = 10,
                              attempts: int = 200, connected: bool = True) -> Graph | None:
    """A graph with g's degree sequence that the oracle says is not isomorphic to g.

    Applies random double-edge swaps ``(a,b),(c,d) -> (a,d),(c,b)``.  Returns
    None if no such graph turned up within ``attempts`` tries.
    """
    if g.num_edges < 2:
        return None
    for _ in range(attempts):
        edges = set(g.edges)
        for _ in range(swaps):
            elist = sorted(edges)
            i, j = rng.choice(len(elist), size=2, replace=False)
            (a, b), (c, d) = elist[i], elist[j]
            if rng.random() < 0.5:
                c, d = d, c
            e1, e2 = tuple(sorted((a, d))), tuple(sorted((c, b)))
            if a == d or c == b or e1 == e2 or e1 in edges or e2 in edges:
                continue
            edges -= {elist[i], elist[j]}
            edges |= {e1, e2}
        h = from_edges(g.num_nodes, edges)
        if connected and not h.is_connected():
            continue
        if brute_force_isomorphic(g, h) is None:
            return h
    return None
