from __future__ import annotations

from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mpiso.graph import Graph, from_edges
from mpiso.pattern import mirrored_pattern, probe_pattern
from mpiso.testkit import complete, cycle, disjoint_union, path

FIXTURES = Path(__file__).parent / "fixtures"

PAW = from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
K3, K4 = complete(3), complete(4)
P3, P4 = path(3), path(4)
C5, C6 = cycle(5), cycle(6)
TWO_C3 = disjoint_union([cycle(3), cycle(3)])
SINGLE_EDGE = from_edges(2, [(0, 1)])


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 9) -> Graph:
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def graphs_with_permutation(draw, min_nodes: int = 1, max_nodes: int = 9):
    g = draw(graphs(min_nodes, max_nodes))
    sigma = draw(st.permutations(range(g.num_nodes)))
    return g, list(sigma)


def assert_input_requirements(c1, c2, state, i, j, s):
    """Probe i in graph 1 against candidate j in graph 2; assert the pattern invariants."""
    p1 = probe_pattern(c1, i, state, s)
    p2 = mirrored_pattern(c2, j, state, p1, s)
    v1, v2 = [int(v) for v in p1.values], [int(v) for v in p2.values]
    n1, n2 = Counter(v1), Counter(v2)
    # matched pairs share a value unique within each pattern
    for k, m in state.matched:
        assert v1[k] == v2[m]
        assert n1[v1[k]] == 1 and n2[v2[m]] == 1
    # entries of different cells never share a value
    for vals, c in ((v1, c1), (v2, c2)):
        cells_of_value: dict[int, set[int]] = {}
        for pos, val in enumerate(vals):
            cells_of_value.setdefault(val, set()).add(int(c.partition.cell_of[pos]))
        assert all(len(cs) == 1 for cs in cells_of_value.values())
    # probe and candidate carry the same value, unique in each pattern
    assert v1[i] == v2[j] == s.beta
    assert n1[s.beta] == 1 and n2[s.beta] == 1
    assert n1 == n2
    return p1, p2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ------------------------------------------------ acceptance reporting

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if rep.skipped and rep.when in ("setup", "call"):
        _ACCEPTANCE[label] = ("SKIP", item.name)
    elif rep.when == "call":
        _ACCEPTANCE[label] = ("PASS" if rep.passed else "FAIL", item.name)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        status, name = _ACCEPTANCE[label]
        terminalreporter.write_line(f"[{status}] {label}  ({name})")


def encode_tc15(g: Graph, big_endian: bool = False, both_orientations: bool = False) -> bytes:
    """Test-side encoder for the TC-15 word layout."""
    import struct

    fmt = ">H" if big_endian else "<H"
    out = [struct.pack(fmt, g.num_nodes)]
    for u in range(g.num_nodes):
        targets = [v for v in g.adjacency[u] if both_orientations or v > u]
        out.append(struct.pack(fmt, len(targets)))
        out.extend(struct.pack(fmt, v) for v in targets)
    return b"".join(out)
