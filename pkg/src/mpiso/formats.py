"""Graph file readers/writers, JSON verdict reports and CSV benchmark rows."""

from __future__ import annotations

import csv
import io
import json
import re
import struct
from dataclasses import dataclass
from pathlib import Path

from mpiso.graph import Graph, from_edges


class FormatError(ValueError):
    pass


class Truncated(FormatError):
    pass


class TargetOutOfRange(FormatError):
    pass


class ParseError(FormatError):
    pass


class CountMismatch(FormatError):
    pass


# --------------------------------------------------------------- TC-15


def read_tc15(data: bytes, big_endian: bool = False) -> Graph:
    """Parse a TC-15 (iso series) binary graph.

    Layout: 16-bit unsigned words; node count, then per node an edge count
    followed by that many target indices.  Edges are taken as undirected.
    """
    fmt = ">H" if big_endian else "<H"
    pos = 0

    def word() -> int:
        nonlocal pos
        if pos + 2 > len(data):
            raise Truncated(f"stream ends at byte {len(data)}, expected a word at {pos}")
        (w,) = struct.unpack_from(fmt, data, pos)
        pos += 2
        return w

    n = word()
    edges = []
    for u in range(n):
        k = word()
        for _ in range(k):
            v = word()
            if v >= n:
                raise TargetOutOfRange(f"node {u} points at {v}, graph has {n} nodes")
            edges.append((u, v))
    return from_edges(n, edges)


_PAIR_RE = re.compile(r"^(?P<family>.+?)_s(?P<size>\d+)\.A(?P<idx>\d+)$")


def discover_tc15_pairs(root: str | Path) -> list[tuple[str, str, Path, Path]]:
    """Find ``*.Ann`` / ``*.Bnn`` pairs below ``root``.

    Returns ``(family, pair_id, path_a, path_b)`` sorted by family and id,
    e.g. ``("iso_r001", "iso_r001_s20.00", ...)``.
    """
    root = Path(root)
    found = []
    for a in sorted(root.rglob("*.A*")):
        m = _PAIR_RE.match(a.name)
        if not m:
            continue
        b = a.with_name(f"{a.name[:-len(m['idx']) - 1]}B{m['idx']}")
        if b.exists():
            found.append((m["family"], f"{m['family']}_s{m['size']}.{m['idx']}", a, b))
    return found


# ------------------------------------------------------------ edge list


def read_edge_list(text: str) -> Graph:
    """``M K`` header then ``K`` lines of 0-based ``u v``; blank and # lines ignored."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty edge list")
    try:
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError
        m, k = int(header[0]), int(header[1])
        pairs = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError
            pairs.append((int(parts[0]), int(parts[1])))
    except ValueError:
        raise ParseError(f"malformed edge list line near {ln if len(lines) > 1 else lines[0]!r}") from None
    if len(pairs) != k:
        raise CountMismatch(f"header declares {k} edges, found {len(pairs)} lines")
    g = from_edges(m, pairs)
    if g.num_edges != k:
        raise CountMismatch(f"header declares {k} edges, {g.num_edges} remain after dedup")
    return g


def write_edge_list(g: Graph) -> str:
    out = [f"{g.num_nodes} {g.num_edges}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    """Read a graph file; format from ``fmt`` or the extension (.txt/.el -> edge list)."""
    path = Path(path)
    if fmt is None:
        fmt = "edgelist" if path.suffix.lower() in (".txt", ".el", ".edges", ".edgelist") else "tc15"
    if fmt == "edgelist":
        return read_edge_list(path.read_text())
    if fmt in ("tc15", "tc15-le"):
        return read_tc15(path.read_bytes())
    if fmt == "tc15-be":
        return read_tc15(path.read_bytes(), big_endian=True)
    raise FormatError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------- reports


def verdict_dict(v, extra: dict | None = None) -> dict:
    d = {
        "isomorphic": bool(v.isomorphic),
        "mapping": list(v.mapping) if v.mapping is not None else None,
        "probes": int(v.probes),
        "rounds": int(v.rounds),
        "seed": int(v.seed),
        "mode": v.mode,
        "reason": v.reason,
        "connected": bool(v.connected),
    }
    if extra:
        d.update(extra)
    d["timing"] = {"wall_time_us": int(v.wall_time_us)}
    return d


def write_report(v, extra: dict | None = None) -> str:
    """JSON report; everything outside ``timing`` is deterministic for a fixed seed."""
    return json.dumps(verdict_dict(v, extra), indent=2) + "\n"


BENCH_HEADER = ("family", "M", "pair_id", "verdict", "probes", "rounds", "wall_time_us")


@dataclass
class BenchRecord:
    family: str
    M: int
    pair_id: str
    verdict: bool | str  # True/False, or "error"/"limit"
    probes: int = 0
    rounds: int = 0
    wall_time_us: float = 0

    def row(self) -> list:
        verdict = self.verdict if isinstance(self.verdict, str) else ("iso" if self.verdict else "noniso")
        wt = self.wall_time_us
        return [self.family, self.M, self.pair_id, verdict, self.probes, self.rounds,
                int(wt) if float(wt).is_integer() else f"{wt:.1f}"]


def write_bench_csv(records: list[BenchRecord], stream: io.TextIOBase | None = None) -> str:
    buf = io.StringIO() if stream is None else stream
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue() if stream is None else ""


def read_bench_csv(text: str) -> list[BenchRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        verdict = {"iso": True, "noniso": False}.get(row["verdict"], row["verdict"])
        out.append(BenchRecord(row["family"], int(row["M"]), row["pair_id"], verdict,
                               int(row["probes"]), int(row["rounds"]), float(row["wall_time_us"])))
    return out
