"""Node placement, communication graphs and topology CSV files."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .radio import SINR_RTOL, DegenerateGeometryError, RadioParams

PathLike = Union[str, Path]

TOPOLOGY_HEADER = ["id", "x", "y"]
LINK_HEADER = ["link_id", "tx", "rx", "length_m"]


class TopologyError(ValueError):
    """Malformed topology input."""


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float


@dataclass(frozen=True)
class Link:
    id: int
    tx: int
    rx: int
    length: float
    # id of the physical link this one replicates (itself unless load-expanded)
    origin: Optional[int] = None

    @property
    def physical(self) -> int:
        return self.id if self.origin is None else self.origin

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.tx, self.rx)


@dataclass(frozen=True)
class CommGraph:
    nodes: Tuple[Node, ...]
    links: Tuple[Link, ...]
    params: RadioParams
    positions: np.ndarray = field(repr=False, compare=False)

    @property
    def num_links(self) -> int:
        return len(self.links)

    def link_positions(self, link_ids: Optional[Iterable[int]] = None) -> Tuple[np.ndarray, np.ndarray]:
        """(tx, rx) coordinate arrays for the given links (all links by default)."""
        links = self.links if link_ids is None else [self.links[i] for i in link_ids]
        if not links:
            return np.empty((0, 2)), np.empty((0, 2))
        tx = self.positions[[l.tx for l in links]]
        rx = self.positions[[l.rx for l in links]]
        return tx, rx

    def with_links(self, links: Sequence[Link]) -> "CommGraph":
        """Same nodes, different link set; ids are reassigned 0..k-1.

        Used to restrict the schedule to a routed subset of links, and by
        load expansion. The ``origin`` of each link is preserved, or set to
        its previous id.
        """
        relabeled = tuple(
            Link(id=k, tx=l.tx, rx=l.rx, length=l.length, origin=l.physical)
            for k, l in enumerate(links)
        )
        return CommGraph(self.nodes, relabeled, self.params, self.positions)

    def max_node_degree(self) -> int:
        """Largest in-degree plus out-degree over all nodes."""
        if not self.nodes:
            return 0
        deg = np.zeros(len(self.nodes), dtype=int)
        for l in self.links:
            deg[l.tx] += 1
            deg[l.rx] += 1
        return int(deg.max())


def generate_topology(n: int, side: float, seed: int) -> List[Node]:
    """Scatter ``n`` nodes uniformly over ``[0, side]^2``.

    Uses numpy's PCG64 bit generator, whose stream is fixed across
    platforms for a given seed. A draw landing exactly on an earlier node
    is redrawn.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not side > 0:
        raise ValueError("side must be > 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    seen = set()
    nodes: List[Node] = []
    while len(nodes) < n:
        x, y = rng.uniform(0.0, side, size=2)
        if (x, y) in seen:
            continue
        seen.add((x, y))
        nodes.append(Node(len(nodes), float(x), float(y)))
    return nodes


def _positions(nodes: Sequence[Node]) -> np.ndarray:
    for k, node in enumerate(nodes):
        if node.id != k:
            raise TopologyError(f"node ids must be contiguous from 0; found {node.id} at position {k}")
    pos = np.array([(n.x, n.y) for n in nodes], dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(pos)):
        raise TopologyError("node coordinates must be finite")
    return pos


def build_comm_graph(nodes: Sequence[Node], params: RadioParams) -> CommGraph:
    """Directed link for every ordered node pair within communication range.

    The range test is the lone-link SINR check (signal over noise against
    the threshold, with the usual relative slack), so a pair sitting exactly
    at the communication range is linked. Links are numbered in (tx, rx)
    lexicographic order.
    """
    nodes = tuple(nodes)
    pos = _positions(nodes)
    n = len(nodes)
    links: List[Link] = []
    if n > 1:
        dist = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
        off = ~np.eye(n, dtype=bool)
        if np.any(dist[off] == 0.0):
            a, b = np.argwhere((dist == 0.0) & off)[0]
            raise DegenerateGeometryError(f"nodes {a} and {b} share coordinates")
        with np.errstate(divide="ignore"):
            snr = params.power_mw / dist**params.alpha / params.noise_mw
        in_range = (snr >= params.gamma_lin * (1.0 - SINR_RTOL)) & off
        for a, b in zip(*np.nonzero(in_range)):
            links.append(Link(len(links), int(a), int(b), float(dist[a, b])))
    return CommGraph(nodes, tuple(links), params, pos)


def save_topology(nodes: Sequence[Node], path: PathLike) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TOPOLOGY_HEADER)
        for node in nodes:
            writer.writerow([node.id, repr(node.x), repr(node.y)])


def load_topology(path: PathLike) -> List[Node]:
    """Read a topology CSV (``id,x,y``). Rows may come in any id order."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or all(not r for r in rows):
        return []
    header = [c.strip() for c in rows[0]]
    if header != TOPOLOGY_HEADER:
        raise TopologyError(f"line 1: expected header {','.join(TOPOLOGY_HEADER)}, got {','.join(header)}")
    by_id = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise TopologyError(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            node_id = int(row[0])
            x = float(row[1])
            y = float(row[2])
        except ValueError as exc:
            raise TopologyError(f"line {lineno}: {exc}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise TopologyError(f"line {lineno}: non-finite coordinate")
        if node_id in by_id:
            raise TopologyError(f"line {lineno}: duplicate id {node_id}")
        by_id[node_id] = Node(node_id, x, y)
    if sorted(by_id) != list(range(len(by_id))):
        raise TopologyError("node ids must be contiguous from 0")
    return [by_id[i] for i in range(len(by_id))]


def save_links(graph: CommGraph, path: PathLike) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LINK_HEADER)
        for link in graph.links:
            writer.writerow([link.id, link.tx, link.rx, repr(link.length)])
