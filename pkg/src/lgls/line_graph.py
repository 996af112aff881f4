"""Line-graph weights: interference, co-schedulability and normalized noise.

Every link of the communication graph becomes a vertex of a complete
directed graph. For an ordered pair of links ``(i, j)``:

* ``w[i, j]`` is 1 if the two links share a node, otherwise the power link
  ``i``'s transmitter puts on link ``j``'s receiver, relative to the power
  ``j`` needs there (``gamma * d(t_j, r_j)^alpha / d(t_i, r_j)^alpha``);
* ``w_prime[i, j] = max(0, 1 - w[i, j])``.

``noise[j]`` is the noise power at ``r_j`` relative to what link ``j``
needs; it is 1 for a link exactly at communication range.

Storage is dense, two ``e x e`` float64 matrices.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from .radio import DegenerateGeometryError, RadioParams
from .topology import CommGraph, Link


@dataclass(frozen=True)
class LineGraph:
    """Dense line-graph weights.

    Self-pairs: ``w`` holds NaN on the diagonal and ``w_prime`` holds 0, so
    sums of ``w_prime`` over a set never pick up a self term.
    """

    w: np.ndarray = field(repr=False)
    w_prime: np.ndarray = field(repr=False)
    noise: np.ndarray = field(repr=False)
    links: Tuple[Link, ...]

    @property
    def link_count(self) -> int:
        return len(self.links)


def shares_endpoint(a: Link, b: Link) -> bool:
    return bool({a.tx, a.rx} & {b.tx, b.rx})


def interference_weight(g: CommGraph, params: RadioParams, i: int, j: int) -> float:
    """Weight of the line-graph edge from link ``i`` to link ``j``."""
    if i == j:
        raise ValueError("interference weight is undefined for a link with itself")
    li, lj = g.links[i], g.links[j]
    if shares_endpoint(li, lj):
        return 1.0
    ti = g.positions[li.tx]
    rj = g.positions[lj.rx]
    cross = float(np.hypot(*(ti - rj)))
    if cross == 0.0:
        raise DegenerateGeometryError(f"transmitter of link {i} sits on receiver of link {j}")
    return params.gamma_lin * (lj.length / cross) ** params.alpha


def co_schedulability(w_ij: float) -> float:
    if w_ij < 0:
        raise ValueError("weight must be >= 0")
    return max(0.0, 1.0 - w_ij)


def normalized_noise(params: RadioParams, link: Link) -> float:
    return params.noise_mw * params.gamma_lin * link.length**params.alpha / params.power_mw


def _adjacency(links: Tuple[Link, ...]) -> np.ndarray:
    tx = np.array([l.tx for l in links])
    rx = np.array([l.rx for l in links])
    return (
        (tx[:, None] == tx[None, :])
        | (tx[:, None] == rx[None, :])
        | (rx[:, None] == tx[None, :])
        | (rx[:, None] == rx[None, :])
    )


def build_line_graph(g: CommGraph, params: Optional[RadioParams] = None) -> LineGraph:
    params = g.params if params is None else params
    links = g.links
    e = len(links)
    if e == 0:
        empty = np.empty((0, 0))
        return LineGraph(empty, empty.copy(), np.empty(0), links)
    tx, rx = g.link_positions()
    lengths = np.array([l.length for l in links])
    # cross[i, j] = d(t_i, r_j)
    cross = np.hypot(tx[:, None, 0] - rx[None, :, 0], tx[:, None, 1] - rx[None, :, 1])
    adjacent = _adjacency(links)
    if np.any((cross == 0.0) & ~adjacent):
        i, j = np.argwhere((cross == 0.0) & ~adjacent)[0]
        raise DegenerateGeometryError(f"transmitter of link {i} sits on receiver of link {j}")
    with np.errstate(divide="ignore", invalid="ignore"):
        w = params.gamma_lin * (lengths[None, :] / cross) ** params.alpha
    w[adjacent] = 1.0
    np.fill_diagonal(w, np.nan)
    w_prime = np.maximum(0.0, 1.0 - w)
    np.fill_diagonal(w_prime, 0.0)
    noise = params.noise_mw * params.gamma_lin * lengths**params.alpha / params.power_mw
    for arr in (w, w_prime, noise):
        arr.setflags(write=False)
    return LineGraph(w, w_prime, noise, links)


@dataclass(frozen=True)
class LoadMap:
    """Per-link slot demand; ``max_ratio`` optionally bounds max/min demand."""

    demands: Mapping[int, int]
    max_ratio: Optional[float] = None

    def __post_init__(self) -> None:
        for link_id, demand in self.demands.items():
            if int(demand) != demand or demand < 1:
                raise ValueError(f"link {link_id}: demand must be a positive integer, got {demand!r}")
        if self.max_ratio is not None and self.demands:
            ratio = max(self.demands.values()) / min(self.demands.values())
            if ratio > self.max_ratio:
                raise ValueError(f"max/min demand ratio {ratio} exceeds bound {self.max_ratio}")

    @classmethod
    def from_csv(cls, path: Union[str, Path], max_ratio: Optional[float] = None) -> "LoadMap":
        """Read ``link_id,demand`` rows; links absent from the file get demand 1."""
        demands: Dict[int, int] = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                return cls({}, max_ratio)
            if [c.strip() for c in header] != ["link_id", "demand"]:
                raise ValueError("line 1: expected header link_id,demand")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    link_id, demand = int(row[0]), int(row[1])
                except (ValueError, IndexError):
                    raise ValueError(f"line {lineno}: malformed row {row!r}") from None
                if link_id in demands:
                    raise ValueError(f"line {lineno}: duplicate link_id {link_id}")
                demands[link_id] = demand
        return cls(demands, max_ratio)

    def demand(self, link_id: int) -> int:
        return int(self.demands.get(link_id, 1))


def expand_loads(g: CommGraph, loads: Union[LoadMap, Mapping[int, int]], *, strict: bool = True) -> CommGraph:
    """Replace each link by as many replicas as its demand.

    Replicas keep the endpoints of their physical link, so every pair of
    them shares a node and they always land in distinct slots. The
    ``origin`` field of each replica names the physical link. With
    ``strict`` every link must appear in ``loads``.
    """
    if not isinstance(loads, LoadMap):
        loads = LoadMap(dict(loads))
    unknown = set(loads.demands) - {l.id for l in g.links}
    if unknown:
        raise ValueError(f"loads name unknown links: {sorted(unknown)}")
    if strict:
        missing = [l.id for l in g.links if l.id not in loads.demands]
        if missing:
            raise ValueError(f"no demand given for links {missing}")
    replicas: List[Link] = []
    for link in g.links:
        replicas.extend([link] * loads.demand(link.id))
    return g.with_links(replicas)


def dump_weights(lg: LineGraph, path: Union[str, Path]) -> None:
    """Debug dump: one row per ordered pair ``i,j,w,w_prime``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "w", "w_prime"])
        for i in range(lg.link_count):
            for j in range(lg.link_count):
                if i != j:
                    writer.writerow([i, j, repr(float(lg.w[i, j])), repr(float(lg.w_prime[i, j]))])
