"""Comparison schedulers: first-fit GreedyPhysical-style and exact search."""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence

import numpy as np

from .radio import RadioParams, communication_range, sinr_feasible, SINR_RTOL
from .schedule import Schedule
from .topology import CommGraph

ORDERINGS = ("input", "random", "longest-link-first", "interference-degree")
OPTIMAL_MAX_LINKS = 10


def interference_degree(g: CommGraph, params: RadioParams) -> np.ndarray:
    """Per link, how many other links transmit from within range of its receiver."""
    if not g.links:
        return np.zeros(0, dtype=int)
    tx, rx = g.link_positions()
    reach = communication_range(params) * (1.0 - SINR_RTOL) ** (-1.0 / params.alpha)
    # near[j, i]: transmitter of j within range of receiver of i
    near = np.hypot(tx[:, None, 0] - rx[None, :, 0], tx[:, None, 1] - rx[None, :, 1]) <= reach
    np.fill_diagonal(near, False)
    return near.sum(axis=0)


def link_order(g: CommGraph, params: RadioParams, ordering: str, seed: Optional[int] = None) -> List[int]:
    ids = [l.id for l in g.links]
    if ordering == "input":
        return ids
    if ordering == "random":
        rng = np.random.Generator(np.random.PCG64(seed))
        return [int(i) for i in rng.permutation(len(ids))]
    if ordering == "longest-link-first":
        return sorted(ids, key=lambda i: (-g.links[i].length, i))
    if ordering == "interference-degree":
        degree = interference_degree(g, params)
        return sorted(ids, key=lambda i: (-int(degree[i]), i))
    raise ValueError(f"unknown ordering {ordering!r}; choose from {', '.join(ORDERINGS)}")


def _block_ok(g: CommGraph, params: RadioParams, block: Sequence[int]) -> bool:
    nodes = set()
    for i in block:
        link = g.links[i]
        if link.tx in nodes or link.rx in nodes:
            return False
        nodes.update(link.endpoints)
    tx, rx = g.link_positions(block)
    return sinr_feasible(params, list(zip(map(tuple, tx), map(tuple, rx)))).feasible


def gp_schedule(
    g: CommGraph,
    params: Optional[RadioParams] = None,
    ordering: str = "interference-degree",
    seed: Optional[int] = None,
) -> Schedule:
    """First-fit greedy under the full SINR check.

    Links are taken in ``ordering`` and each goes to the lowest slot where
    it shares no node with the slot's links and the slot stays SINR
    feasible; otherwise a new slot is opened.
    """
    params = g.params if params is None else params
    slots: List[List[int]] = []
    busy: List[set] = []
    for i in link_order(g, params, ordering, seed):
        link = g.links[i]
        for members, nodes in zip(slots, busy):
            if link.tx in nodes or link.rx in nodes:
                continue
            if _block_ok(g, params, members + [i]):
                members.append(i)
                nodes.update(link.endpoints)
                break
        else:
            slots.append([i])
            busy.append(set(link.endpoints))
    return Schedule.from_slots(slots, algorithm="gp", seed=seed)


def optimal_schedule(g: CommGraph, params: Optional[RadioParams] = None, max_links: int = OPTIMAL_MAX_LINKS) -> Schedule:
    """Minimum-length feasible schedule by exhaustive set-partition search.

    Link ``k`` may join any open block or open the next one, so each
    partition is visited once. Branches are cut when a block turns
    infeasible (adding links never helps) or when the block count reaches
    the best length found so far.
    """
    params = g.params if params is None else params
    e = g.num_links
    if e > max_links:
        raise ValueError(f"optimal search is capped at {max_links} links, graph has {e}")
    if e == 0:
        return Schedule({}, 0, algorithm="optimal")

    cache: Dict[frozenset, bool] = {}

    def ok(block: List[int]) -> bool:
        key = frozenset(block)
        if key not in cache:
            cache[key] = _block_ok(g, params, block)
        return cache[key]

    best: List[List[int]] = [[i] for i in range(e)]
    blocks: List[List[int]] = []

    def search(k: int) -> None:
        nonlocal best
        if len(blocks) >= len(best):
            return
        if k == e:
            best = [list(b) for b in blocks]
            return
        for block in blocks:
            block.append(k)
            if ok(block):
                search(k + 1)
            block.pop()
        if len(blocks) + 1 < len(best):
            blocks.append([k])
            search(k + 1)
            blocks.pop()

    search(0)
    return Schedule.from_slots(best, algorithm="optimal")
