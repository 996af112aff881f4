"""Greedy line-graph link scheduling (LGLS)."""
from __future__ import annotations

from typing import Iterable, List, Optional

import numpy as np

from .line_graph import LineGraph
from .schedule import Schedule


def theorem1_holds(lg: LineGraph, subset: Iterable[int]) -> bool:
    """Sufficient condition for giving every link in ``subset`` the same slot.

    For each member ``v``, the co-schedulability flowing into ``v`` from the
    rest of the subset must exceed ``|subset| + noise[v] - 2``.
    """
    members = np.array(sorted(set(subset)), dtype=int)
    if members.size == 0:
        raise ValueError("subset must be non-empty")
    wp = lg.w_prime[np.ix_(members, members)]
    incoming = wp.sum(axis=0)  # diagonal is zero
    return bool(np.all(incoming > members.size + lg.noise[members] - 2))


def lgls_schedule(lg: LineGraph, seed: Optional[int] = None, *, deterministic: bool = False) -> Schedule:
    """Colour the line-graph vertices one slot at a time.

    Each slot is opened with a random uncoloured link (lowest id when
    ``deterministic``). The slot then repeatedly takes the uncoloured link
    with the largest total co-schedulability to and from the slot (lowest
    id on ties), as long as the slot plus that link still satisfies
    :func:`theorem1_holds`. The first rejection closes the slot.

    Running sums keep each selection O(e) and each admission test
    O(|slot|), so the whole loop is O(e^2).
    """
    wp = lg.w_prime
    noise = lg.noise
    e = lg.link_count
    rng = np.random.Generator(np.random.PCG64(seed))

    colors = np.zeros(e, dtype=np.int64)
    uncolored = np.ones(e, dtype=bool)
    remaining = e
    # pair_sum[y] = sum over slot x of w'(x->y) + w'(y->x)
    pair_sum = np.empty(e)
    # incoming[y] = sum over slot x of w'(x->y); for y in the slot this
    # excludes y itself because the diagonal of w' is zero
    incoming = np.empty(e)
    members: List[int] = []
    p = 0

    def admit(v: int) -> None:
        nonlocal remaining
        colors[v] = p
        uncolored[v] = False
        remaining -= 1
        members.append(v)
        np.add(pair_sum, wp[v, :], out=pair_sum)
        np.add(pair_sum, wp[:, v], out=pair_sum)
        np.add(incoming, wp[v, :], out=incoming)

    while remaining:
        p += 1
        pair_sum.fill(0.0)
        incoming.fill(0.0)
        members.clear()
        candidates = np.flatnonzero(uncolored)
        first = candidates[0] if deterministic else candidates[rng.integers(candidates.size)]
        admit(int(first))
        while remaining:
            candidates = np.flatnonzero(uncolored)
            u = int(candidates[np.argmax(pair_sum[candidates])])
            size = len(members)
            slot = np.asarray(members)
            # every current member must still clear its threshold with u added
            if not np.all(incoming[slot] + wp[u, slot] > size + noise[slot] - 1):
                break
            if not incoming[u] > size + noise[u] - 1:
                break
            admit(u)

    return Schedule(
        colors={i: int(colors[i]) for i in range(e)},
        num_slots=p,
        algorithm="lgls",
        seed=seed,
    )
