"""Schedule container, SINR verification and schedule CSV output."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

from .radio import RadioParams, SinrReport, sinr_feasible
from .topology import CommGraph

SCHEDULE_HEADER = ["link_id", "tx", "rx", "slot"]


class ScheduleError(ValueError):
    """Schedule does not match the graph it claims to cover."""


@dataclass(frozen=True)
class Schedule:
    colors: Mapping[int, int]
    num_slots: int
    algorithm: str = ""
    seed: Optional[int] = None

    @classmethod
    def from_slots(cls, slots: Sequence[Sequence[int]], algorithm: str = "", seed: Optional[int] = None) -> "Schedule":
        """Build from a list of slot classes; empty classes are dropped."""
        colors: Dict[int, int] = {}
        slot = 0
        for members in slots:
            if not members:
                continue
            slot += 1
            for link_id in members:
                if link_id in colors:
                    raise ScheduleError(f"link {link_id} placed in two slots")
                colors[int(link_id)] = slot
        return cls(colors, slot, algorithm, seed)

    def slots(self) -> List[List[int]]:
        """Link ids per slot, slot 1 first, ids ascending."""
        out: List[List[int]] = [[] for _ in range(self.num_slots)]
        for link_id in sorted(self.colors):
            out[self.colors[link_id] - 1].append(link_id)
        return out

    def __len__(self) -> int:
        return self.num_slots


def check_schedule(g: CommGraph, s: Schedule) -> None:
    """Raise ScheduleError unless ``s`` assigns every link of ``g`` to a slot in 1..C, all non-empty."""
    expected = {l.id for l in g.links}
    got = set(s.colors)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        raise ScheduleError(f"schedule/link mismatch: missing {missing[:10]}, unknown {extra[:10]}")
    used = set(s.colors.values())
    if used != set(range(1, s.num_slots + 1)):
        raise ScheduleError("slot indices must be exactly 1..num_slots with none empty")


def verify_schedule(g: CommGraph, params: RadioParams, s: Schedule) -> List[SinrReport]:
    """SINR report for every slot, slot 1 first.

    A slot where some transmitter sits on another link's receiver (a node
    both sending and receiving) is reported with SINR 0 at that receiver.
    """
    check_schedule(g, s)
    reports = []
    for members in s.slots():
        tx, rx = g.link_positions(members)
        reports.append(sinr_feasible(params, list(zip(map(tuple, tx), map(tuple, rx))), coincident_ok=True))
    return reports


def schedule_feasible(g: CommGraph, params: RadioParams, s: Schedule) -> bool:
    return all(r.feasible for r in verify_schedule(g, params, s))


def node_conflicts(g: CommGraph, s: Schedule) -> List[Tuple[int, int]]:
    """Pairs of co-slotted links that share a node."""
    conflicts = []
    for members in s.slots():
        seen: Dict[int, int] = {}
        for link_id in members:
            link = g.links[link_id]
            for node in {link.tx, link.rx}:
                if node in seen:
                    conflicts.append((seen[node], link_id))
                else:
                    seen[node] = link_id
    return conflicts


def write_schedule(
    g: CommGraph,
    s: Schedule,
    out: Union[str, Path, TextIO],
    *,
    with_algo: bool = False,
    physical_ids: bool = False,
) -> None:
    """Write ``link_id,tx,rx,slot`` rows, ordered by link then slot.

    ``physical_ids`` reports replicas of load-expanded graphs under the id
    of their physical link, so one link may appear on several rows.
    """
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_schedule(g, s, fh, with_algo=with_algo, physical_ids=physical_ids)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCHEDULE_HEADER + (["algo"] if with_algo else []))
    rows = []
    for link in g.links:
        link_id = link.physical if physical_ids else link.id
        rows.append((link_id, link.tx, link.rx, s.colors[link.id]))
    for row in sorted(rows):
        writer.writerow(list(row) + ([s.algorithm] if with_algo else []))


def schedule_to_csv(g: CommGraph, s: Schedule, **kwargs) -> str:
    buf = io.StringIO()
    write_schedule(g, s, buf, **kwargs)
    return buf.getvalue()


def format_reports(reports: Sequence[SinrReport]) -> str:
    lines = ["slot,links,min_sinr,min_margin,feasible"]
    for k, r in enumerate(reports, start=1):
        min_sinr = min(r.sinr) if r.sinr else float("inf")
        lines.append(f"{k},{len(r.sinr)},{min_sinr:.6g},{r.min_margin:.6g},{r.feasible}")
    return "\n".join(lines)
