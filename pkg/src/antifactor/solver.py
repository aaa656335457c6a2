"""Backtracking solver for the assignment form of the problem.

Each X vertex picks one neighbor; a Y vertex may receive any number of picks
except exactly one. The search assigns X vertices one at a time and prunes
with a viability test: y is a viable target iff it already has a pick
(load >= 1) or at least two of its X neighbors are still undecided (so a
second pick can still arrive). Choosing a nonviable y dooms it to final load
one, hence skipping such values loses no solutions.

Variable order is minimum remaining viable values, ties by index, served by
a lazily validated heap. When a Y vertex reaches load one with a single
undecided neighbor, that neighbor is forced to it (any other choice leaves
the load stuck at one). Undo is exact: assignments apply and revert the same
per-vertex transitions in reverse order, so state restoration needs no
snapshots. The node budget counts attempted assignments, forced ones
included; exceeding it reports CAP_EXCEEDED, never UNSAT.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import InternalConsistencyError, PreconditionError
from .graphs import Assignment, BipartiteGraph, extract_regular_factor


class SolveStatus(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    CAP_EXCEEDED = "CAP_EXCEEDED"


@dataclass
class SolveStats:
    nodes: int = 0
    propagations: int = 0
    backtracks: int = 0

    def to_doc(self) -> dict:
        return {
            "nodes": self.nodes,
            "propagations": self.propagations,
            "backtracks": self.backtracks,
        }


@dataclass
class SolveOutcome:
    status: SolveStatus
    assignment: Assignment | None
    stats: SolveStats = field(default_factory=SolveStats)

    def to_doc(self) -> dict:
        return {
            "status": self.status.value,
            "assignment": list(self.assignment.targets) if self.assignment else None,
            "stats": self.stats.to_doc(),
        }


def verify_anti_factor(graph: BipartiteGraph, targets: Sequence[int]) -> bool:
    """True iff targets is a valid assignment and no y receives exactly one
    pick. Raises GraphError when targets uses a non-edge."""
    assignment = Assignment(graph, targets)
    return all(load != 1 for load in assignment.y_loads())


@dataclass
class _Frame:
    x: int
    candidates: list[int]
    idx: int = 0
    applied: int = -1  # currently applied candidate, -1 if none
    forced: bool = False


def solve_anti_factor(
    graph: BipartiteGraph, *, budget: int | None = None
) -> SolveOutcome:
    """Search for an assignment with no y of load exactly one.

    Returns SAT with the assignment, UNSAT after exhausting the space, or
    CAP_EXCEEDED when the node budget runs out (never misreported as UNSAT).
    """
    nx, ny = graph.x_count, graph.y_count
    stats = SolveStats()
    if any(len(adj) == 0 for adj in graph.x_adj):
        return SolveOutcome(SolveStatus.UNSAT, None, stats)

    x_adj, y_adj = graph.x_adj, graph.y_adj
    und = [len(adj) for adj in y_adj]  # undecided X neighbors
    load = [0] * ny
    decided = [False] * nx
    target = [-1] * nx
    viable = [load[y] >= 1 or und[y] >= 2 for y in range(ny)]
    count = [sum(1 for y in adj if viable[y]) for adj in x_adj]
    if any(c == 0 for c in count):
        # some x has only degree-one Y neighbors, which can never carry load
        return SolveOutcome(SolveStatus.UNSAT, None, stats)

    heap: list[tuple[int, int, int]] = []
    stamp = 0

    def push_entry(x: int) -> None:
        nonlocal stamp
        heapq.heappush(heap, (count[x], x, stamp))
        stamp += 1

    for x in range(nx):
        push_entry(x)

    forced: deque[int] = deque()

    def refresh(y: int) -> None:
        """Recompute y's viability; on a flip, adjust undecided neighbor counts."""
        now = load[y] >= 1 or und[y] >= 2
        if now == viable[y]:
            return
        viable[y] = now
        delta = 1 if now else -1
        for x in y_adj[y]:
            if not decided[x]:
                count[x] += delta
                push_entry(x)

    def apply(x: int, y: int) -> bool:
        decided[x] = True
        target[x] = y
        for z in x_adj[x]:
            und[z] -= 1
            refresh(z)
        load[y] += 1
        refresh(y)
        ok = True
        for z in x_adj[x]:
            if load[z] == 1:
                if und[z] == 0:
                    ok = False
                elif und[z] == 1:
                    forced.append(z)
        return ok

    def undo(x: int, y: int) -> None:
        load[y] -= 1
        refresh(y)
        for z in reversed(x_adj[x]):
            und[z] += 1
            refresh(z)
        decided[x] = False
        target[x] = -1
        push_entry(x)

    frames: list[_Frame] = []
    assigned = 0
    status: SolveStatus | None = None

    def next_frame() -> _Frame | None:
        while forced:
            z = forced.popleft()
            if load[z] == 1 and und[z] == 1:
                x_star = next(x for x in y_adj[z] if not decided[x])
                return _Frame(x_star, [z], forced=True)
        while heap:
            c, x, _ = heap[0]
            if decided[x] or c != count[x]:
                heapq.heappop(heap)
                continue
            heapq.heappop(heap)
            candidates = sorted(
                (y for y in x_adj[x] if viable[y]),
                key=lambda y: (0 if load[y] == 1 else 1, -und[y], y),
            )
            return _Frame(x, candidates)
        return None

    while status is None:
        if assigned == nx:
            status = SolveStatus.SAT
            break
        frame = next_frame()
        if frame is None:
            raise InternalConsistencyError("undecided vertex missing from the queue")
        frames.append(frame)
        while frames:
            f = frames[-1]
            if f.applied != -1:
                undo(f.x, f.applied)
                f.applied = -1
                assigned -= 1
            descended = False
            while f.idx < len(f.candidates):
                if budget is not None and stats.nodes >= budget:
                    return SolveOutcome(SolveStatus.CAP_EXCEEDED, None, stats)
                y = f.candidates[f.idx]
                f.idx += 1
                stats.nodes += 1
                if f.forced:
                    stats.propagations += 1
                if apply(f.x, y):
                    f.applied = y
                    assigned += 1
                    descended = True
                    break
                undo(f.x, y)
                stats.backtracks += 1
            if descended:
                break
            frames.pop()
            push_entry(f.x)
            if frames:
                stats.backtracks += 1
            else:
                status = SolveStatus.UNSAT

    if status is SolveStatus.SAT:
        assignment = Assignment(graph, target)
        if any(l == 1 for l in assignment.y_loads()):
            raise InternalConsistencyError("solver produced a load-one vertex")
        return SolveOutcome(status, assignment, stats)
    return SolveOutcome(SolveStatus.UNSAT, None, stats)


def solve_regular(graph: BipartiteGraph, *, budget: int | None = None) -> SolveOutcome:
    """Solve a regular graph of degree k >= 3 through a cubic spanning subgraph.

    For k > 3, three rounds of perfect-matching extraction produce a
    3-regular spanning subgraph; a solution there is a solution in the full
    graph. Degree exactly 3 skips the extraction.
    """
    k = graph.regular_degree()
    if k is None or k < 3:
        raise PreconditionError("graph must be regular of degree >= 3")
    if k == 3:
        return solve_anti_factor(graph, budget=budget)
    sub = extract_regular_factor(graph, 3)
    outcome = solve_anti_factor(sub, budget=budget)
    if outcome.assignment is None:
        return outcome
    return SolveOutcome(
        outcome.status, Assignment(graph, outcome.assignment.targets), outcome.stats
    )
