"""Edge-and-triangle covers of an arbitrary graph via the assignment solver.

A graph has a partition of its vertex set into vertex-disjoint edges and
triangles exactly when its incidence bipartite graph (vertices on one side,
edges and triangles on the other, joined by membership) admits an assignment
with no object chosen exactly once: an edge object chosen twice is a matched
edge, a triangle chosen three times is a triangle part, and a triangle
chosen twice is normalized to the edge between its two choosers.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError, ResourceCapError
from .graphs import Assignment, BipartiteGraph
from .solver import SolveStats, SolveStatus, solve_anti_factor

BRUTE_FORCE_CAP = 12


class GeneralGraph:
    """Simple undirected graph with 0-based vertices and a stable edge list."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        seen: set[frozenset[int]] = set()
        cleaned: list[tuple[int, int]] = []
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = frozenset((u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            cleaned.append((u, v))
            adj[u].add(v)
            adj[v].add(u)
        self.edges = tuple(cleaned)
        self.adj = tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def triangles(self) -> list[tuple[int, int, int]]:
        """All triangles as sorted vertex triples, in lexicographic order."""
        found = set()
        for u, v in self.edges:
            for w in self.adj[u] & self.adj[v]:
                found.add(tuple(sorted((u, v, w))))
        return sorted(found)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneralGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"GeneralGraph(n={self.n}, m={len(self.edges)})"

    def to_text(self) -> str:
        """Serialize as `p gen N M` followed by 1-based `e u v` lines."""
        lines = [f"p gen {self.n} {len(self.edges)}"]
        lines.extend(f"e {u + 1} {v + 1}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GeneralGraph":
        header: tuple[int, int] | None = None
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            fields = line.split()
            if fields[0] == "p":
                if header is not None:
                    raise GraphError(f"line {lineno}: second header line")
                if len(fields) != 4 or fields[1] != "gen":
                    raise GraphError(f"line {lineno}: expected 'p gen N M'")
                try:
                    header = (int(fields[2]), int(fields[3]))
                except ValueError:
                    raise GraphError(f"line {lineno}: non-integer header field") from None
            elif fields[0] == "e":
                if header is None:
                    raise GraphError(f"line {lineno}: edge before header")
                if len(fields) != 3:
                    raise GraphError(f"line {lineno}: expected 'e u v'")
                try:
                    u, v = int(fields[1]), int(fields[2])
                except ValueError:
                    raise GraphError(f"line {lineno}: non-integer edge field") from None
                if u < 1 or v < 1:
                    raise GraphError(f"line {lineno}: indices are 1-based")
                edges.append((u - 1, v - 1))
            else:
                raise GraphError(f"line {lineno}: unknown record '{fields[0]}'")
        if header is None:
            raise GraphError("missing 'p gen' header")
        n, m = header
        if m != len(edges):
            raise GraphError(f"header announces {m} edges, found {len(edges)}")
        return cls(n, edges)


@dataclass(frozen=True)
class PackingCover:
    """Vertex-disjoint edges and triangles covering every vertex."""

    parts: tuple[tuple[int, ...], ...]

    @staticmethod
    def of(parts: Iterable[Sequence[int]]) -> "PackingCover":
        """Canonical form: members ascending within a part, parts sorted."""
        return PackingCover(tuple(sorted(tuple(sorted(p)) for p in parts)))

    def validate(self, graph: GeneralGraph) -> None:
        """Raise GraphError unless the parts partition V and exist in the graph."""
        covered: set[int] = set()
        for part in self.parts:
            if len(part) == 2:
                u, v = part
                if not graph.has_edge(u, v):
                    raise GraphError(f"cover uses non-edge ({u}, {v})")
            elif len(part) == 3:
                u, v, w = part
                if not (
                    graph.has_edge(u, v)
                    and graph.has_edge(v, w)
                    and graph.has_edge(u, w)
                ):
                    raise GraphError(f"cover uses non-triangle ({u}, {v}, {w})")
            else:
                raise GraphError(f"cover part of size {len(part)}")
            for x in part:
                if x in covered:
                    raise GraphError(f"vertex {x} covered twice")
                covered.add(x)
        if covered != set(range(graph.n)):
            missing = sorted(set(range(graph.n)) - covered)
            raise GraphError(f"vertices not covered: {missing}")

    def to_text(self) -> str:
        lines = []
        for part in self.parts:
            tag = "E" if len(part) == 2 else "T"
            lines.append(tag + " " + " ".join(str(v + 1) for v in part))
        return "\n".join(lines) + ("\n" if lines else "")

    def to_doc(self) -> dict:
        return {
            "edges": [list(p) for p in self.parts if len(p) == 2],
            "triangles": [list(p) for p in self.parts if len(p) == 3],
        }


def build_incidence(
    graph: GeneralGraph,
) -> tuple[BipartiteGraph, list[tuple[int, ...]]]:
    """Incidence bipartite graph: X = vertices, Y = edges then triangles.

    Bipartite edges are grouped by object, object members ascending. Returns
    the graph and the object table mapping each Y index to its vertex set.
    Isolated vertices produce degree-0 X vertices, making the instance
    trivially infeasible.
    """
    objects: list[tuple[int, ...]] = [
        tuple(sorted(e)) for e in graph.edges
    ] + graph.triangles()
    bip_edges = [
        (member, j) for j, obj in enumerate(objects) for member in obj
    ]
    return BipartiteGraph(graph.n, len(objects), bip_edges), objects


def cover_from_antifactor(
    graph: GeneralGraph,
    objects: Sequence[tuple[int, ...]],
    assignment: Assignment,
) -> PackingCover:
    """Map an incidence-graph assignment back to a cover.

    Objects chosen by their full vertex set are kept; a triangle chosen by
    exactly two vertices becomes the edge between them. The assignment's
    no-load-one guarantee makes these the only possibilities.
    """
    choosers: dict[int, list[int]] = {}
    for x, y in enumerate(assignment.targets):
        choosers.setdefault(y, []).append(x)
    parts = []
    for j, chosen_by in sorted(choosers.items()):
        obj = objects[j]
        if len(chosen_by) == len(obj):
            parts.append(obj)
        elif len(obj) == 3 and len(chosen_by) == 2:
            u, v = chosen_by
            if not graph.has_edge(u, v):
                raise GraphError(
                    f"triangle {obj} chosen by non-adjacent pair ({u}, {v})"
                )
            parts.append((u, v))
        else:
            raise GraphError(
                f"object {obj} chosen by {len(chosen_by)} vertices"
            )
    cover = PackingCover.of(parts)
    cover.validate(graph)
    return cover


@dataclass
class ReductionResult:
    status: SolveStatus
    cover: PackingCover | None
    stats: SolveStats = field(default_factory=SolveStats)

    def to_doc(self) -> dict:
        return {
            "status": self.status.value,
            "cover": self.cover.to_doc() if self.cover else None,
            "stats": self.stats.to_doc(),
        }


def pack_edges_triangles(
    graph: GeneralGraph, *, budget: int | None = None
) -> ReductionResult:
    """Find a vertex-disjoint edge-and-triangle cover of all vertices, or
    report that none exists."""
    incidence, objects = build_incidence(graph)
    outcome = solve_anti_factor(incidence, budget=budget)
    if outcome.status is not SolveStatus.SAT:
        return ReductionResult(outcome.status, None, outcome.stats)
    cover = cover_from_antifactor(graph, objects, outcome.assignment)
    return ReductionResult(SolveStatus.SAT, cover, outcome.stats)


def antifactor_from_cover(
    graph: GeneralGraph,
    objects: Sequence[tuple[int, ...]],
    cover: PackingCover,
) -> Assignment:
    """Inverse direction: every vertex chooses the object covering it; edge
    parts that are triangle normalizations choose the original edge object."""
    index_of = {obj: j for j, obj in enumerate(objects)}
    targets = [-1] * graph.n
    for part in cover.parts:
        j = index_of[part]
        for v in part:
            targets[v] = j
    if any(t < 0 for t in targets):
        raise GraphError("cover does not reach every vertex")
    incidence, _ = build_incidence(graph)
    return Assignment(incidence, targets)


def brute_force_cover(
    graph: GeneralGraph, *, cap: int = BRUTE_FORCE_CAP
) -> PackingCover | None:
    """Exhaustive cover search, branching on the lowest uncovered vertex.

    Candidate parts for that vertex are its edges (other endpoint ascending)
    then its triangles (lexicographic). Independent of the solver; used as a
    test oracle.
    """
    if graph.n > cap:
        raise ResourceCapError("brute-force cover cap", cap, graph.n)
    parts_of: list[list[tuple[int, ...]]] = [[] for _ in range(graph.n)]
    for u in range(graph.n):
        for v in sorted(graph.adj[u]):
            if v > u:
                parts_of[u].append((u, v))
    for tri in graph.triangles():
        parts_of[tri[0]].append(tri)
    # edges before triangles for each branch vertex, each list already sorted
    for u in range(graph.n):
        parts_of[u].sort(key=lambda p: (len(p), p))

    covered = [False] * graph.n
    chosen: list[tuple[int, ...]] = []

    def search(start: int) -> bool:
        v = start
        while v < graph.n and covered[v]:
            v += 1
        if v == graph.n:
            return True
        for part in parts_of[v]:
            if any(covered[w] for w in part):
                continue
            for w in part:
                covered[w] = True
            chosen.append(part)
            if search(v + 1):
                return True
            chosen.pop()
            for w in part:
                covered[w] = False
        return False

    if search(0):
        return PackingCover.of(chosen)
    return None


def erdos_renyi_general(n: int, p: float, seed: int) -> GeneralGraph:
    """Each of the C(n, 2) possible edges appears independently with
    probability p; edge order is lexicographic over (u, v), u < v."""
    if not (0.0 <= p <= 1.0):
        raise GraphError(f"probability {p} outside [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p
    ]
    return GeneralGraph(n, edges)
