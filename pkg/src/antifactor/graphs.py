"""Bipartite graphs with an (X, Y) bipartition and position-stable edge lists.

Edge identity matters throughout the package: subgraphs are bitmaps over the
construction-order edge list, and the oracle's lexicographic tie-breaking is
defined on that order. Parsing and serialization therefore preserve edge
order exactly.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import GraphError

Vertex = tuple[str, int]  # ("x", i) or ("y", j)


class BipartiteGraph:
    """Simple bipartite graph with sides X and Y indexed from 0."""

    __slots__ = ("x_count", "y_count", "edges", "x_adj", "y_adj", "_positions")

    def __init__(self, x_count: int, y_count: int, edges: Iterable[tuple[int, int]]):
        if x_count < 0 or y_count < 0:
            raise GraphError("vertex counts must be nonnegative")
        self.x_count = x_count
        self.y_count = y_count
        self.edges = tuple((int(x), int(y)) for x, y in edges)
        x_adj: list[list[int]] = [[] for _ in range(x_count)]
        y_adj: list[list[int]] = [[] for _ in range(y_count)]
        positions: dict[tuple[int, int], int] = {}
        for pos, (x, y) in enumerate(self.edges):
            if not (0 <= x < x_count and 0 <= y < y_count):
                raise GraphError(f"edge ({x}, {y}) out of range at position {pos}")
            if (x, y) in positions:
                raise GraphError(f"duplicate edge ({x}, {y}) at position {pos}")
            positions[(x, y)] = pos
            x_adj[x].append(y)
            y_adj[y].append(x)
        self.x_adj = tuple(tuple(sorted(a)) for a in x_adj)
        self.y_adj = tuple(tuple(sorted(a)) for a in y_adj)
        self._positions = positions

    # -- basic queries ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: Vertex) -> int:
        side, i = v
        return len(self.x_adj[i]) if side == "x" else len(self.y_adj[i])

    def vertices(self) -> Iterator[Vertex]:
        for i in range(self.x_count):
            yield ("x", i)
        for j in range(self.y_count):
            yield ("y", j)

    def has_edge(self, x: int, y: int) -> bool:
        return (x, y) in self._positions

    def edge_position(self, x: int, y: int) -> int:
        return self._positions[(x, y)]

    def neighbors(self, v: Vertex) -> tuple[int, ...]:
        side, i = v
        return self.x_adj[i] if side == "x" else self.y_adj[i]

    def regular_degree(self) -> int | None:
        """The common degree k if the graph is k-regular on both sides, else None."""
        degrees = {len(a) for a in self.x_adj} | {len(a) for a in self.y_adj}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.x_count == other.x_count
            and self.y_count == other.y_count
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.x_count, self.y_count, self.edges))

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.x_count}x{self.y_count}, m={len(self.edges)})"

    # -- connectivity ------------------------------------------------------

    def connected_components(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        """Components as (X-index set, Y-index set) pairs, ordered by smallest vertex.

        Isolated vertices form singleton components.
        """
        seen_x = [False] * self.x_count
        seen_y = [False] * self.y_count
        comps = []
        for start in self.vertices():
            side, i = start
            if (seen_x if side == "x" else seen_y)[i]:
                continue
            cx: set[int] = set()
            cy: set[int] = set()
            queue: deque[Vertex] = deque([start])
            (seen_x if side == "x" else seen_y)[i] = True
            while queue:
                s, v = queue.popleft()
                if s == "x":
                    cx.add(v)
                    for y in self.x_adj[v]:
                        if not seen_y[y]:
                            seen_y[y] = True
                            queue.append(("y", y))
                else:
                    cy.add(v)
                    for x in self.y_adj[v]:
                        if not seen_x[x]:
                            seen_x[x] = True
                            queue.append(("x", x))
            comps.append((frozenset(cx), frozenset(cy)))
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1

    # -- surgery -----------------------------------------------------------

    def induced(
        self, x_keep: Iterable[int], y_keep: Iterable[int]
    ) -> tuple["BipartiteGraph", tuple[int, ...], tuple[int, ...]]:
        """Induced subgraph on the given index sets.

        Returns (graph, x_old, y_old): position p of x_old is the original
        index of the new x_p. Edge order follows the original construction
        order, so bitmap lexicography is preserved.
        """
        x_old = tuple(sorted(set(x_keep)))
        y_old = tuple(sorted(set(y_keep)))
        x_new = {old: new for new, old in enumerate(x_old)}
        y_new = {old: new for new, old in enumerate(y_old)}
        edges = [
            (x_new[x], y_new[y])
            for (x, y) in self.edges
            if x in x_new and y in y_new
        ]
        return BipartiteGraph(len(x_old), len(y_old), edges), x_old, y_old

    def delete_vertices(
        self, to_delete: Iterable[Vertex]
    ) -> tuple["BipartiteGraph", tuple[int, ...], tuple[int, ...]]:
        gone = set(to_delete)
        x_keep = [i for i in range(self.x_count) if ("x", i) not in gone]
        y_keep = [j for j in range(self.y_count) if ("y", j) not in gone]
        return self.induced(x_keep, y_keep)

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        """Serialize as `p bip NX NY M` followed by 1-based `e i j` lines."""
        lines = [f"p bip {self.x_count} {self.y_count} {len(self.edges)}"]
        lines.extend(f"e {x + 1} {y + 1}" for x, y in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BipartiteGraph":
        """Parse the text format; `c` lines are comments, blank lines ignored."""
        header: tuple[int, int, int] | None = None
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            fields = line.split()
            if fields[0] == "p":
                if header is not None:
                    raise GraphError(f"line {lineno}: second header line")
                if len(fields) != 5 or fields[1] != "bip":
                    raise GraphError(f"line {lineno}: expected 'p bip NX NY M'")
                try:
                    header = (int(fields[2]), int(fields[3]), int(fields[4]))
                except ValueError:
                    raise GraphError(f"line {lineno}: non-integer header field") from None
            elif fields[0] == "e":
                if header is None:
                    raise GraphError(f"line {lineno}: edge before header")
                if len(fields) != 3:
                    raise GraphError(f"line {lineno}: expected 'e i j'")
                try:
                    i, j = int(fields[1]), int(fields[2])
                except ValueError:
                    raise GraphError(f"line {lineno}: non-integer edge field") from None
                if i < 1 or j < 1:
                    raise GraphError(f"line {lineno}: indices are 1-based")
                edges.append((i - 1, j - 1))
            else:
                raise GraphError(f"line {lineno}: unknown record '{fields[0]}'")
        if header is None:
            raise GraphError("missing 'p bip' header")
        nx, ny, m = header
        if m != len(edges):
            raise GraphError(f"header announces {m} edges, found {len(edges)}")
        return cls(nx, ny, edges)


def build_graph(
    x_count: int, y_count: int, edges: Sequence[tuple[int, int]]
) -> BipartiteGraph:
    """Validating constructor; kept as a function for symmetry with parsers."""
    return BipartiteGraph(x_count, y_count, edges)


class FactorSubgraph:
    """A spanning subgraph, stored as the set of selected edge positions."""

    __slots__ = ("graph", "edge_indices", "x_degrees", "y_degrees")

    def __init__(self, graph: BipartiteGraph, edge_indices: Iterable[int]):
        self.graph = graph
        idx = frozenset(int(i) for i in edge_indices)
        for i in idx:
            if not (0 <= i < len(graph.edges)):
                raise GraphError(f"edge position {i} out of range")
        self.edge_indices = idx
        dx = [0] * graph.x_count
        dy = [0] * graph.y_count
        for i in idx:
            x, y = graph.edges[i]
            dx[x] += 1
            dy[y] += 1
        self.x_degrees = tuple(dx)
        self.y_degrees = tuple(dy)

    def degree(self, v: Vertex) -> int:
        side, i = v
        return self.x_degrees[i] if side == "x" else self.y_degrees[i]

    def bitmap(self) -> tuple[int, ...]:
        return tuple(
            1 if i in self.edge_indices else 0 for i in range(len(self.graph.edges))
        )

    def selected_edges(self) -> list[tuple[int, int]]:
        return [self.graph.edges[i] for i in sorted(self.edge_indices)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactorSubgraph):
            return NotImplemented
        return self.graph == other.graph and self.edge_indices == other.edge_indices

    def __hash__(self) -> int:
        return hash((self.graph, self.edge_indices))

    def __repr__(self) -> str:
        return f"FactorSubgraph({sorted(self.edge_indices)})"


class Assignment:
    """A map X -> Y along edges: each x gets exactly one neighbor y."""

    __slots__ = ("graph", "targets")

    def __init__(self, graph: BipartiteGraph, targets: Sequence[int]):
        if len(targets) != graph.x_count:
            raise GraphError(
                f"assignment length {len(targets)} != |X| = {graph.x_count}"
            )
        self.graph = graph
        self.targets = tuple(int(t) for t in targets)
        for x, y in enumerate(self.targets):
            if not graph.has_edge(x, y):
                raise GraphError(f"assignment uses non-edge ({x}, {y})")

    def y_loads(self) -> tuple[int, ...]:
        loads = [0] * self.graph.y_count
        for y in self.targets:
            loads[y] += 1
        return tuple(loads)

    def to_factor(self) -> FactorSubgraph:
        return FactorSubgraph(
            self.graph,
            (self.graph.edge_position(x, y) for x, y in enumerate(self.targets)),
        )

    def __repr__(self) -> str:
        return f"Assignment({list(self.targets)})"


def perfect_matching(graph: BipartiteGraph) -> Assignment | None:
    """A perfect matching saturating both sides, or None.

    Hopcroft-Karp with deterministic tie-breaking: free vertices are explored
    in index order and adjacency lists are sorted, so the same input always
    yields the same matching.
    """
    nx, ny = graph.x_count, graph.y_count
    if nx != ny:
        return None
    if nx == 0:
        return Assignment(graph, [])
    INF = nx + ny + 1
    pair_x = [-1] * nx
    pair_y = [-1] * ny
    dist = [0] * nx

    def bfs() -> bool:
        queue: deque[int] = deque()
        for x in range(nx):
            if pair_x[x] == -1:
                dist[x] = 0
                queue.append(x)
            else:
                dist[x] = INF
        found = False
        while queue:
            x = queue.popleft()
            for y in graph.x_adj[x]:
                nxt = pair_y[y]
                if nxt == -1:
                    found = True
                elif dist[nxt] == INF:
                    dist[nxt] = dist[x] + 1
                    queue.append(nxt)
        return found

    def dfs(x: int) -> bool:
        for y in graph.x_adj[x]:
            nxt = pair_y[y]
            if nxt == -1 or (dist[nxt] == dist[x] + 1 and dfs(nxt)):
                pair_x[x] = y
                pair_y[y] = x
                return True
        dist[x] = INF
        return False

    matched = 0
    while bfs():
        for x in range(nx):
            if pair_x[x] == -1 and dfs(x):
                matched += 1
    if matched != nx:
        return None
    return Assignment(graph, pair_x)


def extract_regular_factor(graph: BipartiteGraph, r: int) -> BipartiteGraph:
    """Spanning r-regular subgraph of a k-regular graph, r <= k.

    Obtained by r rounds of perfect-matching extraction; removing a perfect
    matching from a regular bipartite graph keeps it regular, so every round
    succeeds. Edge order of the result follows the parent's construction
    order. Raises PreconditionError if the graph is not regular or r > k.
    """
    from .errors import PreconditionError

    k = graph.regular_degree()
    if k is None:
        raise PreconditionError("graph is not regular")
    if not (0 < r <= k):
        raise PreconditionError(f"need 0 < r <= {k}, got {r}")
    chosen: set[int] = set()
    current = graph
    # positions of `current`'s edges in the original graph
    back = list(range(len(graph.edges)))
    for _ in range(r):
        matching = perfect_matching(current)
        if matching is None:
            raise PreconditionError("regular graph lost a perfect matching")
        taken_local = {
            current.edge_position(x, y) for x, y in enumerate(matching.targets)
        }
        chosen.update(back[p] for p in taken_local)
        keep = [p for p in range(len(current.edges)) if p not in taken_local]
        back = [back[p] for p in keep]
        current = BipartiteGraph(
            current.x_count, current.y_count, [current.edges[p] for p in keep]
        )
    edges = [graph.edges[p] for p in sorted(chosen)]
    return BipartiteGraph(graph.x_count, graph.y_count, edges)
