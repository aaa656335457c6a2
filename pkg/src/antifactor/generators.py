"""Seeded, deterministic graph construction: the instance families the rest
of the package studies plus exhaustive small-graph corpora for tests.

All randomness flows through random.Random(seed); the same arguments always
produce the same edge list, in the same construction order.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .degree_specs import DegreeSet, DegreeSpec
from .errors import GraphError, ResourceCapError
from .graphs import BipartiteGraph

_REGULAR_RETRY_CAP = 100


def _matching_permutation(
    allowed: list[set[int]], rng: random.Random
) -> list[int]:
    """Perfect matching in the bipartite graph given by `allowed`, as a
    permutation. Adjacency is visited in rng-shuffled order; the leftover
    graph after removing disjoint permutations is regular, so a matching
    always exists.
    """
    n = len(allowed)
    order = [sorted(s) for s in allowed]
    for targets in order:
        rng.shuffle(targets)
    match_x = [-1] * n
    match_y = [-1] * n

    def augment(x: int, seen: list[bool]) -> bool:
        for y in order[x]:
            if seen[y]:
                continue
            seen[y] = True
            if match_y[y] == -1 or augment(match_y[y], seen):
                match_x[x] = y
                match_y[y] = x
                return True
        return False

    for x in range(n):
        if not augment(x, [False] * n):
            raise GraphError("leftover regular graph lost a perfect matching")
    return match_x


def random_regular_bipartite(n: int, k: int, seed: int) -> BipartiteGraph:
    """Simple k-regular bipartite graph on n+n vertices.

    Union of k random permutations of [0, n). A permutation that would
    duplicate an existing edge is resampled; if the retry budget runs out
    (which only happens when k is close to n and few permutations remain),
    the round falls back to a randomized perfect matching on the unused
    pairs, which always exists. Edge order is round-major: round r
    contributes (0, p_r(0)), ..., (n-1, p_r(n-1)).
    """
    if not (1 <= k <= n):
        raise GraphError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = random.Random(seed)
    used: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for _ in range(k):
        perm: list[int] | None = None
        for _attempt in range(_REGULAR_RETRY_CAP):
            candidate = rng.sample(range(n), n)
            if all((x, y) not in used for x, y in enumerate(candidate)):
                perm = candidate
                break
        if perm is None:
            allowed = [
                {y for y in range(n) if (x, y) not in used} for x in range(n)
            ]
            perm = _matching_permutation(allowed, rng)
        for x, y in enumerate(perm):
            used.add((x, y))
            edges.append((x, y))
    return BipartiteGraph(n, n, edges)


def cycle(n: int) -> BipartiteGraph:
    """The n-cycle with alternating sides, |X| = |Y| = n/2. Requires even n >= 4."""
    if n % 2 != 0:
        raise GraphError(f"odd cycle C_{n} is not bipartite")
    if n < 4:
        raise GraphError(f"need n >= 4, got {n}")
    m = n // 2
    edges = []
    for j in range(m):
        edges.append((j, j))
        edges.append(((j + 1) % m, j))
    return BipartiteGraph(m, m, edges)


def complete_bipartite(x_count: int, y_count: int) -> BipartiteGraph:
    """K_{x_count, y_count} with edges in (x, y)-ascending order."""
    return BipartiteGraph(
        x_count,
        y_count,
        [(x, y) for x in range(x_count) for y in range(y_count)],
    )


def theta_graph(path_lengths: Sequence[int], branch_side: str = "x") -> BipartiteGraph:
    """Two branch vertices joined by internally disjoint paths.

    Both branch vertices sit on branch_side ("x" or "y"), which forces every
    path length to be even (and >= 2). At least 3 paths are required: fewer
    gives a path or a cycle, not a theta. Branch vertices get indices 0 and 1
    on their side; internal vertices are numbered path by path; edges are
    emitted path by path, walking from branch 0 to branch 1.
    """
    if branch_side not in ("x", "y"):
        raise GraphError(f"branch_side must be 'x' or 'y', got {branch_side!r}")
    if len(path_lengths) < 3:
        raise GraphError("need at least 3 paths")
    for length in path_lengths:
        if length < 2 or length % 2 != 0:
            raise GraphError(
                f"path length {length} invalid: same-side branch vertices need "
                "even lengths >= 2"
            )
    # Build with branches on X, flip at the end if asked for Y.
    next_x = 2
    next_y = 0
    edges: list[tuple[int, int]] = []
    for length in path_lengths:
        # Internal vertices alternate y, x, y, ..., y.
        inner: list[tuple[str, int]] = []
        for step in range(length - 1):
            if step % 2 == 0:
                inner.append(("y", next_y))
                next_y += 1
            else:
                inner.append(("x", next_x))
                next_x += 1
        walk = [("x", 0)] + inner + [("x", 1)]
        for (s1, v1), (s2, v2) in zip(walk, walk[1:]):
            edges.append((v1, v2) if s1 == "x" else (v2, v1))
    graph = BipartiteGraph(next_x, next_y, edges)
    if branch_side == "x":
        return graph
    return BipartiteGraph(next_y, next_x, [(y, x) for x, y in graph.edges])


_H_FAMILY_CAP = 5


def enumerate_h_family(max_x: int) -> Iterator[BipartiteGraph]:
    """All isomorphism-distinct connected bipartite graphs with |Y| = |X| + 1,
    every X-degree exactly 3 and every Y-degree at most 3, for |X| <= max_x.

    X neighborhoods are generated as nondecreasing triples (canonical under
    X-permutations); duplicates under Y-permutations are removed by
    adjacency-minimization. Growth is combinatorial, hence the size cap.
    """
    if max_x > _H_FAMILY_CAP:
        raise ResourceCapError("h-family size cap", _H_FAMILY_CAP, max_x)
    for nx in range(1, max_x + 1):
        ny = nx + 1
        if ny < 3:
            continue
        triples = list(itertools.combinations(range(ny), 3))
        seen: set[tuple] = set()
        perms = list(itertools.permutations(range(ny)))
        for rows in itertools.combinations_with_replacement(triples, nx):
            y_deg = [0] * ny
            for row in rows:
                for y in row:
                    y_deg[y] += 1
            if any(d > 3 for d in y_deg):
                continue
            edges = [(i, y) for i, row in enumerate(rows) for y in row]
            graph = BipartiteGraph(nx, ny, edges)
            if not graph.is_connected():
                continue
            key = min(
                tuple(sorted(tuple(sorted(p[y] for y in row)) for row in rows))
                for p in perms
            )
            if key in seen:
                continue
            seen.add(key)
            yield graph


def _canonical_oriented(
    nx: int, ny: int, edges: frozenset[tuple[int, int]]
) -> tuple:
    best = None
    for px in itertools.permutations(range(nx)):
        for py in itertools.permutations(range(ny)):
            form = tuple(sorted((px[x], py[y]) for x, y in edges))
            if best is None or form < best:
                best = form
    return (nx, ny, best)


def enumerate_connected_bipartite(
    max_vertices: int = 7, max_edges: int = 10
) -> list[BipartiteGraph]:
    """Every connected bipartite graph with at most max_vertices vertices and
    max_edges edges, one representative per labeled-side isomorphism class.

    Both (X, Y) orientations of an asymmetric graph are emitted: a star with
    its center in X is a different instance than one with the center in Y.
    Output order: total vertex count, then |X|, then first construction.
    """
    out: list[BipartiteGraph] = []
    for total in range(1, max_vertices + 1):
        for nx in range(total + 1):
            ny = total - nx
            if nx == 0 or ny == 0:
                # no edges possible; connected only as a single vertex
                if total == 1:
                    out.append(BipartiteGraph(nx, ny, []))
                continue
            pairs = [(x, y) for x in range(nx) for y in range(ny)]
            seen: set[tuple] = set()
            for bits in range(1 << len(pairs)):
                if bits.bit_count() > max_edges or bits.bit_count() < total - 1:
                    continue
                edges = [pairs[t] for t in range(len(pairs)) if (bits >> t) & 1]
                graph = BipartiteGraph(nx, ny, edges)
                if not graph.is_connected():
                    continue
                key = _canonical_oriented(nx, ny, frozenset(edges))
                if key in seen:
                    continue
                seen.add(key)
                out.append(graph)
    return out


def erdos_renyi_bipartite(
    x_count: int, y_count: int, p: float, seed: int
) -> BipartiteGraph:
    """Each of the x_count * y_count possible edges appears independently
    with probability p; edge order is (x, y)-ascending."""
    if not (0.0 <= p <= 1.0):
        raise GraphError(f"probability {p} outside [0, 1]")
    rng = random.Random(seed)
    edges = [
        (x, y)
        for x in range(x_count)
        for y in range(y_count)
        if rng.random() < p
    ]
    return BipartiteGraph(x_count, y_count, edges)


def random_allowed_set(rng: random.Random, degree: int) -> DegreeSet:
    """A random allowed degree set: a walk with steps of 1 or 2 starting near
    zero, optionally ending in an infinite tail two or less above the last
    member. Gaps never exceed 2, so the result is always an allowed set."""
    members = [rng.choice([-1, 0, 0, 1])]
    while members[-1] <= degree and rng.random() < 0.7:
        members.append(members[-1] + rng.choice([1, 2]))
    tail = members[-1] + rng.choice([1, 2]) if rng.random() < 0.3 else None
    return DegreeSet.of(members, tail_from=tail)


def random_allowed_spec(graph: BipartiteGraph, seed: int) -> DegreeSpec:
    """Independent random allowed sets for every vertex of the graph."""
    rng = random.Random(seed)
    x_sets = tuple(
        random_allowed_set(rng, graph.degree(("x", i))) for i in range(graph.x_count)
    )
    y_sets = tuple(
        random_allowed_set(rng, graph.degree(("y", j))) for j in range(graph.y_count)
    )
    return DegreeSpec(x_sets, y_sets)
