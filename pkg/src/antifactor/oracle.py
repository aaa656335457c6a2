"""Exact brute-force oracle: minimum deviation, optimal-degree profiles, and
the structure decomposition built from them.

The search space is every subset of the edge list. A subset is a bitmap in
which edge 0 is the most significant bit, so ascending mask order equals
lexicographic order on bitmaps (0 before 1); ties on the minimum are broken
by the lexicographically first optimizer. The space is partitioned into
chunks by fixed prefixes of the bitmap; chunks are scanned in lexicographic
order and evaluated with vectorized per-vertex degree lookups. A chunk whose
per-vertex best-achievable deviation already exceeds the incumbent is
skipped. Chunks may be processed by parallel workers: merging is a pure
reduction (min of values, union of degree sets, min of witness masks), so
results are identical for any worker count.

Deviation is additive across connected components and optimal subgraphs are
exactly the unions of per-component optimal subgraphs, so each component is
swept independently.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .degree_specs import (
    DegreeSet,
    DegreeSpec,
    SpecKind,
    make_spec,
    restrict_spec,
)
from .errors import (
    InternalConsistencyError,
    PreconditionError,
    ResourceCapError,
    SpecError,
)
from .graphs import BipartiteGraph, FactorSubgraph, Vertex

DEFAULT_ENUM_CAP = 24
DEFAULT_SUBSET_CAP = 18
_CHUNK_BITS = 18


# ---------------------------------------------------------------------------
# sweep engine
# ---------------------------------------------------------------------------


class _Component:
    """One connected component prepared for enumeration."""

    __slots__ = ("vertices", "edge_positions", "m", "incident", "degrees", "sets")

    def __init__(
        self,
        graph: BipartiteGraph,
        spec: DegreeSpec,
        xs: frozenset[int],
        ys: frozenset[int],
    ):
        self.vertices: list[Vertex] = [("x", i) for i in sorted(xs)] + [
            ("y", j) for j in sorted(ys)
        ]
        self.edge_positions = [
            p for p, (x, y) in enumerate(graph.edges) if x in xs and y in ys
        ]
        self.m = len(self.edge_positions)
        local = {v: t for t, v in enumerate(self.vertices)}
        self.incident: list[list[int]] = [[] for _ in self.vertices]
        for j, p in enumerate(self.edge_positions):
            x, y = graph.edges[p]
            self.incident[local[("x", x)]].append(j)
            self.incident[local[("y", y)]].append(j)
        self.degrees = [len(inc) for inc in self.incident]
        self.sets = [spec.for_vertex(v) for v in self.vertices]

    def mask_edges(self, mask: int) -> list[int]:
        """Global edge positions selected by a local mask (edge j at bit m-1-j)."""
        m = self.m
        return [
            self.edge_positions[j] for j in range(m) if (mask >> (m - 1 - j)) & 1
        ]


class _Sweep:
    """Vectorized evaluation of one component's 2^m subsets, chunked by prefix."""

    def __init__(self, comp: _Component, chunk_bits: int = _CHUNK_BITS):
        self.comp = comp
        m = comp.m
        self.low_bits = min(m, chunk_bits)
        self.prefix_bits = m - self.low_bits
        self.n_chunks = 1 << self.prefix_bits
        lows = np.arange(1 << self.low_bits, dtype=np.uint32)
        self.var: list[np.ndarray] = []
        self.n_var: list[int] = []
        for inc in comp.incident:
            acc = np.zeros(1 << self.low_bits, dtype=np.uint8)
            nv = 0
            for j in inc:
                if j >= self.prefix_bits:
                    nv += 1
                    acc += ((lows >> (m - 1 - j)) & 1).astype(np.uint8)
            self.var.append(acc)
            self.n_var.append(nv)
        raw = [
            [s.distance(d) for d in range(deg + 1)]
            for s, deg in zip(comp.sets, comp.degrees)
        ]
        maxes = [max(lut) for lut in raw]
        if all(mx <= 255 for mx in maxes) and sum(maxes) <= 60000:
            lut_dtype: type = np.uint8
            self.dev_dtype: type = np.uint16
        else:
            lut_dtype = self.dev_dtype = np.int64
        self.luts = [np.asarray(lut, dtype=lut_dtype) for lut in raw]

    def base_degree(self, t: int, chunk: int) -> int:
        """Degree contribution of the fixed prefix edges for local vertex t."""
        p = self.prefix_bits
        b = 0
        for j in self.comp.incident[t]:
            if j < p and (chunk >> (p - 1 - j)) & 1:
                b += 1
        return b

    def chunk_bound(self, chunk: int) -> int:
        """Sum of per-vertex best-achievable deviations given the prefix."""
        total = 0
        for t in range(len(self.comp.vertices)):
            base = self.base_degree(t, chunk)
            total += int(self.luts[t][base : base + self.n_var[t] + 1].min())
        return total

    def chunk_dev(self, chunk: int) -> np.ndarray:
        dev = np.zeros(1 << self.low_bits, dtype=self.dev_dtype)
        for t in range(len(self.comp.vertices)):
            base = self.base_degree(t, chunk)
            np.add(dev, np.take(self.luts[t][base:], self.var[t]), out=dev)
        return dev


def _run_blocks(block_fn, n_chunks: int, jobs: int) -> list:
    if jobs <= 1 or n_chunks <= 1:
        return [block_fn(range(n_chunks))]
    jobs = min(jobs, n_chunks)
    bounds = [n_chunks * i // jobs for i in range(jobs + 1)]
    ranges = [
        range(bounds[i], bounds[i + 1])
        for i in range(jobs)
        if bounds[i] < bounds[i + 1]
    ]
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        return list(pool.map(block_fn, ranges))


def _value_scan(sweep: _Sweep, jobs: int) -> tuple[int, int]:
    """(minimum deviation, lexicographically first optimal mask)."""

    def block(chunks: range) -> tuple[int | None, int | None]:
        best: int | None = None
        mask: int | None = None
        for c in chunks:
            if best is not None:
                if best == 0:
                    break
                if sweep.chunk_bound(c) >= best:
                    continue
            dev = sweep.chunk_dev(c)
            cmin = int(dev.min())
            if best is None or cmin < best:
                best = cmin
                mask = (c << sweep.low_bits) | int(np.argmin(dev))
        return best, mask

    found = [(b, m) for b, m in _run_blocks(block, sweep.n_chunks, jobs) if b is not None]
    return min(found)  # ties on value resolve to the smallest mask


def _profile_scan(
    sweep: _Sweep, jobs: int
) -> tuple[int, int, list[set[int]], list[dict[int, int]]]:
    """Adds per-vertex optimal degree sets and witness masks per (vertex, degree)."""
    nv = len(sweep.comp.vertices)

    def block(chunks: range):
        best: int | None = None
        mask: int | None = None
        degree_sets: list[set[int]] = [set() for _ in range(nv)]
        witnesses: list[dict[int, int]] = [dict() for _ in range(nv)]
        for c in chunks:
            if best is not None and sweep.chunk_bound(c) > best:
                continue
            dev = sweep.chunk_dev(c)
            cmin = int(dev.min())
            if best is None or cmin < best:
                best = cmin
                mask = (c << sweep.low_bits) | int(np.argmin(dev))
                degree_sets = [set() for _ in range(nv)]
                witnesses = [dict() for _ in range(nv)]
            if cmin > best:
                continue
            rows = np.nonzero(dev == best)[0]
            for t in range(nv):
                degs = sweep.base_degree(t, c) + sweep.var[t][rows]
                uniq, first = np.unique(degs, return_index=True)
                for d, fi in zip(uniq.tolist(), first.tolist()):
                    if d not in degree_sets[t]:
                        degree_sets[t].add(d)
                        witnesses[t][d] = (c << sweep.low_bits) | int(rows[fi])
        return best, mask, degree_sets, witnesses

    results = [r for r in _run_blocks(block, sweep.n_chunks, jobs) if r[0] is not None]
    best = min(r[0] for r in results)
    mask = min(r[1] for r in results if r[0] == best)
    degree_sets: list[set[int]] = [set() for _ in range(nv)]
    witnesses: list[dict[int, int]] = [dict() for _ in range(nv)]
    for b, _, dsets, wits in results:
        if b != best:
            continue
        for t in range(nv):
            degree_sets[t] |= dsets[t]
            for d, w in wits[t].items():
                if d not in witnesses[t] or w < witnesses[t][d]:
                    witnesses[t][d] = w
    return best, mask, degree_sets, witnesses


@dataclass
class _Restriction:
    """Restricted-deviation accumulator over a vertex subset of one component."""

    local_vertices: list[int]  # component-local vertex ids
    luts: list[np.ndarray]  # int64, indexed by restricted degree
    incident: list[list[int]]  # component-local edge ids inside the region


def _restriction_var(sweep: _Sweep, restr: _Restriction) -> list[np.ndarray]:
    m = sweep.comp.m
    lows = np.arange(1 << sweep.low_bits, dtype=np.uint32)
    out = []
    for inc in restr.incident:
        acc = np.zeros(1 << sweep.low_bits, dtype=np.uint8)
        for j in inc:
            if j >= sweep.prefix_bits:
                acc += ((lows >> (m - 1 - j)) & 1).astype(np.uint8)
        out.append(acc)
    return out


def _extremes_scan(
    sweep: _Sweep, comp_best: int, restrictions: list[_Restriction], jobs: int
) -> list[tuple[int, int]]:
    """Per restriction: (max restricted deviation over optimal subgraphs,
    witness mask attaining it). Assumes comp_best is the component minimum."""
    if not restrictions:
        return []
    rvars = [_restriction_var(sweep, r) for r in restrictions]

    def rbase(restr: _Restriction, k: int, chunk: int) -> int:
        p = sweep.prefix_bits
        b = 0
        for j in restr.incident[k]:
            if j < p and (chunk >> (p - 1 - j)) & 1:
                b += 1
        return b

    def block(chunks: range):
        out: list[tuple[int, int] | None] = [None] * len(restrictions)
        for c in chunks:
            if sweep.chunk_bound(c) > comp_best:
                continue
            dev = sweep.chunk_dev(c)
            rows = np.nonzero(dev == comp_best)[0]
            if rows.size == 0:
                continue
            for ri, restr in enumerate(restrictions):
                acc = np.zeros(rows.size, dtype=np.int64)
                for k in range(len(restr.local_vertices)):
                    base = rbase(restr, k, c)
                    np.add(
                        acc,
                        np.take(restr.luts[k][base:], rvars[ri][k][rows]),
                        out=acc,
                    )
                if rows.size:
                    mi = int(np.argmax(acc)) if restr.local_vertices else 0
                    mx = int(acc[mi]) if restr.local_vertices else 0
                    mask = (c << sweep.low_bits) | int(rows[mi])
                    cur = out[ri]
                    if cur is None or mx > cur[0]:
                        out[ri] = (mx, mask)
        return out

    blocks = _run_blocks(block, sweep.n_chunks, jobs)
    merged: list[tuple[int, int]] = []
    for ri in range(len(restrictions)):
        candidates = [b[ri] for b in blocks if b[ri] is not None]
        if not candidates:
            raise InternalConsistencyError("no optimal subgraph found in extremes scan")
        best = max(c[0] for c in candidates)
        mask = min(c[1] for c in candidates if c[0] == best)
        merged.append((best, mask))
    return merged


# ---------------------------------------------------------------------------
# analysis: components, profile, witnesses
# ---------------------------------------------------------------------------


@dataclass
class _ComponentResult:
    comp: _Component
    sweep: _Sweep
    best: int
    best_mask: int
    degree_sets: list[set[int]]
    witnesses: list[dict[int, int]]


@dataclass
class _Analysis:
    graph: BipartiteGraph
    spec: DegreeSpec
    nabla: int
    parts: list[_ComponentResult]
    locator: dict[Vertex, tuple[int, int]]  # vertex -> (part index, local index)

    def profile(self) -> dict[Vertex, tuple[int, ...]]:
        out: dict[Vertex, tuple[int, ...]] = {}
        for part in self.parts:
            for t, v in enumerate(part.comp.vertices):
                out[v] = tuple(sorted(part.degree_sets[t]))
        return out

    def optimal_factor(self) -> FactorSubgraph:
        edges: list[int] = []
        for part in self.parts:
            edges.extend(part.comp.mask_edges(part.best_mask))
        return FactorSubgraph(self.graph, edges)

    def witness_factor(self, v: Vertex, degree: int) -> FactorSubgraph:
        """An optimal subgraph in which v has the given degree."""
        pi, t = self.locator[v]
        edges: list[int] = []
        for i, part in enumerate(self.parts):
            mask = part.witnesses[t][degree] if i == pi else part.best_mask
            edges.extend(part.comp.mask_edges(mask))
        return FactorSubgraph(self.graph, edges)


def _check_spec(graph: BipartiteGraph, spec: DegreeSpec) -> None:
    if not spec.fits(graph):
        raise SpecError("spec does not fit the graph")


def _check_enum_cap(graph: BipartiteGraph, enum_cap: int) -> None:
    if graph.edge_count > enum_cap:
        raise ResourceCapError("enumeration cap", enum_cap, graph.edge_count)


def _analyze(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> _Analysis:
    _check_spec(graph, spec)
    _check_enum_cap(graph, enum_cap)
    parts: list[_ComponentResult] = []
    locator: dict[Vertex, tuple[int, int]] = {}
    nabla = 0
    for xs, ys in graph.connected_components():
        comp = _Component(graph, spec, xs, ys)
        sweep = _Sweep(comp)
        best, mask, dsets, wits = _profile_scan(sweep, jobs)
        nabla += best
        for t, v in enumerate(comp.vertices):
            locator[v] = (len(parts), t)
        parts.append(_ComponentResult(comp, sweep, best, mask, dsets, wits))
    return _Analysis(graph, spec, nabla, parts, locator)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def min_deviation(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> tuple[int, FactorSubgraph]:
    """Exact minimum deviation over all edge subsets, with the
    lexicographically first optimizer."""
    _check_spec(graph, spec)
    _check_enum_cap(graph, enum_cap)
    total = 0
    edges: list[int] = []
    for xs, ys in graph.connected_components():
        comp = _Component(graph, spec, xs, ys)
        best, mask = _value_scan(_Sweep(comp), jobs)
        total += best
        edges.extend(comp.mask_edges(mask))
    return total, FactorSubgraph(graph, edges)


def degree_profile(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> dict[Vertex, tuple[int, ...]]:
    """For each vertex, the sorted set of degrees it takes across all optimal
    subgraphs."""
    return _analyze(graph, spec, enum_cap=enum_cap, jobs=jobs).profile()


LABELS = ("A", "B", "C", "D")


def _label(degrees: Sequence[int], dset: DegreeSet) -> str:
    if all(dset.contains(d) for d in degrees):
        return "C"
    if min(degrees) >= dset.maximum():
        return "A"
    if max(degrees) <= dset.minimum():
        return "B"
    return "D"


@dataclass
class StructureReport:
    nabla: int
    one_optimal: FactorSubgraph
    degree_sets: dict[Vertex, tuple[int, ...]]
    partition: dict[Vertex, str]
    critical: bool
    d_component_count: int
    deficiency_lhs: int
    deficiency_rhs: int
    deficiency_holds: bool

    def vertices_labeled(self, label: str) -> list[Vertex]:
        return [v for v, lab in sorted(self.partition.items()) if lab == label]

    def to_doc(self) -> dict:
        nx = sum(1 for v in self.partition if v[0] == "x")
        ny = len(self.partition) - nx
        return {
            "nabla": self.nabla,
            "optimal_edges": sorted(self.one_optimal.edge_indices),
            "degree_sets": {
                "x": [list(self.degree_sets[("x", i)]) for i in range(nx)],
                "y": [list(self.degree_sets[("y", j)]) for j in range(ny)],
            },
            "partition": {
                "x": [self.partition[("x", i)] for i in range(nx)],
                "y": [self.partition[("y", j)] for j in range(ny)],
            },
            "critical": self.critical,
            "d_component_count": self.d_component_count,
            "deficiency": {
                "holds": self.deficiency_holds,
                "lhs": self.deficiency_lhs,
                "rhs": self.deficiency_rhs,
            },
        }


def _report_from(analysis: _Analysis) -> StructureReport:
    graph, spec = analysis.graph, analysis.spec
    profile = analysis.profile()
    partition = {
        v: _label(profile[v], spec.for_vertex(v)) for v in graph.vertices()
    }
    d_x = [i for i in range(graph.x_count) if partition[("x", i)] == "D"]
    d_y = [j for j in range(graph.y_count) if partition[("y", j)] == "D"]
    d_graph, _, _ = graph.induced(d_x, d_y)
    omega = len(d_graph.connected_components())
    has_vertices = graph.x_count + graph.y_count > 0
    critical = (
        has_vertices
        and graph.is_connected()
        and all(lab == "D" for lab in partition.values())
    )
    b_sum = 0
    a_sum = 0
    for v in graph.vertices():
        lab = partition[v]
        dset = spec.for_vertex(v)
        if lab == "B":
            side = "x" if v[0] == "y" else "y"
            deg_minus_a = sum(
                1 for u in graph.neighbors(v) if partition[(side, u)] != "A"
            )
            b_sum += dset.minimum() - deg_minus_a
        elif lab == "A":
            mx = dset.maximum()
            if mx == math.inf:
                raise InternalConsistencyError(
                    f"vertex {v} labeled A with unbounded degree set"
                )
            a_sum += int(mx)
    rhs = omega + b_sum - a_sum
    return StructureReport(
        nabla=analysis.nabla,
        one_optimal=analysis.optimal_factor(),
        degree_sets=profile,
        partition=partition,
        critical=critical,
        d_component_count=omega,
        deficiency_lhs=analysis.nabla,
        deficiency_rhs=rhs,
        deficiency_holds=analysis.nabla == rhs,
    )


def decomposition(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> StructureReport:
    """Full structure report: labels (C before A before B before D), the
    count of components induced by D, and both sides of the deficiency
    identity."""
    return _report_from(_analyze(graph, spec, enum_cap=enum_cap, jobs=jobs))


def is_critical(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> bool:
    """Connected and every vertex labeled D. When true, the minimum deviation
    must be exactly 1; any other value is an internal-consistency error."""
    report = decomposition(graph, spec, enum_cap=enum_cap, jobs=jobs)
    if report.critical and report.nabla != 1:
        raise InternalConsistencyError(
            f"critical graph with minimum deviation {report.nabla} != 1"
        )
    return report.critical


def deficiency_identity(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> tuple[bool, int, int]:
    """(holds, lhs, rhs) of the deficiency identity."""
    report = decomposition(graph, spec, enum_cap=enum_cap, jobs=jobs)
    return report.deficiency_holds, report.deficiency_lhs, report.deficiency_rhs


# ---------------------------------------------------------------------------
# structure audit
# ---------------------------------------------------------------------------


@dataclass
class AuditCheck:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class AuditReport:
    checks: list[AuditCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_doc(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_doc() for c in self.checks],
        }


def _vertex_name(v: Vertex) -> str:
    return f"{v[0]}{v[1]}"


def structure_audit(
    graph: BipartiteGraph,
    spec: DegreeSpec,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> AuditReport:
    """Verify the structural facts the decomposition is expected to satisfy.

    Checks: no edges join C to D; optimal degree sets are intervals on D;
    on D the intersection of the degree set with the allowed set has no two
    consecutive integers; every component of the D-induced subgraph is
    critical for the boundary-shifted spec and restrictions of optimal
    subgraphs are optimal there; and the witness obligations for A, B and D
    vertices hold with explicitly verified optimal subgraphs.
    """
    from .degree_specs import deviation

    analysis = _analyze(graph, spec, enum_cap=enum_cap, jobs=jobs)
    profile = analysis.profile()
    partition = {v: _label(profile[v], spec.for_vertex(v)) for v in graph.vertices()}
    checks: list[AuditCheck] = []

    # C and D are never adjacent.
    bad_edges = [
        [x, y]
        for (x, y) in graph.edges
        if {partition[("x", x)], partition[("y", y)]} == {"C", "D"}
    ]
    checks.append(
        AuditCheck("no_edges_between_c_and_d", not bad_edges, {"edges": bad_edges})
    )

    d_vertices = [v for v in graph.vertices() if partition[v] == "D"]

    # Degree sets are intervals on D.
    non_intervals = [
        _vertex_name(v)
        for v in d_vertices
        if list(profile[v]) != list(range(profile[v][0], profile[v][-1] + 1))
    ]
    checks.append(
        AuditCheck(
            "interval_degrees_on_d", not non_intervals, {"vertices": non_intervals}
        )
    )

    # No two consecutive allowed degrees are both taken on D.
    consecutive = []
    for v in d_vertices:
        dset = spec.for_vertex(v)
        taken = [d for d in profile[v] if dset.contains(d)]
        if any(b - a == 1 for a, b in zip(taken, taken[1:])):
            consecutive.append(_vertex_name(v))
    checks.append(
        AuditCheck(
            "no_consecutive_allowed_degrees_on_d",
            not consecutive,
            {"vertices": consecutive},
        )
    )

    # Components of the D-induced subgraph: critical for the shifted spec,
    # and restrictions of optimal subgraphs stay optimal.
    b_vertices = [v for v in graph.vertices() if partition[v] == "B"]
    d_x = [i for i in range(graph.x_count) if partition[("x", i)] == "D"]
    d_y = [j for j in range(graph.y_count) if partition[("y", j)] == "D"]
    d_graph, x_old, y_old = graph.induced(d_x, d_y)
    not_critical: list[dict] = []
    not_optimal: list[dict] = []
    for cxs, cys in d_graph.connected_components():
        r_vertices = [("x", x_old[i]) for i in sorted(cxs)] + [
            ("y", y_old[j]) for j in sorted(cys)
        ]
        r_graph, rx_old, ry_old = graph.induced(
            [x_old[i] for i in cxs], [y_old[j] for j in cys]
        )
        r_spec = restrict_spec(spec, graph, r_vertices, b_vertices)
        r_report = decomposition(r_graph, r_spec, enum_cap=enum_cap, jobs=jobs)
        names = [_vertex_name(v) for v in r_vertices]
        if not r_report.critical:
            not_critical.append({"component": names})
        # Max restricted deviation across optimal subgraphs must equal the
        # component's own minimum.
        pi, _ = analysis.locator[r_vertices[0]]
        part = analysis.parts[pi]
        local = {v: t for t, v in enumerate(part.comp.vertices)}
        r_local = [local[v] for v in r_vertices]
        inner = set()
        rset = set(r_vertices)
        for j, p in enumerate(part.comp.edge_positions):
            x, y = graph.edges[p]
            if ("x", x) in rset and ("y", y) in rset:
                inner.add(j)
        incident = [
            [j for j in part.comp.incident[t] if j in inner] for t in r_local
        ]
        r_sets = list(r_spec.x_sets) + list(r_spec.y_sets)
        luts = [
            np.asarray([s.distance(d) for d in range(len(inc) + 1)], dtype=np.int64)
            for s, inc in zip(r_sets, incident)
        ]
        restr = _Restriction(r_local, luts, incident)
        (max_restricted, witness_mask), = _extremes_scan(
            part.sweep, part.best, [restr], jobs
        )
        if max_restricted != r_report.nabla:
            not_optimal.append(
                {
                    "component": names,
                    "component_min": r_report.nabla,
                    "worst_restriction": max_restricted,
                    "witness_edges": sorted(part.comp.mask_edges(witness_mask)),
                }
            )
    checks.append(
        AuditCheck("d_components_critical", not not_critical, {"failures": not_critical})
    )
    checks.append(
        AuditCheck(
            "d_restrictions_optimal", not not_optimal, {"failures": not_optimal}
        )
    )

    # Witness obligations, each verified against an explicit optimal subgraph.
    def verified(v: Vertex, degree: int) -> bool:
        factor = analysis.witness_factor(v, degree)
        return (
            deviation(factor, spec) == analysis.nabla and factor.degree(v) == degree
        )

    b_failures = []
    for v in b_vertices:
        low = profile[v][0]
        if not (low < spec.for_vertex(v).minimum() and verified(v, low)):
            b_failures.append(_vertex_name(v))
    checks.append(
        AuditCheck(
            "b_vertices_drop_below_minimum", not b_failures, {"vertices": b_failures}
        )
    )

    a_failures = []
    for v in (u for u in graph.vertices() if partition[u] == "A"):
        high = profile[v][-1]
        if not (high > spec.for_vertex(v).maximum() and verified(v, high)):
            a_failures.append(_vertex_name(v))
    checks.append(
        AuditCheck(
            "a_vertices_rise_above_maximum", not a_failures, {"vertices": a_failures}
        )
    )

    d_failures = []
    for v in d_vertices:
        dset = spec.for_vertex(v)
        low, high = profile[v][0], profile[v][-1]
        if not (
            low < dset.maximum()
            and high > dset.minimum()
            and verified(v, low)
            and verified(v, high)
        ):
            d_failures.append(_vertex_name(v))
    checks.append(
        AuditCheck(
            "d_vertices_straddle_the_set", not d_failures, {"vertices": d_failures}
        )
    )

    return AuditReport(checks)


# ---------------------------------------------------------------------------
# witness search, criticality properties, dichotomy
# ---------------------------------------------------------------------------


@dataclass
class TutteWitness:
    s_indices: tuple[int, ...]
    q: int
    critical_components: list[tuple[tuple[int, ...], tuple[int, ...]]]

    def to_doc(self) -> dict:
        return {
            "s": list(self.s_indices),
            "q": self.q,
            "critical_components": [
                {"x": list(xs), "y": list(ys)} for xs, ys in self.critical_components
            ],
        }


def tutte_witness(
    graph: BipartiteGraph,
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> TutteWitness | None:
    """First S inside X (by size, then lexicographic) for which deleting S
    leaves more critical components than |S|, or None.

    Criticality of a component is judged under the unshifted ONE_PM spec
    sized to that component. None is returned exactly when a factor exists.
    """
    if graph.x_count > subset_cap:
        raise ResourceCapError("subset cap", subset_cap, graph.x_count)
    _check_enum_cap(graph, enum_cap)
    cache: dict[frozenset[Vertex], bool] = {}
    for size in range(graph.x_count + 1):
        for s in itertools.combinations(range(graph.x_count), size):
            removed = [("x", i) for i in s]
            sub, x_old, y_old = graph.delete_vertices(removed)
            critical_components = []
            for cxs, cys in sub.connected_components():
                key = frozenset(
                    [("x", x_old[i]) for i in cxs] + [("y", y_old[j]) for j in cys]
                )
                if key not in cache:
                    c_graph, _, _ = sub.induced(cxs, cys)
                    cache[key] = is_critical(
                        c_graph,
                        make_spec(SpecKind.ONE_PM, c_graph),
                        enum_cap=enum_cap,
                        jobs=jobs,
                    )
                if cache[key]:
                    critical_components.append(
                        (
                            tuple(sorted(x_old[i] for i in cxs)),
                            tuple(sorted(y_old[j] for j in cys)),
                        )
                    )
            if len(critical_components) > size:
                return TutteWitness(s, len(critical_components), critical_components)
    return None


def ab_confinement_check(
    graph: BipartiteGraph,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> bool:
    """Under ONE_PM: the A class stays inside X and the B class is empty."""
    report = decomposition(
        graph, make_spec(SpecKind.ONE_PM, graph), enum_cap=enum_cap, jobs=jobs
    )
    for v, lab in report.partition.items():
        if lab == "B":
            return False
        if lab == "A" and v[0] == "y":
            return False
    return True


@dataclass
class CriticalPropertiesReport:
    deletions_have_factor: bool
    degree_sets_within_0_2: bool
    x_count_odd: bool
    neighborhood_deletions_exact: bool
    details: dict

    @property
    def passed(self) -> bool:
        return (
            self.deletions_have_factor
            and self.degree_sets_within_0_2
            and self.x_count_odd
            and self.neighborhood_deletions_exact
        )

    def to_doc(self) -> dict:
        return {
            "passed": self.passed,
            "deletions_have_factor": self.deletions_have_factor,
            "degree_sets_within_0_2": self.degree_sets_within_0_2,
            "x_count_odd": self.x_count_odd,
            "neighborhood_deletions_exact": self.neighborhood_deletions_exact,
            "details": self.details,
        }


def critical_properties(
    graph: BipartiteGraph,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> CriticalPropertiesReport:
    """Exact checks that hold on every critical instance under ONE_PM.

    (1) deleting any single X vertex leaves a graph with a factor;
    (2) every optimal degree set is within {0, 1, 2};
    (3) |X| is odd;
    (4) for every Y vertex of degree >= 3 and every triple of its neighbors,
        deleting the triple plus the Y vertex leaves minimum deviation
        exactly 2.
    """
    spec = make_spec(SpecKind.ONE_PM, graph)
    if not is_critical(graph, spec, enum_cap=enum_cap, jobs=jobs):
        raise PreconditionError("graph is not critical under ONE_PM")

    deletion_failures = []
    for i in range(graph.x_count):
        sub, _, _ = graph.delete_vertices([("x", i)])
        value, _ = min_deviation(
            sub, make_spec(SpecKind.ONE_PM, sub), enum_cap=enum_cap, jobs=jobs
        )
        if value != 0:
            deletion_failures.append({"x": i, "nabla": value})

    profile = degree_profile(graph, spec, enum_cap=enum_cap, jobs=jobs)
    out_of_range = [
        _vertex_name(v)
        for v, degrees in sorted(profile.items())
        if not set(degrees) <= {0, 1, 2}
    ]

    triple_failures = []
    triples_checked = 0
    for j in range(graph.y_count):
        neighbors = graph.y_adj[j]
        if len(neighbors) < 3:
            continue
        for triple in itertools.combinations(neighbors, 3):
            triples_checked += 1
            gone = [("x", i) for i in triple] + [("y", j)]
            sub, _, _ = graph.delete_vertices(gone)
            value, _ = min_deviation(
                sub, make_spec(SpecKind.ONE_PM, sub), enum_cap=enum_cap, jobs=jobs
            )
            if value != 2:
                triple_failures.append({"y": j, "triple": list(triple), "nabla": value})

    return CriticalPropertiesReport(
        deletions_have_factor=not deletion_failures,
        degree_sets_within_0_2=not out_of_range,
        x_count_odd=graph.x_count % 2 == 1,
        neighborhood_deletions_exact=not triple_failures,
        details={
            "deletion_failures": deletion_failures,
            "vertices_out_of_range": out_of_range,
            "triples_checked": triples_checked,
            "triple_failures": triple_failures,
        },
    )


class DichotomyBranch(str, Enum):
    HAS_FACTOR = "HAS_FACTOR"
    CRITICAL = "CRITICAL"


def dichotomy_check(
    graph: BipartiteGraph,
    *,
    enum_cap: int = DEFAULT_ENUM_CAP,
    jobs: int = 1,
) -> DichotomyBranch:
    """For a connected regular graph of degree >= 3: exactly one of
    "has a factor" / "critical" holds under ONE_PM. Returns the branch;
    both or neither is an internal-consistency error. (CRITICAL is a
    counterexample alarm for callers: regular graphs of degree >= 3
    always have a factor.)"""
    k = graph.regular_degree()
    if k is None or k < 3:
        raise PreconditionError("graph must be regular of degree >= 3")
    if not graph.is_connected():
        raise PreconditionError("graph must be connected")
    report = decomposition(
        graph, make_spec(SpecKind.ONE_PM, graph), enum_cap=enum_cap, jobs=jobs
    )
    has_factor = report.nabla == 0
    if report.critical and report.nabla != 1:
        raise InternalConsistencyError(
            f"critical graph with minimum deviation {report.nabla} != 1"
        )
    if has_factor == report.critical:
        raise InternalConsistencyError(
            "exactly one of factor/critical must hold for connected regular graphs"
        )
    return DichotomyBranch.HAS_FACTOR if has_factor else DichotomyBranch.CRITICAL
