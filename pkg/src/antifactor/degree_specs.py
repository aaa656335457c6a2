"""Degree-set specifications and the deviation functional.

A DegreeSet is a finite sorted base, optionally extended by an upward-infinite
tail ("every integer >= tail_from"). Y-side anti sets are stored with their
tail intact rather than truncated at the vertex degree; this keeps "all
degrees from two up" semantically unbounded, which matters for the structure
decomposition (no Y vertex can have its whole reachable range above a finite
maximum).

The deviation of a spanning subgraph F is the sum over vertices of the
distance from d_F(v) to the vertex's set. F is a factor for the spec iff the
deviation is zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import SpecError
from .graphs import BipartiteGraph, FactorSubgraph, Vertex


@dataclass(frozen=True)
class DegreeSet:
    """A set of admissible degrees: finite base plus optional infinite tail."""

    base: tuple[int, ...]
    tail_from: int | None = None

    @staticmethod
    def of(values: Iterable[int], tail_from: int | None = None) -> "DegreeSet":
        """Normalized constructor: sorted, deduplicated, base below the tail."""
        vals = sorted(set(int(v) for v in values))
        if tail_from is not None:
            tail_from = int(tail_from)
            vals = [v for v in vals if v < tail_from]
        if not vals and tail_from is None:
            raise SpecError("degree set must be nonempty")
        return DegreeSet(tuple(vals), tail_from)

    def contains(self, d: int) -> bool:
        if self.tail_from is not None and d >= self.tail_from:
            return True
        return d in self.base

    def distance(self, d: int) -> int:
        """min |d - h| over the set; 0 when d is a member."""
        best = None
        if self.tail_from is not None:
            best = max(self.tail_from - d, 0)
        for h in self.base:
            gap = abs(d - h)
            if best is None or gap < best:
                best = gap
        assert best is not None
        return best

    def minimum(self) -> int:
        if self.base:
            return self.base[0]
        assert self.tail_from is not None
        return self.tail_from

    def maximum(self) -> float:
        """+inf for tailed sets, else the largest base element."""
        if self.tail_from is not None:
            return math.inf
        return self.base[-1]

    def shifted(self, delta: int) -> "DegreeSet":
        """Every member shifted by delta (tail boundary included)."""
        return DegreeSet(
            tuple(h + delta for h in self.base),
            None if self.tail_from is None else self.tail_from + delta,
        )

    def is_allowed(self) -> bool:
        """Gap rule: consecutive members never differ by more than 2.

        Equivalently, the complement contains no two consecutive integers
        strictly between members (or between the base and the tail).
        """
        seq = list(self.base)
        if self.tail_from is not None:
            seq.append(self.tail_from)
        return all(b - a <= 2 for a, b in zip(seq, seq[1:]))

    def feasible(self) -> bool:
        """True when the set has a member >= -1 (reachable by some degree shift)."""
        return self.tail_from is not None or self.base[-1] >= -1

    def to_doc(self) -> dict:
        doc: dict = {"base": list(self.base)}
        if self.tail_from is not None:
            doc["tail_from"] = self.tail_from
        return doc

    def __repr__(self) -> str:
        if self.tail_from is None:
            return f"DegreeSet({set(self.base) or '{}'})"
        return f"DegreeSet({list(self.base)} + [{self.tail_from}..])"


ONE_SET = DegreeSet.of([1])
PM_SET = DegreeSet.of([-1, 1])
ANTI_SET = DegreeSet.of([0], tail_from=2)


class SpecKind(str, Enum):
    ONE = "ONE"
    ONE_PM = "ONE_PM"
    ANTI = "ANTI"


@dataclass(frozen=True)
class DegreeSpec:
    """Per-vertex degree sets for a specific graph."""

    x_sets: tuple[DegreeSet, ...]
    y_sets: tuple[DegreeSet, ...]

    def for_vertex(self, v: Vertex) -> DegreeSet:
        side, i = v
        return self.x_sets[i] if side == "x" else self.y_sets[i]

    def fits(self, graph: BipartiteGraph) -> bool:
        return len(self.x_sets) == graph.x_count and len(self.y_sets) == graph.y_count

    def to_doc(self) -> dict:
        return {
            "x": [s.to_doc() for s in self.x_sets],
            "y": [s.to_doc() for s in self.y_sets],
        }


def make_spec(
    kind: SpecKind | str, graph: BipartiteGraph, anti_side: str = "y"
) -> DegreeSpec:
    """Builtin specs.

    ONE: X vertices need degree exactly 1, Y vertices anything but 1.
    ONE_PM: like ONE but X sets are {-1, 1}; optima coincide with ONE while
    the structure decomposition sees a different minimum on X.
    ANTI: the anti set on `anti_side`, all degrees allowed on the other side.
    """
    kind = SpecKind(kind)
    nx, ny = graph.x_count, graph.y_count
    if kind is SpecKind.ONE:
        return DegreeSpec((ONE_SET,) * nx, (ANTI_SET,) * ny)
    if kind is SpecKind.ONE_PM:
        return DegreeSpec((PM_SET,) * nx, (ANTI_SET,) * ny)
    if anti_side not in ("x", "y"):
        raise SpecError(f"anti_side must be 'x' or 'y', got {anti_side!r}")
    free = DegreeSet.of([0], tail_from=1)
    if anti_side == "x":
        return DegreeSpec((ANTI_SET,) * nx, (free,) * ny)
    return DegreeSpec((free,) * nx, (ANTI_SET,) * ny)


def custom_spec(
    graph: BipartiteGraph,
    x_sets: Sequence[DegreeSet],
    y_sets: Sequence[DegreeSet],
) -> DegreeSpec:
    """Custom spec with user-level validation: every member must be >= -1."""
    if len(x_sets) != graph.x_count or len(y_sets) != graph.y_count:
        raise SpecError("spec table sizes must match the graph sides")
    for s in list(x_sets) + list(y_sets):
        low = s.base[0] if s.base else s.tail_from
        assert low is not None
        if low < -1:
            raise SpecError(f"degree set member {low} below -1")
    return DegreeSpec(tuple(x_sets), tuple(y_sets))


def validate_allowed(spec: DegreeSpec) -> bool:
    """True iff every vertex set obeys the gap rule."""
    return all(s.is_allowed() for s in spec.x_sets + spec.y_sets)


def restrict_spec(
    spec: DegreeSpec,
    graph: BipartiteGraph,
    region: Iterable[Vertex],
    boundary: Iterable[Vertex],
) -> DegreeSpec:
    """Spec for the subgraph induced on `region`, discounting `boundary` edges.

    Every vertex v in the region has its set shifted down by the number of
    graph edges from v into the boundary, matching degrees measured inside
    the induced subgraph when all boundary edges are taken. The result is
    indexed like `graph.induced(region)`, i.e. by ascending original index.
    Shifted sets may drop below -1; callers can detect that via feasible().
    """
    region_set = set(region)
    boundary_set = set(boundary)
    if region_set & boundary_set:
        raise SpecError("region and boundary overlap")
    x_old = sorted(i for side, i in region_set if side == "x")
    y_old = sorted(j for side, j in region_set if side == "y")
    bx = {i for side, i in boundary_set if side == "x"}
    by = {j for side, j in boundary_set if side == "y"}

    def shift_count(v: Vertex) -> int:
        other = by if v[0] == "x" else bx
        return sum(1 for u in graph.neighbors(v) if u in other)

    return DegreeSpec(
        tuple(spec.x_sets[i].shifted(-shift_count(("x", i))) for i in x_old),
        tuple(spec.y_sets[j].shifted(-shift_count(("y", j))) for j in y_old),
    )


def deviation_breakdown(
    factor: FactorSubgraph, spec: DegreeSpec
) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """(total, per-X contributions, per-Y contributions)."""
    graph = factor.graph
    if not spec.fits(graph):
        raise SpecError("spec does not fit the graph")
    xc = tuple(
        spec.x_sets[i].distance(factor.x_degrees[i]) for i in range(graph.x_count)
    )
    yc = tuple(
        spec.y_sets[j].distance(factor.y_degrees[j]) for j in range(graph.y_count)
    )
    return sum(xc) + sum(yc), xc, yc


def deviation(factor: FactorSubgraph, spec: DegreeSpec) -> int:
    """Total distance of the subgraph's degrees from the spec."""
    return deviation_breakdown(factor, spec)[0]


# -- JSON spec configs -------------------------------------------------------

BUILTIN_SPEC_NAMES = ("one", "one_pm", "anti_x", "anti_y")


def spec_from_name(name: str, graph: BipartiteGraph) -> DegreeSpec:
    key = name.strip().lower().replace("-", "_")
    if key == "one":
        return make_spec(SpecKind.ONE, graph)
    if key == "one_pm":
        return make_spec(SpecKind.ONE_PM, graph)
    if key == "anti_x":
        return make_spec(SpecKind.ANTI, graph, anti_side="x")
    if key == "anti_y":
        return make_spec(SpecKind.ANTI, graph, anti_side="y")
    raise SpecError(f"unknown spec name {name!r}; known: {BUILTIN_SPEC_NAMES}")


def _set_from_config(value: object, where: str) -> DegreeSet:
    if isinstance(value, list):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise SpecError(f"{where}: set members must be integers")
        return DegreeSet.of(value)
    if isinstance(value, dict):
        unknown = set(value) - {"base", "tail_from"}
        if unknown:
            raise SpecError(f"{where}: unknown keys {sorted(unknown)}")
        base = value.get("base", [])
        if not isinstance(base, list):
            raise SpecError(f"{where}: 'base' must be a list")
        tail = value.get("tail_from")
        if tail is not None and not isinstance(tail, int):
            raise SpecError(f"{where}: 'tail_from' must be an integer")
        return DegreeSet.of(base, tail_from=tail)
    raise SpecError(f"{where}: expected a list or {{base, tail_from}} object")


def spec_from_config(config: Mapping, graph: BipartiteGraph) -> DegreeSpec:
    """Build a spec from the JSON config format.

    {"x_default": <set>, "y_default": <set>, "overrides": {"x0": <set>, ...}}
    where <set> is a list of integers or {"base": [...], "tail_from": t}.
    """
    unknown = set(config) - {"x_default", "y_default", "overrides"}
    if unknown:
        raise SpecError(f"unknown config keys {sorted(unknown)}")
    if "x_default" not in config or "y_default" not in config:
        raise SpecError("config needs x_default and y_default")
    x_default = _set_from_config(config["x_default"], "x_default")
    y_default = _set_from_config(config["y_default"], "y_default")
    x_sets = [x_default] * graph.x_count
    y_sets = [y_default] * graph.y_count
    for key, value in (config.get("overrides") or {}).items():
        if not isinstance(key, str) or len(key) < 2 or key[0] not in "xy":
            raise SpecError(f"override key {key!r} must look like 'x3' or 'y0'")
        try:
            idx = int(key[1:])
        except ValueError:
            raise SpecError(f"override key {key!r} has a non-integer index") from None
        side = key[0]
        limit = graph.x_count if side == "x" else graph.y_count
        if not (0 <= idx < limit):
            raise SpecError(f"override key {key!r} out of range")
        if side == "x":
            x_sets[idx] = _set_from_config(value, key)
        else:
            y_sets[idx] = _set_from_config(value, key)
    return custom_spec(graph, x_sets, y_sets)


def spec_from_json(text: str, graph: BipartiteGraph) -> DegreeSpec:
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec config is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise SpecError("spec config must be a JSON object")
    return spec_from_config(config, graph)
