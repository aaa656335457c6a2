"""FastAPI service exposing the solver, oracle, generators, and reduction.

The service is the single entry point for clients (the CLI runs it
in-process over ASGI). Input failures map to HTTP 400 with kind "input",
cap overruns to 400 with kind "resource", and internal-consistency alarms
to 500 with kind "internal"; clients can branch on the kind without parsing
messages.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..campaign import theorem_campaign
from ..degree_specs import DegreeSpec, spec_from_config, spec_from_name
from ..errors import (
    GraphError,
    InternalConsistencyError,
    PreconditionError,
    ResourceCapError,
    SpecError,
)
from ..generators import cycle, enumerate_h_family, random_regular_bipartite, theta_graph
from ..graphs import BipartiteGraph
from ..oracle import (
    decomposition,
    dichotomy_check,
    min_deviation,
    structure_audit,
    tutte_witness,
)
from ..reduction import GeneralGraph, brute_force_cover, pack_edges_triangles
from ..solver import solve_anti_factor
from . import schemas as s


def _meta(seed: int | None = None, **caps: int | None) -> s.Meta:
    return s.Meta(version=__version__, seed=seed, caps=dict(caps))


def _resolve_spec(field: str | dict, graph: BipartiteGraph) -> DegreeSpec:
    if isinstance(field, str):
        return spec_from_name(field, graph)
    return spec_from_config(field, graph)


def create_app() -> FastAPI:
    app = FastAPI(title="antifactor", version=__version__)

    def _error(kind: str, status: int):
        def handler(request: Request, exc: Exception) -> JSONResponse:
            body = s.ErrorBody(kind=kind, message=str(exc))
            return JSONResponse(status_code=status, content=body.model_dump())

        return handler

    for cls in (GraphError, SpecError, PreconditionError):
        app.add_exception_handler(cls, _error("input", 400))
    app.add_exception_handler(ResourceCapError, _error("resource", 400))
    app.add_exception_handler(InternalConsistencyError, _error("internal", 500))

    @app.get("/health", response_model=s.HealthResponse)
    def health() -> s.HealthResponse:
        return s.HealthResponse(status="ok", version=__version__)

    # -- solver ---------------------------------------------------------------

    @app.post("/solve", response_model=s.SolveResponse)
    def solve(req: s.SolveRequest) -> s.SolveResponse:
        graph = BipartiteGraph.from_text(req.graph)
        outcome = solve_anti_factor(graph, budget=req.budget)
        return s.SolveResponse(
            status=outcome.status.value,
            assignment=list(outcome.assignment.targets)
            if outcome.assignment
            else None,
            stats=s.SolveStatsModel(**outcome.stats.to_doc()),
            meta=_meta(budget=req.budget),
        )

    # -- oracle ---------------------------------------------------------------

    @app.post("/oracle/nabla", response_model=s.NablaResponse)
    def oracle_nabla(req: s.OracleRequest) -> s.NablaResponse:
        graph = BipartiteGraph.from_text(req.graph)
        spec = _resolve_spec(req.spec, graph)
        value, factor = min_deviation(
            graph, spec, enum_cap=req.enum_cap, jobs=max(1, req.jobs)
        )
        return s.NablaResponse(
            nabla=value,
            optimal_edges=sorted(factor.edge_indices),
            meta=_meta(enum_cap=req.enum_cap),
        )

    @app.post("/oracle/decompose", response_model=s.DecomposeResponse)
    def oracle_decompose(req: s.OracleRequest) -> s.DecomposeResponse:
        graph = BipartiteGraph.from_text(req.graph)
        spec = _resolve_spec(req.spec, graph)
        report = decomposition(
            graph, spec, enum_cap=req.enum_cap, jobs=max(1, req.jobs)
        )
        doc = report.to_doc()
        return s.DecomposeResponse(**doc, meta=_meta(enum_cap=req.enum_cap))

    @app.post("/oracle/critical", response_model=s.CriticalResponse)
    def oracle_critical(req: s.OracleRequest) -> s.CriticalResponse:
        graph = BipartiteGraph.from_text(req.graph)
        spec = _resolve_spec(req.spec, graph)
        report = decomposition(
            graph, spec, enum_cap=req.enum_cap, jobs=max(1, req.jobs)
        )
        if report.critical and report.nabla != 1:
            raise InternalConsistencyError(
                f"critical graph with minimum deviation {report.nabla} != 1"
            )
        return s.CriticalResponse(
            critical=report.critical,
            nabla=report.nabla,
            meta=_meta(enum_cap=req.enum_cap),
        )

    @app.post("/oracle/audit", response_model=s.AuditResponse)
    def oracle_audit(req: s.OracleRequest) -> s.AuditResponse:
        graph = BipartiteGraph.from_text(req.graph)
        spec = _resolve_spec(req.spec, graph)
        report = structure_audit(
            graph, spec, enum_cap=req.enum_cap, jobs=max(1, req.jobs)
        )
        return s.AuditResponse(
            passed=report.passed,
            checks=[s.AuditCheckModel(**c.to_doc()) for c in report.checks],
            meta=_meta(enum_cap=req.enum_cap),
        )

    @app.post("/oracle/witness", response_model=s.WitnessResponse)
    def oracle_witness(req: s.WitnessRequest) -> s.WitnessResponse:
        graph = BipartiteGraph.from_text(req.graph)
        witness = tutte_witness(
            graph,
            subset_cap=req.subset_cap,
            enum_cap=req.enum_cap,
            jobs=max(1, req.jobs),
        )
        model = None
        if witness is not None:
            model = s.WitnessModel(
                s=list(witness.s_indices),
                q=witness.q,
                critical_components=[
                    s.WitnessComponentModel(x=list(xs), y=list(ys))
                    for xs, ys in witness.critical_components
                ],
            )
        return s.WitnessResponse(
            found=witness is not None,
            witness=model,
            meta=_meta(subset_cap=req.subset_cap, enum_cap=req.enum_cap),
        )

    @app.post("/oracle/dichotomy", response_model=s.DichotomyResponse)
    def oracle_dichotomy(req: s.OracleRequest) -> s.DichotomyResponse:
        graph = BipartiteGraph.from_text(req.graph)
        branch = dichotomy_check(graph, enum_cap=req.enum_cap, jobs=max(1, req.jobs))
        return s.DichotomyResponse(
            branch=branch.value, meta=_meta(enum_cap=req.enum_cap)
        )

    # -- generators -------------------------------------------------------------

    @app.post("/gen/regular", response_model=s.GraphResponse)
    def gen_regular(req: s.GenRegularRequest) -> s.GraphResponse:
        graph = random_regular_bipartite(req.n, req.k, req.seed)
        return s.GraphResponse(graph=graph.to_text(), meta=_meta(seed=req.seed))

    @app.post("/gen/cycle", response_model=s.GraphResponse)
    def gen_cycle(req: s.GenCycleRequest) -> s.GraphResponse:
        return s.GraphResponse(graph=cycle(req.n).to_text(), meta=_meta())

    @app.post("/gen/theta", response_model=s.GraphResponse)
    def gen_theta(req: s.GenThetaRequest) -> s.GraphResponse:
        graph = theta_graph(req.path_lengths, req.branch_side)
        return s.GraphResponse(graph=graph.to_text(), meta=_meta())

    @app.post("/gen/hfamily", response_model=s.GraphListResponse)
    def gen_hfamily(req: s.GenHFamilyRequest) -> s.GraphListResponse:
        graphs = [g.to_text() for g in enumerate_h_family(req.max_x)]
        return s.GraphListResponse(graphs=graphs, count=len(graphs), meta=_meta())

    # -- reduction ----------------------------------------------------------------

    @app.post("/reduce/pack", response_model=s.ReducePackResponse)
    def reduce_pack(req: s.ReducePackRequest) -> s.ReducePackResponse:
        graph = GeneralGraph.from_text(req.graph)
        result = pack_edges_triangles(graph, budget=req.budget)
        return s.ReducePackResponse(
            status=result.status.value,
            cover=s.CoverModel(**result.cover.to_doc()) if result.cover else None,
            cover_text=result.cover.to_text() if result.cover else None,
            stats=s.SolveStatsModel(**result.stats.to_doc()),
            meta=_meta(budget=req.budget),
        )

    @app.post("/reduce/oracle", response_model=s.ReduceOracleResponse)
    def reduce_oracle(req: s.ReduceOracleRequest) -> s.ReduceOracleResponse:
        graph = GeneralGraph.from_text(req.graph)
        cover = brute_force_cover(graph, cap=req.cap)
        return s.ReduceOracleResponse(
            found=cover is not None,
            cover=s.CoverModel(**cover.to_doc()) if cover else None,
            cover_text=cover.to_text() if cover else None,
            meta=_meta(brute_cap=req.cap),
        )

    # -- campaign -----------------------------------------------------------------

    @app.post("/verify-theorem", response_model=s.VerifyTheoremResponse)
    def verify_theorem(req: s.VerifyTheoremRequest) -> s.VerifyTheoremResponse:
        doc = theorem_campaign(
            count=req.count,
            seed=req.seed,
            ks=tuple(req.ks),
            x_range=tuple(req.x_range),
            budget=req.budget,
            oracle_max_x=req.oracle_max_x,
            enum_cap=req.enum_cap,
            jobs=max(1, req.jobs),
        )
        return s.VerifyTheoremResponse(
            **doc,
            meta=_meta(
                seed=req.seed, budget=req.budget, enum_cap=req.enum_cap
            ),
        )

    return app
