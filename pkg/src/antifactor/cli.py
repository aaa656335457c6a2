"""Command-line client for the service.

Every subcommand builds a request, sends it to the service (in-process over
ASGI by default, or to a remote base URL via --server), and renders the
response. Exit codes: 0 found/true/all-pass, 1 not-found/false, 2 input
error, 3 resource cap exceeded.

JSON output is canonical: sorted keys, two-space indent, trailing newline.
The same command with the same inputs and seed is byte-identical, whatever
--jobs says. The human format is for eyeballs only and may change; for the
gen subcommands it is the graph text format itself, so generated files feed
straight back into solve/oracle.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Any

import httpx

from . import __version__
from .degree_specs import BUILTIN_SPEC_NAMES
from .oracle import DEFAULT_ENUM_CAP, DEFAULT_SUBSET_CAP


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return p.read_text()


def _spec_field(value: str) -> str | dict:
    """A builtin spec name is passed through; anything else is a config path."""
    if value.strip().lower().replace("-", "_") in BUILTIN_SPEC_NAMES:
        return value
    text = _read_input(value)
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"spec config {value}: invalid JSON ({exc})") from None
    if not isinstance(config, dict):
        raise ValueError(f"spec config {value}: expected a JSON object")
    return config


def _request(path: str, payload: dict, server: str | None) -> httpx.Response:
    async def go() -> httpx.Response:
        if server is None:
            from .service.app import create_app

            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://service", timeout=None
            ) as client:
                return await client.post(path, json=payload)
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _human(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for key in doc:
            value = doc[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(_human(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(f"{pad}- {json.dumps(item)}" for item in doc)
    return f"{pad}{json.dumps(doc)}"


def _emit(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _render(doc: dict, args: argparse.Namespace, *, gen_text: str | None = None) -> None:
    if args.format == "json":
        _emit(json.dumps(doc, sort_keys=True, indent=2), args.output)
    elif gen_text is not None:
        _emit(gen_text, args.output)
    else:
        _emit(_human(doc), args.output)


_ERROR_EXIT = {"input": 2, "resource": 3, "internal": 1}


def _run(
    path: str,
    payload: dict,
    args: argparse.Namespace,
    exit_of: Any,
    gen_key: str | None = None,
) -> int:
    response = _request(path, payload, args.server)
    doc = response.json()
    if response.status_code != 200:
        kind = doc.get("kind", "input")
        message = doc.get("message", "request failed")
        print(f"error ({kind}): {message}", file=sys.stderr)
        return _ERROR_EXIT.get(kind, 2)
    gen_text = None
    if gen_key is not None and args.format == "human":
        raw = doc[gen_key]
        gen_text = "\n".join(raw) if isinstance(raw, list) else raw
    _render(doc, args, gen_text=gen_text)
    return exit_of(doc)


# -- per-subcommand handlers ---------------------------------------------------


def _cmd_solve(args: argparse.Namespace) -> int:
    payload = {"graph": _read_input(args.graph), "budget": args.budget}
    return _run(
        "/solve",
        payload,
        args,
        lambda d: {"SAT": 0, "UNSAT": 1, "CAP_EXCEEDED": 3}[d["status"]],
    )


def _oracle_payload(args: argparse.Namespace) -> dict:
    return {
        "graph": _read_input(args.graph),
        "spec": _spec_field(args.spec),
        "enum_cap": args.enum_cap,
        "jobs": args.jobs,
    }


def _cmd_oracle_nabla(args: argparse.Namespace) -> int:
    return _run(
        "/oracle/nabla",
        _oracle_payload(args),
        args,
        lambda d: 0 if d["nabla"] == 0 else 1,
    )


def _cmd_oracle_decompose(args: argparse.Namespace) -> int:
    return _run("/oracle/decompose", _oracle_payload(args), args, lambda d: 0)


def _cmd_oracle_critical(args: argparse.Namespace) -> int:
    return _run(
        "/oracle/critical",
        _oracle_payload(args),
        args,
        lambda d: 0 if d["critical"] else 1,
    )


def _cmd_oracle_audit(args: argparse.Namespace) -> int:
    return _run(
        "/oracle/audit",
        _oracle_payload(args),
        args,
        lambda d: 0 if d["passed"] else 1,
    )


def _cmd_oracle_witness(args: argparse.Namespace) -> int:
    payload = {
        "graph": _read_input(args.graph),
        "subset_cap": args.subset_cap,
        "enum_cap": args.enum_cap,
        "jobs": args.jobs,
    }
    return _run(
        "/oracle/witness", payload, args, lambda d: 0 if d["found"] else 1
    )


def _cmd_oracle_dichotomy(args: argparse.Namespace) -> int:
    return _run(
        "/oracle/dichotomy",
        _oracle_payload(args),
        args,
        lambda d: 0 if d["branch"] == "HAS_FACTOR" else 1,
    )


def _cmd_gen_regular(args: argparse.Namespace) -> int:
    payload = {"n": args.n, "k": args.k, "seed": args.seed}
    return _run("/gen/regular", payload, args, lambda d: 0, gen_key="graph")


def _cmd_gen_cycle(args: argparse.Namespace) -> int:
    return _run("/gen/cycle", {"n": args.n}, args, lambda d: 0, gen_key="graph")


def _cmd_gen_theta(args: argparse.Namespace) -> int:
    try:
        lengths = [int(part) for part in args.lengths.split(",") if part.strip()]
    except ValueError:
        print("error (input): --lengths must be comma-separated integers", file=sys.stderr)
        return 2
    payload = {"path_lengths": lengths, "branch_side": args.branch_side}
    return _run("/gen/theta", payload, args, lambda d: 0, gen_key="graph")


def _cmd_gen_hfamily(args: argparse.Namespace) -> int:
    return _run(
        "/gen/hfamily", {"max_x": args.max_x}, args, lambda d: 0, gen_key="graphs"
    )


def _cmd_reduce_pack(args: argparse.Namespace) -> int:
    payload = {"graph": _read_input(args.graph), "budget": args.budget}
    return _run(
        "/reduce/pack",
        payload,
        args,
        lambda d: {"SAT": 0, "UNSAT": 1, "CAP_EXCEEDED": 3}[d["status"]],
    )


def _cmd_reduce_oracle(args: argparse.Namespace) -> int:
    payload = {"graph": _read_input(args.graph), "cap": args.cap}
    return _run(
        "/reduce/oracle", payload, args, lambda d: 0 if d["found"] else 1
    )


def _cmd_verify_theorem(args: argparse.Namespace) -> int:
    try:
        ks = [int(part) for part in args.ks.split(",") if part.strip()]
    except ValueError:
        print("error (input): --ks must be comma-separated integers", file=sys.stderr)
        return 2
    payload = {
        "count": args.count,
        "seed": args.seed,
        "ks": ks,
        "x_range": [args.x_min, args.x_max],
        "budget": args.budget,
        "oracle_max_x": args.oracle_max_x,
        "enum_cap": args.enum_cap,
        "jobs": args.jobs,
    }
    return _run(
        "/verify-theorem", payload, args, lambda d: 0 if d["all_passed"] else 1
    )


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


# -- parser ---------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, *, fmt_default: str = "json") -> None:
    parser.add_argument(
        "--format",
        choices=("json", "human"),
        default=fmt_default,
        help="output format (json is canonical; human is unstable)",
    )
    parser.add_argument("-o", "--output", help="write output to this file")
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs in-process",
    )


def _add_oracle_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--spec",
        default="one_pm",
        help=f"builtin spec name {BUILTIN_SPEC_NAMES} or a JSON config path",
    )
    parser.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    parser.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antifactor",
        description="Degree-constrained spanning subgraphs of bipartite graphs: "
        "solver, exhaustive oracle, generators, and the edge-triangle "
        "cover reduction.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find an assignment with no load-one vertex")
    p.add_argument("graph", help="bipartite graph file ('-' for stdin)")
    p.add_argument("--budget", type=int, default=None, help="node budget")
    _add_common(p)
    p.set_defaults(func=_cmd_solve)

    oracle = sub.add_parser("oracle", help="exact enumeration oracle")
    osub = oracle.add_subparsers(dest="oracle_command", required=True)
    for name, func, extra in (
        ("nabla", _cmd_oracle_nabla, "minimum deviation and one optimizer"),
        ("decompose", _cmd_oracle_decompose, "structure decomposition report"),
        ("critical", _cmd_oracle_critical, "criticality test"),
        ("audit", _cmd_oracle_audit, "structural fact audit"),
        ("dichotomy", _cmd_oracle_dichotomy, "factor-or-critical branch"),
    ):
        p = osub.add_parser(name, help=extra)
        p.add_argument("graph", help="bipartite graph file ('-' for stdin)")
        _add_oracle_flags(p)
        _add_common(p)
        p.set_defaults(func=func)
    p = osub.add_parser("witness", help="search for an infeasibility witness")
    p.add_argument("graph", help="bipartite graph file ('-' for stdin)")
    p.add_argument("--subset-cap", type=int, default=DEFAULT_SUBSET_CAP)
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_oracle_witness)

    gen = sub.add_parser("gen", help="graph generators")
    gsub = gen.add_subparsers(dest="gen_command", required=True)
    p = gsub.add_parser("regular", help="random k-regular bipartite graph")
    p.add_argument("--n", type=int, required=True, help="side size")
    p.add_argument("--k", type=int, required=True, help="degree")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, fmt_default="human")
    p.set_defaults(func=_cmd_gen_regular)
    p = gsub.add_parser("cycle", help="even cycle with alternating sides")
    p.add_argument("--n", type=int, required=True, help="cycle length (even)")
    _add_common(p, fmt_default="human")
    p.set_defaults(func=_cmd_gen_cycle)
    p = gsub.add_parser("theta", help="two branch vertices joined by disjoint paths")
    p.add_argument(
        "--lengths", required=True, help="comma-separated path lengths, e.g. 4,4,4"
    )
    p.add_argument("--branch-side", choices=("x", "y"), default="x")
    _add_common(p, fmt_default="human")
    p.set_defaults(func=_cmd_gen_theta)
    p = gsub.add_parser("hfamily", help="cubic-X family with |Y| = |X| + 1")
    p.add_argument("--max-x", type=int, required=True)
    _add_common(p, fmt_default="human")
    p.set_defaults(func=_cmd_gen_hfamily)

    reduce_p = sub.add_parser("reduce", help="edge-and-triangle covers")
    rsub = reduce_p.add_subparsers(dest="reduce_command", required=True)
    p = rsub.add_parser("pack", help="cover via the assignment solver")
    p.add_argument("graph", help="general graph file ('-' for stdin)")
    p.add_argument("--budget", type=int, default=None, help="node budget")
    _add_common(p)
    p.set_defaults(func=_cmd_reduce_pack)
    p = rsub.add_parser("oracle", help="brute-force cover search")
    p.add_argument("graph", help="general graph file ('-' for stdin)")
    p.add_argument("--cap", type=int, default=12, help="vertex-count cap")
    _add_common(p)
    p.set_defaults(func=_cmd_reduce_oracle)

    p = sub.add_parser("verify-theorem", help="batch campaign over regular graphs")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ks", default="3,4,5", help="comma-separated degrees")
    p.add_argument("--x-min", type=int, default=4)
    p.add_argument("--x-max", type=int, default=50)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--oracle-max-x", type=int, default=6)
    p.add_argument("--enum-cap", type=int, default=30)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_verify_theorem)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error (input): {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error (network): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
