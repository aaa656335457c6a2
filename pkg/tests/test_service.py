import asyncio

import httpx
import pytest

from _fixtures import complete_3_3, six_cycle
from antifactor import __version__
from antifactor.service import create_app

app = create_app()


def call(path, payload=None, method="post"):
    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service"
        ) as client:
            if method == "get":
                return await client.get(path)
            return await client.post(path, json=payload)

    return asyncio.run(go())


def graph_text(graph):
    return graph.to_text()


class TestHealth:
    def test_health(self):
        r = call("/health", method="get")
        assert r.status_code == 200
        assert r.json() == {"status": "ok", "version": __version__}


class TestSolve:
    def test_sat(self):
        r = call("/solve", {"graph": graph_text(complete_3_3())})
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "SAT"
        assert body["assignment"] == [0, 0, 0]
        assert body["meta"]["version"] == __version__

    def test_unsat(self):
        r = call("/solve", {"graph": graph_text(six_cycle())})
        assert r.json()["status"] == "UNSAT"
        assert r.json()["assignment"] is None

    def test_budget_in_meta(self):
        r = call("/solve", {"graph": graph_text(six_cycle()), "budget": 1})
        body = r.json()
        assert body["status"] == "CAP_EXCEEDED"
        assert body["meta"]["caps"]["budget"] == 1

    def test_bad_graph_text_is_an_input_error(self):
        r = call("/solve", {"graph": "p bip oops\n"})
        assert r.status_code == 400
        assert r.json()["kind"] == "input"


class TestOracleEndpoints:
    def test_nabla(self):
        r = call("/oracle/nabla", {"graph": graph_text(six_cycle())})
        body = r.json()
        assert body["nabla"] == 1
        assert body["optimal_edges"] == [4, 5]
        assert body["meta"]["caps"]["enum_cap"] == 24

    def test_nabla_with_custom_spec_object(self):
        spec = {"x_default": [1], "y_default": {"base": [0], "tail_from": 2}}
        r = call(
            "/oracle/nabla", {"graph": graph_text(six_cycle()), "spec": spec}
        )
        assert r.json()["nabla"] == 1

    def test_nabla_unknown_spec_name(self):
        r = call(
            "/oracle/nabla", {"graph": graph_text(six_cycle()), "spec": "zzz"}
        )
        assert r.status_code == 400
        assert r.json()["kind"] == "input"

    def test_enum_cap_maps_to_resource_error(self):
        r = call(
            "/oracle/nabla",
            {"graph": graph_text(complete_3_3()), "enum_cap": 4},
        )
        assert r.status_code == 400
        assert r.json()["kind"] == "resource"

    def test_decompose(self):
        r = call("/oracle/decompose", {"graph": graph_text(six_cycle())})
        body = r.json()
        assert body["nabla"] == 1
        assert body["critical"] is True
        assert body["partition"] == {"x": ["D"] * 3, "y": ["D"] * 3}
        assert body["deficiency"] == {"holds": True, "lhs": 1, "rhs": 1}

    def test_critical(self):
        r = call("/oracle/critical", {"graph": graph_text(six_cycle())})
        assert r.json() == {
            "critical": True,
            "nabla": 1,
            "meta": {
                "version": __version__,
                "seed": None,
                "caps": {"enum_cap": 24},
            },
        }

    def test_audit(self):
        r = call("/oracle/audit", {"graph": graph_text(six_cycle())})
        body = r.json()
        assert body["passed"] is True
        assert len(body["checks"]) == 8

    def test_witness_found(self):
        r = call("/oracle/witness", {"graph": graph_text(six_cycle())})
        body = r.json()
        assert body["found"] is True
        assert body["witness"]["s"] == []
        assert body["witness"]["q"] == 1

    def test_witness_absent(self):
        r = call("/oracle/witness", {"graph": graph_text(complete_3_3())})
        body = r.json()
        assert body["found"] is False and body["witness"] is None

    def test_dichotomy(self):
        r = call("/oracle/dichotomy", {"graph": graph_text(complete_3_3())})
        assert r.json()["branch"] == "HAS_FACTOR"

    def test_dichotomy_precondition_is_an_input_error(self):
        r = call("/oracle/dichotomy", {"graph": graph_text(six_cycle())})
        assert r.status_code == 400
        assert r.json()["kind"] == "input"


class TestGenEndpoints:
    def test_regular(self):
        r = call("/gen/regular", {"n": 4, "k": 3, "seed": 7})
        body = r.json()
        assert body["graph"].startswith("p bip 4 4 12")
        assert body["meta"]["seed"] == 7

    def test_regular_rejects_bad_degree(self):
        r = call("/gen/regular", {"n": 2, "k": 3, "seed": 0})
        assert r.status_code == 400
        assert r.json()["kind"] == "input"

    def test_cycle(self):
        r = call("/gen/cycle", {"n": 6})
        assert r.json()["graph"] == six_cycle().to_text()

    def test_theta(self):
        r = call("/gen/theta", {"path_lengths": [2, 2, 2]})
        assert r.json()["graph"].startswith("p bip 2 3 6")

    def test_theta_rejects_odd_lengths(self):
        r = call("/gen/theta", {"path_lengths": [2, 2, 3]})
        assert r.status_code == 400

    def test_hfamily(self):
        r = call("/gen/hfamily", {"max_x": 2})
        body = r.json()
        assert body["count"] == 1
        assert body["graphs"][0].startswith("p bip 2 3 6")

    def test_hfamily_cap(self):
        r = call("/gen/hfamily", {"max_x": 9})
        assert r.status_code == 400
        assert r.json()["kind"] == "resource"


class TestReduceEndpoints:
    def test_pack(self):
        text = "p gen 3 3\ne 1 2\ne 2 3\ne 1 3\n"
        r = call("/reduce/pack", {"graph": text})
        body = r.json()
        assert body["status"] == "SAT"
        assert body["cover"] == {"edges": [], "triangles": [[0, 1, 2]]}
        assert body["cover_text"] == "T 1 2 3\n"

    def test_pack_unsat(self):
        r = call("/reduce/pack", {"graph": "p gen 1 0\n"})
        body = r.json()
        assert body["status"] == "UNSAT" and body["cover"] is None

    def test_oracle(self):
        text = "p gen 4 3\ne 1 2\ne 2 3\ne 3 4\n"
        r = call("/reduce/oracle", {"graph": text})
        body = r.json()
        assert body["found"] is True
        assert body["cover"] == {"edges": [[0, 1], [2, 3]], "triangles": []}

    def test_oracle_cap(self):
        edges = "".join(f"e {i} {i + 1}\n" for i in range(1, 14))
        r = call("/reduce/oracle", {"graph": f"p gen 14 13\n{edges}"})
        assert r.status_code == 400
        assert r.json()["kind"] == "resource"


class TestVerifyTheorem:
    def test_small_run(self):
        r = call(
            "/verify-theorem",
            {"count": 5, "seed": 1, "x_range": [4, 8]},
        )
        body = r.json()
        assert body["all_passed"] is True
        assert body["count"] == 5
        assert body["meta"]["seed"] == 1


class TestValidation:
    def test_pydantic_rejects_missing_fields(self):
        r = call("/solve", {})
        assert r.status_code == 422  # fastapi validation, not our handler
