import json

import pytest

from _fixtures import complete_3_3, six_cycle
from antifactor.cli import main
from antifactor.graphs import BipartiteGraph
from antifactor.reduction import GeneralGraph


@pytest.fixture
def c6_file(tmp_path):
    path = tmp_path / "c6.txt"
    path.write_text(six_cycle().to_text())
    return str(path)


@pytest.fixture
def k33_file(tmp_path):
    path = tmp_path / "k33.txt"
    path.write_text(complete_3_3().to_text())
    return str(path)


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("p gen 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_sat_exits_zero(self, capsys, k33_file):
        code, out, _ = run(capsys, ["solve", k33_file])
        assert code == 0
        doc = json.loads(out)
        assert doc["status"] == "SAT" and doc["assignment"] == [0, 0, 0]

    def test_unsat_exits_one(self, capsys, c6_file):
        code, out, _ = run(capsys, ["solve", c6_file])
        assert code == 1
        assert json.loads(out)["status"] == "UNSAT"

    def test_cap_exits_three(self, capsys, c6_file):
        code, out, _ = run(capsys, ["solve", c6_file, "--budget", "1"])
        assert code == 3
        assert json.loads(out)["status"] == "CAP_EXCEEDED"

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run(capsys, ["solve", "/nonexistent/graph.txt"])
        assert code == 2
        assert "error (input)" in err

    def test_stdin_input(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(complete_3_3().to_text()))
        code, out, _ = run(capsys, ["solve", "-"])
        assert code == 0 and json.loads(out)["status"] == "SAT"

    def test_output_file(self, capsys, tmp_path, k33_file):
        target = tmp_path / "result.json"
        code, out, _ = run(capsys, ["solve", k33_file, "-o", str(target)])
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["status"] == "SAT"


class TestOracle:
    def test_nabla_zero_exits_zero(self, capsys, k33_file):
        code, out, _ = run(capsys, ["oracle", "nabla", k33_file])
        assert code == 0
        assert json.loads(out)["nabla"] == 0

    def test_nabla_positive_exits_one(self, capsys, c6_file):
        code, out, _ = run(capsys, ["oracle", "nabla", c6_file])
        assert code == 1
        doc = json.loads(out)
        assert doc["nabla"] == 1 and doc["optimal_edges"] == [4, 5]

    def test_decompose_always_exits_zero(self, capsys, c6_file):
        code, out, _ = run(capsys, ["oracle", "decompose", c6_file])
        assert code == 0
        assert json.loads(out)["critical"] is True

    def test_critical_branches_exit_code(self, capsys, c6_file, k33_file):
        assert run(capsys, ["oracle", "critical", c6_file])[0] == 0
        assert run(capsys, ["oracle", "critical", k33_file])[0] == 1

    def test_audit(self, capsys, c6_file):
        code, out, _ = run(capsys, ["oracle", "audit", c6_file])
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_witness_found_exits_zero(self, capsys, c6_file, k33_file):
        code, out, _ = run(capsys, ["oracle", "witness", c6_file])
        assert code == 0
        assert json.loads(out)["witness"]["q"] == 1
        assert run(capsys, ["oracle", "witness", k33_file])[0] == 1

    def test_dichotomy(self, capsys, k33_file, c6_file):
        code, out, _ = run(capsys, ["oracle", "dichotomy", k33_file])
        assert code == 0
        assert json.loads(out)["branch"] == "HAS_FACTOR"
        # C6 is 2-regular: an input error, exit 2
        assert run(capsys, ["oracle", "dichotomy", c6_file])[0] == 2

    def test_enum_cap_exits_three(self, capsys, k33_file):
        code, _, err = run(
            capsys, ["oracle", "nabla", k33_file, "--enum-cap", "4"]
        )
        assert code == 3
        assert "error (resource)" in err

    def test_spec_name_flag(self, capsys, c6_file):
        code, out, _ = run(
            capsys, ["oracle", "nabla", c6_file, "--spec", "one"]
        )
        assert code == 1 and json.loads(out)["nabla"] == 1

    def test_spec_config_file(self, capsys, tmp_path, c6_file):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(
            json.dumps({"x_default": [1], "y_default": {"base": [0], "tail_from": 2}})
        )
        code, out, _ = run(
            capsys, ["oracle", "nabla", c6_file, "--spec", str(spec_path)]
        )
        assert code == 1 and json.loads(out)["nabla"] == 1

    def test_bad_spec_file_exits_two(self, capsys, tmp_path, c6_file):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        code, _, err = run(
            capsys, ["oracle", "nabla", c6_file, "--spec", str(bad)]
        )
        assert code == 2 and "invalid JSON" in err


class TestGen:
    def test_human_output_is_graph_text(self, capsys):
        code, out, _ = run(capsys, ["gen", "cycle", "--n", "6"])
        assert code == 0
        assert BipartiteGraph.from_text(out) == six_cycle()

    def test_generated_file_feeds_back_into_solve(self, capsys, tmp_path):
        path = tmp_path / "gen.txt"
        code, _, _ = run(
            capsys,
            ["gen", "regular", "--n", "6", "--k", "3", "--seed", "4",
             "-o", str(path)],
        )
        assert code == 0
        code, out, _ = run(capsys, ["solve", str(path)])
        assert code == 0 and json.loads(out)["status"] == "SAT"

    def test_json_format_carries_meta(self, capsys):
        code, out, _ = run(
            capsys, ["gen", "regular", "--n", "4", "--k", "2", "--seed", "1",
                     "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["meta"]["seed"] == 1
        assert doc["graph"].startswith("p bip 4 4 8")

    def test_theta(self, capsys):
        code, out, _ = run(capsys, ["gen", "theta", "--lengths", "2,2,2"])
        assert code == 0
        g = BipartiteGraph.from_text(out)
        assert (g.x_count, g.y_count, g.edge_count) == (2, 3, 6)

    def test_theta_rejects_garbage_lengths(self, capsys):
        code, _, err = run(capsys, ["gen", "theta", "--lengths", "2,zz"])
        assert code == 2 and "comma-separated" in err

    def test_hfamily_human_output_is_concatenated_graph_text(self, capsys):
        code, out, _ = run(capsys, ["gen", "hfamily", "--max-x", "2"])
        assert code == 0
        assert BipartiteGraph.from_text(out).x_count == 2

    def test_gen_validation_error_exits_two(self, capsys):
        code, _, err = run(capsys, ["gen", "cycle", "--n", "5"])
        assert code == 2 and "error (input)" in err


class TestReduce:
    def test_pack(self, capsys, triangle_file):
        code, out, _ = run(capsys, ["reduce", "pack", triangle_file])
        assert code == 0
        doc = json.loads(out)
        assert doc["cover_text"] == "T 1 2 3\n"

    def test_pack_unsat_exits_one(self, capsys, tmp_path):
        path = tmp_path / "p3.txt"
        path.write_text("p gen 3 2\ne 1 2\ne 2 3\n")
        assert run(capsys, ["reduce", "pack", str(path)])[0] == 1

    def test_oracle_agrees(self, capsys, triangle_file):
        code, out, _ = run(capsys, ["reduce", "oracle", triangle_file])
        assert code == 0
        assert json.loads(out)["cover"] == {
            "edges": [],
            "triangles": [[0, 1, 2]],
        }

    def test_oracle_cap_exits_three(self, capsys, tmp_path):
        path = tmp_path / "big.txt"
        edges = "".join(f"e {i} {i + 1}\n" for i in range(1, 14))
        path.write_text(f"p gen 14 13\n{edges}")
        assert run(capsys, ["reduce", "oracle", str(path)])[0] == 3


class TestVerifyTheorem:
    def test_small_run_exits_zero(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-theorem", "--count", "5", "--seed", "1",
             "--x-min", "4", "--x-max", "8"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_passed"] is True and doc["count"] == 5

    def test_bad_ks_exits_two(self, capsys):
        code, _, err = run(capsys, ["verify-theorem", "--ks", "3,oops"])
        assert code == 2 and "comma-separated" in err


class TestDeterminism:
    def test_json_output_is_byte_identical_across_runs_and_jobs(
        self, capsys, c6_file
    ):
        outs = []
        for jobs in ("1", "1", "3"):
            _, out, _ = run(
                capsys, ["oracle", "decompose", c6_file, "--jobs", jobs]
            )
            outs.append(out)
        assert outs[0] == outs[1] == outs[2]

    def test_json_is_canonical(self, capsys, k33_file):
        _, out, _ = run(capsys, ["solve", k33_file])
        doc = json.loads(out)
        assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"


class TestVersion:
    def test_version_flag(self, capsys):
        from antifactor import __version__

        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.strip() == __version__
