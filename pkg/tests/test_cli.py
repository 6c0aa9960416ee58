import json

import pytest

from almost_reps.cli import EXIT_INPUT, EXIT_INTERNAL, EXIT_INVARIANT, EXIT_OK, main
from almost_reps.runner import AlmostRepRunner
from almost_reps.utils.config import RunConfig
from almost_reps.utils.errors import SpecError


def write_config(tmp_path, name="run.json", **values):
    path = tmp_path / name
    path.write_text(json.dumps(values))
    return str(path)


def read_records(path):
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]


def run(tmp_path, **values):
    output = tmp_path / "records.jsonl"
    status = main(["--config", write_config(tmp_path, **values), "--output", str(output), "--quiet"])
    return status, (read_records(output) if output.exists() else [])


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(overrides={"command": "folner-scan"}).validate()
        assert config.get("n_max") == 10
        assert config.get("algebra", "d") == 1

    def test_file_then_overrides(self, tmp_path):
        path = write_config(tmp_path, command="folner-scan", n_max=4, seed=3)
        config = RunConfig(path, {"n_max": 6, "seed": None})
        assert config.get("n_max") == 6 and config.get("seed") == 3

    def test_missing_key(self):
        config = RunConfig()
        with pytest.raises(KeyError):
            config.get("algebra", "rank")
        assert config.get("algebra", "rank", default=2) == 2

    @pytest.mark.parametrize("values", [
        {"command": "summon"},
        {"command": "folner-scan", "field": "gfp:12"},
        {"command": "folner-scan", "n_max": 0},
        {"command": "folner-scan", "trials": -1},
        {"command": "folner-scan", "n": "five"},
        {"command": "verify"},
        {"command": "paradox", "graph": "no_such.graph"},
    ])
    def test_invalid(self, values):
        with pytest.raises(SpecError):
            RunConfig(overrides=values).validate()

    def test_tensor_defaults_second_algebra(self):
        config = RunConfig(overrides={"command": "tensor"}).validate()
        assert config.get("algebra_b") == config.get("algebra")

    def test_relative_paths(self, tmp_path):
        (tmp_path / "algebra.json").write_text("{}")
        config = RunConfig(write_config(tmp_path, command="folner-scan"))
        assert config.resolve_path("algebra.json") == tmp_path / "algebra.json"

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecError):
            RunConfig(str(tmp_path / "none.json"))


class TestCommands:
    def test_folner_scan(self, tmp_path):
        status, records = run(tmp_path, command="folner-scan", B=["t", "t^-1"], exhaustion={"type": "ball"})
        assert status == EXIT_OK
        assert [r["ratio"] for r in records] == [f"2/{2 * n + 1}" for n in range(1, 11)]
        assert all(r["pass"] and r["command"] == "folner-scan" for r in records)

    def test_almostrep_build_and_verify(self, tmp_path):
        rep_path = tmp_path / "rep.json"
        status, records = run(tmp_path, command="almostrep-build", L=["t", "t^-1"], n=5, rep_output=str(rep_path))
        assert status == EXIT_OK
        (record,) = records
        assert (record["v_dim"], record["core_dim"], record["defect"]) == (11, 9, "2/11")
        assert record["defect_bound"] == "2/11"

        status, records = run(tmp_path, command="verify", rep=str(rep_path))
        assert status == EXIT_OK and records[0]["verification"]["maximal_dim"] == 9

    def test_amplify(self, tmp_path):
        status, records = run(tmp_path, command="amplify", n=3, amplify_n=2)
        assert status == EXIT_OK
        assert (records[0]["v_dim"], records[0]["core_dim"]) == (14, 10)

    def test_tensor(self, tmp_path):
        status, records = run(tmp_path, command="tensor", n=3)
        assert status == EXIT_OK
        assert records[0]["v_dim"] == 49 and records[0]["core_dim"] >= 25

    def test_paradox_tree(self, tmp_path):
        status, records = run(tmp_path, command="paradox", graph={"type": "tree", "degree": 3, "radius": 5})
        assert status == EXIT_OK
        (record,) = records
        assert record["success"] and record["deficiency"] == 0
        assert record["identities"]["pass"] and record["witness"]["pass"]

    def test_paradox_cycle_is_reported_not_failed(self, tmp_path):
        status, records = run(tmp_path, command="paradox", graph={"type": "cycle", "n": 12}, K_scan=[1, 2])
        assert status == EXIT_OK
        assert [r["normalized_deficiency"] for r in records] == ["1/1", "1/1"]
        assert not any(r["success"] for r in records)

    def test_paradox_graph_file(self, tmp_path):
        (tmp_path / "star.graph").write_text("4 3\n0 1\n0 2\n0 3\n")
        status, records = run(tmp_path, command="paradox", graph="star.graph")
        assert status == EXIT_OK and len(records) == 1

    def test_audit_rank(self, tmp_path):
        status, records = run(tmp_path, command="audit-rank", n=3, trials=5, seed=1)
        assert status == EXIT_OK
        assert len(records) == 5
        assert all(r["contradiction"] for r in records)

    def test_audit_rank_given_matrices(self, tmp_path):
        status, records = run(tmp_path, command="audit-rank", n=5, A=[["1"], ["t"]], B_matrix=[["1", "t^-1"]])
        assert status == EXIT_OK
        assert (records[0]["lhs"], records[0]["rhs"]) == (18, 11)

    def test_commutator_check(self, tmp_path):
        status, records = run(tmp_path, command="commutator-check", n=5, p="t", a="t^-1", trials=10,
                              sizes=[2, 6], A=[["t"]], B_matrix=[["t^-1"]])
        assert status == EXIT_OK
        kinds = [r["kind"] for r in records]
        assert kinds.count("random") == kinds.count("near-inverse") == 10
        assert all(r["bound"] <= 2 for r in records if r["kind"] == "near-inverse")
        assert "structured" in kinds and "stable-finiteness" in kinds
        structured = next(r for r in records if r["kind"] == "structured")
        assert structured["rank_TS_minus_ST"] == 2 == structured["bound"]

    def test_rr_estimate(self, tmp_path):
        status, records = run(tmp_path, command="rr-estimate", p="t", a="t^-1", n_max=4, delta="1/2")
        assert status == EXIT_OK
        assert [r["ratio"] for r in records] == ["2/3", "4/5", "6/7", "8/9"]
        assert all(r["ideal_bound"]["pass"] for r in records)

    def test_deterministic(self, tmp_path):
        values = dict(command="audit-rank", n=3, trials=4, seed=9)
        _, first = run(tmp_path, **values)
        _, second = run(tmp_path, **values)
        strip = [{k: v for k, v in r.items() if k != "wall_time_us"} for r in first]
        assert strip == [{k: v for k, v in r.items() if k != "wall_time_us"} for r in second]


class TestExitCodes:
    def test_empty_q(self, tmp_path):
        status, records = run(tmp_path, command="almostrep-build", Q=[])
        assert status == EXIT_INPUT and records == []

    def test_unknown_command(self, tmp_path):
        status, _ = run(tmp_path, command="summon")
        assert status == EXIT_INPUT

    def test_bad_literal(self, tmp_path):
        status, _ = run(tmp_path, command="folner-scan", B=["t t"])
        assert status == EXIT_INPUT

    def test_rr_estimate_needs_p(self, tmp_path):
        status, _ = run(tmp_path, command="rr-estimate")
        assert status == EXIT_INPUT

    def test_invariant_failure(self, tmp_path):
        rep_path = tmp_path / "rep.json"
        run(tmp_path, command="almostrep-build", L=["t", "t^-1"], n=2, rep_output=str(rep_path))
        data = json.loads(rep_path.read_text())
        unit = data["labels"].index("1")
        data["images"][unit][0][0] = 0
        rep_path.write_text(json.dumps(data))
        status, records = run(tmp_path, command="verify", rep=str(rep_path))
        assert status == EXIT_INVARIANT
        assert records and not records[0]["pass"]

    def test_command_line_overrides_config(self, tmp_path):
        output = tmp_path / "out.jsonl"
        path = write_config(tmp_path, command="paradox", graph={"type": "tree", "degree": 3, "radius": 4})
        assert main(["folner-scan", "--config", path, "--n-max", "2", "--output", str(output), "--quiet"]) == EXIT_OK
        assert len(read_records(output)) == 2

    def test_unexpected_exception_is_not_an_input_error(self, tmp_path, monkeypatch, capsys):
        def broken(self):
            raise RuntimeError("index bookkeeping went wrong")

        monkeypatch.setattr(AlmostRepRunner, "run", broken)
        status, records = run(tmp_path, command="folner-scan", n_max=2)
        assert status == EXIT_INTERNAL != EXIT_INPUT
        assert records == []
        assert "RuntimeError" in capsys.readouterr().err
