from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from envlab.cli import main
from envlab.laurent import ExpVec
from envlab.spaces import projective_space, space_to_dict


@pytest.fixture
def runner():
    return CliRunner()


P2_ARGS = ["--builtin", "P2", "--weights", "0,0", "--weights", "1,0", "--weights", "0,1"]


class TestSpaceCommand:
    def test_worked_example_order(self, runner):
        result = runner.invoke(main, ["space", *P2_ARGS, "--sigma", "1,2"])
        assert result.exit_code == 0
        assert "3 fixed points" in result.output
        assert "e2<e1" in result.output or "e2<e0" in result.output

    def test_line(self, runner):
        result = runner.invoke(main, ["space", "--builtin", "P1"])
        assert result.exit_code == 0
        assert "2 fixed points" in result.output

    def test_malformed_space_file(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{oops", encoding="utf-8")
        result = runner.invoke(main, ["space", "--space-file", str(path)])
        assert result.exit_code == 2
        assert "error" in result.output

    def test_requires_exactly_one_source(self, runner):
        result = runner.invoke(main, ["space"])
        assert result.exit_code == 2

    def test_json_format_round_trips(self, runner):
        result = runner.invoke(main, ["space", *P2_ARGS, "--sigma", "1,2", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert json.dumps(payload, sort_keys=True, indent=2) == result.output.strip()


class TestVerifyCommand:
    def test_trivial_pass_exit_zero(self, runner):
        result = runner.invoke(main, ["verify", *P2_ARGS, "--sigma", "1,2", "--slope", "trivial"])
        assert result.exit_code == 0
        assert "PASS" in result.output

    def test_search_slope(self, runner):
        result = runner.invoke(
            main, ["verify", *P2_ARGS, "--sigma", "1,2", "--slope", "O(-1)/search"]
        )
        assert result.exit_code == 0
        assert "minimal n: 2" in result.output

    def test_explicit_denominator(self, runner):
        result = runner.invoke(main, ["verify", *P2_ARGS, "--sigma", "1,2", "--slope", "O(-1)/3"])
        assert result.exit_code == 0

    def test_integral_anti_ample_slope_fails_strong(self, runner):
        # At n = 1 the translated interval touches the excluded origin.
        result = runner.invoke(main, ["verify", *P2_ARGS, "--sigma", "1,2", "--slope", "O(-1)"])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_weak_c_flag_rescues_integral_slope(self, runner):
        result = runner.invoke(
            main, ["verify", *P2_ARGS, "--sigma", "1,2", "--slope", "O(-1)", "--weak-c"]
        )
        assert result.exit_code == 0

    def test_uncertified_refusal_exit_two(self, runner, tmp_path):
        space = {
            "rank": 1,
            "points": ["p", "q"],
            "tangent": {"p": [[1, 0]], "q": [[-1, 0]]},
            "order": {"1": [["q", "p"]]},
            "certifications": {"smooth_closures": False},
        }
        path = tmp_path / "space.json"
        path.write_text(json.dumps(space), encoding="utf-8")
        result = runner.invoke(main, ["verify", "--space-file", str(path), "--sigma", "1"])
        assert result.exit_code == 2
        assert "refus" in result.output

    def test_space_file_verification(self, runner, tmp_path):
        space = projective_space(2, (ExpVec((0, 0)), ExpVec((1, 0)), ExpVec((0, 1))))
        path = tmp_path / "plane.json"
        path.write_text(json.dumps(space_to_dict(space, [(1, 2)])), encoding="utf-8")
        result = runner.invoke(main, ["verify", "--space-file", str(path), "--sigma", "1,2"])
        assert result.exit_code == 0

    def test_non_generic_chamber_exit_two(self, runner):
        result = runner.invoke(main, ["verify", *P2_ARGS, "--sigma", "1,1"])
        assert result.exit_code == 2

    def test_tsv_format(self, runner):
        result = runner.invoke(
            main, ["verify", *P2_ARGS, "--sigma", "1,2", "--format", "tsv"]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "axiom\tpair\tverdict\tdetail"
        assert lines[-1].startswith("overall\t")

    def test_json_format_round_trips(self, runner):
        result = runner.invoke(
            main, ["verify", *P2_ARGS, "--sigma", "1,2", "--format", "json"]
        )
        payload = json.loads(result.output)
        assert payload["verdict"] is True
        assert json.dumps(payload, sort_keys=True, indent=2) == result.output.strip()


class TestExamplesCommand:
    def test_pretty_pass(self, runner):
        result = runner.invoke(main, ["examples"])
        assert result.exit_code == 0
        assert "projective-plane: 9/9 golden values match" in result.output

    def test_tsv(self, runner):
        result = runner.invoke(main, ["examples", "--format", "tsv"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "section\tcheck\tverdict"

    def test_byte_identical_runs(self, runner):
        first = runner.invoke(main, ["examples", "--format", "json"])
        second = runner.invoke(main, ["examples", "--format", "json"])
        assert first.output == second.output
