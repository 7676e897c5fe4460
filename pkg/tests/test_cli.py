import json

import pytest

from polycert.cli import main


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv):
    code, out = run(capsys, argv)
    return code, json.loads(out)


@pytest.fixture
def interval_problem(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "variables": ["x"],
                "objective": "x",
                "constraints": [{"poly": "1 - x^2", "sense": ">=0"}],
                "options": {"box": [[-2, 2]]},
            }
        )
    )
    return str(path)


def test_analyze_triangle(capsys):
    code, doc = run_json(
        capsys,
        ["analyze", "--objective", "x^3 + y^3 + x*y", "--variables", "x,y"],
    )
    assert code == 0
    polytope = doc["result"]["polytope"]
    assert polytope["convenient"] is True
    assert [0, 0] in polytope["vertices"]
    assert [3, 0] in polytope["vertices"]
    assert doc["result"]["khovanskii"]["status"] == "CertifiedNondegenerate"


def test_analyze_degenerate_exit_code(capsys):
    code, doc = run_json(
        capsys,
        ["analyze", "--objective", "x^2 - 2*x*y + y^2", "--variables", "x,y"],
    )
    assert code == 3
    assert doc["result"]["khovanskii"]["status"] == "Degenerate"


def test_minimize_gradient_cubic_ladder_with_warning(capsys):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "gradient", "--order", "1..4",
         "--objective", "x^3", "--variables", "x"],
    )
    assert code == 0
    ladder = doc["result"]["ladder"]
    assert [e["order"] for e in ladder] == [1, 2, 3, 4]
    for e in ladder:
        assert abs(e["bound"]) <= 1e-6
    assert any("minimum not attained" in w for w in doc["result"]["warnings"])


def test_minimize_lasserre_interval(capsys, interval_problem):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "lasserre", "--order", "1", "--problem", interval_problem],
    )
    assert code == 0
    entry = doc["result"]["ladder"][0]
    assert abs(entry["bound"] + 1.0) <= 1e-6
    minimizers = doc["result"]["minimizers"]
    assert len(minimizers) == 1
    assert abs(minimizers[0]["point"][0] + 1.0) <= 1e-4


def test_minimize_ladder_nondecreasing(capsys, interval_problem):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "lasserre", "--order", "1..3", "--problem", interval_problem],
    )
    bounds = [e["bound"] for e in doc["result"]["ladder"]]
    for lo, hi in zip(bounds, bounds[1:]):
        assert hi >= lo - 1e-7


def test_minimize_rerun_identical_output(capsys, interval_problem):
    argv = ["minimize", "--mode", "lasserre", "--order", "2", "--problem", interval_problem]
    _, out1 = run(capsys, argv)
    _, out2 = run(capsys, argv)
    assert out1 == out2


def test_probe_infeasible_exit_three(capsys):
    code, doc = run_json(
        capsys,
        ["probe", "--mode", "sos", "--order", "3",
         "--objective", "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", "--variables", "x,y"],
    )
    assert code == 3
    assert doc["result"]["probe"]["outcome"] == "Infeasible"
    assert doc["result"]["probe"]["certificate"]["residual"] <= 1e-7


def test_probe_feasible(capsys):
    code, doc = run_json(
        capsys,
        ["probe", "--mode", "sos", "--order", "1", "--objective", "x^2 + 1",
         "--variables", "x"],
    )
    assert code == 0
    assert doc["result"]["probe"]["outcome"] == "Feasible"


def test_compactness_circle(capsys):
    code, doc = run_json(
        capsys,
        ["compactness", "--objective", "0", "--variables", "x,y",
         "--constraint", "x^2 + y^2 - 1 = 0"],
    )
    assert code == 0
    cert = doc["result"]["certificate"]
    assert cert["conclusion"] == "CertifiedCompact"


def test_compactness_line_exit_three(capsys):
    code, doc = run_json(
        capsys,
        ["compactness", "--objective", "0", "--variables", "x,y",
         "--constraint", "x - y = 0"],
    )
    assert code == 3
    assert doc["result"]["certificate"]["conclusion"] == "WitnessNoncompactHint"


def test_morse_command(capsys):
    code, doc = run_json(
        capsys,
        ["morse", "--objective", "x^4 - 2*x^2 + 1", "--variables", "x"],
    )
    assert code == 0
    assert doc["result"]["morse"]["verdict"] == "Morse"
    assert len(doc["result"]["morse"]["points"]) == 3


def test_zeros_command_boundary_case(capsys):
    code, doc = run_json(
        capsys,
        ["zeros", "--objective", "1 - x^2", "--variables", "x",
         "--constraint", "1 - 3*x^2 + 3*x^4 - x^6 >= 0"],
    )
    assert code == 0
    zeros = doc["result"]["zeros"]["zeros"]
    assert len(zeros) == 2
    assert doc["result"]["zeros"]["all_interior"] is False


def test_parse_error_exit_two(capsys):
    code, doc = run_json(
        capsys,
        ["analyze", "--objective", "x +", "--variables", "x"],
    )
    assert code == 2
    assert "error" in doc


def test_unknown_variable_exit_two(capsys):
    code, doc = run_json(
        capsys,
        ["morse", "--objective", "z^2", "--variables", "x"],
    )
    assert code == 2


def test_export_sdpa_stdout(capsys, interval_problem):
    code, out = run(
        capsys,
        ["export-sdpa", "--mode", "lasserre", "--order", "1", "--problem", interval_problem],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "2"  # moments y1, y2
    assert lines[1] == "2"  # moment block + localizing block


def test_export_sdpa_file_with_external_check(capsys, tmp_path, interval_problem):
    target = tmp_path / "problem.dat-s"
    ext = tmp_path / "external.txt"
    ext.write_text("objValPrimal = 1.0000000\n")
    code, doc = run_json(
        capsys,
        ["export-sdpa", "--mode", "lasserre", "--order", "1",
         "--problem", interval_problem, "--output", str(target),
         "--external-result", str(ext)],
    )
    assert code == 0
    assert target.exists()
    assert doc["result"]["external_objective"] == 1.0
    assert doc["result"]["cross_check_gap"] <= 1e-6


def test_minimize_gradient_reports_morse(capsys):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "gradient", "--order", "2",
         "--objective", "x^4 - 2*x^2 + 1", "--variables", "x"],
    )
    assert code == 0
    assert doc["result"]["morse"]["verdict"] == "Morse"
    assert abs(doc["result"]["ladder"][0]["bound"]) <= 1e-6


def test_minimize_kkt_interval(capsys, interval_problem):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "kkt", "--order", "2", "--problem", interval_problem],
    )
    assert code == 0
    assert abs(doc["result"]["ladder"][0]["bound"] + 1.0) <= 1e-6


def test_export_sdpa_debug_dump(capsys, tmp_path, interval_problem):
    target = tmp_path / "problem.dat-s"
    dump = tmp_path / "debug.json"
    code, _ = run_json(
        capsys,
        ["export-sdpa", "--mode", "lasserre", "--order", "1",
         "--problem", interval_problem, "--output", str(target),
         "--debug-json", str(dump)],
    )
    assert code == 0
    doc = json.loads(dump.read_text())
    assert doc["moment_index"]["0"] == [0]
    assert doc["moment_index"]["2"] == [2]
    assert len(doc["psd_blocks"]) == 2


def test_minimize_gradient_both_sides(capsys):
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "gradient", "--order", "1..2", "--both-sides",
         "--objective", "x^3", "--variables", "x"],
    )
    assert code == 0
    for entry in doc["result"]["ladder"]:
        assert abs(entry["bound"]) <= 1e-6
        assert entry["sos_status"] == "Optimal"
        # both formulations agree on this instance
        assert abs(entry["sos_bound"]) <= 1e-6
        assert entry["sos_bound"] <= entry["bound"] + 1e-6


def test_sample_problem_file_parses(capsys):
    import pathlib

    sample = pathlib.Path(__file__).resolve().parent.parent / "docs" / "sample-problem.json"
    code, doc = run_json(
        capsys,
        ["minimize", "--mode", "lasserre", "--order", "1", "--problem", str(sample)],
    )
    assert code == 0
    assert abs(doc["result"]["ladder"][0]["bound"] + 1.0) <= 1e-6
