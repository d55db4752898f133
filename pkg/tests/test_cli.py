import io
import json

import pytest

from niep.cli import EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, main

DOUBLE_PAIRS = [[4, 0], [0, 1], [0, -1], [0, 1], [0, -1]]


def run(monkeypatch, capsys, argv, envelope=None):
    if envelope is not None:
        text = envelope if isinstance(envelope, str) else json.dumps(envelope)
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_check_example(monkeypatch, capsys):
    code, out, err = run(monkeypatch, capsys, ["check"], {"spectrum": DOUBLE_PAIRS})
    assert code == EXIT_OK and out["ok"]
    assert "hold" in err


def test_check_no_perron(monkeypatch, capsys):
    code, out, err = run(monkeypatch, capsys, ["check"], {"spectrum": [[0, 1], [0, -1]]})
    assert code == EXIT_INPUT and out is None
    assert "invalid input" in err


def test_check_with_diagonal(monkeypatch, capsys):
    env = {"spectrum": [[3, 0], [2, 0]], "diagonal": [4, 2]}
    code, out, err = run(monkeypatch, capsys, ["check"], env)
    assert code == EXIT_FAIL and not out["ok"]
    assert "s1_trace" in err


def test_realize_example(monkeypatch, capsys):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [2, 2, 0, 0, 0]}
    code, out, _ = run(monkeypatch, capsys, ["realize", "--pretty"], env)
    assert code == EXIT_OK and out["status"] == "feasible"
    assert out["matrix"][-1] == pytest.approx([50, 55, 16, 2, 0], abs=1e-9)
    assert out["certificate"]["ok"] and out["permutation"] == [0, 1, 2, 3, 4]


def test_realize_no_sort(monkeypatch, capsys):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [0, 0, 0, 2, 2]}
    code, out, err = run(monkeypatch, capsys, ["realize", "--no-sort"], env)
    assert code == EXIT_FAIL and out["status"] == "infeasible"
    assert "negative entry b4 = -1" in err
    assert out["b"] == pytest.approx([2, 8, -1, 4], abs=1e-9)
    assert not out["certificate"]["ok"]


def test_realize_sorts_by_default(monkeypatch, capsys):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [0, 0, 0, 2, 2]}
    code, out, _ = run(monkeypatch, capsys, ["realize"], env)
    assert code == EXIT_OK and out["permutation"] == [3, 4, 0, 1, 2]


def test_realize_trivial(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["realize"], {"spectrum": [[3, 0]], "diagonal": [3]})
    assert code == EXIT_OK and out["matrix"] == [[3]]


def test_realize_gate_failure(monkeypatch, capsys):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [4, 0, 0, 0, 0]}
    code, out, _ = run(monkeypatch, capsys, ["realize"], env)
    assert code == EXIT_FAIL
    assert out["violations"][0]["condition"] == "s2"
    assert out["violations"][0]["margin"] == pytest.approx(-4)


def test_realize_needs_diagonal(monkeypatch, capsys):
    code, _, _ = run(monkeypatch, capsys, ["realize"], {"spectrum": DOUBLE_PAIRS})
    assert code == EXIT_INPUT


def test_realize_internal_contradiction(monkeypatch, capsys):
    from niep import cli
    from niep.errors import InternalContradiction

    def boom(*a, **k):
        raise InternalContradiction("closed form and recurrence disagree")

    monkeypatch.setattr(cli, "realize", boom)
    code, _, err = run(monkeypatch, capsys, ["realize"], {"spectrum": DOUBLE_PAIRS, "diagonal": [2, 2, 0, 0, 0]})
    assert code == EXIT_INTERNAL and "internal" in err


def test_diag_range_examples(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["diag-range"], {"spectrum": DOUBLE_PAIRS})
    assert code == EXIT_OK
    assert out["a_max"] == pytest.approx(3.4532998, abs=1e-7)
    assert sum(out["witness_example"]) == pytest.approx(4)
    roots = [[1, 0], [-0.5, 3**0.5 / 2], [-0.5, -(3**0.5) / 2]]
    code, out, _ = run(monkeypatch, capsys, ["diag-range"], {"spectrum": roots})
    assert code == EXIT_OK
    assert out["a_min"] == pytest.approx(0, abs=1e-9) and out["a_max"] == pytest.approx(0, abs=1e-9)
    code, out, _ = run(monkeypatch, capsys, ["diag-range"], {"spectrum": [[1, 0], [-5, 0]]})
    assert code == EXIT_FAIL and out["status"] == "not_realisable"


def test_verify_examples(monkeypatch, capsys):
    m = [[2, 1, 0, 0, 0], [0, 2, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [50, 55, 16, 2, 0]]
    code, out, _ = run(monkeypatch, capsys, ["verify"], {"spectrum": DOUBLE_PAIRS, "matrix": m})
    assert code == EXIT_OK and out["form"] == "structured"
    m34 = [[6, 1, 0], [0, 4, 1], [20, 1, 0]]
    env = {"spectrum": [[7, 0], [2, 0], [1, 0]], "matrix": m34}
    assert run(monkeypatch, capsys, ["verify"], env)[0] == EXIT_OK
    m[4][2] = 15
    code, out, _ = run(monkeypatch, capsys, ["verify"], {"spectrum": DOUBLE_PAIRS, "matrix": m})
    assert code == EXIT_FAIL and not out["certificate"]["charpoly_match"]


def test_verify_dense_form(monkeypatch, capsys):
    # all-ones 3x3 has spectrum (3, 0, 0) and is not in companion-plus-diagonal form
    env = {"spectrum": [[3, 0], [0, 0], [0, 0]], "matrix": [[1, 1, 1]] * 3}
    code, out, _ = run(monkeypatch, capsys, ["verify"], env)
    assert code == EXIT_OK and out["form"] == "dense"


def test_verify_bad_matrix(monkeypatch, capsys):
    for m in (None, [[1, 2]], [["a"]]):
        code, _, _ = run(monkeypatch, capsys, ["verify"], {"spectrum": DOUBLE_PAIRS, "matrix": m})
        assert code == EXIT_INPUT


def test_json_round_trip(monkeypatch, capsys, tmp_path):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [1.5, 1, 0.75, 0.5, 0.25]}
    _, out, _ = run(monkeypatch, capsys, ["realize"], env)
    assert out["status"] == "feasible"
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({"spectrum": DOUBLE_PAIRS, "matrix": out["matrix"]}))
    code, back, _ = run(monkeypatch, capsys, ["verify", "--input", str(path)])
    assert code == EXIT_OK and back["certificate"]["ok"]


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", '{"diagonal": [1]}', '{"spectrum": []}', '{"spectrum": [[1, 0]], "options": 3}'],
)
def test_malformed_envelopes(monkeypatch, capsys, text):
    assert run(monkeypatch, capsys, ["check"], text)[0] == EXIT_INPUT


def test_bad_arguments(monkeypatch, capsys):
    assert run(monkeypatch, capsys, ["nope"])[0] == EXIT_INPUT
    assert run(monkeypatch, capsys, ["check", "--json", "--pretty"])[0] == EXIT_INPUT
    assert run(monkeypatch, capsys, ["check", "--input", "/does/not/exist"])[0] == EXIT_INPUT
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [1, 1]}
    assert run(monkeypatch, capsys, ["realize"], env)[0] == EXIT_INPUT


def test_output_format(monkeypatch, capsys):
    env = {"spectrum": [[3, 0]], "diagonal": [3]}
    for argv, lines in ((["realize"], 1), (["realize", "--json"], 1), (["realize", "--pretty"], 2)):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(env)))
        assert main(argv) == EXIT_OK
        out = capsys.readouterr().out
        assert (out.count("\n") > 1) == (lines > 1)


def test_tolerance_option(monkeypatch, capsys):
    env = {"spectrum": DOUBLE_PAIRS, "diagonal": [2, 2, 0, 0, 0], "options": {"tolerance": 1e-6}}
    assert run(monkeypatch, capsys, ["realize"], env)[0] == EXIT_OK


def test_selftest_zero_count(monkeypatch, capsys):
    code, out, _ = run(monkeypatch, capsys, ["selftest", "--seed", "42", "--count", "0"])
    assert code == EXIT_OK and out["ok"]
    assert all(s["cases"] == 0 for s in out["suites"])


def test_selftest_default(monkeypatch, capsys):
    code, out, err = run(monkeypatch, capsys, ["selftest"])
    assert code == EXIT_OK and out["seed"] == 0
    assert len(out["suites"]) == 9
    assert "worst=" in err


def test_selftest_negative_count(monkeypatch, capsys):
    assert run(monkeypatch, capsys, ["selftest", "--count", "-1"])[0] == EXIT_INPUT
