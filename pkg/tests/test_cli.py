"""End-to-end command-line contract: exit codes, round trips, byte stability."""

import json

import numpy as np

from preservers import pure_state, trace_replacer
from preservers.cli import main
from preservers.serialize import dumps, superop_to_json


def run_cli(capsys, *args, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_make_classify_round_trip_all_forms(capsys, monkeypatch, tmp_path):
    cases = []
    for form in range(1, 8):
        for dims in ("2,2", "2,3", "3,2", "3,3"):
            m, n = (int(x) for x in dims.split(","))
            if form == 4 and m < n:
                continue
            if form == 5 and m > n:
                continue
            if form == 7 and m != n:
                continue
            cases.append((form, dims))
    for form, dims in cases:
        code, out, err = run_cli(capsys, "make", "--form", str(form),
                                 "--dims", dims, "--seed", "11")
        assert code == 0, (form, dims, err)
        path = tmp_path / f"map_{form}_{dims.replace(',', 'x')}.json"
        path.write_text(out, encoding="utf-8")
        code, out, err = run_cli(capsys, "classify", str(path))
        assert code == 0, (form, dims, err)
        rep = json.loads(out)
        assert rep["form"] == form, (form, dims, rep["form"])
        assert rep["residual"] <= 1e-8


def test_make_form8_refused(capsys, monkeypatch):
    code, out, err = run_cli(capsys, "make", "--form", "8", "--dims", "2,2")
    assert code == 2
    assert "open question" in err


def test_make_constraint_violations(capsys, monkeypatch):
    code, _, err = run_cli(capsys, "make", "--form", "7", "--dims", "2,3")
    assert code == 2 and "equal factor dimensions" in err
    code, _, err = run_cli(capsys, "make", "--form", "5", "--dims", "3,2")
    assert code == 2 and "m <= n" in err
    code, _, err = run_cli(capsys, "make", "--multi", "--pi", "2,1", "--dims", "2,3")
    assert code == 2 and "dimension law" in err


def test_classify_stdin_and_exit_codes(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "make", "--form", "6", "--dims", "2,2", "--seed", "3")
    assert code == 0
    code, rep_out, _ = run_cli(capsys, "classify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    rep = json.loads(rep_out)
    assert rep["form"] == 6 and rep["both_directions"] is True
    assert rep["grid"] == ["c", "b′"]

    bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2))
    bad = trace_replacer(bell, (2, 2), (2, 2))
    code, rep_out, _ = run_cli(capsys, "classify", "-",
                               stdin=dumps(superop_to_json(bad)), monkeypatch=monkeypatch)
    assert code == 1
    rep = json.loads(rep_out)
    assert rep["form"] == "none" and rep["witness"] is not None

    prod = pure_state(np.kron(np.kron([1, 0], [1, 0]), [1, 0]))
    flat = trace_replacer(prod, (2, 2, 2), (2, 2, 2))
    code, rep_out, _ = run_cli(capsys, "classify", "-",
                               stdin=dumps(superop_to_json(flat)), monkeypatch=monkeypatch)
    assert code == 3
    assert json.loads(rep_out)["form"] == "insufficient"


def test_classify_malformed_json(capsys, monkeypatch):
    code, _, err = run_cli(capsys, "classify", "-", stdin="{not json",
                           monkeypatch=monkeypatch)
    assert code == 2 and "malformed JSON" in err
    bad_basis = '{"in_dims":[2],"out_dims":[2],"basis":"mystery","coeff":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}'
    code, _, err = run_cli(capsys, "classify", "-", stdin=bad_basis,
                           monkeypatch=monkeypatch)
    assert code == 2 and "$.basis" in err
    code, _, err = run_cli(capsys, "classify", "/nonexistent/path.json")
    assert code == 2 and "cannot read" in err


def test_classify_pure_maps(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "make", "--pure", "conjugation", "--dims", "2,4",
                           "--seed", "5", "--flags", "conjugate")
    assert code == 0
    code, rep_out, _ = run_cli(capsys, "classify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    rep = json.loads(rep_out)
    assert rep["kind"] == "conjugation" and rep["flag"] == "conjugate"

    code, out, _ = run_cli(capsys, "make", "--pure", "trace_replacer", "--dims", "3,3",
                           "--seed", "5")
    code, rep_out, _ = run_cli(capsys, "classify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(rep_out)["kind"] == "trace_replacer"


def test_classify_multi_map(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "make", "--multi", "--pi", "2,3,1",
                           "--dims", "2,2,2", "--seed", "8", "--flags",
                           "linear,conjugate,linear")
    assert code == 0
    code, rep_out, _ = run_cli(capsys, "classify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    rep = json.loads(rep_out)
    assert rep["form"] == "multi"
    assert rep["params"]["pi"] == [2, 3, 1]
    assert [u["flag"] for u in rep["params"]["isometries"]] == [
        "linear", "conjugate", "linear"]


def test_verify_pass_fail_and_witness(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "make", "--form", "7", "--dims", "3,3", "--seed", "2")
    code, rep_out, _ = run_cli(capsys, "verify", "-", "--samples", "300",
                               stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    rep = json.loads(rep_out)
    assert rep["passed"] is True and rep["samples"] == 300

    # identity plus noise fails with a serialized witness
    rng = np.random.default_rng(0)
    from preservers import identity_superop, make_superop

    ident = identity_superop((3,))
    noisy = make_superop((3,), (3,), ident.coeff + 1e-2 * rng.standard_normal((9, 9)))
    code, rep_out, _ = run_cli(capsys, "verify", "-", "--samples", "300",
                               stdin=dumps(superop_to_json(noisy)), monkeypatch=monkeypatch)
    assert code == 1
    rep = json.loads(rep_out)
    assert rep["passed"] is False and rep["witness"] is not None


def test_verify_seed_byte_stability(capsys, monkeypatch):
    code, made, _ = run_cli(capsys, "make", "--form", "2", "--dims", "3,2", "--seed", "4")
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "verify", "-", "--samples", "150", "--seed", "21",
                               stdin=made, monkeypatch=monkeypatch)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_make_byte_stability(capsys, monkeypatch):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "make", "--form", "3", "--dims", "2,3", "--seed", "9")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert outs[0].endswith("\n") and outs[0].count("\n") == 1


def test_demo_runs(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "demo")
    assert code == 0
    assert "partial transpose" in out
    assert "form 6" in out


def test_unknown_arguments_exit_2(capsys, monkeypatch):
    code, _, _ = run_cli(capsys, "make", "--dims", "2,2")  # no kind selected
    assert code == 2
    code, _, _ = run_cli(capsys, "bogus")
    assert code == 2
