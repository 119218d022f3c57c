import json

import pytest

from projline.cli import run
from projline.utils import load_config


def output(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


@pytest.fixture
def model_file(tmp_path):
    def build(p):
        path = tmp_path / f"model{p}.json"
        assert run(["build-model", "-p", str(p), "-o", str(path)]) == 0
        return path

    return build


def test_crossratio(capsys):
    assert output(capsys, ["crossratio", "-p", "5", "0:1", "1:0", "1:1", "1:3"]) == (0, "3", "")


def test_crossratio_json(capsys):
    code, out, _ = output(capsys, ["crossratio", "-p", "5", "--json", "0:1", "1:0", "1:1", "3"])
    assert code == 0
    assert json.loads(out) == {"cross_ratio": "3"}


def test_crossratio_over_rationals(capsys):
    code, out, _ = output(capsys, ["crossratio", "--rational", "0:1", "1:0", "1:1", "1/2"])
    assert (code, out) == (0, "1/2")


def test_undefined_crossratio_is_an_error(capsys):
    code, _, err = output(capsys, ["crossratio", "-p", "5", "0:1", "1:0", "1:1", "0:1"])
    assert code == 1
    assert err.startswith("UndefinedCrossRatio:")


def test_compose_common_direction(capsys):
    code, out, _ = output(capsys, ["compose", "-p", "5", "1:1|1:0>0:1", "1:1|0:1>1:2"])
    assert (code, out) == (0, "1:1|1:0>1:2")


def test_compose_mismatched_endpoints(capsys):
    code, _, err = output(capsys, ["compose", "-p", "5", "1:1|1:0>0:1", "1:1|1:2>0:1"])
    assert code == 1
    assert err.startswith("NotComposable:")


def test_pgl_count(capsys):
    assert output(capsys, ["pgl", "-p", "3"])[:2] == (0, "24")
    assert output(capsys, ["pgl", "-p", "5", "--count"])[:2] == (0, "120")


def test_pgl_list_and_cayley(capsys):
    code, out, _ = output(capsys, ["pgl", "-p", "2", "--list"])
    assert code == 0
    assert len(out.splitlines()) == 6
    code, out, _ = output(capsys, ["pgl", "-p", "2", "--cayley", "--json"])
    table = json.loads(out)["cayley"]
    assert len(table) == 6 and all(sorted(row) == list(range(6)) for row in table)


def test_build_model_then_verify(capsys, model_file):
    path = model_file(3)
    code, out, _ = output(capsys, ["verify", str(path)])
    assert (code, out) == (0, "PASS (7 axiom groups)")


def test_verify_without_file_checks_the_model(capsys):
    code, out, _ = output(capsys, ["verify", "-p", "5", "--json"])
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_reports_a_broken_table(capsys, model_file):
    path = model_file(3)
    doc = json.loads(path.read_text())
    two = {"scalar": {"at": "1:1", "lambda": "2"}}
    for entry in doc["comp"]:
        if entry["f"] == two and entry["g"] == two:
            entry["fg"] = two
    path.write_text(json.dumps(doc))
    code, out, _ = output(capsys, ["verify", str(path), "--early-exit"])
    assert code == 1
    assert out.startswith("FAIL (1 violations in 1 axiom groups)")


def test_verify_unreadable_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("[]")
    code, _, err = output(capsys, ["verify", str(path)])
    assert code == 1
    assert err.startswith("MalformedTable:")


def test_find_projectivity(capsys, model_file):
    path = model_file(5)
    code, out, _ = output(
        capsys, ["find-projectivity", str(path), str(path), "--triple", "1:0,0:1,1:1", "--to", "0:1,1:0,1:1"]
    )
    assert code == 0
    lines = out.splitlines()
    assert "1:2 -> 1:3" in lines
    assert "1:0 -> 0:1" in lines
    assert len(lines) == 6


def test_find_projectivity_rejects_a_non_projective_table(capsys, model_file):
    path = model_file(5)
    doc = json.loads(path.read_text())
    f = {"labeled": {"src": "1:0", "dst": "0:1", "dir": "1:1"}}
    g = {"labeled": {"src": "0:1", "dst": "1:2", "dir": "1:1"}}
    for entry in doc["comp"]:
        if entry["f"] == f and entry["g"] == g:
            entry["fg"] = {"labeled": {"src": "1:0", "dst": "1:2", "dir": "0:1"}}
    path.write_text(json.dumps(doc))
    code, _, err = output(
        capsys, ["find-projectivity", str(path), str(path), "--triple", "1:0,0:1,1:1", "--to", "0:1,1:0,1:1"]
    )
    assert code == 1
    assert err.startswith("NoSolution:")


def test_verify_summary_lists_skipped_groups(capsys, tmp_path):
    path = tmp_path / "bounds.yaml"
    path.write_text("bounds:\n  associativity_max_prime: 3\n")
    code, out, _ = output(capsys, ["verify", "-p", "5", "--config", str(path)])
    assert (code, out) == (0, "PASS (7 axiom groups; skipped: associativity)")


def test_census_explicit_triple(capsys):
    code, out, _ = output(capsys, ["census", "-p", "5", "--triple", "1:0,0:1,1:1", "--to", "0:1,1:0,1:2"])
    assert (code, out) == (0, "1")


def test_census_sampling_is_deterministic(capsys):
    first = output(capsys, ["census", "-p", "5", "--seed", "3", "--samples", "2"])
    second = output(capsys, ["census", "-p", "5", "--seed", "3", "--samples", "2"])
    assert first == second
    assert [line.rsplit(": ", 1)[1] for line in first[1].splitlines()] == ["1", "1"]


def test_census_needs_both_triples(capsys):
    code, _, err = output(capsys, ["census", "-p", "5", "--triple", "1:0,0:1,1:1"])
    assert code == 2
    assert err.startswith("UsageError:")


def test_affine_midpoint(capsys):
    code, out, _ = output(capsys, ["affine", "-p", "5", "--puncture", "0:1", "--combine", "3:1:1,3:1:3"])
    assert (code, out) == (0, "1:2")


def test_affine_weights_must_sum_to_one(capsys):
    code, _, err = output(capsys, ["affine", "-p", "5", "--puncture", "0:1", "--combine", "1:1:1,1:1:3"])
    assert code == 1
    assert err.startswith("WeightsNotAffine:")


def test_vector_operations(capsys):
    add = ["vec", "-p", "5", "--puncture", "0:1", "--zero", "1:0", "--add", "1:2", "1:2"]
    assert output(capsys, add)[:2] == (0, "1:4")
    scale = ["vec", "-p", "7", "--puncture", "0:1", "--zero", "1:0", "--scale", "2", "1:3"]
    assert output(capsys, scale)[:2] == (0, "1:6")


def test_cocycle(capsys):
    code, out, _ = output(capsys, ["cocycle", "-p", "5", "--base", "0:1", "--from", "1:0,1:1", "--to", "1:0,1:1"])
    assert (code, out) == (0, "t=0 s=1")


def test_gf3_demo(capsys):
    code, out, _ = output(capsys, ["gf3-demo", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["unique"] is True
    assert doc["passing"] == 1
    assert doc["projectivities"] == 24
    assert doc["pgl_order"] == 24


def test_usage_errors_exit_two(capsys):
    assert output(capsys, [])[0] == 2
    assert output(capsys, ["crossratio", "-p", "5", "0:1"])[0] == 2
    assert output(capsys, ["pgl", "--rational"])[0] == 2
    code, _, err = output(capsys, ["crossratio", "0:1", "1:0", "1:1", "1:3"])
    assert code == 2
    assert err.startswith("UsageError:")


def test_non_prime_modulus(capsys):
    code, _, err = output(capsys, ["crossratio", "-p", "4", "0:1", "1:0", "1:1", "1:3"])
    assert code == 1
    assert err.startswith("NotPrime:")


def test_bounds_come_from_the_config(capsys, tmp_path):
    path = tmp_path / "bounds.yaml"
    path.write_text("bounds:\n  pgl_max_prime: 3\n")
    code, _, err = output(capsys, ["pgl", "-p", "5", "--config", str(path)])
    assert code == 1
    assert err.startswith("BoundExceeded:")


def test_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "typo.yaml"
    path.write_text("bounds:\n  pgl_max_prim: 3\n")
    with pytest.raises(KeyError):
        load_config(str(path))
    assert load_config({"verify": {"early_exit": True}})["verify"]["early_exit"] is True


def test_log_file(capsys, tmp_path):
    log = tmp_path / "run.log"
    out = tmp_path / "model3.json"
    assert run(["build-model", "-p", "3", "-o", str(out), "--verbose", "--log-file", str(log)]) == 0
    assert f"INFO | Wrote {out}" in log.read_text()
