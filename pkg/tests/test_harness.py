import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from addcomb import canonical
from addcomb.cli import main
from addcomb.errors import ValidationError
from addcomb.harness import SUITES, run_suite
from addcomb.harness.config import SuiteConfig, load_config, parse_config, resolve_sets
from addcomb.harness.report import Report, digest, emit, from_json, relative_margin, to_csv, to_json
from addcomb.varieties import parabola

from conftest import grp

REQUIRED = ["energy-cs", "tk-product", "gowers-identities", "gowers-chain", "scalar-chain",
            "exponents", "variety-energy", "subset-energy", "tk-growth", "max-subgroup",
            "conjugacy", "chevalley", "equidist", "bohr", "restriction"]


# -- canonical JSON --------------------------------------------------------------


def test_canonical_values():
    text = canonical.dumps({"b": 1, "a": [0.1, Fraction(1, 3), np.int64(7), math.inf, 2 ** 70]},
                           indent=None)
    assert text == '{"b": 1, "a": [0.10000000000000001, "1/3", 7, "Infinity", 1180591620717411303424]}'
    assert canonical.dumps({}) == "{}"


def test_canonical_round_trip():
    obj = {"x": [1.5, -2.25e-300, 3e20, {"y": None, "z": True}], "w": "é", "v": 1 / 3}
    text = canonical.dumps(obj)
    assert canonical.dumps(canonical.loads(text)) == text


# -- config ---------------------------------------------------------------------


def test_config_parsing(tmp_path):
    cfg = SuiteConfig.from_dict({"suite": "energy-cs", "seed": 3, "params": {"count": 5}})
    assert SuiteConfig.from_dict(cfg.to_dict()) == cfg
    many = parse_config({"schema": "addcomb-config/1", "suites": [{"suite": "bohr"}, {"suite": "exponents"}]})
    assert [c.suite for c in many] == ["bohr", "exponents"]
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"suite": "exponents"}))
    assert load_config(path)[0].suite == "exponents"
    path.write_text("{nope")
    with pytest.raises(ValidationError):
        load_config(path)


@pytest.mark.parametrize("bad", [
    {"seed": 1},
    {"suite": "x", "unknown": 1},
    {"suite": "x", "schema": "other/9"},
    {"suite": "x", "seed": "one"},
    {"suite": "x", "group": {"kind": "SL2", "p": 6}},
    {"suite": "x", "sets": {"type": "random", "density": 0.1}},
    {"suite": "x", "sets": {"type": "random", "density": 0.1, "size": 3, "seed": 1}},
    {"suite": "x", "sets": {"type": "coset", "gens": [[1]]}},
    {"suite": "x", "sets": {"type": "mystery"}},
])
def test_config_rejects(bad):
    with pytest.raises(ValidationError):
        SuiteConfig.from_dict(bad)


def test_set_specs():
    G = grp("symmetric", n=3)
    [A] = resolve_sets({"type": "explicit", "elements": [[0, 1, 2], [1, 0, 2]]}, G)
    assert len(A) == 2
    [C] = resolve_sets({"type": "conjugacy-class", "element": [1, 0, 2]}, G)
    assert len(C) == 3
    [H] = resolve_sets({"type": "subgroup", "gens": [[1, 2, 0]]}, G)
    assert len(H) == 3
    [xH] = resolve_sets({"type": "coset", "x": [1, 0, 2], "gens": [[1, 2, 0]]}, G)
    assert len(xH) == 3 and not (xH & H).tolist()
    sets = resolve_sets({"type": "random", "size": 2, "count": 4, "seed": 9}, G)
    assert len(sets) == 4 and all(len(s) == 2 for s in sets)
    again = resolve_sets({"type": "random", "size": 2, "count": 4, "seed": 9}, G)
    assert [s.tolist() for s in sets] == [s.tolist() for s in again]
    V = parabola(5)
    [P] = resolve_sets({"type": "variety-points"}, V.group, V.points)
    assert P == V.points
    inside = resolve_sets({"type": "random", "density": 0.6, "seed": 1, "within": "variety"}, V.group, V.points)
    assert inside[0] <= V.points


# -- reports ---------------------------------------------------------------------


def test_relative_margin():
    assert relative_margin(3, 4, "<=") == pytest.approx(0.25)
    assert relative_margin(5, 4, "<=") < 0
    assert relative_margin(4, 4, "==") == 0.0
    assert relative_margin(1.0, 1.0 + 1e-9, "~=", 1e-8) > 0
    assert relative_margin(None, 1, "<=") is None


def test_empty_report_round_trip():
    rep = Report("empty", "nothing", "exact")
    text = to_json(rep)
    data = json.loads(text)
    assert data["instances"] == [] and data["summary"]["pass_count"] == 0
    assert to_json(from_json(text)) == text


def test_report_round_trip_and_order():
    rep = Report("demo", "a <= b", "exact")
    for i in range(20):
        rep.add(f"i{i}", {"i": i}, lhs=i, rhs=10, relation="<=", ok=i <= 10)
    rep.add("na", {"i": -1}, reason="resolution")
    s = rep.summary()
    assert (s["pass_count"], s["fail_count"], s["na_count"]) == (11, 9, 1)
    text = to_json(rep)
    assert to_json(from_json(text)) == text
    digests = [i["digest"] for i in json.loads(text)["instances"]]
    assert digests == sorted(digests)
    assert rep.instances[0].digest == digest({"suite": "demo", "label": "i0", "inputs": {"i": 0}})
    lines = to_csv(rep).splitlines()
    assert lines[0].startswith("suite,digest,label,status") and len(lines) == 22
    with pytest.raises(ValueError):
        emit(rep, "xml")


# -- suites -----------------------------------------------------------------------


def test_registry_is_complete():
    for name in REQUIRED:
        assert name in SUITES


def test_suite_examples():
    rep = run_suite(SuiteConfig("energy-cs"))
    assert rep.pass_count == 200 and rep.fail_count == 0
    rep = run_suite(SuiteConfig("t2-equals-e", group={"kind": "dihedral", "n": 4}))
    assert rep.fail_count == 0 and rep.pass_count > 0
    rep = run_suite(SuiteConfig("variety-profile", variety={"stock": "parabola", "p": 7}, params={"primes": [7]}))
    by = {i.label.split("/")[-1]: i for i in rep.instances}
    assert by["t"].lhs == 1 and by["energy-closed-form"].lhs == 91 and rep.fail_count == 0


def test_determinism_and_seed_override():
    cfg = SuiteConfig("energy-cs", seed=4, params={"count": 10})
    a, b = to_json(run_suite(cfg)), to_json(run_suite(cfg))
    assert a == b
    c = to_json(run_suite(cfg, seed=5))
    assert c != a and json.loads(c)["provenance"]["seed"] == 5


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite(SuiteConfig("nope"))


def test_capacity_becomes_na(monkeypatch):
    monkeypatch.setenv("ADDCOMB_WORK_CAP", "100000")
    rep = run_suite(SuiteConfig("gowers-identities", params={"count": 2, "groups": [{"kind": "cyclic", "n": 101}]}))
    assert rep.fail_count == 0 and rep.na_count > 0
    assert all("capacity" in i.reason for i in rep.instances if i.status == "NA")


def test_restriction_csv_golden():
    cfg = SuiteConfig("restriction", params={"identity_count": 2, "trend_primes": [5, 7], "budget": 20})
    csv_text = to_csv(run_suite(cfg))
    golden = (Path(__file__).parent / "golden" / "restriction_trend.csv").read_text()
    assert csv_text == golden


# -- CLI --------------------------------------------------------------------------


def test_cli_list_and_describe(capsys):
    assert main(["list"]) == 0
    assert "energy-cs" in capsys.readouterr().out
    assert main(["describe", "bohr"]) == 0
    assert json.loads(capsys.readouterr().out)["suite"] == "bohr"


def test_cli_run_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "exponents", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["fail_count"] == 0
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"suite": "variety-profile", "params": {"primes": [5], "expect": {"size": 4}}}))
    assert main(["run", "variety-profile", "--config", str(cfg), "--format", "csv"]) == 1
    assert "fail" in capsys.readouterr().out
    multi = tmp_path / "multi.json"
    multi.write_text(json.dumps({"suites": [{"suite": "exponents"}, {"suite": "energy-cs", "params": {"count": 3}}]}))
    outdir = tmp_path / "out"
    assert main(["all", "--config", str(multi), "--out", str(outdir), "--seed", "2"]) == 0
    assert sorted(p.name for p in outdir.iterdir()) == ["energy-cs.json", "exponents.json"]
    assert main(["run", "exponents", "--config", str(multi), "--format", "json"]) == 0
    missing = tmp_path / "m.json"
    missing.write_text(json.dumps({"suite": "bohr"}))
    assert main(["run", "exponents", "--config", str(missing)]) == 2
