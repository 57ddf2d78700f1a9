import csv
import json
import os

import pytest

from xrank.cli import ConfigError, RunConfig, emit_report, parse_config
from xrank.verify import VERIFIERS, verify_p2_0

DIV = "[inf0:2,(0,0):1,(1,0):1,(2,0):1,(3,25):1]"


# -- configuration -------------------------------------------------------------------


def test_config_roundtrip():
    cfg = RunConfig(field="Fp2:61", seed=7, divisor=DIV, rmax=4)
    assert parse_config(cfg.fmt()) == cfg


def test_config_defaults():
    cfg = parse_config("# only a comment\nf = x^5-5*x^3+4*x\n")
    assert cfg.p == 101 and cfg.seed == 0 and cfg.field == "Fp:101"
    assert parse_config("p=61").field == "Fp:61"


@pytest.mark.parametrize("text, where", [
    ("p = 100", "not prime"),
    ("seed = x", "1:8"),
    ("\n  bogus = 1", "2:3"),
    ("field=Fp:61\np=101", "conflicts"),
    ("novalue", "1:1"),
    ("field=Fp:7", "23"),
])
def test_config_errors(text, where):
    with pytest.raises(ConfigError) as exc:
        parse_config(text, "cfg")
    assert where in str(exc.value)


# -- exit codes --------------------------------------------------------------------


def test_exit_codes(cli, tmp_path):
    assert cli(["sylvester", "--form", "x^2*y"])[0] == 0
    code, out, _ = cli(["sylvester", "--form", "x^2*y"])
    d = json.loads(out)
    assert (d["border_rank"], d["rank"]) == (2, 3)
    assert cli(["frobnicate"])[0] == 2
    assert cli([])[0] == 2
    assert cli(["rank", "--p", "100", "--divisor", DIV, "--point", "(0,0)"])[0] == 2
    assert cli(["rank", "--divisor", DIV])[0] == 2
    assert cli(["rank", "--divisor", DIV, "--point", "(0,0)"])[0] == 0
    assert cli(["embed", "--divisor", DIV])[0] == 0
    assert cli(["stratum", "--divisor", DIV, "--point", "(3,25)"])[0] == 0
    assert cli(["tangent", "--divisor", DIV])[0] == 2
    assert cli(["verify", "nope", "--out", str(tmp_path)])[0] == 2
    assert cli(["replay", str(tmp_path / "missing.json")])[0] == 1


def test_rank_not_found_is_inconclusive(cli):
    # rmax 1 cannot reach a point off the curve
    assert cli(["rank", "--divisor", DIV, "--point", "(1:0:0:0:1)", "--rmax", "1"])[0] == 3


def test_verify_and_replay(cli, tmp_path):
    code, out, _ = cli(["verify", "p2_0", "--out", str(tmp_path)])
    assert code == 0
    path = json.loads(out)["file"]
    assert cli(["replay", path])[0] == 0
    d = json.load(open(path))
    d["counts"]["rank3_points"] = 7
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    assert cli(["replay", str(bad)])[0] == 1


def test_failing_verifier_exits_one(cli, tmp_path):
    assert cli(["verify", "p3", "--O", "(0,0)", "--out", str(tmp_path)])[0] == 1


def test_tampered_certificate(cli, tmp_path):
    code, out, _ = cli(["rank", "--divisor", DIV, "--point", "(0,0)"])
    cert = json.loads(out)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cert))
    assert cli(["replay", str(p)])[0] == 0
    cert["witness"] = ["(1,0)"]
    p.write_text(json.dumps(cert))
    assert cli(["replay", str(p)])[0] == 1


# -- emitted files -------------------------------------------------------------------


def test_emit_report_idempotent(tmp_path):
    rep = verify_p2_0(p=101)
    a = emit_report(rep, tmp_path / "a")
    b = emit_report(verify_p2_0(p=101), tmp_path / "b")
    assert os.path.basename(a) == os.path.basename(b)
    assert open(a, "rb").read() == open(b, "rb").read()
    h = json.load(open(a))["replay_hash"]
    assert os.path.basename(a) == f"p2_0-na-{h}.json"


@pytest.mark.slow
def test_suite_files(suite_runs):
    code, out, d = suite_runs[0]
    files = sorted(f for f in os.listdir(d) if f.endswith(".json"))
    assert len(files) == len(VERIFIERS) == 7
    rows = list(csv.DictReader(open(d / "summary.csv")))
    assert len(rows) == 7 and {r["id"] for r in rows} == set(VERIFIERS)
    assert len(out.strip().splitlines()) == 7
