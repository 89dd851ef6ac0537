import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from ffgs import fixtures as fx
from ffgs.cli import run
from ffgs.hopf import factor_morphism, kernel_subgroup
from ffgs.serialize import algebra_from_json, parse_document

GOLDEN = Path(__file__).resolve().parent / "golden"
INPUTS = GOLDEN / "inputs"
COMMANDS = json.loads((GOLDEN / "commands.json").read_text())


def cli(*args):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in args], stdout=out, stderr=err)
    return code, json.loads(out.getvalue()), err.getvalue()


@pytest.mark.parametrize("entry", COMMANDS, ids=lambda e: e["name"])
def test_golden_reports(entry, tmp_path, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    texts = []
    for run_dir in ("one", "two"):
        out_dir = tmp_path / run_dir
        args = [a.replace("{out}", str(out_dir)) for a in entry["args"]] + ["--json-only"]
        buf, err = io.StringIO(), io.StringIO()
        assert run(args, stdout=buf, stderr=err) == entry["exit"]
        assert err.getvalue() == ""
        files = sorted((p.relative_to(out_dir).as_posix(), p.read_bytes())
                       for p in out_dir.rglob("*") if p.is_file()) if out_dir.exists() else []
        texts.append((buf.getvalue(), files))
    assert texts[0] == texts[1]
    assert texts[0][0] == (GOLDEN / "expected" / f"{entry['name']}.json").read_text()


def test_exit_codes_and_summary_line():
    code, rep, err = cli("check", "hopf", INPUTS / "mu4.json")
    assert code == 0 and rep["status"] == "ok" and err.strip()
    code, rep, _ = cli("check", "hopf", INPUTS / "not_hopf.json")
    assert code == 1 and rep["status"] == "failed"
    code, rep, _ = cli("check", "hopf", INPUTS / "bad_ring.json")
    assert code == 2 and rep["error"]["pointer"] == "/base/ring"
    code, rep, _ = cli("frobnicate")
    assert code == 2 and rep["error"]["type"] == "SchemaError"


def test_timing_only_when_requested():
    _, rep, _ = cli("check", "hopf", INPUTS / "mu4.json", "--json-only")
    assert "timing" not in rep
    _, rep, _ = cli("check", "hopf", INPUTS / "mu4.json", "--json-only", "--timing")
    assert rep["timing"]["seconds"] >= 0


def test_factor_output_matches_library(tmp_path):
    code, rep, _ = cli("factor", INPUTS / "sq-mu4.json", "--out", tmp_path, "--json-only")
    assert code == 0
    f = parse_document(INPUTS / "sq-mu4.json", "morphism")
    s, i, middle = factor_morphism(f)
    assert algebra_from_json(json.loads((tmp_path / "middle.json").read_text())) == middle
    assert parse_document(tmp_path / "dominant.json", "morphism").matrix == s.matrix
    assert parse_document(tmp_path / "immersion.json", "morphism").matrix == i.matrix
    assert rep["result"]["middle_rank"] == middle.rank


def test_kernel_output_matches_library(tmp_path):
    code, rep, _ = cli("kernel", INPUTS / "mu4-to-mu2.json", "--out", tmp_path, "--json-only")
    assert code == 0
    k = kernel_subgroup(parse_document(INPUTS / "mu4-to-mu2.json", "morphism"))
    written = [p for p in rep["written"] if p.endswith(".json")]
    algebras = [algebra_from_json(json.loads((tmp_path / p).read_text())) for p in written
                if "mult" in json.loads((tmp_path / p).read_text())]
    assert k.algebra in algebras


def test_fixture_export_manifest(tmp_path):
    code, rep, _ = cli("fixtures", "export", tmp_path, "--json-only")
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["count"] == len(manifest["fixtures"]) == len(fx.catalog()) == rep["result"]["count"]
    kinds = {"hopf": "hopf", "morphism": "morphism", "triple": "triple"}
    for e in manifest["fixtures"]:
        obj = parse_document(tmp_path / e["file"], kinds[e["kind"]])
        assert obj.verify().ok, e["name"]
        if e["kind"] != "morphism":
            assert obj.rank == e["expected_rank"]


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "ffgs", "fixtures", "list", "--json-only"],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0
    assert json.loads(p.stdout)["result"]["count"] == len(fx.catalog())


def test_fixture_export_is_byte_identical(tmp_path):
    from ffgs.cli import fixtures_export
    fixtures_export(tmp_path / "a")
    fixtures_export(tmp_path / "b")
    a = {p.relative_to(tmp_path / "a"): p.read_bytes() for p in (tmp_path / "a").rglob("*") if p.is_file()}
    b = {p.relative_to(tmp_path / "b"): p.read_bytes() for p in (tmp_path / "b").rglob("*") if p.is_file()}
    assert a == b and len(a) > len(fx.catalog())
