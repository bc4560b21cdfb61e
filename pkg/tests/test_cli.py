import json
import subprocess
import sys

import pytest

from ratsurf import fixtures as fx
from ratsurf.cli import run
from ratsurf.config import CurveConfig
from ratsurf.construction import ConstructedSurface


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.delenv("RATSURF_OUTPUT_DIR", raising=False)
    return tmp_path


def read(path):
    return json.loads(path.read_text())


def test_construct_e8_writes_surface_and_report(out, capsys):
    code = run(["construct", "e8", "--a", "0", "--b", "1", "--n", "2", "--out", str(out / "s.json"), "--report", str(out / "r.json")])
    assert code == 0
    s = ConstructedSurface.from_json(read(out / "s.json"))
    assert s.kind == "E_affine(8)"
    assert read(out / "r.json")["failed"] == ["h0_antiK_one"]
    assert "affine_dynkin" in capsys.readouterr().out


def test_construct_from_seed_with_twist(out):
    assert run(["construct", "--seed", str(fx.fixture_path("d8_seed.json")), "--twist-q", "1", "--n", "1", "--with-report", "--out", str(out / "d.json")]) == 0
    data = read(out / "d.json")
    assert data["surface"]["kind"] == "D_affine(8)"
    assert data["report"]["overall"] is True


def test_twist_then_verify(out, capsys):
    src = fx.fixture_path("untwisted_e8.json")
    assert run(["verify", "--surface", str(src), "--n", "1"]) == 1
    assert run(["twist", "--surface", str(src), "--q", "2", "--out", str(out / "t.json")]) == 0
    assert run(["verify", "--surface", str(out / "t.json"), "--n", "1", "--json"]) == 0
    lines = capsys.readouterr().out
    assert '"overall": true' in lines


def test_verify_config_controls(capsys):
    assert run(["verify", "--config", str(fx.fixture_path("first_kind.json"))]) == 1
    assert "no_first_kind_exceptional" in capsys.readouterr().out
    assert run(["verify", "--surface", str(fx.fixture_path("cycle9.json")), "--n", "1", "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["failed"] == ["affine_dynkin"]


def test_classify_and_dot(out, capsys):
    assert run(["classify", "--config", str(fx.fixture_path("twisted_e8.json")), "--dot", str(out / "g.dot")]) == 0
    assert capsys.readouterr().out.startswith("E_affine(8) marks=")
    dot = (out / "g.dot").read_text()
    assert dot.startswith("graph")
    assert run(["classify", "--config", str(fx.fixture_path("cycle9.json")), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"]["kind"] == "A_affine(8)"


def test_export_dot_stdout(capsys):
    assert run(["export-dot", "--config", str(fx.fixture_path("first_kind.json"))]) == 0
    assert "--" in capsys.readouterr().out


def test_zariski(out, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(CurveConfig.from_gram([[-2, 1], [1, -2]]).to_json()))
    assert run(["zariski", "--config", str(cfg), "--d", "1 0", "--out", str(out / "z.json")]) == 0
    z = read(out / "z.json")
    assert z == {"P": ["0", "0"], "N": ["1", "0"], "support": ["C1"]}
    assert run(["zariski", "--config", str(cfg)]) == 2  # no multiplicities, no --d


def test_resolve_seed(out):
    assert run(["resolve", "--seed", str(fx.fixture_path("e8_seed.json")), "--out", str(out / "p.json")]) == 0
    data = read(out / "p.json")
    assert len(data["tower"]) == 9
    assert data["verdict"]["kind"] == "E_affine(8)"
    assert run(["resolve", "--F", "x", "--G", "y", "--out", str(out / "q.json")]) == 0
    assert len(read(out / "q.json")["tower"]) == 1


def test_sweep(out):
    src = str(fx.fixture_path("untwisted_e8.json"))
    assert run(["sweep", "--surface", src, "--q", "1", "2", "3", "--n", "1", "--out", str(out / "w.json")]) == 0
    summary = read(out / "w.json")["summary"]
    assert summary["isomorphism"] == "undecided"
    assert summary["fingerprints_identical"]


def test_output_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("RATSURF_OUTPUT_DIR", str(tmp_path))
    assert run(["export-dot", "--config", str(fx.fixture_path("first_kind.json")), "--out", "sub/g.dot"]) == 0
    assert (tmp_path / "sub" / "g.dot").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "e8", "--a", "-3", "--b", "2"],  # singular cubic
        ["construct", "d8", "--m", "0,0,0"],
        ["construct", "e8", "--a", "x"],
        ["construct"],
        ["twist", "--surface", "/nonexistent.json", "--q", "1"],
        ["resolve", "--F", "x", "--G", "x^2"],
        ["resolve", "--F", "x"],
        ["nonsense"],
        ["verify"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_forbidden_twist_exit_2():
    assert run(["twist", "--surface", str(fx.fixture_path("untwisted_e8.json")), "--q", "0"]) == 2


def test_malformed_json_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", "--config", str(bad)]) == 2
    bad.write_text("[1, 2]")
    assert run(["verify", "--config", str(bad)]) == 2
    bad.write_text('{"gram": "oops"}')
    assert run(["verify", "--config", str(bad)]) == 2


def test_console_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "ratsurf.cli", "classify", "--config", str(fx.fixture_path("first_kind.json"))],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0
    assert r.stdout.strip()
