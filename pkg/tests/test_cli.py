import json
import subprocess
import sys

import pytest

from sadkit.catalog import S4_ARCS
from sadkit.cli import main
from sadkit.digraph import MultiDigraph
from sadkit.generate import GeneratorConfig, generate
from sadkit.io import emit_edge_list


@pytest.fixture
def files(tmp_path):
    s4 = tmp_path / "s4.edges"
    s4.write_text(emit_edge_list(MultiDigraph(range(4), S4_ARCS)))
    g = tmp_path / "g.edges"
    g.write_text(emit_edge_list(generate(GeneratorConfig(2, 5, 0.4, 7, max_arcs=None))))
    return tmp_path, s4, g


def test_decompose_s4_reports_exception(files, capsys):
    _, s4, _ = files
    assert main(["decompose", str(s4)]) == 3
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "exception" and payload["catalog_id"] == "S4"


def test_decompose_then_verify(files, capsys):
    tmp, _, g = files
    assert main(["decompose", str(g), "--trace"]) == 0
    captured = capsys.readouterr()
    assert "route:" in captured.err
    cert = tmp / "good.json"
    cert.write_text(captured.out)
    assert main(["verify", str(g), str(cert)]) == 0
    merged = json.loads(captured.out)
    merged["classes"] = [merged["classes"][0] + merged["classes"][1], []]
    cert.write_text(json.dumps(merged))
    assert main(["verify", str(g), str(cert)]) == 2


def test_verify_rejects_broken_class(files):
    tmp, _, g = files
    cert = tmp / "bad.json"
    cert.write_text(json.dumps({"kind": "decomposition", "classes": [[], []]}))
    assert main(["verify", str(g), str(cert)]) == 2


def test_exception_certificate_verifies(files, capsys):
    tmp, s4, _ = files
    main(["decompose", str(s4)])
    cert = tmp / "s4.json"
    cert.write_text(capsys.readouterr().out)
    assert main(["verify", str(s4), str(cert)]) == 3


@pytest.mark.parametrize("fmt", ["dot", "edges", "json"])
def test_formats(files, capsys, fmt):
    _, _, g = files
    assert main(["decompose", str(g), "--format", fmt]) == 0
    out = capsys.readouterr().out
    if fmt == "dot":
        assert out.startswith("digraph")
    elif fmt == "edges":
        assert "# class 1" in out and "# class 2" in out


def test_oracle_and_budget(files, capsys):
    _, s4, g = files
    assert main(["oracle", str(s4)]) == 3
    assert main(["oracle", str(g), "--budget", "5"]) == 2
    assert main(["oracle", str(g), "--budget", "40"]) == 0


def test_nice_decomp(files, capsys, tmp_path):
    _, s4, _ = files
    assert main(["nice-decomp", str(s4)]) == 0
    assert capsys.readouterr().out.strip() == "U1: 1 2 3 4"
    cyc = tmp_path / "c.edges"
    cyc.write_text("3\n1 2\n2 3\n3 1\n")
    assert main(["nice-decomp", str(cyc)]) == 2


def test_gen_is_deterministic(capsys):
    assert main(["gen", "--v1", "2", "--v2", "5", "--seed", "11"]) == 0
    first = capsys.readouterr().out
    main(["gen", "--v1", "2", "--v2", "5", "--seed", "11"])
    assert capsys.readouterr().out == first
    assert first.splitlines()[1].startswith("v1 ")


def test_catalog_emits_files(tmp_path, capsys):
    assert main(["catalog", "--emit-dir", str(tmp_path / "cat")]) == 0
    listed = capsys.readouterr().out.splitlines()
    assert len(listed) == len({ln.split()[0] for ln in listed})
    assert len(list((tmp_path / "cat").glob("*.edges"))) == len(listed)


def test_enumerate_four(capsys):
    assert main(["enumerate", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert "without strong arc decomposition: 6" in out and "class S4" in out


def test_usage_and_input_errors(tmp_path, capsys):
    assert main([]) == 1
    assert main(["decompose"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["decompose", str(tmp_path / "missing.edges")]) == 2
    bad = tmp_path / "bad.edges"
    bad.write_text("3\n1 1\n")
    assert main(["decompose", str(bad)]) == 2
    weak = tmp_path / "weak.edges"
    weak.write_text("3\n1 2\n2 3\n3 1\n")
    assert main(["decompose", str(weak)]) == 2


def test_internal_failure_exit_code(files, monkeypatch, capsys):
    from sadkit import cli
    from sadkit.errors import InternalInvariantFailure

    def boom(s):
        raise InternalInvariantFailure("forced")

    monkeypatch.setattr(cli, "solve_split", boom)
    _, _, g = files
    assert main(["decompose", str(g)]) == 4
    assert "forced" in capsys.readouterr().err


def test_console_script_runs(files):
    _, s4, _ = files
    r = subprocess.run([sys.executable, "-m", "sadkit", "decompose", str(s4)], capture_output=True, text=True)
    assert r.returncode == 3
