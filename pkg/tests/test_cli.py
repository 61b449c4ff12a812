from __future__ import annotations

import dataclasses
import re

from bigtg import FeatureConfig, encode, fileio
from bigtg.cli import main

DIAG_LINE = re.compile(r"^(error|warning) \S+ \S+ .+$")


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def fx(fixtures_dir, name: str) -> str:
    return str(fixtures_dir / name)


def test_metamodel(fixtures_dir, tmp_path, capsys, tg_sigma1):
    out = tmp_path / "out.tg.json"
    code, _, _ = run(capsys, "metamodel", fx(fixtures_dir, "printer.sig.json"), "-o", str(out))
    assert code == 0
    assert fileio.load_type_graph(str(out)) == tg_sigma1
    assert out.read_bytes() == (fixtures_dir / "printer.tg.json").read_bytes()


def test_encode_then_validate(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "printer.ig.json"
    code, _, _ = run(capsys, "encode", fx(fixtures_dir, "printer.bg.json"), "-o", str(out))
    assert code == 0
    assert out.read_bytes() == (fixtures_dir / "printer.ig.json").read_bytes()
    code, _, err = run(
        capsys, "validate", str(out), "--sig", fx(fixtures_dir, "printer.sig.json")
    )
    assert code == 0 and err == ""


def test_decode_restores_bigraph(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "printer.bg.json"
    code, _, _ = run(
        capsys,
        "decode",
        fx(fixtures_dir, "printer.ig.json"),
        "--sig",
        fx(fixtures_dir, "printer.sig.json"),
        "-o",
        str(out),
    )
    assert code == 0
    assert out.read_bytes() == (fixtures_dir / "printer.bg.json").read_bytes()


def test_validate_bad_bigraph_diagnostics(fixtures_dir, capsys):
    code, _, err = run(capsys, "validate", fx(fixtures_dir, "corpus/bad.bg.json"))
    assert code == 1
    lines = [line for line in err.splitlines() if line]
    assert lines
    assert all(DIAG_LINE.match(line) for line in lines)
    assert any("parent-cycle" in line for line in lines)


def test_validate_needs_tg_or_sig_for_instance(fixtures_dir, capsys):
    code, _, err = run(capsys, "validate", fx(fixtures_dir, "printer.ig.json"))
    assert code == 2
    assert "--tg or --sig" in err


def test_validate_with_tg(fixtures_dir, capsys):
    code, _, _ = run(
        capsys, "validate", fx(fixtures_dir, "printer.ig.json"), "--tg", fx(fixtures_dir, "printer.tg.json")
    )
    assert code == 0


def test_validate_typegraph_and_signature_kinds(fixtures_dir, capsys):
    assert run(capsys, "validate", fx(fixtures_dir, "printer.tg.json"))[0] == 0
    assert run(capsys, "validate", fx(fixtures_dir, "printer.sig.json"))[0] == 0


def test_configure_emits_both_artifacts(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "weak.ig.json"
    code, _, _ = run(
        capsys,
        "configure",
        fx(fixtures_dir, "printer.ig.json"),
        "--sig",
        fx(fixtures_dir, "printer.sig.json"),
        "--features",
        fx(fixtures_dir, "weak.cfg.json"),
        "-o",
        str(out),
    )
    assert code == 0
    configured = fileio.load_instance_graph(str(out))
    derived = fileio.load_type_graph(str(tmp_path / "weak.tg.json"))
    assert "Spool" not in derived.graph.nodes
    assert all(t != "Spool" for t in configured.node_types.values())
    # The configured instance validates against the emitted type graph.
    code, _, _ = run(capsys, "validate", str(out), "--tg", str(tmp_path / "weak.tg.json"))
    assert code == 0


def test_check_passes_on_printer(fixtures_dir, capsys):
    code, _, err = run(
        capsys,
        "check",
        fx(fixtures_dir, "printer.ig.json"),
        "--tg",
        fx(fixtures_dir, "printer.tg.json"),
        "--constraints",
        fx(fixtures_dir, "office.bgc"),
    )
    assert code == 0 and err == ""


def test_check_reports_violated_invariant(fixtures_dir, tmp_path, capsys, b1):
    moved = dataclasses.replace(b1, prnt={**b1.prnt, "v5": "v3"})
    g, _ = encode(moved)
    ig = tmp_path / "moved.ig.json"
    fileio.save(g, str(ig))
    code, _, err = run(
        capsys,
        "check",
        str(ig),
        "--tg",
        fx(fixtures_dir, "printer.tg.json"),
        "--constraints",
        fx(fixtures_dir, "office.bgc"),
    )
    assert code == 1
    assert "iv1" in err


def test_configs_prints_54_lines(capsys):
    code, out, _ = run(capsys, "configs")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 54
    assert len(set(lines)) == 54
    assert "WT" in lines  # the all-optionals-off weak variant


def test_schema_error_exit_code(fixtures_dir, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"formatVersion": "1.0", "kind": "bigraph", "payload": {}}')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "schema" in err


def test_usage_error_exit_code(capsys):
    assert main(["no-such-command"]) == 2


def test_decode_non_canonical_exit_code(fixtures_dir, tmp_path, capsys, g1):
    import helpers

    broken = helpers.drop_edge(g1, helpers.edges_of_type(g1, "bChld")[0])
    ig = tmp_path / "broken.ig.json"
    fileio.save(broken, str(ig))
    code, _, err = run(
        capsys,
        "decode",
        str(ig),
        "--sig",
        fx(fixtures_dir, "printer.sig.json"),
        "-o",
        str(tmp_path / "out.json"),
    )
    assert code == 1
    assert "not-canonical" in err


def test_configure_rejects_invalid_config(fixtures_dir, tmp_path, capsys):
    cfg = tmp_path / "bad.cfg.json"
    fileio.save(FeatureConfig(frozenset({"ST", "WT"})), str(cfg))
    code, _, err = run(
        capsys,
        "configure",
        fx(fixtures_dir, "printer.ig.json"),
        "--sig",
        fx(fixtures_dir, "printer.sig.json"),
        "--features",
        str(cfg),
        "-o",
        str(tmp_path / "out.ig.json"),
    )
    assert code == 1
    assert "cfg-alternative" in err
