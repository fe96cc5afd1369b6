import json
import os
import subprocess
import sys

from ghx import tables as T
from ghx.cli import main
from ghx.engine import SliceSpec
from ghx.tables import (
    load_reference,
    merkulov_homology,
    shade_forested_out,
    shading_mask,
)


def test_reference_files_load_and_spot_values():
    odd = load_reference("ordinary-odd")
    assert odd["table"]["rows"]["5"]["8"]["value"] == 2
    assert odd["table"]["chi_ref"]["6"] == 1
    f = load_reference("forested-neven")
    assert f["tables"]["h0"]["rows"]["4"]["4"]["value"] == 1
    ch = load_reference("chairy-neven")
    assert ch["tables"]["h4"]["rows"]["0"]["2"]["irreps"] == {"[2,2]": 1}


def test_render_contains_markers(engine):
    t = T.ordinary_table(engine, "odd", 4)
    text = t.render_text()
    assert "l\\v" in text
    assert "chi" in text
    csv_text = t.render_csv()
    assert csv_text.splitlines()[0].startswith("l,")


def test_shading_rules():
    mask = shading_mask("ordinary", 3, cols=range(3, 8))
    assert mask[4] is False and mask[5] is True and mask[7] is True
    mask = shading_mask("hairy", 3, hairs=1, cols=range(0, 8))
    assert mask[1] is True and mask[2] is False and mask[5] is False \
        and mask[6] is True
    # Out-stability shading for forested 0-hair rows: 5m < 4g-5
    assert shade_forested_out(4, 2)
    assert not shade_forested_out(4, 3)


def test_merkulov_homology_single_cell(engine):
    entry = merkulov_homology(engine, "odd", 4, 6)
    assert entry.numeric() == 1
    assert merkulov_homology(engine, "odd", 4, 3).value == "-"


def test_compare_with_reference_flags_mismatch(engine):
    table = T.ordinary_table(engine, "odd", 3)
    ref = json.loads(json.dumps(load_reference("ordinary-odd")))
    ref["table"]["rows"]["3"]["4"]["value"] = 7
    mism = T.compare_with_reference(table, ref)
    assert len(mism) == 1 and mism[0]["reference"] == 7


def run_cli(args, data_dir):
    return main(["--data-dir", data_dir] + args)


def test_cli_basis_matrix_rank_homology(tmp_path, capsys):
    d = str(tmp_path)
    assert run_cli(["basis", "--family", "ordinary", "--parity", "odd",
                    "-g", "3", "-v", "4"], d) == 0
    assert "dimension 1" in capsys.readouterr().out
    assert run_cli(["matrix", "--family", "ordinary", "--parity", "odd",
                    "-g", "3", "-v", "4", "--op", "d"], d) == 0
    assert "1" in capsys.readouterr().out
    assert run_cli(["rank", "--family", "ordinary", "--parity", "odd",
                    "-g", "3", "-v", "4", "--op", "d"], d) == 0
    assert "= 0" in capsys.readouterr().out
    assert run_cli(["homology", "--family", "ordinary", "--parity", "odd",
                    "-g", "3", "-v", "4"], d) == 0
    assert ": 1" in capsys.readouterr().out
    assert run_cli(["homology", "--family", "forested", "--parity", "even",
                    "-g", "2", "-m", "0"], d) == 0
    assert ": 1" in capsys.readouterr().out


def test_cli_table_with_compare_and_csv(tmp_path, capsys):
    d = str(tmp_path)
    csv_path = os.path.join(d, "t.csv")
    rc = run_cli(["table", "--family", "ordinary", "--parity", "odd",
                  "--max-loops", "4", "--csv", csv_path, "--compare"], d)
    out = capsys.readouterr().out
    assert rc == 0
    assert "0 mismatches" in out
    with open(csv_path) as f:
        assert f.read().startswith("l,")


def test_cli_shade(tmp_path, capsys):
    assert run_cli(["shade", "--family", "hairy", "-g", "3", "--hairs", "1"],
                   str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "known-vanishing" in out


def test_cli_check_reference_figure_1(tmp_path, capsys):
    rc = run_cli(["check", "reference", "--figure", "1", "--max-loops", "4"],
                 str(tmp_path))
    out = capsys.readouterr().out
    assert rc == 0 and "PASS" in out


def test_cli_check_d2(tmp_path, capsys):
    rc = run_cli(["check", "d2", "--max-loops", "4"], str(tmp_path))
    assert rc == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_parallel_jobs(tmp_path, capsys):
    rc = main(["--data-dir", str(tmp_path), "--jobs", "2", "table",
               "--family", "ordinary", "--parity", "even",
               "--max-loops", "4"])
    assert rc == 0


def test_warm_store_no_recompute(tmp_path, monkeypatch):
    """Re-running with a warm store must not regenerate artifacts."""
    from ghx.engine import Engine, Store
    from ghx.families import OrdinaryFamily, register_all

    d = str(tmp_path)
    eng = register_all(Engine(Store(d)))
    spec = SliceSpec("ordinary", "odd", 4, 6)
    eng.rank("d", spec)
    # a fresh engine over the same store must find everything on disk
    eng2 = register_all(Engine(Store(d)))
    monkeypatch.setattr(
        OrdinaryFamily, "generate",
        lambda *a, **k: (_ for _ in ()).throw(AssertionError("regenerated")))
    monkeypatch.setattr(
        OrdinaryFamily, "op_terms",
        lambda *a, **k: (_ for _ in ()).throw(AssertionError("rebuilt")))
    assert eng2.rank("d", spec).rank == 0


def test_console_script_installed():
    out = subprocess.run([sys.executable, "-m", "ghx.cli", "--help"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "table" in out.stdout
