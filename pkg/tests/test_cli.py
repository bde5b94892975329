"""Config parsing, batch runs, output files, and determinism."""

import filecmp

import numpy as np
import pytest

from wgrsim import cli
from wgrsim.errors import GeometryError, ParseError, ValidationError

SPECTRUM_CFG = """\
# minimal transmission sweep
mode = spectrum
xi1 = 0.1
omega_a1 = 0.01
omega_b1 = 0.01
omega_a2 = 0.01
omega_b2 = 0.01
L = 1
omega_min = -0.5
omega_max = 0.5
omega_count = 41
"""

EVOLVE_CFG = """\
mode = evolve
xi1 = 0.1
omega_a1 = 0.001
omega_b1 = -0.001
omega_a2 = 0.001
omega_b2 = -0.001
L = 4
breaking = inter
delta = 0.00075
n_side = 60
initial = antisym_w1
t_final = 30.0
samples = 16
snapshot_times = 0, 30
"""


def test_parse_minimal_spectrum():
    cfg = cli.parse_config(SPECTRUM_CFG)
    assert cfg.mode == "spectrum"
    p = cfg.params
    assert p.xi1 == 0.1
    assert p.mode_frequencies() == (0.01, 0.01, 0.01, 0.01)
    assert p.xi0 == 1.0 and p.omega_c == 0.0 and p.eta == 1e-6  # defaults
    assert cfg.omega_count == 41
    assert cfg.adaptive is False


def test_parse_rejections():
    with pytest.raises(ValidationError):
        cli.parse_config("")  # mode required
    with pytest.raises(ValidationError):
        cli.parse_config(SPECTRUM_CFG + "eta = 0\n")
    with pytest.raises(ValidationError):
        cli.parse_config(SPECTRUM_CFG.replace("omega_max = 0.5", "omega_max = 2.5"))
    with pytest.raises(ParseError) as ei:
        cli.parse_config(SPECTRUM_CFG + "tuning = 3\n")
    assert "tuning" in str(ei.value)
    with pytest.raises(ParseError) as ei:
        cli.parse_config(SPECTRUM_CFG + "xi1 = 0.2\n")
    assert "duplicate" in str(ei.value).lower()
    with pytest.raises(ParseError) as ei:
        cli.parse_config("mode = spectrum\njust some words\n")
    assert "line 2" in str(ei.value)
    with pytest.raises(ParseError):
        cli.parse_config(SPECTRUM_CFG.replace("L = 1", "L = one"))


def test_parse_requires_packet_parameters():
    text = EVOLVE_CFG.replace("initial = antisym_w1", "initial = packet")
    with pytest.raises(ValidationError):
        cli.parse_config(text)


def test_mode_subcommand_mismatch(tmp_path, capsys):
    f = tmp_path / "c.cfg"
    f.write_text(SPECTRUM_CFG)
    rc = cli.main(["evolve", "--config", str(f)])
    assert rc == 1
    assert "does not match" in capsys.readouterr().err


def test_spectrum_run_decoupled_column(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(SPECTRUM_CFG.replace("xi1 = 0.1", "xi1 = 0.0"))
    out = tmp_path / "base"
    assert cli.main(["spectrum", "--config", str(f), "--out", str(out)]) == 0
    rows = (tmp_path / "base_spectrum.csv").read_text().splitlines()
    assert rows[0] == "omega,T,rho_w,rho_between"
    assert len(rows) == 42
    for r in rows[1:]:
        assert float(r.split(",")[1]) == 1.0


def test_meta_echoes_every_parameter(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(SPECTRUM_CFG)
    out = tmp_path / "m"
    assert cli.main(["spectrum", "--config", str(f), "--out", str(out)]) == 0
    meta = (tmp_path / "m_meta.txt").read_text()
    for key in ("omega_c", "xi0", "xi1", "omega_a1", "omega_b1", "omega_a2",
                "omega_b2", "L", "delta", "breaking", "eta", "omega_min",
                "omega_max", "omega_count", "adaptive", "version", "mode"):
        assert key in meta, f"meta missing {key}"


def test_heatmap_band_edge_cell_is_explicit(tmp_path):
    text = (SPECTRUM_CFG.replace("mode = spectrum", "mode = heatmap")
            + "L_list = 0, 1\n")
    f = tmp_path / "c.cfg"
    f.write_text(text)
    out = tmp_path / "h"
    assert cli.main(["heatmap", "--config", str(f), "--out", str(out)]) == 0
    rows = (tmp_path / "h_heatmap.csv").read_text().splitlines()
    assert rows[0] == "omega,0,1"
    assert len(rows) == 42


def test_evolve_outputs(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(EVOLVE_CFG)
    out = tmp_path / "ev"
    assert cli.main(["evolve", "--config", str(f), "--out", str(out)]) == 0
    rows = (tmp_path / "ev_traj.csv").read_text().splitlines()
    assert rows[0] == ("t,left,right,between,occ_a1,occ_b1,occ_a2,occ_b2,"
                       "fidelity_occ,fidelity_eq35")
    assert len(rows) == 17
    for r in rows[1:]:
        vals = [float(x) for x in r.split(",")]
        assert vals[9] == pytest.approx(vals[8] / 4.0, abs=1e-300)
        # antisym_w1 transfer reads the second resonator
        assert vals[8] == pytest.approx(vals[6] + vals[7], abs=1e-15)
    snap0 = (tmp_path / "ev_snapshot_0.csv").read_text().splitlines()
    assert snap0[0] == "site,re,im"
    assert len(snap0) == 1 + (2 * 60 + 4 + 1) + 4
    assert (tmp_path / "ev_snapshot_30.csv").exists()


def test_evolve_rerun_byte_identical(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(EVOLVE_CFG)
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["evolve", "--config", str(f), "--out", str(a)]) == 0
    assert cli.main(["evolve", "--config", str(f), "--out", str(b)]) == 0
    assert filecmp.cmp(str(tmp_path / "a_traj.csv"), str(tmp_path / "b_traj.csv"),
                       shallow=False)


def test_worker_count_does_not_change_bytes(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(SPECTRUM_CFG)
    one, three = tmp_path / "w1", tmp_path / "w3"
    assert cli.main(["spectrum", "--config", str(f), "--out", str(one),
                     "--workers", "1"]) == 0
    assert cli.main(["spectrum", "--config", str(f), "--out", str(three),
                     "--workers", "3"]) == 0
    assert filecmp.cmp(str(tmp_path / "w1_spectrum.csv"),
                       str(tmp_path / "w3_spectrum.csv"), shallow=False)


def test_run_failure_leaves_no_files(tmp_path, capsys):
    # packet jammed against the wall fails after parsing, at run time
    text = EVOLVE_CFG.replace("initial = antisym_w1", "initial = packet")
    text += "sigma = 30\nx0 = 20\nk0 = 1.5707963\n"
    f = tmp_path / "c.cfg"
    f.write_text(text)
    out = tmp_path / "boom"
    rc = cli.main(["evolve", "--config", str(f), "--out", str(out)])
    assert rc == 1
    assert "wgr: error:" in capsys.readouterr().err
    assert not list(tmp_path.glob("boom*"))


def test_partial_outputs_removed_on_late_failure(tmp_path, monkeypatch):
    f = tmp_path / "c.cfg"
    f.write_text(EVOLVE_CFG)
    cfg = cli.parse_config(f.read_text())
    cfg.out_prefix = str(tmp_path / "late")

    def boom(path, cfg_, written):
        raise GeometryError("synthetic failure after data files were written")

    monkeypatch.setattr(cli, "_write_meta", boom)
    assert cli.run(cfg) == 1
    assert not list(tmp_path.glob("late*"))


def test_default_out_prefix_is_config_stem(tmp_path, monkeypatch):
    f = tmp_path / "sweep.cfg"
    f.write_text(SPECTRUM_CFG)
    monkeypatch.chdir(tmp_path)
    assert cli.main(["spectrum", "--config", str(f)]) == 0
    assert (tmp_path / "sweep_spectrum.csv").exists()
