import subprocess
import sys

import numpy as np
import pytest
from pytest import approx

from conftest import LOW_GAIN
from pdcslit.cli import main
from pdcslit.io import read_checksums, read_csv
from pdcslit.limits import g2_broadband, g2_narrowband, shape_error
from pdcslit.slit import SlitGeometry


def test_fig2_closed_form(tmp_path):
    assert main(["fig2", "--out", str(tmp_path)]) == 0
    _, header, data = read_csv(tmp_path / "fig2.csv")
    assert header == ["X", "G1", "G2_diag"]
    x = data[:, 0]
    assert x.size == 401
    closed = np.sinc(x) ** 2 * np.cos(5 * np.pi * x) ** 2
    assert np.max(np.abs(data[:, 1] - closed)) < 1e-9
    assert np.max(np.abs(data[:, 2] - closed**2)) < 1e-9
    assert "checksum.fig2.csv" in (tmp_path / "fig2.manifest.txt").read_text()


def test_fig3_weak_coupling(tmp_path):
    assert main(["fig3", "--delta0", "0", "--out", str(tmp_path)]) == 0
    _, header, data = read_csv(tmp_path / "fig3b.csv")
    assert header == ["g", "theta", "V1_typeII", "V1_typeI", "V2_typeI"]
    assert data[0, 0] == approx(1e-3) and data[-1, 0] == approx(3.0)
    assert data[0, 2] == approx(1.0, abs=1e-3)
    assert data[0, 3] == approx(1.0, abs=1e-3)
    assert data[0, 4] == approx(0.0, abs=1e-3)


def test_fig3_all_panels(tmp_path):
    assert main(["fig3", "--sweep-points", "5", "--out", str(tmp_path)]) == 0
    for p in "abc":
        assert (tmp_path / f"fig3{p}.csv").exists()


def test_fig4a_limits(tmp_path):
    # endpoints only: the log sweep hits q0_norm = 1e-3 and 50 exactly
    assert main(["fig4", "--panel", "a", "--sweep-points", "2", "--out", str(tmp_path)]) == 0
    _, header, data = read_csv(tmp_path / "fig4a.csv")
    assert header == ["X", "q0_norm", "G2"]
    rows = data[:, 2].reshape(2, 401)
    x = data[:401, 0]
    man = (tmp_path / "fig4a.manifest.txt").read_text()
    broad = [ln for ln in man.splitlines() if ln.startswith("info.kernels.1")][0]
    meta = dict(kv.split("=") for kv in broad.split(" = ", 1)[1].split())
    eta = float(meta["eta_hat"])
    xi = complex(float(meta["xi_hat_re"]), float(meta["xi_hat_im"]))
    geom = SlitGeometry(0.2)
    ref = g2_broadband(eta, xi, geom, x, x, "I")
    assert np.max(np.abs(rows[1] / ref - 1)) < 0.01
    assert shape_error(rows[0], g2_narrowband(eta, xi, geom, x, x, "I")) < 0.01
    assert (tmp_path / "fig4a.pgm").exists() and (tmp_path / "fig4a.pgm.scale.txt").exists()


def test_manifest_roundtrip_and_threads(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["fig6", "--panel", "d", "--sweep-points", "3", "--grid", "101"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(["fig6", "--config", str(a / "fig6d.manifest.txt"), "--out", str(b),
                 "--threads", "8"]) == 0
    sa, sb = read_checksums(a / "fig6d.manifest.txt"), read_checksums(b / "fig6d.manifest.txt")
    assert sa == sb and len(sa) == 3


def test_g2_and_visibility_commands(tmp_path):
    out = str(tmp_path)
    assert main(["g2", "--grid", "21", "--q0", "1", "--type", "2", "--mode", "full", "--out", out]) == 0
    _, header, data = read_csv(tmp_path / "g2.csv")
    assert header == ["X2", "X1", "G2"] and data.shape == (441, 3)
    assert main(["g2", "--grid", "21", "--q0", "1", "--intensity", "1", "--qin", "0.3",
                 "--kind", "g1", "--out", out]) == 0
    assert main(["visibility", "--rate", "1.5", "--out", out]) == 0
    _, _, data = read_csv(tmp_path / "visibility.csv")
    assert data[0, 0] == approx(LOW_GAIN)
    assert data[0, 1] == approx(0.0395764, rel=1e-5)


def test_sweep_command(tmp_path):
    assert main(["sweep", "--sweep-axis", "g", "--sweep-min", "0.1", "--sweep-max", "0.5",
                 "--sweep-points", "3", "--grid", "41", "--q0", "1", "--out", str(tmp_path)]) == 0
    _, header, data = read_csv(tmp_path / "sweep.csv")
    assert header == ["X", "g", "G2"] and data.shape == (123, 3)


def test_exit_codes(tmp_path, capsys):
    assert main(["fig4", "--panel", "z", "--out", str(tmp_path)]) == 2
    assert main(["sweep", "--out", str(tmp_path)]) == 2
    assert main(["g2", "--config", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("nonsense = 1\n")
    assert main(["g2", "--config", str(bad)]) == 2
    assert main(["visibility", "--tol", "1e-17", "--out", str(tmp_path)]) == 3
    assert "did not converge" in capsys.readouterr().err
    with pytest.raises(SystemExit) as err:
        main(["fig7"])
    assert err.value.code == 2


def test_output_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PDCSLIT_OUT", str(tmp_path / "env"))
    assert main(["fig2"]) == 0
    assert (tmp_path / "env" / "fig2.csv").exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pdcslit", "fig2", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "pdcslit", "fig2", "--rho", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
