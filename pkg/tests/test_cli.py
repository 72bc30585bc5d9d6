import json
from pathlib import Path

import pytest

from stripdamp import cli

CONFIG = """
beta = 1.0
a = 1.0
sigma = 1.0
b = 3.0
delta = 0.4
bc = "dirichlet"
l = 1
m_list = [64, 128]
"""


@pytest.fixture()
def cfg_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(CONFIG, encoding="utf-8")
    return p


class TestSubcommands:
    def test_neumann(self, capsys, cfg_file):
        rc = cli.main(["--config", str(cfg_file), "neumann"])
        assert rc == 0
        assert "1.0187929" in capsys.readouterr().out

    def test_cap_solve_writes_profile(self, tmp_path, cfg_file, capsys):
        rc = cli.main(["--config", str(cfg_file), "--out-dir", str(tmp_path),
                       "cap-solve", "--eta", "0.1+0.05j"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "boundary value" in out
        csv = (tmp_path / "cap_profile.csv").read_text().splitlines()
        assert csv[0] == "x,re_F,im_F"
        assert len(csv) > 100

    def test_eigen_sweep(self, tmp_path, cfg_file, capsys):
        rc = cli.main(["--config", str(cfg_file), "--out-dir", str(tmp_path),
                       "eigen-sweep", "--h-max", "0.02", "--h-min", "0.005",
                       "--points", "4"])
        assert rc == 0
        assert "gap exponent" in capsys.readouterr().out
        header = (tmp_path / "eigen_sweep.csv").read_text().splitlines()[0]
        assert header.startswith("h,re_lambda,im_lambda,re_C,im_C")

    def test_quasimode_sweep_deterministic(self, tmp_path, cfg_file):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            rc = cli.main(["--config", str(cfg_file), "--out-dir", str(out),
                           "quasimode-sweep"])
            assert rc == 0
        b1 = (out1 / "quasimode_sweep.csv").read_bytes()
        b2 = (out2 / "quasimode_sweep.csv").read_bytes()
        assert b1 == b2

    def test_evolve_and_fit_roundtrip(self, tmp_path, cfg_file, capsys):
        rc = cli.main(["--config", str(cfg_file), "--out-dir", str(tmp_path),
                       "evolve", "--m", "64"])
        assert rc == 0
        rc = cli.main(["fit", "--input", str(tmp_path / "energy_trace.csv")])
        assert rc == 0
        out = capsys.readouterr().out
        assert ("alpha-hat" in out) or ("inconclusive" in out)

    def test_beta_override(self, capsys, cfg_file):
        rc = cli.main(["--config", str(cfg_file), "--beta-override", "2",
                       "neumann"])
        assert rc == 0
        assert "ground eigenvalue = 1" in capsys.readouterr().out.replace(
            "0.99999", "1"
        )

    def test_bad_config_lists_violations(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("a = 2.0\nsigma = 1.5\nb = 3.0\n", encoding="utf-8")
        rc = cli.main(["--config", str(bad), "neumann"])
        assert rc == 2
        assert "a + sigma < b" in capsys.readouterr().err

    def test_manifest_and_hash(self, tmp_path, cfg_file):
        stage_paths = {"demo": [tmp_path / "x.csv"]}
        path = cli.write_manifest(tmp_path, cfg_file,
                                  {"airy_rtol": 1e-6, "tail_levels": (2, 4, 6)},
                                  stage_paths)
        manifest = json.loads(Path(path).read_text())
        assert manifest["config_hash"] == cli.config_hash(cfg_file)
        assert manifest["thresholds"]["tail_levels"] == [2, 4, 6]
        # hash is content-based, stable under a byte-identical copy
        copy = tmp_path / "copy.cfg"
        copy.write_text(CONFIG, encoding="utf-8")
        assert cli.config_hash(copy) == cli.config_hash(cfg_file)
