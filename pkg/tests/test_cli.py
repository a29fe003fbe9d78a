import pytest

import main as cli
from utils.errors import SolverError


@pytest.fixture
def toy_manifest(tmp_path):
    out = tmp_path / "toy"
    assert cli.main(["generate", "block-toy", "--seed", "1", "--block-sizes", "10,10,10", "--out", str(out)]) == 0
    return out / "manifest.txt"


class TestGenerate:
    def test_block_toy(self, toy_manifest):
        assert toy_manifest.exists()
        lines = toy_manifest.read_text(encoding="utf-8").splitlines()
        assert lines[:2] == ["kind=graphs", "clusters=3"]

    def test_gaussian(self, tmp_path, capsys):
        out = tmp_path / "gauss"
        assert cli.main(["generate", "gaussian", "--seed", "2", "--n-per-cluster", "5", "--out", str(out)]) == 0
        assert capsys.readouterr().out.strip() == str(out / "manifest.txt")
        assert "kind=features" in (out / "manifest.txt").read_text(encoding="utf-8")

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            cli.main(["generate", "spirals", "--out", str(tmp_path)])
        assert info.value.code == 2


class TestCluster:
    def test_writes_report(self, toy_manifest, tmp_path, capsys):
        out = tmp_path / "runs"
        code = cli.main(["cluster", "-m", str(toy_manifest), "--method", "sc-rc", "--out", str(out)])
        assert code == 0
        assert "sc-rc" in capsys.readouterr().out
        assert (out / "report_sc-rc_iw_1_seed0.txt").exists()
        assert (out / "labels_sc-rc_iw_1_seed0.txt").exists()

    def test_nmf_on_graphs_is_a_usage_error(self, toy_manifest, tmp_path):
        assert cli.main(["cluster", "-m", str(toy_manifest), "--method", "nmf", "--out", str(tmp_path)]) == 2

    def test_missing_manifest(self, tmp_path):
        assert cli.main(["cluster", "-m", str(tmp_path / "nope.txt"), "--out", str(tmp_path)]) == 2

    def test_solver_failure(self, toy_manifest, tmp_path, monkeypatch):
        def failing(ds, config):
            raise SolverError("no rank certificate", iteration=3)

        monkeypatch.setattr(cli, "run_method", failing)
        assert cli.main(["cluster", "-m", str(toy_manifest), "--out", str(tmp_path)]) == 1

    def test_invalid_environment(self, monkeypatch, toy_manifest):
        monkeypatch.setenv("MVIW_KNN", "-1")
        assert cli.main(["cluster", "-m", str(toy_manifest)]) == 2


class TestGrid:
    def test_custom_grid(self, toy_manifest, tmp_path, capsys):
        out = tmp_path / "grid"
        argv = ["grid", "-m", str(toy_manifest), "--method", "sc-rc", "--grid", "0.5,1.5", "--out", str(out)]
        assert cli.main(argv) == 0
        assert "best: hyper=" in capsys.readouterr().out
        assert (out / "summary.csv").exists()
        assert len((out / "series_nmi.tsv").read_text(encoding="utf-8").splitlines()) == 2

    def test_formats(self, toy_manifest, tmp_path):
        out = tmp_path / "grid"
        argv = ["grid", "-m", str(toy_manifest), "--method", "sc-rc", "--grid", "1.0", "--out", str(out)]
        assert cli.main(argv + ["--formats", "txt", "yaml"]) == 0
        assert (out / "summary.txt").exists()
        assert (out / "summary.yaml").exists()
        assert not (out / "summary.csv").exists()


class TestEval:
    def test_identical(self, tmp_path, capsys):
        (tmp_path / "pred.txt").write_text("0\n0\n1\n1\n2\n", encoding="utf-8")
        (tmp_path / "truth.txt").write_text("2\n2\n0\n0\n1\n", encoding="utf-8")
        assert cli.main(["eval", str(tmp_path / "pred.txt"), str(tmp_path / "truth.txt")]) == 0
        assert capsys.readouterr().out.strip() == "1.000000 1.000000 1.000000"

    def test_length_mismatch(self, tmp_path):
        (tmp_path / "pred.txt").write_text("0\n1\n", encoding="utf-8")
        (tmp_path / "truth.txt").write_text("0\n1\n1\n", encoding="utf-8")
        assert cli.main(["eval", str(tmp_path / "pred.txt"), str(tmp_path / "truth.txt")]) == 2

    def test_default_hyper(self):
        assert cli.default_hyper("iw") == 1.0
        assert cli.default_hyper("equal") == 0.0
