"""Command-line interface: exit codes, presets, and reproducibility."""

import json

import pytest

from pnchanest import cli
from pnchanest.harness import CSV_COLUMNS


def run(*argv):
    return cli.main(list(argv))


class TestSweep:
    def test_basic_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "report.csv"
        code = run("sweep", "--pn", "dtmb420", "--channel", "tu6",
                   "--snr", "20", "--trials", "5", "--seed", "7",
                   "--out", str(out))
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 4  # four estimators, one SNR point

    def test_snr_grid_row_count(self, tmp_path):
        out = tmp_path / "report.csv"
        code = run("sweep", "--pn", "dtmb420", "--snr", "0:40:5",
                   "--trials", "2", "--seed", "1",
                   "--estimators", "correlation", "--out", str(out))
        assert code == 0
        assert len(out.read_text().strip().splitlines()) == 1 + 9

    def test_assumed_l_larger_than_sequence_is_config_error(self, tmp_path):
        code = run("sweep", "--pn", "dtmb420", "--assumed-l", "300",
                   "--trials", "2", "--snr", "20",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_ht_channel_fits_dtmb420_cp(self, tmp_path):
        # HT spans 130 taps, within the 165-sample prefix of the 420 preset
        out = tmp_path / "r.csv"
        code = run("sweep", "--pn", "dtmb420", "--channel", "ht",
                   "--snr", "20", "--trials", "3", "--seed", "1",
                   "--out", str(out))
        assert code == 0

    def test_stdout_output(self, capsys):
        code = run("sweep", "--pn", "dtmb420", "--snr", "15", "--trials", "2",
                   "--seed", "3", "--estimators", "correlation", "--out", "-")
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out.startswith(",".join(CSV_COLUMNS))

    def test_byte_for_byte_reproducibility(self, tmp_path):
        args = ("sweep", "--pn", "dtmb420", "--snr", "10:20:10",
                "--trials", "20", "--seed", "99")
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        assert run(*args, "--out", str(first)) == 0
        assert run(*args, "--out", str(second)) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_custom_register_flags(self, tmp_path):
        profile = tmp_path / "flat.txt"
        profile.write_text("flat 0.0 0.0\n", encoding="utf-8")
        out = tmp_path / "r.csv"
        code = run("sweep", "--degree", "6", "--ncp", "10",
                   "--channel", f"file:{profile}", "--snr", "20",
                   "--trials", "4", "--seed", "2", "--out", str(out))
        assert code == 0

    def test_preset_and_custom_flags_conflict(self, tmp_path):
        code = run("sweep", "--pn", "dtmb420", "--degree", "8", "--ncp", "165",
                   "--trials", "2", "--snr", "20",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_custom_flags_require_degree_and_ncp(self, tmp_path):
        code = run("sweep", "--degree", "8", "--trials", "2", "--snr", "20",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_unknown_channel(self, tmp_path):
        code = run("sweep", "--pn", "dtmb420", "--channel", "urban",
                   "--trials", "2", "--snr", "20",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_bad_snr_grid(self, tmp_path):
        code = run("sweep", "--pn", "dtmb420", "--snr", "0:40",
                   "--trials", "2", "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_bad_estimator_name(self, tmp_path):
        code = run("sweep", "--pn", "dtmb420", "--estimators", "magic",
                   "--trials", "2", "--snr", "20",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2

    def test_unwritable_output_is_runtime_error(self):
        code = run("sweep", "--pn", "dtmb420", "--snr", "20", "--trials", "2",
                   "--seed", "1", "--out", "/nonexistent-dir/r.csv")
        assert code == 1


class TestSeedSources:
    def test_env_var_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "4242")
        args = ("sweep", "--pn", "dtmb420", "--snr", "20", "--trials", "5",
                "--estimators", "correlation")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(*args, "--out", str(a)) == 0
        assert run(*args, "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_explicit_seed_overrides_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "4242")
        args = ("sweep", "--pn", "dtmb420", "--snr", "20", "--trials", "5",
                "--estimators", "correlation")
        env_seeded, flag_seeded = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(*args, "--out", str(env_seeded)) == 0
        assert run(*args, "--seed", "1", "--out", str(flag_seeded)) == 0
        assert env_seeded.read_bytes() != flag_seeded.read_bytes()

    def test_bad_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "not-a-seed")
        code = run("sweep", "--pn", "dtmb420", "--snr", "20", "--trials", "2",
                   "--out", str(tmp_path / "r.csv"))
        assert code == 2


class TestFigure:
    def test_unknown_id(self):
        assert run("figure", "fig9") == 2

    @pytest.mark.parametrize("fig,n,cp,profile,length", [
        ("fig2", 255, 165, "tu6", 38),
        ("fig3", 511, 434, "tu6", 38),
        ("fig4", 255, 165, "ht", 130),
        ("fig5", 511, 434, "ht", 130),
    ])
    def test_preset_configuration(self, tmp_path, fig, n, cp, profile, length):
        out = tmp_path / f"{fig}.json"
        code = run("figure", fig, "--trials", "2", "--seed", "5",
                   "--out", str(out), "--format", "json")
        assert code == 0
        meta = json.loads(out.read_text())["metadata"]
        assert meta["pn_length"] == n
        assert meta["cp_length"] == cp
        assert meta["profile"]["name"] == profile
        assert meta["assumed_channel_length"] == length
        assert meta["snr_db"] == [0.0, 5.0, 10.0, 15.0, 20.0, 25.0,
                                  30.0, 35.0, 40.0]

    def test_default_output_name(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run("figure", "fig2", "--trials", "1", "--seed", "1") == 0
        assert (tmp_path / "fig2.csv").exists()


class TestFormulas:
    def test_floor_marker_above_threshold(self, capsys):
        assert run("formulas", "--n", "255", "--snr", "30") == 0
        out = capsys.readouterr().out
        assert "24.1 dB" in out
        assert out.strip().splitlines()[-1].endswith("*")

    def test_no_marker_below_threshold(self, capsys):
        assert run("formulas", "--n", "255", "--snr", "20") == 0
        out = capsys.readouterr().out
        assert out.strip().splitlines()[-1].endswith("-")

    def test_longer_sequence_threshold(self, capsys):
        assert run("formulas", "--n", "511", "--snr", "30") == 0
        assert "27.1 dB" in capsys.readouterr().out

    def test_truncated_columns_follow_l(self, capsys):
        assert run("formulas", "--n", "255", "--l", "38", "--snr", "20") == 0
        with_l = capsys.readouterr().out
        assert "inverse-truncated" in with_l
        assert run("formulas", "--n", "255", "--snr", "20") == 0
        without_l = capsys.readouterr().out
        assert "inverse-truncated" not in without_l

    def test_bad_n_is_config_error(self):
        assert run("formulas", "--n", "1", "--snr", "20") == 2


class TestSelftest:
    def test_selftest_passes(self, capsys):
        assert run("selftest", "--seed", "3") == 0
        out = capsys.readouterr().out
        assert "selftest: ok" in out
        assert "FAIL" not in out
