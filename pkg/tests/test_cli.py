import numpy as np
import pytest

from logdiff.arfima import ArfimaSpec, simulate
from logdiff.cli import main
from logdiff.io import read_series


def write_series(path, values, header="value"):
    lines = ([header] if header else []) + [repr(float(v)) for v in values]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def read_output(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data


class TestSimulate:
    def test_small_white_noise_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["simulate", "--d", "0", "--sigma-a", "1", "--n", "8", "--seed", "1"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == "index,value" and len(lines) == 9

    def test_d_out_of_range(self, capsys):
        assert main(["simulate", "--d", "0.6", "--n", "8"]) == 4
        assert "(-0.5, 0.5)" in capsys.readouterr().err

    def test_stdout(self, capsys):
        assert main(["simulate", "--d", "0.2", "--n", "4"]) == 0
        assert capsys.readouterr().out.startswith("index,value\n0,")

    @pytest.mark.slow
    def test_pipe_to_acf(self, tmp_path):
        noise = tmp_path / "noise.csv"
        acf = tmp_path / "acf.csv"
        assert main(["simulate", "--d", "0.4", "--n", str(2**16), "--seed", "3", "--out", str(noise)]) == 0
        assert main(["acf", str(noise), "--maxlag", "5", "--out", str(acf)]) == 0
        rho1 = read_output(acf)[1, 1]
        # one series: within sampling spread of the 0.667 target (demeaned estimator sits lower)
        assert 0.55 < rho1 < 0.72


class TestSignal:
    def test_signal_csv(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["signal", "--signal", "blocks", "--n", "65", "--out", str(out)]) == 0
        values = read_output(out)[:, 1]
        assert values.size == 65
        assert np.std(values, ddof=1) == pytest.approx(7.0, abs=1e-10)

    def test_unknown_signal_is_usage_error(self):
        assert main(["signal", "--signal", "ramp", "--n", "65"]) == 2


class TestAcf:
    def test_difference_flag(self, tmp_path):
        src = write_series(tmp_path / "x.csv", simulate(ArfimaSpec(0.4, 1.0, 4096, seed=2)))
        out = tmp_path / "acf.csv"
        assert main(["acf", src, "--maxlag", "3", "--difference", "--out", str(out)]) == 0
        table = read_output(out)
        assert table[0, 1] == 1.0 and table[1, 1] < 0

    def test_constant_series_rejected(self, tmp_path):
        src = write_series(tmp_path / "c.csv", np.ones(50))
        assert main(["acf", src]) in (3, 4)


class TestDenoise:
    def test_constant_logdiff(self, tmp_path):
        src = write_series(tmp_path / "c.csv", np.full(65, 2.75))
        out = tmp_path / "o.csv"
        assert main(["denoise", src, "--out", str(out)]) == 0
        data = read_output(out)
        np.testing.assert_array_equal(data[:, 2], np.full(65, 2.75))

    def test_1025_points_anchor(self, tmp_path):
        y = np.sin(np.linspace(0, 6, 1025)) + simulate(ArfimaSpec(0.4, 0.5, 1025, seed=9))
        src = write_series(tmp_path / "y.csv", y, header=None)
        out = tmp_path / "o.csv"
        assert main(["denoise", src, "--method", "logdiff", "--out", str(out)]) == 0
        data = read_output(out)
        assert data.shape == (1025, 3)
        np.testing.assert_array_equal(data[:, 1], y)
        assert data[0, 2] == np.mean(y[:20])

    def test_truncation_warns(self, tmp_path, caplog):
        src = write_series(tmp_path / "y.csv", np.arange(40.0))
        out = tmp_path / "o.csv"
        assert main(["denoise", src, "--out", str(out)]) == 0
        assert "truncating 40 observations to 33" in caplog.text
        assert read_output(out).shape[0] == 33

    def test_universal_summary_line(self, tmp_path, capsys):
        rng = np.random.default_rng(5)
        src = write_series(tmp_path / "n.csv", rng.standard_normal(512))
        assert main(["denoise", src, "--method", "universal", "--coarse-level", "0", "--out", str(tmp_path / "o.csv")]) == 0
        err = capsys.readouterr().err
        line = next(l for l in err.splitlines() if l.startswith("summary:"))
        fields = dict(tok.split("=", 1) for tok in line.split()[1:])
        assert float(fields["|f_hat|_2"]) < 0.1 * float(fields["|y|_2"])

    def test_dump_coeffs(self, tmp_path):
        src = write_series(tmp_path / "y.csv", np.cumsum(np.random.default_rng(1).standard_normal(65)))
        coeffs = tmp_path / "w.csv"
        assert main(["denoise", src, "--dump-coeffs", str(coeffs), "--out", str(tmp_path / "o.csv")]) == 0
        lines = coeffs.read_text().splitlines()
        assert lines[0] == "block,level,index,value,shrunk"
        assert len(lines) == 1 + 64

    def test_too_short(self, tmp_path):
        src = write_series(tmp_path / "s.csv", np.arange(25.0))
        assert main(["denoise", src]) == 3

    def test_malformed_line_number(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("value\n1.0\n2.0\nabc\n")
        out = tmp_path / "o.csv"
        assert main(["denoise", str(path), "--out", str(out)]) == 3
        assert "line 4" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_file(self, tmp_path):
        assert main(["denoise", str(tmp_path / "nope.csv")]) == 3

    def test_bad_hyperparameter_is_domain_error(self, tmp_path):
        src = write_series(tmp_path / "y.csv", np.arange(65.0))
        assert main(["denoise", src, "--alpha", "1.5"]) == 4

    def test_bad_quad_order_is_usage_error(self, tmp_path):
        src = write_series(tmp_path / "y.csv", np.arange(65.0))
        assert main(["denoise", src, "--quad-order", "7"]) == 2

    def test_filter_alias(self, tmp_path):
        src = write_series(tmp_path / "y.csv", np.arange(65.0) ** 1.5)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["denoise", src, "--filter", "d4", "--out", str(a)]) == 0
        assert main(["denoise", src, "--filter", "db2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestBench:
    ARGS = ["bench", "--signals", "blocks", "--n", "64", "--snr", "3", "--reps", "5", "--seed", "42"]

    def test_identical_files(self, tmp_path):
        assert main(self.ARGS + ["--out", str(tmp_path / "a")]) == 0
        assert main(self.ARGS + ["--workers", "2", "--out", str(tmp_path / "b")]) == 0
        for ext in (".csv", ".json"):
            assert (tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()

    def test_dump_mse(self, tmp_path):
        assert main(self.ARGS + ["--dump-mse", "--out", str(tmp_path / "r")]) == 0
        assert len((tmp_path / "r_mse.csv").read_text().splitlines()) == 1 + 3 * 5

    def test_reps_one(self, tmp_path, capsys):
        args = [a if a != "5" else "1" for a in self.ARGS]
        assert main(args + ["--out", str(tmp_path / "r")]) == 2
        assert "replications must be >= 2" in capsys.readouterr().err
        assert not list(tmp_path.iterdir())

    def test_non_power_of_two(self, tmp_path):
        args = [a if a != "64" else "100" for a in self.ARGS]
        assert main(args + ["--out", str(tmp_path / "r")]) == 2


class TestParser:
    def test_help_lists_flags(self, capsys):
        assert main(["bench", "--help"]) == 0
        text = capsys.readouterr().out
        for flag in ("--d", "--snr", "--signal", "--filter", "--alpha", "--tau", "--quad-order", "--sigma-policy", "--reps", "--out", "--dump-mse", "--target-sd", "--seed", "--n"):
            assert flag in text

    def test_denoise_help_lists_method(self, capsys):
        assert main(["denoise", "--help"]) == 0
        assert "--method" in capsys.readouterr().out

    def test_unknown_flag(self):
        assert main(["simulate", "--d", "0", "--n", "4", "--bogus"]) == 2

    def test_missing_subcommand(self):
        assert main([]) == 2


def test_read_series_header_and_columns(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("date,value\n2020,1.5\n2021,2.5\n")
    np.testing.assert_array_equal(read_series(path), [1.5, 2.5])
    np.testing.assert_array_equal(read_series(path, column=0), [2020, 2021])
