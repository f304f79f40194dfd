import io
import math

import numpy as np
import pytest

from linseq import cli
from linseq.cadlag import StepPath, from_csv_text, staircase
from linseq.coeffs import AlternatingPower, DifferencePair, FiniteList, OneSidedPower
from linseq.errors import DegenerateRangeError, DomainError
from linseq.experiment import (ExperimentConfig, _Simulator, calibrate_range, normalizer,
                               order_statistic_quantile, parse_config_text, preset, run_example,
                               theoretical_constants)
from linseq.output import emit_csv, emit_svg, svg_text


def small(example="4.4", alpha=1.5, **kw):
    kw.setdefault("n", 100)
    kw.setdefault("M", 9)
    return preset(example, alpha, seed=3, **kw)


def test_config_defaults_and_validation():
    c = ExperimentConfig(alpha=1.5, scheme=OneSidedPower(0.75))
    assert (c.n, c.N_trunc, c.M, c.q_lo, c.q_hi) == (1000, 50, 75, 0.10, 0.90)
    for bad in (dict(n=0), dict(M=0), dict(N_trunc=-1), dict(q_lo=0.9, q_hi=0.1),
                dict(normalization="x"), dict(range_mode="x"), dict(alpha=3.0)):
        kw = dict(alpha=1.5, scheme=OneSidedPower(0.75))
        kw.update(bad)
        with pytest.raises(DomainError):
            ExperimentConfig(**kw)
    assert preset("4.6", 0.8).q_lo == 0.15 and preset("4.6", 0.8).normalization == "an_only"
    with pytest.raises(DomainError):
        preset("9.9", 1.5)


def test_order_statistic_quantile():
    v = [5.0, 1.0, 4.0, 2.0, 3.0]
    assert order_statistic_quantile(v, 0.0) == 1.0
    assert order_statistic_quantile(v, 0.2) == 1.0
    assert order_statistic_quantile(v, 0.21) == 2.0
    assert order_statistic_quantile(v, 1.0) == 5.0
    assert order_statistic_quantile([7.0], 0.9) == 7.0


def test_calibrate_single_replicate():
    c = small(M=1)
    sim = _Simulator(c)
    T = sim.sums(1) / sim.gamma_n
    assert calibrate_range(c) == (T.min(), T.max())


def test_calibrate_degenerate():
    c = ExperimentConfig(alpha=1.5, scheme=FiniteList(()), n=50, M=5)
    with pytest.raises(DegenerateRangeError):
        calibrate_range(c)


def test_calibration_deterministic_and_ignores_stream_zero():
    c = small()
    r1, r2 = calibrate_range(c), calibrate_range(c)
    assert r1 == r2
    # the displayed path (stream 0) is not one of the calibration replicates
    res = run_example(c)
    sim = _Simulator(c)
    assert np.array_equal(res.path.values[1:], sim.sums(0) / sim.gamma_n)
    assert res.scaled == StepPath(res.path.breakpoints,
                                  (res.path.values - r1[0]) / (r1[1] - r1[0]))


def test_normalizers():
    c = small()
    assert normalizer(c) == pytest.approx(100 ** (1 / 1.5) * 100 ** 0.25, rel=1e-14)
    c6 = preset("4.6", 0.8, n=100)
    assert normalizer(c6) == pytest.approx(100 ** (1 / 0.8), rel=1e-14)


def test_constants_for_examples():
    k = theoretical_constants(preset("4.3i", 1.5))
    assert k["H"] == pytest.approx(11 / 12) and k["a"] == pytest.approx(4.0)
    assert "C_H" not in k
    k = theoretical_constants(preset("4.3ii", 1.5))
    assert k["a"] == pytest.approx(math.pi ** 4 / 90, abs=1e-12) and k["mode"] == "levy"
    k = theoretical_constants(preset("4.6", 0.8))
    assert k["A"] == pytest.approx(-7 * math.pi ** 4 / 720, abs=1e-12)
    assert k["normalization"] == "an_only"
    k = theoretical_constants(preset("4.4", 2.0))
    assert k["a_pos"] == pytest.approx(6.0) and k["a_neg"] == pytest.approx(2.0)
    assert k["a_over_C_H"] == pytest.approx(4.28, abs=0.02)
    assert theoretical_constants(preset("4.4", 1.5))["sigma"] == pytest.approx(1.8452701486, rel=1e-9)


def test_auto_range_mode():
    res = run_example(small("4.3i"))
    assert res.scaled.values.min() == 0.0 and res.scaled.values.max() == 1.0
    assert res.display_range == (res.path.values.min(), res.path.values.max())


def test_config_parsing():
    text = """
    # Example 4.4 style
    alpha = 1.5
    scheme = alternating
    k1 = 3
    k2 = 1
    gamma = 0.75
    n = 200
    """
    c = parse_config_text(text, {"seed": 7, "M": None})
    assert c.scheme == AlternatingPower(3.0, 1.0, 0.75) and c.n == 200 and c.seed == 7 and c.M == 75
    c = parse_config_text("alpha=1.5\nscheme=finite\ncoeffs=0:1, 2:-0.5")
    assert c.scheme == FiniteList([(0, 1.0), (2, -0.5)])
    assert parse_config_text("alpha=2\nscheme=difference").scheme == DifferencePair()
    for bad in ("alpha=1.5", "alpha=1.5\nscheme=foo", "alpha=1.5\nscheme=difference\nfoo=1",
                "alpha 1.5"):
        with pytest.raises(DomainError):
            parse_config_text(bad)


def test_emit_csv():
    buf = io.StringIO()
    emit_csv(StepPath.constant(), buf)
    assert buf.getvalue() == "t,value\n0,0\n"
    buf = io.StringIO()
    emit_csv(staircase([0.0, 1.0], [0.0, 0.5]), buf)
    assert buf.getvalue().splitlines()[1:] == ["0,0", "0.5,1"]


def test_emit_svg(tmp_path):
    x = staircase([0.0, 1.0, -1.0])
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_svg([x, StepPath.constant(0.5)], (-2.0, 2.0), a, title="t<1>")
    emit_svg([x, StepPath.constant(0.5)], (-2.0, 2.0), b, title="t<1>")
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.count("<polyline") == 2 and "t&lt;1&gt;" in text
    with pytest.raises(DomainError):
        svg_text([x], (1.0, 1.0))


def test_emit_reports_destination(tmp_path):
    dest = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(StepPath.constant(), dest)


def test_cli_constants(capsys):
    assert cli.main(["constants", "--alpha", "2", "--gamma", "0.75", "--k1", "3", "--k2", "1"]) == 0
    out = capsys.readouterr().out
    assert "a_n = 95.48825305" in out and "a = 4" in out and "a/C_H = 4.2785785" in out
    assert cli.main(["constants", "--alpha", "2", "--n", "2"]) == 2


def test_cli_figure_and_analyze(tmp_path, capsys, monkeypatch):
    import linseq.experiment as ex

    monkeypatch.setitem(ex.PRESETS, "tiny", dict(scheme=OneSidedPower(0.75), n=80, M=5))
    monkeypatch.setattr(cli, "PRESETS", ex.PRESETS)
    args = ["figure", "--example", "tiny", "--alpha", "1.5", "--seed", "1", "--out-dir", str(tmp_path)]
    assert cli.main(args) == 0
    csv = tmp_path / "figure_tiny_alpha1.5_seed1.csv"
    svg = tmp_path / "figure_tiny_alpha1.5_seed1.svg"
    first = (csv.read_bytes(), svg.read_bytes())
    assert cli.main(args) == 0
    assert (csv.read_bytes(), svg.read_bytes()) == first
    assert len(from_csv_text(csv.read_text())) == 81
    capsys.readouterr()
    assert cli.main(["analyze", "--in-csv", str(csv), "--eta", "0.5,5", "--bands=-1:1",
                     "--delta", "0.1"]) == 0
    out = capsys.readouterr().out
    assert '"N_eta"' in out and '"lemma_A2"' in out
    assert cli.main(["analyze", "--in-csv", str(tmp_path / "nope.csv")]) == 2


def test_cli_simulate(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = 1.5\nscheme = difference\nn = 60\nM = 4\n")
    out_csv = tmp_path / "p.csv"
    assert cli.main(["simulate", "--config", str(cfg), "--out-csv", str(out_csv),
                     "--out-svg", str(tmp_path / "p.svg"), "--seed", "5"]) == 0
    assert out_csv.read_text().startswith("t,value\n0,0\n")
    assert "calibrated range" in capsys.readouterr().out
    assert cli.main(["simulate", "--config", str(tmp_path / "none.cfg")]) == 2


def test_cli_verify_constants(capsys):
    assert cli.main(["verify", "--suite", "constants"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "0 failure(s)" in out
