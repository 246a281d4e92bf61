import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from pseudotrade.cli import main
from pseudotrade.files import read_prices, read_series_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def world(tmp_path, capsys):
    path = tmp_path / "world.csv"
    code, _, _ = run(capsys, "generate", "--kind", "trend", "--n", "600", "--seed", "7",
                     "--noise", "energy", "--alpha", "0.025", "--k", "0.4", "--out", str(path))
    assert code == 0
    return path


def test_generate_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    outs = []
    for p in paths:
        code, out, _ = run(capsys, "generate", "--kind", "trend", "--n", "100", "--seed", "7",
                           "--noise", "none", "--min-segment-length", "20", "--out", str(p))
        assert code == 0
        outs.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert outs[0] == outs[1]
    resolved = json.loads(outs[0])
    assert resolved["spec"]["seed"] == 7 and len(resolved["segments"]) >= 4
    text = paths[0].read_text()
    assert text.startswith("# {") and "\nt,clean,noisy\n" in text


def test_generate_zero_simple_noise_equals_clean(tmp_path, capsys):
    p = tmp_path / "w.csv"
    code, _, _ = run(capsys, "generate", "--kind", "cycle", "--n", "400", "--noise", "simple",
                     "--alpha", "0", "--out", str(p))
    assert code == 0
    cols, _ = read_series_csv(p)
    assert np.array_equal(cols["clean"], cols["noisy"])


def test_generate_cycle_floor_breach(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--kind", "cycle", "--amplitude", "150",
                       "--out", str(tmp_path / "x.csv"))
    assert code == 2
    assert "cycle breaches price floor" in err


def test_generate_explicit_segments_from_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "trend", "n": 5, "initial_price": 2.0,
                               "segments": [{"slope": 1, "start": 0}, {"slope": -1, "start": 2}]}))
    p = tmp_path / "w.csv"
    code, _, _ = run(capsys, "generate", "--config", str(cfg), "--out", str(p))
    assert code == 0
    assert list(read_prices(p, "clean").values) == [2, 3, 4, 3, 2]


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 150, "seed": 1, "min_segment_length": 20}))
    p = tmp_path / "w.csv"
    code, out, _ = run(capsys, "generate", "--config", str(cfg), "--n", "250", "--out", str(p))
    assert code == 0
    spec = json.loads(out)["spec"]
    assert spec["n"] == 250 and spec["seed"] == 1


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    code, _, err = run(capsys, "generate", "--config", str(cfg), "--out", str(tmp_path / "w.csv"))
    assert code == 2 and "colour" in err


def test_backtest_buyhold(world, capsys):
    code, out, _ = run(capsys, "backtest", "--prices", str(world), "--strategy", "buyhold")
    assert code == 0
    report = json.loads(out)
    assert report["excess_over_buyhold_pct"] == 0
    assert report["total_return_pct"] == report["buyhold_return_pct"]


def test_backtest_macd_defaults_and_outputs(world, tmp_path, capsys):
    svg = tmp_path / "chart.svg"
    eq = tmp_path / "eq.csv"
    rep = tmp_path / "rep.json"
    code, _, _ = run(capsys, "backtest", "--prices", str(world), "--report", str(rep),
                     "--equity-csv", str(eq), "--svg", str(svg))
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["strategy"] == "macd" and report["params"] == {"fast": 9, "slow": 50}
    assert report["metrics"]["steps"] == 600
    cols, _ = read_series_csv(eq)
    assert {"price", "ema_9", "ema_50", "position", "equity"} <= set(cols)
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 4


def test_backtest_rsi_flags(world, capsys):
    code, out, _ = run(capsys, "backtest", "--prices", str(world), "--strategy", "rsi",
                       "--lookback", "10", "--buy-level", "25", "--sell-level", "75")
    assert code == 0
    assert json.loads(out)["params"] == {"lookback": 10, "buy_level": 25.0, "sell_level": 75.0}


def test_backtest_malformed_csv(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("t,value\n0,10\n1,11\n2,abc\n")
    code, _, err = run(capsys, "backtest", "--prices", str(p))
    assert code == 2
    assert "line 4" in err


def test_backtest_non_positive_price_is_data_error(tmp_path, capsys):
    p = tmp_path / "neg.csv"
    p.write_text("t,value\n0,10\n1,-1\n")
    code, _, err = run(capsys, "backtest", "--prices", str(p), "--strategy", "buyhold")
    assert code == 3 and "t=1" in err


def test_indicators_dump(world, capsys):
    code, out, _ = run(capsys, "indicators", "--prices", str(world), "--sma", "20",
                       "--rsi", "14", "--macd", "9,50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,price,sma_20,macd_fast_9,macd_slow_50,rsi_14"
    assert lines[1].split(",")[2] == "" and lines[21].split(",")[2] != ""


def test_experiment_outputs(tmp_path, capsys):
    args = ["experiment", "--strategies", "macd,buyhold", "--patterns", "trend,cycle",
            "--noise", "none", "--noise", "simple:0.1", "--seeds", "5", "--n", "800"]
    code, out, _ = run(capsys, *args, "--out-dir", str(tmp_path / "a"))
    assert code == 0
    rows = (tmp_path / "a" / "rows.csv").read_text().splitlines()
    assert len(rows) == 1 + 40
    code, _, _ = run(capsys, *args, "--jobs", "2", "--out-dir", str(tmp_path / "b"))
    assert (tmp_path / "a" / "rows.csv").read_bytes() == (tmp_path / "b" / "rows.csv").read_bytes()
    assert (tmp_path / "a" / "aggregate.csv").read_bytes() == (tmp_path / "b" / "aggregate.csv").read_bytes()


def test_experiment_bad_noise(tmp_path, capsys):
    code, _, err = run(capsys, "experiment", "--noise", "pink", "--out-dir", str(tmp_path))
    assert code == 2
