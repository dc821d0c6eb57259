import csv
import json

import numpy as np
import pytest
from scipy import special as sc

from fracgreen import __version__
from fracgreen.cli import main, parse_range
from fracgreen.green_td import FractionalParams, SpacetimeSeparation, green_td_closed_alpha2


def read_csv(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def test_parse_range():
    assert list(parse_range("1:3:3")) == [1.0, 2.0, 3.0]
    assert list(parse_range("2.5")) == [2.5]
    for bad in ("1:2", "a:b:3", "1:2:0"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_green_td_alpha2_matches_closed_form(tmp_path):
    out = tmp_path / "td.csv"
    assert main(["green-td", "--alpha", "2", "--r-range", "0.1:3:4", "--dt-range", "0.1:2:3", "--out", str(out), "--no-plot"]) == 0
    header, rows = read_csv(out)
    assert header == ["r", "dt", "re_G", "im_G", "abs_err", "method"]
    assert len(rows) == 12
    p = FractionalParams(2.0)
    for r, dt, re, im, *_ in rows:
        ref = green_td_closed_alpha2(SpacetimeSeparation(float(r), float(dt)), p)
        assert abs(complex(float(re), float(im)) - ref) < 1e-8 * abs(ref)


def test_green_td_causal_rows_are_zero(tmp_path):
    out = tmp_path / "td.csv"
    assert main(["green-td", "--alpha", "1.5", "--r-range", "0.5:1:2", "--dt-range=-1:0:2", "--out", str(out), "--no-plot"]) == 0
    _, rows = read_csv(out)
    assert all(float(r[2]) == 0 and float(r[3]) == 0 for r in rows)


def test_output_is_deterministic_and_worker_independent(tmp_path):
    args = ["green-td", "--alpha", "1.5", "--r-range", "0.2:2:5", "--dt-range", "0.5:1:2", "--no-plot", "--out"]
    a, b = tmp_path / "a" / "td.csv", tmp_path / "b" / "td.csv"
    assert main(args + [str(a)]) == 0
    assert main(args + [str(b), "--workers", "2"]) == 0
    strip = lambda p: [ln for ln in p.read_text().splitlines() if not ln.startswith("# config")]  # noqa: E731
    assert strip(a) == strip(b)
    first = a.read_text()
    assert main(args + [str(a)]) == 0
    assert a.read_text() == first
    assert first.startswith(f"# fracgreen {__version__}\n# config: ")


def test_green_ti_columns(tmp_path):
    out = tmp_path / "ti.csv"
    assert main(["green-ti", "--alpha", "2", "--r-range", "0.5:5:4", "--out", str(out), "--no-plot"]) == 0
    header, rows = read_csv(out)
    assert header == ["r", "re_Gplus", "im_Gplus", "re_G", "abs_err", "method"]
    for r, re, im, reg, *_ in rows:
        x = float(r)
        ref = -0.25j * complex(sc.j0(x), sc.y0(x))
        assert abs(complex(float(re), float(im)) - ref) < 1e-12
        assert reg == re


def test_green_ti_json_and_plot(tmp_path):
    out = tmp_path / "ti.json"
    assert main(["green-ti", "--alpha", "1.5", "--r-range", "1:3:3", "--out", str(out), "--format", "json"]) == 0
    doc = json.loads(out.read_text())
    assert doc["version"] == __version__
    assert doc["config"]["alpha"] == 1.5
    assert len(doc["rows"]) == 3
    assert (tmp_path / "ti.png").exists()


def test_config_errors():
    assert main(["green-ti", "--d-alpha", "1", "--mass", "2"]) == 2
    assert main(["green-ti", "--alpha", "2.5"]) == 2
    assert main(["green-ti", "--r-range", "0:1:3"]) == 2
    assert main(["green-td", "--r-range", "nope"]) == 2
    assert main(["born", "--potential", '{"kind":"blob","v0":1}']) == 2
    assert main(["nosuchcommand"]) == 2


def test_numeric_failure_exit_code(capsys):
    code = main(["green-td", "--alpha", "1.2", "--r-range", "60", "--dt-range", "1", "--max-terms", "50"])
    assert code == 3
    assert "r=60.0, dt=1.0" in capsys.readouterr().err


def test_hfun_exponential(capsys):
    assert main(["hfun", "--spec", "1,0,0,1; ; 0:1", "--z", "1"]) == 0
    out = capsys.readouterr().out
    header, rows = out.strip().splitlines()[-2:]
    fields = rows.split(",")
    assert float(fields[1]) == pytest.approx(0.3678794, abs=1e-7)
    assert fields[-1] == "true"


def test_hfun_invalid_spec(capsys):
    assert main(["hfun", "--spec", "1,1,1,1; 1:1; 0:1", "--method", "series"]) == 2
    assert "condition1" in capsys.readouterr().err
    assert main(["hfun", "--spec", "1,0,0,1; ; 0:0"]) == 2


def _born(tmp_path, name, v0, order=2, extra=()):
    pot = json.dumps({"kind": "gaussian", "v0": v0, "sigma": 0.5, "center": [0, 0], "time_profile": {"kind": "static"}})
    out = tmp_path / name / "run"
    assert main(["born", "--alpha", "2", "--potential", pot, "--order", str(order), "--out", str(out), "--no-plot", *extra]) == 0
    return out.parent


def test_born_zero_potential_amplitudes(tmp_path):
    d = _born(tmp_path, "zero", 0.0, order=1)
    _, rows = read_csv(d / "run_amplitude.csv")
    assert all(float(r[4]) == 0 for r in rows)
    assert (d / "run_order1.csv").exists()


def test_born_gaussian_amplitude_and_orders(tmp_path):
    d = _born(tmp_path, "full", 0.3)
    assert (d / "run_order1.csv").exists() and (d / "run_order2.csv").exists()
    _, rows = read_csv(d / "run_amplitude.csv")
    f = np.array([[float(v) for v in r] for r in rows])
    expect = f[0, 4] * np.exp(-0.5 * f[:, 1] ** 2 * 0.25)
    assert np.allclose(f[:, 4], expect, rtol=1e-6)
    half = _born(tmp_path, "half", 0.15)
    inc = lambda p: float(read_csv(p / "run_orders.csv")[1][1][1])  # noqa: E731
    # second-order increment scales as V0^2
    assert inc(half) / inc(d) == pytest.approx(0.25, rel=0.1)


def test_born_potential_file(tmp_path):
    f = tmp_path / "pot.json"
    f.write_text(json.dumps({"kind": "disk", "v0": 0.2, "radius": 0.6}))
    out = tmp_path / "disk" / "run"
    assert main(["born", "--alpha", "1.5", "--potential", str(f), "--order", "1", "--out", str(out), "--format", "json", "--no-plot"]) == 0
    doc = json.loads((tmp_path / "disk" / "run_order1.json").read_text())
    assert doc["columns"] == ["x", "y", "re_phi", "im_phi", "abs_phi"]


def test_verify_selection(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--select", "1,td-alpha2-reduction", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert [c["id"] for c in doc["checks"]] == [1, 2]
    assert set(doc["checks"][0]) == {"id", "name", "passed", "tolerance", "worst", "rows", "notes"}
    first = out.read_text()
    assert main(["verify", "--select", "1,td-alpha2-reduction", "--out", str(out)]) == 0
    assert out.read_text() == first
    assert main(["verify", "--select", "nonsense"]) == 2
