"""Command-line surface: CSV schema, JSON reports, config validation, exits."""

import csv
import io
import json
import math

from expbounds.channel import ChannelSpec
from expbounds import awgn
from expbounds.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exponents_csv_schema(tmp_path, capsys):
    out = tmp_path / "curves.csv"
    code, _, _ = _run(
        capsys, "exponents", "--snr-db", "10", "--grid", "0.05:1.7:50", "--out", str(out)
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 50
    header = rows[0].keys()
    for col in (
        "rate_nats",
        "rate_over_C",
        "E_sp",
        "E_r",
        "E_x",
        "E_awgn",
        "E_modlambda",
        "E_over_snr_sp",
        "E_over_snr_modlambda",
    ):
        assert col in header
    spec = ChannelSpec(10.0)
    rates = [float(r["rate_nats"]) for r in rows]
    assert rates == sorted(rates)
    # Round trip at 1e-15 relative: re-derive one column from the library.
    for row in rows[::7]:
        want = awgn.sphere_packing_exponent(float(row["rate_nats"]), spec).value
        got = float(row["E_sp"])
        assert got == want or abs(got - want) <= 1e-15 * max(1.0, abs(want))
    # Monotone non-increasing exponent columns.
    for col in ("E_sp", "E_r", "E_awgn", "E_modlambda"):
        vals = [float(r[col]) for r in rows]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    # Mod-lattice curve merges with the best curve above the critical rate.
    r_crit = awgn.critical_rate(spec)
    for row in rows:
        if float(row["rate_nats"]) >= r_crit:
            assert abs(float(row["E_modlambda"]) - float(row["E_awgn"])) < 1e-9


def test_exponents_two_point_grid(capsys):
    spec = ChannelSpec(10.0)
    c_bits = spec.capacity_nats / math.log(2.0)
    code, out, _ = _run(
        capsys, "exponents", "--snr-db", "10", "--grid", "0.01:%.12f:2" % c_bits
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2
    assert abs(float(rows[-1]["E_sp"])) < 1e-9
    assert abs(float(rows[-1]["E_awgn"])) < 1e-9


def test_exponents_rejects_grid_beyond_capacity(capsys):
    code, _, err = _run(capsys, "exponents", "--snr-db", "10", "--grid", "0.1:3.0:5")
    assert code == 2
    assert "capacity" in err


def test_exponents_curve_subset(capsys):
    code, out, _ = _run(
        capsys,
        "exponents",
        "--snr-db",
        "10",
        "--grid",
        "0.1:1.0:3",
        "--curves",
        "E_sp,E_r",
    )
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header == ["rate_nats", "rate_over_C", "E_sp", "E_r", "E_over_snr_sp", "E_over_snr_r"]


def test_geometry_report(capsys):
    code, out, _ = _run(capsys, "geometry", "--snr-db", "10", "--rate-nats", "1.0")
    assert code == 0
    rpt = json.loads(out)
    # Above the critical rate both scalings coincide.
    assert abs(rpt["alpha_awgn"] - rpt["alpha_lambda"]) < 1e-9
    assert rpt["E_awgn"]["regime"] == "sphere-packing"
    assert abs(rpt["rate_bits"] - 1.0 / math.log(2.0)) < 1e-12


def test_geometry_low_rate_regimes(capsys):
    code, out, _ = _run(capsys, "geometry", "--snr-db", "10", "--rate-nats", "0.01")
    assert code == 0
    rpt = json.loads(out)
    assert rpt["E_awgn"]["regime"] == "expurgated"
    assert rpt["E_modlambda"]["regime"] == "expurgated"


def test_geometry_near_capacity_limits(capsys):
    spec = ChannelSpec(10.0)
    r = spec.capacity_nats * (1.0 - 1e-9)
    code, out, _ = _run(capsys, "geometry", "--snr-db", "10", "--rate-nats", "%.15f" % r)
    assert code == 0
    rpt = json.loads(out)
    assert abs(rpt["beta_star"]) < 1e-3
    assert abs(rpt["alpha_awgn"] - rpt["alpha_mmse"]) < 1e-3


def test_geometry_requires_rate(capsys):
    code, _, err = _run(capsys, "geometry", "--snr-db", "10")
    assert code == 2
    assert "rate" in err


def test_lattice_report(capsys):
    code, out, _ = _run(capsys, "lattice", "--lattice", "z4", "--trials", "20000")
    assert code == 0
    rpt = json.loads(out)
    assert rpt["n"] == 4
    assert abs(rpt["volume"] - 1.0) < 1e-12
    assert abs(rpt["second_moment"] - 1.0 / 12.0) < 6.0 * rpt["second_moment_stderr"]


def test_lattice_from_file(tmp_path, capsys):
    path = tmp_path / "z2.lat"
    path.write_text("2\n1 0\n0 1\n")
    code, out, _ = _run(capsys, "lattice", "--lattice", str(path), "--trials", "5000")
    assert code == 0
    assert json.loads(out)["n"] == 2


def test_simulate_deterministic_output(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"n": 8, "snr": 2.0, "rate_nats": 0.42, "trials": 4096, "seed": 5}))
    code, out1, _ = _run(capsys, "simulate", str(cfg))
    assert code == 0
    code, out2, _ = _run(capsys, "simulate", str(cfg))
    assert code == 0
    assert out1 == out2
    rec = json.loads(out1)
    assert rec["trials"] == 4096
    assert rec["ci95"][0] <= rec["pe"] <= rec["ci95"][1]


def test_simulate_rejects_unknown_field(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"n": 8, "snr": 2.0, "rate_nats": 0.42, "bogus": 1}))
    code, _, err = _run(capsys, "simulate", str(cfg))
    assert code == 2
    assert "bogus" in err


def test_simulate_rejects_bad_type(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"n": 8, "snr": 2.0, "rate_nats": 0.42, "trials": "many"}))
    code, _, err = _run(capsys, "simulate", str(cfg))
    assert code == 2
    assert "trials" in err


def test_simulate_missing_snr(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"n": 8, "rate_nats": 0.42}))
    code, _, err = _run(capsys, "simulate", str(cfg))
    assert code == 2
    assert "snr" in err


def test_validate_fast_passes(capsys):
    code, out, _ = _run(capsys, "validate", "fast")
    assert code == 0
    assert "FAIL" not in out
    assert "PASS" in out
