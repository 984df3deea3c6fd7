"""Command-line interface.

Subcommands: exponents (CSV curves), geometry (JSON typical-event report),
lattice (JSON figures of merit), simulate (JSON Monte Carlo result from a
config file), validate (self-check suite).  Exit status: 0 ok, 1 a check
failed, 2 usage error.

Rates are accepted in bits (engineering convention) or nats; outputs always
carry the rate in nats plus the rate normalized by capacity so the unit is
unambiguous.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import awgn, modlam, regions, simulator
from .channel import ChannelSpec, bits_to_nats, nats_to_bits
from .lattices import Lattice, d4, e8, integer_lattice, lattice_figures, load_basis

CURVES = ("E_sp", "E_r", "E_x", "E_awgn", "E_modlambda")

_BUILTIN_LATTICES = {
    "z4": lambda: integer_lattice(4),
    "z8": lambda: integer_lattice(8),
    "d4": d4,
    "e8": e8,
}


class UsageError(Exception):
    pass


def _channel(args) -> ChannelSpec:
    if args.snr is not None:
        return ChannelSpec(args.snr)
    snr_db = 10.0 if args.snr_db is None else args.snr_db
    return ChannelSpec(10.0 ** (snr_db / 10.0))


def _rate_nats(args, spec):
    if args.rate_nats is not None:
        r = args.rate_nats
    elif args.rate_bits is not None:
        r = bits_to_nats(args.rate_bits)
    else:
        raise UsageError("one of --rate-bits / --rate-nats is required")
    if not 0.0 < r <= spec.capacity_nats:
        raise UsageError("rate %.6g nats outside (0, C=%.6g]" % (r, spec.capacity_nats))
    return r


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--grid expects min:max:points")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError("bad --grid value: %s" % exc)
    if points < 2 or not lo < hi:
        raise UsageError("--grid needs points >= 2 and min < max")
    return lo, hi, points


def _load_lattice(name_or_path) -> Lattice:
    key = name_or_path.lower()
    if key in _BUILTIN_LATTICES:
        return _BUILTIN_LATTICES[key]()
    try:
        return load_basis(name_or_path)
    except (OSError, ValueError) as exc:
        raise UsageError("cannot load lattice %r: %s" % (name_or_path, exc))


def _open_out(args):
    if args.out is None or args.out == "-":
        return sys.stdout, False
    return open(args.out, "w"), True


def _exponent_row(r, spec):
    return {
        "E_sp": awgn.sphere_packing_exponent(r, spec).value,
        "E_r": awgn.random_coding_exponent(r, spec).value,
        "E_x": awgn.expurgated_exponent(r, spec).value,
        "E_awgn": awgn.awgn_exponent(r, spec).value,
        "E_modlambda": modlam.modlambda_exponent(r, spec)[0].value,
    }


def cmd_exponents(args):
    spec = _channel(args)
    lo, hi, points = _parse_grid(args.grid)
    if not args.grid_nats:
        lo, hi = bits_to_nats(lo), bits_to_nats(hi)
    c = spec.capacity_nats
    if hi > c * (1.0 + 1e-12):
        raise UsageError("grid max %.6g exceeds capacity %.6g nats" % (hi, c))
    hi = min(hi, c)
    curves = CURVES
    if args.curves:
        curves = tuple(s.strip() for s in args.curves.split(","))
        bad = [s for s in curves if s not in CURVES]
        if bad:
            raise UsageError("unknown curves %s; choose from %s" % (bad, list(CURVES)))
    rates = np.linspace(lo, hi, points)
    out, close = _open_out(args)
    try:
        header = ["rate_nats", "rate_over_C"]
        header += [c_ for c_ in curves]
        header += ["E_over_snr_" + c_[2:] for c_ in curves]
        out.write(",".join(header) + "\n")
        for r in rates:
            row = _exponent_row(float(r), spec)
            vals = [float(r), float(r) / c]
            vals += [row[c_] for c_ in curves]
            vals += [row[c_] / spec.snr for c_ in curves]
            out.write(",".join("%.17g" % v for v in vals) + "\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_geometry(args):
    spec = _channel(args)
    r = _rate_nats(args, spec)
    crit = awgn.critical_rates(spec)
    e_awgn = awgn.awgn_exponent(r, spec)
    e_lam, alpha_lam, theta, d_typ_ii = modlam.modlambda_exponent(r, spec)
    d_typ = awgn.typical_distance(r, spec)
    theta_a = regions.theta_awgn(r, spec)
    scaling = modlam.k_alpha_star(math.exp(-r), r, spec)
    r_scaled = math.sin(modlam.theta_lambda(r, spec)) / scaling.alpha
    l_star, d_star, lat_regime = modlam.maximizers_lattice(
        r_scaled, scaling, spec, min_distance=math.exp(-r)
    )
    report = {
        "snr": spec.snr,
        "snr_db": 10.0 * math.log10(spec.snr),
        "rate_nats": r,
        "rate_bits": nats_to_bits(r),
        "rate_over_C": r / spec.capacity_nats,
        "capacity_nats": spec.capacity_nats,
        "critical_rate_nats": crit.r_crit,
        "rate_x_nats": crit.r_x,
        "rate_ii_nats": modlam.rate_ii(spec),
        "E_sp": awgn.sphere_packing_exponent(r, spec).value,
        "E_r": awgn.random_coding_exponent(r, spec).value,
        "E_x": awgn.expurgated_exponent(r, spec).value,
        "E_awgn": {"value": e_awgn.value, "regime": e_awgn.regime},
        "E_modlambda": {"value": e_lam.value, "regime": e_lam.regime},
        "theta": theta,
        "theta_awgn": theta_a,
        "theta_lambda": modlam.theta_lambda(r, spec),
        "alpha_awgn": regions.alpha_awgn(r, spec),
        "alpha_awgn_r": regions.alpha_awgn_r(r, spec),
        "alpha_lambda": alpha_lam,
        "alpha_mmse": spec.snr / (1.0 + spec.snr),
        "k_alpha_star": scaling.k_alpha,
        "d_typ": d_typ,
        "d_typ_ii": d_typ_ii,
        "d_crit": crit.d_crit,
        "d_min": awgn.min_distance(r),
        "beta_star": awgn.beta_star(awgn.theta_of_rate(r), spec),
        "l_star": l_star,
        "d_lambda_star": d_star,
        "lattice_regime": lat_regime,
        "r_lambda_alpha": r_scaled,
    }
    if r < crit.r_crit:
        report["k_zeta"] = regions.k_zeta(d_typ, r, spec)
    out, close = _open_out(args)
    try:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_lattice(args):
    if args.lattice is None:
        raise UsageError("--lattice NAME|FILE is required")
    lat = _load_lattice(args.lattice)
    figs = lattice_figures(lat, samples=args.trials, seed=args.seed)
    report = {
        "name": lat.name,
        "n": figs.n,
        "volume": figs.volume,
        "second_moment": figs.second_moment,
        "second_moment_stderr": figs.second_moment_stderr,
        "nsm": figs.nsm,
        "r_eff": figs.r_eff,
        "r_cov_upper": figs.r_cov,
        "deep_hole_probe": figs.deep_hole_probe,
    }
    out, close = _open_out(args)
    try:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    finally:
        if close:
            out.close()
    return 0


_SIM_SCHEMA = {
    "n": int,
    "rate_nats": float,
    "rate_bits": float,
    "snr": float,
    "snr_db": float,
    "ensemble": str,
    "decoder": str,
    "trials": int,
    "seed": int,
    "d_min": float,
    "lattice": str,
    "alpha": float,
    "noise_var": float,
}


def _sim_config(doc):
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    for key, value in doc.items():
        if key not in _SIM_SCHEMA:
            raise UsageError("unknown config field %r" % key)
        want = _SIM_SCHEMA[key]
        if want is float and isinstance(value, int):
            continue
        if not isinstance(value, want):
            raise UsageError("field %r must be %s" % (key, want.__name__))
    for required in ("n",):
        if required not in doc:
            raise UsageError("missing config field %r" % required)
    if "snr" in doc:
        spec = ChannelSpec(float(doc["snr"]))
    elif "snr_db" in doc:
        spec = ChannelSpec(10.0 ** (float(doc["snr_db"]) / 10.0))
    else:
        raise UsageError("missing config field 'snr' or 'snr_db'")
    if "rate_nats" in doc:
        rate = float(doc["rate_nats"])
    elif "rate_bits" in doc:
        rate = bits_to_nats(float(doc["rate_bits"]))
    else:
        raise UsageError("missing config field 'rate_nats' or 'rate_bits'")
    kwargs = {
        "n": doc["n"],
        "spec": spec,
        "rate": rate,
        "ensemble": doc.get("ensemble", simulator.SPHERICAL),
        "decoder": doc.get("decoder", simulator.DEC_ML),
        "trials": doc.get("trials", 10_000),
        "seed": doc.get("seed", 0),
        "d_min": float(doc.get("d_min", 0.0)),
        "alpha": float(doc.get("alpha", 1.0)),
    }
    if "noise_var" in doc:
        kwargs["noise_var"] = float(doc["noise_var"])
    if "lattice" in doc:
        kwargs["lattice"] = _load_lattice(doc["lattice"])
    try:
        return simulator.SimConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_simulate(args):
    try:
        with open(args.config) as f:
            doc = json.load(f)
    except OSError as exc:
        raise UsageError("cannot read config: %s" % exc)
    except json.JSONDecodeError as exc:
        raise UsageError("config is not valid JSON: %s" % exc)
    config = _sim_config(doc)
    result = simulator.simulate(config)
    out, close = _open_out(args)
    try:
        out.write(result.to_json(config_summary=doc) + "\n")
    finally:
        if close:
            out.close()
    return 0


def _fast_checks():
    """Closed-form identity suite; each entry returns a max absolute error."""
    spec = ChannelSpec(10.0)
    crit = awgn.critical_rates(spec)
    checks = []

    def leave_cone_error():
        worst = 0.0
        for r in np.linspace(crit.r_crit + 0.01, spec.capacity_nats - 0.01, 8):
            theta = awgn.theta_of_rate(float(r))
            got = awgn.leave_cone_exponent(theta, spec).value
            want = awgn.sphere_packing_exponent(float(r), spec).value
            worst = max(worst, abs(got - want))
        return worst

    checks.append(("leave-cone equals sphere-packing above R_crit", leave_cone_error, 1e-8))
    checks.append(
        ("rho at capacity is 0", lambda: abs(awgn.rho_g(spec.capacity_nats, spec)), 1e-9)
    )
    checks.append(
        ("rho at critical rate is 1", lambda: abs(awgn.rho_g(crit.r_crit, spec) - 1.0), 1e-9)
    )
    checks.append(
        (
            "tangent scaling at capacity is the MMSE ratio",
            lambda: abs(
                regions.tangent_sphere_scaling(awgn.theta_of_rate(spec.capacity_nats), spec)[1]
                - spec.snr / (1.0 + spec.snr)
            ),
            1e-12,
        )
    )

    def continuity_error():
        eps = 1e-9
        worst = 0.0
        for f in (awgn.typical_distance, modlam.typical_distance_ii):
            for at in (crit.r_x, crit.r_crit):
                worst = max(worst, abs(f(at - eps, spec) - f(at + eps, spec)))
        worst = max(
            worst,
            abs(modlam.alpha_lambda(crit.r_crit - eps, spec) - modlam.alpha_lambda(crit.r_crit + eps, spec)),
        )
        return worst

    checks.append(("typical-distance and scaling continuity", continuity_error, 1e-6))

    def ordering_error():
        for r in np.linspace(0.02, spec.capacity_nats - 1e-6, 25):
            e_r = awgn.random_coding_exponent(float(r), spec).value
            e_ii = modlam.modlambda_exponent(float(r), spec)[0].value
            e_a = awgn.awgn_exponent(float(r), spec).value
            if not (e_r - 1e-9 <= e_ii <= e_a + 1e-9):
                return abs(min(e_ii - e_r, e_a - e_ii))
        return 0.0

    checks.append(("exponent ordering E_r <= E_II <= E_awgn", ordering_error, 1e-9))

    def branch_agreement_error():
        worst = 0.0
        for r in np.linspace(0.05, spec.capacity_nats - 0.01, 12):
            d = awgn.typical_distance(float(r), spec)
            theta = regions.theta_awgn(float(r), spec)
            got = regions.f_bnd(d, theta, float(r), spec)
            want = awgn.awgn_exponent(float(r), spec).value
            worst = max(worst, abs(got - want))
        return worst

    checks.append(("typical-event geometry reproduces the exponent", branch_agreement_error, 1e-7))
    return checks


def _mc_checks():
    spec = ChannelSpec(10.0)
    checks = []

    def zero_noise():
        cfg = simulator.SimConfig(
            n=8,
            spec=ChannelSpec(2.0),
            rate=0.5 * ChannelSpec(2.0).capacity_nats,
            ensemble=simulator.SPHERICAL_EXPURGATED,
            d_min=0.2,
            trials=2000,
            seed=1,
            noise_var=0.0,
        )
        return float(simulator.simulate(cfg).errors)

    checks.append(("zero noise gives zero errors", zero_noise, 0.5))

    def determinism():
        cfg = simulator.SimConfig(n=8, spec=ChannelSpec(2.0), rate=0.5, trials=8192, seed=3)
        return float(simulator.simulate(cfg).errors != simulator.simulate(cfg).errors)

    checks.append(("repeat run is identical", determinism, 0.5))

    def tail_bound():
        reports = simulator.tail_check_norm(16, spec, [0.5], 200_000, 11)
        rpt = reports[0]
        return max(0.0, rpt["empirical"] - rpt["bound"] - 3.0 * rpt["stderr"])

    checks.append(("radial tail bound holds", tail_bound, 0.0))

    def joint_tail_bound():
        rpt = simulator.tail_check_joint(16, spec, 0.2, 0.5, 200_000, 11)
        return max(0.0, rpt["empirical"] - rpt["bound"] - 3.0 * rpt["stderr"])

    checks.append(("joint tail bound holds", joint_tail_bound, 0.0))
    return checks


def cmd_validate(args):
    checks = _fast_checks()
    if args.level == "full":
        checks += _mc_checks()
    failed = 0
    for name, fn, tolerance in checks:
        try:
            err = fn()
            ok = err <= tolerance
        except Exception as exc:  # surface, keep walking the suite
            err, ok = math.inf, False
            name = "%s (raised %s)" % (name, exc)
        print("%s: %s (err=%.3g, tol=%.3g)" % ("PASS" if ok else "FAIL", name, err, tolerance))
        failed += 0 if ok else 1
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="expbounds",
        description="Error-exponent bounds and typical-error geometry for the "
        "power-constrained Gaussian channel and its mod-lattice variant.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_snr(p):
        p.add_argument("--snr-db", type=float, default=None, help="SNR in dB (default 10)")
        p.add_argument("--snr", type=float, default=None, help="linear SNR (overrides --snr-db)")

    p = sub.add_parser("exponents", help="emit exponent curves as CSV")
    add_snr(p)
    p.add_argument("--grid", required=True, help="rate grid min:max:points (bits unless --grid-nats)")
    p.add_argument("--grid-nats", action="store_true", help="interpret --grid in nats")
    p.add_argument("--curves", default=None, help="comma list from %s" % (CURVES,))
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("geometry", help="typical-error-event geometry report (JSON)")
    add_snr(p)
    p.add_argument("--rate-bits", type=float, default=None)
    p.add_argument("--rate-nats", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("lattice", help="lattice figures of merit (JSON)")
    p.add_argument("--lattice", default=None, help="builtin name (z4,z8,d4,e8) or basis file")
    p.add_argument("--trials", type=int, default=200_000, help="Monte Carlo samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment from a JSON config")
    p.add_argument("config", help="JSON file mirroring the simulator config fields")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("level", choices=("fast", "full"))
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
