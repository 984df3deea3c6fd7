"""Seeded Monte Carlo validation of the bounds at small blocklengths.

Randomness contract: trials are split into fixed-size blocks and every block
gets its own counter-based substream derived from (seed, block index) only,
so results are identical for any worker count or scheduling; error counts
are reduced by addition (a commutative monoid).

Power convention: P = 1, codewords have norm sqrt(n), noise variance 1/SNR
per dimension.  Normalized distances divide by sqrt(n).
"""

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import stats

from .awgn import sphere_packing_exponent, tail_exponents, theta_of_rate
from .channel import ChannelSpec
from .lattices import Lattice, lattice_figures
from .regions import joint_tail_exponent, tangent_sphere_scaling

BLOCK = 4096
MAX_CODEBOOK = 65536

SPHERICAL = "spherical"
SPHERICAL_EXPURGATED = "spherical-expurgated"
LATTICE_COSET = "lattice-coset"

DEC_ML = "ml"
DEC_EUCLIDEAN_EXTENDED = "euclidean-extended"
DEC_CLOSEST_COSET = "closest-coset"


def block_rng(seed, index):
    """Independent substream for one block: counter-based, scheduling-proof."""
    return np.random.Generator(np.random.Philox(key=seed, counter=index << 128))


def _blocks(trials):
    full, rem = divmod(trials, BLOCK)
    sizes = [BLOCK] * full + ([rem] if rem else [])
    return list(enumerate(sizes))


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo run description."""

    n: int
    spec: ChannelSpec
    rate: float  # nats per dimension
    ensemble: str = SPHERICAL
    decoder: str = DEC_ML
    trials: int = 10_000
    seed: int = 0
    d_min: float = 0.0  # normalized floor for the expurgated ensemble
    lattice: Lattice | None = None
    alpha: float = 1.0
    noise_var: float | None = None  # defaults to 1/SNR
    fresh_codebook: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        m = self.codebook_size
        if m < 2:
            raise ValueError("codebook size %d < 2; raise rate or n" % m)
        if m > MAX_CODEBOOK:
            raise ValueError("codebook size %d exceeds cap %d" % (m, MAX_CODEBOOK))
        if self.ensemble == LATTICE_COSET and self.lattice is None:
            raise ValueError("lattice-coset ensemble requires a lattice")
        if self.ensemble == LATTICE_COSET and self.decoder == DEC_ML:
            raise ValueError("lattice-coset uses euclidean-extended or closest-coset")

    @property
    def codebook_size(self):
        return int(round(math.exp(self.n * self.rate)))

    @property
    def noise_variance(self):
        return 1.0 / self.spec.snr if self.noise_var is None else self.noise_var


@dataclass(frozen=True)
class SimResult:
    """Outcome of a Monte Carlo run."""

    trials: int
    errors: int
    pe: float
    ci95: tuple
    empirical_exponent: float | None

    def to_json(self, config_summary=None):
        rec = asdict(self)
        rec["ci95"] = list(self.ci95)
        if config_summary is not None:
            rec["config"] = config_summary
        return json.dumps(rec, sort_keys=True)


def clopper_pearson(errors, trials, level=0.95):
    """Exact binomial confidence interval (valid at zero counts)."""
    a = (1.0 - level) / 2.0
    lo = 0.0 if errors == 0 else float(stats.beta.ppf(a, errors, trials - errors + 1))
    hi = (
        1.0
        if errors == trials
        else float(stats.beta.ppf(1.0 - a, errors + 1, trials - errors))
    )
    return lo, hi


def _result(errors, trials, n):
    pe = errors / trials
    return SimResult(
        trials=trials,
        errors=errors,
        pe=pe,
        ci95=clopper_pearson(errors, trials),
        empirical_exponent=(-math.log(pe) / n) if errors > 0 else None,
    )


def _spherical_codebook(rng, count, m, n):
    c = rng.normal(size=(count, m, n))
    c *= math.sqrt(n) / np.linalg.norm(c, axis=2, keepdims=True)
    return c


def _expurgated_codebook(rng, m, n, d_min):
    """Sequential rejection: codewords keep a pairwise distance >= d_min sqrt(n)."""
    floor2 = d_min * d_min * n
    rows = np.empty((m, n))
    count = 0
    attempts = 0
    while count < m:
        c = rng.normal(size=n)
        c *= math.sqrt(n) / np.linalg.norm(c)
        if count == 0 or (((rows[:count] - c) ** 2).sum(axis=1) >= floor2).all():
            rows[count] = c
            count += 1
        attempts += 1
        if attempts > 10_000 * m:
            raise RuntimeError("expurgation cannot reach %d codewords" % m)
    return rows


def _simulate_spherical_block(config, rng, count):
    n, m = config.n, config.codebook_size
    sd = math.sqrt(config.noise_variance)
    if config.ensemble == SPHERICAL_EXPURGATED:
        books = np.stack(
            [_expurgated_codebook(rng, m, n, config.d_min) for _ in range(count)]
        )
    else:
        books = _spherical_codebook(rng, count, m, n)
    sent = rng.integers(m, size=count)
    rows = np.arange(count)
    y = books[rows, sent] + rng.normal(scale=sd, size=(count, n)) if sd > 0 else books[rows, sent].copy()
    d2 = ((books - y[:, None, :]) ** 2).sum(axis=2)
    d2_sent = d2[rows, sent]
    d2[rows, sent] = np.inf
    # Pessimistic tie rule: a rival at equal distance counts as an error.
    return int((d2.min(axis=1) <= d2_sent).sum())


def _simulate_lattice_block(config, rng, count, lattice):
    """Dithered coset transmission, simulated through the effective noise.

    The dither makes the channel output equivalent to the transmitted coset
    leader plus z_eff = -(1-alpha) x + alpha z (x uniform over the Voronoi
    region), observed after scaling back by alpha.  Decoding uses exact
    per-coset distances; the extended decoder also fails when the effective
    noise leaves the Voronoi region of the correct point.
    """
    n, m = config.n, config.codebook_size
    alpha = config.alpha
    sd = math.sqrt(config.noise_variance)
    leaders = lattice.sample_voronoi(count * m, rng).reshape(count, m, n)
    sent = rng.integers(m, size=count)
    rows = np.arange(count)
    x = lattice.sample_voronoi(count, rng)
    z = rng.normal(scale=sd, size=(count, n)) if sd > 0 else np.zeros((count, n))
    z_eff = -((1.0 - alpha) / alpha) * x + z
    # Distance from z_eff + (v_sent - v_i) to the lattice, per candidate coset.
    offs = z_eff[:, None, :] + leaders[rows, sent][:, None, :] - leaders
    flat = offs.reshape(count * m, n)
    d2 = ((flat - lattice.nearest(flat)) ** 2).sum(axis=1).reshape(count, m)
    d2_sent = d2[rows, sent]
    d2[rows, sent] = np.inf
    rival = d2.min(axis=1)
    if config.decoder == DEC_CLOSEST_COSET:
        return int((rival <= d2_sent).sum())
    # Euclidean-extended: also errs when z_eff folds onto a lattice translate.
    folded = (lattice.nearest(z_eff) ** 2).sum(axis=1) > 0.0
    raw2 = (z_eff ** 2).sum(axis=1)
    return int((folded | (rival <= raw2)).sum())


def normalized_lattice(lattice, seed=0):
    """Rescale a lattice so its Voronoi second moment is the unit power."""
    figs = lattice_figures(lattice, samples=200_000, seed=seed)
    return lattice.rescaled(1.0 / math.sqrt(figs.second_moment)), figs


def simulate(config: SimConfig) -> SimResult:
    """Run the configured Monte Carlo experiment; deterministic given seed."""
    lattice = None
    if config.ensemble == LATTICE_COSET:
        lattice, _ = normalized_lattice(config.lattice)
    errors = 0
    for index, size in _blocks(config.trials):
        rng = block_rng(config.seed, index)
        if config.ensemble == LATTICE_COSET:
            errors += _simulate_lattice_block(config, rng, size, lattice)
        else:
            errors += _simulate_spherical_block(config, rng, size)
    return _result(errors, config.trials, config.n)


def tail_check_norm(n, spec: ChannelSpec, r_list, trials, seed):
    """Empirical P(||z|| >= r sqrt(n)) against the radial tail exponent.

    ||z||^2 is chi-square(n)/SNR exactly; each entry reports the empirical
    probability, the bound exp(-n E_h(r^2 SNR)), and the per-dimension
    log-ratio.
    """
    reports = []
    for j, r in enumerate(r_list):
        hits = 0
        thresh = r * r * n * spec.snr  # threshold for the chi-square variate
        for index, size in _blocks(trials):
            rng = block_rng(seed, (j << 32) + index)
            hits += int((rng.chisquare(n, size=size) >= thresh).sum())
        emp = hits / trials
        e_h, _ = tail_exponents(r * r * spec.snr)
        bound = math.exp(-n * e_h)
        reports.append(
            {
                "r": r,
                "empirical": emp,
                "bound": bound,
                "log_ratio_per_n": (math.log(emp / bound) / n) if emp > 0 else None,
                "stderr": math.sqrt(max(emp * (1.0 - emp), 1e-12) / trials),
            }
        )
    return reports


def tail_check_joint(n, spec: ChannelSpec, x, y, trials, seed):
    """Empirical P(|z_1| >= x sqrt(n), ||z_rest|| <= y sqrt(n)) vs its bound."""
    if not (y > x >= 0.0):
        raise ValueError("require y > x >= 0")
    snr = spec.snr
    hits = 0
    for index, size in _blocks(trials):
        rng = block_rng(seed, index)
        z1 = rng.normal(scale=1.0 / math.sqrt(snr), size=size)
        rest2 = rng.chisquare(n - 1, size=size) / snr
        hits += int(
            ((np.abs(z1) >= x * math.sqrt(n)) & (rest2 <= y * y * n)).sum()
        )
    emp = hits / trials
    bound = math.exp(-n * joint_tail_exponent(x, y, snr))
    return {
        "empirical": emp,
        "bound": bound,
        "log_ratio_per_n": (math.log(emp / bound) / n) if emp > 0 else None,
        "stderr": math.sqrt(max(emp * (1.0 - emp), 1e-12) / trials),
    }


def effective_noise_ball(n, spec: ChannelSpec, R, dither, trials, seed, lattice=None):
    """Probability that the scaled self-noise-plus-noise leaves its design ball.

    z_eff = ((1-a)/a) b + z with b either uniform on the power sphere or
    uniform over a power-matched Voronoi region; the ball radius is
    sqrt(n) sin(theta(R)) / a with a the tangent-sphere scaling at theta(R).
    Reports the empirical exponent against the sphere-packing exponent.
    """
    theta = theta_of_rate(R)
    _, alpha, _ = tangent_sphere_scaling(theta, spec)
    k = (1.0 - alpha) / alpha
    radius2 = n * (math.sin(theta) / alpha) ** 2
    snr = spec.snr
    hits = 0
    if dither == "spherical":
        # By rotational symmetry only the component of z along b matters.
        for index, size in _blocks(trials):
            rng = block_rng(seed, index)
            g = rng.normal(scale=1.0 / math.sqrt(snr), size=size)
            rest2 = rng.chisquare(n - 1, size=size) / snr
            norm2 = (k * math.sqrt(n) + g) ** 2 + rest2
            hits += int((norm2 > radius2).sum())
    elif dither == "voronoi":
        lat, _ = normalized_lattice(lattice)
        for index, size in _blocks(trials):
            rng = block_rng(seed, index)
            b = lat.sample_voronoi(size, rng)
            z = rng.normal(scale=1.0 / math.sqrt(snr), size=(size, n))
            norm2 = ((k * b + z) ** 2).sum(axis=1)
            hits += int((norm2 > radius2).sum())
    else:
        raise ValueError("dither must be 'spherical' or 'voronoi'")
    emp = hits / trials
    e_sp = sphere_packing_exponent(R, spec).value
    return {
        "empirical": emp,
        "ci95": clopper_pearson(hits, trials),
        "empirical_exponent": (-math.log(emp) / n) if emp > 0 else None,
        "target_exponent": e_sp,
    }


def empirical_spectrum(ensemble, n, bins, trials, seed, lattice=None):
    """Pairwise-distance statistics of a random ensemble.

    spherical: normalized chords between independent uniform points on the
    power sphere.  lattice-coset: offsets between independent Voronoi-uniform
    coset leaders, with the angle of the offset against a fixed axis.
    Returns (hist, edges, distances[, angles]).
    """
    if ensemble == SPHERICAL:
        chunks = []
        for index, size in _blocks(trials):
            rng = block_rng(seed, index)
            u = rng.normal(size=(size, n))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            v = rng.normal(size=(size, n))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            chunks.append(np.linalg.norm(u - v, axis=1))
        d = np.concatenate(chunks)
        hist, edges = np.histogram(d, bins=bins, range=(0.0, 2.0))
        return hist, edges, d
    if ensemble == LATTICE_COSET:
        if lattice is None:
            raise ValueError("lattice-coset spectrum requires a lattice")
        offs = []
        for index, size in _blocks(trials):
            rng = block_rng(seed, index)
            offs.append(
                lattice.sample_voronoi(size, rng) - lattice.sample_voronoi(size, rng)
            )
        w = np.concatenate(offs)
        d = np.linalg.norm(w, axis=1)
        angles = np.arccos(np.clip(w[:, 0] / np.maximum(d, 1e-300), -1.0, 1.0))
        hist, edges = np.histogram(d, bins=bins)
        return hist, edges, d, angles
    raise ValueError("unknown ensemble %r" % ensemble)
