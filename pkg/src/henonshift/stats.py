"""Statistical verification of the maximal-entropy measure's properties.

Samplers for the 1-D invariant law (inverse-CDF and chain-simulation
routes), covariance-decay fits with an explicit noise floor, a CLT test
with a degenerate (coboundary) branch, Young's dimension formula, a
box-counting estimator, and the return-time decay check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats as sps

from .henon import HenonMap
from .markov import LoopCensus, MaxEntropyChain, build_mme, full_shift_graph, perron

__all__ = [
    "EmpiricalMeasure",
    "sample_mme_1d",
    "measure_from_points",
    "DecayFit",
    "covariance_decay",
    "CltReport",
    "clt_test",
    "coboundary",
    "coordinate",
    "lipschitz_bump",
    "smoothed_indicator",
    "chebyshev_polynomial",
    "young_dimension",
    "box_dimension",
    "box_count_table",
    "return_decay_check",
    "segment_sample",
    "square_sample",
    "cantor_sample",
]


# ---------------------------------------------------------------------------
# empirical measures


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Weighted sample set with a provenance tag.

    provenance is one of "periodic-census", "chain-simulation",
    "inverse-CDF" (or a free-form tag for synthetic inputs).
    """

    points: np.ndarray
    weights: np.ndarray
    provenance: str

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(pts):
            raise ValueError("one weight per point required")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        s = w.sum()
        if not math.isclose(s, 1.0, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(f"weights must sum to 1, got {s}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    def n_effective(self) -> float:
        return 1.0 / float(np.sum(self.weights**2))

    def mean(self, g: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.sum(self.weights * g(self.points)))

    def mass(self, lo: float, hi: float) -> float:
        x = self.points if self.points.ndim == 1 else self.points[:, 0]
        return float(np.sum(self.weights[(x >= lo) & (x <= hi)]))


def measure_from_points(points: np.ndarray, provenance: str) -> EmpiricalMeasure:
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    return EmpiricalMeasure(pts, np.full(n, 1.0 / n), provenance)


def sample_mme_1d(kind: str, n: int, seed: int) -> EmpiricalMeasure:
    """Sample of the 1-D maximal-entropy law (arcsine on [-2, 2]).

    kind "arcsine" draws x = 2 cos(pi U) directly; kind "chain" simulates
    the maximal-entropy chain of the full 2-shift and pushes the symbol
    sequence through the binary-angle conjugacy x = 2 cos(2 pi . b1 b2 ...).
    Both routes target the same law; the chain route exercises it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "arcsine":
        u = rng.random(n)
        return EmpiricalMeasure(
            2.0 * np.cos(np.pi * u), np.full(n, 1.0 / n), "inverse-CDF"
        )
    if kind == "chain":
        g2 = full_shift_graph(2)
        chain = build_mme(perron(g2), g2)
        p = np.array(chain.p)
        if not np.allclose(p, 0.5, atol=1e-12):
            raise AssertionError("full 2-shift chain must be uniform Bernoulli")
        # 53 bits saturate double precision of the binary angle
        bits = rng.integers(0, 2, size=(n, 53))
        angle = bits @ (2.0 ** -np.arange(1, 54))
        return EmpiricalMeasure(
            2.0 * np.cos(2.0 * np.pi * angle), np.full(n, 1.0 / n), "chain-simulation"
        )
    raise ValueError(f"unknown sampler kind {kind!r}")


# ---------------------------------------------------------------------------
# observable library (fixed so Hoelder hypotheses hold by construction)


def coordinate() -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.asarray(x, dtype=float)


def lipschitz_bump(center: float, width: float) -> Callable[[np.ndarray], np.ndarray]:
    if width <= 0:
        raise ValueError("width must be positive")

    def g(x: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, 1.0 - np.abs(np.asarray(x) - center) / width)

    return g


def smoothed_indicator(
    lo: float, hi: float, ramp: float
) -> Callable[[np.ndarray], np.ndarray]:
    """1 on [lo, hi], 0 outside [lo - ramp, hi + ramp], linear in between."""
    if ramp <= 0 or hi < lo:
        raise ValueError("need hi >= lo and ramp > 0")

    def g(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        left = np.clip((x - (lo - ramp)) / ramp, 0.0, 1.0)
        right = np.clip(((hi + ramp) - x) / ramp, 0.0, 1.0)
        return np.minimum(left, right)

    return g


def chebyshev_polynomial(k: int) -> Callable[[np.ndarray], np.ndarray]:
    """2 cos(k theta) as a function of x = 2 cos(theta) on [-2, 2]."""
    if k < 0:
        raise ValueError("k must be >= 0")

    def g(x: np.ndarray) -> np.ndarray:
        t = np.arccos(np.clip(np.asarray(x, dtype=float) / 2.0, -1.0, 1.0))
        return 2.0 * np.cos(k * t)

    return g


def coboundary(
    phi: Callable[[np.ndarray], np.ndarray], f: Callable[[np.ndarray], np.ndarray]
) -> Callable[[np.ndarray], np.ndarray]:
    """psi = phi - phi o f; its Birkhoff sums telescope, so the CLT
    variance degenerates."""
    return lambda x: phi(x) - phi(f(x))


def _as_1d_map(m: HenonMap | Callable[[np.ndarray], np.ndarray]):
    if isinstance(m, HenonMap):
        if m.b != 0.0:
            raise ValueError("1-D statistics need the b = 0 reduction")
        a = m.a
        return lambda x: x * x + a
    return m


# ---------------------------------------------------------------------------
# covariance decay


@dataclass(frozen=True)
class DecayFit:
    """Log-linear fit of |Cov_n| (or a return-time tail) over usable lags.

    kappa = exp(slope) of the regression restricted to lags whose value
    exceeds noise_floor.  When fewer than 2 lags survive, every measured
    covariance is consistent with zero and the fit degenerates: kappa = 0,
    r2 = 1 by convention (decay faster than the sample can resolve).
    exponential is the verdict kappa < 1.
    """

    lags: tuple[int, ...]
    values: tuple[float, ...]
    kappa: float
    r2: float
    noise_floor: float
    used: tuple[int, ...]
    degenerate: bool
    exponential: bool

    def to_dict(self) -> dict:
        return {
            "lags": list(self.lags),
            "values": list(self.values),
            "kappa": self.kappa,
            "r2": self.r2,
            "noise_floor": self.noise_floor,
            "used": list(self.used),
            "degenerate": self.degenerate,
            "exponential": self.exponential,
        }


def _fit_decay(
    lags: np.ndarray, vals: np.ndarray, floor: float
) -> tuple[float, float, tuple[int, ...], bool]:
    usable = np.abs(vals) > floor
    used = lags[usable]
    if used.size < 2:
        return 0.0, 1.0, tuple(int(v) for v in used), True
    y = np.log(np.abs(vals[usable]))
    slope, intercept = np.polyfit(used, y, 1)
    pred = slope * used + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(math.exp(slope)), r2, tuple(int(v) for v in used), False


def covariance_decay(
    m: HenonMap | Callable[[np.ndarray], np.ndarray],
    measure: EmpiricalMeasure,
    g: Callable[[np.ndarray], np.ndarray],
    h: Callable[[np.ndarray], np.ndarray],
    n_max: int,
    noise_factor: float = 3.0,
) -> DecayFit:
    """Cov_n = E[g (h o f^n)] - E[g] E[h o f^n] over the pushed sample.

    Lags whose |Cov_n| sits below noise_factor * sd(g) sd(h) / sqrt(N_eff)
    carry no signal and are excluded from the kappa regression.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    f = _as_1d_map(m)
    x = measure.points.astype(float)
    if x.ndim != 1:
        raise ValueError("covariance decay works on 1-D samples")
    w = measure.weights
    n_eff = measure.n_effective()
    if measure.n < 10 * n_max:
        new_max = max(1, measure.n // 10)
        warnings.warn(
            f"sample of {measure.n} too small for n_max={n_max}; "
            f"truncating to {new_max}",
            stacklevel=2,
        )
        n_max = new_max

    gvals = np.asarray(g(x), dtype=float)
    mg = float(np.sum(w * gvals))
    sd_g = math.sqrt(max(float(np.sum(w * (gvals - mg) ** 2)), 0.0))
    hx = np.asarray(h(x), dtype=float)
    mh0 = float(np.sum(w * hx))
    sd_h = math.sqrt(max(float(np.sum(w * (hx - mh0) ** 2)), 0.0))
    floor = noise_factor * sd_g * sd_h / math.sqrt(n_eff)

    covs = []
    cur = x.copy()
    for _n in range(1, n_max + 1):
        cur = f(cur)
        if not np.all(np.isfinite(cur)) or np.max(np.abs(cur)) > 1e6:
            raise RuntimeError(f"sample escaped after {_n} steps")
        hn = np.asarray(h(cur), dtype=float)
        covs.append(float(np.sum(w * gvals * hn)) - mg * float(np.sum(w * hn)))
    lags = np.arange(1, n_max + 1)
    vals = np.array(covs)
    kappa, r2, used, degen = _fit_decay(lags, vals, floor)
    kappa = min(kappa, 1.0) if not degen else kappa
    return DecayFit(
        lags=tuple(int(v) for v in lags),
        values=tuple(float(v) for v in vals),
        kappa=kappa,
        r2=r2,
        noise_floor=floor,
        used=used,
        degenerate=degen,
        exponential=bool(kappa < 1.0),
    )


# ---------------------------------------------------------------------------
# CLT


@dataclass(frozen=True)
class CltReport:
    statistic: float
    p_value: float
    sigma_hat: float
    static_sd: float
    degenerate: bool
    passed: bool | None
    trials: int
    n: int
    alpha: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "sigma_hat": self.sigma_hat,
            "static_sd": self.static_sd,
            "degenerate": self.degenerate,
            "passed": self.passed,
            "trials": self.trials,
            "n": self.n,
            "alpha": self.alpha,
            "seed": self.seed,
        }


def clt_test(
    m: HenonMap | Callable[[np.ndarray], np.ndarray],
    measure: EmpiricalMeasure,
    psi: Callable[[np.ndarray], np.ndarray],
    n: int,
    trials: int,
    alpha: float,
    seed: int = 0,
) -> CltReport:
    """Distributional normality of normalized Birkhoff sums.

    Each trial draws a start from the measure, iterates n steps, and
    forms S = (sum psi(x_k) - n mean) / sqrt(n); psi is centered by the
    grand mean over all visited points.  The trial sample is KS-tested
    against Normal(0, sigma_hat).  A near-zero sigma_hat (coboundary
    psi = phi - phi o f, or psi = 0) yields degenerate = True and no
    normality verdict.
    """
    if trials < 500:
        raise ValueError("need at least 500 trials")
    if n < 1:
        raise ValueError("n must be >= 1")
    f = _as_1d_map(m)
    rng = np.random.default_rng(seed)
    idx = rng.choice(measure.n, size=trials, p=measure.weights)
    x = measure.points[idx].astype(float)

    sums = np.zeros(trials)
    # one shared pass: Birkhoff sums plus running moments of psi over all
    # visited points (for centering and the static scale)
    acc1 = 0.0
    acc2 = 0.0
    for _k in range(n):
        x = f(x)
        v = np.asarray(psi(x), dtype=float)
        sums += v
        acc1 += float(v.sum())
        acc2 += float(np.sum(v * v))
    total = n * trials
    grand = acc1 / total
    static_sd = math.sqrt(max(acc2 / total - grand * grand, 0.0))

    S = (sums - n * grand) / math.sqrt(n)
    sigma_hat = float(np.std(S))

    if static_sd == 0.0 or sigma_hat < 0.05 * static_sd:
        return CltReport(
            statistic=math.nan,
            p_value=math.nan,
            sigma_hat=sigma_hat,
            static_sd=static_sd,
            degenerate=True,
            passed=None,
            trials=trials,
            n=n,
            alpha=alpha,
            seed=seed,
        )

    ks = sps.kstest(S, "norm", args=(0.0, sigma_hat))
    return CltReport(
        statistic=float(ks.statistic),
        p_value=float(ks.pvalue),
        sigma_hat=sigma_hat,
        static_sd=static_sd,
        degenerate=False,
        passed=bool(ks.pvalue >= alpha),
        trials=trials,
        n=n,
        alpha=alpha,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# dimensions


def young_dimension(h: float, lambda1: float, lambda2: float) -> float:
    """h (1/lambda1 - 1/lambda2); lambda2 = -inf contributes 0."""
    if h < 0:
        raise ValueError("entropy must be nonnegative")
    if not lambda1 > 0:
        raise ValueError("lambda1 must be positive")
    if not lambda2 < 0:
        raise ValueError("lambda2 must be negative")
    inv2 = 0.0 if math.isinf(lambda2) else 1.0 / lambda2
    return h * (1.0 / lambda1 - inv2)


def box_count_table(
    points: np.ndarray, scales: Sequence[float]
) -> list[tuple[float, int]]:
    """Occupied-box counts N(eps) per scale."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    out = []
    for eps in scales:
        if eps <= 0:
            raise ValueError("scales must be positive")
        boxes = np.unique(np.floor(pts / eps), axis=0)
        out.append((float(eps), int(len(boxes))))
    return out


def box_dimension(points: np.ndarray, scales: Sequence[float]) -> float:
    """Least-squares slope of log N(eps) against log 1/eps.

    Scales outside the scaling window (N(eps) <= 2, or saturated at more
    than half the sample) are dropped; fewer than 3 usable scales is an
    error.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    table = box_count_table(pts, scales)
    usable = [(e, c) for e, c in table if 2 <= c <= max(4, n // 2)]
    if len(usable) < 3:
        raise ValueError(
            f"only {len(usable)} usable scales (need >= 3); "
            "widen the scale range or add points"
        )
    xs = np.log(1.0 / np.array([e for e, _ in usable]))
    ys = np.log(np.array([c for _, c in usable], dtype=float))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def segment_sample(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    return np.column_stack([x, np.zeros(n)])


def square_sample(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.random((n, 2))


def cantor_sample(n: int, seed: int, digits: int = 26) -> np.ndarray:
    """Uniform (Hausdorff-measure) sample of the middle-thirds Cantor set."""
    rng = np.random.default_rng(seed)
    trits = 2 * rng.integers(0, 2, size=(n, digits))
    x = trits @ (3.0 ** -np.arange(1, digits + 1))
    return np.column_stack([x, np.zeros(n)])


# ---------------------------------------------------------------------------
# return-time decay


def return_decay_check(
    chain: MaxEntropyChain | None,
    census: LoopCensus,
    h_top: float,
    noise_floor: float = 0.0,
) -> DecayFit:
    """Decay of pi_e Z*_n e^{-n h_top}.

    chain = None uses pi_e = 1 (synthetic censuses carry no stationary
    law).  A tail with at most 2 positive entries is the finite-support
    degenerate case and passes.  Otherwise kappa = exp(fit slope); the
    exponential verdict is kappa < 1.  kappa is not clipped here: a
    non-recurrent tail legitimately fits above 1.
    """
    pi_e = 1.0 if chain is None else chain.pi_of(census.base)
    lags = np.arange(1, census.horizon + 1)
    vals = np.array(
        [pi_e * census.zstar(int(nn)) * math.exp(-h_top * int(nn)) for nn in lags]
    )
    positive = vals > noise_floor
    used = lags[positive]
    if used.size <= 2:
        return DecayFit(
            lags=tuple(int(v) for v in lags),
            values=tuple(float(v) for v in vals),
            kappa=0.0,
            r2=1.0,
            noise_floor=noise_floor,
            used=tuple(int(v) for v in used),
            degenerate=True,
            exponential=True,
        )
    y = np.log(vals[positive])
    slope, intercept = np.polyfit(used, y, 1)
    pred = slope * used + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    kappa = float(math.exp(slope))
    return DecayFit(
        lags=tuple(int(v) for v in lags),
        values=tuple(float(v) for v in vals),
        kappa=kappa,
        r2=r2,
        noise_floor=noise_floor,
        used=tuple(int(v) for v in used),
        degenerate=False,
        exponential=bool(kappa < 1.0),
    )
