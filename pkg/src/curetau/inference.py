"""Bootstrap engine, normal-approximation intervals, and the cure-rate test.

Resampling is nonparametric and within-arm, so two-sample statistics condition
on the arm sizes.  Intervals are normal approximations built from the
bootstrap standard deviation, which matches the convention that makes the
reported confidence interval symmetric about the point estimate and its
p-value the two-sided normal tail.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .cure import eta_extrapolated, eta_tail_from_sample
from .errors import EstimationError, UnstableStatisticError
from .km import km_fit, risk_table
from .seeding import seed_tuple, stream


def z_quantile(p):
    """Standard-normal quantile (inverse CDF)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return float(special.ndtri(p))


def normal_interval(point, sd, level=0.95):
    """Symmetric normal interval ``point +- z * sd`` at the given level."""
    if sd < 0:
        raise ValueError("sd must be non-negative")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    half = z_quantile((1.0 + level) / 2.0) * sd
    return (point - half, point + half)


def two_sided_p(point, sd):
    """Two-sided normal tail probability of ``point / sd``."""
    if sd < 0:
        raise ValueError("sd must be non-negative")
    if sd == 0:
        return 1.0 if point == 0 else 0.0
    return float(special.erfc(abs(point) / sd / math.sqrt(2.0)))


@dataclass(frozen=True)
class BootstrapResult:
    """Replicate values (missing ones as NaN rows), point estimate, and SD."""

    replicate_values: np.ndarray
    point: np.ndarray | float
    sd: np.ndarray | float
    seed: tuple
    R: int
    n_missing: int

    @property
    def n_defined(self):
        return self.R - self.n_missing


def _resample(samples, rng):
    out = []
    for sample in samples:
        idx = rng.integers(0, sample.n, size=sample.n)
        out.append(sample.resampled(idx))
    return tuple(out)


def bootstrap_stats(samples, statistic, R, seed=0):
    """Bootstrap a statistic of one or two samples.

    ``samples`` is a Sample or a pair of Samples; each arm is resampled with
    replacement independently.  ``statistic`` receives the (re)samples as
    positional arguments and may return a float or a 1-d array.  Replicates
    on which it raises ``EstimationError`` are recorded as missing and
    excluded from the standard deviation; more than 50% missing raises
    ``UnstableStatisticError``.  Replicate ``r`` draws from the RNG stream
    ``(seed..., r)``, so results are independent of evaluation order.
    """
    if R < 2:
        raise ValueError("R must be at least 2")
    if not isinstance(samples, (tuple, list)):
        samples = (samples,)
    samples = tuple(samples)
    seed = seed_tuple(seed)

    point = np.asarray(statistic(*samples), dtype=float)
    scalar = point.ndim == 0
    width = 1 if scalar else point.shape[0]

    values = np.full((R, width), np.nan)
    n_missing = 0
    for r in range(R):
        rng = stream(seed, r)
        try:
            replicate = statistic(*_resample(samples, rng))
        except EstimationError:
            n_missing += 1
            continue
        values[r, :] = np.asarray(replicate, dtype=float)
    if n_missing > R / 2 or R - n_missing < 2:
        raise UnstableStatisticError(
            f"statistic undefined on {n_missing} of {R} bootstrap replicates"
        )
    defined = values[~np.isnan(values[:, 0])]
    sd = np.std(defined, axis=0, ddof=1)
    if scalar:
        return BootstrapResult(values[:, 0], float(point), float(sd[0]),
                               seed, R, n_missing)
    return BootstrapResult(values, point, sd, seed, R, n_missing)


@dataclass(frozen=True)
class TestResult:
    """Difference in cure rates with its normal CI and two-sided p-value."""

    difference: float
    ci: tuple
    p_value: float
    method: str
    sd: float
    level: float
    R: int
    n_missing: int


def _eta_value_tail(sample):
    return eta_tail_from_sample(sample).value


def _eta_value_extrapolated(sample, b):
    curve = km_fit(sample, "event")
    t_k = risk_table(sample).last_event_time
    return eta_extrapolated(curve, b, t_k).value


def cure_difference_test(sample0, sample1, method="tail", b0=None, b1=None,
                         R=2000, seed=0, level=0.95):
    """Test the cure-rate difference (arm 1 minus arm 0) via the bootstrap.

    ``method="extrapolated"`` uses the tail-corrected estimates with the
    given per-arm scale factors ``b0`` and ``b1``.
    """
    if method == "tail":
        def statistic(s0, s1):
            return _eta_value_tail(s1) - _eta_value_tail(s0)
    elif method == "extrapolated":
        if b0 is None or b1 is None:
            raise ValueError("extrapolated method requires b0 and b1")

        def statistic(s0, s1):
            return _eta_value_extrapolated(s1, b1) - _eta_value_extrapolated(s0, b0)
    else:
        raise ValueError(f"method must be 'tail' or 'extrapolated', got {method!r}")

    boot = bootstrap_stats((sample0, sample1), statistic, R=R, seed=seed)
    ci = normal_interval(boot.point, boot.sd, level)
    return TestResult(
        difference=boot.point,
        ci=ci,
        p_value=two_sided_p(boot.point, boot.sd),
        method=method,
        sd=boot.sd,
        level=level,
        R=R,
        n_missing=boot.n_missing,
    )
