"""Latency distributions with bounded support.

Used both to generate susceptible event times and to compute population
truths by quadrature.  All sampling goes through the inverse CDF so draws are
fully determined by the supplied uniforms.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


def truncated_weibull_sample(shape, scale, t_b, u):
    """Inverse-CDF draw from a Weibull conditioned on ``[0, t_b]``.

    ``u`` may be a scalar or an array of uniforms in (0, 1); the output never
    exceeds ``t_b``.
    """
    if shape <= 0 or scale <= 0 or t_b <= 0:
        raise ValueError("shape, scale, and t_b must be positive")
    mass = -math.expm1(-((t_b / scale) ** shape))  # Weibull CDF at t_b
    u = np.asarray(u, dtype=float)
    out = scale * (-np.log1p(-u * mass)) ** (1.0 / shape)
    return np.minimum(out, t_b) if out.ndim else float(min(out, t_b))


@dataclass(frozen=True)
class BetaLatency:
    """Beta(alpha, beta) event times on [0, 1]."""

    alpha: float
    beta: float

    @property
    def support_end(self):
        return 1.0

    def sf(self, t):
        return stats.beta.sf(t, self.alpha, self.beta)

    def cdf(self, t):
        return stats.beta.cdf(t, self.alpha, self.beta)

    def pdf(self, t):
        return stats.beta.pdf(t, self.alpha, self.beta)

    def ppf(self, q):
        return stats.beta.ppf(q, self.alpha, self.beta)

    def label(self):
        return f"beta({self.alpha:g},{self.beta:g})"

    def to_dict(self):
        return {"kind": "beta", "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class TruncatedWeibullLatency:
    """Weibull(shape, scale) event times conditioned on [0, t_b]."""

    shape: float
    scale: float
    t_b: float

    def __post_init__(self):
        if self.shape <= 0 or self.scale <= 0 or self.t_b <= 0:
            raise ValueError("shape, scale, and t_b must be positive")

    @property
    def support_end(self):
        return self.t_b

    def _mass(self):
        return -math.expm1(-((self.t_b / self.scale) ** self.shape))

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        base = -np.expm1(-((np.clip(t, 0.0, self.t_b) / self.scale) ** self.shape))
        out = np.clip(base / self._mass(), 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def sf(self, t):
        return 1.0 - self.cdf(t)

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0.0) & (t <= self.t_b)
        dens = stats.weibull_min.pdf(t, self.shape, scale=self.scale) / self._mass()
        out = np.where(inside, dens, 0.0)
        return float(out) if out.ndim == 0 else out

    def ppf(self, q):
        return truncated_weibull_sample(self.shape, self.scale, self.t_b, q)

    def label(self):
        return f"truncated_weibull({self.shape:g},{self.scale:g},{self.t_b:g})"

    def to_dict(self):
        return {
            "kind": "truncated_weibull",
            "shape": self.shape,
            "scale": self.scale,
            "t_b": self.t_b,
        }


def latency_from_dict(spec):
    """Build a latency distribution from its JSON-style description."""
    kind = spec.get("kind")
    if kind == "beta":
        return BetaLatency(float(spec["alpha"]), float(spec["beta"]))
    if kind == "truncated_weibull":
        return TruncatedWeibullLatency(
            float(spec["shape"]), float(spec["scale"]), float(spec["t_b"])
        )
    raise ValueError(f"unknown latency kind {kind!r}")
