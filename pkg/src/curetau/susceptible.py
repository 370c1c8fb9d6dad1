"""Latency (susceptible) survival estimation and its self-consistency check.

The canonical estimator is the location-scale shift of the event-survival
curve, ``(S(t) - eta) / (1 - eta)``.  With the tail cure-rate estimate this
coincides with two other representations built from the adjusted risk table:
an IPCW average and a product-limit form.  The module computes all three,
records their disagreement, and can verify that the product-limit form solves
the mass-redistribution self-consistency equation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .km import km_fit, risk_table
from .stepfun import StepFunction


@dataclass(frozen=True)
class SusceptibleCurve:
    """Latency survival curve plus bookkeeping about how it was obtained."""

    curve: StepFunction
    eta_used: "CureRateEstimate"  # noqa: F821 - type lives in cure.py
    form_divergence: float
    clamped: bool


def location_scale_curve(event_curve, eta_value, clamp=False):
    """Shift-and-rescale the event-survival curve by a cure-rate value."""
    if eta_value >= 1.0:
        raise EstimationError("degenerate mixture: cure rate at or above 1")
    values = (event_curve.y - eta_value) / (1.0 - eta_value)
    clamped = False
    if clamp:
        clipped = np.clip(values, 0.0, 1.0)
        clamped = bool(np.any(clipped != values))
        values = clipped
    return StepFunction(event_curve.x, values, initial_value=1.0), clamped


def ipcw_latency_curve(table):
    """IPCW form: the adjusted at-risk tail over the susceptible sample size."""
    values = np.concatenate((table.y_tilde[1:], [0.0])) / table.n_a_hat
    return StepFunction(table.times, values, initial_value=1.0)


def product_limit_latency_curve(table):
    """Product-limit form over the adjusted event and at-risk counts."""
    factors = 1.0 - table.d_tilde / table.y_tilde
    return StepFunction(table.times, np.cumprod(factors), initial_value=1.0)


def susceptible_curve(sample, eta):
    """Latency survival estimate for a sample, given a cure-rate estimate.

    The canonical output is the location-scale form.  When ``eta`` is the
    tail estimate the IPCW and product-limit forms are also computed and the
    largest pointwise disagreement is recorded; when ``eta`` is extrapolated
    the curve is clamped into [0, 1] and flagged if clamping changed it.
    """
    if sample.n_events == 0:
        raise EstimationError("no events: latency survival is undefined")
    if eta.value >= 1.0:
        raise EstimationError("degenerate mixture: cure rate at or above 1")
    event_curve = km_fit(sample, "event")
    extrapolated = eta.method == "extrapolated"
    curve, clamped = location_scale_curve(event_curve, eta.value, clamp=extrapolated)
    divergence = math.nan
    if eta.method == "tail":
        table = risk_table(sample)
        ipcw = ipcw_latency_curve(table)
        prodlim = product_limit_latency_curve(table)
        divergence = max(
            float(np.max(np.abs(curve.y - ipcw.y))),
            float(np.max(np.abs(curve.y - prodlim.y))),
        )
    return SusceptibleCurve(
        curve=curve, eta_used=eta, form_divergence=divergence, clamped=clamped
    )


def _at_risk_counts(sample, times, strict=False):
    """Number of subjects with ``X >= t`` (or ``X > t`` when strict)."""
    sorted_times = np.sort(sample.times)
    side = "right" if strict else "left"
    return sample.n - np.searchsorted(sorted_times, times, side=side)


def phi_hat(sample, eta):
    """Susceptible proportion of the risk set at each distinct observed time.

    ``phi(t) = 1 - eta * G(t-) / (Y(t)/n)`` with ``G`` the censoring survival
    curve and ``Y(t)`` the number at risk.  The returned step function takes
    the value ``phi(x_k)`` on ``[x_k, x_{k+1})`` and raises past the largest
    observation, where the risk set is empty.
    """
    if sample.n == 0:
        raise ValueError("sample is empty")
    censor_curve = km_fit(sample, "censoring")
    distinct = np.unique(sample.times)
    at_risk = _at_risk_counts(sample, distinct)
    g_left = censor_curve(distinct, side="left")
    values = 1.0 - eta.value * g_left / (at_risk / sample.n)
    return StepFunction(
        distinct, values, initial_value=1.0 - eta.value, domain_end=float(distinct[-1])
    )


def h1a_hat(sample, eta):
    """Sub-survival estimate of being susceptible and still at risk after t.

    ``H1a(t) = Y(t+)/n - eta * G(t)``, a right-continuous step function over
    the distinct observed times.
    """
    if sample.n == 0:
        raise ValueError("sample is empty")
    censor_curve = km_fit(sample, "censoring")
    distinct = np.unique(sample.times)
    beyond = _at_risk_counts(sample, distinct, strict=True)
    values = beyond / sample.n - eta.value * censor_curve(distinct)
    return StepFunction(distinct, values, initial_value=1.0 - eta.value)


@dataclass(frozen=True)
class SelfConsistencyReport:
    """Residuals of the mass-redistribution equation at the observed times."""

    times: np.ndarray
    residuals: np.ndarray
    max_residual: float
    phi_curve: StepFunction
    h1a_curve: StepFunction


def _phi_right_limits(sample, eta, censored_times):
    """phi evaluated just after each censored time.

    Past the largest observation both the numerator and the empty risk set
    vanish; that 0/0 is resolved to phi = 1, and the corresponding term in
    the self-consistency sum is annihilated by the candidate being 0 there.
    """
    censor_curve = km_fit(sample, "censoring")
    beyond = _at_risk_counts(sample, censored_times, strict=True)
    g_right = censor_curve(censored_times)
    numerator = eta.value * g_right
    out = np.ones_like(numerator)
    live = beyond > 0
    out[live] = 1.0 - numerator[live] * sample.n / beyond[live]
    if np.any(~live & (numerator > 0)):
        bad = censored_times[~live & (numerator > 0)][0]
        raise EstimationError(f"susceptible proportion undefined just after {bad!r}")
    return out


def self_consistency_residual(candidate, sample, eta):
    """Residual of the self-consistency equation for a candidate latency curve.

    At each distinct observed time ``t`` the residual is::

        n*(1-eta)*candidate(t)
          - sum over censored X_i <= t of phi(X_i+) * candidate(t)/candidate(X_i)
          - n * H1a(t)

    Terms where both ``candidate(t)`` and ``candidate(X_i)`` vanish contribute
    zero; a zero denominator with a nonzero numerator raises.
    """
    times = np.unique(sample.times)
    phi_curve = phi_hat(sample, eta)
    h1a_curve = h1a_hat(sample, eta)
    cand_t = np.asarray(candidate(times), dtype=float)

    censored = sample.status == 0
    censored_times = sample.times[censored]
    n = sample.n
    if censored_times.size:
        phi_plus = _phi_right_limits(sample, eta, censored_times)
        cand_c = np.asarray(candidate(censored_times), dtype=float)
        include = censored_times[:, None] <= times[None, :]
        live = include & (cand_t > 0.0)[None, :]
        bad = live & (cand_c == 0.0)[:, None]
        if np.any(bad):
            where = times[np.where(bad)[1][0]]
            raise EstimationError(f"0/0 outside the stated convention at time {where!r}")
        safe_c = np.where(cand_c > 0.0, cand_c, 1.0)
        ratio = np.where(live, cand_t[None, :] / safe_c[:, None], 0.0)
        redistributed = (phi_plus[:, None] * ratio).sum(axis=0)
    else:
        redistributed = np.zeros_like(times)

    residuals = n * (1.0 - eta.value) * cand_t - redistributed - n * h1a_curve(times)
    return SelfConsistencyReport(
        times=times,
        residuals=residuals,
        max_residual=float(np.max(np.abs(residuals))) if times.size else 0.0,
        phi_curve=phi_curve,
        h1a_curve=h1a_curve,
    )
