"""Kaplan-Meier estimation and the censoring-adjusted risk table.

Both the event-time survival curve and the censoring-time survival curve are
product-limit estimates over their own jump times, with the number at risk
counting every subject still under observation.  The risk table carries, for
each distinct event time, the raw counts together with the
inverse-probability-of-censoring adjusted counts used by the latency
(susceptible-survival) estimators.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWeightError, NoEventsError
from .stepfun import StepFunction


def _distinct_counts(times, status):
    """Distinct observed times with event count, censor count, and at-risk count."""
    times = np.asarray(times, dtype=float)
    status = np.asarray(status)
    order = np.argsort(times, kind="mergesort")
    sorted_times = times[order]
    sorted_status = status[order]
    distinct, first = np.unique(sorted_times, return_index=True)
    events = np.add.reduceat(sorted_status, first) if distinct.size else np.array([])
    totals = np.diff(np.append(first, sorted_times.size))
    censored = totals - events
    at_risk = times.size - np.concatenate(([0], np.cumsum(totals)[:-1]))
    return distinct, events.astype(np.int64), censored.astype(np.int64), at_risk.astype(np.int64)


def km_fit(sample, target="event"):
    """Product-limit survival curve for the event or the censoring distribution.

    With ties between an event and a censoring at the same time, events are
    taken to precede censorings: both curves divide by the full number at
    risk at that time.
    """
    if target not in ("event", "censoring"):
        raise ValueError(f"target must be 'event' or 'censoring', got {target!r}")
    if sample.n == 0:
        raise ValueError("sample is empty")
    distinct, events, censored, at_risk = _distinct_counts(sample.times, sample.status)
    jumps = events if target == "event" else censored
    mask = jumps > 0
    factors = 1.0 - jumps[mask] / at_risk[mask]
    return StepFunction(distinct[mask], np.cumprod(factors), initial_value=1.0)


@dataclass(frozen=True)
class RiskTable:
    """Per distinct event time: counts, IPCW-adjusted counts, and their tails.

    ``d_tilde[k] = d[k] / g_left[k]`` with ``g_left`` the censoring-survival
    curve evaluated just before the event time, and ``y_tilde[k]`` is the
    tail sum of ``d_tilde`` from ``k`` on.  ``n_a_hat = y_tilde[0]`` estimates
    the number of susceptible subjects.
    """

    times: np.ndarray
    d: np.ndarray
    y: np.ndarray
    g_left: np.ndarray
    d_tilde: np.ndarray
    y_tilde: np.ndarray
    n_a_hat: float
    n: int

    @property
    def k(self):
        return int(self.times.size)

    @property
    def last_event_time(self):
        return float(self.times[-1])


def risk_table(sample):
    """Build the adjusted risk table; requires at least one event."""
    if sample.n == 0:
        raise ValueError("sample is empty")
    if sample.n_events == 0:
        raise NoEventsError("no events: the adjusted risk table is undefined")
    distinct, events, _, at_risk = _distinct_counts(sample.times, sample.status)
    mask = events > 0
    event_times = distinct[mask]
    d = events[mask]
    y = at_risk[mask]
    censor_curve = km_fit(sample, target="censoring")
    g_left = censor_curve(event_times, side="left")
    if np.any(g_left <= 0.0):
        bad = event_times[np.asarray(g_left) <= 0.0][0]
        raise DegenerateWeightError(
            f"censoring survival vanishes just before event time {bad!r}"
        )
    d_tilde = d / g_left
    y_tilde = np.cumsum(d_tilde[::-1])[::-1]
    return RiskTable(
        times=event_times,
        d=d,
        y=y,
        g_left=np.asarray(g_left, dtype=float),
        d_tilde=d_tilde,
        y_tilde=y_tilde,
        n_a_hat=float(y_tilde[0]),
        n=sample.n,
    )
