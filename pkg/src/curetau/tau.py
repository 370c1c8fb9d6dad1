"""Two-sample tau processes and their population-truth quadrature oracle.

The tau process accumulates, over pairs made of one subject per arm, the sign
of the comparison of their event times, weighted by inverse censoring
probabilities.  The susceptible variant additionally down-weights censored
subjects by the estimated probability that they are susceptible and rescales
by the susceptible fractions, so it targets the latency distributions alone.
"""

import io
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DegenerateWeightError, EstimationError, ParseError, ToleranceError
from .km import km_fit
from .susceptible import location_scale_curve


@dataclass(frozen=True)
class TauCurve:
    """A tau process evaluated on a time grid, with optional bootstrap bands."""

    grid: np.ndarray
    values: np.ndarray
    kind: str  # "overall" or "susceptible"
    sd: np.ndarray | None = None
    ci_low: np.ndarray | None = None
    ci_high: np.ndarray | None = None

    def __call__(self, t):
        """Step evaluation; the process is 0 before the first grid time."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.grid, np.atleast_1d(t), side="right") - 1
        out = np.where(idx < 0, 0.0, self.values[np.maximum(idx, 0)])
        return float(out[0]) if t.ndim == 0 else out

    def with_bands(self, sd, ci_low, ci_high):
        return TauCurve(self.grid, self.values, self.kind,
                        np.asarray(sd, float), np.asarray(ci_low, float),
                        np.asarray(ci_high, float))

    def negated(self):
        lo = None if self.ci_high is None else -self.ci_high
        hi = None if self.ci_low is None else -self.ci_low
        return TauCurve(self.grid, -self.values, self.kind, self.sd, lo, hi)


@dataclass(frozen=True)
class PairTerm:
    """One cross-arm pair: comparison time, orderability, sign, and weights."""

    i: int
    j: int
    x_tilde: float
    orderable: int
    sign: int
    ipcw: float
    weight: float


def censoring_weight_factor(latency_survival_at_x, eta_value):
    """Down-weight for a censored subject observed at x.

    The factor is the conditional probability that the subject is susceptible
    and still event-free, ``(1-eta)*Sa(x) / ((1-eta)*Sa(x) + eta)``.  Returns
    ``nan`` for the undefined 0/0 case (``Sa(x) = 0`` with ``eta = 0``).
    """
    num = (1.0 - eta_value) * np.asarray(latency_survival_at_x, dtype=float)
    den = num + eta_value
    out = np.divide(num, den, out=np.full_like(num, np.nan), where=den > 0)
    return out


def _subject_weights(sample, eta):
    """Per-subject weight factor: 1 for events, the censoring factor otherwise."""
    event_curve = km_fit(sample, "event")
    latency, _ = location_scale_curve(
        event_curve, eta.value, clamp=eta.method == "extrapolated"
    )
    weights = np.ones(sample.n)
    censored = sample.status == 0
    if censored.any():
        sa = latency(sample.times[censored])
        weights[censored] = censoring_weight_factor(sa, eta.value)
    return weights


def _check_participating_nan(weights, own_times, opposite_event_times, arm):
    """A NaN weight only matters when the subject belongs to an orderable pair,
    i.e. when an opposite-arm event lies strictly below the subject's time."""
    nan_mask = np.isnan(weights)
    if not nan_mask.any():
        return weights
    below = np.searchsorted(np.sort(opposite_event_times),
                            own_times[nan_mask], side="left") > 0
    if below.any():
        i = np.flatnonzero(nan_mask)[np.argmax(below)]
        raise DegenerateWeightError(
            f"susceptibility weight is 0/0 for censored subject {i} in arm {arm}"
        )
    return np.where(nan_mask, 0.0, weights)


def _event_masses(events_arm, opposite_arm, g_own, g_other, w_event, w_opposite,
                  arm_label):
    """Signed mass placed at each of one arm's event times.

    An event at time x pairs with every opposite-arm subject observed
    strictly later, so its mass is ``w_event * (suffix weight sum beyond x)``
    divided by both censoring-survival left limits at x.
    """
    event_mask = events_arm.status == 1
    x_event = events_arm.times[event_mask]
    order = np.argsort(opposite_arm.times, kind="stable")
    opp_sorted = opposite_arm.times[order]
    suffix = np.concatenate((np.cumsum(w_opposite[order][::-1])[::-1], [0.0]))
    pos = np.searchsorted(opp_sorted, x_event, side="right")
    opp_weight = suffix[pos]
    opp_count = opp_sorted.size - pos

    g_prod = g_own(x_event, side="left") * g_other(x_event, side="left")
    bad = (g_prod <= 0.0) & (opp_count > 0)
    if bad.any():
        i = np.flatnonzero(event_mask)[np.argmax(bad)]
        raise DegenerateWeightError(
            f"censoring weight vanishes for the pairs of {arm_label} event "
            f"subject {i} at comparison time {x_event[np.argmax(bad)]!r}"
        )
    masses = np.where(opp_count > 0,
                      w_event[event_mask] * opp_weight
                      / np.where(g_prod > 0, g_prod, 1.0),
                      0.0)
    return x_event, masses, opp_count > 0


def _pair_masses(sample0, sample1, eta0=None, eta1=None):
    """All point masses of the pair sum: +1-signed at arm-0 event times
    (arm 1 outlives arm 0 there) and -1-signed at arm-1 event times."""
    if eta0 is None:
        w0 = np.ones(sample0.n)
        w1 = np.ones(sample1.n)
    else:
        w0 = _subject_weights(sample0, eta0)
        w1 = _subject_weights(sample1, eta1)
        event_times0 = sample0.times[sample0.status == 1]
        event_times1 = sample1.times[sample1.status == 1]
        w0 = _check_participating_nan(w0, sample0.times, event_times1, arm=0)
        w1 = _check_participating_nan(w1, sample1.times, event_times0, arm=1)
    g0 = km_fit(sample0, "censoring")
    g1 = km_fit(sample1, "censoring")
    x_up, mass_up, live_up = _event_masses(sample0, sample1, g0, g1, w0, w1,
                                           "arm-0")
    x_down, mass_down, live_down = _event_masses(sample1, sample0, g1, g0, w1, w0,
                                                 "arm-1")
    times = np.concatenate((x_up, x_down))
    masses = np.concatenate((mass_up, -mass_down))
    has_pairs = np.concatenate((live_up, live_down))
    return times, masses, has_pairs


def _accumulate(times, masses, has_pairs, grid, normalizer):
    if grid is None:
        grid = np.unique(times[has_pairs])
    else:
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1 or (grid.size and np.any(np.diff(grid) <= 0)):
            raise ValueError("grid must be a 1-d strictly increasing array")
    bucket = np.searchsorted(grid, times, side="left")
    sums = np.bincount(bucket, weights=masses, minlength=grid.size + 1)[: grid.size]
    return grid, np.cumsum(sums) / normalizer


def _canonical_first(sample0, sample1):
    """Deterministic orientation so that swapping arms negates results exactly."""
    key0 = (sample0.n, sample0.times.tobytes(), sample0.status.tobytes())
    key1 = (sample1.n, sample1.times.tobytes(), sample1.status.tobytes())
    return key0 <= key1


def tau_curve(sample0, sample1, grid=None):
    """Overall tau process comparing arm 1 against arm 0.

    Positive values favor arm 1.  The default grid is the set of distinct
    orderable comparison times, where the process actually moves.
    """
    if sample0.n == 0 or sample1.n == 0:
        raise ValueError("both samples must be non-empty")
    if not _canonical_first(sample0, sample1):
        return tau_curve(sample1, sample0, grid=grid).negated()
    times, masses, has_pairs = _pair_masses(sample0, sample1)
    grid, values = _accumulate(times, masses, has_pairs, grid,
                               sample0.n * sample1.n)
    return TauCurve(grid=grid, values=values, kind="overall")


def tau_a_curve(sample0, sample1, eta0, eta1, grid=None):
    """Susceptible tau process given per-arm cure-rate estimates.

    Passing extrapolated cure-rate estimates yields the insufficient-
    follow-up variant of the process.
    """
    if sample0.n == 0 or sample1.n == 0:
        raise ValueError("both samples must be non-empty")
    if eta0.value >= 1.0 or eta1.value >= 1.0:
        raise EstimationError("degenerate mixture: cure rate at or above 1")
    if not _canonical_first(sample0, sample1):
        return tau_a_curve(sample1, sample0, eta1, eta0, grid=grid).negated()
    times, masses, has_pairs = _pair_masses(sample0, sample1, eta0, eta1)
    normalizer = sample0.n * sample1.n * (1.0 - eta0.value) * (1.0 - eta1.value)
    grid, values = _accumulate(times, masses, has_pairs, grid, normalizer)
    return TauCurve(grid=grid, values=values, kind="susceptible")


def pair_table(sample0, sample1, eta0=None, eta1=None):
    """Reference per-pair breakdown (quadratic; intended for small samples)."""
    g0 = km_fit(sample0, "censoring")
    g1 = km_fit(sample1, "censoring")
    if eta0 is not None:
        w0 = _subject_weights(sample0, eta0)
        w1 = _subject_weights(sample1, eta1)
    terms = []
    for i in range(sample0.n):
        for j in range(sample1.n):
            x0, d0 = float(sample0.times[i]), int(sample0.status[i])
            x1, d1 = float(sample1.times[j]), int(sample1.status[j])
            x_tilde = min(x0, x1)
            orderable = int((x0 < x1 and d0 == 1) or (x0 > x1 and d1 == 1))
            g_prod = g0(x_tilde, side="left") * g1(x_tilde, side="left")
            ipcw = 1.0 / g_prod if g_prod > 0 else np.inf
            weight = float(w0[i] * w1[j]) if eta0 is not None else 1.0
            terms.append(
                PairTerm(
                    i=i,
                    j=j,
                    x_tilde=x_tilde,
                    orderable=orderable,
                    sign=int(np.sign(x1 - x0)),
                    ipcw=ipcw,
                    weight=weight,
                )
            )
    return terms


_QUAD_TOL = 1e-9


def _quad(fn, upper):
    if upper <= 0:
        return 0.0
    out = integrate.quad(fn, 0.0, upper, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200,
                         full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3 or abserr > 1e-7 * max(1.0, abs(value)):
        raise ToleranceError(f"quadrature error estimate {abserr:g} too large")
    return value


def true_tau_quadrature(dist0, dist1, eta0, eta1, t, kind="susceptible"):
    """Population tau value at time ``t`` by adaptive quadrature.

    ``kind="susceptible"`` integrates the latency distributions directly;
    ``kind="overall"`` integrates the cure mixtures, where each arm's
    survival is ``(1-eta)*Sa + eta`` and its event density carries the
    factor ``1-eta``.
    """
    if kind not in ("overall", "susceptible"):
        raise ValueError(f"kind must be 'overall' or 'susceptible', got {kind!r}")
    if t <= 0:
        return 0.0
    if kind == "susceptible":
        first = _quad(lambda u: dist1.sf(u) * dist0.pdf(u), min(t, dist0.support_end))
        second = _quad(lambda u: dist0.sf(u) * dist1.pdf(u), min(t, dist1.support_end))
        return first - second
    keep0 = 1.0 - eta0
    keep1 = 1.0 - eta1
    first = _quad(
        lambda u: (keep1 * dist1.sf(u) + eta1) * keep0 * dist0.pdf(u),
        min(t, dist0.support_end),
    )
    second = _quad(
        lambda u: (keep0 * dist0.sf(u) + eta0) * keep1 * dist1.pdf(u),
        min(t, dist1.support_end),
    )
    return first - second


def decomposition_residual(dist0, dist1, eta0, eta1, t):
    """Gap in the identity tying the overall and susceptible tau processes.

    The overall process equals the susceptible one scaled by both susceptible
    fractions, plus cross terms pairing each arm's susceptible failures with
    the other arm's cured subjects.
    """
    overall = true_tau_quadrature(dist0, dist1, eta0, eta1, t, kind="overall")
    susceptible = true_tau_quadrature(dist0, dist1, eta0, eta1, t, kind="susceptible")
    reconstructed = (
        (1.0 - eta0) * (1.0 - eta1) * susceptible
        + (1.0 - eta0) * eta1 * dist0.cdf(min(t, dist0.support_end))
        - (1.0 - eta1) * eta0 * dist1.cdf(min(t, dist1.support_end))
    )
    return abs(overall - reconstructed)


def write_tau_csv(curve, target=None):
    """Write ``t,value[,sd,lo,hi]`` rows for a tau curve."""
    buffer = target if target is not None else io.StringIO()
    if curve.sd is None:
        buffer.write("t,value\n")
        for t, v in zip(curve.grid, curve.values):
            buffer.write(f"{float(t)!r},{float(v)!r}\n")
    else:
        buffer.write("t,value,sd,lo,hi\n")
        for t, v, s, lo, hi in zip(curve.grid, curve.values, curve.sd,
                                   curve.ci_low, curve.ci_high):
            buffer.write(f"{float(t)!r},{float(v)!r},{float(s)!r},"
                         f"{float(lo)!r},{float(hi)!r}\n")
    if target is None:
        return buffer.getvalue()
    return None


def read_tau_csv(source, kind="overall"):
    """Parse rows written by :func:`write_tau_csv` back into a TauCurve."""
    text = source if isinstance(source, str) else source.read()
    rows = text.splitlines()
    if not rows:
        raise ParseError("empty tau curve file", 1)
    header = [h.strip().lower() for h in rows[0].split(",")]
    if header[:2] != ["t", "value"]:
        raise ParseError("tau curve header must start with 't,value'", 1)
    with_bands = header == ["t", "value", "sd", "lo", "hi"]
    columns = [[] for _ in header]
    for line_no, row in enumerate(rows[1:], start=2):
        if not row.strip():
            continue
        fields = row.split(",")
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", line_no)
        try:
            for store, field in zip(columns, fields):
                store.append(float(field))
        except ValueError:
            raise ParseError(f"malformed number in {row!r}", line_no) from None
    grid = np.asarray(columns[0])
    values = np.asarray(columns[1])
    curve = TauCurve(grid=grid, values=values, kind=kind)
    if with_bands:
        curve = curve.with_bands(columns[2], columns[3], columns[4])
    return curve
