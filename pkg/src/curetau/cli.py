"""Command-line front end: fit one sample, compare two arms, simulate, tune b.

Every artifact write is deterministic given the command line (including the
seed): floats are serialized with ``repr`` and JSON keys are sorted, so
repeated invocations produce byte-identical files.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cure import (
    DEFAULT_B_GRID,
    eta_extrapolated,
    eta_tail,
    select_b,
)
from .data import parse_csv, validate
from .errors import (
    CureTauError,
    DegenerateWindowError,
    EstimationError,
    ParseError,
    SelectionFailedError,
)
from .inference import bootstrap_stats, cure_difference_test, normal_interval
from .km import km_fit, risk_table
from .seeding import seed_tuple
from .simlab import run_experiment, preset, scenario_from_dict, TwoArmScenario
from .stepfun import write_curve_csv
from .susceptible import location_scale_curve, phi_hat, susceptible_curve
from .svgplot import step_plot_svg, tau_to_svg
from .tau import tau_a_curve, tau_curve, write_tau_csv

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ESTIMATION = 3


class _ValidationFailure(Exception):
    pass


def _write_text(directory, name, text):
    path = Path(directory) / name
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _read_sample(path):
    try:
        with open(path, "r", newline="") as fh:
            return parse_csv(fh)
    except OSError as exc:
        raise _ValidationFailure(f"cannot read {path}: {exc.strerror}") from exc


def _gate_on_validation(sample):
    report = validate(sample)
    if not report.ok:
        raise _ValidationFailure("; ".join(report.fatal))
    return report


def _emit_set(text):
    allowed = {"csv", "svg", "report"}
    items = {token.strip() for token in text.split(",") if token.strip()}
    unknown = items - allowed
    if unknown:
        raise _ValidationFailure(f"unknown emit target(s): {', '.join(sorted(unknown))}")
    return items


def _parse_grid(text):
    try:
        values = [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise _ValidationFailure(f"malformed grid {text!r}") from None
    if not values or any(b <= a for a, b in zip(values, values[1:])):
        raise _ValidationFailure("grid must be strictly increasing")
    return values


def _resolve_eta(sample, method, b_setting, seed, boot):
    """Cure-rate estimate per the chosen method, falling back to the tail
    estimate (and saying so) when the extrapolation window degenerates."""
    curve = km_fit(sample, "event")
    table = risk_table(sample)
    tail = eta_tail(curve, table)
    if method == "tail":
        return tail, None, None
    if b_setting != "auto":
        try:
            b_fixed = float(b_setting)
        except (TypeError, ValueError):
            raise _ValidationFailure(f"--b must be 'auto' or a number, got {b_setting!r}") from None
        if not 0.0 < b_fixed < 1.0:
            raise _ValidationFailure("--b must lie strictly inside (0, 1)")
    try:
        if b_setting == "auto":
            b_star, _ = select_b(sample, replicates=boot, seed=seed)
        else:
            b_star = b_fixed
        est = eta_extrapolated(curve, b_star, table.last_event_time)
    except (DegenerateWindowError, SelectionFailedError) as exc:
        note = f"extrapolation fell back to the tail estimate: {exc}"
        return tail, None, note
    if est.value >= 1.0:
        note = ("extrapolation fell back to the tail estimate: "
                "corrected cure rate reached 1")
        return tail, None, note
    return est, b_star, None


def _curve_rows_grid(curve):
    return np.concatenate(([0.0], curve.x))


def _json_report(directory, payload):
    return _write_text(directory, "report.json",
                       json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _interval_dict(point, sd, level):
    low, high = normal_interval(point, sd, level)
    return {"point": point, "sd": sd, "low": low, "high": high, "level": level}


def _cure_estimate_dict(est):
    return {
        "value": est.value,
        "method": est.method,
        "raw_value": est.raw_value,
        "b": est.b,
        "b_gamma_check": est.b_gamma_check,
    }


def _run_fit(args):
    emit = _emit_set(args.emit)
    sample = _read_sample(args.input)
    report = _gate_on_validation(sample)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    eta, b_used, fallback = _resolve_eta(
        sample, args.eta_method, args.b, seed_tuple(args.seed) + (1,), args.boot
    )
    survival = km_fit(sample, "event")
    censoring = km_fit(sample, "censoring")
    latency = susceptible_curve(sample, eta)
    phi = phi_hat(sample, eta)

    grid = _curve_rows_grid(survival)

    def statistic(s):
        curve = km_fit(s, "event")
        if eta.method == "tail":
            value = eta_tail(curve, risk_table(s)).value
        else:
            value = eta_extrapolated(curve, b_used, risk_table(s).last_event_time).value
        lat, _ = location_scale_curve(curve, value, clamp=eta.method == "extrapolated")
        return np.concatenate((curve(grid), lat(grid), [value]))

    boot = bootstrap_stats(sample, statistic, R=args.boot,
                           seed=seed_tuple(args.seed) + (0,))
    k = grid.size
    sd_s, sd_lat, sd_eta = boot.sd[:k], boot.sd[k:2 * k], float(boot.sd[-1])
    half = -normal_interval(0.0, 1.0, args.level)[0]

    def bands(values, sds):
        return values - half * sds, values + half * sds

    s_vals = survival(grid)
    lat_vals = latency.curve(grid)
    if "csv" in emit:
        _write_text(outdir, "survival.csv",
                    write_curve_csv(survival, bands=bands(s_vals, sd_s)))
        _write_text(outdir, "censoring_survival.csv", write_curve_csv(censoring))
        _write_text(outdir, "latency_survival.csv",
                    write_curve_csv(latency.curve, bands=bands(lat_vals, sd_lat)))
        _write_text(outdir, "susceptible_in_riskset.csv", write_curve_csv(phi))
    if "svg" in emit:
        _write_text(outdir, "survival.svg", step_plot_svg(
            [("event survival", survival.x, survival.y, 1.0,
              bands(survival.y, sd_s[1:])),
             ("censoring survival", censoring.x, censoring.y, 1.0, None)],
            title="Survival curves", y_label="survival"))
        _write_text(outdir, "latency_survival.svg", step_plot_svg(
            [("latency survival", latency.curve.x, latency.curve.y, 1.0,
              bands(lat_vals[1:], sd_lat[1:]))],
            title="Latency (susceptible) survival", y_label="survival"))
        _write_text(outdir, "susceptible_in_riskset.svg", step_plot_svg(
            [("susceptible share of risk set", phi.x, phi.y, phi.initial_value, None)],
            title="Susceptible proportion in the risk set", y_label="proportion"))
    eta_interval = _interval_dict(eta.value, sd_eta, args.level)
    if "report" in emit:
        _json_report(outdir, {
            "inputs": {
                "command": "fit",
                "path": str(args.input),
                "n": sample.n,
                "n_events": sample.n_events,
                "eta_method": args.eta_method,
                "seed": args.seed,
                "boot": args.boot,
                "level": args.level,
            },
            "estimates": {
                "cure_rate": _cure_estimate_dict(eta),
                "latency_form_divergence": latency.form_divergence,
                "latency_clamped": latency.clamped,
            },
            "intervals": {"cure_rate": eta_interval},
            "diagnostics": {
                "warnings": list(report.warnings),
                "fallback": fallback,
                "bootstrap_missing": boot.n_missing,
            },
        })
    print(f"cure_rate ({eta.method}): {eta.value:.4f} "
          f"[{eta_interval['low']:.4f}, {eta_interval['high']:.4f}]")
    if fallback:
        print(f"note: {fallback}", file=sys.stderr)
    return EXIT_OK


def _split_two_arm(sample):
    if not sample.has_arms:
        raise _ValidationFailure("two-sample comparison requires an 'arm' column")
    s0, s1 = sample.split_arms()
    for label, arm in ((0, s0), (1, s1)):
        if arm.n == 0:
            raise _ValidationFailure(f"no subjects in arm {label}")
        if arm.n_events == 0:
            raise _ValidationFailure(f"no events in arm {label}")
    return s0, s1


def _run_compare(args):
    emit = _emit_set(args.emit)
    sample = _read_sample(args.input)
    report = _gate_on_validation(sample)
    s0, s1 = _split_two_arm(sample)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    half = -normal_interval(0.0, 1.0, args.level)[0]

    etas = [eta_tail(km_fit(s, "event"), risk_table(s)) for s in (s0, s1)]
    curves = {}
    for label, arm, eta in ((0, s0, etas[0]), (1, s1, etas[1])):
        curves[label] = {
            "survival": km_fit(arm, "event"),
            "censoring": km_fit(arm, "censoring"),
            "latency": susceptible_curve(arm, eta).curve,
            "phi": phi_hat(arm, eta),
        }

    tau = tau_curve(s0, s1)
    tau_a = tau_a_curve(s0, s1, etas[0], etas[1], grid=tau.grid)

    def curve_statistic(r0, r1):
        e0 = eta_tail(km_fit(r0, "event"), risk_table(r0))
        e1 = eta_tail(km_fit(r1, "event"), risk_table(r1))
        return np.concatenate((
            tau_curve(r0, r1, grid=tau.grid).values,
            tau_a_curve(r0, r1, e0, e1, grid=tau.grid).values,
        ))

    boot = bootstrap_stats((s0, s1), curve_statistic, R=args.boot,
                           seed=seed_tuple(args.seed) + (0,))
    k = tau.grid.size
    tau = tau.with_bands(boot.sd[:k], tau.values - half * boot.sd[:k],
                         tau.values + half * boot.sd[:k])
    tau_a = tau_a.with_bands(boot.sd[k:], tau_a.values - half * boot.sd[k:],
                             tau_a.values + half * boot.sd[k:])

    test_tail = cure_difference_test(s0, s1, method="tail", R=args.boot,
                                     seed=seed_tuple(args.seed) + (1,),
                                     level=args.level)

    extrap = None
    if args.eta_method == "extrapolate":
        extrap = _compare_extrapolated(args, s0, s1, tau.grid, half)

    if "csv" in emit:
        for label in (0, 1):
            _write_text(outdir, f"survival_arm{label}.csv",
                        write_curve_csv(curves[label]["survival"]))
            _write_text(outdir, f"censoring_survival_arm{label}.csv",
                        write_curve_csv(curves[label]["censoring"]))
            _write_text(outdir, f"latency_survival_arm{label}.csv",
                        write_curve_csv(curves[label]["latency"]))
            _write_text(outdir, f"susceptible_in_riskset_arm{label}.csv",
                        write_curve_csv(curves[label]["phi"]))
        _write_text(outdir, "tau.csv", write_tau_csv(tau))
        _write_text(outdir, "tau_susceptible.csv", write_tau_csv(tau_a))
        if extrap is not None:
            for label in (0, 1):
                _write_text(outdir, f"latency_survival_extrap_arm{label}.csv",
                            write_curve_csv(extrap["latency"][label]))
            _write_text(outdir, "tau_susceptible_extrap.csv",
                        write_tau_csv(extrap["tau_a"]))
    if "svg" in emit:
        _write_text(outdir, "survival_both.svg", step_plot_svg(
            [(f"arm {label}", curves[label]["survival"].x,
              curves[label]["survival"].y, 1.0, None) for label in (0, 1)],
            title="Event survival by arm", y_label="survival"))
        _write_text(outdir, "latency_survival_both.svg", step_plot_svg(
            [(f"arm {label}", curves[label]["latency"].x,
              curves[label]["latency"].y, 1.0, None) for label in (0, 1)],
            title="Latency survival by arm", y_label="survival"))
        _write_text(outdir, "cured_in_riskset.svg", step_plot_svg(
            [(f"arm {label}", curves[label]["phi"].x,
              1.0 - curves[label]["phi"].y,
              1.0 - curves[label]["phi"].initial_value, None)
             for label in (0, 1)],
            title="Cured proportion in the risk set", y_label="proportion"))
        _write_text(outdir, "tau.svg",
                    tau_to_svg(tau, "tau", title="Treatment-effect process",
                               y_label="tau"))
        _write_text(outdir, "tau_susceptible.svg",
                    tau_to_svg(tau_a, "susceptible tau",
                               title="Susceptible treatment-effect process",
                               y_label="tau"))
        if extrap is not None:
            _write_text(outdir, "latency_survival_extrap_both.svg", step_plot_svg(
                [(f"arm {label}", extrap["latency"][label].x,
                  extrap["latency"][label].y, 1.0, None) for label in (0, 1)],
                title="Latency survival by arm (extrapolated cure rate)",
                y_label="survival"))
            _write_text(outdir, "tau_susceptible_extrap.svg",
                        tau_to_svg(extrap["tau_a"], "susceptible tau",
                                   title="Susceptible process (extrapolated)",
                                   y_label="tau"))

    payload = {
        "inputs": {
            "command": "compare",
            "path": str(args.input),
            "n": sample.n,
            "n0": s0.n,
            "n1": s1.n,
            "eta_method": args.eta_method,
            "seed": args.seed,
            "boot": args.boot,
            "level": args.level,
        },
        "estimates": {
            "cure_rate_arm0": _cure_estimate_dict(etas[0]),
            "cure_rate_arm1": _cure_estimate_dict(etas[1]),
            "tau_end": float(tau.values[-1]) if tau.values.size else 0.0,
            "tau_susceptible_end":
                float(tau_a.values[-1]) if tau_a.values.size else 0.0,
        },
        "intervals": {
            "cure_difference": {
                "point": test_tail.difference,
                "sd": test_tail.sd,
                "low": test_tail.ci[0],
                "high": test_tail.ci[1],
                "level": test_tail.level,
                "p_value": test_tail.p_value,
                "method": "tail",
            },
        },
        "diagnostics": {
            "warnings": list(report.warnings),
            "bootstrap_missing": boot.n_missing,
        },
    }
    if extrap is not None:
        payload["estimates"]["cure_rate_extrap_arm0"] = _cure_estimate_dict(
            extrap["etas"][0])
        payload["estimates"]["cure_rate_extrap_arm1"] = _cure_estimate_dict(
            extrap["etas"][1])
        payload["intervals"]["cure_difference_extrapolated"] = {
            "point": extrap["test"].difference,
            "sd": extrap["test"].sd,
            "low": extrap["test"].ci[0],
            "high": extrap["test"].ci[1],
            "level": extrap["test"].level,
            "p_value": extrap["test"].p_value,
            "method": "extrapolated",
            "b0": extrap["b"][0],
            "b1": extrap["b"][1],
        }
        payload["diagnostics"]["extrapolation_notes"] = extrap["notes"]
    if "report" in emit:
        _json_report(outdir, payload)
    print(f"cure_rate arm0 (tail): {etas[0].value:.4f}")
    print(f"cure_rate arm1 (tail): {etas[1].value:.4f}")
    print(f"cure_difference (tail): {test_tail.difference:.4f} "
          f"[{test_tail.ci[0]:.4f}, {test_tail.ci[1]:.4f}] "
          f"p={test_tail.p_value:.3g}")
    if extrap is not None:
        test = extrap["test"]
        print(f"cure_difference (extrapolated): {test.difference:.4f} "
              f"[{test.ci[0]:.4f}, {test.ci[1]:.4f}] p={test.p_value:.3g}")
    return EXIT_OK


def _compare_extrapolated(args, s0, s1, grid, half):
    notes = []
    b_values = []
    etas = []
    latencies = {}
    for label, arm, override in ((0, s0, args.b0), (1, s1, args.b1)):
        setting = override if override is not None else args.b
        est, b_used, note = _resolve_eta(
            arm, "extrapolate", setting,
            seed_tuple(args.seed) + (3, label), args.boot)
        if note:
            notes.append(f"arm {label}: {note}")
        etas.append(est)
        b_values.append(b_used)
        latencies[label] = susceptible_curve(arm, est).curve
    tau_a = tau_a_curve(s0, s1, etas[0], etas[1], grid=grid)

    def statistic(r0, r1):
        out = []
        for arm, est, b_used in ((r0, etas[0], b_values[0]), (r1, etas[1], b_values[1])):
            curve = km_fit(arm, "event")
            if est.method == "extrapolated":
                value = eta_extrapolated(curve, b_used,
                                         risk_table(arm).last_event_time)
            else:
                value = eta_tail(curve, risk_table(arm))
            out.append(value)
        return tau_a_curve(r0, r1, out[0], out[1], grid=grid).values

    boot = bootstrap_stats((s0, s1), statistic, R=args.boot,
                           seed=seed_tuple(args.seed) + (4,))
    tau_a = tau_a.with_bands(boot.sd, tau_a.values - half * boot.sd,
                             tau_a.values + half * boot.sd)
    if etas[0].method == "extrapolated" and etas[1].method == "extrapolated":
        test = cure_difference_test(
            s0, s1, method="extrapolated", b0=b_values[0], b1=b_values[1],
            R=args.boot, seed=seed_tuple(args.seed) + (2,), level=args.level)
    else:
        test = cure_difference_test(s0, s1, method="tail", R=args.boot,
                                    seed=seed_tuple(args.seed) + (2,),
                                    level=args.level)
        notes.append("cure difference used the tail method after fallback")
    return {"etas": etas, "b": b_values, "latency": latencies, "tau_a": tau_a,
            "test": test, "notes": notes}


def write_experiment_csv(rows, target=None):
    """Long-form rows ``t,truth,a,b,c,d,e``; the cure-rate row has empty t."""
    import io as _io

    buffer = target if target is not None else _io.StringIO()
    buffer.write("t,truth,a,b,c,d,e\n")
    for row in rows:
        t_text = "" if math.isnan(row.t) else repr(row.t)
        buffer.write(
            f"{t_text},{row.truth!r},{row.avg_bias!r},{row.sd_boot!r},"
            f"{row.sd_emp!r},{row.coverage!r},{row.ci_len!r}\n"
        )
    if target is None:
        return buffer.getvalue()
    return None


def read_experiment_csv(source):
    """Parse rows written by :func:`write_experiment_csv` into dicts."""
    text = source if isinstance(source, str) else source.read()
    lines = text.splitlines()
    if not lines or lines[0] != "t,truth,a,b,c,d,e":
        raise ParseError("bad experiment header", 1)
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 7:
            raise ParseError(f"expected 7 fields, got {len(fields)}", line_no)
        try:
            rows.append({
                "t": math.nan if fields[0] == "" else float(fields[0]),
                "truth": float(fields[1]),
                "a": float(fields[2]),
                "b": float(fields[3]),
                "c": float(fields[4]),
                "d": float(fields[5]),
                "e": float(fields[6]),
            })
        except ValueError:
            raise ParseError(f"malformed number in {line!r}", line_no) from None
    return rows


def _experiment_table_csv(rows):
    labels = ["truth", "a", "b", "c", "d", "e"]
    headers = ["row"]
    for row in rows:
        headers.append("cure_rate" if math.isnan(row.t) else repr(row.t))
    lines = [",".join(headers)]
    for label in labels:
        key = {"truth": "truth", "a": "avg_bias", "b": "sd_boot", "c": "sd_emp",
               "d": "coverage", "e": "ci_len"}[label]
        lines.append(",".join([label] + [repr(getattr(row, key)) for row in rows]))
    return "\n".join(lines) + "\n"


def _run_simulate(args):
    if (args.scenario is None) == (args.scenario_file is None):
        raise _ValidationFailure("give exactly one of --scenario or --scenario-file")
    if args.scenario is not None:
        try:
            scenario, recommended = preset(args.scenario)
        except ValueError as exc:
            raise _ValidationFailure(str(exc)) from None
    else:
        try:
            with open(args.scenario_file) as fh:
                scenario = scenario_from_dict(json.load(fh))
        except OSError as exc:
            raise _ValidationFailure(f"cannot read {args.scenario_file}: {exc.strerror}") from exc
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise _ValidationFailure(f"bad scenario file: {exc}") from None
        recommended = "tail"
    eta_method = args.eta_method or recommended
    if isinstance(scenario, TwoArmScenario) and eta_method == "extrapolate":
        raise _ValidationFailure("two-arm experiments use the tail estimator")
    runs, boot = args.runs, args.boot
    if args.full_profile:
        runs, boot = 500, 2000
    times = _parse_grid(args.grid) if args.grid else None
    if args.b != "auto":
        try:
            b_setting = float(args.b)
        except ValueError:
            raise _ValidationFailure(f"--b must be 'auto' or a number, got {args.b!r}") from None
        if not 0.0 < b_setting < 1.0:
            raise _ValidationFailure("--b must lie strictly inside (0, 1)")
    else:
        b_setting = "auto"

    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    result = run_experiment(
        scenario, runs=runs, R=boot, seed=args.seed, times=times,
        level=args.level, eta_method=eta_method, b=b_setting,
        jobs=max(1, args.jobs), collect_points=args.emit_raw,
    )
    rows, points = result if args.emit_raw else (result, None)
    _write_text(outdir, "experiment.csv", write_experiment_csv(rows))
    _write_text(outdir, "experiment_table.csv", _experiment_table_csv(rows))
    if points is not None:
        import io as _io

        buffer = _io.StringIO()
        buffer.write("run,estimand,t,value\n")
        for run_idx in range(points.shape[0]):
            for col, row in enumerate(rows):
                t_text = "" if math.isnan(row.t) else repr(row.t)
                buffer.write(
                    f"{run_idx},{row.estimand},{t_text},"
                    f"{float(points[run_idx, col])!r}\n")
        _write_text(outdir, "raw_estimates.csv", buffer.getvalue())
    _json_report(outdir, {
        "inputs": {
            "command": "simulate",
            "scenario": args.scenario or str(args.scenario_file),
            "spec": scenario.to_dict(),
            "two_arm": isinstance(scenario, TwoArmScenario),
            "runs": runs,
            "boot": boot,
            "seed": args.seed,
            "eta_method": eta_method,
            "level": args.level,
        },
        "estimates": [
            {
                "estimand": row.estimand,
                "t": None if math.isnan(row.t) else row.t,
                "truth": row.truth,
                "avg_bias": row.avg_bias,
                "sd_boot": row.sd_boot,
                "sd_emp": row.sd_emp,
                "coverage": row.coverage,
                "ci_len": row.ci_len,
            }
            for row in rows
        ],
        "intervals": {},
        "diagnostics": {"failed_runs": rows[0].n_failed if rows else 0},
    })
    for row in rows:
        name = "cure_rate" if math.isnan(row.t) else f"{row.estimand}@{row.t:g}"
        print(f"{name}: truth={row.truth:.4f} bias={row.avg_bias:+.4f} "
              f"sd_boot={row.sd_boot:.4f} coverage={row.coverage:.3f}")
    return EXIT_OK


def _run_btune(args):
    sample = _read_sample(args.input)
    _gate_on_validation(sample)
    grid = _parse_grid(args.grid) if args.grid else DEFAULT_B_GRID
    bad = [b for b in grid if not 0.0 < b < 1.0]
    if bad:
        raise _ValidationFailure("b grid values must lie strictly inside (0, 1)")
    b_star, diagnostics = select_b(sample, grid=grid, replicates=args.boot,
                                   seed=seed_tuple(args.seed))
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = ["b,eta_estimate,boot_mean,criterion,missing,selected"]
    for point in diagnostics:
        lines.append(
            f"{point.b!r},{point.eta_check!r},{point.boot_mean!r},"
            f"{point.criterion!r},{point.n_missing},{int(point.b == b_star)}"
        )
    _write_text(outdir, "btune.csv", "\n".join(lines) + "\n")
    print(f"b_star: {b_star!r}")
    return EXIT_OK


def _add_common(parser, with_input=True):
    if with_input:
        parser.add_argument("--input", required=True, help="CSV file: time,status[,arm]")
    parser.add_argument("--output-dir", default=".", help="directory for artifacts")
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed (>= 0)")
    parser.add_argument("--boot", type=int, default=500,
                        help="bootstrap replicates")
    parser.add_argument("--level", type=float, default=0.95,
                        help="confidence level")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curetau",
        description="Cure-fraction survival analysis and tau-process comparison",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    fit = sub.add_parser("fit", help="fit one sample")
    _add_common(fit)
    fit.add_argument("--eta-method", choices=("tail", "extrapolate"), default="tail")
    fit.add_argument("--b", default="auto", help="'auto' or a value in (0, 1)")
    fit.add_argument("--emit", default="csv,report", help="comma list of csv,svg,report")
    fit.set_defaults(func=_run_fit)

    compare = sub.add_parser("compare", help="compare two arms")
    _add_common(compare)
    compare.add_argument("--eta-method", choices=("tail", "extrapolate"),
                         default="tail")
    compare.add_argument("--b", default="auto")
    compare.add_argument("--b0", type=float, default=None, help="arm-0 override")
    compare.add_argument("--b1", type=float, default=None, help="arm-1 override")
    compare.add_argument("--emit", default="csv,report")
    compare.set_defaults(func=_run_compare)

    simulate = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    _add_common(simulate, with_input=False)
    simulate.add_argument("--scenario", default=None, help="preset name")
    simulate.add_argument("--scenario-file", default=None, help="JSON scenario")
    simulate.add_argument("--runs", type=int, default=200)
    simulate.add_argument("--full-profile", action="store_true",
                          help="use 500 runs x 2000 resamples")
    simulate.add_argument("--grid", default=None, help="comma list of times")
    simulate.add_argument("--eta-method", choices=("tail", "extrapolate"),
                          default=None)
    simulate.add_argument("--b", default="auto")
    simulate.add_argument("--jobs", type=int, default=1, help="parallel runs")
    simulate.add_argument("--emit-raw", action="store_true",
                          help="also write per-run estimates")
    simulate.set_defaults(func=_run_simulate)

    btune = sub.add_parser("btune", help="tune the extrapolation scale factor")
    _add_common(btune)
    btune.add_argument("--grid", default=None, help="comma list of b values")
    btune.set_defaults(func=_run_btune)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed < 0:
        print("error: seed must be non-negative", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except _ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EstimationError as exc:
        print(f"estimation error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except CureTauError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION


if __name__ == "__main__":
    sys.exit(main())
