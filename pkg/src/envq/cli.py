"""Command-line front end.

Subcommands: ``qt`` (quantumness series to CSV), ``dq`` (degree report),
``sweep`` (parameter sweep of the degree to CSV), ``verify`` (run the
acceptance suite).  Exit codes: 0 success, 1 failed verification,
2 configuration/parse error, 3 model error, 4 bound violation,
5 degenerate stationary state.
"""

import argparse
import dataclasses
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import config, microscopic, models, qcore, quantumness, stochastic
from .config import ConfigError
from .qcore import BoundViolationError, DegenerateSteadyStateError

EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_BOUND = 4
EXIT_DEGENERATE = 5


def _bloch_components(state):
    m = state.matrix
    sz = np.trace(qcore.sigma_z @ m).real
    sy = np.trace(qcore.sigma_y @ m).real
    return sz, sy


def compute_qt(cfg):
    """Quantumness series for any configured model kind."""
    kind, obj = config.build_model(cfg)
    rho0 = config.resolve_initial_state(cfg, kind, obj)
    times = cfg.times()
    lind = config.lindblad_for(kind, obj)
    if kind == "nonmarkov-decay":
        sz0, _ = _bloch_components(rho0)
        values = models.nonmarkov_q(obj, sz0, times)
        return quantumness.QuantumnessSeries(times, values, 2)
    if kind == "oscillator":
        values = models.oscillator_q_numeric(obj, rho0, times)
        return quantumness.QuantumnessSeries(times, values, obj.dim)
    if lind is not None:
        return quantumness.q_series(lind, rho0, times)
    if kind == "microscopic":
        values = [microscopic.quantumness_via_dual(obj, rho0, t) for t in times]
        return quantumness.QuantumnessSeries(times, values, obj.dim_s)
    if kind == "collisional":
        return stochastic.collisional_q(
            obj, rho0, times, mode=cfg.mode, n_paths=cfg.n_paths or 1000, seed=cfg.seed
        )
    process, base_h = obj
    series, _ = stochastic.stochastic_q(
        process, base_h, rho0, times, cfg.n_paths or 200, cfg.seed
    )
    return series


def cmd_qt(cfg, out_path):
    series = compute_qt(cfg)
    text = quantumness.csv_text(series.times, series.values)
    _write(out_path, text)
    return 0


def _report_lines(kind, obj):
    lines = []
    if kind == "nonmarkov-decay":
        lines.append(("dq", f"{models.nonmarkov_dq(obj):.12g}"))
        lines.append(("q_infinity", f"{1.0 + models.nonmarkov_dq(obj):.12g}"))
        lines.append(("optimal_state", qcore.format_matrix_text(np.diag([1.0, 0.0]), digits=12)))
        lines.append(("stationary_state", qcore.format_matrix_text(np.diag([0.0, 1.0]), digits=12)))
        return lines
    if kind == "oscillator":
        stat = models.truncated_thermal_state(obj)
        lines.append(("dq_renormalized", f"{models.oscillator_dqr(obj):.12g}"))
        lines.append(("optimal_state_max_occupation", "0"))
        lines.append(("stationary_max_eigenvalue",
                      f"{quantumness.renormalized_degree(stat):.12g}"))
        return lines
    model = config.lindblad_for(kind, obj)
    if model is None:
        raise ValueError(f"dq report is not defined for {kind} blocks")
    report = quantumness.degree_of_quantumness(model)
    lines.append(("dq", f"{report.dq:.12g}"))
    lines.append(("q_infinity", f"{report.q_infinity:.12g}"))
    lines.append(("optimal_state", qcore.format_matrix_text(report.optimal_state.matrix, digits=12)))
    lines.append(("stationary_state", qcore.format_matrix_text(report.stationary.matrix, digits=12)))
    if model.dim == 4:
        lines.append(("concurrence", f"{qcore.concurrence(report.optimal_state.matrix):.12g}"))
    return lines


def cmd_dq(cfg, out_path):
    kind, obj = config.build_model(cfg)
    lines = _report_lines(kind, obj)
    text = "".join(f"{key} = {value}\n" for key, value in lines)
    _write(out_path, text)
    return 0


def _sweep_point(kind, base_params, param, value):
    mapping = {f.name: getattr(base_params, f.name) for f in dataclasses.fields(base_params)}
    mapping[param] = value
    params = type(base_params)(**mapping)
    if kind == "thermal-tls":
        return models.thermal_dq(params), None
    if kind == "fluorescence":
        return models.fluorescence_dq(params)[0], None
    if kind == "two-qubit":
        report = models.twoqubit_report(params)
        return report.dq, report.concurrence
    if kind == "nonmarkov-decay":
        return models.nonmarkov_dq(params), None
    if kind == "oscillator":
        return models.oscillator_dqr(params), None
    raise ValueError(f"sweep is not defined for {kind}")


def cmd_sweep(cfg, out_path):
    kind, obj = config.build_model(cfg)
    if kind not in models.BUILTIN_PARAMS:
        raise ConfigError("sweep needs a builtin model")
    param = cfg.sweep_param
    if param is None:
        raise ConfigError("sweep needs a [sweep] section with param and values")
    if param not in {f.name for f in dataclasses.fields(obj)}:
        raise ConfigError(f"unknown sweep parameter {param!r} for {kind}")
    values = cfg.sweep_values or []
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda v: _sweep_point(kind, obj, param, v), values))
    with_conc = any(c is not None for _, c in rows)
    header = f"{param},dq,concurrence" if with_conc else f"{param},dq"
    lines = [header]
    for value, (dq, conc) in zip(values, rows):
        row = f"{value:.12g},{dq:.12g}"
        if with_conc:
            row += f",{conc:.12g}"
        lines.append(row)
    _write(out_path, "\n".join(lines) + "\n")
    return 0


def cmd_verify(out_dir, fast=False):
    from . import acceptance

    results = acceptance.run_all(out_dir=out_dir, fast=fast)
    for r in results:
        print(acceptance.format_result(r))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} acceptance criteria passed")
    return 0 if not failed else EXIT_VERIFY_FAILED


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="envq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("qt", "dq", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--mode", choices=("series", "monte-carlo"), default=None)
    v = sub.add_parser("verify")
    v.add_argument("--out", default=None)
    v.add_argument("--fast", action="store_true")
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args.out, fast=args.fast)
    try:
        cfg = config.load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.mode is not None:
            cfg.mode = args.mode
        if cfg.needs_seed() and cfg.seed is None:
            raise ConfigError("stochastic runs need a seed")
        out_path = args.out if args.out is not None else cfg.output
        if args.command == "qt":
            return cmd_qt(cfg, out_path)
        if args.command == "dq":
            return cmd_dq(cfg, out_path)
        return cmd_sweep(cfg, out_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BoundViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except DegenerateSteadyStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
