"""Command-line front end: ``cvhybrid <command> [--config FILE] [--seed S] [--workers K] [--out DIR]``.

Commands and their configuration keys (INI file, one section per command;
``--set key=value`` overrides the file, which overrides the defaults):

``unitary-growth``
    ``L, steps, n_traj, parity, engine, early_window, late_window``; the fit
    windows default to ``[L/16, L/4]`` (log-log) and ``[L/2, steps]`` (linear).
``measured-circuit``
    ``L`` (list), ``p > 0, steps, n_traj, parity, saturation_fraction``.
``beta-circuit``
    ``L`` (list), ``beta`` (list), ``p, steps, n_traj, parity, saturation_fraction``.
``clifford-mi``
    ``L, N`` (list), ``p_min, p_max, dp, n_samples, burn_in, window, region_sites``;
    the summary gives the peak of the raw and of the 3-point smoothed curve.
``verify``
    ``n_sequences, n_modes, max_photons, tolerance``.

Every run writes ``series.csv``, ``summary.json`` and ``manifest.json`` to
``--out``.  The manifest records the resolved configuration and seed; pass it
back with ``--manifest`` to reproduce the first two files byte for byte.

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import sys
import time
from importlib import metadata
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from .analysis import agree, loglog_slope, saturation, window_fit
from .circuit import CircuitConfig, run_ensemble
from .clifford import peak_position, run_clifford_experiment
from .verify import oracle_equivalence

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240101


class ConfigError(ValueError):
    pass


def _int_list(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _window(text):
    lo, hi = _float_list(text)
    return [lo, hi]


def _optional_int(text):
    return None if str(text).strip().lower() in ("", "none", "auto") else int(text)


def _optional_window(text):
    return None if str(text).strip().lower() in ("", "none", "auto") else _window(text)


# key -> (parser, default) per command
SCHEMAS = {
    "unitary-growth": {
        "L": (int, 64),
        "steps": (int, 100),
        "n_traj": (int, 100),
        "parity": (str, "mix"),
        "engine": (str, "auto"),
        "early_window": (_optional_window, None),
        "late_window": (_optional_window, None),
    },
    "measured-circuit": {
        "L": (_int_list, [16, 32, 64]),
        "p": (float, 0.2),
        "steps": (int, 200),
        "n_traj": (int, 200),
        "parity": (str, "mix"),
        "saturation_fraction": (float, 0.25),
    },
    "beta-circuit": {
        "L": (_int_list, [16, 32]),
        "beta": (_float_list, [0.1, 0.3, 1.0]),
        "p": (float, 1.0),
        "steps": (int, 100),
        "n_traj": (int, 200),
        "parity": (str, "mix"),
        "saturation_fraction": (float, 0.25),
    },
    "clifford-mi": {
        "L": (int, 64),
        "N": (_int_list, [1, 2]),
        "p_min": (float, 0.1),
        "p_max": (float, 0.44),
        "dp": (float, 0.02),
        "n_samples": (int, 40),
        "burn_in": (_optional_int, None),
        "window": (_optional_int, None),
        "region_sites": (int, 4),
    },
    "verify": {
        "n_sequences": (int, 200),
        "n_modes": (int, 2),
        "max_photons": (float, 1.5),
        "tolerance": (float, 1e-5),
    },
}


def _parse_value(command, key, raw):
    schema = SCHEMAS[command]
    if key not in schema:
        raise ConfigError(f"unknown key {key!r} for {command}")
    parser = schema[key][0]
    try:
        return parser(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from None


def resolve_config(command: str, path=None, overrides=()) -> dict:
    """Defaults, then the ``[command]`` section of ``path``, then ``key=value`` overrides."""
    config = {key: default for key, (_, default) in SCHEMAS[command].items()}
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if parser.has_section(command):
            for key, raw in parser.items(command):
                config[key] = _parse_value(command, key, raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        config[key.strip()] = _parse_value(command, key.strip(), raw.strip())
    return config


def derive_seed(master: int, *key: int) -> int:
    """Independent 64-bit seed for a sub-experiment labelled by ``key``."""
    state = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key)).generate_state(1, np.uint64)
    return int(state[0])


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _circuit(config, L, seed, **kwargs):
    if config["n_traj"] < 1:
        raise ConfigError("n_traj must be at least 1")
    try:
        return CircuitConfig(L=L, steps=config["steps"], parity=config["parity"], seed=seed, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _saturation_table(summaries, fraction):
    """Saturation at the full length and at half the length for every run."""
    table = {}
    for label, summary in summaries.items():
        half = summary.series[:, : summary.series.shape[1] // 2 + 1]
        table[label] = {
            "saturation": saturation(summary.series, fraction),
            "saturation_half_T": saturation(half, fraction),
        }
    return table


def _pairwise(table, labels):
    out = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            out.append({"a": a, "b": b, "agree_3sigma": bool(agree(table[a]["saturation"], table[b]["saturation"]))})
    return out


def cmd_unitary_growth(config, seed, workers):
    circuit = _circuit(config, config["L"], seed, p=0.0, engine=config["engine"])
    summary = run_ensemble(circuit, config["n_traj"], workers=workers)
    t = np.arange(circuit.steps + 1)
    rows = [(k, m, e, summary.n_traj) for k, m, e, _ in summary.to_rows()]
    out = {"n_traj": summary.n_traj, "parity_counts": summary.parity_counts, "final_mean": float(summary.mean[-1])}
    early = config["early_window"] or [config["L"] / 16, config["L"] / 4]
    late = config["late_window"] or [config["L"] / 2, float(circuit.steps)]
    if np.sum((t >= early[0]) & (t <= early[1])) >= 2:
        out["early_window"] = early
        out["early_loglog_slope"] = loglog_slope(t, summary.mean, early)
    if np.sum((t >= late[0]) & (t <= late[1])) >= 3:
        slope, intercept, r2 = window_fit(t, summary.mean, late)
        out["late_window"] = late
        out["late_linear_fit"] = {"slope": slope, "intercept": intercept, "r2": r2}
    return ["t", "mean_S2", "stderr", "n_traj"], rows, out


def cmd_measured_circuit(config, seed, workers):
    if config["p"] <= 0:
        raise ConfigError("p must be positive for measured-circuit (use unitary-growth for p = 0)")
    summaries = {}
    for L in config["L"]:
        circuit = _circuit(config, L, derive_seed(seed, L), p=config["p"], channel="vacuum")
        summaries[L] = run_ensemble(circuit, config["n_traj"], workers=workers)
    rows = [(L, *row) for L, s in summaries.items() for row in s.to_rows()]
    table = _saturation_table(summaries, config["saturation_fraction"])
    out = {
        "saturation": {str(L): v for L, v in table.items()},
        "pairwise": _pairwise(table, list(summaries)),
    }
    return ["L", "t", "mean_S2", "stderr", "n_traj"], rows, out


def cmd_beta_circuit(config, seed, workers):
    if any(b < 0 for b in config["beta"]):
        raise ConfigError("beta values must be non-negative")
    rows, by_beta = [], {}
    for ib, beta in enumerate(config["beta"]):
        summaries = {}
        for L in config["L"]:
            circuit = _circuit(config, L, derive_seed(seed, ib, L), p=config["p"], channel="beta", beta=beta)
            summaries[L] = run_ensemble(circuit, config["n_traj"], workers=workers)
            rows.extend((beta, L, *row) for row in summaries[L].to_rows())
        table = _saturation_table(summaries, config["saturation_fraction"])
        by_beta[repr(beta)] = {
            "saturation": {str(L): v for L, v in table.items()},
            "pairwise": _pairwise(table, list(summaries)),
        }
    return ["beta", "L", "t", "mean_S2", "stderr", "n_traj"], rows, {"by_beta": by_beta}


def clifford_p_grid(config) -> np.ndarray:
    n = int(round((config["p_max"] - config["p_min"]) / config["dp"]))
    if n < 0 or config["dp"] <= 0:
        raise ConfigError("need dp > 0 and p_max >= p_min")
    return np.round(config["p_min"] + config["dp"] * np.arange(n + 1), 10)


def cmd_clifford_mi(config, seed, workers):
    if config["n_samples"] < 1:
        raise ConfigError("n_samples must be at least 1")
    ps = clifford_p_grid(config)
    if ps[0] < 0 or ps[-1] > 1:
        raise ConfigError("p grid must lie in [0, 1]")
    kwargs = {"burn_in": config["burn_in"], "window": config["window"], "region_sites": config["region_sites"]}
    rows, peaks, smoothed = [], {}, {}
    for N in config["N"]:
        try:
            table = run_clifford_experiment(config["L"], N, ps, config["n_samples"], seed=seed, workers=workers, **kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        rows.extend(table)
        peaks[str(N)] = peak_position(table)
        smoothed[str(N)] = peak_position(table, smooth=3)
    out = {"peak_p": peaks, "peak_p_smoothed": smoothed, "p_grid": ps.tolist()}
    return ["N", "p", "mean_I_AB", "stderr", "n_samples"], rows, out


def cmd_verify(config, seed, workers):
    report = oracle_equivalence(config["n_sequences"], seed=seed, n_modes=config["n_modes"],
                                tolerance=config["tolerance"], max_photons=config["max_photons"])
    header = ["index", "n_ops", "cov_residual", "entropy_residual", "cutoff", "converged"]
    return header, report.rows, report.to_dict()


COMMANDS = {
    "unitary-growth": cmd_unitary_growth,
    "measured-circuit": cmd_measured_circuit,
    "beta-circuit": cmd_beta_circuit,
    "clifford-mi": cmd_clifford_mi,
    "verify": cmd_verify,
}


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def run_command(command: str, config: dict, seed: int, out_dir, workers: int = 1) -> dict:
    """Run ``command`` and write its three output files; returns the summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    with threadpool_limits(limits=1):
        header, rows, summary = COMMANDS[command](config, seed, workers)
    summary = {"command": command, "schema_version": SCHEMA_VERSION, **summary}
    _write_csv(out_dir / "series.csv", header, rows)
    _write_json(out_dir / "summary.json", summary)
    files = {}
    for name in ("series.csv", "summary.json"):
        files[name] = hashlib.sha256((out_dir / name).read_bytes()).hexdigest()
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": _version(),
        "schema_version": SCHEMA_VERSION,
        "csv_columns": header,
        "outputs": files,
        "workers": workers,
        "wall_time_s": time.perf_counter() - start,
    }
    _write_json(out_dir / "manifest.json", manifest)
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvhybrid", description="Hybrid Gaussian circuit experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI file with a [%s] section" % name)
        p.add_argument("--manifest", help="rerun from a manifest.json (config and seed)")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=".", help="output directory")
    return parser


def _load_manifest(path, command):
    try:
        manifest = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from None
    if manifest.get("command") != command:
        raise ConfigError(f"manifest is for {manifest.get('command')!r}, not {command!r}")
    config = {key: default for key, (_, default) in SCHEMAS[command].items()}
    for key, value in manifest["config"].items():
        if key not in config:
            raise ConfigError(f"unknown key {key!r} in manifest")
        config[key] = value
    return config, int(manifest["seed"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.manifest:
            if args.config:
                raise ConfigError("--manifest and --config are exclusive")
            config, seed = _load_manifest(args.manifest, args.command)
            for item in args.overrides:
                key, _, raw = item.partition("=")
                config[key.strip()] = _parse_value(args.command, key.strip(), raw.strip())
        else:
            config = resolve_config(args.command, args.config, args.overrides)
            seed = DEFAULT_SEED
        if args.seed is not None:
            seed = args.seed
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if args.workers < 1:
            raise ConfigError("workers must be at least 1")
        summary = run_command(args.command, config, seed, args.out, args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.command == "verify" and not summary["passed"]:
        print("verification failed: residuals above tolerance", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
