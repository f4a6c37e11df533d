"""Command-line front end: run experiments to CSV, or self-verify the build.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 I/O error.
"""

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .experiments import ExperimentConfig, empirical_cdf, run_experiment
from .verification import MAX_VERIFY_N, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

#: Baseline passes at which the delivered-power CDF is tabulated (plus the
#: final pass); the sequential CDF is tabulated after every sweep.
BASELINE_CDF_PASSES = (1, 10, 50)


def _fmt(value):
    # 17 significant digits round-trips doubles exactly -> bit-stable CSVs
    return format(float(value), ".17g")


def _load_config(path, snr_db_override):
    if path is None:
        data = {}
    else:
        text = Path(path).read_text()  # OSError handled by caller
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
    if snr_db_override is not None:
        data["snr_db"] = snr_db_override
    config = ExperimentConfig.from_dict(data)
    config.validate()
    return config


def _write_curve(path, result):
    lines = ["measurements,mean_normalized_power,std_error,algorithm"]
    for name in sorted(result.bundles):
        curve = result.bundles[name].mean_curve()
        for count, mean, se in zip(curve.counts, curve.mean, curve.std_error):
            lines.append(f"{int(count)},{_fmt(mean)},{_fmt(se)},{name}")
    path.write_text("\n".join(lines) + "\n")


def _cdf_checkpoints(result):
    """(algorithm, sweeps, measurement count) rows to tabulate CDFs at."""
    config = result.config
    n = int(config.n_elements)
    points = []
    if "sequential" in result.bundles:
        for sweep in range(1, int(config.sweeps) + 1):
            points.append(("sequential", sweep, 3 * n * sweep))
    if "random" in result.bundles:
        last_pass = int(config.baseline_steps) // n
        passes = sorted({p for p in BASELINE_CDF_PASSES if 1 <= p <= last_pass}
                        | ({last_pass} if last_pass >= 1 else set()))
        for p in passes:
            points.append(("random", p, p * n + 1))
    return points


def _write_cdf(path, result):
    lines = ["normalized_power,cumulative_probability,algorithm,sweeps"]
    for name, sweeps, count in _cdf_checkpoints(result):
        table = empirical_cdf(result.bundles[name].value_at(count))
        for value, prob in zip(table.values, table.probabilities):
            lines.append(f"{_fmt(value)},{_fmt(prob)},{name},{sweeps}")
    path.write_text("\n".join(lines) + "\n")


def _metrics(result):
    """Headline numbers echoed into the manifest."""
    n = int(result.config.n_elements)
    out = {}
    for name, bundle in sorted(result.bundles.items()):
        entry = {
            "final_mean_normalized_power": float(bundle.powers[:, -1].mean()),
            "final_measurement_count": int(bundle.counts[-1]),
        }
        probe = 3 * n  # one sequential sweep's worth of readings
        if bundle.counts[-1] >= probe:
            entry["mean_normalized_power_at_3n_measurements"] = float(
                bundle.value_at(probe).mean()
            )
        out[name] = entry
    return out


def cmd_run(args):
    try:
        config = _load_config(args.config, args.snr_db)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    started = datetime.now(timezone.utc)
    result = run_experiment(config)
    finished = datetime.now(timezone.utc)

    out_dir = Path(args.out)
    curve_path = out_dir / "curve.csv"
    cdf_path = out_dir / "cdf.csv"
    manifest_path = out_dir / "manifest.json"
    manifest = {
        "artifact_version": __version__,
        "config": config.to_dict(),
        "normalization": "powers divided by the per-trial analytic optimum (sum of gain magnitudes, squared)",
        "started": started.isoformat(),
        "finished": finished.isoformat(),
        "outputs": {
            "curve": str(curve_path),
            "cdf": str(cdf_path),
            "manifest": str(manifest_path),
        },
        "metrics": _metrics(result),
    }
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_curve(curve_path, result)
        _write_cdf(cdf_path, result)
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO

    for name, entry in manifest["metrics"].items():
        print(f"{name}: mean normalized power {entry['final_mean_normalized_power']:.4f} "
              f"after {entry['final_measurement_count']} measurements")
    print(f"wrote {curve_path}, {cdf_path}, {manifest_path}")
    return EXIT_OK


def cmd_verify(args):
    if args.max_n < 1 or args.max_n > MAX_VERIFY_N:
        print(
            f"error: --max-n must be in [1, {MAX_VERIFY_N}]; exhaustive grids "
            f"above {MAX_VERIFY_N} elements are not tractable",
            file=sys.stderr,
        )
        return EXIT_USAGE
    results = run_verification(max_n=args.max_n, seed=args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<24}  {r.detail}")
    failures = [r.name for r in results if not r.passed]
    if failures:
        print(f"{len(failures)} check(s) failed: {', '.join(failures)}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="risalign",
        description="Phase alignment from power readings: experiments and self-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte-Carlo experiment, write CSVs + manifest")
    run_p.add_argument("--config", metavar="PATH",
                       help="JSON experiment config; omitted fields take defaults")
    run_p.add_argument("--out", metavar="DIR", required=True,
                       help="output directory (created if missing)")
    run_p.add_argument("--snr-db", type=float, default=None, dest="snr_db",
                       help="override the config's snr_db")
    run_p.set_defaults(func=cmd_run)

    verify_p = sub.add_parser("verify", help="run the self-verification suites")
    verify_p.add_argument("--max-n", type=int, default=MAX_VERIFY_N, dest="max_n",
                          help=f"largest element count for exhaustive grids (<= {MAX_VERIFY_N})")
    verify_p.add_argument("--seed", type=int, default=0)
    verify_p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
