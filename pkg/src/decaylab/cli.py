"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .decaysim import DetectorModel, ExperimentConfig, GeometryModel, SourceModel, fit_plateau
from .errors import DataError, ModelError
from .harness import emit_plot_data, ingest_counts, read_bits, run_scenario
from .harness import presets
from .harness.io import FORMATS
from .harness.scenarios import (
    BUILDERS,
    SCENARIOS,
    ComparisonReport,
    ScenarioSpec,
    _plateau_section,
    _jsonable,
    analyze_series,
    persist_arm,
    verdicts_for,
)
from .nist import TEST_ORDER, BatteryConfig, run_battery

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 0, 1, 2, 3

# parameters a custom scenario may vary, and the sub-model that owns each
VARIABLE_FIELDS = {
    "half_life_years": "source",
    "initial_rate_cps": "source",
    "elapsed_time_years": "source",
    "distance_cm": "geometry",
    "window_radius_cm": "geometry",
    "scatter_noise_coeff": "geometry",
    "dead_time_s": "detector",
    "background_cps": "detector",
    "intrinsic_efficiency": "detector",
    "preset_time_s": None,
    "applied_voltage_V": None,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_model_args(p: argparse.ArgumentParser, require_seed: bool):
    g = p.add_argument_group("experiment model")
    g.add_argument("--seed", type=int, required=require_seed, default=None)
    g.add_argument("--source", choices=sorted(presets.SOURCES), default="Sr-90")
    g.add_argument("--half-life-years", type=float, default=None)
    g.add_argument("--initial-rate-cps", type=float, default=None)
    g.add_argument("--elapsed-time-years", type=float, default=None)
    g.add_argument("--distance-cm", type=float, default=2.0)
    g.add_argument("--window-radius-cm", type=float, default=1.0)
    g.add_argument("--scatter-noise-coeff", type=float, default=0.25)
    g.add_argument("--dead-time-s", type=float, default=1e-4)
    g.add_argument("--background-cps", type=float, default=0.5)
    g.add_argument("--intrinsic-efficiency", type=float, default=0.9)
    g.add_argument("--preset-time-s", type=float, default=1.0)
    g.add_argument("--run-count", type=int, default=presets.TARGET_COUNTS)
    g.add_argument("--voltage", dest="applied_voltage_V", type=float, default=presets.OPERATING_VOLTAGE_V)


def _add_battery_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("battery")
    g.add_argument("--alpha", type=float, default=0.01)
    g.add_argument("--block-length", type=int, default=None, help="block frequency M")
    g.add_argument("--template-length", type=int, choices=(9, 10), default=9)
    g.add_argument("--serial-m", type=int, default=None)
    g.add_argument("--apen-m", type=int, default=None)
    g.add_argument("--lc-block", type=int, default=500, help="linear complexity M")
    g.add_argument("--tests", default=None, help="comma-separated subset of " + ",".join(TEST_ORDER))


def _battery_config(args) -> BatteryConfig:
    enabled = frozenset(TEST_ORDER)
    if args.tests:
        enabled = frozenset(t.strip() for t in args.tests.split(",") if t.strip())
        unknown = enabled - set(TEST_ORDER)
        if unknown:
            raise _UsageError(f"unknown tests: {', '.join(sorted(unknown))}")
    return BatteryConfig(
        alpha=args.alpha,
        block_length_M=args.block_length,
        template_length_m=args.template_length,
        serial_m=args.serial_m,
        approx_entropy_m=args.apen_m,
        linear_complexity_M=args.lc_block,
        enabled_tests=enabled,
    )


class _UsageError(Exception):
    pass


def _config_from(args, seed=None) -> ExperimentConfig:
    base = presets.SOURCES[args.source]
    source = SourceModel(
        base.isotope_label,
        args.half_life_years if args.half_life_years is not None else base.half_life_years,
        args.initial_rate_cps if args.initial_rate_cps is not None else base.initial_rate_cps,
        args.elapsed_time_years if args.elapsed_time_years is not None else base.elapsed_time_years,
    )
    detector = DetectorModel(
        dead_time_s=args.dead_time_s,
        background_cps=args.background_cps,
        intrinsic_efficiency=args.intrinsic_efficiency,
    )
    return ExperimentConfig(
        source=source,
        geometry=GeometryModel(args.distance_cm, args.window_radius_cm, args.scatter_noise_coeff),
        detector=detector,
        preset_time_s=args.preset_time_s,
        run_count=args.run_count,
        applied_voltage_V=args.applied_voltage_V,
        rng_seed=args.seed if seed is None else seed,
    )


def _vary(cfg: ExperimentConfig, name: str, value: float) -> ExperimentConfig:
    part = VARIABLE_FIELDS[name]
    if part is None:
        return cfg.with_(**{name: value})
    sub = getattr(cfg, part)
    return cfg.with_(**{part: dataclasses.replace(sub, **{name: value})})


def _emit(report: ComparisonReport, args):
    if args.plot_data:
        for path in emit_plot_data(report, args.plot_data):
            print(f"plot data: {path}")


def _print_summary(report: ComparisonReport):
    for arm in report.arms:
        b = arm.battery
        print(
            f"{arm.label}: n_bits={arm.bits.n_bits} ones={arm.balance[1]:.4f} "
            f"H_mean={arm.profile.mean_entropy:.5f} "
            f"battery={sum(r.passed for r in b.applicable_results)}/{len(b.applicable_results)}"
        )
    for line in report.verdicts:
        print(f"verdict: {line}")


def cmd_simulate(args) -> int:
    cfg = _config_from(args)
    spec = ScenarioSpec("custom", (cfg,), cfg.run_count, arm_labels=(args.label or cfg.source.isotope_label,))
    report = run_scenario(spec, args.out_dir, seed=args.seed, battery_config=_battery_config(args))
    _print_summary(report)
    _emit(report, args)
    print(f"report: {Path(args.out_dir) / 'report.json'}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = ingest_counts(args.counts, args.format)
    arm = analyze_series(
        series,
        args.label or series.source_label,
        _battery_config(args),
        window_size=args.window,
        stride=args.stride,
    )
    persist_arm(arm, out_dir)
    report = ComparisonReport("custom", [arm], verdicts_for([arm]))
    (out_dir / "report.json").write_text(report.to_json())
    _print_summary(report)
    _emit(report, args)
    print(f"report: {out_dir / 'report.json'}")
    return EXIT_OK


def _read_scan(path) -> list:
    """Two-column ``voltage,count`` file; ``#`` lines and a header row are skipped."""
    points = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            v = float(parts[0])
        except ValueError:
            if not points:
                continue
            raise DataError(f"line {lineno}: voltage {parts[0]!r} is not a number") from None
        if len(parts) < 2 or parts[1] in ("", "-", "breakdown"):
            points.append((v, None, True))
            continue
        try:
            points.append((v, int(parts[1]), False))
        except ValueError:
            raise DataError(f"line {lineno}: count {parts[1]!r} is not an integer") from None
    if not points:
        raise DataError("no counts")
    return points


def cmd_plateau(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = ComparisonReport("plateau_scan", [], [], seed=args.seed)
    if args.scan:
        scan = _read_scan(args.scan)
        report.plateau = {
            "config": None,
            "points": [{"voltage": v, "counts": c, "breakdown": b} for v, c, b in scan],
        }
        try:
            report.plateau["fit"] = fit_plateau(scan, args.max_change)._asdict()
        except ValueError as exc:
            raise ModelError(str(exc)) from None
    else:
        if args.seed is None:
            raise _UsageError("--seed is required for a simulated scan")
        cfg = presets.plateau_config(args.seed)
        report.plateau, _ = _plateau_section(cfg)
        if report.plateau["fit"] is None:
            (out_dir / "report.json").write_text(report.to_json())
            raise ModelError(report.plateau["fit_error"])
    (out_dir / "report.json").write_text(report.to_json())
    fit = report.plateau["fit"]
    print(
        f"knee={fit['knee_V']:g} V plateau={fit['plateau_start_V']:g}-{fit['plateau_end_V']:g} V "
        f"operating={fit['operating_V']:g} V"
    )
    _emit(report, args)
    return EXIT_OK


def cmd_battery(args) -> int:
    seq = read_bits(args.bits)
    report = run_battery(seq, _battery_config(args))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, default=_jsonable))
        return EXIT_OK
    for r in report.results:
        status = "PASS" if r.passed else ("n/a " if not r.applicable else "FAIL")
        ps = " ".join(f"{p:.6f}" for p in r.p_values[:4])
        more = f" (+{len(r.p_values) - 4})" if len(r.p_values) > 4 else ""
        print(f"{status} {r.test_name:26s} {ps}{more}")
    print(f"pass fraction {report.pass_fraction:.4f} over {len(report.applicable_results)} applicable tests")
    return EXIT_OK


def _parse_vary(text: str):
    if "=" not in text:
        raise _UsageError("--vary expects name=value1,value2")
    name, values = text.split("=", 1)
    name = name.strip().replace("-", "_")
    if name == "voltage":
        name = "applied_voltage_V"
    if name not in VARIABLE_FIELDS:
        raise _UsageError(f"cannot vary {name!r}; choose from {', '.join(VARIABLE_FIELDS)}")
    try:
        vals = [float(v) for v in values.split(",")]
    except ValueError:
        raise _UsageError(f"--vary values must be numbers: {values!r}") from None
    if len(vals) != 2:
        raise _UsageError("--vary needs exactly two values")
    return name, vals


def cmd_scenario(args) -> int:
    if args.name == "custom":
        if not args.vary:
            raise _UsageError("scenario custom needs --vary name=v1,v2")
        name, vals = _parse_vary(args.vary)
        base = _config_from(args)
        arms = tuple(_vary(base, name, v) for v in vals)
        labels = tuple(f"{name}={v:g}" for v in vals)
        spec = ScenarioSpec("custom", arms, base.run_count, arm_labels=labels)
    else:
        spec = BUILDERS[args.name](args.seed, args.target_counts)
    report = run_scenario(spec, args.out_dir, seed=args.seed, battery_config=_battery_config(args))
    if report.plateau:
        fit = report.plateau["fit"]
        print(f"operating voltage: {fit['operating_V']:g} V" if fit else report.plateau["fit_error"])
    _print_summary(report)
    _emit(report, args)
    print(f"report: {Path(args.out_dir) / 'report.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="decaylab", description="Radioactive-decay random bit generator bench")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a count series and test its bits")
    _add_model_args(p, require_seed=True)
    _add_battery_args(p)
    p.add_argument("--label", default=None)
    p.add_argument("--out-dir", default="decaylab_out")
    p.add_argument("--plot-data", default=None, metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="ingest a count file and test its bits")
    p.add_argument("counts")
    p.add_argument("--format", choices=FORMATS, default="plain_csv")
    p.add_argument("--label", default=None)
    p.add_argument("--window", type=int, default=None, help="entropy window (default n//10)")
    p.add_argument("--stride", type=int, default=1)
    _add_battery_args(p)
    p.add_argument("--out-dir", default="decaylab_out")
    p.add_argument("--plot-data", default=None, metavar="DIR")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("plateau", help="simulate or fit a counting-plateau scan")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scan", default=None, help="voltage,count file to fit instead of simulating")
    p.add_argument("--max-change", type=float, default=0.15, help="plateau slope limit per 100 V")
    p.add_argument("--out-dir", default="decaylab_out")
    p.add_argument("--plot-data", default=None, metavar="DIR")
    p.set_defaults(func=cmd_plateau)

    p = sub.add_parser("battery", help="run the statistical battery on a bits file")
    p.add_argument("bits")
    p.add_argument("--json", action="store_true")
    _add_battery_args(p)
    p.set_defaults(func=cmd_battery)

    p = sub.add_parser("scenario", help="run a preset comparison")
    p.add_argument("name", choices=SCENARIOS)
    p.add_argument("--target-counts", type=int, default=presets.TARGET_COUNTS)
    p.add_argument("--vary", default=None, help="custom only: name=v1,v2")
    _add_model_args(p, require_seed=True)
    _add_battery_args(p)
    p.add_argument("--out-dir", default="decaylab_out")
    p.add_argument("--plot-data", default=None, metavar="DIR")
    p.set_defaults(func=cmd_scenario)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"decaylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"decaylab: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelError as exc:
        print(f"decaylab: model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ValueError as exc:
        print(f"decaylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
