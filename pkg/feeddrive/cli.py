"""feeddrive command line.

    feeddrive simulate case1_x
    feeddrive compare circle150 --out-dir results
    feeddrive identify manifest.json --stage all
    feeddrive synthesize-rst mikron_ucp710 --axis X --tuning 1 30 30 100
    feeddrive sweep circle150_rst --grid n2=15,30 nu=1,30 lam=1,100
    feeddrive profiles show mikron_ucp710
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import rich
from rich.console import Console
from rich.table import Table

from feeddrive.core.errors import FeedDriveError, IdentificationError, ProfileError, ScenarioError
from feeddrive.core.parameters import DEFAULT_PLANT_STEP, MachineProfile
from feeddrive.engine.runner import RunResult, cached_model, compare, run_batch
from feeddrive.engine.scenario import CascadeSelection, RstSelection, Scenario, SimulationOptions
from feeddrive.engine.sweep import tuning_grid, tuning_sweep
from feeddrive.gpc.synthesis import GpcTuning, stability_margins, synthesize_rst
from feeddrive.identification.chain import STAGE_ORDER, IdentificationInputs, IdentificationManifest, identify_axis, with_current_noise
from feeddrive.io.profiles import list_profiles, load_profile, profile_rows, save_profile
from feeddrive.io.reports import write_comparison, write_ident_report, write_run, write_sweep
from feeddrive.io.rst_export import save_rst
from feeddrive.io.scenarios import list_scenarios, load_scenario
from feeddrive.io.traces import read_trace


logger = logging.getLogger(__name__)

GRID_DEFAULTS = {"n1": [1], "n2": [15, 30], "nu": [1, 15, 30], "lam": [1.0, 10.0, 100.0]}

console = Console(stderr=True)


class Output:
    """rich printing that honours --quiet; errors always go to stderr."""

    def __init__(self, quiet: bool):
        self.quiet = quiet

    def print(self, *objects) -> None:
        if not self.quiet:
            rich.print(*objects)

    def error(self, message: str) -> None:
        console.print(f"[bold red]Error:[/bold red] {message}", markup=True, highlight=False)


def _apply_globals(s: Scenario, args: argparse.Namespace) -> Scenario:
    if args.plant_step is None:
        return s
    return s.model_copy(update={"options": s.options.model_copy(update={"plant_step": args.plant_step})})


def _plant_step(args: argparse.Namespace) -> float:
    return args.plant_step if args.plant_step is not None else DEFAULT_PLANT_STEP


def _metrics_table(result: RunResult) -> Table:
    table = Table(title=f"{result.scenario} tracking error (um / mdeg)")
    for col in ("axis", "max", "rms", "steady max", "transient max", "t of max (s)"):
        table.add_column(col, justify="right" if col != "axis" else "left")
    rows = list(result.metrics.items()) + ([("vector", result.vector)] if result.vector is not None else [])
    for name, m in rows:
        t_max = m.whole.t_max
        table.add_row(
            name,
            f"{m.whole.max * 1e6:.3f}",
            f"{m.whole.rms * 1e6:.3f}",
            f"{m.steady.max * 1e6:.3f}",
            f"{m.transient.max * 1e6:.3f}",
            f"{t_max:.4f}" if t_max is not None else "-",
        )
    return table


def cmd_simulate(args: argparse.Namespace, out: Output) -> int:
    scenarios = [_apply_globals(load_scenario(name), args) for name in args.scenarios]
    if args.controller == "cascade":
        scenarios = [s.with_controller(CascadeSelection()) for s in scenarios]
    elif args.controller == "rst":
        scenarios = [s.with_controller(RstSelection()) for s in scenarios]
    if args.full_rate:
        scenarios = [s.model_copy(update={"options": s.options.model_copy(update={"full_rate": True})}) for s in scenarios]

    for result in run_batch(scenarios, args.workers):
        summary = write_run(result, args.out_dir)
        out.print(_metrics_table(result))
        if result.contour_max is not None:
            out.print(f"  max contour error: {result.contour_max * 1e6:.3f} um")
        if result.corner_deviation is not None:
            out.print(f"  corner deviation: {result.corner_deviation * 1e6:.3f} um")
        for w in result.warnings:
            out.print(f"[yellow]{w}[/yellow]")
        out.print(f"[bold green]Wrote {summary}[/bold green]")
    return 0


def cmd_compare(args: argparse.Namespace, out: Output) -> int:
    scenario = _apply_globals(load_scenario(args.scenario), args)
    comparison = compare(scenario)
    path = write_comparison(comparison, args.out_dir)
    summary = comparison.summary()
    table = Table(title=f"{scenario.name}: cascade vs RST")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key, value in summary.items():
        if key != "scenario":
            table.add_row(key, f"{value:.6g}")
    out.print(table)
    out.print(f"[bold green]Wrote {path}[/bold green]")
    return 0


def _single_stage_inputs(stage: str, traces: list) -> IdentificationInputs:
    match stage:
        case "friction":
            return IdentificationInputs(sweep=traces)
        case "static":
            return IdentificationInputs(rest=traces)
        case "inertia" if len(traces) == 1:
            return IdentificationInputs(inertia=traces[0])
        case "ffw" if len(traces) == 1:
            return IdentificationInputs(feedforward=traces[0])
        case "delays":
            return IdentificationInputs(delays=traces)
    raise IdentificationError(f"stage '{stage}' takes exactly one trace, got {len(traces)}")


def cmd_identify(args: argparse.Namespace, out: Output) -> int:
    if args.stage == "all":
        if len(args.inputs) != 1:
            raise IdentificationError("--stage all takes one JSON manifest naming the traces of every stage")
        manifest_path = Path(args.inputs[0])
        try:
            manifest = IdentificationManifest.model_validate_json(manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise IdentificationError(f"{manifest_path}: cannot read identification manifest ({e})") from e
        axis_name, profile_name = manifest.axis, manifest.profile
        inputs = manifest.load(manifest_path.parent)
        stages = STAGE_ORDER
    else:
        if not args.axis:
            raise IdentificationError("--axis is required for a single stage")
        axis_name, profile_name = args.axis, args.profile
        inputs = _single_stage_inputs(args.stage, [read_trace(p) for p in args.inputs])
        stages = (args.stage,)

    if args.noise > 0.0:
        inputs = with_current_noise(inputs, args.noise, args.seed)

    profile = load_profile(profile_name, plant_step=_plant_step(args))
    p = profile.axis(axis_name)
    updated, reports = identify_axis(p, inputs, stages, SimulationOptions(plant_step=_plant_step(args)))

    out_dir = Path(args.out_dir)
    new_profile = MachineProfile(name=f"{profile.name}_identified", notes=f"axis {axis_name} identified", axes={**profile.axes, axis_name: updated})
    profile_path = save_profile(new_profile, out_dir / f"{new_profile.name}.json")
    report_path = write_ident_report(axis_name, reports, out_dir / f"identify_{axis_name}.json")

    table = Table(title=f"identification of axis {axis_name}")
    for col in ("stage", "parameter", "value"):
        table.add_column(col)
    for stage, report in reports.items():
        for key, value in report.parameters.items():
            table.add_row(stage, key, f"{value:.6g}")
        if report.r_squared is not None:
            table.add_row(stage, "R^2", f"{report.r_squared:.6f}")
    out.print(table)
    for report in reports.values():
        for w in report.warnings:
            out.print(f"[yellow]{report.stage}: {w}[/yellow]")
    out.print(f"[bold green]Wrote {profile_path} and {report_path}[/bold green]")
    return 0


def cmd_synthesize(args: argparse.Namespace, out: Output) -> int:
    profile = load_profile(args.profile, plant_step=_plant_step(args))
    p = profile.axis(args.axis)
    n1, n2, nu, lam = args.tuning
    tuning = GpcTuning(n1=int(n1), n2=int(n2), nu=int(nu), lam=float(lam))
    rst = synthesize_rst(cached_model(p, _plant_step(args)), tuning)
    path = save_rst(rst, Path(args.out_dir) / f"rst_{args.axis}.json", axis=args.axis)
    margins = stability_margins(rst)
    out.print(f"[bold blue]{tuning.label()}[/bold blue] on axis {args.axis}")
    out.print(f"  R = {list(rst.r)}")
    out.print(f"  S = {list(rst.s)}")
    out.print(f"  T has {len(rst.t)} coefficients, condition number {rst.condition_number:.3e}")
    out.print(f"  gain margin {margins.gain_margin_db:.2f} dB, phase margin {margins.phase_margin_deg:.2f} deg")
    out.print(f"[bold green]Wrote {path}[/bold green]")
    return 0


def _parse_grid(items: list[str]) -> dict[str, list]:
    grid = {k: list(v) for k, v in GRID_DEFAULTS.items()}
    for item in items:
        key, _, values = item.partition("=")
        if key not in grid or not values:
            raise ScenarioError(f"bad grid entry '{item}'; expected one of {', '.join(grid)} as key=v1,v2,...")
        cast = float if key == "lam" else int
        try:
            grid[key] = [cast(v) for v in values.split(",")]
        except ValueError as e:
            raise ScenarioError(f"bad grid entry '{item}': {e}") from e
    return grid


def cmd_sweep(args: argparse.Namespace, out: Output) -> int:
    scenario = _apply_globals(load_scenario(args.scenario), args)
    g = _parse_grid(args.grid)
    grid = tuning_grid(g["n1"], g["n2"], g["nu"], g["lam"])
    out.print(f"[bold blue]Sweeping {len(grid)} tunings on {scenario.name}[/bold blue]")
    table = tuning_sweep(scenario, grid, metric=args.metric, workers=args.workers)
    path = write_sweep(table, Path(args.out_dir) / f"{scenario.name}_sweep.json")

    view = Table(title=f"{scenario.name}: ranked by {args.metric}")
    for col in ("rank", "tuning", "value (um)", "note"):
        view.add_column(col)
    for row in table.rows:
        view.add_row(str(row.rank), row.tuning.label(), f"{row.value * 1e6:.3f}", row.error or "")
    out.print(view)
    out.print(f"[bold green]Wrote {path}[/bold green]")
    return 0


def cmd_profiles(args: argparse.Namespace, out: Output) -> int:
    if args.action == "list":
        for name in list_profiles():
            out.print(name)
        return 0
    if args.action == "scenarios":
        for name in list_scenarios():
            out.print(name)
        return 0
    if not args.name:
        raise ProfileError("profiles show needs a profile name or path")
    profile = load_profile(args.name, validate=False)
    if args.json:
        print(json.dumps(profile.model_dump(mode="json"), indent=2))
        return 0
    axes, rows = profile_rows(profile)
    table = Table(title=profile.name)
    table.add_column("field")
    for a in axes:
        table.add_column(a, justify="right")
    for row in rows:
        table.add_row(*row)
    out.print(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="feeddrive", description="Machine-tool feed-drive simulator")
    parser.add_argument("--plant-step", type=float, default=None, help="Plant integration step in s (default 25e-6)")
    parser.add_argument("--out-dir", type=str, default="feeddrive_out", help="Directory for written files")
    parser.add_argument("--seed", type=int, default=None, help="Seed for noise injection")
    parser.add_argument("--quiet", action="store_true", help="Only print errors")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log library progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Run scenarios and write traces plus a metrics summary")
    p.add_argument("scenarios", nargs="+", help="Scenario files or bundled scenario names")
    p.add_argument("--controller", choices=["scenario", "cascade", "rst"], default="scenario", help="Override the controller of every axis")
    p.add_argument("--full-rate", action="store_true", help="Record every plant step")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("identify", help="Identify axis parameters from recorded traces")
    p.add_argument("inputs", nargs="+", help="Trace CSVs, or one JSON manifest with --stage all")
    p.add_argument("--stage", choices=list(STAGE_ORDER) + ["all"], required=True)
    p.add_argument("--axis", type=str, default=None)
    p.add_argument("--profile", type=str, default="mikron_ucp710", help="Profile supplying the parameters not being identified")
    p.add_argument("--noise", type=float, default=0.0, help="Add Gaussian noise of this std (A) to recorded currents")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("synthesize-rst", help="Synthesize and export a GPC/RST position controller")
    p.add_argument("profile")
    p.add_argument("--axis", type=str, required=True)
    p.add_argument("--tuning", nargs=4, metavar=("N1", "N2", "NU", "LAMBDA"), default=["1", "30", "30", "100"])
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("sweep", help="Rank GPC tunings on a scenario")
    p.add_argument("scenario")
    p.add_argument("--grid", nargs="*", default=[], help="key=v1,v2 entries for n1, n2, nu, lam")
    p.add_argument("--metric", choices=["max", "rms", "contour"], default="max")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="Run cascade and RST on identical setpoints")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("profiles", help="List or show machine profiles")
    p.add_argument("action", choices=["list", "show", "scenarios"])
    p.add_argument("name", nargs="?")
    p.add_argument("--json", action="store_true", help="Print the stored JSON instead of a table")
    p.set_defaults(func=cmd_profiles)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.quiet)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.quiet:
        logging.getLogger("feeddrive").setLevel(logging.ERROR)
    try:
        return args.func(args, out)
    except FeedDriveError as e:
        out.error(str(e))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
