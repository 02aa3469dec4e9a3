"""Command line front end.

Three subcommands: ``simulate`` exports a synthetic loss-table bundle,
``calibrate`` runs selection procedures over Monte Carlo trials and writes
plot-ready reports, ``certify`` runs the validity suite and fails the process
when a risk-controlling procedure exceeds its violation bound.

Exit codes: 0 success, 1 input or schema error, 2 global abstention
(calibrate only), 3 certification failure (certify only). Configuration is
explicit through flags and files; environment variables are never consulted.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import sys
from pathlib import Path

import click
import numpy as np

from .harness import SimulatorSource, TableSource, run_trials, summarize
from .io import BundleError, read_bundle, write_bundle
from .simulator import SimModel, SimModelSpec, build_loss_table
from .testing import METHODS
from .types import CalibrationSpec, ConfigGrid, ObjectiveSpec, TestOutcome

_CONTROLLING = [
    "pareto_testing",
    "split_fst",
    "sgt_3d",
    "bonferroni",
    "low_risk_path",
    "constrained_path",
]


class _InputError(click.ClickException):
    exit_code = 1


def _load_json(path: Path) -> dict:
    if not path.is_file():
        raise _InputError(f"missing file: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise _InputError(f"unparseable JSON in {path}: {e}")


def _load_spec(path: str) -> CalibrationSpec:
    try:
        return CalibrationSpec.from_dict(_load_json(Path(path)))
    except (KeyError, ValueError, TypeError) as e:
        raise _InputError(f"invalid calibration spec {path}: {e}")


def _load_source(path: str, calib_size: int | None):
    """A source is either a loss-table bundle directory or a simulator
    descriptor JSON file."""
    p = Path(path)
    if p.is_dir():
        try:
            table, _ = read_bundle(p)
        except BundleError as e:
            raise _InputError(str(e))
        m = calib_size if calib_size is not None else table.example_count // 2
        try:
            return TableSource(table, m)
        except ValueError as e:
            raise _InputError(str(e))
    d = _load_json(p)
    if d.get("kind") != "simulator":
        raise _InputError(f"{path}: source kind must be 'simulator' or a bundle dir")
    try:
        model = SimModel(SimModelSpec.from_dict(d.get("model", {})))
        grid = ConfigGrid.from_dict(d["grid"])
        m = calib_size if calib_size is not None else int(d.get("m", 2000))
        return SimulatorSource(
            model,
            grid,
            m,
            lam=d.get("lam"),
            n_oracle=int(d.get("n_oracle", 200_000)),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise _InputError(f"invalid simulator descriptor {path}: {e}")


def _parse_methods(methods: str | None) -> list[str]:
    names = (
        [m.strip() for m in methods.split(",") if m.strip()]
        if methods
        else list(_CONTROLLING)
    )
    unknown = [m for m in names if m not in METHODS]
    if unknown:
        raise _InputError(f"unknown methods: {unknown}; known: {sorted(METHODS)}")
    return names


def _parse_alpha_grid(alpha_grid: str | None) -> list[float] | None:
    if not alpha_grid:
        return None
    try:
        vals = [float(a) for a in alpha_grid.split(",") if a.strip()]
    except ValueError as e:
        raise _InputError(f"bad --alpha-grid: {e}")
    if not vals or any(not 0.0 < a <= 1.0 for a in vals):
        raise _InputError("--alpha-grid values must lie in (0, 1]")
    return vals


def _with_alpha(spec: CalibrationSpec, alpha: float) -> CalibrationSpec:
    """Retarget the first controlled objective at a new level."""
    objectives = []
    done = False
    for o in spec.objectives:
        if o.kind == "controlled" and not done:
            objectives.append(dataclasses.replace(o, alpha=alpha))
            done = True
        else:
            objectives.append(o)
    return dataclasses.replace(spec, objectives=tuple(objectives))


def _first_trial_outcomes(
    source, spec: CalibrationSpec, methods, seed: int
) -> dict[str, TestOutcome]:
    child = np.random.SeedSequence(seed).spawn(1)[0]
    data_seed, split_seed = (int(s) for s in child.generate_state(2))
    table, _ = source.trial(spec, data_seed)
    return {name: METHODS[name](table, spec, split_seed) for name in methods}


@click.group()
def main():
    """Distribution-free multi-objective risk calibration."""


@main.command()
@click.option("--spec", "spec_path", required=True, help="Calibration spec JSON.")
@click.option("--source", "source_path", required=True,
              help="Loss-table bundle directory or simulator descriptor JSON.")
@click.option("--methods", default=None,
              help="Comma-separated method ids (default: all controlling methods).")
@click.option("--trials", default=100, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--alpha-grid", default=None,
              help="Comma-separated target levels for the first controlled objective.")
@click.option("--calib-size", default=None, type=int,
              help="Calibration examples per trial (default: source-specific).")
@click.option("--out", "out_dir", required=True, help="Output directory.")
def calibrate(spec_path, source_path, methods, trials, seed, alpha_grid,
              calib_size, out_dir):
    """Run selection procedures over Monte Carlo trials and write reports."""
    if trials < 1:
        raise _InputError("--trials must be at least 1")
    spec = _load_spec(spec_path)
    source = _load_source(source_path, calib_size)
    names = _parse_methods(methods)
    alphas = _parse_alpha_grid(alpha_grid) or [spec.controlled[0].alpha]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    report = {"alphas": alphas, "methods": names, "trials": trials,
              "seed": seed, "runs": []}
    summary_rows = []
    front_rows = []
    free_ids = [o.id for o in spec.free]
    any_selection = False
    for alpha in alphas:
        spec_a = _with_alpha(spec, alpha)
        records = run_trials(source, spec_a, names, trials, seed)
        summaries = summarize(records)
        outcomes = _first_trial_outcomes(source, spec_a, names, seed)
        report["runs"].append({
            "alpha": alpha,
            "summaries": {n: s.to_dict() for n, s in summaries.items()},
            "first_trial_outcomes": {
                n: o.to_dict() for n, o in outcomes.items()
            },
            "trial_records": [
                {
                    "method": r.method,
                    "trial": r.trial,
                    "abstained": r.abstained,
                    "violated": r.violated,
                    "rejected_count": r.rejected_count,
                    "selected": list(r.selected),
                    "selected_free": r.selected_free,
                }
                for r in records
            ],
        })
        for name in names:
            s = summaries[name]
            if s.abstentions < s.trials:
                any_selection = True
            row = {
                "alpha": alpha,
                "method": name,
                "trials": s.trials,
                "violation_rate": s.violation_rate,
                "violation_upper": s.violation_upper,
                "abstention_rate": s.abstention_rate,
            }
            for oid in free_ids:
                row[f"mean_{oid}"] = s.mean_selected_free.get(oid, "")
            summary_rows.append(row)
        for rank, (g, p_opt, free) in enumerate(
            outcomes.get("pareto_testing", next(iter(outcomes.values()))).ordered_candidates
        ):
            row = {"alpha": alpha, "rank": rank, "grid_index": g, "p_opt": p_opt}
            for oid, v in zip(free_ids, free):
                row[f"free_{oid}"] = v
            front_rows.append(row)

    (out / "report.json").write_text(json.dumps(report, indent=2))
    _write_csv(out / "summary.csv", summary_rows)
    _write_csv(out / "pareto_front.csv", front_rows)
    if not any_selection:
        click.echo("every trial abstained", err=True)
        sys.exit(2)
    click.echo(f"wrote {out / 'report.json'}, summary.csv, pareto_front.csv")


def _write_csv(path: Path, rows: list[dict]):
    if not rows:
        path.write_text("")
        return
    fields = list(rows[0].keys())
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


@main.command()
@click.argument("sim_spec_file", type=click.Path())
@click.argument("grid_file", type=click.Path())
@click.argument("out_dir", type=click.Path())
def simulate(sim_spec_file, grid_file, out_dir):
    """Evaluate a synthetic model on a threshold grid and export the bundle.

    SIM_SPEC_FILE holds the model parameters, the number of examples and the
    objective list; GRID_FILE holds the threshold grid dims.
    """
    d = _load_json(Path(sim_spec_file))
    g = _load_json(Path(grid_file))
    try:
        model = SimModel(SimModelSpec.from_dict(d.get("model", d)))
        grid = ConfigGrid.from_dict(g)
        n = int(d.get("examples", 5000))
        if n < 1:
            raise ValueError("examples must be positive")
        objectives = [
            ObjectiveSpec.from_dict(o)
            for o in d.get(
                "objectives",
                [
                    {"id": "accuracy", "kind": "controlled", "alpha": 0.05},
                    {"id": "cost", "kind": "free"},
                ],
            )
        ]
        batch = model.sample(n, seed=int(d.get("sample_seed", 0)))
        table = build_loss_table(batch, grid, objectives, lam=d.get("lam"))
    except (KeyError, ValueError, TypeError) as e:
        raise _InputError(f"invalid simulation inputs: {e}")
    write_bundle(table, out_dir, objectives=objectives)
    click.echo(
        f"wrote bundle to {out_dir}: {n} examples x {len(grid)} configurations"
    )


@main.command()
@click.option("--spec", "spec_path", required=True, help="Calibration spec JSON.")
@click.option("--source", "source_path", required=True,
              help="Loss-table bundle directory or simulator descriptor JSON.")
@click.option("--methods", default=None,
              help="Comma-separated method ids (default: all controlling methods).")
@click.option("--trials", default=500, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--calib-size", default=None, type=int)
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--delta-scale", default=1.0, show_default=True, type=float,
              help="Test hook: inflate the error budget before running.")
def certify(spec_path, source_path, methods, trials, seed, calib_size,
            out_dir, delta_scale):
    """Certify family-wise validity on repeated trials; exit 3 on failure."""
    if trials < 1:
        raise _InputError("--trials must be at least 1")
    spec = _load_spec(spec_path)
    if delta_scale != 1.0:
        scaled = delta_scale * spec.delta
        if not 0.0 < scaled < 1.0:
            raise _InputError("scaled delta leaves (0, 1)")
        spec = dataclasses.replace(spec, delta=scaled)
    source = _load_source(source_path, calib_size)
    names = _parse_methods(methods)
    records = run_trials(source, spec, names, trials, seed)
    summaries = summarize(records)
    # the violation probability bound is delta for the original budget; the
    # slack is two binomial standard deviations at the nominal level
    delta = spec.delta / delta_scale
    bound = float(delta + 2.0 * np.sqrt(delta * (1.0 - delta) / trials))
    verdict = {
        "delta": delta,
        "trials": trials,
        "bound": bound,
        "methods": {},
        "passed": True,
    }
    for name in names:
        s = summaries[name]
        ok = bool(s.violation_rate <= bound)
        verdict["methods"][name] = {
            "violation_rate": s.violation_rate,
            "violation_upper": s.violation_upper,
            "passed": ok,
        }
        if not ok:
            verdict["passed"] = False
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "verdict.json").write_text(json.dumps(verdict, indent=2))
    if not verdict["passed"]:
        click.echo("certification failed", err=True)
        sys.exit(3)
    click.echo(f"certified: all methods within {bound:.4f}")


if __name__ == "__main__":
    main()
