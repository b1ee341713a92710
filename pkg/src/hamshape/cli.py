"""Batch command-line front end.

Five subcommands driven by a flat key=value config file:

    hamshape engineer         --config cfg [--seed N] [--out DIR]
    hamshape feasibility-scan --config cfg [--seed N] [--out DIR]
    hamshape relaxation-scan  --config cfg [--seed N] [--out DIR]
    hamshape lattice-bench    --config cfg [--seed N] [--out DIR]
    hamshape simulate         --config cfg [--seed N] [--out DIR]

Outputs are UTF-8 CSV tables (byte-deterministic per config+seed), SVG
figures, and schedule JSON files.  Exit codes: 0 success, 2 unreachable
target, 3 sampler exhausted, 4 dense limit exceeded.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click

from . import experiments, plots
from .engineering import ReachabilityError
from .hamiltonian import load_hamiltonian
from .lp import SamplerExhaustedError
from .pauli import DenseLimitError
from .schedule import save_schedule

EXIT_UNREACHABLE = 2
EXIT_SAMPLER = 3
EXIT_DENSE = 4


def parse_config(path) -> dict:
    """Flat key=value file; '#' starts a comment; later keys win."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.ClickException(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _get(cfg, key, cast, default=None):
    if key not in cfg:
        if default is None:
            raise click.ClickException(f"missing config key {key!r}")
        return default
    try:
        return cast(cfg[key])
    except ValueError as exc:
        raise click.ClickException(f"config key {key!r}: {exc}") from exc


def _bool(s: str) -> bool:
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _int_list(s: str) -> list:
    return [int(v) for v in s.split(",") if v.strip()]


def _float_list(s: str) -> list:
    return [float(v) for v in s.split(",") if v.strip()]


def write_csv(path, rows) -> None:
    """Deterministic CSV: header from the first row, '\\n' line endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _common(func):
    func = click.option("--out", type=click.Path(file_okay=False), default=".",
                        help="output directory")(func)
    func = click.option("--seed", type=int, default=None,
                        help="override the config seed")(func)
    func = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                        required=True, help="flat key=value config file")(func)
    return func


def _setup(config, seed, out):
    cfg = parse_config(config)
    if seed is None:
        seed = int(cfg.get("seed", 0))
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    return cfg, seed, outdir


@click.group()
def main():
    """Engineer target Hamiltonians from a fixed system Hamiltonian."""


@main.command()
@_common
def engineer(config, seed, out):
    """Solve one engineering instance and write the pulse schedule."""
    cfg, seed, outdir = _setup(config, seed, out)
    system = load_hamiltonian(_get(cfg, "system", str))
    target = load_hamiltonian(_get(cfg, "target", str))
    mode = _get(cfg, "mode", str, "pauli")
    try:
        res = experiments.engineer(
            system, target, mode,
            t=_get(cfg, "t", float, 1.0),
            ratio=_get(cfg, "ratio", float, 3.0),
            max_attempts=_get(cfg, "max_attempts", int, 20),
            seed=seed,
            full_columns=_get(cfg, "columns", str, "sampled") == "full")
    except ReachabilityError as exc:
        click.echo(f"unreachable target: {exc}", err=True)
        click.echo("missing terms: " + ", ".join(str(a) for a in exc.missing), err=True)
        sys.exit(EXIT_UNREACHABLE)
    except SamplerExhaustedError as exc:
        click.echo(f"sampler exhausted: {exc}", err=True)
        sys.exit(EXIT_SAMPLER)
    path = outdir / _get(cfg, "schedule", str, "schedule.json")
    save_schedule(res.schedule, path)
    click.echo(f"objective {res.objective:.12g}  d {res.d}  r {res.r}  "
               f"blocks {len(res.schedule.blocks)}  commuting {res.schedule.commuting}  "
               f"iterations {res.iterations}  solve_seconds {res.runtime:.3f}")
    click.echo(f"schedule written to {path}")


@main.command("feasibility-scan")
@_common
def feasibility_scan(config, seed, out):
    """Empirical feasibility frequency vs the Wendel prediction."""
    cfg, seed, outdir = _setup(config, seed, out)
    mode = _get(cfg, "mode", str, "pauli")
    rows = experiments.feasibility_scan(
        mode,
        _get(cfg, "n_list", _int_list),
        _get(cfg, "ratios", _float_list),
        _get(cfg, "replicates", int, 50),
        seed)
    write_csv(outdir / "feasibility.csv", rows)
    series = {}
    for n in sorted({r["n"] for r in rows}):
        pts = [r for r in rows if r["n"] == n]
        series[f"n={n} empirical"] = ([r["ratio"] for r in pts],
                                      [r["frequency"] for r in pts])
        series[f"n={n} Wendel"] = ([r["ratio"] for r in pts],
                                   [r["wendel"] for r in pts])
    plots.line_plot(outdir / "feasibility.svg", series, "r / d",
                    "feasibility frequency", f"{mode} feasibility transition")
    click.echo(f"wrote {outdir / 'feasibility.csv'} and feasibility.svg")


@main.command("relaxation-scan")
@_common
def relaxation_scan(config, seed, out):
    """Mean optimal objective vs relaxation size (nested and resampled)."""
    cfg, seed, outdir = _setup(config, seed, out)
    n = _get(cfg, "n", int)
    ratios = _get(cfg, "ratios", _float_list)
    replicates = _get(cfg, "replicates", int, 25)
    rows = (experiments.relaxation_scan(n, ratios, replicates, seed, nested=True)
            + experiments.relaxation_scan(n, ratios, replicates, seed, nested=False))
    write_csv(outdir / "relaxation.csv", rows)
    series = {}
    for nested in (True, False):
        pts = [r for r in rows if r["nested"] == nested]
        label = "nested" if nested else "resampled"
        series[label] = ([r["ratio"] for r in pts],
                         [r["mean_objective"] for r in pts],
                         [r["std_objective"] for r in pts])
    plots.band_plot(outdir / "relaxation.svg", series, "r / d",
                    "mean optimal objective", f"relaxation trade-off, n={n}")
    click.echo(f"wrote {outdir / 'relaxation.csv'} and relaxation.svg")


@main.command("lattice-bench")
@_common
def lattice_bench(config, seed, out):
    """LP benchmark on square-lattice ZZ systems."""
    cfg, seed, outdir = _setup(config, seed, out)
    rows = experiments.lattice_bench(
        _get(cfg, "sides", _int_list),
        _get(cfg, "ratio", float, 3.0),
        _get(cfg, "replicates", int, 5),
        seed)
    write_csv(outdir / "lattice.csv", rows)
    plots.band_plot(
        outdir / "lattice.svg",
        {"solve time": ([r["d"] for r in rows],
                        [r["mean_seconds"] for r in rows],
                        [r["std_seconds"] for r in rows])},
        "d", "solver wall time (s)", "lattice benchmark", logy=True)
    click.echo(f"wrote {outdir / 'lattice.csv'} and lattice.svg")


@main.command()
@_common
def simulate(config, seed, out):
    """Sweep one error knob and report mean/std infidelity."""
    cfg, seed, outdir = _setup(config, seed, out)
    sweep = _get(cfg, "sweep", str)
    values = _get(cfg, "values", _int_list if sweep == "cycles" else _float_list)
    try:
        rows = experiments.simulate_sweep(
            _get(cfg, "kind", str, "ising"),
            _get(cfg, "mode", str, "pauli"),
            _get(cfg, "n", int),
            _get(cfg, "t", float, 1.0),
            sweep, values,
            _get(cfg, "replicates", int, 30),
            seed,
            t_p=_get(cfg, "t_p", float, 0.0),
            epsilon=_get(cfg, "epsilon", float, 0.0),
            cycles=_get(cfg, "cycles", int, 1),
            ratio=_get(cfg, "ratio", float, 3.0))
    except DenseLimitError as exc:
        click.echo(f"dense limit exceeded: {exc}", err=True)
        sys.exit(EXIT_DENSE)
    except ReachabilityError as exc:
        click.echo(f"unreachable target: {exc}", err=True)
        sys.exit(EXIT_UNREACHABLE)
    except SamplerExhaustedError as exc:
        click.echo(f"sampler exhausted: {exc}", err=True)
        sys.exit(EXIT_SAMPLER)
    write_csv(outdir / "simulate.csv", rows)
    plots.band_plot(
        outdir / "simulate.svg",
        {sweep: ([r["value"] for r in rows],
                 [r["mean_infidelity"] for r in rows],
                 [r["std_infidelity"] for r in rows])},
        sweep, "average gate infidelity",
        f"infidelity vs {sweep}", logy=True)
    click.echo(f"wrote {outdir / 'simulate.csv'} and simulate.svg")


if __name__ == "__main__":
    main()
