"""
Command-line entry point: ``run``, ``suite``, ``render`` and ``validate``.

Exit codes: 0 success, 1 config error, 2 runtime failure, 3 partial suite failure.
"""

import functools
import json
import sys
from pathlib import Path
from typing import List

import click

from taprecon.core.config import settings
from taprecon.core.errors import ConfigError, TapReconError
from taprecon.explorer.policy import POLICIES
from taprecon.harness.config import ExperimentConfig, dump_config, load_config
from taprecon.harness.episode import run_episode
from taprecon.harness.render import render_run
from taprecon.harness.suite import EpisodeJob, episode_path, run_suite, write_episode
from taprecon.recon.checkpoint import load_checkpoint, save_checkpoint

EXIT_PARTIAL = 3


def _fail(error: TapReconError) -> None:
    click.echo(f"error: {error}", err=True)
    if isinstance(error, ConfigError):
        for item in error.errors:
            location = ".".join(str(part) for part in item.get("loc", ()))
            click.echo(f"  {location}: {item.get('msg', item)}", err=True)
    sys.exit(error.exit_code)


def _handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TapReconError as e:
            _fail(e)

    return wrapper


def experiment_options(command):
    """Options shared by every command that reads an experiment config."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Experiment YAML; defaults to DEFAULT_CONFIG_PATH or built-in defaults.",
        ),
        click.option(
            "--set",
            "overrides",
            multiple=True,
            metavar="KEY=VALUE",
            help="Dotted override, e.g. explorer.policy=random. Repeatable.",
        ),
        click.option("--taps", type=int, default=None, help="Tap budget T."),
        click.option("--lambda", "transition_rate", type=float, default=None, help="Transition rate."),
        click.option("--seed", "seeds", type=int, multiple=True, help="Seed; repeatable."),
        click.option(
            "--output-dir", type=click.Path(file_okay=False, path_type=Path), default=None
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def build_config(
    config_path: Path | None,
    overrides: List[str],
    taps: int | None = None,
    transition_rate: float | None = None,
    seeds: List[int] | None = None,
    output_dir: Path | None = None,
    extra: List[str] | None = None,
) -> ExperimentConfig:
    """Load the config file and layer ``--set`` and the dedicated flags on top."""
    assignments = list(overrides)
    if taps is not None:
        assignments.append(f"episode.taps={taps}")
    if transition_rate is not None:
        assignments.append(f"explorer.transition_rate={transition_rate!r}")
    if seeds:
        assignments.append(f"episode.seeds={json.dumps(list(seeds))}")
    if output_dir is not None:
        assignments.append(f"output_dir={json.dumps(str(output_dir))}")
    assignments.extend(extra or [])
    return load_config(config_path or settings.DEFAULT_CONFIG_PATH, assignments)


@click.group()
def cli() -> None:
    """Active tactile super-resolution experiments."""


@cli.command()
@experiment_options
@click.option("--policy", type=click.Choice(POLICIES), default=None)
@click.option("--surface", default=None, help="Surface id; defaults to the first one.")
@click.option("--workers", type=int, default=None, help="Threads for action scoring.")
@click.option(
    "--checkpoint",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also save the final belief as a binary checkpoint.",
)
@click.option(
    "--resume",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Continue from a checkpoint written by --checkpoint.",
)
@_handle_errors
def run(
    config_path, overrides, taps, transition_rate, seeds, output_dir, policy, surface, workers,
    checkpoint, resume,
):
    """Run a single episode and write its log and snapshots."""
    extra = [f"explorer.policy={policy}"] if policy else []
    config = build_config(config_path, overrides, taps, transition_rate, seeds, output_dir, extra)
    surface = surface or config.surface_ids[0]
    config.surface(surface)  # unknown ids are config errors
    seed = config.episode.seeds[0]

    initial = None
    if resume is not None:
        grid, _, initial = load_checkpoint(resume)
        if grid != config.grid:
            raise ConfigError(f"checkpoint {resume} was saved for a different grid")
        click.echo(f"resuming after {initial.t} taps")

    result = run_episode(
        config,
        surface,
        config.explorer.policy,
        seed,
        workers=workers or settings.SCORING_WORKERS,
        initial=initial,
    )
    csv_path = write_episode(
        result,
        episode_path(config.output_dir, EpisodeJob(surface, config.explorer.policy, seed)),
    )
    final = result.log.records[-1]
    click.echo(
        f"{csv_path}: {len(result.log)} taps, ssim_state={final.ssim_state:.4f}, "
        f"mse={final.mse:.6f}"
    )
    if checkpoint is not None:
        save_checkpoint(checkpoint, result.state, config.grid, config.prior)
    if result.violations:
        click.echo(f"covariance violations: {len(result.violations)}", err=True)


@cli.command()
@experiment_options
@click.option(
    "--policy", "policies", type=click.Choice(POLICIES), multiple=True, help="Repeatable."
)
@click.option("--workers", type=int, default=None, help="Episode processes.")
@click.option("--scoring-workers", type=int, default=None, help="Threads per episode.")
@click.option("--no-progress", is_flag=True, default=False)
@_handle_errors
def suite(
    config_path, overrides, taps, transition_rate, seeds, output_dir,
    policies, workers, scoring_workers, no_progress,
):
    """Run every surface x policy x seed episode."""
    extra = [f"episode.policies={json.dumps(list(policies))}"] if policies else []
    config = build_config(config_path, overrides, taps, transition_rate, seeds, output_dir, extra)
    result = run_suite(
        config,
        workers=workers or settings.SUITE_WORKERS,
        scoring_workers=scoring_workers,
        progress=not no_progress,
    )
    click.echo(result.summary.to_string(index=False))
    if result.failures:
        click.echo(f"{len(result.failures)} episode(s) failed", err=True)
        sys.exit(EXIT_PARTIAL)


@cli.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@_handle_errors
def render(run_dir):
    """Compose snapshot grids and SSIM curve data for a run directory."""
    for path in render_run(run_dir):
        click.echo(str(path))


@cli.command()
@experiment_options
@click.option("--show", is_flag=True, default=False, help="Print the resolved config.")
@_handle_errors
def validate(config_path, overrides, taps, transition_rate, seeds, output_dir, show):
    """Check a config file without running anything."""
    config = build_config(config_path, overrides, taps, transition_rate, seeds, output_dir)
    if show:
        click.echo(dump_config(config), nl=False)
    else:
        click.echo(
            f"valid: {len(config.surfaces)} surface(s), {len(config.episode.seeds)} seed(s), "
            f"{config.episode.taps} taps"
        )


if __name__ == "__main__":
    cli()
