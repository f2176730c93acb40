"""Command-line interface: one subcommand per pipeline stage plus `run`.

Precedence: built-in defaults < config file < command-line flags. Exit
codes are distinct per error class (see EXIT_CODES).
"""

from __future__ import annotations

import dataclasses
import sys

import click

from echoscope import report as report_mod
from echoscope import synth as synth_mod
from echoscope.errors import (
    ConfigError,
    CorpusFormatError,
    DanglingReferenceError,
    DuplicateIdError,
    EchoscopeError,
    StageError,
    TrainingDivergedError,
    UnpolarizedCorpusError,
)

EXIT_CODES = [
    (ConfigError, 2),
    (CorpusFormatError, 3),
    (DuplicateIdError, 3),
    (DanglingReferenceError, 3),
    (UnpolarizedCorpusError, 4),
    (TrainingDivergedError, 5),
    (StageError, 6),
    (EchoscopeError, 1),
]


def _exit_code(exc):
    if isinstance(exc, StageError) and isinstance(exc.cause, EchoscopeError):
        return _exit_code(exc.cause)
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def _build_config(config_path, overrides) -> report_mod.PipelineConfig:
    if config_path:
        cfg = report_mod.PipelineConfig.from_file(config_path)
    else:
        cfg = report_mod.PipelineConfig()
    overrides = {k: v for k, v in overrides.items() if v is not None}
    synth_path = overrides.pop("synth_config", None)
    if synth_path:
        cfg = dataclasses.replace(cfg, synth=synth_mod.load_config(synth_path))
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def _run_stages(cfg, stages, restore):
    cfg.validate()
    run = report_mod.PipelineRun(cfg)
    for dep in restore:
        getattr(run, f"restore_{dep}")()
    for name in stages:
        getattr(run, "stage_" + name.replace("-", "_"))()
    bundle = run.finish()
    return bundle


def _handle(fn):
    try:
        fn()
    except Exception as exc:  # map to stable exit codes
        click.echo(f"error: {exc}", err=True)
        sys.exit(_exit_code(exc))


common_options = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="Pipeline config JSON; flags override it."),
    click.option("--outdir", "output_dir", type=click.Path(), default=None),
    click.option("--seed", type=int, default=None),
    click.option("--workers", type=int, default=None),
]


def with_common(fn):
    for opt in reversed(common_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Echo-chamber and affective-polarization analysis of news comments."""


@main.command()
@with_common
@click.option("--synth-config", type=click.Path(exists=True), default=None,
              help="Generator config JSON (flat key-value).")
def generate(config_path, **overrides):
    """Generate a seeded synthetic corpus with ground truth."""
    def go():
        cfg = _build_config(config_path, overrides)
        if cfg.synth is None:
            cfg = dataclasses.replace(cfg, synth=synth_mod.SynthConfig())
        _run_stages(cfg, ["ingest"], [])
    _handle(go)


@main.command()
@with_common
@click.option("--articles", "article_path", type=click.Path(exists=True), default=None)
@click.option("--comments", "comment_path", type=click.Path(exists=True), default=None)
@click.option("--media", "media_path", type=click.Path(exists=True), default=None)
def ingest(config_path, **overrides):
    """Ingest and validate a corpus from record files."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides), ["ingest"], []))


@main.command("cluster-media")
@with_common
@click.option("--top-k-media", type=int, default=None)
@click.option("--anchor-medium", type=str, default=None)
def cluster_media(config_path, **overrides):
    """Discover the two polar media groups."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides),
                                ["cluster-media"], ["corpus"]))


@main.command()
@with_common
@click.option("--active-min-comments", type=int, default=None)
def leanings(config_path, **overrides):
    """Compute individual user leanings and population curves."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides),
                                ["leanings"], ["corpus", "grouping"]))


@main.command("conet")
@with_common
@click.option("--edge-fraction", type=float, default=None)
def conet_cmd(config_path, **overrides):
    """Build the co-comment network and measure assortativity."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides),
                                ["conet"], ["corpus", "grouping", "leanings"]))


@main.command("affect")
@with_common
def affect_cmd(config_path, **overrides):
    """Measure affective response curves per media group."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides),
                                ["affect"], ["corpus", "grouping", "leanings"]))


@main.command("classify")
@with_common
@click.option("--classify-min-comments", type=int, default=None)
def classify_cmd(config_path, **overrides):
    """Train and compare article-group classifiers."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides),
                                ["classify"], ["corpus", "grouping"]))


@main.command("report")
@with_common
def report_cmd(config_path, **overrides):
    """Render summary figures from the emitted tables."""
    _handle(lambda: _run_stages(_build_config(config_path, overrides), ["render"], []))


@main.command()
@with_common
@click.option("--synth-config", type=click.Path(exists=True), default=None)
@click.option("--articles", "article_path", type=click.Path(exists=True), default=None)
@click.option("--comments", "comment_path", type=click.Path(exists=True), default=None)
@click.option("--media", "media_path", type=click.Path(exists=True), default=None)
def run(config_path, **overrides):
    """Run the full pipeline end to end."""
    def go():
        cfg = _build_config(config_path, overrides)
        bundle = report_mod.run_pipeline(cfg)
        if bundle.manifest["halted_at"]:
            click.echo(
                f"halted at stage {bundle.manifest['halted_at']}: "
                f"{bundle.manifest['halt_reason']}"
            )
        else:
            click.echo(f"pipeline complete: {bundle.output_dir}/manifest.json")
    _handle(go)


if __name__ == "__main__":
    main()
