#!/usr/bin/env python3
"""
nlqm - command-line interface

Simulated search for a nonlinear leakage of quantum bit values into an
RF readout chain: bit generation, calibration, blinded runs and limits.
"""

import os
import sys
from pathlib import Path
from typing import Optional

# Force UTF-8 output on Windows to avoid cp1252 encoding errors
if sys.platform == "win32":
    os.environ.setdefault("PYTHONIOENCODING", "utf-8")
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    if hasattr(sys.stderr, "reconfigure"):
        sys.stderr.reconfigure(encoding="utf-8", errors="replace")

# Check Python version before importing anything else
if sys.version_info < (3, 11):
    print("Error: nlqm requires Python 3.11 or higher.")
    print(
        f"You are using Python {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"
    )
    sys.exit(1)

import click

from src.__version__ import __project__, __version__
from src.utils.logging import LogLevel

_LOG_LEVELS = [e.value for e in LogLevel]
_SIGMA_MODES = ["sem", "spread"]

DEFAULT_COMMAND = "reproduce"


def add_log_level_option(func):
    """Decorator that adds --log-level option to a command."""
    func = click.option(
        "--log-level",
        "-l",
        type=click.Choice(_LOG_LEVELS, case_sensitive=False),
        default="NONE",
        show_default=True,
        help="Console log verbosity.",
    )(func)
    return func


def add_config_option(func):
    """Decorator that adds the shared --config option to a command."""
    func = click.option(
        "--config",
        "-c",
        "config_path",
        type=click.Path(path_type=Path, exists=True, dir_okay=False),
        default=None,
        help="Run config file (defaults to the per-user config).",
    )(func)
    return func


def add_blind_option(func):
    """Decorator that adds --blind/--no-blind; unset means the config decides."""
    func = click.option(
        "--blind/--no-blind",
        default=None,
        help="Withhold quantum bit values and quantum results.",
    )(func)
    return func


def version_callback(ctx, param, value):
    """Display version information."""
    if not value or ctx.resilient_parsing:
        return
    click.echo(f"{__project__} v{__version__}")
    ctx.exit()


@click.group(invoke_without_command=False)
@click.option(
    "--version",
    is_flag=True,
    callback=version_callback,
    expose_value=False,
    is_eager=True,
    help="Show version information",
)
@click.pass_context
def cli(ctx):
    """nlqm - Simulated leakage search with a blinded quantum bit sample.

    Generates a mixed classical/quantum bit sample, calibrates the HEMT
    chain, runs the switch sequence for each bit and sets upper limits
    on the leakage parameter from the classical control sample and,
    when no excess is seen, from the quantum data.
    """
    ctx.ensure_object(dict)


# ---------------------------------------------------------------------------
# generate-bits
# ---------------------------------------------------------------------------


@cli.command(name="generate-bits")
@click.option("--classical", "n_classical", type=int, default=25, show_default=True)
@click.option("--qubit-a", "n_qubit_a", type=int, default=21, show_default=True)
@click.option("--qubit-b", "n_qubit_b", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed")
@click.option(
    "--out",
    "-o",
    type=click.Path(path_type=Path),
    default=Path("bits.csv"),
    show_default=True,
    help="Bits file to write",
)
@click.option(
    "--fidelity-file",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    help="Per-qubit fidelities (qubit_a.f_hadamard=... lines)",
)
@click.option("--blind/--no-blind", default=True, show_default=True)
@add_log_level_option
def generate_bits(
    n_classical: int,
    n_qubit_a: int,
    n_qubit_b: int,
    seed: int,
    out: Path,
    fidelity_file: Optional[Path],
    blind: bool,
    log_level: str,
):
    """Generate a mixed classical/quantum bit sample."""
    from src.commands.generate_bits_command import run_generate_bits_command

    sys.exit(
        run_generate_bits_command(
            n_classical, n_qubit_a, n_qubit_b, seed, out, fidelity_file, blind, log_level
        )
    )


# ---------------------------------------------------------------------------
# calibrate
# ---------------------------------------------------------------------------


@cli.command()
@click.option(
    "--out",
    "-o",
    type=click.Path(path_type=Path),
    default=Path("calibration.cfg"),
    show_default=True,
    help="Calibration file to write",
)
@click.option("--thermal", "thermal_dbm", type=float, help="SA reading of the terminated input (dBm)")
@click.option("--gen", "gen_dbm", type=float, help="SA reading of the generator tone (dBm)")
@add_config_option
@add_log_level_option
def calibrate(
    out: Path,
    thermal_dbm: Optional[float],
    gen_dbm: Optional[float],
    config_path: Optional[Path],
    log_level: str,
):
    """Solve the HEMT gain and noise temperature.

    Readings that are not given come from the forward model of the
    configured chain.
    """
    from src.commands.calibrate_command import run_calibrate_command

    sys.exit(run_calibrate_command(out, thermal_dbm, gen_dbm, config_path, log_level))


# ---------------------------------------------------------------------------
# simulate-run
# ---------------------------------------------------------------------------


@cli.command(name="simulate-run")
@click.option(
    "--out",
    "-o",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    default=Path("run"),
    show_default=True,
    help="Run directory to create",
)
@click.option(
    "--bits",
    "bits_path",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    help="Bits file (generated from the config when omitted)",
)
@click.option("--epsilon", type=float, help="True leakage parameter")
@click.option("--seed", type=int, help="Master seed")
@add_blind_option
@click.option("--no-progress", is_flag=True, help="Hide the progress bar")
@add_config_option
@add_log_level_option
def simulate_run(
    out_dir: Path,
    bits_path: Optional[Path],
    epsilon: Optional[float],
    seed: Optional[int],
    blind: Optional[bool],
    no_progress: bool,
    config_path: Optional[Path],
    log_level: str,
):
    """Run the switch sequence for every bit and record the spectra."""
    from src.commands.simulate_command import run_simulate_command

    sys.exit(
        run_simulate_command(
            out_dir,
            config_path=config_path,
            bits_path=bits_path,
            epsilon=epsilon,
            seed=seed,
            blind=blind,
            log_level=log_level,
            show_progress=not no_progress,
        )
    )


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


@cli.command()
@click.option(
    "--run",
    "run_dir",
    type=click.Path(path_type=Path, exists=True, file_okay=False),
    required=True,
    help="Run directory written by simulate-run",
)
@click.option(
    "--cal",
    "cal_path",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    help="Calibration file (the run's chain is calibrated when omitted)",
)
@click.option("--cl", type=float, help="Confidence level")
@click.option(
    "--out",
    "-o",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    help="Output directory (default: the run directory)",
)
@click.option("--dump-quantum", is_flag=True, help="Write per-bit quantum excesses (unblinded only)")
@click.option("--workers", "-w", type=int, default=1, show_default=True)
@add_blind_option
@add_config_option
@add_log_level_option
def analyze(
    run_dir: Path,
    cal_path: Optional[Path],
    cl: Optional[float],
    out_dir: Optional[Path],
    dump_quantum: bool,
    workers: int,
    blind: Optional[bool],
    config_path: Optional[Path],
    log_level: str,
):
    """Analyze a run: classical limit, quantum gate and quantum limit."""
    from src.commands.analyze_command import run_analyze_command

    sys.exit(
        run_analyze_command(
            run_dir,
            cal_path=cal_path,
            config_path=config_path,
            blind=blind,
            cl=cl,
            out_dir=out_dir,
            dump_quantum=dump_quantum,
            workers=workers,
            log_level=log_level,
        )
    )


# ---------------------------------------------------------------------------
# limit
# ---------------------------------------------------------------------------


@cli.command()
@click.argument("analysis_path", type=click.Path(path_type=Path, exists=True, dir_okay=False))
@click.option("--cl", type=float, default=0.90, show_default=True)
@click.option(
    "--cal",
    "cal_path",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    help="Calibration file providing the applied power",
)
@click.option(
    "--pa-watts", "p_applied_w", type=float, help="Applied power P_A delivered to the HP load (W)"
)
@click.option("--fc", "f_c", type=float, default=1.0, show_default=True, help="Readout fidelity")
@click.option("--fh", "f_h", type=float, default=1.0, show_default=True, help="Hadamard fidelity")
@click.option("--bandwidth-fraction", type=float, default=1.0, show_default=True)
@click.option(
    "--sigma-mode",
    type=click.Choice(_SIGMA_MODES, case_sensitive=False),
    default="sem",
    show_default=True,
)
@click.option(
    "--dataset",
    "dataset_tag",
    type=click.Choice(["classical", "quantum"], case_sensitive=False),
    default="classical",
    show_default=True,
    help="Which sample the excesses come from",
)
@add_blind_option
@click.option(
    "--out",
    "-o",
    type=click.Path(path_type=Path),
    default=Path("limit.json"),
    show_default=True,
)
@add_log_level_option
def limit(
    analysis_path: Path,
    cl: float,
    cal_path: Optional[Path],
    p_applied_w: Optional[float],
    f_c: float,
    f_h: float,
    bandwidth_fraction: float,
    sigma_mode: str,
    dataset_tag: str,
    blind: Optional[bool],
    out: Path,
    log_level: str,
):
    """Set an epsilon limit from the excess column of an analysis file."""
    from src.commands.limit_command import run_limit_command

    sys.exit(
        run_limit_command(
            analysis_path,
            out,
            cl=cl,
            cal_path=cal_path,
            p_applied_w=p_applied_w,
            f_c=f_c,
            f_h=f_h,
            bandwidth_fraction=bandwidth_fraction,
            sigma_mode=sigma_mode.lower(),
            dataset_tag=dataset_tag.lower(),
            blind=blind,
            log_level=log_level,
        )
    )


# ---------------------------------------------------------------------------
# ensemble
# ---------------------------------------------------------------------------


@cli.command()
@click.option(
    "--out",
    "-o",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    default=Path("ensemble"),
    show_default=True,
)
@click.option("--repetitions", "n_repetitions", type=int, default=100, show_default=True)
@click.option("--bits", "n_bits", type=int, default=10, show_default=True)
@click.option("--realizations", "n_realizations", type=int, default=100, show_default=True)
@click.option("--excess-sigma", type=float, default=10.0, show_default=True)
@click.option("--epsilon", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, help="Master seed")
@click.option("--no-progress", is_flag=True, help="Hide progress bars")
@add_config_option
@add_log_level_option
def ensemble(
    out_dir: Path,
    n_repetitions: int,
    n_bits: int,
    n_realizations: int,
    excess_sigma: float,
    epsilon: float,
    seed: Optional[int],
    no_progress: bool,
    config_path: Optional[Path],
    log_level: str,
):
    """Run the limit ensemble and the signal recovery studies."""
    from src.commands.ensemble_command import run_ensemble_command

    sys.exit(
        run_ensemble_command(
            out_dir,
            config_path=config_path,
            n_repetitions=n_repetitions,
            n_bits=n_bits,
            n_realizations=n_realizations,
            excess_sigma=excess_sigma,
            epsilon=epsilon,
            seed=seed,
            log_level=log_level,
            show_progress=not no_progress,
        )
    )


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


@cli.command()
@click.option(
    "--out",
    "-o",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    default=Path("nlqm_output"),
    show_default=True,
)
@click.option("--seed", type=int, help="Master seed")
@click.option("--epsilon", type=float, help="True leakage parameter")
@add_blind_option
@click.option("--no-progress", is_flag=True, help="Hide the progress bar")
@add_config_option
@add_log_level_option
def reproduce(
    out_dir: Path,
    seed: Optional[int],
    epsilon: Optional[float],
    blind: Optional[bool],
    no_progress: bool,
    config_path: Optional[Path],
    log_level: str,
):
    """Generate, calibrate, run and analyze in one go."""
    from src.commands.pipeline import run_reproduce

    sys.exit(
        run_reproduce(
            out_dir,
            config_path=config_path,
            seed=seed,
            epsilon=epsilon,
            blind=blind,
            log_level=log_level,
            show_progress=not no_progress,
        )
    )


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main():
    """Entry point for the application.

    When no subcommand is given, ``reproduce`` runs with the saved config.
    """
    known_commands = set(cli.commands)
    has_command = any(arg in known_commands for arg in sys.argv[1:])

    if not has_command and "--version" not in sys.argv and "--help" not in sys.argv:
        sys.argv[1:1] = [DEFAULT_COMMAND]

    cli()


if __name__ == "__main__":
    main()
