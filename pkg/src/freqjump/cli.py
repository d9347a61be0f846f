"""Command-line front end: ``freqjump <command> [options]``.

Every command writes one CSV (a ``#`` comment line echoing the version and
full configuration, then a header row) and prints a short summary.  Settings
come from built-in defaults, then an optional TOML file given with
``--config``, then command-line flags.

Exit codes: 0 success, 1 oracle mismatch, 2 invalid configuration.  Failures
also print one ``error: kind=<kind> message=<json string>`` line to stderr.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import FreqJumpError
from .experiments import ConfigError, ExperimentConfig, run, write_csv

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


def _error_line(kind: str, message: str) -> None:
    click.echo(f"error: kind={kind} message={json.dumps(message)}", err=True)


def _load_file(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return data


def _execute(command: str, config_path, **overrides) -> int:
    file_values = _load_file(config_path)
    if "command" in file_values and file_values["command"] != command:
        raise ConfigError(f"config file is for {file_values['command']!r}, not {command!r}")
    cfg = ExperimentConfig.build(command, file_values, overrides)
    result = run(cfg)
    with open(cfg.output, "w", newline="") as fh:
        write_csv(cfg, result, fh)
    for line in result.summary:
        click.echo(line)
    click.echo(f"wrote {len(result.rows)} rows to {cfg.output}")
    return result.exit_code


def grid_options(f):
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="TOML file with settings."),
        click.option("--omega0", help="Frequencies: 'a,b,c', 'lin:start:stop:num' or 'log:start:stop:num'."),
        click.option("--delta", help="Detunings, same grid syntax."),
        click.option("--T", "T", help="Total protocol times, same grid syntax."),
        click.option("--n", "n", help="Numbers of jump cycles, same grid syntax."),
        click.option("--grid-size", type=int, help="Alpha scan points (>= 64)."),
        click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV output path."),
        click.option("--oracle/--no-oracle", default=None, help="Cross-check QFI values against the Fock model."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


@click.group()
@click.version_option(package_name="artifact", prog_name="freqjump")
def cli():
    """Frequency estimation by frequency jumps: figure data and validation sweeps."""


def _make_command(name: str, help_text: str, extra=()):
    def callback(**kwargs):
        code = _execute(name, kwargs.pop("config_path"), **kwargs)
        sys.exit(code)

    callback.__doc__ = help_text
    cmd = grid_options(callback)
    for opt in extra:
        cmd = opt(cmd)
    cli.command(name)(cmd)


_make_command("sweep-alpha", "QSNR as a function of the squeezing time fraction alpha.")
_make_command("optimize", "Optimal alpha and maximized QSNR, with the squeezing marker alpha_max.")
_make_command("compare-free", "Ratio gamma against free evolution at matched energy and time.")
_make_command("multi-jump", "Optimized QSNR for n jump cycles and the ratio rho_n to one jump.")
_make_command(
    "scaling",
    "Log-log slope of the maximized QSNR against T or delta.",
    extra=(
        click.option("--axis", type=click.Choice(["T", "delta"]), help="Swept quantity."),
        click.option("--values", help="Swept values (>= 8), same grid syntax."),
    ),
)
_make_command(
    "oracle-check",
    "Compare the Gaussian and Fock-space QFI on a parameter grid.",
    extra=(click.option("--alpha", help="Alpha grid, same grid syntax."),),
)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="freqjump", standalone_mode=False)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return code
    except click.exceptions.NoArgsIsHelpError as exc:
        click.echo(exc.ctx.get_help() if exc.ctx else str(exc))
        return 2
    except click.UsageError as exc:
        _error_line("usage", exc.format_message())
        return 2
    except ConfigError as exc:
        _error_line("config", str(exc))
        return 2
    except FreqJumpError as exc:
        _error_line("numerical", str(exc))
        return 1
    except click.exceptions.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
