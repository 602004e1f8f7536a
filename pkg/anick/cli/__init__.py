"""
Run configuration, logging setup and exit-code handling for the anick CLI.
"""

import contextlib
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from anick.bar_oracle import DEFAULT_CAP
from anick.errors import AnickError, CheckFailed, InputError
from anick.utils import load_config

logger = logging.getLogger(__name__)

# Results go to stdout through click.echo; everything else goes here
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass
class RunConfig:
    """Everything one invocation needs, after config file and flags are merged."""
    subcommand: str = ""
    presentation: Optional[str] = None
    bimodule: Optional[str] = None
    degree: Optional[int] = None
    max_degree: Optional[int] = None
    export: Optional[str] = None
    dot: Optional[str] = None
    oracle_cap: int = DEFAULT_CAP
    workers: int = 1
    memo: bool = True
    quiet: bool = False
    verbose: bool = False
    rank: int = 1
    window: int = 6

    @classmethod
    def from_sources(cls, config_path: Optional[str] = None, **flags) -> "RunConfig":
        """Defaults, then the YAML file, then every flag that was given."""
        settings: Dict[str, Any] = dict(load_config(config_path))
        known = {f.name for f in fields(cls)}
        for key, value in flags.items():
            if key not in known:
                raise InputError(f"Unknown run setting {key!r}")
            if value is not None:
                settings[key] = value
        config = cls(**settings)
        config.validate()
        return config

    def update(self, **flags) -> "RunConfig":
        """Apply subcommand flags; None leaves the configured value alone."""
        for key, value in flags.items():
            if value is not None:
                setattr(self, key, value)
        self.validate()
        return self

    def validate(self):
        for path in (self.presentation, self.bimodule):
            if path is not None and not Path(path).exists():
                raise InputError(f"File not found: {path}")
        for name in ("degree", "max_degree", "window"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InputError(f"{name} must be >= 0, got {value}")
        for name in ("oracle_cap", "workers", "rank"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def log_level(self) -> int:
        if self.verbose:
            return logging.DEBUG
        if self.quiet:
            return logging.WARNING
        return logging.INFO

    @property
    def build_options(self) -> Dict[str, Any]:
        return {"workers": self.workers, "memo": self.memo}


def configure_logging(config: RunConfig):
    """Install a RichHandler on the package logger, writing to stderr."""
    package_logger = logging.getLogger("anick")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
    handler = RichHandler(console=err_console, show_path=config.verbose, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    package_logger.addHandler(handler)
    package_logger.setLevel(config.log_level)
    package_logger.propagate = False


def progress_bar(config: RunConfig):
    """A rich progress display on stderr, or a null context when quiet."""
    if config.quiet:
        return contextlib.nullcontext(None)
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=err_console,
        transient=True,
    )


def report_failure(message: str):
    err_console.print(f"❌ {message}", markup=False, highlight=False)


class AnickGroup(click.Group):
    """Click group that turns toolkit errors into exit codes 1 and 2."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except InputError as e:
            report_failure(str(e))
            ctx.exit(EXIT_INPUT_ERROR)
        except CheckFailed as e:
            report_failure(f"{type(e).__name__}: {e}")
            ctx.exit(EXIT_CHECK_FAILED)
        except AnickError as e:
            report_failure(str(e))
            ctx.exit(EXIT_CHECK_FAILED)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatch one command line and return its exit code."""
    from anick.main import main

    args: List[str] = list(argv) if argv is not None else sys.argv[1:]
    try:
        result = main.main(args=args, prog_name="anick", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return EXIT_INPUT_ERROR
    except click.Abort:
        report_failure("Aborted")
        return EXIT_CHECK_FAILED
    return result if isinstance(result, int) else EXIT_OK
