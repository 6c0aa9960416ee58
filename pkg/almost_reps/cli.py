"""Command-line interface for Almost Reps"""

import argparse
import sys
from pathlib import Path

from almost_reps import __version__
from almost_reps.runner import AlmostRepRunner
from almost_reps.utils.config import COMMANDS, RunConfig
from almost_reps.utils.console import Console
from almost_reps.utils.errors import AlmostRepError
from almost_reps.utils.report_writer import ReportWriter

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

DEFAULT_CONFIG = "config.json"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="almost_reps",
        description="Almost finite-dimensional representations: Følner scans, builds, audits and paradoxical pairs",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="Command (overrides the config file)")
    parser.add_argument("--config", help="Path to a JSON run configuration")
    parser.add_argument("--field", help="gfp:P or rational")
    parser.add_argument("--n-max", dest="n_max", type=int, help="Last exhaustion index")
    parser.add_argument("--K", dest="K", type=int, help="Displacement bound for paradoxical pairs")
    parser.add_argument("--seed", type=int, help="Seed for randomized suites")
    parser.add_argument("--output", help="JSON-lines report path (default stdout)")
    parser.add_argument("--quiet", action="store_true", help="Only print errors")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


class CLI:
    """Batch front end: one configured command per invocation"""

    def __init__(self, config, console):
        """
        Initialize CLI

        Args:
            config: RunConfig
            console: Console
        """
        self.config = config
        self.console = console
        self.runner = AlmostRepRunner(config, console)

    def process_command(self):
        """
        Run the configured command and write its records

        Returns:
            int exit status
        """
        records = self.runner.run()
        with ReportWriter(self.config.get("output", default=None)) as writer:
            for record in records:
                writer.write(record)
        failed = [r for r in records if not r["pass"]]
        if failed:
            self.console.error(f"{len(failed)} of {len(records)} records failed an asserted invariant")
            return EXIT_INVARIANT
        self.console.ok(f"{len(records)} records, all invariants passed")
        return EXIT_OK


def main(argv=None):
    """Application entry point"""
    args = build_parser().parse_args(argv)
    console = Console(quiet=args.quiet)
    overrides = {
        "command": args.command,
        "field": args.field,
        "n_max": args.n_max,
        "K": args.K,
        "seed": args.seed,
        "output": args.output,
    }
    try:
        config_path = args.config or (DEFAULT_CONFIG if Path(DEFAULT_CONFIG).exists() else None)
        config = RunConfig(config_path, overrides).validate()
        status = CLI(config, console).process_command()
    except (AlmostRepError, FileNotFoundError, ZeroDivisionError) as e:
        console.error(str(e))
        status = EXIT_INPUT
    except Exception as e:
        console.error(f"Unexpected failure: {type(e).__name__}: {e}")
        status = EXIT_INTERNAL
    return status


if __name__ == "__main__":
    sys.exit(main())
