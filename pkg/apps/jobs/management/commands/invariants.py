import logging
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import EngineError
from apps.jobs.models import OutputFormat, Subcommand
from apps.jobs.pipelines import load_job, run
from apps.jobs.renderers import render


logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = (
        "Seiberg-Witten basic classes, Donaldson series and their consequences "
        "for a surface described by a JSON job document."
    )

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        raise_error = parser.error

        def error(message):
            # argparse exits with 2, which is the truncation code here.
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(1, f"{parser.prog}: error: {message}\n")
            raise_error(message)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        parser.add_argument("subcommand", choices=Subcommand.values)
        parser.add_argument("--config", required=True, help="Path to the JSON job document.")
        parser.add_argument(
            "--format",
            choices=OutputFormat.values,
            default=getattr(settings, "INVARIANTS_DEFAULT_FORMAT", OutputFormat.TABLE.value),
        )
        parser.add_argument(
            "--check",
            action="store_true",
            help="Also run the cross-representation oracles and report PASS/FAIL.",
        )
        parser.add_argument(
            "--decimal",
            type=int,
            default=None,
            metavar="N",
            help="Add approximations to N places, marked with '~'.",
        )

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        places = options["decimal"]
        if places is not None and places < 0:
            raise CommandError("--decimal needs a non-negative number of places.", returncode=1)

        try:
            job = load_job(options["config"])
            result = run(subcommand, job, check=options["check"])
        except EngineError as exc:
            logger.info("%s failed with %s (exit %s)", subcommand, exc.code, exc.exit_code)
            raise CommandError(f"{exc.code}: {exc}", returncode=exc.exit_code)
        except Exception as exc:
            logger.exception("Unexpected error in %s", subcommand)
            raise CommandError(f"internal error: {exc}", returncode=3)

        self.stdout.write(render(result, options["format"], places), ending="")

        failed = result.failed_checks
        if failed:
            names = ", ".join(check.name for check in failed)
            raise CommandError(f"check_failed: {names}", returncode=3)
        logger.info("%s finished with %s rows", subcommand, len(result.rows))
