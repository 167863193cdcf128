"""Shared plumbing for the phase-plot management commands."""
import logging

from django.core.management.base import BaseCommand, CommandError

from phaseplot.exceptions import JobConfigError, PhasePlotError

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
MATH_ERROR = 2

LOG_LEVELS = {0: logging.ERROR, 1: None, 2: logging.INFO, 3: logging.DEBUG}


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_complex(z: complex) -> str:
    return f"{z.real:.12g} {z.imag:.12g}"


class PhasePlotCommand(BaseCommand):
    """A command whose jobs are described by forms.

    Commands with several actions register one form per action in
    ``forms`` and implement ``run_<action>``; single-job commands set
    ``form_class`` and implement ``run``.
    """

    requires_system_checks = []
    form_class = None
    forms = {}

    def add_job_arguments(self, parser):
        parser.add_argument('--config', help='job file of key = value lines; flags override it')
        parser.add_argument('--threads', type=int, default=None,
                            help='worker threads (default PHASEPLOT_THREADS)')

    def add_action(self, subparsers, name: str, help_text: str):
        parser = subparsers.add_parser(name, help=help_text, description=help_text)
        self.add_job_arguments(parser)
        return parser

    def add_function_argument(self, parser, required: bool = False):
        parser.add_argument('-f', '--function', required=required, help='expression in z')

    def handle(self, *args, **options):
        level = LOG_LEVELS.get(options.get('verbosity', 1))
        if level is not None:
            logging.getLogger('phaseplot').setLevel(level)
        action = options.get('action')
        form_class = self.forms[action] if action else self.form_class
        runner = getattr(self, f"run_{action}") if action else self.run
        try:
            job = form_class.from_options(options, options.get('config'))
            runner(job.cleaned_data)
        except JobConfigError as exc:
            raise CommandError(exc.message, returncode=USAGE_ERROR) from exc
        except PhasePlotError as exc:
            logger.debug(f"{type(exc).__name__}: {exc.context}")
            raise CommandError(exc.message, returncode=MATH_ERROR) from exc
        except ValueError as exc:
            # covers pydantic validation of job values the form let through
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

    def emit(self, text: str):
        self.stdout.write(text, ending='' if text.endswith('\n') else '\n')

    def run(self, job: dict):
        raise NotImplementedError
