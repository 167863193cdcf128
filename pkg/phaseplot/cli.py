"""Command-line entry point: ``python -m phaseplot <command> ...``.

Exit codes: 0 on success, 1 for usage errors, 2 for mathematical or
domain errors. Messages go to stderr, results to stdout.
"""
import os
import re
import sys
from typing import List, Optional

import django
from django.core.management import load_command_class
from django.core.management.base import CommandError

COMMANDS = ('render', 'analyze', 'flow', 'boundary', 'demo')

USAGE = f"usage: phasor {{{','.join(COMMANDS)}}} ... (see phasor <command> --help)\n"

# '-2,2,-2,2', '-0.5i', '-z' or '-z^2' are values, not options
_DASHED_VALUE = re.compile(r'^-(?:[\d.]|[zi]$|.*[,^*/()+ ])')


def attach_dashed_values(args: List[str]) -> List[str]:
    """Rewrite '--opt -value' as '--opt=-value' so argparse keeps the value."""
    out = []
    for arg in args:
        if out and out[-1].startswith('-') and '=' not in out[-1] \
                and not _DASHED_VALUE.match(out[-1]) and _DASHED_VALUE.match(arg):
            out[-1] = f"{out[-1]}={arg}"
        else:
            out.append(arg)
    return out


def run(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'phasor.settings')
    django.setup()
    if not argv or argv[0] in ('-h', '--help'):
        sys.stdout.write(USAGE)
        return 0 if argv else 1
    name, args = argv[0], attach_dashed_values(argv[1:])
    if name not in COMMANDS:
        sys.stderr.write(f"unknown command '{name}'\n{USAGE}")
        return 1
    command = load_command_class('phaseplot', name)
    # parser errors raise CommandError instead of exiting
    parser = command.create_parser('phasor', name)
    try:
        options = vars(parser.parse_args(args))
        positional = options.pop('args', ())
        command.execute(*positional, **options)
    except CommandError as exc:
        sys.stderr.write(f"{name}: {exc}\n")
        return exc.returncode
    except SystemExit as exc:
        return exc.code or 0
    return 0
