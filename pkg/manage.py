#!/usr/bin/env python
"""Phasor from the Django side: `python manage.py render|analyze|flow|boundary|demo ...`.

The same commands run through `python -m phaseplot`, which also maps
errors to exit codes 1 (usage) and 2 (mathematical).
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'phasor.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
