"""
`python -m rioneps <subcommand> ...`

run() dispatches to the management commands and returns the exit code instead
of exiting, so it can be driven from tests and other Python code.
"""
import logging
import os
import sys

import django
from django.core.management import load_command_class
from django.core.management.base import CommandError

logger = logging.getLogger('rioneps')

SUBCOMMANDS = {
    'detect': 'detection',
    'stream': 'detection',
    'synth': 'synth',
    'calibrate': 'calibration',
}

USAGE = (
    "usage: rioneps {detect,stream,synth,calibrate} [options]\n"
    "       rioneps <subcommand> --help for the options of one subcommand"
)


def run(argv=None, stdin=None, stdout=None, stderr=None):
    """Run one subcommand; returns 0 on success, 1 on usage errors, 2 on data errors."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    if not argv or argv[0] not in SUBCOMMANDS:
        if argv and argv[0] in ('-h', '--help'):
            stdout.write(USAGE + '\n')
            return 0
        unknown = f"unknown subcommand {argv[0]!r}\n" if argv else ''
        stderr.write(f"{unknown}{USAGE}\n")
        return 1

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'rioneps.settings')
    django.setup()

    name = argv[0]
    command = load_command_class(SUBCOMMANDS[name], name)
    parser = command.create_parser('rioneps', name)
    try:
        options = parser.parse_args(argv[1:])
        cmd_options = vars(options)
        args = cmd_options.pop('args', ())
        command.execute(*args, stdin=stdin, stdout=stdout, stderr=stderr, **cmd_options)
    except CommandError as e:
        stderr.write(f"rioneps {name}: error: {e}\n")
        return e.returncode
    except SystemExit as e:
        # argparse exits itself for --help
        return e.code if isinstance(e.code, int) else 1
    return 0
