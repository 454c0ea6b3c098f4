import sys

from .commands import run_cli

sys.exit(run_cli())
