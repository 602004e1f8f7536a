"""
Entry point for running anick as a module.
"""

import sys

from anick.cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
