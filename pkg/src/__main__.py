"""
Entry point for running the application as a module.

Usage:
    python -m src COMMAND [options]
"""

import sys

from src.app import main

if __name__ == "__main__":
    sys.exit(main())
