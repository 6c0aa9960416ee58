#!/usr/bin/env python3
"""
Almost Reps - Entry Point
Builds and audits almost finite-dimensional representations of algebras
"""

import sys

from almost_reps.cli import main

if __name__ == "__main__":
    sys.exit(main())
