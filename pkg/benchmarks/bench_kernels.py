#!/usr/bin/env python3
"""Entry point for the kernel benchmark; see voronoi_lab.bench."""

import sys

from voronoi_lab.bench import main

if __name__ == "__main__":
    sys.exit(main())
