#!/usr/bin/env python3
"""Wrapper so the figure can be drawn without installing the package."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))

from rabi_figures.fig2 import main

if __name__ == "__main__":
    sys.exit(main())
