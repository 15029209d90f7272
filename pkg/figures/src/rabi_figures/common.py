"""Shared CSV schema handling for the figure scripts."""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class SchemaError(Exception):
    """A CSV input exists but does not match its documented schema."""


@dataclass
class FigureSpec:
    """Inputs and layout metadata for one figure."""

    inputs: dict[str, Path]
    output: Path
    title: str = ""
    labels: dict[str, str] = field(default_factory=dict)

    def check_inputs(self) -> None:
        for name, path in self.inputs.items():
            if not path.exists():
                raise FileNotFoundError(f"{name} input missing: {path}")


def load_columns(path: Path, required: tuple[str, ...] = ()) -> dict[str, np.ndarray]:
    """Read a CSV into named float columns, validating the schema.

    Raises SchemaError when a required column is absent or when any data
    row has a different field count than the header (ragged file).
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing required column {col!r} "
                              f"(has {header})")
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i + 2} has {len(row)} fields, "
                              f"header has {len(header)}")
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        raw = [row[j] for row in rows]
        try:
            out[name] = np.array(raw, dtype=float)
        except ValueError:
            # tag columns (e.g. the spectrum CSV's solver label) stay strings
            out[name] = np.array(raw, dtype=object)
    return out


def solver_columns(cols: dict[str, np.ndarray], prefix: str) -> dict[str, np.ndarray]:
    """Extract per-solver series such as rho00_exact by column prefix."""
    out = {name[len(prefix):]: vals for name, vals in cols.items()
           if name.startswith(prefix)}
    if not out:
        raise SchemaError(f"no columns with prefix {prefix!r} "
                          f"(has {sorted(cols)})")
    return out


def group_spectrum(cols: dict[str, np.ndarray]) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Split the long-format spectrum CSV into per-solver (freq, amp) pairs."""
    for col in ("angular_frequency", "amplitude", "solver"):
        if col not in cols:
            raise SchemaError(f"spectrum CSV missing column {col!r}")
    out = {}
    tags = cols["solver"]
    for tag in dict.fromkeys(tags):
        mask = tags == tag
        out[str(tag)] = (cols["angular_frequency"][mask].astype(float),
                         cols["amplitude"][mask].astype(float))
    return out


def load_metadata(path: Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


SOLVER_STYLE = {
    "exact": dict(color="k", lw=1.0, label="exact"),
    "series": dict(color="tab:orange", lw=1.0, ls="--", label="series"),
    "single": dict(color="tab:blue", lw=1.0, ls="-.", label="single term"),
}


def style_for(tag: str) -> dict:
    return dict(SOLVER_STYLE.get(tag, dict(lw=1.0, label=tag)))
