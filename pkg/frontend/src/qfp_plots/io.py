"""Reading the sweep/surface CSVs emitted by the qfp command-line tool.

Files start with one `#` comment line (tool version, command echo, seed),
then a header row, then data rows.  Failed sweep rows carry an exception
name in the trailing `error` column and empty value fields; they are
dropped at load time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

__all__ = ["SchemaError", "Table", "load_table"]


class SchemaError(ValueError):
    """Input CSV does not match the expected column contract."""


@dataclass(frozen=True)
class Table:
    comment: str
    columns: Dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self) -> int:
        first = next(iter(self.columns.values()))
        return first.size


def load_table(path: str, required: List[str]) -> Table:
    """Parse a qfp CSV and verify the required columns are present."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    if not lines or not lines[0].startswith("#"):
        raise SchemaError(f"{path}: missing the leading comment line")
    if len(lines) < 2:
        raise SchemaError(f"{path}: missing the header row")
    comment = lines[0]
    header = lines[1].split(",")
    for name in required:
        if name not in header:
            raise SchemaError(f"{path}: missing required column '{name}'")
    idx = {name: header.index(name) for name in header}
    has_error = "error" in idx

    kept: List[List[str]] = []
    for line in lines[2:]:
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaError(
                f"{path}: row has {len(cells)} cells, header has {len(header)}"
            )
        if has_error and cells[idx["error"]]:
            continue
        kept.append(cells)
    if not kept:
        raise SchemaError(f"{path}: no usable data rows")

    columns: Dict[str, np.ndarray] = {}
    for name in required:
        columns[name] = np.array([float(row[idx[name]]) for row in kept])
    return Table(comment=comment, columns=columns)
