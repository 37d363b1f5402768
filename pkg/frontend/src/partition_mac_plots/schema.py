"""CSV loading against the documented partition-mac output schemas.

The plots never recompute rates or estimates; these loaders are the only
coupling to the simulator, via its published column sets.
"""

from __future__ import annotations

import csv

RATES_COLUMNS = ["q10", "q01", "p_star", "C", "C1", "D", "C2", "Cg", "Cg_threshold", "degenerate"]
SWEEP_COLUMNS = [
    "cell", "n", "t", "t_over_logn", "p", "epsilon", "q10", "q01", "mode",
    "strictness", "trials", "seed", "failures", "p_hat", "ci95_lo", "ci95_hi",
    "budget_exceeded",
]

_INT_FIELDS = {"cell", "n", "t", "trials", "seed", "failures", "budget_exceeded", "degenerate"}
_STR_FIELDS = {"mode", "strictness"}


class SchemaError(ValueError):
    """The input CSV does not match the documented schema."""


class EmptyInputError(ValueError):
    """The input CSV has a header but no data rows."""


def _load(path, required) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(f"{path}: missing required columns {missing}; expected {required}")
        rows = []
        for raw in reader:
            row = {}
            for key, value in raw.items():
                if key in _STR_FIELDS:
                    row[key] = value
                elif key in _INT_FIELDS:
                    row[key] = int(value)
                else:
                    row[key] = float(value)
            rows.append(row)
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return rows


def load_rates_csv(path) -> list[dict]:
    return _load(path, RATES_COLUMNS)


def load_sweep_csv(path) -> list[dict]:
    return _load(path, SWEEP_COLUMNS)
