"""Run reports and CSV/JSON emission for the command-line front end."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field

from .errors import UrlabError

CSV_COLUMNS = ["scenario", "quantity", "value", "bound", "gap", "status"]


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


@dataclass(frozen=True)
class Row:
    """One checked quantity: its value, the bound it was compared to, status."""

    quantity: str
    value: float
    bound: float
    status: str  # pass | fail | infinite

    def __post_init__(self):
        if self.status not in ("pass", "fail", "infinite"):
            raise UrlabError(f"invalid status {self.status!r}")

    @property
    def gap(self) -> float:
        if math.isinf(self.value) or math.isinf(self.bound):
            return math.inf
        return self.value - self.bound


def le_row(quantity: str, value: float, bound: float, *, atol: float = 0.0) -> Row:
    """Row that passes when value <= bound + atol; infinite values are reported."""
    if math.isinf(value):
        return Row(quantity, value, bound, "infinite")
    status = "pass" if value <= bound + atol else "fail"
    return Row(quantity, value, bound, status)


def ge_row(quantity: str, value: float, bound: float, *, atol: float = 0.0) -> Row:
    """Row that passes when value >= bound - atol."""
    if math.isinf(value):
        return Row(quantity, value, bound, "infinite")
    status = "pass" if value >= bound - atol else "fail"
    return Row(quantity, value, bound, status)


def eq_row(quantity: str, value: float, bound: float, *, atol: float) -> Row:
    """Row that passes when |value - bound| <= atol."""
    if math.isinf(value):
        return Row(quantity, value, bound, "infinite" if math.isinf(bound) else "fail")
    status = "pass" if abs(value - bound) <= atol else "fail"
    return Row(quantity, value, bound, status)


def flag_row(quantity: str, ok: bool, value: float = None, bound: float = 0.0) -> Row:  # type: ignore[assignment]
    """Row for a boolean property; value defaults to 1/0 for pass/fail."""
    if value is None:
        value = 1.0 if ok else 0.0
    if not math.isinf(value) and math.isnan(value):
        value = 0.0
    if math.isinf(value):
        return Row(quantity, value, bound, "infinite" if ok else "fail")
    return Row(quantity, value, bound, "pass" if ok else "fail")


@dataclass
class RunReport:
    scenario: str
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(r.status != "fail" for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "rows": [
                {
                    "quantity": r.quantity,
                    "value": _fmt(r.value),
                    "bound": _fmt(r.bound),
                    "gap": _fmt(r.gap),
                    "status": r.status,
                }
                for r in self.rows
            ],
            "metadata": self.metadata,
        }


def new_metadata(seed: int, dims, started: float) -> dict:
    from . import __version__

    return {
        "seed": seed,
        "dims": list(dims),
        "wall_time": time.time() - started,
        "version": __version__,
    }


def emit(report: RunReport, fmt: str, path: str) -> None:
    """Write a report as CSV (fixed column contract) or JSON.

    Infinite values serialize as the string "inf" in both formats.
    """
    if fmt == "csv":
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for r in report.rows:
                    writer.writerow(
                        [report.scenario, r.quantity, _fmt(r.value), _fmt(r.bound),
                         _fmt(r.gap), r.status]
                    )
        except OSError as exc:
            raise UrlabError(f"cannot write {path}: {exc}") from exc
    elif fmt == "json":
        try:
            with open(path, "w") as fh:
                json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise UrlabError(f"cannot write {path}: {exc}") from exc
    else:
        raise UrlabError(f"unknown format {fmt!r}")


def parse_report(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
