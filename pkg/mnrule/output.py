"""Command output: records tagged with the method that produced them, rendered as text, CSV or JSON.

JSON layout (one object per invocation)::

    {
      "command": "winprob",
      "inputs": {"m": 5, "n": 4, "p": 0.75, "q": 0.6, ...},
      "records": [
        {"quantity": "p_a", "method": "dp", "value": 0.5012..., "metadata": {}},
        {"quantity": "p_a", "method": "series", "value": 0.5012...,
         "metadata": {"epsilon": 1e-12, "tail_bound": 8.1e-13, "truncation_round": 61}}
      ],
      "notes": []
    }

Field names above are a stable interface. JSON always carries full precision, and
NaN or infinite values are written as null.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import IO, Any, Dict, Iterable, List, Sequence

from mnrule.balance import SweepRow
from mnrule.ui import generate_line

SWEEP_HEADER = ("q", "p_a", "p_b", "er", "q_a_seq", "er_seq")
METHODS = ("dp", "series", "closed-form", "mc")


class OutputFormat(Enum):
    HUMAN = "human"
    CSV = "csv"
    JSON = "json"


@dataclass
class Record:
    quantity: str
    method: str
    value: float
    metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class OutputPayload:
    command: str
    inputs: Dict[str, Any]
    records: List[Record] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, quantity: str, method: str, value: float, **metadata) -> Record:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        record = Record(quantity, method, value, metadata)
        self.records.append(record)
        return record

    def values(self, quantity: str) -> Dict[str, float]:
        return {r.method: r.value for r in self.records if r.quantity == quantity}

    def render(self, output_format: OutputFormat, full_precision: bool = False) -> str:
        if output_format is OutputFormat.JSON:
            return json.dumps(_json_safe(self._as_json()), ensure_ascii=False, allow_nan=False) + "\n"
        if output_format is OutputFormat.CSV:
            return self._as_csv(full_precision)
        return self._as_text(full_precision)

    def _as_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "records": [asdict(r) for r in self.records],
            "notes": self.notes,
        }

    def _metadata_keys(self) -> List[str]:
        keys = []
        for record in self.records:
            keys.extend(k for k in record.metadata if k not in keys)
        return keys

    def _as_csv(self, full_precision: bool) -> str:
        buffer = io.StringIO()
        input_keys = list(self.inputs)
        metadata_keys = self._metadata_keys()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(input_keys + ["quantity", "method", "value"] + metadata_keys)
        for record in self.records:
            writer.writerow(
                [format_number(self.inputs[k], full_precision) for k in input_keys]
                + [record.quantity, record.method, format_number(record.value, full_precision)]
                + [format_number(record.metadata.get(k, ""), full_precision) for k in metadata_keys]
            )
        return buffer.getvalue()

    def _as_text(self, full_precision: bool) -> str:
        echo = ", ".join(f"{k}={format_number(v, full_precision)}" for k, v in self.inputs.items())
        text = f"{self.command}: {echo}\n" + generate_line("=", 60)
        for record in self.records:
            meta = "  ".join(f"{k}={format_number(v, full_precision)}" for k, v in record.metadata.items())
            value = format_number(record.value, full_precision)
            text += f"{record.quantity:<22} {record.method:<12} {value:<22} {meta}".rstrip() + "\n"
        for note in self.notes:
            text += f"{note}\n"
        return text


def _json_safe(value: Any) -> Any:
    """Replace NaN and infinities with None so the document stays valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def format_number(value: Any, full_precision: bool = False) -> str:
    """Six significant digits, or the shortest repr that round-trips."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if full_precision or math.isnan(value) or math.isinf(value):
        return repr(float(value))
    return f"{value:.6g}"


def write_sweep_csv(rows: Iterable[SweepRow], stream: IO[str]) -> int:
    """Write sweep rows at full precision; returns the number of data rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    count = 0
    for row in rows:
        writer.writerow(
            [repr(float(v)) for v in (row.q, row.p_a, row.p_b, row.er, row.q_a_sequential, row.er_sequential)]
        )
        count += 1
    return count


def read_sweep_csv(stream: IO[str]) -> List[SweepRow]:
    reader = csv.reader(stream)
    header = tuple(next(reader))
    if header != SWEEP_HEADER:
        raise ValueError(f"unexpected sweep header {header!r}")
    return [SweepRow(*(float(v) for v in line)) for line in reader if line]


def max_abs_difference(values: Sequence[float]) -> float:
    values = list(values)
    return max(values) - min(values) if values else 0.0
