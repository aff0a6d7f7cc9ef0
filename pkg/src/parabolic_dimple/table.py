"""Column table with provenance metadata, serialized as CSV or JSON."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from . import __version__


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value  # enums
    return str(v)


def _parse(s: str) -> Any:
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


@dataclass
class SweepTable:
    """Rows of observables over a parameter grid.

    ``metadata`` is echoed as ``# key: value`` lines ahead of the CSV header;
    the body (header plus rows) depends only on the data.
    """

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row width does not match columns")

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def stamp(self, **extra) -> "SweepTable":
        self.metadata.setdefault("tool_version", __version__)
        self.metadata.setdefault("timestamp", datetime.now(timezone.utc).isoformat(timespec="seconds"))
        self.metadata.update(extra)
        return self

    def body_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    def to_csv(self) -> str:
        head = "".join(f"# {k}: {json.dumps(self.metadata[k], sort_keys=True, default=str)}\n"
                       for k in sorted(self.metadata))
        return head + self.body_csv()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        meta = {}
        lines = text.splitlines()
        i = 0
        while i < len(lines) and lines[i].startswith("# "):
            key, _, val = lines[i][2:].partition(": ")
            meta[key] = json.loads(val)
            i += 1
        reader = csv.reader(lines[i:])
        columns = next(reader)
        rows = [tuple(_parse(c) for c in row) for row in reader if row]
        return cls(columns, rows, meta)

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None
            if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
                return v.value
            return v

        rows = [{c: clean(v) for c, v in zip(self.columns, r)} for r in self.rows]
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2, sort_keys=False, default=str)

    def write(self, path: str, as_json: bool = False) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_json() if as_json else self.to_csv())
