"""Report data model with JSON and aligned-table renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class Report:
    verb: str
    subject: str
    base: str | None = None
    data: dict = field(default_factory=dict)
    status: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))

    def to_table(self) -> str:
        lines = [f"floerkit {self.verb}: {self.subject}"]
        if self.base is not None:
            lines.append(f"gradings relative to generator {self.base}")
        for key, value in self.data.items():
            if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
                lines.append(f"{key}:")
                lines.extend("  " + row for row in table(value))
            else:
                lines.append(f"{key}: {_fmt(value)}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_table()


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


def table(rows: list[dict]) -> list[str]:
    """Left-aligned columns, numbers right-aligned; column order from first appearance."""
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    cells = [[_fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    numeric = [all(isinstance(r.get(c), int) and not isinstance(r.get(c), bool) for r in rows)
               for c in cols]

    def line(vals):
        out = [v.rjust(w) if num else v.ljust(w) for v, w, num in zip(vals, widths, numeric)]
        return "  ".join(out).rstrip()

    return [line(cols), line(["-" * w for w in widths])] + [line(r) for r in cells]
