"""Spacetime traces and their line-oriented text format.

File layout::

    # optional metadata lines, ignored by readers
    S=<int> M=<int|na> steps=<int>
    v_1 v_2 ... v_2S          (time 0)
    ...                       (time steps)

Values are written in site order 1..2S as plain decimal integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class SpacetimeTrace:
    """Time-ordered chain configurations, row ``n`` at time ``n * dt``.

    ``events[n]`` labels the operation that produced row ``n`` (row 0 is
    ``"init"``).  ``M`` is ``None`` for two-valued Ising chains.
    """

    S: int
    rows: np.ndarray
    M: int | None = None
    dt: float = 1.0
    meta: dict = field(default_factory=dict)
    events: tuple[str, ...] = ()

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != 2 * self.S or rows.shape[0] < 1:
            raise ValidationError(f"trace rows must have shape (n >= 1, {2 * self.S})")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        events = tuple(self.events) or ("init",) + ("step",) * (rows.shape[0] - 1)
        if len(events) != rows.shape[0]:
            raise ValidationError("one event label per row required")
        object.__setattr__(self, "events", events)

    @property
    def steps(self) -> int:
        return self.rows.shape[0] - 1

    def header(self) -> str:
        m = "na" if self.M is None else str(self.M)
        return f"S={self.S} M={m} steps={self.steps}"

    def to_text(self, with_meta: bool = True) -> str:
        lines = []
        if with_meta:
            for key in sorted(self.meta):
                lines.append(f"# {key}={self.meta[key]}")
            if any(e not in ("init", "step") for e in self.events):
                lines.append("# events=" + ",".join(self.events))
        lines.append(self.header())
        lines.extend(" ".join(str(int(v)) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii")


def parse_trace(text: str) -> SpacetimeTrace:
    meta: dict[str, str] = {}
    events: tuple[str, ...] = ()
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                if key.strip() == "events":
                    events = tuple(value.split(","))
                else:
                    meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = _parse_header(line, lineno)
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ValidationError(f"line {lineno}: non-integer value") from None
    if header is None:
        raise ValidationError("missing trace header")
    S, M, steps = header
    if len(rows) != steps + 1:
        raise ValidationError(f"header says steps={steps} but found {len(rows)} rows")
    if any(len(r) != 2 * S for r in rows):
        raise ValidationError(f"every row needs {2 * S} values")
    return SpacetimeTrace(S=S, rows=np.array(rows), M=M, meta=meta, events=events)


def _parse_header(line: str, lineno: int) -> tuple[int, int | None, int]:
    fields = dict(tok.split("=", 1) for tok in line.split() if "=" in tok)
    try:
        S = int(fields["S"])
        steps = int(fields["steps"])
        m = fields["M"]
        M = None if m == "na" else int(m)
    except (KeyError, ValueError):
        raise ValidationError(f"line {lineno}: bad header {line!r}") from None
    if S < 1 or steps < 0:
        raise ValidationError(f"line {lineno}: bad header {line!r}")
    return S, M, steps


def read_trace(path) -> SpacetimeTrace:
    return parse_trace(Path(path).read_text(encoding="ascii"))
