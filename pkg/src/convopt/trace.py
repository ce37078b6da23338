"""Per-iteration optimizer traces and their CSV form.

CSV layout: header ``step,x_1,...,x_n,f_value,aux``. The ``aux`` column holds
the algorithm's auxiliary numbers joined by ``;`` (derivative estimates,
probe radius, ...). Floats are written with ``repr`` so a file read back
reproduces the in-memory trace exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np


@dataclass(frozen=True)
class TraceRow:
    step: int
    x: tuple
    f_value: float
    aux: tuple = ()


@dataclass
class Trace:
    iterates: list = field(default_factory=list)

    def append(self, step: int, x, f_value: float, aux=()):
        self.iterates.append(
            TraceRow(int(step), tuple(float(v) for v in np.atleast_1d(x)), float(f_value),
                     tuple(float(a) for a in aux))
        )

    def __len__(self):
        return len(self.iterates)

    @property
    def dim(self) -> int:
        return len(self.iterates[0].x)

    @property
    def final_x(self) -> np.ndarray:
        return np.array(self.iterates[-1].x)

    @property
    def points(self) -> np.ndarray:
        return np.array([r.x for r in self.iterates])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n = self.dim if self.iterates else 1
        writer.writerow(["step", *(f"x_{k + 1}" for k in range(n)), "f_value", "aux"])
        for r in self.iterates:
            writer.writerow([r.step, *map(repr, r.x), repr(r.f_value), ";".join(map(repr, r.aux))])
        return buf.getvalue()

    def write_csv(self, path: Union[str, Path]):
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "Trace":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        n = len(header) - 3
        trace = cls()
        for row in reader:
            aux = tuple(float(a) for a in row[-1].split(";")) if row[-1] else ()
            trace.iterates.append(
                TraceRow(int(row[0]), tuple(float(v) for v in row[1:1 + n]), float(row[1 + n]), aux)
            )
        return trace

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "Trace":
        return cls.from_csv(Path(path).read_text())
