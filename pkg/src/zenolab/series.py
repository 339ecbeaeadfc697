"""Uniformly sampled time series and their CSV form.

CSV layout is part of the external interface: header ``t,value`` for real
series or ``t,re,im`` for complex ones, 17 significant digits, ``.`` decimal
separator, LF line endings. Identical data serializes byte-identically.
"""

from __future__ import annotations

import io
import numpy as np
from dataclasses import dataclass

__all__ = ["TimeSeries", "read_csv"]

_FMT = "%.17g"


@dataclass(frozen=True)
class TimeSeries:
    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("values must be a non-empty 1D array")
        if not np.issubdtype(vals.dtype, np.complexfloating):
            vals = vals.astype(float)
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("non-finite values in time series")
        if not (self.dt > 0):
            raise ValueError("dt must be > 0")
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(len(self.values))

    @property
    def t_end(self):
        return self.t0 + self.dt * (len(self.values) - 1)

    @property
    def is_complex(self):
        return np.issubdtype(self.values.dtype, np.complexfloating)

    def integral(self) -> float | complex:
        """Trapezoid quadrature over the full window."""
        val = np.trapezoid(self.values, dx=self.dt)
        return complex(val) if self.is_complex else float(val)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        t = self.times
        if self.is_complex:
            buf.write("t,re,im\n")
            for ti, vi in zip(t, self.values):
                buf.write(f"{_FMT % ti},{_FMT % vi.real},{_FMT % vi.imag}\n")
        else:
            buf.write("t,value\n")
            for ti, vi in zip(t, self.values):
                buf.write(f"{_FMT % ti},{_FMT % vi}\n")
        return buf.getvalue()

    def map(self, fn) -> "TimeSeries":
        return TimeSeries(self.t0, self.dt, fn(np.asarray(self.values)))


def read_csv(text: str) -> TimeSeries:
    lines = text.strip().split("\n")
    header = lines[0].strip()
    rows = [[float(c) for c in ln.split(",")] for ln in lines[1:]]
    arr = np.asarray(rows)
    t = arr[:, 0]
    if len(t) < 2:
        raise ValueError("need at least two samples")
    dt = t[1] - t[0]
    if not np.allclose(np.diff(t), dt, rtol=1e-12, atol=1e-15 + 1e-12 * abs(dt)):
        raise ValueError("non-uniform sampling in CSV")
    if header == "t,re,im":
        return TimeSeries(t[0], dt, arr[:, 1] + 1j * arr[:, 2])
    if header == "t,value":
        return TimeSeries(t[0], dt, arr[:, 1])
    raise ValueError(f"unrecognized CSV header {header!r}")
