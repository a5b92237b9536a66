"""Streaming diagonal Fisher estimation and displacement diagnostics.

Inputs are plain per-sample gradient vectors and parameter vectors; no
gradients are computed here.  Every input value is widened to 64-bit
before squaring and all accumulation happens in 64-bit, elementwise, so
chunked and single-pass runs produce identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyStream, LengthMismatch

ArrayLike = Iterable


@dataclass
class FisherDiag:
    values: np.ndarray  # float64, length d
    n_samples: int

    @property
    def d(self) -> int:
        return int(self.values.size)

    @property
    def trace(self) -> float:
        return float(np.sum(self.values))

    @property
    def trace_over_d(self) -> float:
        return self.trace / self.d


class FisherAccumulator:
    """Mean of elementwise squared gradients, built sample by sample."""

    def __init__(self, d: int):
        if d < 1:
            raise LengthMismatch("dimension must be >= 1")
        self.d = d
        self._acc = np.zeros(d, dtype=np.float64)
        self._n = 0

    def add(self, gradient: np.ndarray) -> None:
        g = np.asarray(gradient)
        if g.size != self.d:
            raise LengthMismatch(f"gradient of length {g.size}, expected {self.d}")
        g64 = g.astype(np.float64, copy=False)
        self._acc += np.square(g64)
        self._n += 1

    def add_chunked(self, chunks: Iterable[np.ndarray]) -> None:
        """One sample whose values arrive in consecutive chunks."""
        offset = 0
        for chunk in chunks:
            c = np.asarray(chunk)
            end = offset + c.size
            if end > self.d:
                raise LengthMismatch(f"chunked sample exceeds dimension {self.d}")
            self._acc[offset:end] += np.square(c.astype(np.float64, copy=False))
            offset = end
        if offset != self.d:
            raise LengthMismatch(f"chunked sample covered {offset} of {self.d} values")
        self._n += 1

    def finish(self) -> FisherDiag:
        if self._n == 0:
            raise EmptyStream("no gradient samples accumulated")
        return FisherDiag(values=self._acc / self._n, n_samples=self._n)


def accumulate_fisher(gradients: Iterable[np.ndarray], d: int) -> FisherDiag:
    acc = FisherAccumulator(d)
    for g in gradients:
        acc.add(g)
    return acc.finish()


@dataclass
class DisplacementReport:
    raw_sq: float
    q_f: float
    r: float | None
    d: int
    trace: float

    @property
    def trace_over_d(self) -> float:
        return self.trace / self.d

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "raw_sq": self.raw_sq,
            "q_f": self.q_f,
            "r": self.r,
            "fisher_trace": self.trace,
            "fisher_trace_over_d": self.trace_over_d,
        }


def _as_chunks(source, chunk_size: int) -> Iterator[np.ndarray]:
    if isinstance(source, np.ndarray):
        for start in range(0, source.size, chunk_size):
            yield source[start : start + chunk_size]
    else:
        yield from source


def displacement_report(
    theta_star,
    theta_d,
    fisher: FisherDiag,
    chunk_size: int = 1 << 20,
) -> DisplacementReport:
    """Single fused pass over aligned chunks of both parameter vectors.

    raw_sq = sum((theta_d - theta_star)^2)
    q_f    = sum(fisher * (theta_d - theta_star)^2)
    r      = (q_f / raw_sq) / (trace / d), undefined when raw_sq == 0.
    """
    star_chunks = _as_chunks(theta_star, chunk_size)
    d_chunks = _as_chunks(theta_d, chunk_size)
    raw_sq = 0.0
    q_f = 0.0
    offset = 0
    while True:
        a = next(star_chunks, None)
        b = next(d_chunks, None)
        if a is None and b is None:
            break
        if a is None or b is None or np.asarray(a).size != np.asarray(b).size:
            raise LengthMismatch("parameter streams have different lengths")
        a64 = np.asarray(a).astype(np.float64, copy=False)
        b64 = np.asarray(b).astype(np.float64, copy=False)
        end = offset + a64.size
        if end > fisher.d:
            raise LengthMismatch(f"parameter streams exceed Fisher dimension {fisher.d}")
        delta_sq = np.square(b64 - a64)
        raw_sq += float(np.sum(delta_sq))
        q_f += float(np.sum(fisher.values[offset:end] * delta_sq))
        offset = end
    if offset != fisher.d:
        raise LengthMismatch(f"parameter streams covered {offset} of {fisher.d} values")
    if raw_sq > 0.0:
        r: float | None = (q_f / raw_sq) / fisher.trace_over_d
    else:
        r = None
    return DisplacementReport(raw_sq=raw_sq, q_f=q_f, r=r, d=fisher.d, trace=fisher.trace)
