"""Finite integer-supported probability mass functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Pmf:
    """Dense pmf on the integers ``offset, offset + 1, ..., offset + len(masses) - 1``.

    Interior zeros are allowed. Masses must be nonnegative and sum to one
    within ``NORMALIZATION_TOL``.
    """

    offset: int
    masses: np.ndarray = field(repr=False)

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float)
        if masses.ndim != 1 or masses.size == 0:
            raise ValueError("masses must be a non-empty 1-d sequence")
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise ValueError("masses must be finite and nonnegative")
        total = masses.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"masses sum to {total!r}, not 1")
        masses.setflags(write=False)
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "masses", masses)

    @classmethod
    def unit(cls, value: int) -> "Pmf":
        return cls(value, np.ones(1))

    @classmethod
    def from_dict(cls, mapping: Mapping[int, float]) -> "Pmf":
        lo, hi = min(mapping), max(mapping)
        masses = np.zeros(hi - lo + 1)
        for k, v in mapping.items():
            masses[k - lo] += v
        return cls(lo, masses)

    @classmethod
    def from_counts(cls, counts: np.ndarray, offset: int = 0) -> "Pmf":
        """Empirical pmf from an integer histogram; leading/trailing zeros are trimmed."""
        counts = np.asarray(counts)
        nz = np.flatnonzero(counts)
        if nz.size == 0:
            raise ValueError("empty histogram")
        lo, hi = nz[0], nz[-1]
        window = counts[lo:hi + 1]
        return cls(offset + int(lo), window / window.sum())

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.masses.size)

    @property
    def max_value(self) -> int:
        return self.offset + self.masses.size - 1

    def __getitem__(self, k: int) -> float:
        i = k - self.offset
        if 0 <= i < self.masses.size:
            return float(self.masses[i])
        return 0.0

    def __len__(self) -> int:
        return self.masses.size

    def items(self) -> Iterable[tuple[int, float]]:
        return zip(self.support.tolist(), self.masses.tolist())

    def to_dict(self) -> dict[int, float]:
        return dict(self.items())

    def shift(self, by: int) -> "Pmf":
        return Pmf(self.offset + by, self.masses)

    def reflect(self, about: int = 0) -> "Pmf":
        """Law of ``about - X``."""
        return Pmf(about - self.max_value, self.masses[::-1])

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.masses)

    def mean(self) -> float:
        return float(np.dot(self.support, self.masses))

    def trimmed(self, eps: float = 0.0) -> "Pmf":
        """Drop leading and trailing masses that are ``<= eps``."""
        nz = np.flatnonzero(self.masses > eps)
        lo, hi = nz[0], nz[-1]
        window = self.masses[lo:hi + 1]
        return Pmf(self.offset + int(lo), window / window.sum())

    def allclose(self, other: "Pmf", atol: float = 1e-12) -> bool:
        lo = min(self.offset, other.offset)
        hi = max(self.max_value, other.max_value)
        return bool(np.allclose(self.dense(lo, hi), other.dense(lo, hi), rtol=0, atol=atol))

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Masses on ``lo..hi`` (zero outside the support). Mass outside the window is dropped."""
        out = np.zeros(hi - lo + 1)
        a = max(lo, self.offset)
        b = min(hi, self.max_value)
        if a <= b:
            out[a - lo:b - lo + 1] = self.masses[a - self.offset:b - self.offset + 1]
        return out


def moments(pmf: Pmf, order: int) -> float:
    """Raw moment ``E[X**order]``."""
    if order < 1:
        raise ValueError("order must be a positive integer")
    return float(np.dot(pmf.support.astype(float) ** order, pmf.masses))
