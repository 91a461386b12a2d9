"""The sine-cosine eigenbasis and the elementary vector maps built on it.

Column ``j`` of the basis matrix ``Q_n`` is

* ``1/sqrt(n)`` times the all-ones vector for ``j = 0``,
* ``sqrt(2/n) * cos(2*pi*k*j/n)`` for ``1 <= j <= (n-1)//2``,
* ``1/sqrt(n)`` times the alternating vector for ``j = n/2`` (even ``n``),
* ``sqrt(2/n) * sin(2*pi*k*(n-j)/n)`` for the remaining columns.

The dense matrix is only materialised here, for oracle use; the fast
transforms never form it.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidOrderError, StructureError

STRUCTURE_TOL = 1e-12

Structure = Literal["general", "symmetric", "asymmetric"]


def scale_constants(n):
    """Column scale factors: ``1/sqrt(n)`` at 0 and n/2 (even n), else ``sqrt(2/n)``."""
    if n < 2:
        raise InvalidOrderError(f"order must be >= 2, got {n}")
    alpha = np.full(n, np.sqrt(2.0 / n))
    alpha[0] = 1.0 / np.sqrt(n)
    if n % 2 == 0:
        alpha[n // 2] = 1.0 / np.sqrt(n)
    return alpha


def cosine_profile(n, j):
    """``u^(j)``: entries ``cos(2*pi*k*j/n)``, k = 0..n-1."""
    return np.cos(2.0 * np.pi * np.arange(n) * j / n)


def sine_profile(n, j):
    """``v^(j)``: entries ``sin(2*pi*k*j/n)``, k = 0..n-1."""
    return np.sin(2.0 * np.pi * np.arange(n) * j / n)


@dataclass(frozen=True)
class BasisVectorSet:
    n: int
    columns: np.ndarray  # (n, n); column j is q^(j)

    @property
    def matrix(self):
        return self.columns

    def column(self, j):
        return self.columns[:, j]


def build_q_dense(n):
    """Materialise ``Q_n`` entry by entry from its piecewise definition."""
    if n < 2:
        raise InvalidOrderError(f"order must be >= 2, got {n}")
    alpha = scale_constants(n)
    k = np.arange(n)
    q = np.empty((n, n))
    for j in range(n):
        if j <= n // 2:
            q[:, j] = alpha[j] * np.cos(2.0 * np.pi * k * j / n)
        else:
            q[:, j] = alpha[j] * np.sin(2.0 * np.pi * k * (n - j) / n)
    q.setflags(write=False)
    return BasisVectorSet(n, q)


def _scale(x):
    return max(1.0, float(np.max(np.abs(x)))) if len(x) else 1.0


def is_symmetric(x, tol=STRUCTURE_TOL):
    """True when ``x[j] == x[n-j]`` for every j, up to ``tol`` relative to max|x|."""
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(x - reverse_tail(x)) <= tol * _scale(x)))


def is_asymmetric(x, tol=STRUCTURE_TOL):
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(x + reverse_tail(x)) <= tol * _scale(x)))


@dataclass(frozen=True)
class StructuredVector:
    """A real vector together with a verified symmetry flag."""

    entries: np.ndarray
    structure: Structure = "general"

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 1:
            raise StructureError("structured vectors must be one-dimensional")
        if self.structure == "symmetric" and not is_symmetric(entries):
            raise StructureError("vector is not symmetric")
        if self.structure == "asymmetric" and not is_asymmetric(entries):
            raise StructureError("vector is not asymmetric")
        if self.structure not in ("general", "symmetric", "asymmetric"):
            raise ValueError(f"unknown structure {self.structure!r}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __len__(self):
        return len(self.entries)


def _as_vector(x, min_len=2):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < min_len:
        raise InvalidOrderError(f"expected a vector of length >= {min_len}")
    return x


def reverse_tail(x):
    """Reverse every component except index 0: ``(x0, x[n-1], ..., x1)``."""
    x = np.asarray(x, dtype=float)
    return np.concatenate((x[:1], x[:0:-1]))


def symmetrize(x):
    """Twice the symmetric part of ``x``."""
    x = _as_vector(x)
    return StructuredVector(x + reverse_tail(x), "symmetric")


def antisymmetrize(x):
    """Twice the asymmetric part of ``x``."""
    x = _as_vector(x)
    return StructuredVector(x - reverse_tail(x), "asymmetric")


def even_part(x):
    x = _as_vector(x)
    if len(x) % 2:
        raise InvalidOrderError("even/odd decimation needs an even length")
    return x[0::2].copy()


def odd_part(x):
    x = _as_vector(x)
    if len(x) % 2:
        raise InvalidOrderError("even/odd decimation needs an even length")
    return x[1::2].copy()
