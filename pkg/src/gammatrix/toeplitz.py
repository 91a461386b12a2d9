"""Symmetric Toeplitz matrices and their optimal gamma-matrix approximation.

The approximation ``G_n(T)`` minimises ``||T - G||_F`` over all gamma-matrices.
Its circulant row has the closed form ``c_j = ((n-j) t_j + j t_{n-j}) / n``
and its reverse-circulant row is a signed, weighted sum of the differences
``t_k - t_{n-k}``. Both are evaluated here in O(n) with prefix sums.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import transforms as tr
from .algebra import GammaMatrix, eigenvalues
from .dense import frobenius_projection, toeplitz_dense
from .errors import FormulaDiscrepancyError, InvalidOrderError, SingularMatrixError
from .spectral import build_q_dense

log = logging.getLogger(__name__)

SYMBOL_GRID = 4096


@dataclass(frozen=True, eq=False)
class SymToeplitz:
    """Symmetric Toeplitz matrix given by its first column ``t``."""

    t: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        if t.ndim != 1 or len(t) < 1:
            raise InvalidOrderError("Toeplitz first column must be a non-empty vector")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def n(self):
        return len(self.t)

    def dense(self):
        return toeplitz_dense(self.t)

    def matvec(self, x):
        return self.dense() @ np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class GeneratorSeq:
    """Finitely supported coefficients ``t_0..t_K`` of a real even symbol."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=float).ravel()
        if len(a) == 0 or not np.all(np.isfinite(a)):
            raise ValueError("generator needs at least one finite coefficient")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @classmethod
    def geometric(cls, ratio=0.5, terms=30):
        """``t_j = ratio^j`` for ``j = 0..terms``."""
        return cls(ratio ** np.arange(terms + 1))

    @property
    def K(self):
        return len(self.coeffs) - 1

    @property
    def abs_sum(self):
        return float(np.abs(self.coeffs).sum())

    def symbol(self, theta):
        """``f(theta) = t_0 + 2 sum_j t_j cos(j theta)``."""
        theta = np.asarray(theta, dtype=float)
        j = np.arange(1, len(self.coeffs))
        return self.coeffs[0] + 2.0 * np.cos(np.multiply.outer(theta, j)) @ self.coeffs[1:]

    def symbol_range(self, points=SYMBOL_GRID):
        f = self.symbol(2.0 * np.pi * np.arange(points) / points)
        return float(f.min()), float(f.max())


def toeplitz_from_generator(gen, n):
    if n < 1:
        raise InvalidOrderError(f"order must be >= 1, got {n}")
    if not isinstance(gen, GeneratorSeq):
        gen = GeneratorSeq(gen)
    t = np.zeros(n)
    k = min(n, len(gen.coeffs))
    t[:k] = gen.coeffs[:k]
    return SymToeplitz(t)


def _as_toeplitz(T):
    return T if isinstance(T, SymToeplitz) else SymToeplitz(T)


def circulant_row(t):
    """``c_0 = t_0`` and ``c_j = ((n-j) t_j + j t_{n-j}) / n``."""
    t = np.asarray(t, dtype=float)
    n = len(t)
    j = np.arange(1, n)
    return np.concatenate(([t[0]], ((n - j) * t[j] + j * t[n - j]) / n))


def _range_sum(prefix, lo, hi):
    """``sum_{k=lo}^{hi} w_k`` for arrays of upper limits, empty when hi < lo."""
    hi = np.maximum(hi + 1, lo)
    return prefix[hi] - prefix[lo]


def reverse_row(t, variant="derived"):
    """First row of the reverse-circulant part of the optimal approximation.

    With ``D_k = t_k - t_{n-k}`` and weights ``w_k = k D_k / n`` every entry
    is ``((4j - 2n)/n D_j + 4 (partial sums of w over one parity class)) / 2n``.

    ``variant="printed"`` starts both odd-index sums at ``k = 1`` for even n
    and odd j, as the closed form is usually quoted. ``"derived"`` starts
    them at ``k = 0``, which is what setting the gradient to zero gives and
    what the projection oracle confirms.
    """
    if variant not in ("derived", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    t = np.asarray(t, dtype=float)
    n = len(t)
    if n % 4 == 2:
        raise InvalidOrderError(f"closed form needs n odd or divisible by 4, got {n}")
    b = np.zeros(n)
    if n < 2:
        return b
    k = np.arange(n)
    d = t - t[(n - k) % n]
    w = k * d / n
    # po[p] = w_1 + w_3 + ... (p terms); pe[p] = w_2 + w_4 + ... (p terms)
    po = np.concatenate(([0.0], np.cumsum(w[1::2])))
    pe = np.concatenate(([0.0], np.cumsum(w[2::2])))

    def odd_sum(lo, hi):  # sum_{k=lo}^{hi} w_{2k+1}
        return _range_sum(po, lo, hi)

    def even_sum(hi):  # sum_{k=1}^{hi} w_{2k}
        return _range_sum(pe, 0, hi - 1)

    j = np.arange(1, n)
    lead = (4 * j - 2 * n) / n * d[j]
    jo = j % 2 == 1
    je = ~jo
    extra = np.zeros(n - 1)
    if n % 2 == 0:
        start = 1 if variant == "printed" else 0
        extra[jo] = odd_sum(start, (j[jo] - 3) // 2) + odd_sum(start, (n - j[jo] - 3) // 2)
        extra[je] = even_sum(j[je] // 2 - 1) + even_sum((n - j[je]) // 2 - 1)
    else:
        extra[jo] = odd_sum(0, (j[jo] - 3) // 2) + even_sum((n - j[jo]) // 2 - 1)
        extra[je] = even_sum(j[je] // 2 - 1) + odd_sum(0, (n - j[je] - 3) // 2)
    b[1:] = (lead + 4.0 * extra) / (2 * n)
    if n % 2 == 0:
        b[0] = 2.0 / n * even_sum(n // 2 - 1)
        b[n // 2] = 4.0 / n * even_sum(n // 4 - 1)
    else:
        b[0] = 2.0 / n * odd_sum(0, (n - 3) // 2)
    return b


def stationarity_residuals(b):
    """Residuals of the zero-sum identities the optimal reverse row must satisfy.

    Even n: ``(sum of odd-index b, b_0 + 2 sum_{k=1}^{n/4-1} b_{2k} + b_{n/2})``,
    the second being the even-index sum written with symmetry. Odd n: the
    single total ``b_0 + 2 sum_{j=1}^{(n-1)/2} b_j``.
    """
    b = np.asarray(b, dtype=float)
    n = len(b)
    if n % 2 == 0:
        return float(b[1::2].sum()), float(b[0::2].sum())
    return (float(b[0] + 2.0 * b[1:(n - 1) // 2 + 1].sum()),)


def frobenius_projection_oracle(T):
    """Projection of ``T`` onto the gamma-matrices, computed with dense orthonormal bases."""
    T = _as_toeplitz(T)
    if T.n > 128:
        raise InvalidOrderError("the dense projection oracle is limited to n <= 128")
    c, b = frobenius_projection(T.dense())
    return GammaMatrix._trusted(c, b)


def gamma_approx(T, *, variant="derived", check=True, tol=1e-8):
    """Optimal Frobenius-norm gamma-matrix approximation of a symmetric Toeplitz matrix.

    When ``check`` is set the zero-sum identities are verified; a violation
    above ``tol`` (relative to max|t|) raises
    :class:`FormulaDiscrepancyError` with the formula output and, for
    ``n <= 128``, the projection oracle's output attached.
    """
    T = _as_toeplitz(T)
    if T.n < 2:
        raise InvalidOrderError("approximation needs n >= 2")
    if T.n % 4 == 2:
        # the closed form treats b_{n/2} as an even-index entry, so 4 must divide n
        raise InvalidOrderError(
            f"closed form needs n odd or divisible by 4, got {T.n}; use frobenius_projection_oracle"
        )
    c = circulant_row(T.t)
    b = reverse_row(T.t, variant)
    if check:
        worst = max(abs(r) for r in stationarity_residuals(b))
        if worst > tol * max(1.0, float(np.abs(T.t).max())):
            oracle = None
            if T.n <= 128:
                og = frobenius_projection_oracle(T)
                oracle = (og.c.copy(), og.b.copy())
            raise FormulaDiscrepancyError(
                f"reverse row violates a zero-sum identity by {worst:.3e}",
                formula=(c, b),
                oracle=oracle,
            )
    return GammaMatrix(c, b)


@dataclass(frozen=True)
class ClusterReport:
    epsilon: float
    n: int
    outliers: int
    spectrum: np.ndarray

    def as_dict(self):
        return {
            "epsilon": self.epsilon,
            "n": self.n,
            "outliers": self.outliers,
            "spectrum": [float(v) for v in self.spectrum],
        }


def count_outliers(spectrum, epsilon):
    return int(np.sum(np.abs(np.asarray(spectrum) - 1.0) > epsilon))


def _spectral_function_apply(lam_fn, G, X):
    """``Q diag(lam_fn(lambda_G)) Q^T X`` for a column block ``X``."""
    n = G.n
    lam = eigenvalues(G).lambdas
    scale = lam_fn(lam)
    if tr.is_power_of_two(n) and n >= 4:
        z = tr.idsct(X)
        return tr.dsct(scale[:, None] * z)
    q = build_q_dense(n).matrix
    return q @ (scale[:, None] * (q.T @ X))


def preconditioned_spectrum(T, G, epsilon=0.1, *, threshold=None):
    """Sorted eigenvalues of ``G^{-1} T`` and the count outside ``[1 - eps, 1 + eps]``.

    For positive definite ``G`` the symmetric form ``G^{-1/2} T G^{-1/2}`` is
    formed with fast transforms applied column by column; otherwise the
    generalised problem is solved densely.
    """
    T = _as_toeplitz(T)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if T.n != G.n:
        raise InvalidOrderError(f"orders differ: {T.n} vs {G.n}")
    if T.n > 2048:
        raise InvalidOrderError("dense eigensolve limited to n <= 2048")
    lam = eigenvalues(G).lambdas
    thr = 1e-12 * float(np.abs(lam).max(initial=0.0)) if threshold is None else threshold
    bad = np.flatnonzero(np.abs(lam) <= thr)
    if len(bad):
        raise SingularMatrixError(f"preconditioner eigenvalue {bad[0]} is {lam[bad[0]]:.3e}", index=int(bad[0]))
    A = T.dense()
    if np.all(lam > 0):
        half = _spectral_function_apply(lambda v: 1.0 / np.sqrt(v), G, A)
        M = _spectral_function_apply(lambda v: 1.0 / np.sqrt(v), G, half.T)
        M = 0.5 * (M + M.T)
        spec = np.linalg.eigvalsh(M)
    else:
        log.info("preconditioner is not positive definite; solving the generalised problem densely")
        spec = np.sort(np.linalg.eigvals(np.linalg.solve(G.dense(), A)).real)
    return ClusterReport(float(epsilon), T.n, count_outliers(spec, epsilon), spec)


__all__ = [
    "ClusterReport",
    "GeneratorSeq",
    "SymToeplitz",
    "circulant_row",
    "count_outliers",
    "frobenius_projection_oracle",
    "gamma_approx",
    "preconditioned_spectrum",
    "reverse_row",
    "stationarity_residuals",
    "toeplitz_from_generator",
]
