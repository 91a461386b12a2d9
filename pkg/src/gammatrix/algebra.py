"""Gamma-matrices: sums of a symmetric circulant and a constrained reverse circulant.

A :class:`GammaMatrix` is stored as the first rows ``(c, b)`` of its two
parts. Every such matrix is diagonalised by ``Q_n``, so products, inverses
and matrix-vector products reduce to a few fast sine-cosine transforms.
"""

from dataclasses import dataclass, field

import numpy as np

from . import transforms as tr
from .dense import circ, rcirc
from .errors import (
    ConstraintError,
    DimensionMismatchError,
    InvalidOrderError,
    NotAGammaMatrixError,
    SingularMatrixError,
    StructureError,
)
from .spectral import STRUCTURE_TOL, cosine_profile, is_symmetric, reverse_tail, scale_constants


def _scale(*arrays):
    return max([1.0] + [float(np.abs(a).max()) for a in arrays if len(a)])


def _constraint_vectors(n):
    vecs = [np.ones(n)]
    if n % 2 == 0:
        vecs.append((-1.0) ** np.arange(n))
    return vecs


def _project_constraints(b):
    for v in _constraint_vectors(len(b)):
        b = b - (b @ v) / len(b) * v
    return b


@dataclass(frozen=True, eq=False)
class GammaSpectrum:
    """Eigenvalues of a gamma-matrix in ``Q_n`` column order."""

    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float)
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @property
    def n(self):
        return len(self.lambdas)

    def parts(self):
        """``(lambda_C, lambda_B)``: symmetric and asymmetric parts."""
        return decompose_spectrum(self.lambdas)

    def __array__(self, dtype=None, copy=None):
        return self.lambdas if dtype is None else self.lambdas.astype(dtype)

    def __len__(self):
        return len(self.lambdas)


@dataclass(frozen=True, eq=False)
class GammaMatrix:
    """Immutable ``circ(c) + rcirc(b)`` with validated components.

    ``c`` must be symmetric; ``b`` must be symmetric with zero sum and, for
    even n, zero alternating sum. Fast operations need ``n = 2^r >= 4``;
    other orders are accepted so the dense reference paths can use the
    same type.
    """

    c: np.ndarray
    b: np.ndarray
    _spectrum: object = field(default=None, init=False, repr=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        b = np.array(self.b, dtype=float)
        if c.ndim != 1 or b.ndim != 1:
            raise DimensionMismatchError("components must be vectors")
        if len(c) != len(b):
            raise DimensionMismatchError(f"component lengths differ: {len(c)} vs {len(b)}")
        if len(c) < 2:
            raise InvalidOrderError(f"order must be >= 2, got {len(c)}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(b))):
            raise StructureError("components must be finite")
        if not is_symmetric(c):
            raise StructureError("circulant row c is not symmetric")
        if not is_symmetric(b):
            raise StructureError("reverse-circulant row b is not symmetric")
        tol = STRUCTURE_TOL * len(b) * _scale(b)
        if abs(b.sum()) > tol:
            raise ConstraintError(f"sum of b is {b.sum():.3e}, expected 0")
        if len(b) % 2 == 0 and abs(b @ _constraint_vectors(len(b))[1]) > tol:
            raise ConstraintError("alternating sum of b is not 0")
        c.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)

    @classmethod
    def _trusted(cls, c, b):
        """Build from internally computed rows, cleaning rounding noise first."""
        c = np.asarray(c, dtype=float)
        b = np.asarray(b, dtype=float)
        c = 0.5 * (c + reverse_tail(c))
        b = _project_constraints(0.5 * (b + reverse_tail(b)))
        return cls(c, b)

    @property
    def n(self):
        return len(self.c)

    def dense(self):
        return circ(self.c) + rcirc(self.b)

    def spectrum(self, plan=None, counter=None):
        return eigenvalues(self, plan, counter)

    def __add__(self, other):
        return add(self, other) if isinstance(other, GammaMatrix) else NotImplemented

    def __sub__(self, other):
        return add(self, scale(other, -1.0)) if isinstance(other, GammaMatrix) else NotImplemented

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, a):
        if isinstance(a, (int, float, np.floating, np.integer)):
            return scale(self, a)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, GammaMatrix):
            return matmul(self, other)
        return matvec(self, other)

    def __repr__(self):
        return f"GammaMatrix(n={self.n})"


def from_components(c, b):
    return GammaMatrix(c, b)


def identity(n):
    c = np.zeros(n)
    c[0] = 1.0
    return GammaMatrix(c, np.zeros(n))


def decompose_spectrum(lam):
    """Split eigenvalues into the symmetric (circulant) and asymmetric (reverse) parts."""
    lam = np.asarray(lam, dtype=float)
    mirrored = reverse_tail(lam)
    return 0.5 * (lam + mirrored), 0.5 * (lam - mirrored)


def _component_spectra(gm, plan, counter, backend):
    """``(d_C, d_B)``: cosine coefficients of c and b, indices 0..n/2."""
    n = gm.n
    if tr.is_power_of_two(n) and n >= 4:
        d = tr.cs(np.column_stack((gm.c, gm.b)), plan, check=False, backend=backend)
        if counter is not None:
            a, m = tr.predicted_counts_cs(n)
            counter.record("cs", 2 * a, 2 * m)
        return d[:, 0], d[:, 1]
    # general order: direct dot products with the cosine profiles
    u = np.array([cosine_profile(n, j) for j in range(n // 2 + 1)])
    return u @ gm.c, u @ gm.b


def _assemble_spectrum(d_c, d_b, n):
    m = n // 2
    lam = np.empty(n)
    lam[: m + 1] = d_c + d_b
    lam[0] = d_c[0]
    if n % 2 == 0:
        lam[m] = d_c[m]
    # j > n/2 mirrors index n-j with the reverse part flipped in sign
    j = np.arange(m + 1, n)
    lam[j] = d_c[n - j] - d_b[n - j]
    return lam


def eigenvalues(gm, plan=None, counter=None, *, backend=None):
    """Spectrum from two cosine transforms (of c and of b). Cached on the matrix."""
    if counter is None and backend is None and gm._spectrum is not None:
        return gm._spectrum
    d_c, d_b = _component_spectra(gm, plan, counter, backend)
    spec = GammaSpectrum(_assemble_spectrum(d_c, d_b, gm.n))
    if gm._spectrum is None:
        object.__setattr__(gm, "_spectrum", spec)
    return spec


def _check_vector(gm, x):
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[0] != gm.n:
        raise DimensionMismatchError(f"expected leading dimension {gm.n}, got shape {x.shape}")
    return x


def _scale_rows(lam, z):
    return lam * z if z.ndim == 1 else lam[:, None] * z


def matvec(gm, x, plan=None, counter=None, *, backend=None):
    """``G x`` as ``Q_n (Lambda (Q_n^T x))``."""
    x = _check_vector(gm, x)
    tr.check_order(gm.n)
    lam = eigenvalues(gm, plan, counter, backend=backend).lambdas
    z = tr.idsct(x, plan, counter, backend=backend)
    if counter is not None:
        counter.record("diag", 0, z.size)
    return tr.dsct(_scale_rows(lam, z), plan, counter, backend=backend)


def _rows_from_spectrum_parts(lam_c, lam_b, plan, counter, backend):
    """First rows of the circulant and reverse parts with the given spectra."""
    n = len(lam_c)
    m = n // 2
    alpha = scale_constants(n)
    s = np.zeros((n, 2))
    s[: m + 1, 0] = alpha[: m + 1] * lam_c[: m + 1]
    s[: m + 1, 1] = alpha[: m + 1] * lam_b[: m + 1]
    if counter is not None:
        counter.record("scale", 0, 2 * (m + 1))
    rows = tr.dsct_cosine(s, plan, counter, backend=backend)
    return rows[:, 0], rows[:, 1]


def from_spectrum(lam, plan=None, *, backend=None):
    """The unique gamma-matrix with the given eigenvalues."""
    lam = np.asarray(lam, dtype=float)
    tr.check_order(len(lam))
    lam_c, lam_b = decompose_spectrum(lam)
    c, b = _rows_from_spectrum_parts(lam_c, lam_b, plan, None, backend)
    return GammaMatrix._trusted(c, b)


def matmul(g1, g2, plan=None, counter=None, *, backend=None):
    """Product of two gamma-matrices, returned in component form.

    Four cosine transforms give the circulant and reverse spectra of both
    factors. The symmetric part of the product spectrum is
    ``lC1 lC2 + lB1 lB2`` and the asymmetric part ``lC1 lB2 + lB1 lC2``;
    each is mapped back to a first row by one cosine-only forward transform.
    """
    if g1.n != g2.n:
        raise DimensionMismatchError(f"orders differ: {g1.n} vs {g2.n}")
    n = tr.check_order(g1.n)
    block = np.column_stack((g1.c, g1.b, g2.c, g2.b))
    d = tr.cs(block, plan, check=False, backend=backend)
    if counter is not None:
        a, m = tr.predicted_counts_cs(n)
        counter.record("cs", 4 * a, 4 * m)
    c1, b1, c2, b2 = d.T
    # the reverse-part spectra vanish at 0 and n/2; enforce it exactly
    for v in (b1, b2):
        v[0] = 0.0
        v[-1] = 0.0
    lam_c = np.zeros(n)
    lam_b = np.zeros(n)
    lam_c[: n // 2 + 1] = c1 * c2 + b1 * b2
    lam_b[: n // 2 + 1] = c1 * b2 + b1 * c2
    if counter is not None:
        counter.record("products", 2 * (n // 2 + 1), 4 * (n // 2 + 1))
    c, b = _rows_from_spectrum_parts(lam_c, lam_b, plan, counter, backend)
    return GammaMatrix._trusted(c, b)


def add(g1, g2):
    if g1.n != g2.n:
        raise DimensionMismatchError(f"orders differ: {g1.n} vs {g2.n}")
    return GammaMatrix._trusted(g1.c + g2.c, g1.b + g2.b)


def scale(g, a):
    return GammaMatrix._trusted(a * g.c, a * g.b)


def _singular_index(lam, threshold):
    if threshold is None:
        threshold = 1e-12 * float(np.abs(lam).max(initial=0.0))
    bad = np.flatnonzero(np.abs(lam) <= threshold)
    return int(bad[0]) if len(bad) else None


def solve_with_spectrum(lam, x, plan=None, counter=None, *, threshold=None, backend=None):
    """``Q_n diag(lam)^{-1} Q_n^T x``, rejecting eigenvalues at or below the threshold."""
    lam = np.asarray(lam, dtype=float)
    idx = _singular_index(lam, threshold)
    if idx is not None:
        raise SingularMatrixError(f"eigenvalue {idx} is {lam[idx]:.3e}, matrix is singular", index=idx)
    z = tr.idsct(x, plan, counter, backend=backend)
    if counter is not None:
        counter.record("diag", 0, z.size)
    return tr.dsct(_scale_rows(1.0 / lam, z), plan, counter, backend=backend)


def inverse_apply(gm, x, plan=None, counter=None, *, threshold=None, backend=None):
    """Solve ``G y = x`` through the spectrum of ``G``."""
    x = _check_vector(gm, x)
    tr.check_order(gm.n)
    lam = eigenvalues(gm, plan, counter, backend=backend).lambdas
    return solve_with_spectrum(lam, x, plan, counter, threshold=threshold, backend=backend)


def extract_components(g, *, probes_seed=0):
    """Recover ``(c, b)`` from a dense gamma-matrix in O(n) entry reads.

    Diagonal entries are ``c_0 + b_{2i}`` and superdiagonal entries are
    ``c_1 + b_{2k+1}`` (index taken mod n). The even-index and odd-index
    entries of ``b`` each sum to zero, so the means along those diagonals
    give ``c_0`` and ``c_1``; row 0 then yields the rest. The result is
    validated against ``g`` (fully for n <= 64, by 8n random probes above).
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatchError("expected a square matrix")
    n = tr.check_order(g.shape[0])
    m = n // 2
    idx = np.arange(m)
    diag = g[idx, idx]
    sup = g[idx, idx + 1]
    c = np.empty(n)
    b = np.empty(n)
    c0 = diag.mean()
    c1 = sup.mean()
    b[0::2] = diag - c0
    b[1::2] = sup - c1
    c = g[0] - b
    c[0] = c0
    c[1] = c1

    scale_g = _scale(g.ravel())
    try:
        gm = GammaMatrix._trusted(c, b)
    except StructureError as exc:
        raise NotAGammaMatrixError(str(exc)) from exc
    if n <= 64:
        err = float(np.abs(gm.dense() - g).max())
    else:
        rng = np.random.default_rng(probes_seed)
        i = rng.integers(0, n, 8 * n)
        j = rng.integers(0, n, 8 * n)
        recon = gm.c[(j - i) % n] + gm.b[(i + j) % n]
        err = float(np.abs(recon - g[i, j]).max())
    if err > 1e-8 * scale_g:
        raise NotAGammaMatrixError(f"reconstruction differs from input by {err:.3e}")
    return gm.c, gm.b


def classify(g, tol=1e-10):
    """Subclasses the matrix belongs to, as a subset of ``{"C_n", "B_n", "D_n", "E_n"}``."""
    n = g.n
    s = tol * _scale(g.c, g.b)
    b_zero = np.abs(g.b).max() <= s
    c_zero = np.abs(g.c).max() <= s
    out = set()
    if b_zero:
        out.add("C_n")
        alt_ok = n % 2 == 1 or abs(g.c @ (-1.0) ** np.arange(n)) <= s * n
        if abs(g.c.sum()) <= s * n and alt_ok:
            out.add("D_n")
        if n % 2 == 0:
            checker = np.ptp(g.c[0::2]) <= s and np.ptp(g.c[1::2]) <= s
        else:
            checker = np.ptp(g.c) <= s
        if checker:
            out.add("E_n")
    if c_zero:
        out.add("B_n")
    return frozenset(out)


__all__ = [
    "GammaMatrix",
    "GammaSpectrum",
    "add",
    "classify",
    "decompose_spectrum",
    "eigenvalues",
    "extract_components",
    "from_components",
    "from_spectrum",
    "identity",
    "inverse_apply",
    "matmul",
    "matvec",
    "scale",
    "solve_with_spectrum",
]
