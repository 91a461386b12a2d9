"""Brute-force reference implementations.

Everything here works from materialised matrices at O(n^2) or O(n^3) cost
and accepts any order n >= 2. Nothing in this module touches the fast
kernels, so it can serve as an independent oracle for them.
"""

import numpy as np

from .errors import DimensionMismatchError, InvalidOrderError, StructureError
from .spectral import build_q_dense


def _vector(x):
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[0] < 2:
        raise InvalidOrderError("expected a vector (or column block) of length >= 2")
    return x


def dense_idsct(x):
    """``Q_n^T x`` by explicit matrix product."""
    x = _vector(x)
    return build_q_dense(x.shape[0]).matrix.T @ x


def dense_dsct(t):
    """``Q_n t`` by explicit matrix product."""
    t = _vector(t)
    return build_q_dense(t.shape[0]).matrix @ t


def circ(c):
    """Circulant with first row ``c``; each row is the previous one shifted right."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    k = np.arange(n)
    return c[(k[None, :] - k[:, None]) % n]


def rcirc(b):
    """Reverse circulant with first row ``b``; rows shift left, so the result is symmetric."""
    b = np.asarray(b, dtype=float)
    n = len(b)
    k = np.arange(n)
    return b[(k[None, :] + k[:, None]) % n]


def dense_render(gm):
    """Dense ``circ(c) + rcirc(b)`` of anything exposing ``c`` and ``b``."""
    return circ(gm.c) + rcirc(gm.b)


def dense_matmul(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    n, p = a.shape[0], b.shape[1]
    out = np.zeros((n, p))
    # plain triple loop over the inner index keeps this independent of BLAS ordering
    for k in range(a.shape[1]):
        out += np.outer(a[:, k], b[k, :])
    return out


def dense_matvec(a, x):
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if a.shape[1] != x.shape[0]:
        raise DimensionMismatchError(f"cannot apply {a.shape} to length {x.shape[0]}")
    return (a * x[None, :]).sum(axis=1)


def _check_symmetric(a, tol):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("expected a square matrix")
    if not np.all(np.isfinite(a)):
        raise StructureError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    if np.abs(a - a.T).max(initial=0.0) > tol * scale:
        raise StructureError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi eigensolver. Returns ``(eigenvalues, eigenvectors)``, ascending.

    Slow (O(n^3) per sweep in pure NumPy) and intended for small matrices
    where an implementation independent of LAPACK is wanted.
    """
    a = _check_symmetric(a, 1e-10).copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.sum(a * a) - np.sum(np.diag(a) ** 2)))
        if off <= tol * max(norm, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def dense_eigensolve_symmetric(a, vectors=False, method="lapack"):
    """Sorted eigenvalues of a symmetric matrix (and eigenvectors if asked).

    ``method="lapack"`` uses the divide-and-conquer LAPACK driver through
    NumPy; ``method="jacobi"`` uses :func:`jacobi_eigh`.
    """
    a = _check_symmetric(a, 1e-10)
    if method == "jacobi":
        w, v = jacobi_eigh(a)
    elif method == "lapack":
        w, v = np.linalg.eigh(a) if vectors else (np.linalg.eigvalsh(a), None)
    else:
        raise ValueError(f"unknown method {method!r}")
    return (w, v) if vectors else w


def toeplitz_dense(t):
    """Symmetric Toeplitz matrix with entries ``t_{|k-j|}``."""
    t = np.asarray(t, dtype=float)
    k = np.arange(len(t))
    return t[np.abs(k[:, None] - k[None, :])]


def _symmetric_rows(n):
    """Rows ``e_j + e_{n-j}``, j = 0..n/2, spanning the symmetric vectors."""
    rows = []
    for j in range(n // 2 + 1):
        e = np.zeros(n)
        e[j] += 1.0
        e[(n - j) % n] += 1.0
        rows.append(e)
    return np.array(rows)


def _orthonormal_span(mats):
    """Orthonormal basis (flattened rows) of the span of the given matrices."""
    flat = np.array([m.ravel() for m in mats])
    q, r = np.linalg.qr(flat.T)
    keep = np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(np.diag(r)).max())
    return q[:, keep].T


def gamma_subspace_bases(n):
    """Frobenius-orthonormal bases of the circulant and reverse-circulant parts.

    The circulant part is spanned by ``circ(e_j + e_{n-j})``. The reverse
    part is spanned by ``rcirc(v)`` for symmetric ``v`` orthogonal to the
    ones vector and (even n) to the alternating vector.
    """
    if n < 2:
        raise InvalidOrderError(f"order must be >= 2, got {n}")
    sym = _symmetric_rows(n)
    c_basis = _orthonormal_span([circ(v) for v in sym])

    constraints = [np.ones(n)]
    if n % 2 == 0:
        constraints.append((-1.0) ** np.arange(n))
    cons = np.array(constraints)
    # null space of the constraints inside the symmetric vectors
    _, s, vt = np.linalg.svd(cons @ sym.T)
    rank = int(np.sum(s > 1e-10))
    coeffs = vt[rank:]
    b_vectors = coeffs @ sym
    b_basis = _orthonormal_span([rcirc(v) for v in b_vectors])
    return c_basis, b_basis


def frobenius_projection(a):
    """Orthogonal projection of a dense matrix onto the gamma-matrix subspace.

    Returns ``(c, b)``: first rows of the circulant and reverse-circulant
    parts of the projection.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    c_basis, b_basis = gamma_subspace_bases(n)
    flat = a.ravel()
    pc = (c_basis.T @ (c_basis @ flat)).reshape(n, n)
    pb = (b_basis.T @ (b_basis @ flat)).reshape(n, n)
    return pc[0].copy(), pb[0].copy()
