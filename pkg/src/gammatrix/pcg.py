"""Preconditioned conjugate gradient for symmetric positive definite Toeplitz systems."""

from dataclasses import dataclass, field

import numpy as np

from .algebra import eigenvalues, solve_with_spectrum
from .errors import DimensionMismatchError, IndefiniteMatrixError, SingularMatrixError
from .toeplitz import SymToeplitz


@dataclass
class SolveOutcome:
    solution: np.ndarray
    iterations: int
    residual_history: list = field(default_factory=list)
    converged: bool = False

    def as_dict(self):
        return {
            "solution": [float(v) for v in self.solution],
            "iterations": self.iterations,
            "residual_history": [float(v) for v in self.residual_history],
            "converged": self.converged,
        }


def _check_preconditioner(G, threshold=None):
    lam = eigenvalues(G).lambdas
    thr = 1e-12 * float(np.abs(lam).max(initial=0.0)) if threshold is None else threshold
    small = np.flatnonzero(np.abs(lam) <= thr)
    if len(small):
        i = int(small[0])
        raise SingularMatrixError(f"preconditioner eigenvalue {i} is {lam[i]:.3e}", index=i)
    negative = np.flatnonzero(lam < 0)
    if len(negative):
        i = int(negative[0])
        raise IndefiniteMatrixError(f"preconditioner is not positive definite (eigenvalue {i} is {lam[i]:.3e})")
    return lam


def pcg(T, rhs, precond=None, tol=1e-10, maxit=1000):
    """Solve ``T x = rhs`` from ``x_0 = 0``.

    ``precond`` is a :class:`~gammatrix.algebra.GammaMatrix` applied through
    its spectrum, or ``None`` for plain CG. The residual history holds
    ``||r_k|| / ||rhs||`` starting with the initial value 1.
    """
    if not isinstance(T, SymToeplitz):
        T = SymToeplitz(T)
    A = T.dense()
    b = np.asarray(rhs, dtype=float)
    n = T.n
    if b.shape != (n,):
        raise DimensionMismatchError(f"rhs has shape {b.shape}, expected ({n},)")
    if precond is not None and precond.n != n:
        raise DimensionMismatchError(f"preconditioner order {precond.n} does not match {n}")

    x = np.zeros(n)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return SolveOutcome(x, 0, [0.0], True)

    if precond is not None:
        lam = _check_preconditioner(precond)

        def apply_m(v):
            return solve_with_spectrum(lam, v)
    else:
        def apply_m(v):
            return v.copy()

    r = b.copy()
    z = apply_m(r)
    p = z.copy()
    rz = float(r @ z)
    history = [1.0]
    for k in range(1, maxit + 1):
        ap = A @ p
        curv = float(p @ ap)
        if curv <= 0.0:
            raise IndefiniteMatrixError(f"non-positive curvature {curv:.3e} at iteration {k}")
        step = rz / curv
        x += step * p
        r -= step * ap
        rel = float(np.linalg.norm(r)) / bnorm
        history.append(rel)
        if rel <= tol:
            return SolveOutcome(x, k, history, True)
        z = apply_m(r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return SolveOutcome(x, maxit, history, False)


__all__ = ["SolveOutcome", "pcg"]
