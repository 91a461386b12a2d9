"""Pure NumPy fallback for the recursive cosine/sine kernels.

Each function works on a batch of row vectors of shape ``(k, n)`` and
returns ``(coeffs, additions, multiplications)`` where the counts are for a
single row. The tallies follow the listings literally: one addition per
binary +/-, one multiplication per product by a secant, 2 or 1/2.
"""

import numpy as np


def cs_rows(x, secants):
    """Cosine coefficients ``C_0..C_{n/2}`` of symmetric rows of ``x``."""
    k, n = x.shape
    if n == 4:
        c = np.empty((k, 3))
        twice = 2.0 * x[:, 1]
        c[:, 0] = x[:, 0] + twice + x[:, 2]
        c[:, 1] = x[:, 0] - x[:, 2]
        c[:, 2] = x[:, 0] - 2.0 * x[:, 1] + x[:, 2]
        return c, 5, 2

    m, nu = n // 2, n // 4
    odd = x[:, 1::2]
    # sigma fold of the odd samples; symmetric, so only half is computed
    fold = np.empty((k, m))
    fold[:, 0] = 2.0 * odd[:, 0]
    fold[:, 1:nu] = odd[:, 1:nu] + odd[:, m - 1:nu:-1]
    fold[:, nu] = 2.0 * odd[:, nu]
    fold[:, nu + 1:] = fold[:, nu - 1:0:-1]

    ct, a1, m1 = cs_rows(np.ascontiguousarray(x[:, 0::2]), secants)
    cb, a2, m2 = cs_rows(fold, secants)

    aux = secants[n] * cb[:, 1:nu]
    c = np.empty((k, m + 1))
    c[:, 1:nu] = ct[:, 1:nu] + aux
    c[:, m - 1:nu:-1] = ct[:, 1:nu] - aux
    half = 0.5 * cb[:, 0]
    c[:, 0] = ct[:, 0] + half
    c[:, nu] = ct[:, nu]
    c[:, m] = ct[:, 0] - half

    adds = (nu - 1) + 2 * (nu - 1) + 2 + a1 + a2
    muls = 2 + (nu - 1) + 1 + m1 + m2
    return c, adds, muls


def sn_rows(x, secants):
    """Sine coefficients of asymmetric rows; column 0 is an unused zero slot.

    Output has shape ``(k, n/2)`` with ``S_j`` in column ``j``.
    """
    k, n = x.shape
    if n == 4:
        s = np.zeros((k, 2))
        s[:, 1] = 2.0 * x[:, 1]
        return s, 0, 1

    m, nu = n // 2, n // 4
    odd = x[:, 1::2]
    # alpha fold: zero at 0 and nu, antisymmetric elsewhere
    fold = np.zeros((k, m))
    fold[:, 1:nu] = odd[:, 1:nu] - odd[:, m - 1:nu:-1]
    fold[:, nu + 1:] = -fold[:, nu - 1:0:-1]

    st, a1, m1 = sn_rows(np.ascontiguousarray(x[:, 0::2]), secants)
    sb, a2, m2 = sn_rows(fold, secants)

    aux = secants[n] * sb[:, 1:nu]
    s = np.zeros((k, m))
    s[:, 1:nu] = st[:, 1:nu] + aux
    s[:, m - 1:nu:-1] = aux - st[:, 1:nu]
    # middle coefficient: 2 * sum over j = 0, 2, .., nu-2 of x[2j+1] - x[2j+3]
    pairs = x[:, 1:2 * nu:4] - x[:, 3:2 * nu + 2:4]
    s[:, nu] = 2.0 * pairs.sum(axis=1)

    adds = (nu - 1) + 2 * (nu - 1) + nu + a1 + a2
    muls = (nu - 1) + 1 + m1 + m2
    return s, adds, muls
