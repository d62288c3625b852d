"""Dense symmetric eigensolver: Householder tridiagonalization + implicit-shift QL.

Follows the classical tred2/tql2 pair (EISPACK lineage), with the
Householder updates vectorized. Deterministic for a given input matrix.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 2.0**-52


class EigenConvergenceError(RuntimeError):
    pass


def _tridiagonalize(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce symmetric ``A`` to tridiagonal form ``Q^T A Q``.

    Returns the diagonal ``d``, the sub-diagonal ``e`` (``e[0] = 0``,
    ``e[i]`` couples ``i-1`` and ``i``) and the orthogonal ``Q``.
    """
    n = A.shape[0]
    V = np.array(A, dtype=float)
    d = V[n - 1].copy()
    e = np.zeros(n)

    for i in range(n - 1, 0, -1):
        scale = np.abs(d[:i]).sum()
        h = 0.0
        if scale == 0.0:
            e[i] = d[i - 1]
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
            V[:i, i] = 0.0
        else:
            d[:i] /= scale
            h = float(d[:i] @ d[:i])
            f = d[i - 1]
            g = math.sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h -= f * g
            d[i - 1] = f - g

            # e = A_i d with A_i the symmetric matrix held in tril(V[:i, :i])
            low = np.tril(V[:i, :i])
            sym = low + np.tril(low, -1).T
            V[:i, i] = d[:i]
            e[:i] = sym @ d[:i]

            e[:i] /= h
            f = float(e[:i] @ d[:i])
            hh = f / (h + h)
            e[:i] -= hh * d[:i]

            upd = np.outer(e[:i], d[:i]) + np.outer(d[:i], e[:i])
            V[:i, :i] -= np.tril(upd)
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
        d[i] = h

    # accumulate the transformations
    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            col = V[: i + 1, i + 1]
            dk = col / h
            g = col @ V[: i + 1, : i + 1]
            V[: i + 1, : i + 1] -= np.outer(dk, g)
        V[: i + 1, i + 1] = 0.0
    d = V[n - 1].copy()
    V[n - 1] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0
    return d, e, V


def _ql_implicit(d: np.ndarray, e: np.ndarray, V: np.ndarray, max_iter: int) -> None:
    """Diagonalize the tridiagonal ``(d, e)`` in place, rotating the columns of ``V``."""
    n = d.size
    e[:-1] = e[1:]
    e[-1] = 0.0
    # rotate rows of V^T: contiguous memory for the column pairs
    Vt = np.ascontiguousarray(V.T)
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1 and abs(e[m]) > _EPS * tst1:
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    raise EigenConvergenceError(
                        f"QL iteration did not converge for eigenvalue {l} after {max_iter} sweeps"
                    )
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2 :] -= h
                f += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    a = Vt[i]
                    b = Vt[i + 1]
                    Vt[i], Vt[i + 1] = c * a - s * b, s * a + c * b
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= _EPS * tst1:
                    break
        d[l] += f
        e[l] = 0.0
    V[...] = Vt.T


def sym_eig(M, max_iter_factor: int = 30) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix.

    Returns eigenvalues in descending order (ties keep the solver's
    original column order) and an orthonormal eigenvector matrix whose
    columns are sign-normalized so that the entry of largest magnitude is
    positive.

    Raises
    ------
    EigenConvergenceError
        If some eigenvalue needs more than ``max_iter_factor * n`` QL sweeps.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    d, e, V = _tridiagonalize(0.5 * (M + M.T))
    _ql_implicit(d, e, V, max_iter_factor * n)

    order = np.argsort(-d, kind="stable")
    d = d[order]
    V = V[:, order]
    lead = np.argmax(np.abs(V), axis=0)
    signs = np.where(V[lead, np.arange(n)] < 0, -1.0, 1.0)
    return d, V * signs
