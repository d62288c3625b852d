"""Slepian functions of a projected operator and the resulting singular-value decomposition.

For ``T F = sum sigma_n <F, u_n> v_n`` and a region ``R`` with restriction
``P``, the eigenvectors ``f^(k)`` of ``Sigma K^T Sigma`` (``K`` the Gram
matrix of the restricted ``v_n``) give

    g_k = sum_n f_n^(k) u_n,   h_k = rho_k^(-1/2) P T g_k,   tau_k = rho_k^(1/2),

and ``P T F = sum_k tau_k <F, g_k> h_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .csvio import write_csv
from .eigen import sym_eig
from .operators import DiagonalOperator, forward_values
from .spaces import BasisSystem, RegionQuadrature, SphereDomain

NEGATIVE_TOLERANCE = 1e-10


class EmptySlepianSystemError(ValueError):
    """The operator annihilates everything that reaches the region."""


class NegativeEigenvalueError(ArithmeticError):
    """The Slepian matrix is not positive semi-definite beyond rounding."""


def build_gram(v_basis: BasisSystem, region: RegionQuadrature) -> np.ndarray:
    """``K[m, n] = <P v_m, P v_n>`` by the region's quadrature, symmetrized."""
    V = v_basis.evaluate(region.nodes)
    K = (V * region.weights) @ V.T
    return 0.5 * (K + K.T)


def build_slepian_matrix(sigmas, K) -> np.ndarray:
    """``M[m, n] = sigma_m K[n, m] sigma_n`` (real scalars)."""
    s = np.asarray(sigmas, dtype=float).ravel()
    K = np.asarray(K, dtype=float)
    if K.shape != (s.size, s.size):
        raise ValueError(f"{s.size} singular values for a Gram matrix of shape {K.shape}")
    M = s[:, None] * K.T * s[None, :]
    return 0.5 * (M + M.T)


@dataclass(frozen=True, eq=False)
class SlepianSystem:
    """Sorted eigen-decomposition of the Slepian matrix and the derived SVD of ``P T``.

    ``rhos`` are descending and clamped at zero; ``coeffs[:, k-1]`` is
    ``f^(k)``; modes ``1..kept`` form the retained index set.
    """

    operator: DiagonalOperator
    region: RegionQuadrature
    rhos: np.ndarray
    coeffs: np.ndarray
    kept: int
    threshold_ratio: float
    matrix: np.ndarray
    min_raw_eigenvalue: float
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def taus(self) -> np.ndarray:
        return np.sqrt(self.rhos)

    @property
    def size(self) -> int:
        return self.rhos.size

    @property
    def condition(self) -> float:
        """``tau_1 / tau_kept``."""
        t = self.taus
        return float(t[0] / t[self.kept - 1])

    def _ks(self, ks, limit: int) -> np.ndarray:
        if ks is None:
            return np.arange(1, limit + 1)
        ks = np.atleast_1d(np.asarray(ks, dtype=int))
        if ks.size and (ks.min() < 1 or ks.max() > limit):
            raise IndexError(f"mode index outside 1..{limit}: {ks.tolist()}")
        return ks

    def g_values(self, points, ks=None) -> np.ndarray:
        """``g_k`` at ``points``, shape ``(len(ks), n_points)``."""
        ks = self._ks(ks, self.size)
        return self.coeffs[:, ks - 1].T @ self.operator.u_basis.evaluate(points)

    def h_values(self, points, ks=None) -> np.ndarray:
        """``h_k`` evaluated by its defining sum; only ``k <= kept`` is allowed."""
        ks = self._ks(ks, self.kept)
        C = self.operator.sigmas[:, None] * self.coeffs[:, ks - 1] / self.taus[ks - 1]
        return C.T @ self.operator.v_basis.evaluate(points)

    def extended_h_values(self, points, ks=None) -> np.ndarray:
        """``h_k`` extended by zero outside the region."""
        vals = self.h_values(points, ks)
        return vals * self.region.contains(points)

    @property
    def h_at_nodes(self) -> np.ndarray:
        """``h_k`` for ``k <= kept`` at the region's quadrature nodes."""
        if "h_nodes" not in self._cache:
            self._cache["h_nodes"] = self.h_values(self.region.nodes)
        return self._cache["h_nodes"]

    def project_data(self, samples) -> np.ndarray:
        """``<G, h_k>_Z`` for ``k <= kept`` from samples of ``G`` at the region nodes."""
        G = np.asarray(samples, dtype=float)
        if G.shape[0] != self.region.n_nodes:
            raise ValueError(
                f"{G.shape[0]} samples for a region with {self.region.n_nodes} nodes"
            )
        w = self.region.weights.reshape((-1,) + (1,) * (G.ndim - 1))
        return self.h_at_nodes @ (w * G)

    def to_u_coeffs(self, slepian_coeffs) -> np.ndarray:
        """Map coefficients in ``g_1..g_m`` to coefficients in the ``u`` system."""
        c = np.asarray(slepian_coeffs, dtype=float)
        return self.coeffs[:, : c.shape[0]] @ c

    def from_u_coeffs(self, F) -> np.ndarray:
        """``<F, g_k>`` for all ``k`` (the ``coeffs`` matrix is orthogonal)."""
        return self.coeffs.T @ np.asarray(F, dtype=float)

    def spectrum_rows(self):
        taus = self.taus
        return [(k + 1, self.rhos[k], taus[k]) for k in range(self.size)]

    def write_spectrum(self, path):
        return write_csv(path, ("k", "rho", "tau"), self.spectrum_rows())

    def write_eigenvectors(self, path):
        header = ("n",) + tuple(f"f{k}" for k in range(1, self.size + 1))
        rows = ((n + 1, *self.coeffs[n]) for n in range(self.size))
        return write_csv(path, header, rows)


def kept_count(rhos: np.ndarray, threshold_ratio: float) -> int:
    """Number of leading modes with ``tau_k >= threshold_ratio * tau_1`` and ``rho_k`` numerically nonzero."""
    if rhos.size == 0 or rhos[0] <= 0.0:
        return 0
    floor = rhos.size * np.finfo(float).eps * rhos[0]
    taus = np.sqrt(np.clip(rhos, 0.0, None))
    ok = (taus >= threshold_ratio * taus[0]) & (rhos > floor)
    # rhos are sorted, so ``ok`` is a prefix
    return int(np.argmin(ok)) if not ok.all() else int(ok.size)


def build_slepian_system(
    operator: DiagonalOperator, region: RegionQuadrature, threshold_ratio: float = 1e-3
) -> SlepianSystem:
    """Slepian basis and SVD of ``P T`` for ``operator`` restricted to ``region``.

    Raises
    ------
    EmptySlepianSystemError
        If every eigenvalue vanishes.
    NegativeEigenvalueError
        If an eigenvalue falls below ``-1e-10`` (relative to ``max(1, rho_1)``).
    """
    if not 0.0 <= threshold_ratio < 1.0:
        raise ValueError(f"threshold ratio must lie in [0, 1), got {threshold_ratio}")
    K = build_gram(operator.v_basis, region)
    M = build_slepian_matrix(operator.sigmas, K)
    rhos, F = sym_eig(M)
    lowest = float(rhos[-1])
    if lowest < -NEGATIVE_TOLERANCE * max(1.0, float(rhos[0])):
        raise NegativeEigenvalueError(
            f"Slepian matrix has eigenvalue {lowest:.3e}; Gram matrices are positive semi-definite"
        )
    rhos = np.clip(rhos, 0.0, None)
    kept = kept_count(rhos, threshold_ratio)
    if kept == 0:
        raise EmptySlepianSystemError(
            f"operator {operator.kind!r} annihilates everything on {region.descriptor}"
        )
    for a in (rhos, F, M):
        a.setflags(write=False)
    return SlepianSystem(operator, region, rhos, F, kept, float(threshold_ratio), M, lowest)


def _scalar_or_array(vals: np.ndarray, point, basis: BasisSystem):
    single = np.ndim(point) == (1 if isinstance(basis.domain, SphereDomain) else 0)
    return float(vals[0]) if single else vals


def eval_g(sys: SlepianSystem, k: int, x):
    """``g_k(x) = sum_n f_n^(k) u_n(x)``; float for a single point."""
    return _scalar_or_array(sys.g_values(x, [k])[0], x, sys.operator.u_basis)


def eval_h(sys: SlepianSystem, k: int, z):
    """``h_k(z)`` for a region point ``z``; requires ``k <= kept``."""
    if k > sys.kept:
        raise IndexError(
            f"h_{k} is undefined: only {sys.kept} modes have a usable singular value"
        )
    if not np.all(sys.region.contains(z)):
        raise ValueError(f"point outside {sys.region.descriptor}")
    return _scalar_or_array(sys.h_values(z, [k])[0], z, sys.operator.v_basis)


def concentration_ratio(operator: DiagonalOperator, region: RegionQuadrature, F) -> float:
    """``||P T F||_Z^2 / ||F||_X^2`` with the region quadrature for the numerator."""
    F = np.asarray(F, dtype=float)
    vals = forward_values(operator, F, region.nodes)
    return float(region.integrate(vals * vals) / (F @ F))
