"""Filtered inversion of ``P T F = G`` in the Slepian basis.

All solvers produce coefficients with respect to ``g_1..g_kept``:

    c_k = phi_J(k) tau_k^-1 <G, h_k>_Z

where ``phi_J`` is a filter (Shannon cut-off, truncation, or a user
table). The scaling-function approximation ``Phi_J * G`` is
``sum_k c_k g_k``; the wavelet detail ``Psi_J * G`` uses
``phi_{J+1} - phi_J``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .spaces import GridSpec, RegionQuadrature
from .slepian import SlepianSystem

UNSTABLE_RATIO = 1e-6


def shannon(J: int, k: int) -> float:
    """Shannon generator: 1 if ``k < 2^J``, else 0."""
    return 1.0 if k < 2**J else 0.0


@dataclass(frozen=True)
class FilterSpec:
    """Scale-indexed filter ``phi_J(k)`` with values in ``[0, 1]``.

    ``kind="shannon"`` needs nothing else. ``kind="custom"`` takes either
    ``table`` (``{J: [phi_J(1), phi_J(2), ...]}``, missing ``k`` read as
    0) or ``func(J, ks) -> array``.
    """

    kind: str = "shannon"
    table: Mapping[int, tuple] | None = None
    func: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("shannon", "custom"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.kind == "custom" and (self.table is None) == (self.func is None):
            raise ValueError("a custom filter needs exactly one of table or func")
        if self.table is not None:
            frozen = {int(J): tuple(float(v) for v in vals) for J, vals in self.table.items()}
            object.__setattr__(self, "table", frozen)

    @classmethod
    def custom(cls, table=None, func=None) -> "FilterSpec":
        return cls("custom", table=table, func=func)

    def values(self, J: int, ks) -> np.ndarray:
        out = self._raw(J, ks)
        if np.any(out < 0.0) or np.any(out > 1.0):
            raise ValueError(f"filter values at scale {J} leave [0, 1]")
        return out

    def _raw(self, J: int, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=int)
        if J < 0:
            raise ValueError(f"scale must be >= 0, got {J}")
        if self.kind == "shannon":
            out = (ks < 2**J).astype(float)
        elif self.table is not None:
            if J not in self.table:
                raise KeyError(f"filter table has no scale {J}")
            row = np.asarray(self.table[J])
            out = np.zeros(ks.shape)
            inside = ks <= row.size
            out[inside] = row[ks[inside] - 1]
        else:
            out = np.asarray(self.func(J, ks), dtype=float)
        return out

    def to_config(self) -> dict:
        if self.kind == "shannon":
            return {"kind": "shannon"}
        if self.table is not None:
            return {"kind": "custom", "table": {str(J): list(v) for J, v in self.table.items()}}
        return {"kind": "custom", "func": getattr(self.func, "__name__", "callable")}


SHANNON = FilterSpec("shannon")


def filter_report(filt: FilterSpec, kept: int, taus=None, max_scale: int = 20) -> dict:
    """Check the admissibility conditions on the finite index set ``1..kept``.

    ``in_unit_interval``: ``0 <= phi_J(k) <= 1`` for ``J = 0..max_scale``.
    ``tends_to_one``: ``phi_{max_scale}(k) == 1`` for all ``k``.
    ``monotone``: ``phi_J(k)`` non-decreasing in ``J``.
    ``stability``: finite ``sup_k phi_J(k)/tau_k`` per scale (if ``taus`` given).
    """
    ks = np.arange(1, kept + 1)
    table = np.vstack([filt._raw(J, ks) for J in range(max_scale + 1)])
    report = {
        "in_unit_interval": bool(np.all((table >= 0.0) & (table <= 1.0))),
        "tends_to_one": bool(np.allclose(table[-1], 1.0)),
        "monotone": bool(np.all(np.diff(table, axis=0) >= 0.0)),
    }
    if taus is not None:
        t = np.asarray(taus, dtype=float)[:kept]
        report["stability"] = [float(np.max(row / t)) for row in table]
    return report


@dataclass(frozen=True, eq=False)
class RegionalData:
    """Samples of ``G`` at the quadrature nodes of ``region``."""

    samples: np.ndarray
    region: RegionQuadrature

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.shape[0] != self.region.n_nodes:
            raise ValueError(
                f"{s.shape[0]} samples for a region with {self.region.n_nodes} nodes"
            )
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.region.integrate(self.samples**2)))


@dataclass(frozen=True, eq=False)
class Solution:
    """Approximate solution as coefficients over ``g_1..g_kept``.

    ``values`` holds samples at ``points`` when an evaluation grid was given.
    """

    system: SlepianSystem
    coeffs: np.ndarray
    points: np.ndarray | None = None
    values: np.ndarray | None = None

    @property
    def u_coeffs(self) -> np.ndarray:
        return self.system.to_u_coeffs(self.coeffs)

    @property
    def norm(self) -> float:
        """Norm in ``X`` (Parseval over the orthonormal ``g_k``)."""
        return float(np.linalg.norm(self.coeffs))

    def evaluate(self, points) -> np.ndarray:
        return self.u_coeffs @ self.system.operator.u_basis.evaluate(points)


def _data_samples(sys: SlepianSystem, G) -> np.ndarray:
    if isinstance(G, RegionalData):
        if G.region is not sys.region and G.region.n_nodes != sys.region.n_nodes:
            raise ValueError("data were sampled on a different region")
        return G.samples
    return np.asarray(G, dtype=float)


def _grid_points(eval_grid):
    if eval_grid is None:
        return None
    if isinstance(eval_grid, GridSpec):
        return eval_grid.points()
    return eval_grid


def _finish(sys: SlepianSystem, coeffs: np.ndarray, eval_grid) -> Solution:
    pts = _grid_points(eval_grid)
    sol = Solution(sys, coeffs)
    if pts is None:
        return sol
    return Solution(sys, coeffs, pts, sol.evaluate(pts))


def filtered_coeffs(sys: SlepianSystem, G, weights) -> np.ndarray:
    """``weights_k tau_k^-1 <G, h_k>`` for ``k <= kept``."""
    proj = sys.project_data(_data_samples(sys, G))
    return np.asarray(weights, dtype=float) / sys.taus[: sys.kept] * proj


def tsvd_solve(sys: SlepianSystem, G, J: int, eval_grid=None) -> Solution:
    """Truncated SVD: keep the first ``J`` Slepian modes."""
    if not 1 <= J <= sys.kept:
        raise ValueError(f"truncation {J} outside 1..{sys.kept}")
    w = (np.arange(1, sys.kept + 1) <= J).astype(float)
    return _finish(sys, filtered_coeffs(sys, G, w), eval_grid)


def scaling_solve(
    sys: SlepianSystem, G, filter: FilterSpec = SHANNON, J: int = 0, eval_grid=None
) -> Solution:
    """``Phi_J * G``."""
    w = filter.values(J, np.arange(1, sys.kept + 1))
    return _finish(sys, filtered_coeffs(sys, G, w), eval_grid)


def wavelet_detail(
    sys: SlepianSystem, G, filter: FilterSpec = SHANNON, J: int = 0, eval_grid=None
) -> Solution:
    """``Psi_J * G = Phi_{J+1} * G - Phi_J * G`` from the filter difference."""
    ks = np.arange(1, sys.kept + 1)
    w = filter.values(J + 1, ks) - filter.values(J, ks)
    return _finish(sys, filtered_coeffs(sys, G, w), eval_grid)


def stability_constant(sys: SlepianSystem, filter: FilterSpec, J: int) -> float:
    """``sup_k phi_J(k) / tau_k``, the norm of ``G -> Phi_J * G``."""
    w = filter.values(J, np.arange(1, sys.kept + 1))
    return float(np.max(w / sys.taus[: sys.kept]))


@dataclass(frozen=True, eq=False)
class KernelEval:
    """Kernel ``D_up`` (``direction="up"``) or ``D_down``/``Phi_J`` (``"down"``) of a Slepian system."""

    direction: str
    system: SlepianSystem
    filter: FilterSpec | None = None
    scale: int = 0

    def __post_init__(self):
        if self.direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', got {self.direction!r}")

    @property
    def condition(self) -> float:
        return self.system.condition

    @property
    def unstable(self) -> bool:
        t = self.system.taus
        return (
            self.direction == "down"
            and self.filter is None
            and t[self.system.kept - 1] / t[0] < UNSTABLE_RATIO
        )


@dataclass(frozen=True, eq=False)
class KernelResult:
    """``values[i, j]`` is the kernel at global point ``x_i`` and region point ``z_j``."""

    values: np.ndarray
    unstable: bool
    condition: float


def eval_kernel(kernel: KernelEval, x, z) -> KernelResult:
    """Evaluate ``sum_k w_k g_k(x) h_k(z)`` on all pairs of ``x`` and ``z``.

    ``w_k = tau_k`` for ``up`` and ``tau_k^-1`` for ``down``, times
    ``phi_J(k)`` when a filter is attached.
    """
    sys = kernel.system
    if not np.all(sys.region.contains(z)):
        raise ValueError(f"kernel points z must lie in {sys.region.descriptor}")
    taus = sys.taus[: sys.kept]
    w = taus.copy() if kernel.direction == "up" else 1.0 / taus
    if kernel.filter is not None:
        w = w * kernel.filter.values(kernel.scale, np.arange(1, sys.kept + 1))
    g = sys.g_values(x, np.arange(1, sys.kept + 1))
    h = sys.h_values(z)
    return KernelResult((g.T * w) @ h, kernel.unstable, kernel.condition)
