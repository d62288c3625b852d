"""Compact operators given by their singular-value decomposition over basis pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import BasisSystem, RegionQuadrature, SphericalBasis, as_points, basis_from_config

LAYOUTS = ("concatenated", "interleaved")


@dataclass(frozen=True)
class ProductDomain:
    parts: tuple


def _coupling_order(n1: int, n2: int, layout: str) -> list[tuple[int, int]]:
    """``(part, 0-based index)`` of each combined index, in order."""
    if layout == "concatenated":
        return [(0, i) for i in range(n1)] + [(1, i) for i in range(n2)]
    if layout == "interleaved":
        order = []
        for i in range(max(n1, n2)):
            if i < n1:
                order.append((0, i))
            if i < n2:
                order.append((1, i))
        return order
    raise ValueError(f"unknown layout {layout!r}, expected one of {LAYOUTS}")


class ProductBasis(BasisSystem):
    """Orthonormal system of the product space ``X1 x X2``.

    A point set is a pair ``(points_1, points_2)``; values are laid out with
    the part-1 points first. Each function vanishes on the other factor.
    """

    def __init__(self, first: BasisSystem, second: BasisSystem, layout: str = "concatenated"):
        self.parts = (first, second)
        self.layout = layout
        self.order = tuple(_coupling_order(first.size, second.size, layout))
        self.size = first.size + second.size
        self.domain = ProductDomain((first.domain, second.domain))
        self.labels = tuple((p + 1, *self.parts[p].labels[i]) for p, i in self.order)

    def split(self, points):
        p1, p2 = points
        return as_points(self.parts[0], p1), as_points(self.parts[1], p2)

    def evaluate(self, points) -> np.ndarray:
        p1, p2 = self.split(points)
        v1 = self.parts[0].evaluate(p1)
        v2 = self.parts[1].evaluate(p2)
        n1 = v1.shape[1]
        out = np.zeros((self.size, n1 + v2.shape[1]))
        for row, (p, i) in enumerate(self.order):
            if p == 0:
                out[row, :n1] = v1[i]
            else:
                out[row, n1:] = v2[i]
        return out

    def reference_quadrature(self, n_nodes=None):
        (x1, w1), (x2, w2) = (b.reference_quadrature(n_nodes) for b in self.parts)
        return (x1, x2), np.concatenate([w1, w2])

    def to_config(self) -> dict:
        return {
            "kind": "product",
            "layout": self.layout,
            "parts": [b.to_config() for b in self.parts],
        }


class StackedBasis(BasisSystem):
    """Union of two systems on one domain, in coupling order; generally not orthonormal."""

    def __init__(self, first: BasisSystem, second: BasisSystem, layout: str = "concatenated"):
        if first.domain != second.domain:
            raise ValueError(
                f"coupled operators must share the image domain: {first.domain} != {second.domain}"
            )
        self.parts = (first, second)
        self.layout = layout
        self.order = tuple(_coupling_order(first.size, second.size, layout))
        self.size = first.size + second.size
        self.domain = first.domain
        self.labels = tuple((p + 1, *self.parts[p].labels[i]) for p, i in self.order)
        self._rows = np.array(
            [i if p == 0 else first.size + i for p, i in self.order], dtype=int
        )

    def evaluate(self, points) -> np.ndarray:
        both = np.vstack([self.parts[0].evaluate(points), self.parts[1].evaluate(points)])
        return both[self._rows]

    def reference_quadrature(self, n_nodes=None):
        return self.parts[0].reference_quadrature(n_nodes)

    def to_config(self) -> dict:
        return {
            "kind": "stacked",
            "layout": self.layout,
            "parts": [b.to_config() for b in self.parts],
        }


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    """``T F = sum_k sigma_k <F, u_k> v_k`` for finite systems ``u``, ``v``.

    Zero singular values are allowed (padding, annihilated directions).
    """

    sigmas: np.ndarray
    u_basis: BasisSystem
    v_basis: BasisSystem
    kind: str = "custom"
    params: dict | None = None

    def __post_init__(self):
        s = np.array(self.sigmas, dtype=float).ravel()
        s.setflags(write=False)
        object.__setattr__(self, "sigmas", s)
        if not (s.size == self.u_basis.size == self.v_basis.size):
            raise ValueError(
                f"{s.size} singular values for bases of size "
                f"{self.u_basis.size} and {self.v_basis.size}"
            )
        if not np.all(np.isfinite(s)):
            raise ValueError("singular values must be finite")

    @property
    def size(self) -> int:
        return self.sigmas.size

    @property
    def norm(self) -> float:
        return float(np.abs(self.sigmas).max())

    @property
    def zero_count(self) -> int:
        return int(np.count_nonzero(self.sigmas == 0.0))

    def to_config(self) -> dict:
        return {"kind": self.kind, **(self.params or {})}


def _check_coeffs(op: DiagonalOperator, F) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.shape[0] != op.size:
        raise ValueError(f"coefficient vector of length {F.shape[0]} for operator of size {op.size}")
    return F


def apply(op: DiagonalOperator, F) -> np.ndarray:
    """Coefficients of ``T F`` in the ``v`` system; ``F`` may carry trailing batch axes."""
    F = _check_coeffs(op, F)
    return op.sigmas.reshape((-1,) + (1,) * (F.ndim - 1)) * F


def forward_values(op: DiagonalOperator, F, points) -> np.ndarray:
    """Pointwise values of ``T F`` on the image domain."""
    return apply(op, F).T @ op.v_basis.evaluate(points)


def restrict(
    F, operator: DiagonalOperator, basis_v: BasisSystem, region: RegionQuadrature, point
) -> float:
    """``(P T F)(point)`` for a single point of the region."""
    if basis_v is not operator.v_basis and basis_v.size != operator.size:
        raise ValueError("image basis does not match the operator")
    if not region.contains(point).all():
        raise ValueError(f"point {point!r} is outside the region {region.descriptor}")
    vals = apply(operator, F) @ basis_v.evaluate(as_points(basis_v, point))
    return float(vals[0])


def identity_operator(basis: BasisSystem) -> DiagonalOperator:
    return DiagonalOperator(
        np.ones(basis.size), basis, basis, kind="identity", params={"basis": basis.to_config()}
    )


def reciprocal_degree_operator(basis: BasisSystem) -> DiagonalOperator:
    """``sigma = 1/(n+1)`` with ``n`` the degree of each basis function."""
    return DiagonalOperator(
        1.0 / (basis.degrees + 1.0),
        basis,
        basis,
        kind="reciprocal_degree",
        params={"basis": basis.to_config()},
    )


def upward_continuation_operator(
    max_degree: int, r_inner: float, r_outer: float, exponent_shift: int = 0
) -> DiagonalOperator:
    """Harmonic continuation from radius ``r_inner`` to ``r_outer``.

    ``sigma_l = (r_inner/r_outer)^(l + exponent_shift)``; shift 0 is the
    internal-source case, shift 1 the external-source case (where the
    source sphere is the outer one).
    """
    if not 0 < r_inner < r_outer:
        raise ValueError(f"need 0 < r_inner < r_outer, got {r_inner}, {r_outer}")
    if exponent_shift == 0:
        u = SphericalBasis(max_degree, r_inner)
        v = SphericalBasis(max_degree, r_outer)
    else:
        # external field: source on r_outer, data on r_inner
        u = SphericalBasis(max_degree, r_outer)
        v = SphericalBasis(max_degree, r_inner)
    ratio = r_inner / r_outer
    sig = ratio ** (u.degrees + float(exponent_shift))
    return DiagonalOperator(
        sig,
        u,
        v,
        kind="upward_continuation",
        params={
            "max_degree": int(max_degree),
            "r_inner": float(r_inner),
            "r_outer": float(r_outer),
            "exponent_shift": int(exponent_shift),
        },
    )


def couple(op1: DiagonalOperator, op2: DiagonalOperator, layout: str = "concatenated") -> DiagonalOperator:
    """Single operator ``S(F1, F2) = T1 F1 + T2 F2`` on the product space."""
    if layout not in LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}, expected one of {LAYOUTS}")
    v = StackedBasis(op1.v_basis, op2.v_basis, layout)
    u = ProductBasis(op1.u_basis, op2.u_basis, layout)
    both = np.concatenate([op1.sigmas, op2.sigmas])
    sig = both[v._rows]
    return DiagonalOperator(
        sig,
        u,
        v,
        kind="coupled",
        params={"layout": layout, "parts": [op1.to_config(), op2.to_config()]},
    )


def split_coupled(op: DiagonalOperator, F) -> tuple[np.ndarray, np.ndarray]:
    """Split combined coefficients of a coupled operator into ``(F1, F2)``."""
    order = op.u_basis.order
    F = _check_coeffs(op, F)
    n1 = op.u_basis.parts[0].size
    F1 = np.zeros((n1,) + F.shape[1:])
    F2 = np.zeros((op.size - n1,) + F.shape[1:])
    for row, (p, i) in enumerate(order):
        (F1 if p == 0 else F2)[i] = F[row]
    return F1, F2


def join_coupled(op: DiagonalOperator, F1, F2) -> np.ndarray:
    order = op.u_basis.order
    F1, F2 = np.asarray(F1, float), np.asarray(F2, float)
    return np.array([F1[i] if p == 0 else F2[i] for p, i in order])


def operator_from_config(cfg: dict) -> DiagonalOperator:
    kind = cfg.get("kind")
    if kind == "identity":
        return identity_operator(basis_from_config(cfg["basis"]))
    if kind == "reciprocal_degree":
        return reciprocal_degree_operator(basis_from_config(cfg["basis"]))
    if kind == "upward_continuation":
        return upward_continuation_operator(
            int(cfg["max_degree"]),
            float(cfg["r_inner"]),
            float(cfg["r_outer"]),
            int(cfg.get("exponent_shift", 0)),
        )
    if kind == "coupled":
        a, b = (operator_from_config(p) for p in cfg["parts"])
        return couple(a, b, cfg.get("layout", "concatenated"))
    raise ValueError(f"unknown operator kind {kind!r}")
