"""Global domains, orthonormal basis systems and regional quadratures.

Points on a 1-D domain are plain floats. Points on a sphere are
``(colatitude, longitude)`` pairs in radians, passed as an array of
shape ``(n, 2)``; the radius is carried by the basis or region, not by
the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
_BOUND_SLACK = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Domain1D:
    lower: float = 0.0
    upper: float = TWO_PI
    periodic: bool = True

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty domain [{self.lower}, {self.upper}]")

    @property
    def length(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class SphereDomain:
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")

    @property
    def area(self) -> float:
        return 4.0 * math.pi * self.radius**2


@dataclass(frozen=True)
class GridSpec:
    """Equidistant evaluation grid ``count`` points over ``span`` (closed)."""

    count: int
    span: tuple[float, float] = (0.0, TWO_PI)

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("a grid needs at least two points")
        if not self.span[0] < self.span[1]:
            raise ValueError(f"bad grid span {self.span}")

    def points(self) -> np.ndarray:
        return np.linspace(self.span[0], self.span[1], self.count)


class BasisSystem:
    """Finite family of real functions on a global domain.

    Subclasses provide :meth:`evaluate`, returning an array of shape
    ``(size, n_points)``. Indices in the public API are 1-based, as
    ``k = 1..size``.
    """

    size: int
    domain: Any
    labels: tuple

    def evaluate(self, points) -> np.ndarray:
        raise NotImplementedError

    def value(self, k: int, point) -> float:
        self._check_index(k)
        return float(self.evaluate(_as_single_point(self, point))[k - 1, 0])

    def index_of(self, label) -> int:
        try:
            return self._index[tuple(label)]
        except KeyError:
            raise KeyError(f"no basis function labelled {label!r}") from None

    def label_of(self, k: int) -> tuple:
        self._check_index(k)
        return self.labels[k - 1]

    def to_config(self) -> dict:
        raise NotImplementedError

    def reference_quadrature(self, n_nodes: int | None = None):
        """``(points, weights)`` over the whole domain, exact for pairwise products."""
        return full_domain_quadrature(self, n_nodes)

    def _check_index(self, k: int):
        if not 1 <= k <= self.size:
            raise IndexError(f"basis index {k} outside 1..{self.size}")

    @property
    def _index(self) -> dict:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {lab: i + 1 for i, lab in enumerate(self.labels)}
            self.__dict__["_index_cache"] = cache
        return cache


def _as_single_point(basis: BasisSystem, point):
    if isinstance(basis.domain, SphereDomain):
        return np.asarray(point, dtype=float).reshape(1, 2)
    return np.atleast_1d(np.asarray(point, dtype=float))


def fourier_index(n: int, j: int) -> int:
    """Single index of the label ``(n, j)``; the constant is ``(0, 1)``."""
    if n == 0:
        if j != 1:
            raise ValueError("the constant function only has j = 1")
        return 1
    if n < 0 or j not in (1, 2):
        raise ValueError(f"invalid Fourier label ({n}, {j})")
    return 2 * (n - 1) + j + 1


class FourierBasis(BasisSystem):
    """Real trigonometric system on ``[0, 2pi]``: 1/sqrt(2pi), cos(nx)/sqrt(pi), sin(nx)/sqrt(pi)."""

    def __init__(self, bandlimit: int):
        if bandlimit < 1:
            raise ValueError(f"bandlimit must be >= 1, got {bandlimit}")
        self.bandlimit = int(bandlimit)
        self.size = 2 * self.bandlimit + 1
        self.domain = Domain1D(0.0, TWO_PI, periodic=True)
        labels = [(0, 1)]
        for n in range(1, self.bandlimit + 1):
            labels += [(n, 1), (n, 2)]
        self.labels = tuple(labels)
        # degree n of every index, used by degree-dependent spectra
        self.degrees = np.array([lab[0] for lab in self.labels])

    def evaluate(self, points) -> np.ndarray:
        x = np.atleast_1d(np.asarray(points, dtype=float))
        n = np.arange(1, self.bandlimit + 1)[:, None]
        out = np.empty((self.size, x.size))
        out[0] = 1.0 / math.sqrt(TWO_PI)
        nx = n * x[None, :]
        out[1::2] = np.cos(nx) / math.sqrt(math.pi)
        out[2::2] = np.sin(nx) / math.sqrt(math.pi)
        return out

    def to_config(self) -> dict:
        return {"kind": "fourier", "bandlimit": self.bandlimit}

    def __repr__(self):
        return f"FourierBasis(bandlimit={self.bandlimit})"


def make_fourier_basis(N: int) -> FourierBasis:
    return FourierBasis(N)


def normalized_legendre(lmax: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal associated Legendre functions without Condon-Shortley phase.

    Returns ``P[l, m, i]`` for ``0 <= m <= l <= lmax`` such that
    ``P[l, m] * sqrt(2) * cos(m phi)`` (or ``P[l, 0]`` for ``m = 0``) has
    unit L2 norm on the unit sphere.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    P = np.zeros((lmax + 1, lmax + 1, x.size))
    P[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        P[m, m] = math.sqrt((2 * m + 1) / (2 * m)) * s * P[m - 1, m - 1]
    for m in range(0, lmax):
        P[m + 1, m] = math.sqrt(2 * m + 3) * x * P[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            P[l, m] = a * (x * P[l - 1, m] - b * P[l - 2, m])
    return P


def spherical_index(l: int, m: int) -> int:
    if not -l <= m <= l:
        raise ValueError(f"invalid spherical label ({l}, {m})")
    return l * l + l + m + 1


class SphericalBasis(BasisSystem):
    """Real spherical harmonics ``(1/r) Y_lm(./r)`` up to degree ``L`` on a radius-``r`` sphere.

    Ordered by degree, then order ``m = -l..l``; negative orders carry the
    sine part. Orthonormal in L2 of the radius-``r`` sphere.
    """

    def __init__(self, max_degree: int, radius: float = 1.0):
        if max_degree < 0:
            raise ValueError(f"max degree must be >= 0, got {max_degree}")
        self.max_degree = int(max_degree)
        self.radius = float(radius)
        self.domain = SphereDomain(self.radius)
        self.size = (self.max_degree + 1) ** 2
        self.labels = tuple(
            (l, m) for l in range(self.max_degree + 1) for m in range(-l, l + 1)
        )
        self.degrees = np.array([lab[0] for lab in self.labels])

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        theta, phi = pts[:, 0], pts[:, 1]
        L = self.max_degree
        P = normalized_legendre(L, np.cos(theta))
        out = np.empty((self.size, pts.shape[0]))
        root2 = math.sqrt(2.0)
        for l in range(L + 1):
            base = l * l + l
            out[base] = P[l, 0]
            for m in range(1, l + 1):
                out[base + m] = root2 * P[l, m] * np.cos(m * phi)
                out[base - m] = root2 * P[l, m] * np.sin(m * phi)
        return out / self.radius

    def to_config(self) -> dict:
        return {"kind": "spherical", "max_degree": self.max_degree, "radius": self.radius}

    def __repr__(self):
        return f"SphericalBasis(max_degree={self.max_degree}, radius={self.radius})"


def make_spherical_basis(L: int, radius: float = 1.0) -> SphericalBasis:
    return SphericalBasis(L, radius)


def basis_from_config(cfg: dict) -> BasisSystem:
    kind = cfg.get("kind")
    if kind == "fourier":
        return FourierBasis(int(cfg["bandlimit"]))
    if kind == "spherical":
        return SphericalBasis(int(cfg["max_degree"]), float(cfg.get("radius", 1.0)))
    raise ValueError(f"unknown basis kind {kind!r}")


@dataclass(frozen=True, eq=False)
class RegionQuadrature:
    """Subregion ``R`` with quadrature nodes and positive weights.

    ``kind`` is ``"interval"`` or ``"polar_cap"``; ``params`` holds what is
    needed to rebuild the region and to test membership.
    """

    nodes: np.ndarray
    weights: np.ndarray
    descriptor: str
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    @property
    def n_nodes(self) -> int:
        return len(self.weights)

    @property
    def measure(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values) -> float | np.ndarray:
        """Quadrature of sampled values; the last axis runs over nodes."""
        return np.asarray(values) @ self.weights

    def contains(self, points) -> np.ndarray:
        if self.kind == "interval":
            x = np.atleast_1d(np.asarray(points, dtype=float))
            a, b = self.params["bounds"]
            return (x >= a - _BOUND_SLACK) & (x <= b + _BOUND_SLACK)
        if self.kind == "polar_cap":
            pts = np.asarray(points, dtype=float).reshape(-1, 2)
            return pts[:, 0] <= self.params["cap_angle"] + _BOUND_SLACK
        raise ValueError(f"unknown region kind {self.kind!r}")

    def to_config(self) -> dict:
        return {"kind": self.kind, **self.params}


def simpson_weights(n_nodes: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValueError(f"composite Simpson needs an odd node count >= 3, got {n_nodes}")
    x = np.linspace(a, b, n_nodes)
    h = (b - a) / (n_nodes - 1)
    w = np.full(n_nodes, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return x, w * h / 3.0


def make_interval_region(
    domain: Domain1D, a: float, b: float, n_nodes: int = 1001, rule: str = "simpson"
) -> RegionQuadrature:
    """Interval ``[a, b]`` inside ``domain`` with composite Simpson (or Gauss-Legendre) weights."""
    if not a < b:
        raise ValueError(f"empty interval [{a}, {b}]")
    if a < domain.lower - _BOUND_SLACK or b > domain.upper + _BOUND_SLACK:
        raise ValueError(
            f"interval [{a}, {b}] leaves the domain [{domain.lower}, {domain.upper}]"
        )
    if rule == "simpson":
        x, w = simpson_weights(n_nodes, a, b)
    elif rule == "gauss":
        t, wt = np.polynomial.legendre.leggauss(n_nodes)
        x = a + (t + 1.0) * (b - a) / 2.0
        w = wt * (b - a) / 2.0
    else:
        raise ValueError(f"unknown interval rule {rule!r}")
    return RegionQuadrature(
        x,
        w,
        descriptor=f"interval [{a:.6g}, {b:.6g}], {n_nodes} {rule} nodes",
        kind="interval",
        params={
            "bounds": [float(a), float(b)],
            "domain": [domain.lower, domain.upper],
            "nodes": int(n_nodes),
            "rule": rule,
        },
    )


def make_polar_cap_region(
    radius: float, cap_angle: float, n_theta: int = 64, n_phi: int = 128
) -> RegionQuadrature:
    """Polar cap ``colatitude <= cap_angle`` on a radius-``radius`` sphere.

    Gauss-Legendre in ``cos(colatitude)`` over ``[cos(cap_angle), 1]`` times
    the periodic trapezoid rule in longitude; both factors are exact for
    products of spherical harmonics of total degree below ``2 n_theta`` and
    ``n_phi`` respectively.
    """
    if not 0.0 < cap_angle <= math.pi:
        raise ValueError(f"cap angle must lie in (0, pi], got {cap_angle}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if n_theta < 1 or n_phi < 1:
        raise ValueError("node counts must be positive")
    t, wt = np.polynomial.legendre.leggauss(n_theta)
    lo = math.cos(cap_angle)
    mu = lo + (t + 1.0) * (1.0 - lo) / 2.0
    w_mu = wt * (1.0 - lo) / 2.0
    theta = np.arccos(mu)
    phi = TWO_PI * np.arange(n_phi) / n_phi
    nodes = np.column_stack([np.repeat(theta, n_phi), np.tile(phi, n_theta)])
    weights = np.repeat(w_mu, n_phi) * (TWO_PI / n_phi) * radius**2
    return RegionQuadrature(
        nodes,
        weights,
        descriptor=f"polar cap {cap_angle:.6g} rad on radius {radius:.6g}, {n_theta}x{n_phi} nodes",
        kind="polar_cap",
        params={
            "radius": float(radius),
            "cap_angle": float(cap_angle),
            "n_theta": int(n_theta),
            "n_phi": int(n_phi),
        },
    )


def region_from_config(cfg: dict) -> RegionQuadrature:
    kind = cfg.get("kind")
    if kind == "interval":
        lo, hi = cfg.get("domain", [0.0, TWO_PI])
        a, b = cfg["bounds"]
        return make_interval_region(
            Domain1D(lo, hi), a, b, int(cfg.get("nodes", 1001)), cfg.get("rule", "simpson")
        )
    if kind == "polar_cap":
        return make_polar_cap_region(
            float(cfg.get("radius", 1.0)),
            float(cfg["cap_angle"]),
            int(cfg.get("n_theta", 64)),
            int(cfg.get("n_phi", 128)),
        )
    raise ValueError(f"unknown region kind {kind!r}")


def full_domain_quadrature(basis: BasisSystem, n_nodes: int | None = None):
    """Reference quadrature ``(points, weights)`` over the whole global domain.

    Exact for products of two basis functions of the given system.
    """
    dom = basis.domain
    if isinstance(dom, Domain1D):
        # periodic trapezoid, exact for trigonometric degree < n
        n = n_nodes or max(4 * basis.size, 64)
        x = dom.lower + dom.length * np.arange(n) / n
        return x, np.full(n, dom.length / n)
    if isinstance(dom, SphereDomain):
        L = getattr(basis, "max_degree", 0)
        nt = n_nodes or (L + 2)
        cap = make_polar_cap_region(dom.radius, math.pi, nt, 2 * nt + 2)
        return np.array(cap.nodes), np.array(cap.weights)
    raise TypeError(f"no reference quadrature for domain {dom!r}")


def as_points(basis: BasisSystem, points: Sequence | np.ndarray):
    if isinstance(basis.domain, SphereDomain):
        return np.asarray(points, dtype=float).reshape(-1, 2)
    return np.atleast_1d(np.asarray(points, dtype=float))
