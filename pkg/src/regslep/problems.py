"""Ready-made problem instances: the two circle experiments and spherical continuation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    DiagonalOperator,
    couple,
    identity_operator,
    reciprocal_degree_operator,
    upward_continuation_operator,
)
from .slepian import SlepianSystem, build_slepian_system
from .spaces import (
    Domain1D,
    FourierBasis,
    RegionQuadrature,
    SphereDomain,
    make_interval_region,
    make_polar_cap_region,
)

DEFAULT_THRESHOLD = 1e-3
HALF_CIRCLE = (0.5 * math.pi, 1.5 * math.pi)
EARTH_RADIUS = 6371.0
SATELLITE_RADIUS = 6771.0


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    operator: DiagonalOperator
    region: RegionQuadrature
    default_threshold: float = DEFAULT_THRESHOLD
    notes: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        dom = self.operator.v_basis.domain
        if self.region.kind == "interval":
            ok = isinstance(dom, Domain1D)
        else:
            ok = isinstance(dom, SphereDomain) and math.isclose(
                dom.radius, self.region.params["radius"]
            )
        if not ok:
            raise ValueError(f"region {self.region.descriptor} does not live on {dom}")

    def build(self, threshold_ratio: float | None = None) -> SlepianSystem:
        t = self.default_threshold if threshold_ratio is None else threshold_ratio
        return build_slepian_system(self.operator, self.region, t)

    @property
    def is_coupled(self) -> bool:
        return self.operator.kind == "coupled"

    def evaluation_points(self, count: int = 401) -> np.ndarray:
        """Equidistant grid over the whole domain of ``X``.

        Circle: ``count`` points on ``[0, 2pi]``. Sphere: ``count``
        colatitudes on ``[0, pi]`` times ``2 count`` longitudes.
        """
        dom = self.operator.u_basis.domain
        if isinstance(dom, Domain1D):
            return np.linspace(dom.lower, dom.upper, count)
        if isinstance(dom, SphereDomain):
            theta = np.linspace(0.0, math.pi, count)
            phi = 2.0 * math.pi * np.arange(2 * count) / (2 * count)
            return np.column_stack([np.repeat(theta, phi.size), np.tile(phi, count)])
        raise ValueError(f"problem {self.name!r} has no single-domain evaluation grid")

    def to_config(self) -> dict:
        return {"problem": self.name, **self.params}


def _circle_region(region_nodes: int, bounds, rule: str) -> RegionQuadrature:
    a, b = bounds
    return make_interval_region(Domain1D(), a, b, region_nodes, rule)


def circle_identity(
    N: int = 50, region_nodes: int = 1001, bounds=HALF_CIRCLE, rule: str = "simpson"
) -> ProblemInstance:
    """Approximation problem on the circle: ``T = Id`` with the Fourier system."""
    basis = FourierBasis(N)
    return ProblemInstance(
        "identity",
        identity_operator(basis),
        _circle_region(region_nodes, bounds, rule),
        notes="T = Id on L2[0, 2pi]; data on a sub-interval",
        params={"N": N, "region_nodes": region_nodes, "bounds": list(bounds), "rule": rule},
    )


def circle_ill_posed(
    N: int = 50, region_nodes: int = 1001, bounds=HALF_CIRCLE, rule: str = "simpson"
) -> ProblemInstance:
    """Inverse problem on the circle with ``sigma_{n,j} = 1/(n+1)``."""
    basis = FourierBasis(N)
    return ProblemInstance(
        "ill_posed",
        reciprocal_degree_operator(basis),
        _circle_region(region_nodes, bounds, rule),
        notes="sigma_{n,j} = 1/(n+1) on L2[0, 2pi]; data on a sub-interval",
        params={"N": N, "region_nodes": region_nodes, "bounds": list(bounds), "rule": rule},
    )


def sphere_downward_continuation(
    L: int = 10,
    r_p: float = EARTH_RADIUS,
    r_s: float = SATELLITE_RADIUS,
    cap_angle: float = math.pi / 3,
    n_theta: int = 64,
    n_phi: int = 128,
) -> ProblemInstance:
    """Potential on the radius-``r_p`` sphere from data on a polar cap at radius ``r_s``."""
    if L < 0:
        raise ValueError(f"max degree must be >= 0, got {L}")
    if not 0 < r_p < r_s:
        raise ValueError(f"downward continuation needs 0 < r_p < r_s, got r_p={r_p}, r_s={r_s}")
    return ProblemInstance(
        "downward",
        upward_continuation_operator(L, r_p, r_s),
        make_polar_cap_region(r_s, cap_angle, n_theta, n_phi),
        notes="sigma_{l,m} = (r_p/r_s)^l; polar-cap data on the satellite sphere",
        params={
            "L": L,
            "r_p": r_p,
            "r_s": r_s,
            "cap_angle": cap_angle,
            "n_theta": n_theta,
            "n_phi": n_phi,
        },
    )


def coupled_fields(
    L: int = 5,
    r_p: float = EARTH_RADIUS,
    r_s: float = SATELLITE_RADIUS,
    r_e: float = 2.0 * SATELLITE_RADIUS,
    cap_angle: float = math.pi / 3,
    layout: str = "concatenated",
    L_external: int | None = None,
    n_theta: int = 64,
    n_phi: int = 128,
) -> ProblemInstance:
    """Internal plus external potential sources seen on a polar cap at radius ``r_s``."""
    if not 0 < r_p < r_s < r_e:
        raise ValueError(f"need 0 < r_p < r_s < r_e, got {r_p}, {r_s}, {r_e}")
    L_ext = L if L_external is None else L_external
    internal = upward_continuation_operator(L, r_p, r_s)
    external = upward_continuation_operator(L_ext, r_s, r_e, exponent_shift=1)
    return ProblemInstance(
        "coupled",
        couple(internal, external, layout),
        make_polar_cap_region(r_s, cap_angle, n_theta, n_phi),
        notes="internal (r_p/r_s)^l and external (r_s/r_e)^(l+1) fields",
        params={
            "L": L,
            "L_external": L_ext,
            "r_p": r_p,
            "r_s": r_s,
            "r_e": r_e,
            "cap_angle": cap_angle,
            "layout": layout,
            "n_theta": n_theta,
            "n_phi": n_phi,
        },
    )


PROBLEMS = {
    "identity": circle_identity,
    "ill_posed": circle_ill_posed,
    "downward": sphere_downward_continuation,
    "coupled": coupled_fields,
}


def problem_from_config(cfg: dict) -> ProblemInstance:
    """Build an instance from ``{"problem": name, **parameters}``."""
    cfg = dict(cfg)
    name = cfg.pop("problem", None)
    if name not in PROBLEMS:
        raise ValueError(f"unknown problem {name!r}, expected one of {sorted(PROBLEMS)}")
    if "bounds" in cfg:
        cfg["bounds"] = tuple(cfg["bounds"])
    return PROBLEMS[name](**cfg)
