"""Material data: parameters, FCC slip-system catalog, yield-stress inhomogeneities.

Base parameter values correspond to an FCC single crystal whose unit cell is
aligned with the coordinate axes. Units: MPa, mm, s throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tensors import ElasticConstants

__all__ = [
    "SlipSystem",
    "MaterialParams",
    "InhomogeneitySpec",
    "fcc_slip_catalog",
    "resolve_active_systems",
    "bump",
    "yield_reduction",
    "SLIP_PRESETS",
]

# FCC slip directions / plane normals (unnormalized integer form), indexed 1..12.
_FCC_TABLE = (
    ((-1, 1, 0), (1, 1, 1)),
    ((1, 0, -1), (1, 1, 1)),
    ((0, -1, 1), (1, 1, 1)),
    ((-1, -1, 0), (1, -1, -1)),
    ((1, 0, 1), (1, -1, -1)),
    ((0, 1, -1), (1, -1, -1)),
    ((1, 1, 0), (-1, 1, -1)),
    ((-1, 0, 1), (-1, 1, -1)),
    ((0, -1, -1), (-1, 1, -1)),
    ((1, -1, 0), (-1, -1, 1)),
    ((-1, 0, -1), (-1, -1, 1)),
    ((0, 1, 1), (-1, -1, 1)),
)

# Systems with slip direction perpendicular to the y loading axis contribute no
# Schmid stress under vertical loading and are omitted by default.
SLIP_PRESETS = {
    "default": (1, 3, 4, 6, 7, 9, 10, 12),
    "cyclic": (1, 4, 7, 10),
    "all": tuple(range(1, 13)),
}


@dataclass(frozen=True)
class SlipSystem:
    """One slip system: unit slip direction and unit slip-plane normal."""

    index: int
    s_bar: np.ndarray
    m_bar: np.ndarray

    def __post_init__(self):
        for name, v in (("s_bar", self.s_bar), ("m_bar", self.m_bar)):
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"slip system {self.index}: {name} is not unit length")
        if abs(float(self.s_bar @ self.m_bar)) > 1e-12:
            raise ValueError(f"slip system {self.index}: s_bar not orthogonal to m_bar")


def fcc_slip_catalog() -> list[SlipSystem]:
    """The 12 normalized FCC slip systems, indexed 1..12."""
    systems = []
    for idx, (s, m) in enumerate(_FCC_TABLE, start=1):
        s = np.asarray(s, dtype=np.float64)
        m = np.asarray(m, dtype=np.float64)
        systems.append(SlipSystem(idx, s / np.linalg.norm(s), m / np.linalg.norm(m)))
    return systems


def resolve_active_systems(selector) -> tuple[int, ...]:
    """Resolve a preset name or an explicit index collection to system indices."""
    if isinstance(selector, str):
        try:
            return SLIP_PRESETS[selector]
        except KeyError:
            raise ValueError(
                f"unknown slip-system preset {selector!r}; "
                f"expected one of {sorted(SLIP_PRESETS)} or explicit indices"
            ) from None
    indices = tuple(int(i) for i in selector)
    if not indices:
        raise ValueError("at least one active slip system is required")
    for i in indices:
        if not 1 <= i <= 12:
            raise ValueError(f"slip system index {i} outside 1..12")
    if len(set(indices)) != len(indices):
        raise ValueError(f"duplicate slip system indices in {indices}")
    return indices


@dataclass
class MaterialParams:
    """All constitutive constants plus the active slip-system table.

    Defaults are the base single-crystal parameter set (bulk modulus
    71660 MPa, shear modulus 27260 MPa converted to the Lame pair).
    """

    elastic: ElasticConstants = field(
        default_factory=lambda: ElasticConstants.from_bulk_shear(71660.0, 27260.0)
    )
    tau_y: float = 345.0          # initial yield stress (MPa)
    H: float = 250.0              # isotropic hardening modulus (MPa)
    Hg: float = 1000.0            # gradient hardening modulus (MPa)
    lg: float = 4.0               # gradient hardening length scale (mm)
    t_star: float = 1.0           # viscoplastic relaxation time (s)
    sigma_d: float = 500.0        # viscoplastic drag stress (MPa)
    m_exp: float = 8.0            # viscoplastic exponent (-)
    Gd_over_l0: float = 300.0     # effective fracture energy G0d/l0 (N/mm^2)
    l0: float = 0.5               # phase-field length scale (mm)
    alpha_pen: float = 60000.0    # micromorphic penalty alpha (N/mm^2)
    eps_p_crit: float = 0.1       # critical plastic strain (-)
    n_exp: float = 2.0            # degradation exponent (-)
    active_systems: tuple[int, ...] = SLIP_PRESETS["default"]

    def __post_init__(self):
        self.active_systems = resolve_active_systems(self.active_systems)
        positive = {
            "tau_y": self.tau_y,
            "H": self.H,
            "Hg": self.Hg,
            "t_star": self.t_star,
            "sigma_d": self.sigma_d,
            "Gd_over_l0": self.Gd_over_l0,
            "l0": self.l0,
            "alpha_pen": self.alpha_pen,
            "eps_p_crit": self.eps_p_crit,
            "n_exp": self.n_exp,
        }
        for name, value in positive.items():
            if value <= 0.0:
                raise ValueError(f"material parameter {name} must be positive, got {value}")
        if self.lg < 0.0:
            raise ValueError(f"material parameter lg must be nonnegative, got {self.lg}")
        if self.m_exp < 1.0:
            raise ValueError(f"viscoplastic exponent m_exp must be >= 1, got {self.m_exp}")
        catalog = fcc_slip_catalog()
        self.slip_systems = [catalog[i - 1] for i in self.active_systems]
        self.slip_dirs = np.ascontiguousarray([s.s_bar for s in self.slip_systems])
        self.slip_normals = np.ascontiguousarray([s.m_bar for s in self.slip_systems])

    @property
    def n_systems(self) -> int:
        return len(self.active_systems)

    @property
    def hg_lg2(self) -> float:
        """Combined gradient-hardening coefficient Hg * lg^2 (MPa mm^2)."""
        return self.Hg * self.lg**2

    @property
    def grad_coeff(self) -> float:
        """Coefficient G0d * l0 of the phase-field gradient term (N)."""
        return self.Gd_over_l0 * self.l0**2


@dataclass(frozen=True)
class InhomogeneitySpec:
    """Spherical yield-stress reduction around a point (center in mm)."""

    center: tuple[float, ...]
    r_red: float = 4.0
    max_reduction: float = 0.95

    def __post_init__(self):
        if self.r_red <= 0.0:
            raise ValueError(f"inhomogeneity radius must be positive, got {self.r_red}")
        if not 0.0 <= self.max_reduction < 1.0:
            raise ValueError(
                f"max_reduction must be in [0, 1), got {self.max_reduction}"
            )


def bump(x: float) -> float:
    """Smooth bump: 1 for x -> 0+, 0 for x >= 1, b(x) + b(1-x) = 1 on (0, 1)."""
    if x <= 0.0:
        return 1.0
    if x >= 1.0:
        return 0.0
    ea = math.exp(-1.0 / x)
    eb = math.exp(-1.0 / (1.0 - x))
    return 1.0 - ea / (ea + eb)


def yield_reduction(x, specs, tau_y: float) -> float:
    """Reduced yield stress at coordinate ``x``; multiple specs combine by minimum."""
    x = np.asarray(x, dtype=np.float64)
    tau = tau_y
    for spec in specs:
        center = np.asarray(spec.center, dtype=np.float64)
        if center.shape != x.shape:
            raise ValueError(
                f"inhomogeneity center dimension {center.shape} does not match "
                f"coordinate dimension {x.shape}"
            )
        dist = float(np.linalg.norm(x - center))
        tau = min(tau, (1.0 - spec.max_reduction * bump(dist / spec.r_red)) * tau_y)
    return tau
