"""Finite-strain kinematics and Neo-Hookean stress measures.

All tensors are dense 3x3 float64 arrays, also for plane-strain runs (the
kinematic restriction lives in the FEM layer, not here). Units: stresses and
energy densities in MPa (= N/mm^2), lengths in mm.

The ``nb_*`` functions are numba-compiled building blocks shared with the
point-level constitutive kernels; the public functions wrap them with input
checks and typed errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "DegenerateKinematicsError",
    "ElasticConstants",
    "elastic_cauchy_green",
    "neo_hookean_energy",
    "elastic_second_pk",
    "mandel_stress",
    "first_pk",
]

IDENTITY = np.eye(3)


class DegenerateKinematicsError(ValueError):
    """Raised when a deformation state has a non-positive Jacobian.

    Carries an optional ``point`` attribute identifying the quadrature point
    at which the state became degenerate.
    """

    def __init__(self, message: str, point: int | None = None):
        super().__init__(message if point is None else f"{message} (point {point})")
        self.point = point


@dataclass(frozen=True)
class ElasticConstants:
    """Isotropic Lame pair: shear modulus ``mu`` and first constant ``lam`` (MPa)."""

    mu: float
    lam: float

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ValueError(f"shear modulus must be positive, got mu={self.mu}")
        if self.lam + 2.0 * self.mu / 3.0 <= 0.0:
            raise ValueError(
                f"bulk modulus must be positive, got lam={self.lam}, mu={self.mu}"
            )

    @classmethod
    def from_bulk_shear(cls, bulk: float, shear: float) -> "ElasticConstants":
        """Convert a (bulk, shear) pair to the stored Lame pair, lam = kappa - 2 mu / 3."""
        return cls(mu=shear, lam=bulk - 2.0 * shear / 3.0)


# ---------------------------------------------------------------------------
# numba building blocks (no checks; callers guarantee validity)
# ---------------------------------------------------------------------------


@njit(cache=True)
def nb_det3(a):
    return (
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


@njit(cache=True)
def nb_inv3(a):
    inv = np.empty((3, 3))
    det = nb_det3(a)
    inv[0, 0] = a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    inv[0, 1] = a[0, 2] * a[2, 1] - a[0, 1] * a[2, 2]
    inv[0, 2] = a[0, 1] * a[1, 2] - a[0, 2] * a[1, 1]
    inv[1, 0] = a[1, 2] * a[2, 0] - a[1, 0] * a[2, 2]
    inv[1, 1] = a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
    inv[1, 2] = a[0, 2] * a[1, 0] - a[0, 0] * a[1, 2]
    inv[2, 0] = a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]
    inv[2, 1] = a[0, 1] * a[2, 0] - a[0, 0] * a[2, 1]
    inv[2, 2] = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    return inv / det


@njit(cache=True)
def nb_elastic_cauchy_green(F, Fp_inv):
    Fe = F @ Fp_inv
    return Fe.T @ Fe


@njit(cache=True)
def nb_neo_hookean_energy(Ce, mu, lam):
    det = nb_det3(Ce)
    if det <= 0.0:
        return np.nan
    ln_je = 0.5 * np.log(det)
    return 0.5 * mu * (Ce[0, 0] + Ce[1, 1] + Ce[2, 2] - 3.0) - mu * ln_je + 0.5 * lam * ln_je**2


@njit(cache=True)
def nb_elastic_second_pk(Ce, mu, lam):
    det = nb_det3(Ce)
    ln_je = 0.5 * np.log(det)
    Ce_inv = nb_inv3(Ce)
    Se = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            eye = 1.0 if i == j else 0.0
            Se[i, j] = mu * (eye - Ce_inv[i, j]) + lam * ln_je * Ce_inv[i, j]
    return Se


@njit(cache=True)
def nb_dse_dce_contract(Ce_inv, ln_je, dCe, mu, lam):
    """Directional derivative of the second PK stress along a Ce increment."""
    CdC = Ce_inv @ dCe
    tr = CdC[0, 0] + CdC[1, 1] + CdC[2, 2]
    return (mu - lam * ln_je) * (CdC @ Ce_inv) + 0.5 * lam * tr * Ce_inv


@njit(cache=True)
def nb_first_pk(F, Fp_inv, Se, ge):
    Fe = F @ Fp_inv
    return ge * (Fe @ Se @ Fp_inv.T)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def _as_tensor(a, name: str) -> np.ndarray:
    t = np.ascontiguousarray(a, dtype=np.float64)
    if t.shape != (3, 3):
        raise ValueError(f"{name} must be a 3x3 tensor, got shape {t.shape}")
    return t


def elastic_cauchy_green(F, Fp_inv, point: int | None = None) -> np.ndarray:
    """Elastic Cauchy-Green tensor Ce = Fe^T Fe with Fe = F Fp_inv.

    Raises
    ------
    DegenerateKinematicsError
        If F or Fp_inv has a non-positive determinant.
    """
    F = _as_tensor(F, "F")
    Fp_inv = _as_tensor(Fp_inv, "Fp_inv")
    if nb_det3(F) <= 0.0:
        raise DegenerateKinematicsError("det(F) <= 0", point)
    if nb_det3(Fp_inv) <= 0.0:
        raise DegenerateKinematicsError("det(Fp_inv) <= 0", point)
    return nb_elastic_cauchy_green(F, Fp_inv)


def neo_hookean_energy(Ce, c: ElasticConstants, point: int | None = None) -> float:
    """Undamaged elastic energy density mu/2 (tr Ce - 3) - mu ln Je + lam/2 (ln Je)^2."""
    Ce = _as_tensor(Ce, "Ce")
    if nb_det3(Ce) <= 0.0:
        raise DegenerateKinematicsError("det(Ce) <= 0", point)
    return float(nb_neo_hookean_energy(Ce, c.mu, c.lam))


def elastic_second_pk(Ce, c: ElasticConstants, point: int | None = None) -> np.ndarray:
    """Elastic second Piola-Kirchhoff stress Se = mu (I - Ce^-1) + lam ln(Je) Ce^-1."""
    Ce = _as_tensor(Ce, "Ce")
    if nb_det3(Ce) <= 0.0:
        raise DegenerateKinematicsError("det(Ce) <= 0", point)
    return nb_elastic_second_pk(Ce, c.mu, c.lam)


def mandel_stress(Ce, Se) -> np.ndarray:
    """Mandel stress Me = Ce Se (intermediate-configuration stress measure)."""
    return _as_tensor(Ce, "Ce") @ _as_tensor(Se, "Se")


def first_pk(F, Fp_inv, Se, ge: float) -> np.ndarray:
    """First Piola-Kirchhoff stress P = ge Fe Se Fp_inv^T with Fe = F Fp_inv.

    ``ge`` is the elastic degradation factor in (0, 1].
    """
    if not 0.0 < ge <= 1.0:
        raise ValueError(f"degradation factor must be in (0, 1], got {ge}")
    return nb_first_pk(_as_tensor(F, "F"), _as_tensor(Fp_inv, "Fp_inv"), _as_tensor(Se, "Se"), ge)
