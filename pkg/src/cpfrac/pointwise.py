"""Material-point model: degradation, yield, local solves, consistent tangents.

The two local residuals of the staggered scheme live here. Within set 1 the
slip increments are solved by a semi-smooth Newton method with the local
phase field frozen; within set 2 the local phase field is found as the root
of its scalar residual with the plastic state frozen, followed by the
irreversibility clamp phi_{n+1} = max(phi_tilde, phi_n).

Sign convention for slip: the sign of each resolved Schmid stress is fixed
from the elastic trial stress and held through the local iteration.

Hot paths are numba kernels over plain float64 arrays; the public functions
wrap them in small dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .materials import MaterialParams
from .tensors import (
    nb_det3,
    nb_dse_dce_contract,
    nb_elastic_second_pk,
    nb_inv3,
    nb_neo_hookean_energy,
)

__all__ = [
    "PointState",
    "LocalInput",
    "LocalOutput",
    "LocalSolveError",
    "FullyDegradedError",
    "degradation_ge",
    "schmid_stresses",
    "kappa",
    "yield_value",
    "local_plastic_solve",
    "local_phasefield_solve",
    "dissipation_increment",
    "GE_FLOOR",
    "PHI_CAP",
    "LOCAL_TOL",
    "STATUS_OK",
    "STATUS_NO_CONVERGENCE",
    "STATUS_DEGENERATE",
]

GE_FLOOR = 1.0e-8          # keeps tau/ge and the local Jacobian finite
PHI_CAP = 1.0 - 1.0e-6     # local phase field is capped strictly below 1
LOCAL_TOL = 1.0e-8         # residual norm tolerance of the local Newton solves
LOCAL_MAX_ITER = 50
_MACAULAY_CAP = 1.0e30     # overflow guard on <Phi/sigma_d> during iteration

STATUS_OK = 0
STATUS_NO_CONVERGENCE = 1
STATUS_DEGENERATE = 2


class LocalSolveError(RuntimeError):
    """Local Newton failure; carries the point id and last residual norm."""

    def __init__(self, point: int, residual_norm: float, message: str = ""):
        self.point = point
        self.residual_norm = residual_norm
        super().__init__(
            message
            or f"local solve failed at point {point} (residual norm {residual_norm:.3e})"
        )


class FullyDegradedError(ValueError):
    """Raised when the local phase field reaches or exceeds one."""


@dataclass
class PointState:
    """Committed per-quadrature-point history."""

    Fp_inv: np.ndarray
    k: np.ndarray
    eps_p: float = 0.0
    phi: float = 0.0

    @classmethod
    def virgin(cls, n_systems: int) -> "PointState":
        return cls(Fp_inv=np.eye(3), k=np.zeros(n_systems))

    def copy(self) -> "PointState":
        return PointState(self.Fp_inv.copy(), self.k.copy(), self.eps_p, self.phi)


@dataclass
class LocalInput:
    """Point-level drivers for one step: deformation gradient, slip-directional
    g-field gradients chi_alpha = s_alpha . grad(g_alpha), global phase field
    value d, and the time increment."""

    F: np.ndarray
    chi: np.ndarray
    d: float
    dt: float

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"time increment must be positive, got dt={self.dt}")


@dataclass
class LocalOutput:
    """Converged set-1 results: stress, multipliers, new state and tangents."""

    P: np.ndarray
    dlam: np.ndarray
    state_new: PointState
    dP_dF: np.ndarray         # (3,3,3,3)
    dP_dchi: np.ndarray       # (n_sys,3,3)
    dk_dF: np.ndarray         # (n_sys,3,3)
    dk_dchi: np.ndarray       # (n_sys,n_sys)
    psi_e: float
    ge: float
    tau: np.ndarray
    kappa: np.ndarray
    diss_inc: float
    iterations: int
    degraded: bool


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def nb_degradation(phi, eps_p_prev, eps_p_crit, n_exp):
    if eps_p_prev <= 0.0:
        return 1.0
    expo = 2.0 * (eps_p_prev / eps_p_crit) ** n_exp
    return (1.0 - phi) ** expo


@njit(cache=True)
def _macaulay_pow(y, m_exp):
    if y <= 0.0:
        return 0.0
    if y > _MACAULAY_CAP:
        y = _MACAULAY_CAP
    return y**m_exp


@njit(cache=True)
def _schmid_all(Me, sdir, snrm, tau):
    na = sdir.shape[0]
    for a in range(na):
        acc = 0.0
        for i in range(3):
            for j in range(3):
                acc += Me[i, j] * sdir[a, i] * snrm[a, j]
        tau[a] = acc


@njit(cache=True)
def _plastic_residual(dlam, F, Fpinv_n, Ce_tr, k_n, chi, sgn, ge, dt,
                      mu, lam, tau_y, H, hg_lg2, t_star, sigma_d, m_exp,
                      sdir, snrm):
    """Evaluate the slip residual and the full state at given increments.

    Returns (ok, A, Ce, Ce_inv, ln_je, Se, Me, tau, Phi, R).
    """
    na = dlam.shape[0]
    A = np.eye(3)
    for a in range(na):
        c = dlam[a] * sgn[a] / ge
        for i in range(3):
            for j in range(3):
                A[i, j] -= c * sdir[a, i] * snrm[a, j]
    Ce = A.T @ Ce_tr @ A
    det = nb_det3(Ce)
    tau = np.empty(na)
    Phi = np.empty(na)
    R = np.empty(na)
    if det <= 1.0e-12 or not np.isfinite(det):
        return False, A, Ce, Ce, 0.0, Ce, Ce, tau, Phi, R
    ln_je = 0.5 * np.log(det)
    Ce_inv = nb_inv3(Ce)
    Se = nb_elastic_second_pk(Ce, mu, lam)
    Me = Ce @ Se
    _schmid_all(Me, sdir, snrm, tau)
    for a in range(na):
        kap = -H * (k_n[a] - dlam[a]) + hg_lg2 * chi[a]
        Phi[a] = sgn[a] * tau[a] / ge - tau_y - kap
        R[a] = dlam[a] - (dt / t_star) * _macaulay_pow(Phi[a] / sigma_d, m_exp)
    return True, A, Ce, Ce_inv, ln_je, Se, Me, tau, Phi, R


@njit(cache=True)
def _dce_ddlam(Ce_tr, A, sdir, snrm, sgn, ge, b):
    """d(Ce)/d(dlam_b) = -B_b^T Ce_tr A - A^T Ce_tr B_b with B_b = sgn_b/ge s_b x m_b."""
    w = Ce_tr @ A
    dCe = np.empty((3, 3))
    c = sgn[b] / ge
    for i in range(3):
        for j in range(3):
            # (B_b^T w)_{ij} = c m_b[i] s_b . w[:,j]; second term is its transpose
            acc1 = 0.0
            acc2 = 0.0
            for r in range(3):
                acc1 += sdir[b, r] * w[r, j]
                acc2 += sdir[b, r] * w[r, i]
            dCe[i, j] = -c * (snrm[b, i] * acc1 + snrm[b, j] * acc2)
    return dCe


@njit(cache=True)
def nb_plastic_point(F, Fpinv_n, k_n, eps_p_n, phi, chi, dt,
                     mu, lam, tau_y, H, hg_lg2, t_star, sigma_d, m_exp,
                     eps_p_crit, n_exp, sdir, snrm, want_tangent):
    """Backward-Euler local solve of the slip increments with frozen phi.

    Returns (status, iterations, residual_norm, degraded, P, Fpinv, k, eps_p,
    dlam, psi_e, ge, tau, kap, diss, dP_dF, dP_dchi, dk_dF, dk_dchi).
    """
    na = sdir.shape[0]
    dlam = np.zeros(na)
    dP_dF = np.zeros((3, 3, 3, 3))
    dP_dchi = np.zeros((na, 3, 3))
    dk_dF = np.zeros((na, 3, 3))
    dk_dchi = np.zeros((na, na))
    kap = np.empty(na)

    ge = nb_degradation(phi, eps_p_n, eps_p_crit, n_exp)
    degraded = ge < GE_FLOOR
    if degraded:
        ge = GE_FLOOR

    Fe_tr = F @ Fpinv_n
    Ce_tr = Fe_tr.T @ Fe_tr
    det_tr = nb_det3(Ce_tr)
    if det_tr <= 1.0e-12 or not np.isfinite(det_tr):
        return (STATUS_DEGENERATE, 0, np.inf, degraded, Ce_tr, Fpinv_n.copy(),
                k_n.copy(), eps_p_n, dlam, 0.0, ge, np.zeros(na), kap, 0.0,
                dP_dF, dP_dchi, dk_dF, dk_dchi)

    Se_tr = nb_elastic_second_pk(Ce_tr, mu, lam)
    Me_tr = Ce_tr @ Se_tr
    tau_tr = np.empty(na)
    _schmid_all(Me_tr, sdir, snrm, tau_tr)
    sgn = np.empty(na)
    active = np.zeros(na, dtype=np.bool_)
    n_active = 0
    for a in range(na):
        sgn[a] = 1.0 if tau_tr[a] >= 0.0 else -1.0
        phi_tr = abs(tau_tr[a]) / ge - tau_y - (-H * k_n[a] + hg_lg2 * chi[a])
        if phi_tr > 0.0:
            active[a] = True
            n_active += 1

    iterations = 0
    res_norm = 0.0
    if n_active == 0:
        # elastic step
        A = np.eye(3)
        Ce = Ce_tr
        Ce_inv = nb_inv3(Ce)
        ln_je = 0.5 * np.log(nb_det3(Ce))
        Se = Se_tr
        tau = tau_tr
        for a in range(na):
            kap[a] = -H * k_n[a] + hg_lg2 * chi[a]
    else:
        ok, A, Ce, Ce_inv, ln_je, Se, Me, tau, Phi, R = _plastic_residual(
            dlam, F, Fpinv_n, Ce_tr, k_n, chi, sgn, ge, dt,
            mu, lam, tau_y, H, hg_lg2, t_star, sigma_d, m_exp, sdir, snrm)
        res_norm = np.sqrt(np.sum(R * R))
        converged = False
        while iterations < LOCAL_MAX_ITER:
            # always take at least one step so that arbitrarily small positive
            # overstress still yields a nonzero increment
            if res_norm <= LOCAL_TOL and iterations > 0:
                # release any system whose yield value turned positive
                released = False
                for a in range(na):
                    if not active[a] and Phi[a] > 0.0:
                        active[a] = True
                        n_active += 1
                        released = True
                if not released:
                    converged = True
                    break
            iterations += 1
            idx = np.empty(n_active, dtype=np.int64)
            c = 0
            for a in range(na):
                if active[a]:
                    idx[c] = a
                    c += 1
            # Jacobian on the active set
            J = np.empty((n_active, n_active))
            for jb in range(n_active):
                b = idx[jb]
                dCe = _dce_ddlam(Ce_tr, A, sdir, snrm, sgn, ge, b)
                dSe = nb_dse_dce_contract(Ce_inv, ln_je, dCe, mu, lam)
                dMe = dCe @ Se + Ce @ dSe
                for ja in range(n_active):
                    a = idx[ja]
                    dtau = 0.0
                    for i in range(3):
                        for j in range(3):
                            dtau += dMe[i, j] * sdir[a, i] * snrm[a, j]
                    dphi = sgn[a] * dtau / ge - (H if a == b else 0.0)
                    y = Phi[a] / sigma_d
                    fac = 0.0
                    if y > 0.0:
                        yy = y if y < _MACAULAY_CAP else _MACAULAY_CAP
                        fac = (dt / t_star) * m_exp * yy ** (m_exp - 1.0) / sigma_d
                    J[ja, jb] = (1.0 if a == b else 0.0) - fac * dphi
            rhs = np.empty(n_active)
            for ja in range(n_active):
                rhs[ja] = -R[idx[ja]]
            delta = np.linalg.solve(J, rhs)
            # full Newton step with backtracking on residual growth / invalid state
            step = 1.0
            cand = np.empty(na)
            accepted = False
            for _ in range(12):
                for a in range(na):
                    cand[a] = dlam[a]
                for ja in range(n_active):
                    cand[idx[ja]] += step * delta[ja]
                    if cand[idx[ja]] < 0.0:
                        cand[idx[ja]] = 0.0
                ok, A2, Ce2, Ce_inv2, ln_je2, Se2, Me2, tau2, Phi2, R2 = _plastic_residual(
                    cand, F, Fpinv_n, Ce_tr, k_n, chi, sgn, ge, dt,
                    mu, lam, tau_y, H, hg_lg2, t_star, sigma_d, m_exp, sdir, snrm)
                if ok:
                    new_norm = np.sqrt(np.sum(R2 * R2))
                    if np.isfinite(new_norm) and (new_norm < res_norm or step <= 1.0 / 2048.0):
                        for a in range(na):
                            dlam[a] = cand[a]
                        A, Ce, Ce_inv, ln_je = A2, Ce2, Ce_inv2, ln_je2
                        Se, Me, tau, Phi, R = Se2, Me2, tau2, Phi2, R2
                        res_norm = new_norm
                        accepted = True
                        break
                step *= 0.5
            if not accepted:
                break
        if not converged:
            return (STATUS_NO_CONVERGENCE, iterations, res_norm, degraded, Ce_tr,
                    Fpinv_n.copy(), k_n.copy(), eps_p_n, dlam, 0.0, ge, tau_tr,
                    kap, 0.0, dP_dF, dP_dchi, dk_dF, dk_dchi)
        for a in range(na):
            kap[a] = -H * (k_n[a] - dlam[a]) + hg_lg2 * chi[a]

    # committed-trial state and stress
    Fpinv = Fpinv_n @ A
    k_new = k_n - dlam
    eps_p_new = eps_p_n + np.sqrt(np.sum(dlam * dlam))
    G = Fpinv
    FG = F @ G
    P = ge * (FG @ Se @ G.T)
    psi_e = nb_neo_hookean_energy(Ce, mu, lam)

    # dissipation increment of the set-1 update at frozen phi
    diss = 0.0
    for a in range(na):
        diss += dlam[a] * (sgn[a] * tau[a] / ge - kap[a])
    ge1 = nb_degradation(phi, eps_p_new, eps_p_crit, n_exp)
    ge0 = nb_degradation(phi, eps_p_n, eps_p_crit, n_exp)
    diss -= (ge1 - ge0) * psi_e

    if want_tangent:
        GSeGt = G @ Se @ G.T
        idx = np.empty(na, dtype=np.int64)
        n_act = 0
        for a in range(na):
            if n_active > 0 and active[a]:
                idx[n_act] = a
                n_act += 1
        dR_dF = np.zeros((n_act, 9))
        dP_dlam = np.zeros((n_act, 3, 3))
        fac = np.zeros(na)
        for ja in range(n_act):
            a = idx[ja]
            phi_a = sgn[a] * tau[a] / ge - tau_y - kap[a]
            y = phi_a / sigma_d
            if y > 0.0:
                yy = y if y < _MACAULAY_CAP else _MACAULAY_CAP
                fac[a] = (dt / t_star) * m_exp * yy ** (m_exp - 1.0) / sigma_d
        # partial dP/dF and dR/dF at frozen dlam, column by column of dF
        for ia in range(3):
            for ib in range(3):
                # dCe = G^T (dF^T F + F^T dF) G for dF = e_ia x e_ib
                M1 = np.zeros((3, 3))
                for j in range(3):
                    M1[ib, j] += F[ia, j]
                    M1[j, ib] += F[ia, j]
                dCe = G.T @ M1 @ G
                dSe = nb_dse_dce_contract(Ce_inv, ln_je, dCe, mu, lam)
                dP = ge * (FG @ dSe @ G.T)
                for j in range(3):
                    dP[ia, j] += ge * GSeGt[ib, j]
                for i in range(3):
                    for j in range(3):
                        dP_dF[i, j, ia, ib] = dP[i, j]
                if n_act > 0:
                    dMe = dCe @ Se + Ce @ dSe
                    for ja in range(n_act):
                        a = idx[ja]
                        dtau = 0.0
                        for i in range(3):
                            for j in range(3):
                                dtau += dMe[i, j] * sdir[a, i] * snrm[a, j]
                        dR_dF[ja, 3 * ia + ib] = -fac[a] * sgn[a] * dtau / ge
        if n_act > 0:
            # Jacobian on the active set at the converged state
            J = np.empty((n_act, n_act))
            for jb in range(n_act):
                b = idx[jb]
                dCe = _dce_ddlam(Ce_tr, A, sdir, snrm, sgn, ge, b)
                dSe = nb_dse_dce_contract(Ce_inv, ln_je, dCe, mu, lam)
                dMe = dCe @ Se + Ce @ dSe
                dG = Fpinv_n @ np.outer(sdir[b], snrm[b]) * (-sgn[b] / ge)
                dP = ge * (F @ dG @ Se @ G.T + FG @ dSe @ G.T + FG @ Se @ dG.T)
                for i in range(3):
                    for j in range(3):
                        dP_dlam[jb, i, j] = dP[i, j]
                for ja in range(n_act):
                    a = idx[ja]
                    dtau = 0.0
                    for i in range(3):
                        for j in range(3):
                            dtau += dMe[i, j] * sdir[a, i] * snrm[a, j]
                    dphi = sgn[a] * dtau / ge - (H if a == b else 0.0)
                    J[ja, jb] = (1.0 if a == b else 0.0) - fac[a] * dphi
            # implicit function theorem: d(dlam)/dx = -J^{-1} dR/dx;
            # dR_a/dchi_b = +fac_a hg_lg2 delta_ab (kappa stiffens with chi)
            rhs = np.empty((n_act, 9 + n_act))
            for ja in range(n_act):
                for col in range(9):
                    rhs[ja, col] = -dR_dF[ja, col]
                for jb in range(n_act):
                    rhs[ja, 9 + jb] = -fac[idx[ja]] * hg_lg2 if ja == jb else 0.0
            sens = np.linalg.solve(J, rhs)
            for ja in range(n_act):
                a = idx[ja]
                for ia in range(3):
                    for ib in range(3):
                        dk_dF[a, ia, ib] = -sens[ja, 3 * ia + ib]
                for jb in range(n_act):
                    dk_dchi[a, idx[jb]] = -sens[ja, 9 + jb]
            for ia in range(3):
                for ib in range(3):
                    for jb in range(n_act):
                        s = sens[jb, 3 * ia + ib]
                        for i in range(3):
                            for j in range(3):
                                dP_dF[i, j, ia, ib] += dP_dlam[jb, i, j] * s
            for jc in range(n_act):
                c = idx[jc]
                for jb in range(n_act):
                    s = sens[jb, 9 + jc]
                    for i in range(3):
                        for j in range(3):
                            dP_dchi[c, i, j] += dP_dlam[jb, i, j] * s

    return (STATUS_OK, iterations, res_norm, degraded, P, Fpinv, k_new,
            eps_p_new, dlam, psi_e, ge, tau, kap, diss,
            dP_dF, dP_dchi, dk_dF, dk_dchi)


@njit(cache=True)
def nb_phasefield_point(psi_e, eps_p, d, phi_n, eps_p_crit, n_exp, gd_l0, alpha):
    """Root of the local phase-field residual on [0, cap], clamped irreversibly.

    Returns (phi_new, phi_tilde, no_root) where no_root flags a fully
    degraded point (residual positive on the whole admissible interval).
    """
    e2 = 0.0
    if eps_p > 0.0:
        e2 = 2.0 * (eps_p / eps_p_crit) ** n_exp
    cap = PHI_CAP

    f0 = e2 * psi_e + alpha * d
    if f0 <= 0.0:
        tilde = 0.0
        phi_new = tilde if tilde > phi_n else phi_n
        return phi_new, tilde, False

    hi = cap
    no_root = False
    if 0.0 < e2 < 1.0 and psi_e > 0.0:
        # driving term diverges at phi -> 1; the residual is convex with an
        # interior minimum, so bracket the first (stable) root
        r = (gd_l0 + alpha) / (e2 * (1.0 - e2) * psi_e)
        xstar = 1.0 - r ** (1.0 / (e2 - 2.0))
        if xstar <= 0.0:
            no_root = True
        else:
            if xstar < hi:
                hi = xstar
            fhi = (e2 * (1.0 - hi) ** (e2 - 1.0) * psi_e - gd_l0 * hi
                   - alpha * (hi - d))
            if fhi > 0.0:
                no_root = True
    else:
        fhi = -gd_l0 * hi - alpha * (hi - d)
        if e2 > 0.0:
            fhi += e2 * (1.0 - hi) ** (e2 - 1.0) * psi_e
        if fhi > 0.0:
            no_root = True

    if no_root:
        tilde = cap
        phi_new = tilde if tilde > phi_n else phi_n
        return phi_new, tilde, True

    # safeguarded Newton with bisection fallback on [lo, hi]
    lo = 0.0
    x = 0.5 * (lo + hi)
    fscale = f0 + gd_l0 + alpha
    ftol = 1.0e-13 * (fscale if fscale > 1.0 else 1.0)
    for _ in range(200):
        if e2 > 0.0:
            fx = e2 * (1.0 - x) ** (e2 - 1.0) * psi_e - gd_l0 * x - alpha * (x - d)
            fpx = -e2 * (e2 - 1.0) * (1.0 - x) ** (e2 - 2.0) * psi_e - gd_l0 - alpha
        else:
            fx = -gd_l0 * x - alpha * (x - d)
            fpx = -gd_l0 - alpha
        if fx > 0.0:
            lo = x
        else:
            hi = x
        if abs(fx) <= ftol:
            break
        xn = x - fx / fpx
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1.0e-15:
            x = xn
            break
        x = xn

    tilde = x
    phi_new = tilde if tilde > phi_n else phi_n
    return phi_new, tilde, False


# ---------------------------------------------------------------------------
# public wrappers
# ---------------------------------------------------------------------------


def degradation_ge(phi: float, eps_p_prev: float, p: MaterialParams) -> float:
    """Elastic degradation (1 - phi)^(2 (eps_p_prev / eps_p_crit)^n).

    Uses the previously committed accumulated plastic strain (explicit scheme).
    """
    if phi >= 1.0:
        raise FullyDegradedError(f"local phase field phi={phi} >= 1")
    if phi < 0.0:
        raise ValueError(f"local phase field must be nonnegative, got {phi}")
    if eps_p_prev < 0.0:
        raise ValueError(f"accumulated plastic strain must be nonnegative, got {eps_p_prev}")
    # the floor keeps the value in (0, 1] under float underflow at extreme states
    return max(float(nb_degradation(phi, eps_p_prev, p.eps_p_crit, p.n_exp)), GE_FLOOR)


def schmid_stresses(Me, p: MaterialParams) -> np.ndarray:
    """Resolved Schmid stresses tau_a = Me : (s_a x m_a) for the active systems."""
    Me = np.asarray(Me, dtype=np.float64)
    return np.einsum("ij,ai,aj->a", Me, p.slip_dirs, p.slip_normals)


def kappa(k_alpha, chi_alpha, p: MaterialParams) -> np.ndarray:
    """Gradient-extended hardening stress kappa_a = -H k_a + Hg lg^2 chi_a."""
    return -p.H * np.asarray(k_alpha, dtype=np.float64) + p.hg_lg2 * np.asarray(
        chi_alpha, dtype=np.float64
    )


def yield_value(tau, ge: float, kappa_alpha, p: MaterialParams) -> np.ndarray:
    """Yield function Phi_a = |tau_a / ge| - (tau_y + kappa_a)."""
    if ge <= 0.0:
        raise ValueError(f"degradation factor must be positive, got {ge}")
    return np.abs(np.asarray(tau, dtype=np.float64) / ge) - (
        p.tau_y + np.asarray(kappa_alpha, dtype=np.float64)
    )


def local_plastic_solve(
    inp: LocalInput,
    state_n: PointState,
    p: MaterialParams,
    tau_y: float | None = None,
    want_tangent: bool = True,
    point: int = -1,
) -> LocalOutput:
    """Solve the slip-increment residuals at one point with phi frozen.

    ``tau_y`` overrides the base yield stress (inhomogeneity support).
    Raises LocalSolveError on Newton failure and DegenerateKinematicsError on
    a non-positive elastic Jacobian.
    """
    from .tensors import DegenerateKinematicsError

    ty = p.tau_y if tau_y is None else tau_y
    (status, iterations, res_norm, degraded, P, Fpinv, k_new, eps_p_new, dlam,
     psi_e, ge, tau, kap, diss, dP_dF, dP_dchi, dk_dF, dk_dchi) = nb_plastic_point(
        np.ascontiguousarray(inp.F, dtype=np.float64),
        np.ascontiguousarray(state_n.Fp_inv, dtype=np.float64),
        np.ascontiguousarray(state_n.k, dtype=np.float64),
        float(state_n.eps_p), float(state_n.phi),
        np.ascontiguousarray(inp.chi, dtype=np.float64), float(inp.dt),
        p.elastic.mu, p.elastic.lam, ty, p.H, p.hg_lg2,
        p.t_star, p.sigma_d, p.m_exp, p.eps_p_crit, p.n_exp,
        p.slip_dirs, p.slip_normals, want_tangent,
    )
    if status == STATUS_DEGENERATE:
        raise DegenerateKinematicsError("non-positive elastic Jacobian", point)
    if status == STATUS_NO_CONVERGENCE:
        raise LocalSolveError(point, res_norm)
    state_new = PointState(Fpinv, k_new, eps_p_new, state_n.phi)
    return LocalOutput(
        P=P, dlam=dlam, state_new=state_new, dP_dF=dP_dF, dP_dchi=dP_dchi,
        dk_dF=dk_dF, dk_dchi=dk_dchi, psi_e=psi_e, ge=ge, tau=tau, kappa=kap,
        diss_inc=diss, iterations=iterations, degraded=degraded,
    )


def local_phasefield_solve(
    psi_e: float, eps_p: float, d: float, phi_n: float, p: MaterialParams
) -> float:
    """Local phase field update: root of the scalar residual, then the
    irreversibility clamp max(phi_tilde, phi_n).

    ``eps_p`` is the committed accumulated plastic strain of the previous
    step (explicit scheme); Delta-lambda and psi_e are frozen (set 2).
    """
    if psi_e < 0.0:
        raise ValueError(f"elastic energy density must be nonnegative, got {psi_e}")
    if not 0.0 <= phi_n < 1.0:
        raise ValueError(f"previous local phase field must be in [0, 1), got {phi_n}")
    phi_new, _, _ = nb_phasefield_point(
        float(psi_e), float(eps_p), float(d), float(phi_n),
        p.eps_p_crit, p.n_exp, p.Gd_over_l0, p.alpha_pen,
    )
    return float(phi_new)


def dissipation_increment(
    state_n: PointState,
    state_n1: PointState,
    Me,
    kappa_alpha,
    ge_n: float,
    ge_n1: float,
    psi_e: float,
    p: MaterialParams,
) -> float:
    """Discrete volumetric dissipation of one committed step (verification only).

    Me : Lp dt  +  Q deps_p  +  sum_a kappa_a dk_a, with the plastic-strain
    part of the degradation change realized as -(ge_n1 - ge_n) psi_e at frozen
    phi. Stress quantities are end-of-step values; ge_n and ge_n1 must be
    evaluated at the same (frozen) phi with the old and new eps_p.
    """
    dlam = np.asarray(state_n.k, dtype=np.float64) - np.asarray(state_n1.k, dtype=np.float64)
    tau = schmid_stresses(Me, p)
    # the flow term uses the degradation the update itself used (old eps_p)
    ge = max(ge_n, GE_FLOOR)
    flow = float(np.sum(dlam * np.abs(tau)) / ge)
    hardening = -float(np.sum(np.asarray(kappa_alpha, dtype=np.float64) * dlam))
    return flow + hardening - (ge_n1 - ge_n) * psi_e
