"""Shared numerical utilities for the test suite."""

from __future__ import annotations

import numpy as np


def central_diff(f, x: float, h: float) -> float:
    """Central finite difference of a scalar function."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_diff_tensor(f, X: np.ndarray, h: float) -> np.ndarray:
    """Central FD of scalar-valued f with respect to every entry of X."""
    X = np.array(X, dtype=np.float64)
    out = np.zeros_like(X)
    it = np.nditer(X, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        Xp = X.copy()
        Xm = X.copy()
        Xp[idx] += h
        Xm[idx] -= h
        out[idx] = (f(Xp) - f(Xm)) / (2.0 * h)
        it.iternext()
    return out


def fd_jacobian(residual, x: np.ndarray, h: float) -> np.ndarray:
    """Dense central-difference Jacobian of a vector residual."""
    x = np.asarray(x, dtype=np.float64)
    r0 = np.asarray(residual(x))
    J = np.zeros((r0.size, x.size))
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (np.asarray(residual(xp)) - np.asarray(residual(xm))) / (2.0 * h)
    return J


def rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a (not necessarily unit) axis."""
    axis = np.asarray(axis, dtype=np.float64)
    n = axis / np.linalg.norm(axis)
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def rel_error(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = max(np.linalg.norm(b.ravel()), 1e-30)
    return float(np.linalg.norm((a - b).ravel()) / denom)
