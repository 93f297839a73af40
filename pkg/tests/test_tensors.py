"""Kinematics: Cauchy-Green tensor, Neo-Hookean energy, stress measures."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpfrac.tensors import (
    DegenerateKinematicsError,
    ElasticConstants,
    elastic_cauchy_green,
    elastic_second_pk,
    first_pk,
    mandel_stress,
    neo_hookean_energy,
)

from helpers import central_diff_tensor, rotation_matrix

BASE = ElasticConstants.from_bulk_shear(71660.0, 27260.0)
I3 = np.eye(3)


def test_lame_conversion():
    assert BASE.mu == 27260.0
    assert BASE.lam == pytest.approx(71660.0 - 2.0 * 27260.0 / 3.0, rel=1e-15)


def test_elastic_constants_validation():
    with pytest.raises(ValueError):
        ElasticConstants(mu=-1.0, lam=10.0)
    with pytest.raises(ValueError):
        ElasticConstants(mu=1.0, lam=-10.0)


class TestElasticCauchyGreen:
    def test_identity(self):
        assert np.array_equal(elastic_cauchy_green(I3, I3), I3)

    def test_diagonal_stretch(self):
        F = np.diag([1.1, 1.0, 1.0])
        Ce = elastic_cauchy_green(F, I3)
        assert np.allclose(Ce, np.diag([1.21, 1.0, 1.0]), atol=1e-15)
        assert np.allclose(Ce, Ce.T, atol=0.0)

    def test_rotation_invariant(self):
        # brute-force check: Ce of F = R U equals U^2 for a 30 degree rotation
        U = np.diag([1.05, 0.97, 1.01])
        U[0, 1] = U[1, 0] = 0.02
        R = rotation_matrix(np.array([0.0, 0.0, 1.0]), math.radians(30.0))
        Ce = elastic_cauchy_green(R @ U, I3)
        assert np.allclose(Ce, U @ U, atol=1e-13)

    def test_singular_input_rejected(self):
        F = np.diag([0.0, 1.0, 1.0])
        with pytest.raises(DegenerateKinematicsError):
            elastic_cauchy_green(F, I3)
        with pytest.raises(DegenerateKinematicsError) as err:
            elastic_cauchy_green(I3, F, point=42)
        assert err.value.point == 42


class TestNeoHookeanEnergy:
    def test_reference_is_stress_free_zero(self):
        assert neo_hookean_energy(I3, BASE) == 0.0

    def test_small_strain_series(self):
        # diag(1+2 eps, 1, 1) expands to (lam + 2 mu) eps^2 / 2 + O(eps^3)
        eps = 1e-4
        psi = neo_hookean_energy(np.diag([1.0 + 2.0 * eps, 1.0, 1.0]), BASE)
        assert psi == pytest.approx(0.5 * (BASE.lam + 2.0 * BASE.mu) * eps**2, rel=1e-3)

    def test_uniaxial_value(self):
        # frozen from an independent scalar evaluation of the formula
        psi = neo_hookean_energy(np.diag([1.21, 1.0, 1.0]), BASE)
        assert psi == pytest.approx(507.08175084500914, rel=1e-13)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateKinematicsError):
            neo_hookean_energy(np.diag([-1.0, 1.0, 1.0]), BASE)


class TestElasticSecondPK:
    def test_zero_at_reference(self):
        assert np.array_equal(elastic_second_pk(I3, BASE), np.zeros((3, 3)))

    def test_diagonal_argument_gives_diagonal_stress(self):
        Se = elastic_second_pk(np.diag([1.21, 1.0, 1.0]), BASE)
        off = Se - np.diag(np.diag(Se))
        assert np.all(off == 0.0)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_energy_derivative(self, seed):
        # Se = 2 dPsi/dCe against a central finite difference
        rng = np.random.default_rng(seed)
        W = 0.05 * rng.standard_normal((3, 3))
        Ce = I3 + W + W.T + 0.3 * I3 * rng.random()
        h = 1e-6 * np.linalg.norm(Ce)
        Se = elastic_second_pk(Ce, BASE)
        fd = 2.0 * central_diff_tensor(lambda X: neo_hookean_energy(X, BASE), Ce, h)
        assert np.linalg.norm(Se - fd) <= 1e-6 * np.linalg.norm(Se)


class TestMandelStress:
    def test_zero_stress(self):
        assert np.array_equal(mandel_stress(I3, np.zeros((3, 3))), np.zeros((3, 3)))

    def test_identity_ce(self):
        Se = np.arange(9.0).reshape(3, 3)
        assert np.array_equal(mandel_stress(I3, Se), Se)

    def test_matches_matrix_product(self):
        rng = np.random.default_rng(3)
        W = rng.standard_normal((3, 3))
        Ce = I3 + 0.1 * (W + W.T)
        Se = rng.standard_normal((3, 3))
        expected = np.array([[sum(Ce[i, k] * Se[k, j] for k in range(3)) for j in range(3)] for i in range(3)])
        assert np.allclose(mandel_stress(Ce, Se), expected, atol=1e-14)


class TestFirstPK:
    def test_zero_stress(self):
        assert np.array_equal(first_pk(I3, I3, np.zeros((3, 3)), 1.0), np.zeros((3, 3)))

    def test_elastic_limit(self):
        F = I3 + 0.01 * np.arange(9.0).reshape(3, 3)
        Se = np.diag([3.0, 2.0, 1.0])
        assert np.allclose(first_pk(F, I3, Se, 1.0), F @ Se, atol=1e-14)

    def test_degradation_factor_validated(self):
        with pytest.raises(ValueError):
            first_pk(I3, I3, I3, 0.0)
        with pytest.raises(ValueError):
            first_pk(I3, I3, I3, 1.5)

    @pytest.mark.parametrize("ge", [1.0, 0.6])
    def test_energy_gradient(self, ge):
        # P equals d(ge Psi_e)/dF at frozen internal variables
        rng = np.random.default_rng(11)
        F = I3 + 0.04 * rng.standard_normal((3, 3))
        Fp_inv = I3 - 0.01 * np.outer(
            np.array([-1.0, 1.0, 0.0]) / math.sqrt(2.0),
            np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0),
        )

        def energy(Fx):
            return ge * neo_hookean_energy(elastic_cauchy_green(Fx, Fp_inv), BASE)

        Se = elastic_second_pk(elastic_cauchy_green(F, Fp_inv), BASE)
        P = first_pk(F, Fp_inv, Se, ge)
        fd = central_diff_tensor(energy, F, 1e-6 * np.linalg.norm(F))
        assert np.linalg.norm(P - fd) <= 1e-6 * np.linalg.norm(P)


@settings(max_examples=30, deadline=None)
@given(
    ax=st.tuples(*(st.floats(-1, 1) for _ in range(3))).filter(
        lambda a: sum(x * x for x in a) > 1e-3
    ),
    angle=st.floats(-math.pi, math.pi),
)
def test_objectivity(ax, angle):
    # rotating the deformation leaves Ce unchanged and rotates P
    Q = rotation_matrix(np.array(ax), angle)
    rng = np.random.default_rng(5)
    F = I3 + 0.03 * rng.standard_normal((3, 3))
    Ce = elastic_cauchy_green(F, I3)
    Ce_rot = elastic_cauchy_green(Q @ F, I3)
    assert np.allclose(Ce_rot, Ce, rtol=0.0, atol=1e-13)

    Se = elastic_second_pk(Ce, BASE)
    P = first_pk(F, I3, Se, 0.8)
    P_rot = first_pk(Q @ F, I3, elastic_second_pk(Ce_rot, BASE), 0.8)
    assert np.allclose(P_rot, Q @ P, atol=1e-9 * max(1.0, np.linalg.norm(P)))
