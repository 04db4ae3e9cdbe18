"""Bell operator, CHSH expectations, closed-form and numerical optima."""

import math

import numpy as np
import pytest

from hesim import (
    ChshResult,
    ChshSettings,
    Direction,
    HesLabel,
    SpaceDescriptor,
    StateVector,
    analytic_optimum,
    analytic_settings,
    bell_operator,
    build_pseudospin,
    chsh_value,
    correlation_matrix,
    even_coherent,
    hes_state,
    k_series,
    mode_dim_for,
    optimize_chsh,
    qubit_state,
    tensor,
)

from conftest import random_amps, random_state

TWO_SQRT_TWO = 2.0 * math.sqrt(2.0)
# 2*sqrt(1 + k(1)^2), frozen from the 40-digit overlap evaluation
VIOLATION_AT_Z1 = 2.7879837509620812837


def random_settings(rng) -> ChshSettings:
    dirs = [
        Direction.from_angles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        for _ in range(4)
    ]
    return ChshSettings(*dirs)


def in_plane_closed_form(z, theta_a, theta_ap, theta_b, theta_bp):
    """Four-correlator expansion for the phi+ pairing with in-plane settings."""
    k = k_series(z)

    def corr(t1, t2):
        return math.cos(t1) * math.cos(t2) + k * math.sin(t1) * math.sin(t2)

    return (
        corr(theta_a, theta_b)
        + corr(theta_a, theta_bp)
        + corr(theta_ap, theta_b)
        - corr(theta_ap, theta_bp)
    )


def settings_free_maximum(state, ops):
    """Largest reachable expectation over all settings, from the top two
    singular values of the correlation matrix; independent of any search."""
    s = np.linalg.svd(correlation_matrix(state, ops), compute_uv=False)
    return 2.0 * math.sqrt(s[0] ** 2 + s[1] ** 2)


class TestBellOperator:
    def test_aligned_settings_collapse_to_two_correlators(self):
        ops = build_pseudospin(6)
        zaxis = Direction(0.0, 0.0, 1.0)
        op = bell_operator(ChshSettings(zaxis, zaxis, zaxis, zaxis), ops)
        expected = 2.0 * np.kron(np.diag([1.0, -1.0]), ops.s_z.matrix)
        assert np.allclose(op.matrix, expected, atol=1e-14)

    def test_hermitian_for_random_settings(self, rng):
        ops = build_pseudospin(8)
        for _ in range(10):
            m = bell_operator(random_settings(rng), ops).matrix
            assert np.max(np.abs(m - m.conj().T)) < 1e-13

    def test_spectrum_respects_quantum_bound(self, rng):
        ops = build_pseudospin(8)
        for _ in range(20):
            m = bell_operator(random_settings(rng), ops).matrix
            top = np.max(np.abs(np.linalg.eigvalsh(m)))
            assert top <= TWO_SQRT_TWO + 1e-9


class TestChshValue:
    def test_aligned_product_state_reaches_classical_bound(self):
        dim = mode_dim_for(1.0, 1e-14)
        ops = build_pseudospin(dim)
        state = tensor(qubit_state(1.0, 0.0), even_coherent(1.0, dim))
        zaxis = Direction(0.0, 0.0, 1.0)
        val = chsh_value(state, ChshSettings(zaxis, zaxis, zaxis, zaxis), ops)
        assert val == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("z", [0.4, 1.0, 2.2])
    def test_matches_in_plane_closed_form(self, z, rng):
        dim = mode_dim_for(z, 1e-14)
        ops = build_pseudospin(dim)
        state = hes_state(HesLabel.PHI_PLUS, z, dim)
        for _ in range(15):
            angles = rng.uniform(0, 2 * math.pi, size=4)
            got = chsh_value(state, ChshSettings.in_plane(*angles), ops)
            assert got == pytest.approx(in_plane_closed_form(z, *angles), abs=1e-10)

    def test_cirelson_point_at_zero(self):
        dim = 4
        ops = build_pseudospin(dim)
        state = hes_state(HesLabel.PHI_PLUS, 0.0, dim)
        settings = ChshSettings.in_plane(0.0, math.pi / 2, math.pi / 4, -math.pi / 4)
        assert chsh_value(state, settings, ops) == pytest.approx(
            TWO_SQRT_TWO, abs=1e-12
        )

    def test_bound_holds_for_random_states_and_settings(self, rng):
        dim = 8
        ops = build_pseudospin(dim)
        space = SpaceDescriptor.qubit() * SpaceDescriptor.mode(dim)
        for _ in range(30):
            val = chsh_value(random_state(space, rng), random_settings(rng), ops)
            assert abs(val) <= TWO_SQRT_TWO + 1e-9

    def test_flipping_mode_settings_flips_the_sign(self, rng):
        dim = 8
        ops = build_pseudospin(dim)
        space = SpaceDescriptor.qubit() * SpaceDescriptor.mode(dim)
        state = random_state(space, rng)
        s = random_settings(rng)
        flipped = ChshSettings(
            s.a,
            s.a_prime,
            Direction(-s.b.nx, -s.b.ny, -s.b.nz),
            Direction(-s.b_prime.nx, -s.b_prime.ny, -s.b_prime.nz),
        )
        assert chsh_value(state, flipped, ops) == pytest.approx(
            -chsh_value(state, s, ops), abs=1e-12
        )

    def test_space_mismatch_rejected(self):
        ops = build_pseudospin(6)
        state = tensor(qubit_state(1.0, 0.0), even_coherent(0.5, 10))
        with pytest.raises(ValueError, match="does not match"):
            chsh_value(state, ChshSettings.in_plane(0, 1, 2, 3), ops)


class TestAnalyticOptimum:
    def test_zero_z_reaches_cirelson(self):
        res = analytic_optimum(0.0)
        assert res.value == pytest.approx(TWO_SQRT_TWO, abs=1e-12)

    def test_z1_frozen_value(self):
        assert analytic_optimum(1.0).value == pytest.approx(
            VIOLATION_AT_Z1, abs=1e-13
        )

    @pytest.mark.parametrize("z", [0.0, 0.3, 1.0, 1.46, 2.0, 4.0])
    def test_always_violates_classical_bound(self, z):
        assert analytic_optimum(z).value > 2.0

    @pytest.mark.parametrize("label", list(HesLabel))
    @pytest.mark.parametrize("z", [0.0, 0.5, 1.0, 2.0])
    def test_settings_reproduce_value_for_every_label(self, label, z):
        dim = mode_dim_for(z, 1e-14)
        ops = build_pseudospin(dim)
        state = hes_state(label, z, dim)
        res = analytic_optimum(z, label)
        got = chsh_value(state, res.settings, ops)
        assert got == pytest.approx(res.value, abs=1e-10)
        assert 2.0 < got <= TWO_SQRT_TWO + 1e-9

    def test_settings_are_in_plane_with_matched_mode_angles(self):
        s = analytic_settings(1.0)
        k = k_series(1.0)
        assert s.b.theta == pytest.approx(math.atan(k), abs=1e-12)
        assert s.b_prime.theta == pytest.approx(math.atan(k), abs=1e-12)
        assert s.b_prime.nx == pytest.approx(-s.b.nx, abs=1e-12)

    def test_negative_z_rejected(self):
        with pytest.raises(ValueError):
            analytic_optimum(-0.1)


class TestOptimizeChsh:
    def test_two_qubit_bell_pair_reaches_cirelson(self):
        # a Bell pair with the partner encoded in a two-level mode
        ops = build_pseudospin(2)
        space = SpaceDescriptor.qubit() * SpaceDescriptor.mode(2)
        amps = np.zeros(4, dtype=complex)
        amps[0] = amps[3] = 1.0 / math.sqrt(2.0)
        state = StateVector(space, amps)
        res = optimize_chsh(state, ops, restarts=8, seed=0)
        assert res.value == pytest.approx(TWO_SQRT_TWO, abs=1e-6)

    def test_reaches_closed_form_on_hybrid_state(self):
        z = 0.5
        dim = mode_dim_for(z, 1e-14)
        ops = build_pseudospin(dim)
        state = hes_state(HesLabel.PHI_PLUS, z, dim)
        res = optimize_chsh(state, ops, restarts=16, seed=0)
        assert res.value >= analytic_optimum(z).value - 1e-6
        assert res.value <= TWO_SQRT_TWO + 1e-9

    def test_found_settings_reproduce_reported_value(self):
        z = 1.0
        dim = mode_dim_for(z, 1e-14)
        ops = build_pseudospin(dim)
        state = hes_state(HesLabel.PSI_MINUS, z, dim)
        res = optimize_chsh(state, ops, restarts=8, seed=3)
        assert chsh_value(state, res.settings, ops) == pytest.approx(
            res.value, abs=1e-9
        )

    def test_matches_singular_value_oracle(self, rng):
        dim = 10
        ops = build_pseudospin(dim)
        space = SpaceDescriptor.qubit() * SpaceDescriptor.mode(dim)
        for _ in range(4):
            state = random_state(space, rng)
            res = optimize_chsh(state, ops, restarts=12, seed=1)
            assert res.value == pytest.approx(
                settings_free_maximum(state, ops), abs=1e-6
            )

    def test_product_states_stay_classical(self, rng):
        dim = 8
        ops = build_pseudospin(dim)
        for _ in range(6):
            state = tensor(
                StateVector(SpaceDescriptor.qubit(), random_amps(rng, 2)),
                StateVector(SpaceDescriptor.mode(dim), random_amps(rng, dim)),
            )
            res = optimize_chsh(state, ops, restarts=8, seed=0)
            assert res.value <= 2.0 + 1e-6

    def test_deterministic_for_fixed_seed(self):
        dim = mode_dim_for(0.7, 1e-14)
        ops = build_pseudospin(dim)
        state = hes_state(HesLabel.PHI_MINUS, 0.7, dim)
        r1 = optimize_chsh(state, ops, restarts=6, seed=42)
        r2 = optimize_chsh(state, ops, restarts=6, seed=42)
        assert r1.value == r2.value
        assert r1.settings == r2.settings
        assert r1.iterations == r2.iterations

    def test_restart_bookkeeping(self):
        ops = build_pseudospin(4)
        state = hes_state(HesLabel.PHI_PLUS, 0.0, 4)
        res = optimize_chsh(state, ops, restarts=3, seed=0)
        assert res.restarts_used == 3
        assert 0 < res.iterations <= 2000
        with pytest.raises(ValueError):
            optimize_chsh(state, ops, restarts=0, seed=0)


class TestChshResult:
    def test_rejects_superquantum_value(self):
        s = ChshSettings.in_plane(0.0, 1.0, 2.0, 3.0)
        with pytest.raises(ValueError):
            ChshResult(value=3.0, settings=s, iterations=0, restarts_used=1)
