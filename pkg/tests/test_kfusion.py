"""Tests for K-relative frame decisions: optimal lower bound, membership,
and the sampled verification report."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from framekit._rng import gaussian_matrix, make_rng
from framekit.frame_core import WeightedSubspaceFamily, fusion_bounds, fusion_operator
from framekit.kfusion import KFusionInstance, decide, k_lower_bound, verify_k_fusion
from framekit.numerics import Subspace, douglas_check, operator_norm


def axis_subspace(ambient, index):
    e = np.zeros((ambient, 1))
    e[index, 0] = 1.0
    return Subspace.from_span(e)


def weighted_axes(weights):
    n = len(weights)
    return WeightedSubspaceFamily(
        n, tuple((axis_subspace(n, i), w) for i, w in enumerate(weights))
    )


def random_family(seed, ambient, n_members, complex_scalars=False):
    rng = make_rng(seed)
    members = []
    for _ in range(n_members):
        dim = int(rng.integers(1, ambient + 1))
        q, _ = np.linalg.qr(gaussian_matrix(rng, ambient, dim, complex_scalars))
        members.append((Subspace(ambient, q[:, :dim]), float(rng.uniform(0.5, 2.0))))
    return WeightedSubspaceFamily(ambient, tuple(members))


class TestKLowerBound:
    def test_diagonal_hand_oracle(self):
        # S_W = diag(4, 9), K K* = diag(1, 1): largest a is min eigenvalue 4
        family = weighted_axes([2.0, 3.0])
        inst = KFusionInstance(family, np.eye(2))
        assert k_lower_bound(inst) == pytest.approx(4.0, rel=1e-12)

    def test_partial_operator(self):
        # K = P_{e1}: only the first diagonal entry of S_W matters
        family = weighted_axes([2.0, 3.0])
        inst = KFusionInstance(family, np.diag([1.0, 0.0]))
        assert k_lower_bound(inst) == pytest.approx(4.0, rel=1e-12)

    def test_zero_operator_is_vacuous(self):
        inst = KFusionInstance(weighted_axes([1.0, 1.0]), np.zeros((2, 2)))
        assert math.isinf(k_lower_bound(inst))

    def test_range_leak_gives_exact_zero(self):
        # S_W lives on e1 only; K reaches e2
        family = WeightedSubspaceFamily(2, ((axis_subspace(2, 0), 1.0),))
        inst = KFusionInstance(family, np.eye(2))
        assert k_lower_bound(inst) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(0, 2**32 - 1),
        scale=st.floats(0.25, 4.0),
    )
    def test_scaling_law(self, seed, scale):
        family = random_family(seed, 4, 3)
        k = gaussian_matrix(make_rng(seed + 7), 4, 4, False)
        base = k_lower_bound(KFusionInstance(family, k))
        scaled = k_lower_bound(KFusionInstance(family, scale * k))
        assert scaled == pytest.approx(base / scale**2, rel=1e-8)

    def test_fusion_frame_bound_floor(self):
        # a K K* <= S_W certainly holds for a = lambda_min(S_W) / ||K||^2
        for seed in range(6):
            family = random_family(200 + seed, 4, 4, seed % 2 == 0)
            bounds = fusion_bounds(family)
            if not bounds.is_frame():
                continue
            k = gaussian_matrix(make_rng(seed), 4, 4, seed % 2 == 0)
            floor = bounds.lower / operator_norm(k) ** 2
            got = k_lower_bound(KFusionInstance(family, k))
            assert got >= floor * (1.0 - 1e-10)


class TestDecide:
    def test_membership_matches_douglas(self):
        for seed in range(10):
            ambient = 3 + seed % 3
            family = random_family(300 + seed, ambient, 2, seed % 2 == 0)
            k = gaussian_matrix(make_rng(seed), ambient, ambient, seed % 2 == 0)
            if seed % 3 == 0:
                # force a range leak: kill the family along one axis
                sw = fusion_operator(family)
                vals, vecs = np.linalg.eigh(sw)
                family = WeightedSubspaceFamily(
                    ambient,
                    ((Subspace.from_span(vecs[:, 1:]), 1.0),),
                )
            verdict = decide(KFusionInstance(family, k))
            sw = fusion_operator(family)
            douglas = douglas_check(k, sw)
            assert verdict.is_k_fusion == douglas.range_included
            assert (verdict.bounds.lower > 0.0) == douglas.range_included

    def test_witness_lies_in_null_space(self):
        # dim-3 family spanning only e1, e2; K = I leaks along e3
        family = WeightedSubspaceFamily(
            3, ((axis_subspace(3, 0), 1.0), (axis_subspace(3, 1), 1.0))
        )
        verdict = decide(KFusionInstance(family, np.eye(3)))
        assert not verdict.is_k_fusion
        assert verdict.bounds.lower == 0.0
        w = verdict.witness
        assert w is not None
        assert abs(np.linalg.norm(w) - 1.0) < 1e-12
        # witness carries no fusion energy but full K*-energy
        sw = fusion_operator(family)
        assert float((w.conj() @ sw @ w).real) < 1e-12
        assert abs(w[2]) == pytest.approx(1.0, abs=1e-10)

    def test_member_has_no_witness(self):
        verdict = decide(KFusionInstance(weighted_axes([1.0, 1.0]), np.eye(2)))
        assert verdict.is_k_fusion
        assert verdict.witness is None

    def test_zero_operator_member_without_witness(self):
        verdict = decide(
            KFusionInstance(weighted_axes([1.0, 1.0]), np.zeros((2, 2)))
        )
        assert verdict.is_k_fusion
        assert math.isinf(verdict.bounds.lower)
        assert verdict.witness is None


class TestVerify:
    def test_optimal_bounds_hold_on_samples(self):
        for seed in range(6):
            family = random_family(400 + seed, 5, 3, seed % 2 == 0)
            k = gaussian_matrix(make_rng(seed), 5, 5, seed % 2 == 0)
            verdict = decide(KFusionInstance(family, k))
            report = verify_k_fusion(
                KFusionInstance(family, k),
                verdict.bounds.lower,
                verdict.bounds.upper,
                n_samples=200,
                seed=seed,
            )
            assert report.worst_lower_margin >= -1e-9
            assert report.worst_upper_margin >= -1e-9
            assert report.n_evaluated == 200 + 2 * 5

    def test_overstated_lower_bound_flagged(self):
        family = weighted_axes([2.0, 3.0])
        inst = KFusionInstance(family, np.eye(2))
        report = verify_k_fusion(inst, 4.5, 9.0, n_samples=50, seed=1)
        # e1 has S_W-energy 4 < 4.5: eigenvector probe catches it
        assert report.worst_lower_margin < -0.4

    def test_infinite_lower_is_vacuous(self):
        inst = KFusionInstance(weighted_axes([1.0, 1.0]), np.zeros((2, 2)))
        report = verify_k_fusion(inst, math.inf, 1.0, n_samples=20, seed=0)
        assert report.worst_lower_margin >= 0.0
        assert report.worst_upper_margin >= -1e-12

    def test_shape_mismatch_rejected(self):
        from framekit.errors import DimensionMismatch

        with pytest.raises(DimensionMismatch):
            KFusionInstance(weighted_axes([1.0, 1.0]), np.eye(3))
