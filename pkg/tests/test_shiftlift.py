"""Tests for the isometric shift lifting and the bilateral dilation."""

import numpy as np
import pytest

from isolab.defect import defect_operator, growth_constant
from isolab.errors import EmbeddingMarginError, GrowthDivergenceError
from isolab.numerics import op_norm
from isolab.operators import check_lifting
from isolab.shiftlift import (
    build_bilateral_dilation,
    build_shift_lift,
    plan_shift_lift,
    solve_embedding,
)
from isolab.operators import Operator


def small_power_bounded(seed, d=3):
    rng = np.random.default_rng(seed)
    u = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0]
    s = np.diag(rng.uniform(0.8, 1.25, size=d))
    return Operator(s @ u @ np.linalg.inv(s))


def test_plan_weight_law():
    t = Operator(np.zeros((1, 1)))
    for m in (0, 1, 2):
        for k_target in (1.5, 2.0):
            plan = plan_shift_lift(t, m, 64, n_max=40)
            k = plan.K
            s = np.arange(1, len(plan.weights) + 1, dtype=float)
            expect = ((2 * k * s + 1) / (2 * k * (s - 1) + 1)) ** ((m + 2) / 2.0)
            rel = np.max(np.abs(plan.weights - expect) / expect)
            assert rel < 1e-12


def test_plan_q_below_bound():
    t = small_power_bounded(7)
    plan = plan_shift_lift(t, 0, 64, n_max=100)
    assert plan.q + plan.tail_bound <= np.pi**2 / 24 + 1e-9


def test_plan_rejects_diverging():
    t = Operator(np.array([[1.5]]))
    with pytest.raises(GrowthDivergenceError):
        plan_shift_lift(t, 0, 32, n_max=200)


def test_solve_embedding_fixed_point():
    t = small_power_bounded(11)
    plan = plan_shift_lift(t, 0, 48, n_max=100)
    _, m_op = solve_embedding(t, plan)
    # M + sum_s b_s T^s M T*^s = I
    acc = m_op.copy()
    p = np.eye(t.dim, dtype=complex)
    for s in range(1, plan.trunc):
        p = t.matrix @ p
        acc = acc + plan.b[s - 1] * (p @ m_op @ p.conj().T)
    assert op_norm(acc - np.eye(t.dim)) < 1e-11


def test_build_shift_lift_certificate():
    t = small_power_bounded(3)
    cert = build_shift_lift(t, 0, 96, n_max=100)
    assert cert.iso_residual < 1e-10
    assert cert.intertwine_residual < 1e-10
    assert cert.defect_norm < 1e-10
    assert cert.expansive_margin >= -1e-12
    rep = check_lifting(cert.lift, t, cert.embedding, tol=1e-8)
    assert rep.verdict


def test_lift_of_2_isometry_uses_order_5():
    # m = 2 input lifts to an expansive shift with vanishing order m+3 defect
    t = Operator(np.array([[1.0]]))
    cert = build_shift_lift(t, 2, 64, n_max=60)
    assert cert.defect_order == 5
    assert cert.defect_norm < 1e-10


def test_bilateral_dilation_powers():
    t = small_power_bounded(5)
    cert = build_bilateral_dilation(t, 0, 48, max_power=4, n_max=100)
    assert cert.iso_residual < 1e-10
    assert cert.power_residuals[0] < 1e-12
    # truncation tail limits the higher powers to roughly 1e-4 at this size
    assert max(cert.power_residuals) < 1e-3
    assert cert.exponent_used == 2
    assert cert.min_weight_sq > 0.0


def test_bilateral_powers_decay_with_trunc():
    t = small_power_bounded(5)
    a = build_bilateral_dilation(t, 0, 32, max_power=4, n_max=100)
    b = build_bilateral_dilation(t, 0, 96, max_power=4, n_max=100)
    assert max(b.power_residuals) < max(a.power_residuals)


def test_embedding_margin_refusal():
    t = Operator(np.array([[1.0]]))
    plan = plan_shift_lift(t, 0, 16, n_max=10)
    bad = plan.__class__(plan.m, plan.K, plan.trunc, plan.weights, plan.b * 60.0, 0.55, plan.tail_bound)
    with pytest.raises(EmbeddingMarginError):
        solve_embedding(t, bad)
