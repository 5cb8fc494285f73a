"""Tests for the convex operator tower and the one step lifts."""

import numpy as np
import pytest

from isolab.convexlift import (
    a_t_limit,
    build_convex_lift,
    convex_defect,
    iterate_tower,
    lmi_feasibility,
    one_step_lift,
    tower_operator,
)
from isolab.errors import ConvergenceError, NotConvexError
from isolab.numerics import op_norm
from isolab.operators import Operator, make_weighted_shift


def dirichlet_shift(c, n, extra=2):
    s = np.arange(1, n + extra, dtype=float)
    w = np.sqrt((1.0 + c * s) / (1.0 + c * (s - 1.0)))
    return make_weighted_shift(w, n)


def test_convex_defect_of_isometry():
    u = Operator(np.eye(3))
    cd = convex_defect(u)
    assert cd.convex
    assert cd.norm < 1e-14


def test_convex_defect_flags_nonconvex():
    # diag(1, 0.5): second difference has a negative eigenvalue? it does not,
    # but a rotation-scaled nilpotent does
    t = np.array([[0.0, 2.0], [0.0, 0.0]])
    cd = convex_defect(t)
    assert cd.min_eig < 0
    assert not cd.convex
    with pytest.raises(NotConvexError):
        one_step_lift(t)


def test_one_step_lift_averaging_identity():
    rng = np.random.default_rng(9)
    mat = np.diag([1.0, 0.7]) @ np.linalg.qr(rng.normal(size=(2, 2)))[0]
    if not convex_defect(mat).convex:
        mat = np.diag([1.0, 0.7])
    t1 = one_step_lift(mat)
    h = rng.normal(size=2) + 1j * rng.normal(size=2)
    hv = np.concatenate([h, np.zeros(2)])
    powers = [np.linalg.matrix_power(mat, n) @ h for n in range(5)]
    big = t1.matrix
    for n in range(1, 4):
        lhs = np.linalg.norm(np.linalg.matrix_power(big, n) @ hv) ** 2
        rhs = 0.5 * (
            np.linalg.norm(powers[n + 1]) ** 2 + np.linalg.norm(powers[n - 1]) ** 2
        )
        assert abs(lhs - rhs) < 1e-10 * max(1.0, rhs)


def test_tower_matches_direct_matrices():
    t = np.diag([1.0, 0.5])
    res = iterate_tower(Operator(t), 3)
    direct = tower_operator(Operator(t), 3)
    d = direct.matrix.shape[0]
    dd = direct.matrix.conj().T @ direct.matrix
    d2 = (
        np.linalg.matrix_power(direct.matrix, 2).conj().T
        @ np.linalg.matrix_power(direct.matrix, 2)
        - 2.0 * dd
        + np.eye(d)
    )
    assert abs(res.states[3].defect2_norm - op_norm(d2[:2, :2])) < 1e-12


def test_tower_sequence_oracle():
    # frozen values of the compressed second difference for diag(1, 1/2)
    res = iterate_tower(Operator(np.diag([1.0, 0.5])), 4)
    got = [s.defect2_norm for s in res.states]
    expect = [0.5625, 0.0703125, 0.1494140625, 0.0362548828125, 0.0770416259765625]
    assert np.allclose(got, expect, atol=1e-12)


def test_tower_reports_divergence():
    j = Operator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    res = iterate_tower(j, 5)
    assert res.diverging
    assert res.states == []


def test_a_t_limit_fixed_point():
    t = np.diag([0.9, 0.3]).astype(complex)
    a = a_t_limit(t)
    assert op_norm(t.conj().T @ a @ t - a) < 1e-10
    with pytest.raises(ConvergenceError):
        a_t_limit(np.array([[1.0 + 1e-3]]), n_max=20)


def test_lmi_structured_margins():
    t = dirichlet_shift(0.8, 20)
    res = lmi_feasibility(t, "a")
    assert res.feasible
    assert res.method == "delta_interior"
    assert res.margins["lower"] == 0.0
    assert res.margins["upper"] >= -1e-12


def test_lmi_dense_isometry():
    res = lmi_feasibility(np.eye(3), "a")
    assert res.feasible


def test_build_convex_lift_structured():
    t = dirichlet_shift(0.6, 16)
    cert = build_convex_lift(t, "a")
    assert cert.intertwine_residual < 1e-12
    assert cert.defect_residual < 1e-9
    # the lifted operator is convex on the masked interior
    big = cert.lift.matrix
    n = big.shape[0]
    t2 = big @ big
    delta = 0.5 * (t2.conj().T @ t2) - big.conj().T @ big + 0.5 * np.eye(n)
    sub = delta[np.ix_(cert.interior_mask, cert.interior_mask)]
    w = np.linalg.eigvalsh((sub + sub.conj().T) / 2)
    assert w[0] >= -1e-9


def test_build_convex_lift_variant_b():
    t = np.diag([1.0, 0.8]).astype(complex)
    cert = build_convex_lift(Operator(t), "b")
    assert cert.variant == "b"
    assert cert.intertwine_residual < 1e-12
    assert cert.defect_residual < 1e-9
