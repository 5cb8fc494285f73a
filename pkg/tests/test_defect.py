"""Tests for defect operators, growth constants and classification."""

import numpy as np
import pytest

from isolab.defect import (
    classify,
    defect_operator,
    growth_constant,
    growth_linear,
    is_m_isometric,
    min_isometry_order,
    shift_conjugation,
)
from isolab.errors import InputValidationError
from isolab.numerics import op_norm
from isolab.operators import Operator, make_weighted_shift


def dirichlet_shift(c, n):
    s = np.arange(1, n + 1, dtype=float)
    w = np.sqrt((1.0 + c * s) / (1.0 + c * (s - 1.0)))
    return make_weighted_shift(w, n + 1)


def test_unitary_is_1_isometric():
    u = Operator(np.diag(np.exp(1j * np.array([0.3, 1.1, 2.0]))))
    rep = is_m_isometric(u, 1)
    assert rep.verdict
    assert rep.defect_norm_interior < 1e-14


def test_dirichlet_shift_is_2_isometric_interior():
    t = dirichlet_shift(0.7, 40)
    rep = is_m_isometric(t, 2)
    assert rep.verdict
    assert rep.defect_norm_interior < 1e-12
    assert min_isometry_order(t, 4) == 2


def test_jordan_block_is_3_isometric():
    # unitary plus nilpotent of order 2 is a 3-isometry
    j = Operator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not is_m_isometric(j, 2).verdict
    assert is_m_isometric(j, 3).verdict


def test_defect_order_rejects_zero():
    with pytest.raises(InputValidationError):
        defect_operator(Operator(np.eye(2)), 0)


def test_defect_hierarchy():
    t = dirichlet_shift(0.3, 30)
    n2 = op_norm(defect_operator(t, 2))
    n3 = op_norm(defect_operator(t, 3))
    assert n3 <= 4.0 * max(n2, 1e-15)


def test_growth_constant_contraction():
    t = Operator(0.5 * np.eye(2))
    g = growth_constant(t, 0, n_max=50)
    assert abs(g.K - 1.0) < 1e-12
    assert not g.diverging


def test_growth_constant_flags_divergence():
    t = Operator(np.array([[2.0]]))
    g = growth_constant(t, 0, n_max=400)
    assert g.diverging


def test_growth_linear_on_jordan():
    # ||J^n||^2 grows like n^2, so the (n+1) normalization diverges
    j = Operator(np.array([[1.0, 1.0], [0.0, 1.0]]))
    g = growth_linear(j, 200)
    assert g.diverging
    # a 2-isometric shift has linear growth and a finite constant
    t = dirichlet_shift(0.5, 60)
    g2 = growth_linear(t, 40)
    assert not g2.diverging


def test_shift_conjugation_matches_dense():
    t = dirichlet_shift(0.5, 20)
    n = t.n_coords
    rng = np.random.default_rng(5)
    a = np.diag(rng.uniform(0.5, 1.5, size=n)).astype(complex)
    conj = shift_conjugation(t, a)
    dense = t.matrix.conj().T @ a @ t.matrix
    k = n - 1
    assert op_norm(conj - dense[:k, :k]) < 1e-13


def test_classify_dirichlet_shift():
    t = dirichlet_shift(1.0, 25)
    c = classify(t)
    assert c.expansive
    assert c.convex
    assert not c.contraction


def test_classify_strict_contraction():
    c = classify(Operator(0.5 * np.eye(3)))
    assert c.contraction
    assert c.power_bounded
    assert not c.expansive
