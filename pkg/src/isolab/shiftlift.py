"""Liftings of polynomially bounded operators to expansive weighted shifts.

An operator with ||T^n|| <= K n^{m/2} embeds isometrically under a
truncated weighted shift of order m + 3.  The shift weights are

    alpha_s = ((2Ks + 1) / (2K(s - 1) + 1)) ** ((m + 2) / 2)

so that ||S^n e_0||^2 = (2Kn + 1)^(m + 2), and the embedding uses the
summable coefficients b_s = (2Ks + 1)^(-m-2).  The key smallness fact is

    sum_{s>=1} b_s ||T^s||^2  <=  K^2 sum_s (2Ks)^(-2) ... <= pi^2 / 24,

strictly below 1/2, which keeps the Neumann solve for the embedding
Gram operator well conditioned.  A bilateral variant of the same shift
gives a power dilation up to a truncation tail.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmbeddingMarginError, GrowthDivergenceError
from .numerics import adjoint, herm_eig, op_norm, psd_sqrt
from .operators import (
    Operator,
    check_dilation,
    check_lifting,
    make_weighted_shift,
)
from .defect import defect_operator, growth_constant

__all__ = [
    "ShiftLiftPlan",
    "LiftingCertificate",
    "DilationCertificate",
    "plan_shift_lift",
    "solve_embedding",
    "build_shift_lift",
    "build_bilateral_dilation",
]


@dataclass
class ShiftLiftPlan:
    m: int
    K: float
    trunc: int
    weights: np.ndarray
    b: np.ndarray
    q: float
    tail_bound: float


@dataclass
class LiftingCertificate:
    lift: Operator
    embedding: np.ndarray
    iso_residual: float
    intertwine_residual: float
    defect_order: int
    defect_norm: float
    expansive_margin: float
    plan: ShiftLiftPlan


@dataclass
class DilationCertificate:
    dilation: Operator
    embedding: np.ndarray
    iso_residual: float
    power_residuals: list
    exponent_used: int
    min_weight_sq: float
    plan: ShiftLiftPlan


def _shift_weights(k, m, count):
    s = np.arange(1, count + 1, dtype=float)
    return ((2.0 * k * s + 1.0) / (2.0 * k * (s - 1.0) + 1.0)) ** ((m + 2.0) / 2.0)


def _b_coeffs(k, m, count):
    s = np.arange(1, count + 1, dtype=float)
    return (2.0 * k * s + 1.0) ** (-(m + 2.0))


def plan_shift_lift(t, m, trunc, n_max=None):
    """Choose K and the shift data; refuse if the growth bound fails.

    tail_bound dominates sum_{s >= trunc} b_s ||T^s||^2 via the integral
    estimate K^(-m) 2^(-m-2) / (trunc - 1).
    """
    if n_max is None:
        n_max = max(4 * trunc, 64)
    growth = growth_constant(t, m, n_max)
    if growth.diverging:
        raise GrowthDivergenceError(
            f"power norms do not obey ||T^n|| <= K n^({m}/2); "
            "no finite growth constant at this order"
        )
    k = growth.K
    b = _b_coeffs(k, m, trunc - 1)
    norms_sq = np.array(
        [n ** 2 for n in _power_norm_list(t, trunc - 1)], dtype=float
    )
    q = float(b @ norms_sq)
    tail = k ** (-m) * 2.0 ** (-(m + 2.0)) / (trunc - 1.0)
    # weights past the truncation edge are kept so interior defect
    # formulas of order up to m + 3 stay closed form
    weights = _shift_weights(k, m, trunc + m + 3)
    return ShiftLiftPlan(m, k, trunc, weights, b, q, tail)


def _power_norm_list(t, count):
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    out = []
    p = np.eye(mat.shape[0], dtype=complex)
    for _ in range(count):
        p = p @ mat
        out.append(op_norm(p))
    return out


def solve_embedding(t, plan, tol=1e-13, max_iter=500):
    """Solve M + sum_s b_s T^s M T*^s = I and assemble the isometry W.

    The fixed point iteration M <- I - sum b_s T^s M T*^s contracts with
    factor q = sum b_s ||T^s||^2, which the plan guarantees is below 1/2
    (up to the truncation tail); otherwise the margin is refused.  The
    embedding has block rows sqrt(b_s) M^(1/2) T*^s, with the s = 0 row
    equal to M^(1/2), and satisfies W* W = I exactly for the truncated
    equation.
    """
    if plan.q + plan.tail_bound >= 0.5:
        raise EmbeddingMarginError(
            f"series mass q = {plan.q:.6f} (+ tail {plan.tail_bound:.2e}) "
            "is not below 1/2; embedding Gram operator may be singular"
        )
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    eye = np.eye(d, dtype=complex)
    powers = [eye]
    for _ in range(plan.trunc - 1):
        powers.append(powers[-1] @ mat)
    m_op = eye.copy()
    for _ in range(max_iter):
        acc = np.zeros((d, d), dtype=complex)
        for s in range(1, plan.trunc):
            p = powers[s]
            acc += plan.b[s - 1] * (p @ m_op @ adjoint(p))
        nxt = eye - acc
        nxt = (nxt + adjoint(nxt)) / 2.0
        if op_norm(nxt - m_op) <= tol:
            m_op = nxt
            break
        m_op = nxt
    lam_min = herm_eig(m_op).eigenvalues[0]
    floor = (1.0 - 2.0 * plan.q) / (1.0 - plan.q) - 1e-8
    if lam_min < min(floor, 0.0) or lam_min <= 0.0:
        raise EmbeddingMarginError(
            f"Gram operator lost positivity: lambda_min = {lam_min:.3e}"
        )
    root = psd_sqrt(m_op)
    rows = [root]
    for s in range(1, plan.trunc):
        rows.append(np.sqrt(plan.b[s - 1]) * (root @ adjoint(powers[s])))
    return np.vstack(rows), m_op


def build_shift_lift(t, m, trunc, n_max=None):
    """Order m + 3 isometric lifting of T on a truncated weighted shift space."""
    plan = plan_shift_lift(t, m, trunc, n_max=n_max)
    w, _ = solve_embedding(t, plan)
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    s_op = make_weighted_shift(
        plan.weights, trunc, multiplicity=mat.shape[0], kind="unilateral"
    )
    iso = op_norm(adjoint(w) @ w - np.eye(mat.shape[0]))
    lift = check_lifting(s_op, mat, w)
    order = m + 3
    delta = defect_operator(s_op, order)
    # expansivity of the shift is a weight statement: S*S - I has
    # diagonal alpha_s^2 - 1 on the interior
    margin = float(np.min(plan.weights[: trunc - 1]) ** 2 - 1.0)
    return LiftingCertificate(
        lift=s_op,
        embedding=w,
        iso_residual=iso,
        intertwine_residual=lift.residuals[0],
        defect_order=order,
        defect_norm=op_norm(delta),
        expansive_margin=float(margin),
        plan=plan,
    )


def build_bilateral_dilation(t, m, trunc, max_power, exponent=None, n_max=None):
    """Bilateral shift power dilation W* S^n W ~= T^n, up to truncation tail.

    Weight squares are |2Kn + 1| ** exponent over coordinates n in
    [-trunc, trunc); the default exponent m + 2 matches the unilateral
    lifting and keeps the bilateral series summable.  The absolute value
    guards the odd-exponent sign at negative n.  The compression
    identity holds only up to a tail of order sum_{s >= trunc - n} b_s,
    which decays slowly in trunc; the returned residuals report the
    actual achieved accuracy.
    """
    if exponent is None:
        exponent = m + 2
    plan = plan_shift_lift(t, m, trunc, n_max=n_max)
    n = np.arange(-trunc, trunc + 1, dtype=float)
    w_seq = np.abs(2.0 * plan.K * n + 1.0) ** float(exponent)
    if w_seq.min() <= 0.0:
        raise EmbeddingMarginError("bilateral weight sequence hit zero")
    alphas = np.sqrt(w_seq[1:] / w_seq[:-1])
    w_uni, _ = solve_embedding(t, plan)
    d = w_uni.shape[1]
    s_op = make_weighted_shift(alphas, trunc, multiplicity=d, kind="bilateral")
    emb = np.zeros((2 * trunc * d, d), dtype=complex)
    emb[trunc * d :, :] = w_uni
    iso = op_norm(adjoint(emb) @ emb - np.eye(d))
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    report = check_dilation(s_op, mat, emb, max_power)
    return DilationCertificate(
        dilation=s_op,
        embedding=emb,
        iso_residual=iso,
        power_residuals=report.residuals,
        exponent_used=exponent,
        min_weight_sq=float(w_seq.min()),
        plan=plan,
    )
