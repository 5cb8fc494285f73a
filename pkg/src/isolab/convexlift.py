"""Liftings of operators whose power norms form a convex sequence.

Here the second difference operator of T is

    Delta = T*^2 T^2 / 2 - T* T + I / 2,

and Delta >= 0 says that n -> ||T^n h||^2 is convex for every h.  Such
an operator admits a one step lifting

    T_1 = [[T, 0], [Delta^(1/2), 0]]

on H + H, whose power norms satisfy the averaging identity
||T_1^n h||^2 = (||T^(n+1) h||^2 + ||T^(n-1) h||^2) / 2 on the first
copy.  Iterating doubles the space and averages the squared power norm
profile toward a straight line.  A second route goes through an operator
inequality: any Hermitian A squeezed between Delta_T = T*T - I and its
conjugation T* A T yields a one block extension by an unweighted shift
whose first difference is A + 0 on the new space.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetError,
    ConvergenceError,
    InputValidationError,
    NotConvexError,
)
from .numerics import adjoint, herm_eig, op_norm, psd_sqrt
from .operators import Operator, check_lifting, from_blocks, inclusion_embedding
from .defect import growth_linear

__all__ = [
    "ConvexDefect",
    "TowerState",
    "TowerResult",
    "FeasibilityResult",
    "ConvexLiftCertificate",
    "convex_defect",
    "one_step_lift",
    "tower_operator",
    "iterate_tower",
    "a_t_limit",
    "lmi_feasibility",
    "build_convex_lift",
]


@dataclass
class ConvexDefect:
    matrix: np.ndarray
    min_eig: float
    norm: float
    convex: bool


@dataclass
class TowerState:
    level: int
    dim: int
    defect2_norm: float
    growth_c: float


@dataclass
class TowerResult:
    states: list
    diverging: bool
    converged: bool
    target: float


@dataclass
class FeasibilityResult:
    variant: str
    a: np.ndarray
    margins: dict
    feasible: bool
    method: str


@dataclass
class ConvexLiftCertificate:
    lift: Operator
    embedding: np.ndarray
    intertwine_residual: float
    defect_residual: float
    variant: str
    a: np.ndarray
    interior_mask: np.ndarray = None


def convex_defect(t, tol=None):
    """Second difference form Delta = T*^2 T^2 / 2 - T* T + I / 2."""
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    t2 = mat @ mat
    delta = 0.5 * (adjoint(t2) @ t2) - adjoint(mat) @ mat + 0.5 * np.eye(d)
    delta = (delta + adjoint(delta)) / 2.0
    w = herm_eig(delta).eigenvalues
    if tol is None:
        tol = 1e-9 * (1.0 + op_norm(mat) ** 2)
    return ConvexDefect(delta, float(w[0]), float(w[-1]), bool(w[0] >= -tol))


def one_step_lift(t):
    """One doubling step T -> [[T, 0], [Delta^(1/2), 0]] on H + H.

    The lower left entry is chosen so that the averaging identity
    ||T_1^n h||^2 = (||T^(n+1) h||^2 + ||T^(n-1) h||^2) / 2 holds for
    n >= 1; refuses operators that are not convex.
    """
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    cd = convex_defect(mat)
    if not cd.convex:
        raise NotConvexError(
            f"second difference form has min eigenvalue {cd.min_eig:.3e} < 0"
        )
    root = psd_sqrt(cd.matrix)
    d = mat.shape[0]
    z = np.zeros((d, d), dtype=complex)
    return from_blocks([[mat, z], [root, z]])


def tower_operator(t, level):
    """Level-j iterate of the doubling construction (dimension d 2^j)."""
    op = Operator.dense(t.matrix if isinstance(t, Operator) else t)
    for _ in range(level):
        op = one_step_lift(op)
    return op


def _base_gram_sequence(t, n_max):
    """A_n = T*^n T^n for n = 0 .. n_max."""
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    out = [np.eye(d, dtype=complex)]
    p = np.eye(d, dtype=complex)
    for _ in range(n_max):
        p = p @ mat
        out.append(adjoint(p) @ p)
    return out


def iterate_tower(t, levels, target=1e-6, n_max=64):
    """Track the compressed second difference along the doubling tower.

    The compressed power Gram operators obey the exact recursion

        A(j+1)_n = (A(j)_(n+1) + A(j)_(n-1)) / 2   (n >= 1),  A(j+1)_0 = I,

    so P_H Delta_2(T_j) P_H = (A(j)_2 - 2 A(j)_1 + A(j)_0) / 1 needs only
    the base sequence up to n = levels + 2.  Divergent linear growth of
    ||T^n||^2 is reported instead of iterated.
    """
    growth = growth_linear(t, n_max)
    if growth.diverging:
        return TowerResult([], True, False, target)
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    seq = _base_gram_sequence(mat, levels + 2)
    states = []
    for j in range(levels + 1):
        delta2 = seq[2] - 2.0 * seq[1] + seq[0]
        c = max(
            float(np.real(herm_eig(seq[n]) .eigenvalues[-1]) / (n + 1.0))
            for n in range(min(len(seq), n_max))
        )
        states.append(TowerState(j, d * 2 ** j, op_norm(delta2), c))
        nxt = [np.eye(d, dtype=complex)]
        for n in range(1, len(seq) - 1):
            nxt.append((seq[n + 1] + seq[n - 1]) / 2.0)
        seq = nxt
    converged = bool(states and states[-1].defect2_norm <= target)
    return TowerResult(states, False, converged, target)


def a_t_limit(t, n_max=2000, tol=1e-12):
    """Limit of the decreasing conjugation sequence A_n = T*^n T^n.

    Exists for contractions (and more generally when the sequence
    stabilizes); satisfies T* A T = A.  Raises ConvergenceError when the
    iteration has not settled within the budget.
    """
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    a = np.eye(mat.shape[0], dtype=complex)
    for _ in range(n_max):
        nxt = adjoint(mat) @ a @ mat
        nxt = (nxt + adjoint(nxt)) / 2.0
        if op_norm(nxt - a) <= tol:
            return nxt
        a = nxt
    raise ConvergenceError(
        f"conjugation sequence did not stabilize within {n_max} steps"
    )


def _variant_margins(t, a, variant):
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    delta_t = adjoint(mat) @ mat - np.eye(d)
    conj = adjoint(mat) @ a @ mat
    if variant == "a":
        lower = a - delta_t
        upper = conj - a
    elif variant == "b":
        lower = a - delta_t
        upper = (conj - a) - (a - delta_t)
    else:
        raise InputValidationError(f"unknown inequality variant {variant!r}")
    return {
        "lower": float(herm_eig((lower + adjoint(lower)) / 2).eigenvalues[0]),
        "upper": float(herm_eig((upper + adjoint(upper)) / 2).eigenvalues[0]),
    }


def _subgradient_search(t, variant, steps, tol):
    """Maximize the worst constraint margin over Hermitian A by ascent."""
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    a = np.zeros((d, d), dtype=complex)
    radius = 4.0 * (1.0 + op_norm(mat) ** 2)
    best_a, best_m = a.copy(), -np.inf

    def margin_grad(a):
        delta_t = adjoint(mat) @ mat - np.eye(d)
        conj_map = lambda x: adjoint(mat) @ x @ mat
        if variant == "a":
            forms = [
                (a - delta_t, lambda v: np.outer(v, v.conj())),
                (conj_map(a) - a, lambda v: conj_map_adj(v) - np.outer(v, v.conj())),
            ]
        else:
            forms = [
                (a - delta_t, lambda v: np.outer(v, v.conj())),
                (
                    conj_map(a) - 2.0 * a + delta_t,
                    lambda v: conj_map_adj(v) - 2.0 * np.outer(v, v.conj()),
                ),
            ]

        def conj_map_adj(v):
            return mat @ np.outer(v, v.conj()) @ adjoint(mat)

        vals, grads = [], []
        for form, grad in forms:
            eig = herm_eig((form + adjoint(form)) / 2)
            v = eig.eigenvectors[:, 0]
            vals.append(eig.eigenvalues[0])
            grads.append(grad(v))
        i = int(np.argmin(vals))
        return float(vals[i]), grads[i]

    for k in range(steps):
        m, g = margin_grad(a)
        if m > best_m:
            best_m, best_a = m, a.copy()
        if m >= tol:
            break
        gn = op_norm(g)
        if gn == 0.0:
            break
        a = a + (0.5 / (1.0 + 0.05 * k)) * g / gn
        a = (a + adjoint(a)) / 2.0
        na = op_norm(a)
        if na > radius:
            a *= radius / na
    return best_a


def _lmi_structured(op, variant, tol):
    """Interior margins for truncated weighted shifts, from the weights.

    The candidate A is the interior first difference diag(alpha_{s+1}^2 - 1);
    its conjugation T* A T is again diagonal with entries
    alpha_{s+1}^2 (alpha_{s+2}^2 - 1), which needs one weight beyond the
    truncation edge.  Interior-compressed m-isometries (never exactly
    m-isometric as finite matrices) are handled exactly this way.
    """
    if variant not in ("a", "b"):
        raise InputValidationError(f"unknown inequality variant {variant!r}")
    n = op.n_coords
    if op.weights is None or len(op.weights) < n:
        raise BudgetError(
            f"interior margins need {n} weights, have "
            f"{0 if op.weights is None else len(op.weights)}"
        )
    w2 = np.asarray(op.weights[:n], dtype=float) ** 2
    a_diag = w2[: n - 1] - 1.0
    conj_diag = w2[: n - 1] * (w2[1:n] - 1.0)
    # A = Delta_T makes the lower constraint exact in both variants,
    # and the two upper margins coincide
    margins = {"lower": 0.0, "upper": float(np.min(conj_diag - a_diag))}
    a = np.kron(np.diag(a_diag), np.eye(op.multiplicity)).astype(complex)
    return FeasibilityResult(
        variant, a, margins, bool(min(margins.values()) >= -tol), "delta_interior"
    )


def lmi_feasibility(t, variant="a", tol=1e-8, search_steps=400):
    """Find Hermitian A satisfying the variant's two sided inequality.

    Variant "a" asks Delta_T <= A <= T* A T; variant "b" asks
    0 <= A - Delta_T <= T* A T - A.  Closed form candidates (zero, the
    first difference itself, the conjugation limit) are tried before the
    iterative search.  Structured shifts are evaluated on the interior
    with closed form weight expressions.
    """
    if isinstance(t, Operator) and t.structured:
        return _lmi_structured(t, variant, tol)
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    delta_t = adjoint(mat) @ mat - np.eye(d)
    candidates = [("zero", np.zeros((d, d), dtype=complex)), ("delta", delta_t)]
    try:
        candidates.append(("conjugation_limit", a_t_limit(mat) - np.eye(d)))
        candidates.append(("conjugation_limit_raw", a_t_limit(mat)))
    except ConvergenceError:
        pass
    for name, a in candidates:
        margins = _variant_margins(mat, a, variant)
        if min(margins.values()) >= -tol:
            return FeasibilityResult(variant, a, margins, True, name)
    a = _subgradient_search(mat, variant, search_steps, tol)
    margins = _variant_margins(mat, a, variant)
    return FeasibilityResult(
        variant, a, margins, bool(min(margins.values()) >= -tol), "subgradient"
    )


def build_convex_lift(t, variant="a", trunc=32, feasibility=None, rank_tol=1e-10):
    """One block extension realizing the chosen inequality variant.

    Variant "a" adjoins a truncated unweighted shift over the defect
    space of A - Delta_T, giving first difference A + 0 away from the
    truncation edge.  Variant "b" adjoins a single zero column, giving
    first difference A + (-I).  For structured shift inputs the base
    operator has its own truncation edge, which the interior mask of the
    certificate excludes along with the adjoined shift's edge.
    """
    structured = isinstance(t, Operator) and t.structured
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    if feasibility is None:
        feasibility = lmi_feasibility(t, variant)
    if not feasibility.feasible:
        raise NotConvexError(
            f"inequality variant {variant!r} infeasible: margins {feasibility.margins}"
        )
    a = feasibility.a
    # base interior: coordinates on which first differences are exact
    base_keep = np.ones(d, dtype=bool)
    if structured:
        base_keep[(t.n_coords - 1) * t.multiplicity :] = False
    a_full = np.zeros((d, d), dtype=complex)
    k = a.shape[0]
    a_full[:k, :k] = a
    delta_t = adjoint(mat) @ mat - np.eye(d)
    gap = (a_full - delta_t)[np.ix_(base_keep, base_keep)]
    eig = herm_eig((gap + adjoint(gap)) / 2)
    keep = eig.eigenvalues > rank_tol * (1.0 + abs(eig.eigenvalues[-1]))
    rank = int(np.count_nonzero(keep))
    x_rows = (
        np.diag(np.sqrt(eig.eigenvalues[keep])) @ adjoint(eig.eigenvectors[:, keep])
        if rank
        else np.zeros((0, int(base_keep.sum())))
    )
    x = np.zeros((max(rank, 1), d), dtype=complex)
    if rank:
        x[:, base_keep] = x_rows
    rank_eff = max(rank, 1)

    if variant == "b":
        z = np.zeros((d, d), dtype=complex)
        pad = np.zeros((d, d), dtype=complex)
        pad[:rank_eff, :] = x[: min(rank_eff, d), :]
        lift = from_blocks([[mat, z], [pad, z]])
        emb = inclusion_embedding(d, 2 * d)
        mask = np.concatenate([base_keep, np.ones(d, dtype=bool)])
        dd = adjoint(lift.matrix) @ lift.matrix - np.eye(2 * d)
        expected = np.zeros((2 * d, 2 * d), dtype=complex)
        expected[:d, :d] = a_full
        expected[d:, d:] = -np.eye(d)
        resid = op_norm((dd - expected)[np.ix_(mask, mask)])
        interior = check_lifting(lift, mat, emb.map)
        return ConvexLiftCertificate(
            lift, emb.map, interior.residuals[0], resid, variant, a, mask
        )

    shift = np.eye(trunc * rank_eff, k=-rank_eff, dtype=complex)
    col = np.zeros((trunc * rank_eff, d), dtype=complex)
    col[:rank_eff, :] = x
    z = np.zeros((d, trunc * rank_eff), dtype=complex)
    lift = from_blocks([[mat, z], [col, shift]])
    emb = inclusion_embedding(d, d + trunc * rank_eff)
    # the mask is chosen degree-2 safe so the same certificate supports
    # both the first difference identity and the convexity margin
    mask = np.concatenate([base_keep, np.ones(trunc * rank_eff, dtype=bool)])
    if structured:
        mask[(t.n_coords - 2) * t.multiplicity : d] = False
    mask[d + (trunc - 2) * rank_eff :] = False
    dd = adjoint(lift.matrix) @ lift.matrix - np.eye(d + trunc * rank_eff)
    expected = np.zeros_like(dd)
    expected[:d, :d] = a_full
    resid = op_norm((dd - expected)[np.ix_(mask, mask)])
    interior = check_lifting(lift, mat, emb.map)
    return ConvexLiftCertificate(
        lift, emb.map, interior.residuals[0], resid, variant, a, mask
    )
