"""m-isometry defect operators, order classification, and growth estimates.

The order-m defect of T is the alternating binomial sum
``sum_j (-1)^j C(m, j) T*^j T^j``; its vanishing defines an m-isometry.
For truncated weighted shifts the interior compression of the defect is
diagonal with entries given by products of weights, which is both exact
(the truncation artifact lives outside the interior) and much cheaper
than dense matrix powers.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, InputValidationError
from .numerics import adjoint, herm_eig, op_norm
from .operators import Operator, interior_dim

__all__ = [
    "DefectReport",
    "GrowthReport",
    "Classification",
    "defect_operator",
    "is_m_isometric",
    "min_isometry_order",
    "growth_constant",
    "growth_linear",
    "classify",
    "shift_conjugation",
]

#: default tolerance scale for class predicates (defect forms are degree 4 in T)
def predicate_tol(t):
    return 1e-9 * (1.0 + op_norm(t.matrix) ** 2)


@dataclass
class DefectReport:
    order: int
    defect_norm_interior: float
    interior_dim: int
    tol: float
    verdict: bool = field(init=False)

    def __post_init__(self):
        self.verdict = bool(self.defect_norm_interior <= self.tol)


@dataclass
class GrowthReport:
    """K = max(1, sup_{1<=n<=n_max} n^{-m/2} ||T^n||) over the computed range."""

    exponent: int
    K: float
    n_max: int
    sequence: list
    diverging: bool


@dataclass
class Classification:
    expansive: bool
    contraction: bool
    convex: bool
    concave: bool
    power_bounded: bool
    growth_K: float

    def as_set(self):
        labels = set()
        for name in ("expansive", "contraction", "convex", "concave"):
            if getattr(self, name):
                labels.add(name)
        if self.power_bounded:
            labels.add("power_bounded")
        return labels


def _shift_weight_products(op, degree, n_entries):
    """w2[s, j] = squared product of j transition weights out of coordinate s."""
    w = op.weights
    need = n_entries - 1 + degree
    if len(w) < need:
        raise BudgetError(
            f"need {need} weights for degree {degree} on {n_entries} interior coordinates, "
            f"have {len(w)}"
        )
    out = np.ones((n_entries, degree + 1))
    for j in range(1, degree + 1):
        out[:, j] = out[:, j - 1] * w[j - 1 : j - 1 + n_entries] ** 2
    return out


def _interior_diag_form(op, coeffs):
    """Diagonal interior compression of sum_j coeffs[j] T*^j T^j for a shift."""
    degree = len(coeffs) - 1
    k = interior_dim(op, degree).count
    prods = _shift_weight_products(op, degree, k)
    diag = prods @ np.asarray(coeffs, dtype=float)
    return np.kron(np.diag(diag), np.eye(op.multiplicity)).astype(complex)


def _dense_binomial_form(t, coeffs):
    m = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = m.shape[0]
    acc = coeffs[0] * np.eye(d, dtype=complex)
    p = np.eye(d, dtype=complex)
    for j in range(1, len(coeffs)):
        p = p @ m
        acc = acc + coeffs[j] * (adjoint(p) @ p)
    return (acc + adjoint(acc)) / 2.0


def defect_operator(t, m):
    """Hermitian defect of order m, compressed to the interior for shifts."""
    if m < 1:
        raise InputValidationError("defect order must be >= 1")
    coeffs = [(-1.0) ** j * math.comb(m, j) for j in range(m + 1)]
    if t.structured:
        return _interior_diag_form(t, coeffs)
    return _dense_binomial_form(t, coeffs)


def is_m_isometric(t, m, tol=1e-10):
    delta = defect_operator(t, m)
    k = interior_dim(t, m).count if t.structured else t.dim
    return DefectReport(m, op_norm(delta), k, tol)


def min_isometry_order(t, m_max, tol=1e-10):
    """Least m <= m_max whose defect vanishes at tolerance, or None."""
    for m in range(1, m_max + 1):
        if is_m_isometric(t, m, tol).verdict:
            return m
    return None


def _power_norms(t, n_max):
    m = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    norms = []
    p = np.eye(m.shape[0], dtype=complex)
    for _ in range(n_max):
        p = p @ m
        nrm = op_norm(p)
        norms.append(nrm)
        if not np.isfinite(nrm) or nrm > 1e150:
            break
    return norms


def _diverging(scaled):
    """Trend heuristic: running sup still grows > 5% over the second half.

    Bounded conjugated-unitary families creep toward their sup by a couple
    of percent late in the window; genuinely divergent sequences (one more
    power of n, or geometric growth) at least double over the same span.
    """
    if not scaled:
        return True
    sup = np.maximum.accumulate(scaled)
    q = max(1, len(scaled) // 2) - 1
    return bool(sup[-1] > 1.05 * sup[q])


def growth_constant(t, m, n_max):
    """Estimate K = max(1, sup n^{-m/2} ||T^n||) over n = 1..n_max."""
    if n_max < 1:
        raise InputValidationError("n_max must be >= 1")
    norms = _power_norms(t, n_max)
    overflow = len(norms) < n_max
    scaled = [norms[n - 1] / n ** (m / 2.0) for n in range(1, len(norms) + 1)]
    k = max(1.0, max(scaled)) if scaled else 1.0
    return GrowthReport(m, k, n_max, norms, overflow or _diverging(scaled))


def growth_linear(t, n_max):
    """The n+1 normalization: c = sup_{n>=0} ||T^n||^2 / (n+1), with trend flag."""
    norms = _power_norms(t, n_max)
    overflow = len(norms) < n_max
    scaled = [1.0] + [norms[n - 1] ** 2 / (n + 1.0) for n in range(1, len(norms) + 1)]
    report = GrowthReport(1, max(scaled), n_max, norms, overflow or _diverging(scaled))
    return report


def shift_conjugation(op, a):
    """Exact interior values of T* A T for a truncated weighted shift.

    Returns the (N-1)-coordinate compression; entry (i, j) equals
    alpha_{i+1} alpha_{j+1} A_{i+1, j+1} per fiber pair, which uses only
    data inside the truncation plus the stored weights.
    """
    if not op.structured:
        return adjoint(op.matrix) @ np.asarray(a, dtype=complex) @ op.matrix
    mult = op.multiplicity
    k = op.n_coords - 1
    a = np.asarray(a, dtype=complex)
    sub = a[mult : (k + 1) * mult, mult : (k + 1) * mult]
    scale = np.repeat(op.weights[:k], mult)
    return sub * np.outer(scale, scale)


def classify(t, tol=None, n_max=100):
    """Decide expansive / contraction / convex / concave / power bounded.

    Quadratic and quartic forms are evaluated on the interior for
    structured operators, so truncation outflow does not corrupt the
    predicates.
    """
    if tol is None:
        tol = predicate_tol(t)
    if t.structured:
        d1 = _interior_diag_form(t, [-1.0, 1.0])           # T*T - I
        d2 = _interior_diag_form(t, [1.0, -2.0, 1.0])      # T*2T2 - 2T*T + I
    else:
        d1 = _dense_binomial_form(t, [-1.0, 1.0])
        d2 = _dense_binomial_form(t, [1.0, -2.0, 1.0])
    w1 = herm_eig(d1).eigenvalues
    w2 = herm_eig(d2).eigenvalues
    growth = growth_constant(t, 0, n_max)
    return Classification(
        expansive=bool(w1[0] >= -tol),
        contraction=bool(w1[-1] <= tol),
        convex=bool(w2[0] >= -tol),
        concave=bool(w2[-1] <= tol),
        power_bounded=not growth.diverging,
        growth_K=growth.K,
    )
