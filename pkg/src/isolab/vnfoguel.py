"""Extremal shifts, Foguel block operators, and commutant lifting machinery.

The extremal weighted shift S_K (weights (2Ks + 1) / (2K(s - 1) + 1))
majorizes the polynomial calculus of every K power bounded operator:
||p(T)|| <= ||p(S_K)||.  The Foguel block operator F = [[S*, X / N], [0, S]]
with lacunary coupling X is power bounded but resists polynomial bounds;
its power norms obey sup_n ||F^n|| <= (1/N + sqrt(4 + 1/N)) / 2.

The lifting half of the module builds minimal isometric liftings of
contractions in block form V = [[C, 0], [D_C, S]], intertwines two such
liftings through a norm preserving commutant lift constructed one block
row at a time by Parrott completions, and assembles the resulting
operator S = V + Q with Q nilpotent of order two.  Such a sum is a
3-isometry wherever V is isometric and V, Q commute, which the
certificates verify on the truncation interior.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InputValidationError,
    IntertwiningError,
    NotContractionError,
    PowerBoundError,
)
from .numerics import adjoint, dkw_complete, op_norm, psd_sqrt
from .operators import (
    EmbeddingMap,
    Operator,
    check_dilation,
    check_lifting,
    make_weighted_shift,
)
from .defect import growth_constant

__all__ = [
    "FoguelSpec",
    "GridSup",
    "VNReport",
    "PowerReport",
    "TrendReport",
    "SchafferLift",
    "CommutantLift",
    "FoguelHankelCertificate",
    "DilationReport",
    "ErgodicReport",
    "extremal_shift",
    "poly_eval",
    "sup_grid",
    "vn_check",
    "foguel_operator",
    "foguel_power_report",
    "polybound_trend",
    "hankel_from_symbol",
    "schaffer_lifting",
    "commutant_lift",
    "foguel_hankel_lift",
    "unitary_extension_dilation",
    "ergodic_diagnostic",
]


# ---------------------------------------------------------------------------
# extremal shift and polynomial calculus


def _extremal_weights(k, count):
    s = np.arange(1, count + 1, dtype=float)
    return (2.0 * k * s + 1.0) / (2.0 * k * (s - 1.0) + 1.0)


def extremal_shift(k, n, multiplicity=1):
    """The K extremal weighted shift, truncated to n coordinates (K > 1)."""
    if not k > 1:
        raise InputValidationError(f"extremal shift needs K > 1, got {k}")
    return _extremal_shift_any(k, n, multiplicity)


def _extremal_shift_any(k, n, multiplicity=1):
    """Weight helper that also admits the K = 1 limit case (internal)."""
    if n == 1:
        return make_weighted_shift(
            np.ones(1), 1, multiplicity=multiplicity, kind="unilateral"
        )
    return make_weighted_shift(
        _extremal_weights(k, n + 1), n, multiplicity=multiplicity, kind="unilateral"
    )


def poly_eval(coeffs, a):
    """Horner evaluation of a polynomial (ascending coefficients) at a matrix."""
    coeffs = list(coeffs)
    if not coeffs:
        raise InputValidationError("polynomial needs at least one coefficient")
    mat = a.matrix if isinstance(a, Operator) else np.asarray(a, dtype=complex)
    d = mat.shape[0]
    out = complex(coeffs[-1]) * np.eye(d, dtype=complex)
    for c in reversed(coeffs[:-1]):
        out = out @ mat + complex(c) * np.eye(d, dtype=complex)
    return out


class GridSup(NamedTuple):
    """Grid sup of |p| on the unit circle with a Bernstein safety factor."""

    sup: float
    safety_factor: float
    n_points: int


def sup_grid(coeffs, n_points=4096):
    coeffs = np.asarray(list(coeffs), dtype=complex)
    deg = len(coeffs) - 1
    if deg * math.pi >= n_points:
        raise InputValidationError("grid too coarse for the polynomial degree")
    z = np.exp(2j * math.pi * np.arange(n_points) / n_points)
    vals = np.abs(np.polyval(coeffs[::-1], z))
    factor = 1.0 / (1.0 - math.pi * deg / n_points)
    return GridSup(float(vals.max()), factor, n_points)


@dataclass
class VNReport:
    poly_norm: float
    shift_norms: list
    sweep: list
    K: float
    power_sup: float
    tol: float
    monotone: bool
    verdict: bool


def vn_check(coeffs, t, k, sweep, tol=1e-8, n_max=100):
    """Test ||p(T)|| against the extremal shift calculus at constant K.

    Refuses operators that are not certified K power bounded over the
    first n_max powers.  The shift side is evaluated on nested truncations
    (co-invariant compressions, so the sequence is nondecreasing) and the
    verdict compares against the largest one.
    """
    growth = growth_constant(t, 0, n_max)
    sup_powers = max(growth.sequence) if growth.sequence else 1.0
    sup_powers = max(1.0, sup_powers)
    if growth.diverging or sup_powers > k * (1.0 + 1e-9) + tol:
        raise PowerBoundError(
            f"sup ||T^n|| = {sup_powers:.6g} over n <= {n_max} is not within "
            f"the requested constant K = {k}"
        )
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    p_norm = op_norm(poly_eval(coeffs, mat))
    shift_norms = []
    for n in sweep:
        s = _extremal_shift_any(k, int(n))
        shift_norms.append(op_norm(poly_eval(coeffs, s.matrix)))
    monotone = all(
        shift_norms[i + 1] >= shift_norms[i] - 1e-12
        for i in range(len(shift_norms) - 1)
    )
    bound = max(shift_norms) if shift_norms else 0.0
    return VNReport(
        poly_norm=p_norm,
        shift_norms=shift_norms,
        sweep=list(sweep),
        K=float(k),
        power_sup=float(sup_powers),
        tol=tol,
        monotone=monotone,
        verdict=bool(p_norm <= bound + tol),
    )


# ---------------------------------------------------------------------------
# Foguel block operator


@dataclass
class FoguelSpec:
    n_param: int
    trunc: int
    k_max: int

    def __post_init__(self):
        if self.n_param < 1 or self.k_max < 1:
            raise InputValidationError("n_param and k_max must be positive")
        if self.trunc < 3 ** self.k_max:
            raise InputValidationError(
                f"truncation {self.trunc} cannot hold index 3^{self.k_max}"
            )

    @property
    def coupling(self):
        return 1.0 / self.n_param


def _lacunary_coupling(spec):
    x = np.zeros((spec.trunc, spec.trunc), dtype=complex)
    for k in range(1, spec.k_max + 1):
        x[3 ** k, 3 ** k] = 1.0
    return x


def foguel_operator(spec, coupling_scale=None):
    """F = [[S*, X / N], [0, S]] with X supported on the lacunary diagonal."""
    n = spec.trunc
    s = np.eye(n, k=-1, dtype=complex)
    scale = spec.coupling if coupling_scale is None else coupling_scale
    x = scale * _lacunary_coupling(spec)
    f = np.block([[adjoint(s), x], [np.zeros((n, n), dtype=complex), s]])
    return Operator(f, structure="block")


@dataclass
class PowerReport:
    power_norms: list
    hankel_norms: list
    bound: float
    hankel_bound: float
    tol: float
    verdict: bool


def foguel_power_report(spec, n_max=60, tol=1e-9):
    """Power norms of F and of the rescaled Hankel blocks X_n.

    F^n = [[S*^n, X_n / N], [0, S^n]]; the report checks both
    sup ||F^n|| against (1/N + sqrt(4 + 1/N)) / 2 and every ||X_n||
    against 1.
    """
    f = foguel_operator(spec).matrix
    n = spec.trunc
    power_norms, hankel_norms = [], []
    p = f.copy()
    for _ in range(1, n_max + 1):
        power_norms.append(op_norm(p))
        hankel_norms.append(op_norm(p[:n, n:]) * spec.n_param)
        p = p @ f
    c = spec.coupling
    bound = (c + math.sqrt(4.0 + c)) / 2.0
    ok = max(power_norms) <= bound + tol and max(hankel_norms) <= 1.0 + tol
    return PowerReport(power_norms, hankel_norms, bound, 1.0, tol, bool(ok))


@dataclass
class TrendReport:
    ratios: list
    labels: list
    monotone: bool
    note: str


def polybound_trend(spec, family):
    """Ratios ||p(F)|| / sup|p| over a polynomial family (trend only).

    This demonstrates growth of the polynomial calculus constants; it is
    a finite trend table, not a proof of unboundedness.
    """
    if not family:
        raise InputValidationError("polynomial family is empty")
    f = foguel_operator(spec).matrix
    ratios = []
    for coeffs in family:
        g = sup_grid(coeffs)
        denom = max(g.sup * g.safety_factor, 1e-300)
        ratios.append(op_norm(poly_eval(coeffs, f)) / denom)
    monotone = all(ratios[i + 1] >= ratios[i] - 1e-12 for i in range(len(ratios) - 1))
    return TrendReport(
        ratios,
        [f"degree {len(c) - 1}" for c in family],
        monotone,
        "finite trend demonstration, not an asymptotic certificate",
    )


def hankel_from_symbol(symbol, n):
    """Hankel matrix C_{ij} = c_{i+j} from a finitely supported symbol.

    When the support fits inside the truncation (len(symbol) <= n), the
    intertwining C S = S* C holds exactly at truncation.
    """
    c = np.zeros(2 * n, dtype=complex)
    c[: len(symbol)] = np.asarray(symbol, dtype=complex)
    i = np.arange(n)
    return c[i[:, None] + i[None, :]]


# ---------------------------------------------------------------------------
# Schaffer liftings and commutant lifting


@dataclass
class SchafferLift:
    operator: Operator
    embedding: EmbeddingMap
    fiber_dim: int
    n_fibers: int
    defect: np.ndarray
    iso_residual_interior: float


def _contraction_matrix(c, tol):
    mat = c.matrix if isinstance(c, Operator) else np.asarray(c, dtype=complex)
    nrm = op_norm(mat)
    if nrm > 1.0 + tol:
        raise NotContractionError(f"operator norm {nrm:.6g} exceeds 1")
    return mat


def schaffer_lifting(c, n, tol=1e-8, rank_tol=1e-12):
    """Minimal-style isometric lifting V = [[C, 0], [D_C -> fiber 0, S]].

    The fiber space is the full ambient space unless the defect vanishes,
    in which case C is already an isometry and is returned unchanged.
    V* V = I holds exactly away from the last fiber.
    """
    mat = _contraction_matrix(c, tol)
    d = mat.shape[0]
    gram = np.eye(d) - adjoint(mat) @ mat
    defect = psd_sqrt((gram + adjoint(gram)) / 2.0)
    if op_norm(defect) <= rank_tol:
        op = Operator(mat, structure="block")
        return SchafferLift(op, EmbeddingMap(np.eye(d, dtype=complex), 0.0, 0.0), 0, n, defect, 0.0)
    big = d + n * d
    v = np.zeros((big, big), dtype=complex)
    v[:d, :d] = mat
    v[d : 2 * d, :d] = defect
    for s in range(n - 1):
        v[d + (s + 1) * d : d + (s + 2) * d, d + s * d : d + (s + 1) * d] = np.eye(d)
    op = Operator(v, structure="block")
    w = np.zeros((big, d), dtype=complex)
    w[:d, :d] = np.eye(d)
    cut = big - d
    iso = op_norm((adjoint(v) @ v - np.eye(big))[:cut, :cut])
    return SchafferLift(op, EmbeddingMap(w, 0.0, 0.0), d, n, defect, iso)


@dataclass
class CommutantLift:
    ctilde: np.ndarray
    intertwine_residual: float
    compression_residual: float
    norm_excess: float
    mu: float
    lift0: SchafferLift
    lift1: SchafferLift
    band_norms: list = None
    row_norms: list = None


def _julia_parts(c1):
    h1 = c1.shape[0]
    d_c1 = psd_sqrt(np.eye(h1) - adjoint(c1) @ c1)
    d_c1s = psd_sqrt(np.eye(h1) - c1 @ adjoint(c1))
    return d_c1, d_c1s


def commutant_lift(c, c0, c1, n, tol=1e-8):
    """Norm preserving intertwiner of two Schaffer liftings.

    Given C C1 = C0 C, the lift Ctilde on the extended spaces satisfies
    Ctilde V1 = V0 Ctilde on the interior, compresses back to C, and has
    norm at most ||C||.  Each new block row is a Parrott completion: a
    unitary change of the (initial space, first fiber) columns turns the
    intertwining constraint into fixed entries, leaving one free block
    chosen by dkw_complete at mu = ||C||.
    """
    c = np.asarray(c, dtype=complex)
    m0 = _contraction_matrix(c0, tol)
    m1 = _contraction_matrix(c1, tol)
    h0, h1 = m0.shape[0], m1.shape[0]
    if c.shape != (h0, h1):
        raise InputValidationError(f"intertwiner shape {c.shape} does not match spaces")
    mismatch = op_norm(c @ m1 - m0 @ c)
    if mismatch > tol * (1.0 + op_norm(c)):
        raise IntertwiningError(
            f"hypothesis C C1 = C0 C fails with residual {mismatch:.3e}"
        )
    lift0 = schaffer_lifting(m0, n, tol=tol)
    lift1 = schaffer_lifting(m1, n, tol=tol)
    mu = op_norm(c)
    f0, f1 = lift0.fiber_dim, lift1.fiber_dim
    big0 = h0 + n * f0
    big1 = h1 + n * f1
    ctilde = np.zeros((big0, big1), dtype=complex)
    ctilde[:h0, :h1] = c

    if f0 == 0:
        # no rows below the compression; Ctilde = [C, 0 ...]
        return _commutant_report(ctilde, c, lift0, lift1, mu)
    if f1 == 0:
        # C1 is unitary here (zero defect, finite dimension); the row
        # recursion a_k = a_{k-1} C1* solves the intertwining exactly
        a = lift0.defect @ c
        rows = []
        for k in range(n):
            a = a @ adjoint(m1)
            ctilde[h0 + k * f0 : h0 + (k + 1) * f0, :h1] = a
            rows.append(a)
        # rows beyond the compression violate the norm budget only if C
        # interacts with the defect; rescaling is not needed because
        # [C; D0 C; D0 C C1* ...] stacks an isometric column of C images
        return _commutant_report(ctilde, c, lift0, lift1, mu, rows, [])

    d_c1, d_c1s = _julia_parts(m1)
    a_prev = lift0.defect @ c          # a_{-1} = D0 C
    a_list, b_list, q_list = [], [], []
    top_q = c @ d_c1s
    for k in range(n):
        # known rows: transformed top row then transformed fiber rows < k
        kn_cols = h1 + k * f1
        a_blk = np.zeros((h0 + k * f0, kn_cols), dtype=complex)
        b_blk = np.zeros((h0 + k * f0, h1), dtype=complex)
        a_blk[:h0, :h1] = c @ m1
        b_blk[:h0, :] = top_q
        for j in range(k):
            r0 = h0 + j * f0
            row_a = a_list[j - 1] if j >= 1 else lift0.defect @ c
            a_blk[r0 : r0 + f0, :h1] = row_a
            for l in range(j):
                a_blk[r0 : r0 + f0, h1 + l * f1 : h1 + (l + 1) * f1] = b_list[j - 1 - l]
            b_blk[r0 : r0 + f0, :] = q_list[j]
        c_row = np.zeros((f0, kn_cols), dtype=complex)
        c_row[:, :h1] = a_prev
        for l in range(k):
            c_row[:, h1 + l * f1 : h1 + (l + 1) * f1] = b_list[k - 1 - l]
        q_k = dkw_complete(a_blk, b_blk, c_row, mu)
        a_k = a_prev @ adjoint(m1) + q_k @ d_c1s
        b_k = a_prev @ d_c1 - q_k @ m1
        a_list.append(a_k)
        b_list.append(b_k)
        q_list.append(q_k)
        a_prev = a_k

    for k in range(n):
        r0 = h0 + k * f0
        ctilde[r0 : r0 + f0, :h1] = a_list[k]
        for l in range(k + 1):
            ctilde[r0 : r0 + f0, h1 + l * f1 : h1 + (l + 1) * f1] = b_list[k - l]
    return _commutant_report(ctilde, c, lift0, lift1, mu, a_list, b_list)


def _commutant_report(ctilde, c, lift0, lift1, mu, a_list=None, b_list=None):
    h0, h1 = c.shape
    v0 = lift0.operator.matrix
    v1 = lift1.operator.matrix
    r = ctilde @ v1 - v0 @ ctilde
    # the last fiber column of the source space is truncation outflow
    f1 = lift1.fiber_dim
    cut = ctilde.shape[1] - f1 if f1 else ctilde.shape[1]
    intertwine = op_norm(r[:, :cut])
    compression = op_norm(ctilde[:h0, :h1] - c)
    excess = op_norm(ctilde) - mu
    return CommutantLift(
        ctilde,
        intertwine,
        compression,
        float(excess),
        mu,
        lift0,
        lift1,
        [op_norm(b) for b in (b_list or [])],
        [op_norm(a) for a in (a_list or [])],
    )


# ---------------------------------------------------------------------------
# Foguel-Hankel 3-isometric lifting


@dataclass
class FoguelHankelCertificate:
    lift: Operator
    embedding: np.ndarray
    q_square_norm: float
    commutator_norm: float
    defect3_interior: float
    lifting_residual: float
    commutant: CommutantLift


def _ladder_mask(h, fiber, n, exclude_fibers):
    """Keep the initial space and all but the last few fibers."""
    keep = np.zeros(h + n * fiber, dtype=bool)
    keep[:h] = True
    if fiber:
        keep[h : h + max(n - exclude_fibers, 0) * fiber] = True
    return keep


def foguel_hankel_lift(c0, c, c1, n, tol=1e-8):
    """3-isometric lifting of [[C0, C], [0, C1]] when C C1 = C0 C.

    S = [[V0, Ctilde], [0, V1]] = V + Q with V = V0 + V1 isometric on the
    interior and Q strictly upper triangular with Q^2 = 0.  The order 3
    defect of S is evaluated away from the last three fibers of each
    ladder, where the truncated algebra matches the untruncated one.
    """
    c = np.asarray(c, dtype=complex)
    cl = commutant_lift(c, c0, c1, n, tol=tol)
    m0 = cl.lift0.operator.matrix
    m1 = cl.lift1.operator.matrix
    k0, k1 = m0.shape[0], m1.shape[0]
    h0 = c.shape[0]
    h1 = c.shape[1]
    s = np.block(
        [[m0, cl.ctilde], [np.zeros((k1, k0), dtype=complex), m1]]
    )
    q = np.zeros_like(s)
    q[:k0, k0:] = cl.ctilde
    v = s - q
    q2 = op_norm(q @ q)
    # the commutator is supported on the Ctilde block; interior columns only
    comm = v @ q - q @ v
    f1 = cl.lift1.fiber_dim
    cut = k0 + (k1 - f1 if f1 else k1)
    comm_norm = op_norm(comm[:, k0:cut])
    # The intertwiner band reaches the truncation edge of the target
    # ladder from every source fiber, so the source side of the interior
    # must retreat until the remaining band tail is negligible at the
    # working tolerance.
    band_tol = max(np.sqrt(tol) / 4.0, 1e-12)
    band = cl.band_norms or []
    kcut = next(
        (k for k in range(len(band)) if max(band[k:]) <= band_tol), len(band)
    )
    exclude1 = min(kcut + 3, cl.lift1.n_fibers - 1) if f1 else 3
    mask = np.concatenate(
        [
            _ladder_mask(h0, cl.lift0.fiber_dim, cl.lift0.n_fibers, 3),
            _ladder_mask(h1, cl.lift1.fiber_dim, cl.lift1.n_fibers, exclude1),
        ]
    )
    big = s.shape[0]
    delta3 = np.eye(big, dtype=complex)
    p = np.eye(big, dtype=complex)
    for j in range(1, 4):
        p = p @ s
        delta3 = delta3 + ((-1.0) ** j * math.comb(3, j)) * (adjoint(p) @ p)
    delta3 = (delta3 + adjoint(delta3)) / 2.0
    defect3 = op_norm(delta3[np.ix_(mask, mask)])
    w = np.zeros((big, h0 + h1), dtype=complex)
    w[:h0, :h0] = np.eye(h0)
    w[k0 : k0 + h1, h0:] = np.eye(h1)
    t_top = np.block([[np.asarray(c0.matrix if isinstance(c0, Operator) else c0, dtype=complex), np.asarray(c, dtype=complex)],
                      [np.zeros((h1, h0), dtype=complex), np.asarray(c1.matrix if isinstance(c1, Operator) else c1, dtype=complex)]])
    s_op = Operator(s, structure="block")
    lifting = check_lifting(s_op, t_top, w)
    return FoguelHankelCertificate(
        lift=s_op,
        embedding=w,
        q_square_norm=q2,
        commutator_norm=comm_norm,
        defect3_interior=defect3,
        lifting_residual=lifting.residuals[0],
        commutant=cl,
    )


# ---------------------------------------------------------------------------
# unitary extension and power dilation


@dataclass
class DilationReport:
    dilation: Operator
    embedding: np.ndarray
    unitary_residual: float
    power_residuals: list
    verdict: bool


def unitary_extension_dilation(t, n, n_max=8, tol=1e-8):
    """Power dilation of [[T, T], [0, T]] through a unitary extension.

    The Schaffer lifting of T extends to a unitary U on a two sided fiber
    chain coupled through the rotation [[T, D_T*], [D_T, -T*]]; then
    [[U, U], [0, U]] compresses to powers of [[T, T], [0, T]] exactly for
    powers below the truncation length.
    """
    mat = _contraction_matrix(t, tol)
    d = mat.shape[0]
    d_t = psd_sqrt(np.eye(d) - adjoint(mat) @ mat)
    d_ts = psd_sqrt(np.eye(d) - mat @ adjoint(mat))
    if n_max >= n:
        raise InputValidationError("power budget n_max must stay below the truncation")
    # coordinates: negative fibers -n..-1, then H, then fibers 0..n-1
    big = (2 * n + 1) * d
    u = np.zeros((big, big), dtype=complex)
    off_h = n * d

    def blk(i):
        return slice(i * d, (i + 1) * d)

    for k in range(n - 1):
        u[blk(k + 1), blk(k)] = np.eye(d)          # e_{-n+k} -> e_{-n+k+1}
    u[blk(n), blk(n - 1)] = d_ts                   # fiber -1 -> H
    u[blk(n + 1), blk(n - 1)] = -adjoint(mat)      # fiber -1 -> fiber 0
    u[blk(n), blk(n)] = mat                        # H -> H
    u[blk(n + 1), blk(n)] = d_t                    # H -> fiber 0
    for k in range(n - 1):
        u[blk(n + 2 + k), blk(n + 1 + k)] = np.eye(d)
    gram = adjoint(u) @ u - np.eye(big)
    cogram = u @ adjoint(u) - np.eye(big)
    # outflow: last positive fiber (columns) and first negative fiber (rows)
    unit_res = max(
        op_norm(gram[: big - d, : big - d]), op_norm(cogram[d:, d:])
    )
    s_tilde = np.kron(np.array([[1.0, 1.0], [0.0, 1.0]]), u)
    t_tilde = np.kron(np.array([[1.0, 1.0], [0.0, 1.0]]), mat)
    w = np.zeros((2 * big, 2 * d), dtype=complex)
    w[off_h : off_h + d, :d] = np.eye(d)
    w[big + off_h : big + off_h + d, d:] = np.eye(d)
    s_op = Operator(s_tilde, structure="block")
    report = check_dilation(s_op, t_tilde, w, n_max, tol=tol)
    return DilationReport(
        s_op, w, unit_res, report.residuals, bool(report.verdict and unit_res <= tol)
    )


# ---------------------------------------------------------------------------
# ergodic diagnostics


@dataclass
class ErgodicReport:
    cesaro_norms: list
    difference_norms: list
    cesaro_vanishing: bool
    difference_vanishing: bool
    eigenvalues: np.ndarray
    spectrum_compatible: bool


def _vanishing(seq, tol=1e-8):
    if not seq:
        return True
    return bool(seq[-1] <= tol + 0.02 * max(seq))


def ergodic_diagnostic(t, n_max=60, tol=1e-8):
    """Trend report for T tilde = [[T, I - T], [0, T]].

    Tracks ||T tilde^n|| / n and ||T^(n+1) - T^n||; uniform vanishing of
    either is the numerical shadow of mean ergodicity of the pair.  The
    eigenvalue check flags spectrum outside (open disk union {1}).
    """
    mat = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    d = mat.shape[0]
    t_tilde = np.block([[mat, np.eye(d) - mat], [np.zeros((d, d)), mat]])
    cesaro, diffs = [], []
    p = np.eye(2 * d, dtype=complex)
    q = np.eye(d, dtype=complex)
    for k in range(1, n_max + 1):
        p = p @ t_tilde
        q_next = q @ mat
        cesaro.append(op_norm(p) / k)
        diffs.append(op_norm(q_next - q))
        q = q_next
    eig = np.linalg.eigvals(mat)
    ok = all(abs(z) < 1.0 - 1e-12 or abs(z - 1.0) <= 1e-9 for z in eig)
    return ErgodicReport(
        cesaro, diffs, _vanishing(cesaro, tol), _vanishing(diffs, tol), eig, ok
    )
