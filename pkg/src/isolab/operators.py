"""Operator model.

Dense operators, truncated unilateral/bilateral weighted shifts of
arbitrary multiplicity, block composition, isometric embeddings, and the
checkers for the lifting and power-dilation relations.

Truncation convention: a unilateral shift on N coordinates zeros the
outflow from the last coordinate, so the span of the first N - d
coordinates is exact under any product of at most d shift factors (the
"interior" subspace).  Multiplicity is represented by contiguous fibers:
matrix index = coordinate * multiplicity + fiber component.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import BudgetError, InputValidationError
from .numerics import adjoint, op_norm

__all__ = [
    "Operator",
    "EmbeddingMap",
    "RelationReport",
    "InteriorDim",
    "make_weighted_shift",
    "from_blocks",
    "interior_dim",
    "interior_matrix_dim",
    "inclusion_embedding",
    "check_lifting",
    "check_dilation",
    "operator_to_dict",
    "operator_from_dict",
]

#: tolerance on ||W*W - I|| for embeddings produced by series solves
TOL_EMBED = 1e-8

_STRUCTURES = ("dense", "unilateral_shift", "bilateral_shift", "block")


@dataclass(frozen=True)
class Operator:
    """A finite matrix with structure and truncation metadata.

    ``trunc`` counts shift coordinates (N unilateral, indices -N..N-1
    bilateral); ``weights`` holds the transition weights, indexed by the
    source coordinate, and may extend past the matrix so that closed-form
    interior expressions can see beyond the truncation edge.
    """

    matrix: np.ndarray
    structure: str = "dense"
    trunc: Optional[int] = None
    multiplicity: int = 1
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputValidationError(f"operator matrix must be square, got {m.shape}")
        if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
            raise InputValidationError("operator matrix has non-finite entries")
        if self.structure not in _STRUCTURES:
            raise InputValidationError(f"unknown structure tag {self.structure!r}")
        object.__setattr__(self, "matrix", m)
        if self.weights is not None:
            object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def structured(self):
        return self.structure in ("unilateral_shift", "bilateral_shift")

    @property
    def n_coords(self):
        """Number of shift coordinates (N or 2N); dim for unstructured."""
        if self.structure == "unilateral_shift":
            return self.trunc
        if self.structure == "bilateral_shift":
            return 2 * self.trunc
        return self.dim

    @staticmethod
    def dense(matrix):
        return Operator(np.asarray(matrix, dtype=complex))


class InteriorDim(NamedTuple):
    """Coordinate count of the exactness subspace, with a guarantee flag."""

    count: int
    guaranteed: bool


class EmbeddingMap(NamedTuple):
    """Isometric column map identifying a small space inside a big one."""

    map: np.ndarray
    iso_residual: float
    intertwine_residual: float

    @property
    def small_dim(self):
        return self.map.shape[1]

    @property
    def big_dim(self):
        return self.map.shape[0]


@dataclass
class RelationReport:
    """Residuals of a lifting/extension/dilation relation check."""

    relation: str
    max_power: int
    residuals: list
    tol: float
    verdict: bool = field(init=False)

    def __post_init__(self):
        self.verdict = bool(all(r <= self.tol for r in self.residuals))


def make_weighted_shift(weights, n, multiplicity=1, kind="unilateral"):
    """Truncated weighted forward shift: S e_{s-1} = alpha_s e_s per fiber.

    ``weights[i]`` is the weight of the transition out of coordinate i
    (unilateral: coordinate i -> i+1; bilateral with trunc N: matrix
    coordinate i stands for index i - N).  Extra trailing weights are kept
    as metadata for closed-form interior formulas.
    """
    weights = np.asarray(weights, dtype=float)
    if n < 1:
        raise InputValidationError("truncation length must be >= 1")
    if multiplicity < 1:
        raise InputValidationError("multiplicity must be >= 1")
    if np.any(weights <= 0):
        raise InputValidationError("shift weights must be positive")
    if kind == "unilateral":
        coords = n
    elif kind == "bilateral":
        coords = 2 * n
    else:
        raise InputValidationError(f"unknown shift kind {kind!r}")
    if len(weights) < coords - 1:
        raise InputValidationError(
            f"need at least {coords - 1} weights for {kind} truncation {n}, got {len(weights)}"
        )
    dim = coords * multiplicity
    m = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(multiplicity)
    for s in range(coords - 1):
        m[(s + 1) * multiplicity : (s + 2) * multiplicity, s * multiplicity : (s + 1) * multiplicity] = (
            weights[s] * eye
        )
    return Operator(m, structure=f"{kind}_shift", trunc=n, multiplicity=multiplicity, weights=weights)


def from_blocks(rows):
    """Assemble a dense block operator; None entries become zero blocks."""
    mats = [[None if b is None else np.asarray(b.matrix if isinstance(b, Operator) else b, dtype=complex) for b in r] for r in rows]
    row_dims = [next(b.shape[0] for b in r if b is not None) for r in mats]
    col_dims = [next(r[j].shape[1] for r in mats if r[j] is not None) for j in range(len(mats[0]))]
    filled = [
        [np.zeros((row_dims[i], col_dims[j]), dtype=complex) if b is None else b for j, b in enumerate(r)]
        for i, r in enumerate(mats)
    ]
    return Operator(np.block(filled), structure="block")


def interior_dim(op, degree):
    """Largest coordinate count on which products of <= degree factors are exact.

    Dense operators carry no truncation, so the full dimension is returned
    with ``guaranteed=False``.
    """
    if degree < 0:
        raise InputValidationError("degree must be >= 0")
    if not op.structured:
        return InteriorDim(op.dim, False)
    count = op.n_coords - degree
    if count < 1:
        raise BudgetError(
            f"degree {degree} exceeds the exactness budget of truncation {op.n_coords}"
        )
    return InteriorDim(count, True)


def interior_matrix_dim(op, degree):
    """Matrix dimension of the interior subspace (coordinates times fibers)."""
    k = interior_dim(op, degree)
    return k.count * op.multiplicity if op.structured else k.count


def inclusion_embedding(small_dim, big_dim, offset=0):
    """Coordinate inclusion of C^small into C^big at a block offset."""
    if offset + small_dim > big_dim:
        raise InputValidationError("inclusion does not fit")
    w = np.zeros((big_dim, small_dim), dtype=complex)
    w[offset : offset + small_dim, :] = np.eye(small_dim)
    return EmbeddingMap(w, 0.0, 0.0)


def _outflow_cols(op):
    """Matrix column indices whose image leaves the truncation window."""
    if not op.structured:
        return np.zeros(op.dim, dtype=bool)
    mask = np.zeros(op.dim, dtype=bool)
    mask[(op.n_coords - 1) * op.multiplicity :] = True
    return mask


def check_lifting(s, t, w, tol=1e-10):
    """Check T P_H = P_H S through the embedding W (equivalently S* extends T*).

    The residual ||T W* - W* S|| is evaluated on the co-invariant interior
    of a structured S (the outflow column of a truncated shift is excluded:
    it is a truncation artifact, not a property of the relation).
    """
    wm = w.map if isinstance(w, EmbeddingMap) else np.asarray(w, dtype=complex)
    tm = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    if wm.shape[1] != tm.shape[0]:
        raise InputValidationError("embedding range dimension does not match dim T")
    if wm.shape[0] != s.dim:
        raise InputValidationError("embedding domain dimension does not match dim S")
    r = tm @ adjoint(wm) - adjoint(wm) @ s.matrix
    r = r[:, ~_outflow_cols(s)]
    return RelationReport("lifting", 1, [op_norm(r)], tol)


def check_dilation(s, t, w, max_power, tol=1e-8):
    """Check T^n = W* S^n W for 0 <= n <= max_power.

    For structured S the power budget is the truncation length minus one;
    exceeding it raises BudgetError.
    """
    wm = w.map if isinstance(w, EmbeddingMap) else np.asarray(w, dtype=complex)
    tm = t.matrix if isinstance(t, Operator) else np.asarray(t, dtype=complex)
    if s.structured and max_power > s.n_coords - 1:
        raise BudgetError(
            f"max_power {max_power} exceeds the exactness budget {s.n_coords - 1} "
            f"of truncation {s.n_coords}"
        )
    residuals = []
    x = wm.copy()
    tn = np.eye(tm.shape[0], dtype=complex)
    for n in range(max_power + 1):
        residuals.append(op_norm(adjoint(wm) @ x - tn))
        x = s.matrix @ x
        tn = tn @ tm
    return RelationReport("dilation", max_power, residuals, tol)


def operator_to_dict(op):
    """Serialize an operator to the shared JSON schema."""
    d = {"kind": op.structure}
    if op.structured:
        d["weights"] = [float(x) for x in op.weights]
        d["trunc"] = int(op.trunc)
        d["multiplicity"] = int(op.multiplicity)
    else:
        d["re"] = op.matrix.real.tolist()
        d["im"] = op.matrix.imag.tolist()
    return d


def operator_from_dict(d):
    """Deserialize an operator from the shared JSON schema."""
    try:
        kind = d["kind"]
    except (TypeError, KeyError) as exc:
        raise InputValidationError("operator JSON must carry a 'kind' field") from exc
    if kind in ("unilateral_shift", "bilateral_shift"):
        return make_weighted_shift(
            d["weights"], int(d["trunc"]), int(d.get("multiplicity", 1)), kind.split("_")[0]
        )
    if kind == "dense":
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
        return Operator.dense(re + 1j * im)
    if kind == "block":
        rows = [[None if b is None else operator_from_dict(b) for b in r] for r in d["blocks"]]
        return from_blocks(rows)
    raise InputValidationError(f"unknown operator kind {kind!r}")
