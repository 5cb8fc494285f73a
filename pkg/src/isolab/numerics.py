"""Dense complex matrix kernel.

Hermitian spectral decomposition, PSD and pseudo-inverse square roots,
operator norms, and the Parrott one-step completion of a 2x2 operator
block with prescribed norm bound.
"""

from typing import NamedTuple

import numpy as np

from .errors import InputValidationError, MuTooSmallError, NotPSDError

#: relative spectral tolerance of the kernel (double precision at desk scale)
EPS_NUM = 1e-10
#: absolute tolerance allowed on top of mu for completed blocks
TOL_DKW = 1e-8

__all__ = [
    "EPS_NUM",
    "TOL_DKW",
    "HermEig",
    "adjoint",
    "herm_eig",
    "op_norm",
    "pinv_sqrt",
    "psd_sqrt",
    "dkw_complete",
]


class HermEig(NamedTuple):
    """Spectral data of a Hermitian matrix: ascending eigenvalues, unitary Q."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(a, name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputValidationError(f"{name} must be square, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise InputValidationError(f"{name} has non-finite entries")
    return a


def adjoint(a):
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def op_norm(a):
    """Operator (spectral) norm: the largest singular value."""
    a = np.asarray(a, dtype=complex)
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise InputValidationError("op_norm: non-finite entries")
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def herm_eig(h):
    """Eigendecomposition of a Hermitian matrix, symmetrized internally.

    Rejects inputs whose Hermitian asymmetry exceeds EPS_NUM relative to the
    norm; the decomposition itself is delegated to LAPACK.
    """
    h = _as_square(h, "herm_eig input")
    scale = op_norm(h)
    if op_norm(h - adjoint(h)) > EPS_NUM * max(1.0, scale):
        raise InputValidationError("herm_eig: input is not Hermitian at tolerance")
    w, q = np.linalg.eigh((h + adjoint(h)) / 2.0)
    return HermEig(w, q)


def psd_sqrt(p, clip=None):
    """Positive semidefinite square root with eigenvalue clipping.

    Eigenvalues in [-clip, 0) are clipped to 0; anything below -clip raises
    NotPSDError. Default clip is EPS_NUM * (1 + ||P||).
    """
    w, q = herm_eig(p)
    if clip is None:
        clip = EPS_NUM * (1.0 + (abs(w[0]) if w.size else 0.0) + (abs(w[-1]) if w.size else 0.0))
    if w.size and w[0] < -clip:
        raise NotPSDError(f"not PSD within tolerance: lambda_min={w[0]:.3e} < -{clip:.3e}")
    w = np.clip(w, 0.0, None)
    return (q * np.sqrt(w)) @ adjoint(q)


def pinv_sqrt(p, clip=None):
    """Pseudo-inverse square root: eigenvalues > clip invert, the rest map to 0."""
    w, q = herm_eig(p)
    if clip is None:
        clip = EPS_NUM * (1.0 + (abs(w[-1]) if w.size else 0.0))
    inv = np.where(w > clip, 1.0 / np.sqrt(np.clip(w, clip, None)), 0.0)
    return (q * inv) @ adjoint(q)


def dkw_complete(a, b, c, mu, tol=TOL_DKW):
    """One-step Parrott completion of ``[[A, B], [C, X]]`` at norm level mu.

    Requires ||[A B]|| <= mu and ||[A; C]|| <= mu (within tol).  Returns the
    constructive choice X = -Z A* W, where C = Z (mu^2 I - A*A)^{1/2} and
    B = (mu^2 I - AA*)^{1/2} W with Z, W least-norm contractive factors.
    When mu equals max(||[A B]||, ||[A; C]||) this X attains the optimal
    completion norm.
    """
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    if mu < 0:
        raise InputValidationError("mu must be nonnegative")
    if a.shape[0] != b.shape[0] or a.shape[1] != c.shape[1]:
        raise InputValidationError(
            f"incompatible block shapes A{a.shape} B{b.shape} C{c.shape}"
        )
    row_norm = op_norm(np.hstack([a, b]))
    col_norm = op_norm(np.vstack([a, c]))
    slack = tol * (1.0 + mu)
    if row_norm > mu + slack or col_norm > mu + slack:
        raise MuTooSmallError(
            f"mu too small: mu={mu:.6e}, ||[A B]||={row_norm:.6e}, ||[A; C]||={col_norm:.6e}"
        )
    p, q = a.shape
    g_col = mu * mu * np.eye(q) - adjoint(a) @ a
    g_row = mu * mu * np.eye(p) - a @ adjoint(a)
    z = c @ pinv_sqrt(g_col)
    w = pinv_sqrt(g_row) @ b
    return -z @ adjoint(a) @ w
