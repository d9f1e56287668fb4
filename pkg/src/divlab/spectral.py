"""Dense Hermitian eigen-machinery: spectral functions, supports and pinching."""
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidInput, InvalidPartition, NotPositive

TOL_SUPPORT = 1e-10
TOL_PSD = 1e-10
HERMITIAN_TOL = 1e-12


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class ZeroPolicy(Enum):
    MAP_ZERO_TO_ZERO = "map_zero_to_zero"
    APPLY_AT_ZERO = "apply_at_zero"
    ERROR_ON_ZERO = "error_on_zero"


def as_hermitian(H, atol=HERMITIAN_TOL):
    """Validate a square matrix as Hermitian and return its exact symmetrization.

    The check is relative to ``max(1, ||H||_F)`` so that large operators are
    not rejected for ordinary rounding noise.
    """
    H = np.array(H, dtype=complex)
    if H.ndim == 0:
        H = H.reshape(1, 1)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise InvalidInput("matrix has non-finite entries")
    scale = max(1.0, np.linalg.norm(H))
    if np.max(np.abs(H - H.conj().T), initial=0.0) > atol * scale:
        raise InvalidInput("matrix is not Hermitian")
    return (H + H.conj().T) / 2


def eig_hermitian(H):
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""
    H = as_hermitian(H)
    vals, vecs = np.linalg.eigh(H)
    return EigenSystem(vals, vecs)


def _zero_mask(vals):
    scale = np.max(np.abs(vals), initial=0.0)
    return np.abs(vals) <= TOL_SUPPORT * scale if scale > 0 else np.ones(vals.shape, bool)


def apply_spectral_function(H, g, zero_policy=ZeroPolicy.MAP_ZERO_TO_ZERO):
    """Return ``V diag(g(lambda)) V*`` for the spectral decomposition of ``H``.

    Eigenvalues within the support tolerance of zero are treated according to
    ``zero_policy``; ``MAP_ZERO_TO_ZERO`` gives generalized inverses and
    ``h**0 = support projection``.
    """
    zero_policy = ZeroPolicy(zero_policy)
    vals, vecs = eig_hermitian(H)
    zero = _zero_mask(vals)
    if zero_policy is ZeroPolicy.ERROR_ON_ZERO and zero.any():
        raise DomainError("operator has a zero eigenvalue")
    keep = ~zero if zero_policy is ZeroPolicy.MAP_ZERO_TO_ZERO else np.ones_like(zero)
    out = np.zeros(vals.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        mapped = np.asarray(g(vals[keep]), dtype=float)
    if not np.all(np.isfinite(mapped)):
        raise DomainError("function is undefined at a retained eigenvalue")
    out[keep] = mapped
    return (vecs * out) @ vecs.conj().T


def _check_psd(vals, H):
    tol = TOL_PSD * max(np.linalg.norm(H), 1.0)
    if vals.size and vals[0] < -tol:
        raise NotPositive(f"eigenvalue {vals[0]:.3g} below -{tol:.3g}")


def support_projection(H):
    H = as_hermitian(H)
    vals, vecs = np.linalg.eigh(H)
    _check_psd(vals, H)
    top = vals[-1] if vals.size else 0.0
    keep = vals > TOL_SUPPORT * top if top > 0 else np.zeros(vals.shape, bool)
    V = vecs[:, keep]
    return V @ V.conj().T


def matrix_power(H, p):
    """Generalized power of a PSD operator; zero eigenvalues stay zero."""
    return apply_spectral_function(H, lambda x: np.abs(x) ** p)


def matrix_log(H):
    return apply_spectral_function(H, np.log, ZeroPolicy.ERROR_ON_ZERO)


def matrix_exp(H):
    return apply_spectral_function(H, np.exp, ZeroPolicy.APPLY_AT_ZERO)


def is_projection(E, atol=1e-10):
    E = np.asarray(E, dtype=complex)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        return False
    return bool(np.allclose(E, E.conj().T, atol=atol) and np.allclose(E @ E, E, atol=atol))


def check_partition(projections, dim=None, atol=1e-10):
    projections = [np.asarray(e, dtype=complex) for e in projections]
    if not projections:
        raise InvalidPartition("empty partition")
    d = projections[0].shape[0]
    if dim is not None and d != dim:
        raise InvalidPartition(f"partition acts on dimension {d}, expected {dim}")
    for e in projections:
        if e.shape != (d, d) or not is_projection(e, atol):
            raise InvalidPartition("partition element is not an orthogonal projection")
    if not np.allclose(sum(projections), np.eye(d), atol=atol):
        raise InvalidPartition("projections do not sum to the identity")
    for i, e in enumerate(projections):
        for f in projections[i + 1:]:
            if not np.allclose(e @ f, 0, atol=atol):
                raise InvalidPartition("projections are not mutually orthogonal")
    return projections


def pinch(H, projections):
    """Return ``sum_k e_k H e_k`` for an orthogonal resolution of the identity."""
    H = as_hermitian(H)
    projections = check_partition(projections, H.shape[0])
    return sum(e @ H @ e for e in projections)


def diagonal_partition(d):
    """The resolution of the identity into rank-one coordinate projections."""
    out = []
    for k in range(d):
        e = np.zeros((d, d), complex)
        e[k, k] = 1
        out.append(e)
    return out
