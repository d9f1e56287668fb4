"""Positive functionals on C^d, classical distributions, direct sums, compressions."""
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import block_diag

from .errors import InvalidInput, InvalidProjection, NotPositive
from .spectral import TOL_PSD, TOL_SUPPORT, EigenSystem, as_hermitian, is_projection


@dataclass(frozen=True, eq=False)
class PositiveFunctional:
    """A PSD operator standing for the functional ``x -> Tr(operator @ x)``.

    Build instances with :func:`make_functional`, which validates and clips the
    spectrum.  Functionals are not normalized unless you ask for it.
    """

    operator: np.ndarray
    trace: float

    @property
    def dim(self):
        return self.operator.shape[0]

    @cached_property
    def eigensystem(self):
        vals, vecs = np.linalg.eigh(self.operator)
        return EigenSystem(np.clip(vals, 0.0, None), vecs)

    @cached_property
    def support_mask(self):
        vals = self.eigensystem.eigenvalues
        top = vals[-1] if vals.size else 0.0
        if top <= 0:
            return np.zeros(vals.shape, bool)
        return vals > TOL_SUPPORT * top

    @cached_property
    def support(self):
        V = self.eigensystem.eigenvectors[:, self.support_mask]
        return V @ V.conj().T

    @property
    def rank(self):
        return int(self.support_mask.sum())

    @property
    def is_faithful(self):
        return self.rank == self.dim

    def expect(self, x):
        """Value of the functional at ``x``, i.e. ``Tr(operator @ x)``."""
        return complex(np.trace(self.operator @ np.asarray(x))).real

    def normalized(self):
        if self.trace <= 0:
            raise InvalidInput("cannot normalize the zero functional")
        return make_functional(self.operator / self.trace)

    def scaled(self, lam):
        return make_functional(lam * self.operator)

    def __add__(self, other):
        return make_functional(self.operator + other.operator)


def make_functional(H):
    """Validate a PSD operator, clip tolerated negative eigenvalues to zero."""
    if isinstance(H, PositiveFunctional):
        return H
    H = as_hermitian(H)
    vals, vecs = np.linalg.eigh(H)
    tol = TOL_PSD * max(np.linalg.norm(H), 1.0)
    if vals.size and vals[0] < -tol:
        raise NotPositive(f"eigenvalue {vals[0]:.3g} is below -{tol:.3g}")
    if vals.size and vals[0] < 0:
        vals = np.clip(vals, 0.0, None)
        H = (vecs * vals) @ vecs.conj().T
        H = (H + H.conj().T) / 2
    return PositiveFunctional(H, float(np.trace(H).real))


@dataclass(frozen=True)
class ClassicalDistribution:
    weights: np.ndarray = field(repr=True)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidInput("weights must be finite and nonnegative")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size

    @property
    def total(self):
        return float(self.weights.sum())


def direct_sum(p, q):
    p, q = make_functional(p), make_functional(q)
    return make_functional(block_diag(p.operator, q.operator))


def compress(p, e):
    """Restrict ``e p e`` to the range of the projection ``e``.

    The result has dimension ``rank(e)`` and is expressed in an orthonormal
    basis of ``range(e)`` taken from its eigenvectors.
    """
    p = make_functional(p)
    e = np.asarray(e, dtype=complex)
    if e.shape != (p.dim, p.dim) or not is_projection(e):
        raise InvalidProjection("compression requires an orthogonal projection of matching size")
    vals, vecs = np.linalg.eigh((e + e.conj().T) / 2)
    V = vecs[:, vals > 0.5]
    return make_functional(V.conj().T @ p.operator @ V)


def random_density(d, rng, rank=None, trace=1.0):
    """Random density operator from the induced Ginibre ensemble.

    ``rank=None`` gives a full-rank operator with probability one.
    """
    rng = np.random.default_rng(rng)
    k = d if rank is None else rank
    G = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = G @ G.conj().T
    return make_functional(trace * rho / np.trace(rho).real)


def random_unitary(d, rng):
    rng = np.random.default_rng(rng)
    Z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def functional_from_dict(data):
    try:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed state record: {exc}") from exc
    d = data.get("dim", re.shape[0] if re.ndim == 2 else None)
    if re.ndim != 2 or re.shape != (d, d) or im.shape != re.shape:
        raise InvalidInput("state record must hold d x d 're' (and optional 'im') arrays")
    H = re + 1j * im
    return make_functional((H + H.conj().T) / 2)


def functional_to_dict(p):
    p = make_functional(p)
    return {"dim": p.dim, "re": p.operator.real.tolist(), "im": p.operator.imag.tolist()}


def load_functional(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc
    return functional_from_dict(data)


def save_functional(p, path):
    with open(path, "w") as fh:
        json.dump(functional_to_dict(p), fh)
