"""Kraus-form channels, pinchings and block restrictions used to exercise monotonicity."""
import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidInput
from .spectral import check_partition, pinch
from .states import make_functional

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Channel:
    """``rho -> sum_k K_k rho K_k*``; the flags are computed from the Kraus list."""

    kraus_ops: tuple
    trace_preserving: bool
    unital: bool

    @property
    def d_in(self):
        return self.kraus_ops[0].shape[1]

    @property
    def d_out(self):
        return self.kraus_ops[0].shape[0]

    def __call__(self, p):
        return apply_channel_predual(self, p)


def make_channel(kraus_ops):
    ops = tuple(np.array(K, dtype=complex) for K in kraus_ops)
    if not ops:
        raise InvalidInput("a channel needs at least one Kraus operator")
    shape = ops[0].shape
    if any(K.ndim != 2 or K.shape != shape for K in ops):
        raise InvalidInput("Kraus operators must share one 2-D shape")
    d_out, d_in = shape
    tp = np.allclose(sum(K.conj().T @ K for K in ops), np.eye(d_in), atol=COMPLETENESS_TOL)
    unital = d_in == d_out and np.allclose(sum(K @ K.conj().T for K in ops), np.eye(d_out),
                                           atol=COMPLETENESS_TOL)
    return Channel(ops, bool(tp), bool(unital))


def apply_channel_predual(ch, p):
    p = make_functional(p)
    if p.dim != ch.d_in:
        raise DimensionError(f"channel expects dimension {ch.d_in}, got {p.dim}")
    out = sum(K @ p.operator @ K.conj().T for K in ch.kraus_ops)
    return make_functional((out + out.conj().T) / 2)


def random_cptp(d_in, d_out, kraus_count, seed):
    """Random channel from the QR-orthonormalized columns of a seeded Gaussian block."""
    if min(d_in, d_out, kraus_count) < 1:
        raise InvalidInput("dimensions and Kraus count must be positive")
    if kraus_count * d_out < d_in:
        raise InvalidInput("kraus_count * d_out must be at least d_in for an isometry")
    rng = np.random.default_rng(seed)
    shape = (kraus_count * d_out, d_in)
    Z = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    return make_channel([Q[k * d_out:(k + 1) * d_out] for k in range(kraus_count)])


def identity_channel(d):
    return make_channel([np.eye(d)])


def dephasing_channel(d):
    ops = []
    for k in range(d):
        P = np.zeros((d, d))
        P[k, k] = 1
        ops.append(P)
    return make_channel(ops)


def unitary_channel(U):
    return make_channel([U])


def partial_trace_channel(d_keep, d_discard, keep_first=True):
    """Trace out one tensor factor of ``C^d_keep (x) C^d_discard`` (or the reverse order)."""
    ops = []
    for k in range(d_discard):
        e = np.zeros((1, d_discard))
        e[0, k] = 1
        ops.append(np.kron(np.eye(d_keep), e) if keep_first else np.kron(e, np.eye(d_keep)))
    return make_channel(ops)


def pinching_channel(projections):
    return make_channel(check_partition(projections))


def restrict_to_subalgebra(p, partition):
    """Restriction to the block-diagonal algebra ``sum_k e_k M e_k``, realized by pinching."""
    p = make_functional(p)
    return make_functional(pinch(p.operator, partition))


def channel_to_dict(ch):
    return {"kraus": [{"re": K.real.tolist(), "im": K.imag.tolist()} for K in ch.kraus_ops]}


def channel_from_dict(data):
    try:
        ops = [np.asarray(k["re"], float) + 1j * np.asarray(k.get("im", np.zeros_like(k["re"])), float)
               for k in data["kraus"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed channel record: {exc}") from exc
    return make_channel(ops)


def load_channel(path):
    with open(path) as fh:
        return channel_from_dict(json.load(fh))
