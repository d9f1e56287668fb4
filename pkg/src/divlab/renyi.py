"""Renyi quantities: Q_alpha, D_alpha, the alpha -> 1 limit, D_max and sandwiched D_alpha."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .divergence import relative_entropy, relative_modular_spectrum
from .errors import DomainError
from .fclass import INF
from .spectral import TOL_SUPPORT, apply_spectral_function
from .states import make_functional

D_INF_PROXY_ALPHA = 64.0


@dataclass(frozen=True)
class RenyiResult:
    alpha: float
    q_value: float
    d_value: float


@dataclass
class SweepResult:
    results: list
    monotone: bool

    @property
    def alphas(self):
        return [r.alpha for r in self.results]

    @property
    def d_values(self):
        return [r.d_value for r in self.results]


def _support_contained(spec):
    return spec.rho_off_mass == 0.0


def _q_from_spectrum(spec, alpha):
    if alpha == 1:
        return spec.rho_trace
    if alpha > 1 and not _support_contained(spec):
        return INF
    a, b, w = spec.active()
    if a.size == 0:
        return 0.0
    terms = w * np.exp(alpha * np.log(a) + (1.0 - alpha) * np.log(b))
    return math.fsum(terms.tolist())


def q_alpha(rho, sigma, alpha):
    """``Q_alpha = Tr rho^alpha sigma^(1-alpha)`` with support conventions.

    ``Q_1 = Tr rho``; for ``alpha > 1`` it is ``+inf`` unless
    ``s(rho) <= s(sigma)``.  ``Q_0`` equals ``sigma(s(rho))``.
    """
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    return _q_from_spectrum(relative_modular_spectrum(rho, sigma), float(alpha))


def _log_q_from_spectrum(spec, alpha):
    """``log Q_alpha`` without forming ``Q_alpha`` (large alpha overflows)."""
    a, b, w = spec.active()
    if a.size == 0:
        return -INF
    return float(logsumexp(alpha * np.log(a) + (1.0 - alpha) * np.log(b), b=w))


def _d_from_log_q(log_q, trace, alpha):
    if log_q == INF or log_q == -INF:
        return INF
    return (log_q - math.log(trace)) / (alpha - 1.0)


def _d_from_q(q, trace, alpha):
    if q == INF:
        return INF
    if q <= 0.0:
        return INF
    return math.log(q / trace) / (alpha - 1.0)


def d_one(rho, sigma):
    rho = make_functional(rho)
    if rho.trace <= 0:
        raise DomainError("D_1 is undefined for rho = 0")
    return relative_entropy(rho, sigma) / rho.trace


def d_alpha(rho, sigma, alpha):
    """``D_alpha = log(Q_alpha / Tr rho) / (alpha - 1)``; ``alpha = 1`` uses the relative entropy."""
    rho = make_functional(rho)
    if rho.trace <= 0:
        raise DomainError("D_alpha is undefined for rho = 0")
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    if alpha == 1:
        return d_one(rho, sigma)
    spec = relative_modular_spectrum(rho, sigma)
    if alpha > 1 and not _support_contained(spec):
        return INF
    return _d_from_log_q(_log_q_from_spectrum(spec, float(alpha)), rho.trace, float(alpha))


def d_max(rho, sigma):
    """``log inf{t > 0 : rho <= t sigma}``."""
    rho, sigma = make_functional(rho), make_functional(sigma)
    spec = relative_modular_spectrum(rho, sigma)
    if not _support_contained(spec):
        return INF
    if rho.trace == 0:
        return -INF
    inv_sqrt = apply_spectral_function(sigma.operator, lambda x: x ** -0.5)
    top = np.linalg.eigvalsh(inv_sqrt @ rho.operator @ inv_sqrt)[-1]
    return math.log(top)


def _sandwiched_spectrum(rho, sigma, alpha):
    if not alpha > 1:
        raise DomainError("sandwiched values are provided for alpha > 1")
    gamma = (1.0 - alpha) / (2.0 * alpha)
    side = apply_spectral_function(sigma.operator, lambda x: np.abs(x) ** gamma)
    core = side @ rho.operator @ side
    vals = np.clip(np.linalg.eigvalsh((core + core.conj().T) / 2), 0.0, None)
    top = vals[-1] if vals.size else 0.0
    return vals[vals > TOL_SUPPORT * top] if top > 0 else vals[:0]


def sandwiched_q_alpha(rho, sigma, alpha):
    """``Tr (sigma^g rho sigma^g)^alpha`` with ``g = (1 - alpha) / (2 alpha)``."""
    rho, sigma = make_functional(rho), make_functional(sigma)
    if not alpha > 1:
        raise DomainError("sandwiched values are provided for alpha > 1")
    if relative_modular_spectrum(rho, sigma).rho_off_mass > 0:
        return INF
    return math.fsum((_sandwiched_spectrum(rho, sigma, alpha) ** alpha).tolist())


def sandwiched_d_alpha(rho, sigma, alpha):
    """Sandwiched Renyi divergence for ``alpha > 1`` (``+inf`` off support)."""
    rho, sigma = make_functional(rho), make_functional(sigma)
    if rho.trace <= 0:
        raise DomainError("undefined for rho = 0")
    if not alpha > 1:
        raise DomainError("sandwiched values are provided for alpha > 1")
    if relative_modular_spectrum(rho, sigma).rho_off_mass > 0:
        return INF
    vals = _sandwiched_spectrum(rho, sigma, alpha)
    log_q = float(logsumexp(alpha * np.log(vals))) if vals.size else -INF
    return _d_from_log_q(log_q, rho.trace, float(alpha))


def d_infinity_proxy(rho, sigma, alpha=D_INF_PROXY_ALPHA):
    """Large-alpha stand-in for ``D_inf``; only a finite-alpha value, not the limit."""
    return d_alpha(rho, sigma, alpha)


def alpha_sweep(rho, sigma, grid):
    """Evaluate ``Q_alpha`` and ``D_alpha`` on a grid; ``alpha = 1`` gets the exact limit."""
    rho, sigma = make_functional(rho), make_functional(sigma)
    if rho.trace <= 0:
        raise DomainError("D_alpha is undefined for rho = 0")
    spec = relative_modular_spectrum(rho, sigma)
    results = []
    for alpha in grid:
        alpha = float(alpha)
        q = _q_from_spectrum(spec, alpha)
        d = d_one(rho, sigma) if alpha == 1 else _d_from_q(q, rho.trace, alpha)
        results.append(RenyiResult(alpha, q, d))
    ordered = sorted(results, key=lambda r: r.alpha)
    monotone = all(r1.d_value <= r2.d_value + 1e-9 * max(1.0, abs(r2.d_value))
                   for r1, r2 in zip(ordered, ordered[1:]) if math.isfinite(r1.d_value))
    return SweepResult(results, monotone)
