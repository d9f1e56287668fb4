"""Variational lower bounds for standard f-divergences.

For every ``n`` the bracket

    V(n) = f_n(0+) Tr sigma + f_n'(inf) Tr rho
           - int_{[1/n, n]} m(s) (1 + s) dnu_n(s)

with ``m(s) = min_x sigma((1-x)*(1-x)) + rho(x x*) / s`` is a lower bound of
``S_f(rho || sigma)`` and increases to it as ``n`` grows.  The inner minimum
is taken pointwise in ``s`` in closed form; a second, basis-free solver is
provided for cross-checking.
"""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import solve_sylvester

from .divergence import _resolve, relative_modular_spectrum
from .errors import DomainError, OptimizationError
from .fclass import INF, truncate
from .states import make_functional

DIVERGENCE_CEILING = 1e12
DEFAULT_N_MAX = 2 ** 14
MONOTONE_SLACK = 1e-9


class InnerSolver(Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass
class VariationalReport:
    n_schedule: list
    values: list
    inner_solver: InnerSolver = InnerSolver.CLOSED_FORM
    quadrature_nodes: int = 0
    diverged: bool = False
    monotone: bool = True
    notes: list = field(default_factory=list)


def inner_minimum(spec, s):
    """Closed-form ``min_x sigma((1-x)*(1-x)) + s^-1 rho(x x*)``.

    Each overlap block contributes ``w a b / (a + s b)``; blocks outside the
    joint support contribute nothing.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    A, B = np.meshgrid(spec.a, spec.b, indexing="ij")
    return float(np.sum(spec.w * A * B / (A + s * B)))


def _objective(rho_op, sigma_op, x, s):
    one_minus = np.eye(x.shape[0]) - x
    val = np.trace(sigma_op @ one_minus.conj().T @ one_minus) + np.trace(rho_op @ x @ x.conj().T) / s
    return float(val.real)


def inner_minimum_numeric(rho, sigma, s, iters=5000, fallback=False, tol=1e-12):
    """Minimize the inner objective over all complex ``d x d`` matrices.

    The default path solves the stationarity equation
    ``rho x / s + x sigma = sigma`` directly (Sylvester solve, or a
    least-squares solve of its Kronecker form when it is singular).  With
    ``fallback=True`` plain gradient descent is used instead.
    Returns ``(value, minimizer)``.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    rho, sigma = make_functional(rho), make_functional(sigma)
    R, S = rho.operator, sigma.operator
    d = R.shape[0]
    if not fallback:
        try:
            x = solve_sylvester(R / s, S, S)
            if not np.all(np.isfinite(x)) or np.linalg.norm(R @ x / s + x @ S - S) > 1e-9 * max(1, np.linalg.norm(S)):
                raise np.linalg.LinAlgError("ill-conditioned Sylvester system")
        except np.linalg.LinAlgError:
            K = np.kron(np.eye(d), R / s) + np.kron(S.T, np.eye(d))
            vec = np.linalg.lstsq(K, S.reshape(-1, order="F"), rcond=None)[0]
            x = vec.reshape((d, d), order="F")
        return _objective(R, S, x, s), x

    # gradient of the objective in x is 2 (rho x / s - (1 - x) sigma)
    lip = 2 * (np.linalg.eigvalsh(R)[-1] / s + np.linalg.eigvalsh(S)[-1])
    step = 1.0 / max(lip, 1e-300)
    x = np.zeros((d, d), complex)
    for _ in range(iters):
        grad = 2 * (R @ x / s - (np.eye(d) - x) @ S)
        res = np.linalg.norm(grad)
        if res <= tol:
            break
        x = x - step * grad
    else:
        raise OptimizationError("gradient descent hit the iteration cap", residual=res)
    return _objective(R, S, x, s), x


def _integrated_inner(trunc, spec):
    return trunc.nu_integral(lambda s: (1.0 + s) * inner_minimum(spec, s))


def variational_value_at_n(f, rho, sigma, n, spectrum=None):
    """``V(n)``: the variational bracket at truncation level ``n``."""
    f = _resolve(f)
    rho, sigma = make_functional(rho), make_functional(sigma)
    spec = relative_modular_spectrum(rho, sigma) if spectrum is None else spectrum
    trunc = truncate(f, n)
    return math.fsum([trunc.fn_at_zero_plus * sigma.trace,
                      trunc.fn_prime_at_infinity * rho.trace,
                      -_integrated_inner(trunc, spec)])


def doubling_schedule(n_max):
    out, n = [], 1
    while n <= n_max:
        out.append(n)
        n *= 2
    return out


def _looks_divergent(values):
    if values[-1] > DIVERGENCE_CEILING and values[-1] > values[-2]:
        return True
    if len(values) < 5:
        return False
    steps = np.diff(values[-5:])
    # convergent tails shrink roughly geometrically; log or linear growth does not
    return bool(np.all(steps > 1e-6 * max(1.0, abs(values[-1])))
                and np.all(steps[1:] >= 0.95 * steps[:-1]))


def variational_Sf(f, rho, sigma, n_max=DEFAULT_N_MAX):
    """Supremum of ``V(n)`` over ``n = 1, 2, 4, ..., n_max``.

    Returns ``(value, report)``.  ``+inf`` is declared when ``V(n)`` passes the
    divergence ceiling while rising, or keeps growing without any sign of a
    shrinking increment over the last doublings.
    """
    f = _resolve(f)
    rho, sigma = make_functional(rho), make_functional(sigma)
    spec = relative_modular_spectrum(rho, sigma)
    schedule = doubling_schedule(n_max)
    values = [variational_value_at_n(f, rho, sigma, n, spectrum=spec) for n in schedule]
    report = VariationalReport(schedule, values)
    report.monotone = all(v1 <= v2 + MONOTONE_SLACK * max(1.0, abs(v2))
                          for v1, v2 in zip(values, values[1:]))
    if len(values) >= 2 and _looks_divergent(values):
        report.diverged = True
        report.notes.append("lower bounds are still growing without bound at n_max")
        return INF, report
    return max(values), report


def kosaki_entropy(rho, sigma, n):
    """Specialized bracket for ``f = -log t`` at level ``n``; tends to ``D(sigma || rho)``.

    ``sigma(1) log n + (sigma(1) - rho(1)) 2/(n+1) - int_{1/n}^n m(s) ds / s``.
    """
    from ._quad import log_quad

    rho, sigma = make_functional(rho), make_functional(sigma)
    spec = relative_modular_spectrum(rho, sigma)
    n = int(n)
    head = sigma.trace * math.log(n) + (sigma.trace - rho.trace) * 2.0 / (n + 1)
    if n == 1:
        return head
    tail = log_quad(lambda s: inner_minimum(spec, s) / s, 1.0 / n, float(n), points=(1.0,))
    return head - tail
