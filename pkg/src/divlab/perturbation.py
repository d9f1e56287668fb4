"""Perturbed functionals ``exp(log phi + h)`` and the variational formulas built on them."""
import math
from dataclasses import dataclass, field

import numpy as np

from .divergence import relative_entropy
from .errors import DomainError, NotFaithful
from .spectral import as_hermitian, matrix_exp, matrix_log
from .states import make_functional

REGULARIZATION = 1e-9
GRADIENT_TOL = 1e-9


def _faithful(phi):
    phi = make_functional(phi)
    if not phi.is_faithful:
        raise NotFaithful("the reference functional must have full support")
    return phi


@dataclass(frozen=True, eq=False)
class PerturbedState:
    base: object
    h: np.ndarray
    result: object
    log_partition: float


def perturbed_state(phi, h):
    """``exp(log phi + h)`` with its log-partition ``log Tr exp(log phi + h)``."""
    phi = _faithful(phi)
    h = as_hermitian(h)
    if h.shape != phi.operator.shape:
        raise DomainError("h and phi have different dimensions")
    if not np.any(h):
        # exp(log phi) only reproduces phi up to rounding
        return PerturbedState(phi, h, phi, math.log(phi.trace))
    omega = make_functional(matrix_exp(matrix_log(phi.operator) + h))
    return PerturbedState(phi, h, omega, math.log(omega.trace))


def _tr(a, b):
    return float(np.trace(a @ b).real)


def entropy_decomposition_check(rho, phi, h):
    """``|D(rho||omega) + rho(h) - D(rho||phi)|`` for ``omega = exp(log phi + h)``."""
    rho = make_functional(rho)
    omega = perturbed_state(phi, h).result
    lhs = relative_entropy(rho, omega)
    rhs = relative_entropy(rho, phi)
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if lhs == rhs else math.inf
    return abs(lhs + _tr(rho.operator, as_hermitian(h)) - rhs)


def umegaki_check(omega, phi, h=None):
    """Gap between the spectral relative entropy and its closed matrix forms.

    Compares ``D(omega||phi)`` with ``Tr omega (log omega - log phi)`` and, when
    ``h`` is given (so that ``omega = exp(log phi + h)``), with ``omega(h)``.
    """
    omega = make_functional(omega)
    phi = _faithful(phi)
    d = relative_entropy(omega, phi)
    log_phi = matrix_log(phi.operator)
    if omega.is_faithful:
        direct = _tr(omega.operator, matrix_log(omega.operator) - log_phi)
    else:
        vals, vecs = omega.eigensystem
        keep = omega.support_mask
        V = vecs[:, keep]
        direct = float(np.sum(vals[keep] * np.log(vals[keep]))) \
            - _tr(V.conj().T @ log_phi @ V, np.diag(vals[keep]))
    gap = abs(d - direct)
    if h is not None:
        gap = max(gap, abs(d - _tr(omega.operator, as_hermitian(h))))
    return gap


def petz_objective(omega, log_phi, h):
    """``omega(h) - log Tr exp(log phi + h)``."""
    return _tr(omega, h) - math.log(np.trace(matrix_exp(log_phi + h)).real)


@dataclass
class PetzResult:
    value: float
    maximizer: np.ndarray
    iterations: int
    converged: bool
    regularized: bool
    history: list = field(default_factory=list)


def petz_variational_entropy(omega, phi, iters=500, h0=None, tol=GRADIENT_TOL):
    """Maximize ``omega(h) - log Tr exp(log phi + h)`` over Hermitian ``h``.

    The supremum is ``D(omega || phi)``.  Gradient ascent with Barzilai-Borwein
    steps and an Armijo backtracking safeguard; the gradient is
    ``omega - exp(L) / Tr exp(L)`` with ``L = log phi + h``.  The default start
    is ``log omega' - log phi`` where ``omega'`` is ``omega`` pushed to full rank
    by ``(omega + eps) / (1 + d eps)``.  Every iterate value is recorded in
    ``history`` and is a lower bound for the supremum.
    """
    omega = make_functional(omega)
    phi = _faithful(phi)
    if abs(omega.trace - 1.0) > 1e-10:
        raise DomainError("omega must be normalized")
    d = omega.dim
    W = omega.operator
    regularized = not omega.is_faithful
    log_phi = matrix_log(phi.operator)
    if h0 is None:
        w_reg = (W + REGULARIZATION * np.eye(d)) / (1 + d * REGULARIZATION) if regularized else W
        h = matrix_log(w_reg) - log_phi
    else:
        h = as_hermitian(h0)

    def value_and_grad(h):
        E = matrix_exp(log_phi + h)
        Z = np.trace(E).real
        return _tr(W, h) - math.log(Z), W - E / Z

    val, grad = value_and_grad(h)
    history = [val]
    step = 1.0
    prev = None
    converged = False
    k = 0
    for k in range(1, iters + 1):
        gnorm = np.linalg.norm(grad)
        if gnorm <= tol:
            converged = True
            k -= 1
            break
        if prev is not None:
            dh, dg = h - prev[0], grad - prev[1]
            curv = -np.vdot(dh, dg).real
            if curv > 0:
                step = np.vdot(dh, dh).real / curv
        while True:
            cand = h + step * grad
            cand = (cand + cand.conj().T) / 2
            cval, cgrad = value_and_grad(cand)
            # the slack lets BB steps continue once values are flat to rounding
            if cval >= val + 1e-4 * step * gnorm ** 2 - 8e-16 * (1 + abs(val)) or step < 1e-12:
                break
            step *= 0.5
        prev = (h, grad)
        h, val, grad = cand, cval, cgrad
        history.append(val)
    else:
        converged = np.linalg.norm(grad) <= tol
    return PetzResult(max(history), h, k, bool(converged), regularized, history)


def log_partition_dual(phi, h):
    """``c(phi, h) = -log Tr exp(log phi - h)`` in closed form."""
    phi = _faithful(phi)
    return -math.log(np.trace(matrix_exp(matrix_log(phi.operator) - as_hermitian(h))).real)


def free_energy_minimum(phi, h, iters=200, step=0.5, tol=1e-13):
    """Minimize ``rho(h) + D(rho || phi)`` over states by entropic mirror descent.

    Returns ``(value, minimizing state)``; the iteration
    ``log rho <- (1 - step) log rho + step (log phi - h)`` (then normalize)
    contracts geometrically onto the Gibbs state.
    """
    phi = _faithful(phi)
    h = as_hermitian(h)
    d = phi.dim
    log_phi = matrix_log(phi.operator)
    target = log_phi - h
    L = np.zeros((d, d), complex)
    for _ in range(iters):
        new = (1 - step) * L + step * target
        new = new - math.log(np.trace(matrix_exp(new)).real) * np.eye(d)
        if np.linalg.norm(new - L) <= tol:
            L = new
            break
        L = new
    rho = make_functional(matrix_exp(L))
    return _tr(rho.operator, h) + relative_entropy(rho, phi), rho
