"""Relative modular spectral data and direct evaluation of standard f-divergences."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DivergenceOverflow
from .fclass import catalog_lookup, ext_mul
from .spectral import TOL_SUPPORT
from .states import ClassicalDistribution, make_functional

OVERLAP_CUTOFF = 1e-14


@dataclass(frozen=True, eq=False)
class ModularSpectrum:
    """Joint spectral data of the relative modular operator.

    ``a`` and ``b`` are the strictly positive eigenvalues of rho and sigma and
    ``w[i, j] = Tr(P_i Q_j)`` the overlaps of the matching eigenprojections.
    The operator has eigenvalue ``a_i / b_j`` with weight ``b_j * w[i, j]``.
    """

    a: np.ndarray
    b: np.ndarray
    w: np.ndarray
    sigma_off_mass: float
    rho_off_mass: float
    rho_trace: float
    sigma_trace: float

    @property
    def pairs(self):
        return [(self.a[i], self.b[j], self.w[i, j])
                for i in range(self.a.size) for j in range(self.b.size)]

    def active(self):
        """Flattened ``(a, b, w)`` arrays restricted to non-negligible overlaps."""
        A, B = np.meshgrid(self.a, self.b, indexing="ij")
        mask = self.w > OVERLAP_CUTOFF
        return A[mask], B[mask], self.w[mask]


def _off_mass(value, trace):
    return value if value > TOL_SUPPORT * max(trace, 0.0) else 0.0


def relative_modular_spectrum(rho, sigma):
    rho, sigma = make_functional(rho), make_functional(sigma)
    if rho.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    ra, rv = rho.eigensystem
    sb, sv = sigma.eigensystem
    rmask, smask = rho.support_mask, sigma.support_mask
    overlap = np.abs(rv.conj().T @ sv) ** 2
    w = np.clip(overlap[np.ix_(rmask, smask)], 0.0, None)
    # sigma(1 - s(rho)) and rho(1 - s(sigma)), summed over the complementary eigenvectors
    sigma_off = float(np.sum(overlap[np.ix_(~rmask, smask)] * sb[smask]))
    rho_off = float(np.sum(overlap[np.ix_(rmask, ~smask)].T * ra[rmask]))
    return ModularSpectrum(ra[rmask], sb[smask], w,
                           _off_mass(sigma_off, sigma.trace), _off_mass(rho_off, rho.trace),
                           rho.trace, sigma.trace)


def _resolve(f):
    return catalog_lookup(f) if isinstance(f, str) else f


def divergence_from_spectrum(f, spec):
    f = _resolve(f)
    a, b, w = spec.active()
    with np.errstate(over="raise", invalid="raise"):
        try:
            terms = f.perspective(a, b) * w
        except FloatingPointError as exc:
            raise DivergenceOverflow(f"overflow evaluating {f.name} on the modular spectrum") from exc
    bulk = math.fsum(terms.tolist())
    if not math.isfinite(bulk):
        raise DivergenceOverflow(f"non-finite spectral sum for {f.name}")
    return bulk + ext_mul(f.f_at_zero_plus, spec.sigma_off_mass) \
        + ext_mul(f.fprime_at_infinity, spec.rho_off_mass)


def standard_f_divergence(f, rho, sigma):
    """``S_f(rho || sigma)`` in ``(-inf, +inf]`` from the modular spectrum.

    ``f`` is a :class:`ConvexFunctionSpec` or a catalog name.
    """
    return divergence_from_spectrum(f, relative_modular_spectrum(rho, sigma))


def classical_f_divergence(f, phi, psi):
    f = _resolve(f)
    phi = phi if isinstance(phi, ClassicalDistribution) else ClassicalDistribution(phi)
    psi = psi if isinstance(psi, ClassicalDistribution) else ClassicalDistribution(psi)
    if len(phi) != len(psi):
        raise DimensionError("distributions have different lengths")
    x, y = phi.weights, psi.weights
    both = (x > 0) & (y > 0)
    only_psi = (x == 0) & (y > 0)
    only_phi = (x > 0) & (y == 0)
    bulk = math.fsum(f.perspective(x[both], y[both]).tolist())
    return bulk + ext_mul(f.f_at_zero_plus, float(y[only_psi].sum())) \
        + ext_mul(f.fprime_at_infinity, float(x[only_phi].sum()))


def relative_entropy(rho, sigma):
    """Umegaki relative entropy ``Tr rho (log rho - log sigma)``, ``+inf`` off support."""
    return standard_f_divergence("t_log_t", rho, sigma)


def truncated_f_divergence(f, rho, sigma, n):
    """``S_{f_n}(rho || sigma)`` for the level-``n`` truncation ``f_n`` of ``f``.

    Evaluated pair by pair from the modular spectrum with ``f_n`` computed
    directly from the representation; always finite.
    """
    from .fclass import truncate

    trunc = truncate(_resolve(f), n)
    spec = relative_modular_spectrum(rho, sigma)
    a, b, w = spec.active()
    bulk = math.fsum(float(bj * wij * trunc.fn(ai / bj)) for ai, bj, wij in zip(a, b, w))
    return math.fsum([bulk, trunc.fn_at_zero_plus * spec.sigma_off_mass,
                      trunc.fn_prime_at_infinity * spec.rho_off_mass])
