"""Seeded property suites driven by ``divlab verify`` and the acceptance tests.

Every suite returns a :class:`SuiteOutcome` with the worst violation seen.
Violations are measured as ``(lhs - rhs) / max(1, |rhs|)`` for inequalities
``lhs <= rhs`` and as absolute gaps for identities unless stated otherwise.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .channels import apply_channel_predual, random_cptp
from .divergence import classical_f_divergence, relative_entropy, standard_f_divergence
from .fclass import INF, ConvexFunctionSpec, catalog_lookup, transpose
from .perturbation import (entropy_decomposition_check, free_energy_minimum, log_partition_dual,
                           perturbed_state, petz_objective, petz_variational_entropy,
                           umegaki_check)
from .renyi import d_alpha, d_max, q_alpha, sandwiched_d_alpha
from .spectral import matrix_log
from .states import compress, make_functional, random_density, random_unitary
from .variational import DEFAULT_N_MAX, variational_Sf

CATALOG = ("neg_log", "t_log_t", "power:0.5", "power:1.5", "power:2",
           "square_dev", "square_dev_over_t", "hellinger")
DPI_ALPHAS = (0.0, 0.5, 0.9, 1.0, 1.5, 2.0)


@dataclass
class SuiteOutcome:
    name: str
    property: str
    trials: int
    max_violation: float
    passed: bool
    checks: dict

    def as_dict(self):
        return asdict(self)


class _Tracker:
    """Worst violation per named check, each with its own tolerance."""

    def __init__(self):
        self.checks = {}

    def gap(self, check, value, tol):
        if math.isnan(value):
            value = INF
        worst, _ = self.checks.get(check, (0.0, tol))
        self.checks[check] = (max(worst, value), tol)

    def ineq(self, check, lhs, rhs, tol, scale=True):
        """Record a violation of ``lhs <= rhs`` in the extended reals."""
        if rhs == INF or lhs == -INF:
            self.gap(check, 0.0, tol)
        elif lhs == INF:
            self.gap(check, INF, tol)
        else:
            self.gap(check, (lhs - rhs) / (max(1.0, abs(rhs)) if scale else 1.0), tol)

    def equal(self, check, x, y, tol, scale=False):
        if math.isinf(x) or math.isinf(y):
            self.gap(check, 0.0 if x == y else INF, tol)
        else:
            self.gap(check, abs(x - y) / (max(1.0, abs(y)) if scale else 1.0), tol)

    def outcome(self, name, prop, trials):
        worst = max((w for w, _ in self.checks.values()), default=0.0)
        passed = all(w <= t for w, t in self.checks.values())
        checks = {k: {"max_violation": w, "tolerance": t, "passed": bool(w <= t)}
                  for k, (w, t) in self.checks.items()}
        return SuiteOutcome(name, prop, trials, worst, bool(passed), checks)


def trial_rngs(seed, trials):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def conditioned_density(d, rng, floor=0.5):
    """Full-rank state ``(1 - floor) G + floor I/d`` with ``G`` a Ginibre state.

    The eigenvalues lie in ``[floor/d, 1 - floor + floor/d]``.
    """
    g = random_density(d, rng).operator
    return make_functional((1 - floor) * g + floor * np.eye(d) / d)


def random_pair(d, rng, kind="full"):
    """Random ``(rho, sigma)``; ``kind`` in full, singular, orthogonal, equal, mixed."""
    if kind == "mixed":
        kind = rng.choice(["full", "full", "singular", "orthogonal", "equal"])
    if kind == "full":
        return random_density(d, rng), random_density(d, rng)
    if kind == "equal":
        s = random_density(d, rng)
        return s, s
    U = random_unitary(d, rng)
    if kind == "singular":
        r = max(1, d - 1)
        rho = random_density(d, rng, rank=r)
        sigma = make_functional(U @ random_density(d, rng, rank=max(1, d // 2)).operator @ U.conj().T)
        return rho, sigma
    if kind == "orthogonal":
        k = max(1, d // 2)
        a = np.zeros((d, d), complex)
        b = np.zeros((d, d), complex)
        a[:k, :k] = random_density(k, rng).operator
        if d > k:
            b[k:, k:] = random_density(d - k, rng).operator
        return make_functional(U @ a @ U.conj().T), make_functional(U @ b @ U.conj().T)
    raise ValueError(f"unknown pair kind {kind!r}")


def _strip_perspective(f):
    return ConvexFunctionSpec(f.name, f.func, f.f_at_zero_plus, f.fprime_at_infinity,
                              f.representation)


def suite_transpose(seed, trials, dim, catalog=CATALOG):
    tr = _Tracker()
    kinds = ["full", "singular", "orthogonal", "equal"]
    for k, rng in enumerate(trial_rngs(seed, trials)):
        rho, sigma = random_pair(dim, rng, kinds[k % len(kinds)])
        for name in catalog:
            f = catalog_lookup(name)
            lhs = standard_f_divergence(f, rho, sigma)
            tr.equal("swap", lhs, standard_f_divergence(transpose(f), sigma, rho), 1e-10, scale=True)
            tr.equal("swap, direct evaluator", lhs,
                     standard_f_divergence(_strip_perspective(transpose(f)), sigma, rho),
                     1e-10, scale=True)
    return tr.outcome("transpose", "S_f(rho||sigma) = S_f~(sigma||rho)", trials)


def suite_dpi(seed, trials, dim, catalog=CATALOG, alphas=DPI_ALPHAS):
    tr = _Tracker()
    for k, rng in enumerate(trial_rngs(seed, trials)):
        d_out = int(rng.integers(1, dim + 1))
        kraus = int(rng.integers(-(-dim // d_out), dim + 2))
        ch = random_cptp(dim, d_out, kraus, int(rng.integers(2 ** 31)))
        rho, sigma = random_pair(dim, rng, "mixed" if k % 3 == 0 else "full")
        r2, s2 = apply_channel_predual(ch, rho), apply_channel_predual(ch, sigma)
        for name in catalog:
            tr.ineq("S_f", standard_f_divergence(name, r2, s2),
                    standard_f_divergence(name, rho, sigma), 1e-9)
        for alpha in alphas:
            tr.ineq("D_alpha", d_alpha(r2, s2, alpha), d_alpha(rho, sigma, alpha), 1e-9)
    return tr.outcome("dpi", "monotonicity of S_f and D_alpha under CPTP maps", trials)


def ordered_pair(sigma2, rng, eps_fraction=0.5):
    """``sigma1 = sigma2 - eps P <= sigma2`` with ``P`` a rank-one projection in the support."""
    vals, vecs = sigma2.eigensystem
    keep = sigma2.support_mask
    V = vecs[:, keep]
    c = V @ (rng.normal(size=V.shape[1]) + 1j * rng.normal(size=V.shape[1]))
    c /= np.linalg.norm(c)
    # sigma2 - eps |c><c| stays PSD up to eps = 1 / <c, sigma2^-1 c>
    inv = (V / vals[keep]) @ V.conj().T
    eps = eps_fraction / np.vdot(c, inv @ c).real
    return make_functional(sigma2.operator - eps * np.outer(c, c.conj()))


def suite_convexity(seed, trials, dim, catalog=CATALOG):
    tr = _Tracker()
    for rng in trial_rngs(seed, trials):
        r1, s1 = random_pair(dim, rng)
        r2, s2 = random_pair(dim, rng)
        for name in catalog:
            f = catalog_lookup(name)
            v1, v2 = standard_f_divergence(f, r1, s1), standard_f_divergence(f, r2, s2)
            for lam in (0.25, 0.5, 0.75):
                mix = standard_f_divergence(f, r1.scaled(lam) + r2.scaled(1 - lam),
                                            s1.scaled(lam) + s2.scaled(1 - lam))
                tr.ineq("joint convexity", mix, lam * v1 + (1 - lam) * v2, 1e-9)
            if f.f_at_zero_plus <= 0:
                sig1 = ordered_pair(s2, rng)
                tr.ineq("monotone in sigma", standard_f_divergence(f, r1, s2),
                        standard_f_divergence(f, r1, sig1), 1e-9)
    return tr.outcome("convexity", "joint convexity; S_f decreasing in sigma when f(0+) <= 0", trials)


def suite_renyi(seed, trials, dim):
    tr = _Tracker()
    grid = np.linspace(0.0, 2.0, 41)
    for rng in trial_rngs(seed, trials):
        rho, sigma = random_pair(dim, rng)
        rho = rho.scaled(rng.uniform(0.5, 2.0))
        for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
            tr.equal("Q symmetry", q_alpha(rho, sigma, alpha), q_alpha(sigma, rho, 1 - alpha), 1e-12)
            lhs = d_alpha(rho, sigma, alpha) / alpha
            rhs = d_alpha(sigma, rho, 1 - alpha) / (1 - alpha) \
                + math.log(rho.trace / sigma.trace) / (alpha * (1 - alpha))
            tr.equal("skew identity", lhs, rhs, 1e-10)
        d_vals = [d_alpha(rho, sigma, a) for a in grid]
        for x, y in zip(d_vals, d_vals[1:]):
            tr.ineq("alpha-monotone", x, y, 1e-9)
        logq = [math.log(q_alpha(rho, sigma, a)) for a in grid]
        for x, y, z in zip(logq, logq[1:], logq[2:]):
            tr.ineq("log Q convex", y, (x + z) / 2, 1e-9)
        for alpha in (1.2, 1.5, 2.0):
            tr.ineq("sandwiched <= Petz", sandwiched_d_alpha(rho, sigma, alpha),
                    d_alpha(rho, sigma, alpha), 1e-9)
        tr.ineq("D_2 <= D_max", d_alpha(rho, sigma, 2.0), d_max(rho, sigma), 1e-9)
        tr.ineq("strict positivity", math.log(rho.trace / sigma.trace), d_alpha(rho, sigma, 0.5), 1e-9)
    return tr.outcome("renyi", "Renyi symmetry, skew identity, alpha-monotonicity, log-convexity, "
                      "sandwiched ordering", trials)


def suite_variational(seed, trials, dim, catalog=CATALOG, n_max=DEFAULT_N_MAX):
    tr = _Tracker()
    for rng in trial_rngs(seed, trials):
        rho, sigma = conditioned_density(dim, rng), conditioned_density(dim, rng)
        for name in catalog:
            exact = standard_f_divergence(name, rho, sigma)
            value, report = variational_Sf(name, rho, sigma, n_max)
            tr.gap(f"agreement {name}", abs(value - exact) / max(1e-3, 1e-3 * abs(exact)), 1.0)
            vals = report.values
            for x, y in zip(vals, vals[1:]):
                tr.ineq("V(n) nondecreasing", x, y, 1e-9, scale=False)
            tr.ineq("V(n) <= S_f", max(vals), exact, 1e-8, scale=False)
    return tr.outcome("variational-agreement",
                      "sup_n V(n) = S_f; agreement gaps in units of max(1e-3, 1e-3|S_f|)", trials)


def suite_peierls(seed, trials, dim, catalog=CATALOG):
    tr = _Tracker()
    for rng in trial_rngs(seed, trials):
        rho, sigma = random_pair(dim, rng)
        rho = rho.scaled(rng.uniform(0.3, 3.0))
        for name in catalog:
            f = catalog_lookup(name)
            bound = sigma.trace * float(f.func(rho.trace / sigma.trace))
            tr.ineq("inequality", bound, standard_f_divergence(f, rho, sigma), 1e-9)
            k = rng.uniform(0.3, 3.0)
            tr.equal("equality when proportional", standard_f_divergence(f, sigma.scaled(k), sigma),
                     sigma.trace * float(f.func(k)), 1e-9, scale=True)
        strict = relative_entropy(rho.normalized(), sigma)
        tr.gap("strict gap for non-proportional pairs", max(0.0, 1e-6 - strict), 0.0)
    return tr.outcome("peierls", "S_f(rho||sigma) >= sigma(1) f(rho(1)/sigma(1)), "
                      "equality iff proportional", trials)


def projection_chain(d, ranks, rng):
    U = random_unitary(d, rng)
    chain = []
    for r in ranks:
        D = np.zeros(d)
        D[:r] = 1
        chain.append((U * D) @ U.conj().T)
    return chain


def is_nonnegative(f):
    t = np.geomspace(1e-6, 1e6, 241)
    return bool(np.all(np.asarray(f.func(t)) >= 0))


def suite_compression(seed, trials, dim, catalog=CATALOG):
    tr = _Tracker()
    ranks = list(range(2, dim + 1, 2)) or [1]
    if ranks[-1] != dim:
        ranks.append(dim)
    for rng in trial_rngs(seed, trials):
        rho, sigma = random_pair(dim, rng)
        chain = projection_chain(dim, ranks, rng)
        for name in catalog:
            f = catalog_lookup(name)
            full = standard_f_divergence(f, rho, sigma)
            vals = [standard_f_divergence(f, compress(rho, e), compress(sigma, e)) for e in chain]
            tr.equal("reaches full value", vals[-1], full, 1e-9, scale=True)
            if is_nonnegative(f):
                for x, y in zip(vals, vals[1:]):
                    tr.ineq("nondecreasing for f >= 0", x, y, 1e-9)
    return tr.outcome("compression", "S_f along an increasing projection chain", trials)


def suite_perturbation(seed, trials, dim):
    tr = _Tracker()
    for rng in trial_rngs(seed, trials):
        phi = random_density(dim, rng).scaled(rng.uniform(0.5, 2.0))
        H = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = (H + H.conj().T) / 2
        omega = perturbed_state(phi, h).result
        tr.gap("Umegaki form", umegaki_check(omega, phi, h), 1e-9)
        tr.gap("entropy decomposition", entropy_decomposition_check(random_density(dim, rng), phi, h),
               1e-8)
        w, p = random_density(dim, rng), random_density(dim, rng)
        res = petz_variational_entropy(w, p, h0=np.zeros((dim, dim)))
        target = relative_entropy(w, p)
        tr.gap("Petz supremum", abs(res.value - target), 1e-6)
        reached = next((i for i, v in enumerate(res.history) if abs(v - target) <= 1e-6), INF)
        tr.gap("Petz within 1e-6 after 500 iterations", 0.0 if reached <= 500 else INF, 0.0)
        for v in res.history:
            tr.ineq("Petz lower bounds", v, target, 1e-9, scale=False)
        log_p = matrix_log(p.operator)
        shift = rng.normal()
        tr.gap("gauge invariance", abs(petz_objective(w.operator, log_p, h + shift * np.eye(dim))
                                       - petz_objective(w.operator, log_p, h)), 1e-12)
        val, _ = free_energy_minimum(phi, h)
        tr.gap("free-energy duality", abs(val - log_partition_dual(phi, h)), 1e-6)
    return tr.outcome("perturbation", "relative entropy of perturbed states and its variational forms",
                      trials)


SUITES = {
    "transpose": suite_transpose,
    "dpi": suite_dpi,
    "convexity": suite_convexity,
    "renyi": suite_renyi,
    "variational-agreement": suite_variational,
    "peierls": suite_peierls,
    "compression": suite_compression,
    "perturbation": suite_perturbation,
}


def classical_consistency(f, rho, sigma):
    """Gap between S_f on a commuting pair and the classical divergence of its joint spectrum."""
    vals_r = np.real(np.diag(rho.operator))
    vals_s = np.real(np.diag(sigma.operator))
    return abs(standard_f_divergence(f, rho, sigma) - classical_f_divergence(f, vals_r, vals_s))
