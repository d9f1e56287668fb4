"""Adaptive quadrature over (0, inf) on a logarithmic scale.

Integrals here have the form ``int g(s) ds`` with ``g`` smooth on ``(0, inf)``
and power-law behaviour at both ends.  The interior is split into unit panels
in ``u = log s`` (plus caller breakpoints) and each panel goes to QUADPACK's
Gauss-Kronrod routine.  Tails toward ``0`` and ``inf`` are mapped onto
``(0, 1]`` by a power substitution chosen from the declared tail exponents so
that the transformed integrand is roughly constant.
"""
import math

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError

PANEL_ABS_TOL = 1e-10
PANEL_REL_TOL = 1e-13
_LIMIT = 200
_MARGIN = 4.0
_HUGE = 1e150


def _panel(g, lo, hi, epsabs, epsrel):
    value, abserr, info = quad(g, lo, hi, epsabs=epsabs, epsrel=epsrel,
                               limit=_LIMIT, full_output=1)[:3]
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite panel integral on [{lo}, {hi}]")
    if abserr > 1e3 * max(epsabs, epsrel * abs(value)) and abserr > 1e-8 * max(1.0, abs(value)):
        raise QuadratureError(
            f"panel [{lo:.3g}, {hi:.3g}] did not converge (error estimate {abserr:.3g})")
    return value


def log_quad(func, lo=0.0, hi=math.inf, points=(), tails=(0.0, -1.0),
             epsabs=PANEL_ABS_TOL, epsrel=PANEL_REL_TOL):
    """Integrate ``func(s) ds`` over ``[lo, hi]`` with ``0 <= lo < hi <= inf``.

    ``tails = (p0, pinf)`` are exponents with ``func(s) ~ s**p0`` as ``s -> 0``
    and ``func(s) ~ s**pinf`` as ``s -> inf``; they need ``p0 > -1`` and
    ``pinf < -1`` and only matter for the unbounded/zero ends.
    """
    if not 0.0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    logs = sorted({math.log(p) for p in points if lo < p < hi and math.isfinite(p)})
    ulo = math.log(lo) if lo > 0 else min(logs + [0.0]) - _MARGIN
    uhi = math.log(hi) if math.isfinite(hi) else max(logs + [0.0]) + _MARGIN
    if lo > 0 and not math.isfinite(hi) and uhi <= ulo:
        uhi = ulo + _MARGIN
    if lo == 0 and math.isfinite(hi) and ulo >= uhi:
        ulo = uhi - _MARGIN
    grid = np.arange(math.ceil(ulo), math.floor(uhi) + 1.0)
    edges = sorted({ulo, uhi, *[u for u in grid if ulo < u < uhi],
                    *[u for u in logs if ulo < u < uhi]})

    def in_log(u):
        s = math.exp(u)
        return func(s) * s

    parts = [_panel(in_log, x, y, epsabs, epsrel) for x, y in zip(edges[:-1], edges[1:])]

    p0, pinf = tails
    if lo == 0:
        s0 = math.exp(ulo)
        gam = 1.0 / (p0 + 1.0)

        def lower(tau):
            if tau <= 0.0:
                return 0.0
            return func(s0 * tau ** gam) * s0 * gam * tau ** (gam - 1.0)

        parts.append(_panel(lower, 0.0, 1.0, epsabs, epsrel))
    if not math.isfinite(hi):
        s1 = math.exp(uhi)
        gam = -1.0 / (pinf + 1.0)
        log_s1 = math.log(s1)

        def upper(tau):
            s = math.exp(log_s1 - gam * math.log(tau))
            return func(s) * s * gam / tau

        # beyond s = _HUGE the power law makes the transformed integrand constant,
        # so the stretch (0, tau_c] is added in closed form instead of overflowing
        tau_c = math.exp((log_s1 - math.log(_HUGE)) / gam)
        if tau_c >= 1.0:
            parts.append(upper(1.0))
        else:
            if tau_c > 0.0:
                parts.append(tau_c * upper(tau_c))
            parts.append(_panel(upper, tau_c, 1.0, epsabs, epsrel))
    return math.fsum(parts)
