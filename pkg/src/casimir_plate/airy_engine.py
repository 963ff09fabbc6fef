"""Airy functions on the nonnegative real axis, in overflow-safe scaled form.

Ai and Bi are the two solutions of w'' = z w.  For z >= 0 define
zeta = (2/3) z^{3/2} and the scaled quadruple

    ai_s  = Ai(z)  e^{+zeta}      bi_s  = Bi(z)  e^{-zeta}
    aip_s = Ai'(z) e^{+zeta}      bip_s = Bi'(z) e^{-zeta}

which stay O(z^{1/4}) for every representable z, while the raw values
underflow (Ai, near z ~ 106) and overflow (Bi, near z ~ 700).  Every ratio
and cross product downstream is assembled from the scaled values with the
exponents cancelled in closed form.  The Wronskian

    Ai(z) Bi'(z) - Ai'(z) Bi(z) = 1/pi

turns into ai_s * bip_s - aip_s * bi_s = 1/pi with no exponentials left,
and that identity is the main conformance handle of the whole module.

Point evaluation uses scipy's scaled evaluator below ``Z_SWITCH`` and an
in-house asymptotic series above it.  scipy's evaluator degrades to NaN
near z ~ 1e6 while the force integrals need arguments up to ~1e20; the
asymptotic series of the scaled functions is accurate to machine precision
from roughly z = 20 upward, so the two regimes overlap over a wide band and
their agreement across that band is asserted in the test suite.

``airy_via_ode_oracle`` provides reference values on [0, 50] by a route
independent of both evaluators: adaptive high-order integration of
w'' = t w seeded with closed-form values at t = 0 (for Bi) and with the
asymptotic series at t = 50 (for Ai, marched downward; the upward
direction is exponentially unstable for the decaying solution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import solve_ivp
from scipy.special import airye as _scipy_airye

from .errors import DomainError, OracleError

__all__ = [
    "AiryValues",
    "airy_eval",
    "log_deriv_ai",
    "log_deriv_bi",
    "airy_via_ode_oracle",
    "zeta_of",
    "zeta_gap",
    "AI_ZERO",
    "AIP_ZERO",
    "BI_ZERO",
    "BIP_ZERO",
    "Z_SWITCH",
]

# Closed forms at the origin:
#   Ai(0) = 3^{-2/3}/Gamma(2/3)   Ai'(0) = -3^{-1/3}/Gamma(1/3)
#   Bi(0) = 3^{-1/6}/Gamma(2/3)   Bi'(0) =  3^{1/6}/Gamma(1/3)
AI_ZERO = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP_ZERO = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
BI_ZERO = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
BIP_ZERO = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)

# scipy below, asymptotic series above; both are good to a few ulp here.
Z_SWITCH = 40.0

_ODE_MAX = 50.0  # oracle range; the asymptotic seed sits at this point


@dataclass(frozen=True)
class AiryValues:
    """Ai, Bi and first derivatives at one argument, raw and scaled.

    The raw fields are best-effort: beyond representability they underflow
    to 0.0 (Ai side) or overflow to inf (Bi side) without raising.  The
    scaled fields are accurate for every z the constructor accepts.
    """

    z: float
    ai: float
    aip: float
    bi: float
    bip: float
    zeta: float
    ai_s: float
    aip_s: float
    bi_s: float
    bip_s: float

    def wronskian_scaled(self) -> float:
        """ai_s*bip_s - aip_s*bi_s; equals 1/pi for exact values."""
        return self.ai_s * self.bip_s - self.aip_s * self.bi_s


def zeta_of(z: float) -> float:
    """zeta(z) = (2/3) z^{3/2} for z >= 0."""
    return (2.0 / 3.0) * z * math.sqrt(z)


def zeta_gap(z_hi: float, z_lo: float) -> float:
    """zeta(z_hi) - zeta(z_lo) without cancellation for nearby arguments.

    Uses a^{3/2} - b^{3/2} = (a - b)(a^2 + ab + b^2)/(a^{3/2} + b^{3/2}),
    exact in the reals.  Direct subtraction of the two zetas loses every
    significant digit once (z_hi - z_lo)/z_hi drops toward machine epsilon,
    which happens routinely in the force integrand at large momentum.
    """
    if z_hi < z_lo:
        raise DomainError("zeta_gap expects z_hi >= z_lo")
    if z_hi == z_lo:
        return 0.0
    num = (z_hi - z_lo) * (z_hi * z_hi + z_hi * z_lo + z_lo * z_lo)
    den = z_hi * math.sqrt(z_hi) + z_lo * math.sqrt(z_lo)
    return (2.0 / 3.0) * num / den


# ---------------------------------------------------------------------------
# Large-z series of the scaled functions.
#
#   ai_s  ~ (2 sqrt(pi) z^{1/4})^{-1} sum (-1)^k u_k zeta^{-k}
#   aip_s ~ -(z^{1/4} / (2 sqrt(pi))) sum (-1)^k v_k zeta^{-k}
#   bi_s  ~ (sqrt(pi) z^{1/4})^{-1} sum u_k zeta^{-k}
#   bip_s ~ (z^{1/4} / sqrt(pi)) sum v_k zeta^{-k}
#
# with u_0 = v_0 = 1, u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)),
# v_k = u_k (6k+1)/(1-6k).

_N_TERMS = 24
_U = [1.0]
for _k in range(1, _N_TERMS + 1):
    _U.append(
        _U[-1]
        * (6.0 * _k - 5.0)
        * (6.0 * _k - 3.0)
        * (6.0 * _k - 1.0)
        / (216.0 * _k * (2.0 * _k - 1.0))
    )
_V = [1.0] + [_U[_k] * (6.0 * _k + 1.0) / (1.0 - 6.0 * _k) for _k in range(1, _N_TERMS + 1)]


def _asymptotic_scaled(z: float) -> tuple[float, float, float, float]:
    """(ai_s, aip_s, bi_s, bip_s) from the large-z series.

    Powers of 1/zeta are built incrementally: zeta**k overflows long
    before the series stops being useful (zeta ~ 1e30 at z ~ 1e20).
    Summation stops once terms fall below 1e-20 of the leading one, which
    for z >= 20 happens well before the divergent turn of the series.
    """
    zeta = zeta_of(z)
    q = z**0.25
    rp = 1.0 / math.sqrt(math.pi)
    sa = sap = sb = sbp = 0.0
    p = 1.0
    sign = 1.0
    for k in range(_N_TERMS + 1):
        tu = _U[k] * p
        tv = _V[k] * p
        sa += sign * tu
        sap += sign * tv
        sb += tu
        sbp += tv
        if abs(tu) < 1e-20:
            break
        p /= zeta
        sign = -sign
    return (0.5 * rp / q * sa, -0.5 * rp * q * sap, rp / q * sb, rp * q * sbp)


def _exp_soft(t: float) -> float:
    """exp(t) saturating to 0.0 / inf instead of raising OverflowError."""
    if t > 709.0:
        return math.inf
    if t < -745.0:
        return 0.0
    return math.exp(t)


def _validate(z: float) -> float:
    try:
        zf = float(z)
    except (TypeError, ValueError):
        raise DomainError(f"argument must be a real number, got {z!r}") from None
    if not math.isfinite(zf) or zf < 0.0:
        raise DomainError(f"argument must be finite and >= 0, got {z!r}")
    return zf


def airy_eval(z: float) -> AiryValues:
    """Evaluate Ai, Bi and derivatives at z >= 0.

    Scaled fields are accurate over the whole domain; raw fields saturate
    gracefully once e^{+-zeta} leaves the representable range.
    """
    zf = _validate(z)
    zeta = zeta_of(zf)
    if zf < Z_SWITCH:
        ai_s, aip_s, bi_s, bip_s = (float(v) for v in _scipy_airye(zf))
    else:
        ai_s, aip_s, bi_s, bip_s = _asymptotic_scaled(zf)
    em = _exp_soft(-zeta)
    ep = _exp_soft(zeta)
    return AiryValues(
        z=zf,
        ai=ai_s * em,
        aip=aip_s * em,
        bi=bi_s * ep,
        bip=bip_s * ep,
        zeta=zeta,
        ai_s=ai_s,
        aip_s=aip_s,
        bi_s=bi_s,
        bip_s=bip_s,
    )


def log_deriv_ai(z: float) -> float:
    """Ai'(z)/Ai(z), strictly negative; tends to -sqrt(z) - 1/(4z) at large z.

    Computed from the scaled values, so the exponentials cancel exactly and
    the ratio stays accurate far beyond where Ai itself underflows.
    """
    v = airy_eval(z)
    return v.aip_s / v.ai_s


def log_deriv_bi(z: float) -> float:
    """Bi'(z)/Bi(z), strictly positive; tends to +sqrt(z) - 1/(4z) at large z."""
    v = airy_eval(z)
    return v.bip_s / v.bi_s


# ---------------------------------------------------------------------------
# ODE oracle.


def _ode_rhs(t, y):
    return (y[1], t * y[0])


def _integrate(t0: float, y0: tuple[float, float], t1: float) -> tuple[float, float]:
    sol = solve_ivp(
        _ode_rhs,
        (t0, t1),
        list(y0),
        method="DOP853",
        rtol=1e-13,
        atol=1e-300,
        t_eval=[t1],
    )
    if not sol.success:
        raise OracleError(f"integration of w'' = t w failed: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def _ai_seed() -> tuple[float, float]:
    ai_s, aip_s, _, _ = _asymptotic_scaled(_ODE_MAX)
    e = math.exp(-zeta_of(_ODE_MAX))
    return ai_s * e, aip_s * e


_AI_SEED = _ai_seed()


def _assemble_from_raw(z: float, ai: float, aip: float, bi: float, bip: float) -> AiryValues:
    # e^{zeta(50)} ~ 1e102: representable, so raw <-> scaled is safe here
    zeta = zeta_of(z)
    ep = math.exp(zeta)
    em = math.exp(-zeta)
    return AiryValues(
        z=z, ai=ai, aip=aip, bi=bi, bip=bip, zeta=zeta,
        ai_s=ai * ep, aip_s=aip * ep, bi_s=bi * em, bip_s=bip * em,
    )


def airy_via_ode_oracle(z: float) -> AiryValues:
    """Reference Airy values on [0, 50] by direct integration of w'' = t w.

    Bi is integrated upward from the closed-form origin values: the growing
    solution is the stable direction, so rounding noise stays bounded.  Ai
    upward is hopeless; any rounding injects a Bi component amplified by
    e^{2 zeta}, a factor ~1e18 already at t = 10.  Ai is therefore seeded
    at t = 50 with the asymptotic series (whose truncation error there is
    far below double precision) and marched downward, the stable direction
    for the decaying solution.  The closed-form origin values give an
    end-to-end check of that sweep, exercised in the test suite.
    """
    zf = _validate(z)
    if zf > _ODE_MAX:
        raise DomainError(f"oracle covers [0, {_ODE_MAX}], got {z!r}")
    if zf == 0.0:
        return _assemble_from_raw(0.0, AI_ZERO, AIP_ZERO, BI_ZERO, BIP_ZERO)
    bi, bip = _integrate(0.0, (BI_ZERO, BIP_ZERO), zf)
    if zf == _ODE_MAX:
        ai, aip = _AI_SEED
    else:
        ai, aip = _integrate(_ODE_MAX, _AI_SEED, zf)
    return _assemble_from_raw(zf, ai, aip, bi, bip)
