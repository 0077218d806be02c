"""L-values of cuspidal q-expansions by splitting the Mellin integral.

For integer 1 <= s <= w-1,

    L(f,s) = sum_n a_n n^(-s) Gamma(s, 2 pi n y0)/Gamma(s)
           + (2 pi)^s/Gamma(s) * y0^s * int_0^1 f(i y0 x) x^(s-1) dx

and the result does not depend on the split height y0 (default 1); tests
move y0 to 0.7 to make sure.  Heads are where the care goes:

  * eta-quotient sources evaluate f(iy) as a product of eta(i m y) through
    the eta inversion, so the integrand is stable down to y = 0;
  * theta sources sum cached integer coefficients with a term budget that
    grows like 1/y, and below the height where a weight-w decay bound pins
    |f(iy)| under the working noise floor the head evaluator returns 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from .errors import ConvergenceFailure, DomainError, NonCuspidalError, UnknownIdError
from .precision import BigReal, PrecisionContext, digits_agreement, to_rational
from .qseries import (
    EtaQuotientSpec,
    QSeries,
    ThetaSpec,
    eta_quotient_expand,
    theta_expand,
    THETA_W9,
)
from .special import _eta_raw, _g2_raw, _theta234_raw

__all__ = [
    "ModularFormSpec",
    "form_by_name",
    "form_names",
    "lvalue",
    "lvalue_weight3",
    "lvalue_weight9_s8",
    "critical_ratio",
]

Source = Union[EtaQuotientSpec, ThetaSpec]


@dataclass(frozen=True, eq=False)
class ModularFormSpec:
    """A cusp form the package knows how to expand and evaluate.

    source is either an eta quotient or a bivariate theta sum; level feeds
    the small-height decay bound used by theta-source heads.
    """

    name: str
    weight: int
    source: Source
    level: int


_FORMS: Dict[str, ModularFormSpec] = {}


def _register(name, weight, source, level):
    _FORMS[name] = ModularFormSpec(name, weight, source, level)


_register("g", 5, EtaQuotientSpec(((1, 4), (2, 2), (4, 4))), 8)
_register("h", 5, EtaQuotientSpec(((8, 38), (4, -14), (16, -14))), 64)
_register("f1", 4, EtaQuotientSpec(((4, 16), (2, -4), (8, -4))), 8)
_register("f2", 4, EtaQuotientSpec(((2, 4), (4, 4))), 8)
_register("eta6-4", 3, EtaQuotientSpec(((4, 6),)), 16)
_register("seventh", 3, EtaQuotientSpec(((1, 2), (2, 1), (4, 1), (8, 2))), 8)
_register("f0-7", 3, EtaQuotientSpec(((2, 7), (8, 2), (1, -2), (4, -1))), 32)
_register("tbl5", 3, EtaQuotientSpec(((4, 5), (8, 5), (2, -2), (16, -2))), 32)
_register("tbl6", 3, EtaQuotientSpec(((8, 18), (4, -6), (16, -6))), 64)
_register("eta3-2-6", 3, EtaQuotientSpec(((2, 3), (6, 3))), 12)
_register("eta3-1-7", 3, EtaQuotientSpec(((1, 3), (7, 3))), 7)
_register("eta3-3-5", 3, EtaQuotientSpec(((3, 3), (5, 3))), 15)
_register("eta3-1-15", 3, EtaQuotientSpec(((1, 3), (15, 3))), 15)
_register("w9", 9, THETA_W9, 4)


def form_by_name(name: str) -> ModularFormSpec:
    try:
        return _FORMS[name]
    except KeyError:
        raise UnknownIdError(f"no form {name!r}; known: {', '.join(form_names())}")


def form_names():
    return sorted(_FORMS)


# cached integer coefficient blocks, grown on demand
_SERIES: Dict[str, QSeries] = {}


def _series_for(form: ModularFormSpec, N: int) -> QSeries:
    cached = _SERIES.get(form.name)
    if cached is not None and cached.valid_through() >= N:
        return cached
    grow = max(N, 64)
    grow = 1 << (grow - 1).bit_length()
    if isinstance(form.source, EtaQuotientSpec):
        series = eta_quotient_expand(form.source, grow + 1)
    else:
        series = theta_expand(form.source, grow)
    _SERIES[form.name] = series
    return series


def _check_cuspidal(form: ModularFormSpec, series: QSeries):
    lead = series.lead
    if lead <= 0 or lead.denominator != 1:
        raise NonCuspidalError(
            f"{form.name}: expansion starts at q^{lead}, not a positive integer power"
        )


def _eta_height(mp, spec: EtaQuotientSpec, y):
    val = mp.mpf(1)
    for m, e in spec.factors:
        val *= _eta_raw(mp, m * y) ** e
    return val


class _ThetaHeight:
    """f(iy) for a theta-source form, with budgeted truncation."""

    def __init__(self, form: ModularFormSpec, series: QSeries, wd: int):
        self.form = form
        self.series = series
        self.wd = wd
        self.weight = form.weight
        self.level = form.level
        self.lead = int(series.lead)
        # decay constant of |f(iv)| <= C e^{-2 pi v} for v >= 1, measured
        # from the coefficients themselves
        c = 0.0
        for i, cv in enumerate(series.coeffs[:40]):
            c += abs(cv) * math.exp(-2 * math.pi * i)
        self.C = c + 1.0

    def __call__(self, mp, y):
        wd = self.wd
        M = self.level
        w = self.weight
        yf = float(y)
        if yf == 0.0:
            # below double-precision underflow the decay bound holds a fortiori
            return mp.mpf(0)
        if y <= 1 / math.sqrt(M):
            # |f(iy)| <= M^(-w/2) y^(-w) C e^(-2 pi/(M y)); once that is
            # below the noise floor the head cannot see the difference
            logbound = (
                -w / 2 * math.log10(M)
                - w * math.log10(float(y))
                + math.log10(self.C)
                - 2 * math.pi / (M * float(y)) / math.log(10)
            )
            if logbound < -(wd + 10):
                return mp.mpf(0)
        budget = (wd + 25) * math.log(10) / (2 * math.pi * yf)
        need = int(budget - self.lead) + 2
        if need > len(self.series.coeffs):
            self.series = _series_for(self.form, self.lead + need + 8)
        r = mp.exp(-2 * mp.pi * y)
        coeffs = self.series.coeffs
        nmax = min(len(coeffs), need)
        total = mp.mpf(0)
        qpow = r ** self.lead
        for i in range(nmax):
            c = coeffs[i]
            if c:
                total += c * qpow
            qpow *= r
        return total


def _height_function(form: ModularFormSpec, series: QSeries, wd: int):
    if isinstance(form.source, EtaQuotientSpec):
        spec = form.source
        return lambda mp, y: _eta_height(mp, spec, y)
    return _ThetaHeight(form, series, wd)


def lvalue(f, s: int, ctx: PrecisionContext, split=1) -> BigReal:
    """L(f, s) for integer s with 1 <= s <= weight-1.

    ``f`` is a ModularFormSpec or a registered name.  ``split`` moves the
    Mellin split height; any positive value gives the same answer.
    """
    form = form_by_name(f) if isinstance(f, str) else f
    if not isinstance(s, int):
        raise DomainError(f"integer s required, got {s!r}")
    if not 1 <= s <= form.weight - 1:
        raise DomainError(
            f"s={s} outside the critical range 1..{form.weight - 1} for {form.name}"
        )
    wctx = ctx.widen(10)
    mp = wctx.mp
    wd = wctx.working_digits
    y0 = wctx.mpf(split)
    if not y0 > 0:
        raise DomainError("split height must be positive")

    n_tail = int(0.3665 * (wd + 5) / float(y0)) + 12
    series = _series_for(form, n_tail + 2)
    _check_cuspidal(form, series)

    two_pi_y0 = 2 * mp.pi * y0
    tail = mp.mpf(0)
    for n in range(1, n_tail + 1):
        a_n = series.coefficient(n)
        if a_n == 0:
            continue
        x = two_pi_y0 * n
        # Gamma(s, x)/Gamma(s) = e^-x sum_{j<s} x^j/j!
        poly = mp.mpf(1)
        term = mp.mpf(1)
        for j in range(1, s):
            term = term * x / j
            poly += term
        tail += a_n * mp.exp(-x) * poly / mp.mpf(n) ** s

    height = _height_function(form, series, wd)

    def head_kernel(x, xc):
        v = height(mp, y0 * x)
        return v if s == 1 else v * x ** (s - 1)

    from .quadrature import tanh_sinh

    hctx = wctx.with_target(min(ctx.target_digits + 6, wd - 6))
    head = tanh_sinh(head_kernel, hctx)
    gamma_s = mp.factorial(s - 1)
    L = tail + (2 * mp.pi) ** s / gamma_s * y0 ** s * head.value.value
    return ctx.real(L)


def lvalue_weight3(r: int, s: int, ctx: PrecisionContext) -> BigReal:
    """Central value attached to the pair (r, s) with r + s = 0 mod 8.

    Two numerically independent routes at the nome q = exp(-pi sqrt(r/s)):
    theta nulls (2 pi^2/sqrt(r s^3)) theta2(q)^2 theta4(q)^2, and the
    fourth power of the signed odd-square series
    (8 pi^2/sqrt(r s^3)) (sum (-1)^(n(n+1)/2) q^((2n+1)^2/8))^4.
    Both are computed and must agree to the context target.
    """
    if not (isinstance(r, int) and isinstance(s, int) and r > 0 and s > 0):
        raise DomainError("r and s must be positive integers")
    if (r + s) % 8 != 0:
        raise DomainError(f"(r, s)=({r}, {s}) violates r + s = 0 (mod 8)")
    wctx = ctx.widen(8)
    mp = wctx.mp
    wd = wctx.working_digits
    alpha = mp.sqrt(mp.mpf(r) / s)
    q = mp.exp(-mp.pi * alpha)
    norm = mp.sqrt(mp.mpf(r) * s ** 3)

    t2, _t3, t4 = _theta234_raw(mp, q)
    route_theta = 2 * mp.pi ** 2 / norm * (t2 * t4) ** 2

    # signed odd-square series: sign pattern + - - + with period 4 in n
    bound = 8 * (wd + 5) * mp.log(10) / (mp.pi * alpha)
    S = mp.mpf(0)
    n = 0
    while (2 * n + 1) ** 2 <= bound:
        sign = -1 if (n * (n + 1) // 2) % 2 else 1
        S += sign * q ** (mp.mpf((2 * n + 1) ** 2) / 8)
        n += 1
    route_series = 8 * mp.pi ** 2 / norm * S ** 4

    a = wctx.real(route_theta)
    b = wctx.real(route_series)
    agree = digits_agreement(a, b)
    if agree < ctx.target_digits:
        raise ConvergenceFailure(
            f"weight-3 routes for ({r},{s}) agree to only {agree} digits"
        )
    return ctx.real(route_theta)


def lvalue_weight9_s8(ctx: PrecisionContext) -> BigReal:
    """The s = 8 value of the weight-9 series, in Eisenstein closed form.

    zeta(8) E4(i)^2 / 2, with E4(i) read off the quartic invariant at
    tau = i:  E4(i) = 12 g2(i) / (2 pi)^4 and zeta(8) = pi^8/9450.
    """
    mp = ctx.mp
    e4 = 12 * _g2_raw(mp, mp.mpf(1)) / (2 * mp.pi) ** 4
    zeta8 = mp.pi ** 8 / 9450
    return ctx.real(zeta8 * e4 ** 2 / 2)


def critical_ratio(
    f,
    s1: int,
    s2: int,
    ctx: PrecisionContext,
    max_denominator: int = 10 ** 6,
) -> Optional[Tuple[Fraction, int]]:
    """Express L(f,s1)/L(f,s2) as rational * pi^power if possible.

    Returns (rational, power) with denominator <= max_denominator, or None
    when no such pair fits at the working tolerance.  The expected power
    s1 - s2 is tried first.
    """
    form = form_by_name(f) if isinstance(f, str) else f
    l1 = lvalue(form, s1, ctx)
    l2 = lvalue(form, s2, ctx)
    x = (l1 / l2).value
    mp = ctx.mp
    w = form.weight
    candidates = [s1 - s2] + [p for p in range(-w - 2, w + 3) if p != s1 - s2]
    for p in candidates:
        scaled = ctx.real(x / mp.pi ** p)
        rat = to_rational(scaled, max_denominator)
        if rat is not None and rat != 0:
            return rat, p
    return None
