"""Special functions: gamma, AGM, complete elliptic integrals, nome, theta
constants, Dedekind eta on the imaginary axis, generalized hypergeometric
series, integer-order incomplete gamma, Weierstrass g2, and singular moduli.

All public operations take an explicit PrecisionContext and return BigReal.
The private ``_raw`` helpers work on bare mpf values inside a caller-supplied
mpmath context; quadrature and the L-value machinery call those in their inner
loops where wrapper overhead would hurt.

Conventions:
  * K(k) and E(k) use the modulus k (not the parameter m = k^2).
  * K'(k) = K(sqrt(1 - k^2)) and collapses to pi / (2 agm(1, k)), which needs
    no complement at all; K(k) is computed as pi / (2 agm(1, sqrt((1-k)(1+k))))
    with the complement factored to dodge cancellation near k = 1.
  * theta2/3/4 take the nome q in (0, 1).
  * eta(y) evaluates the Dedekind eta at the point i*y on the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AccuracyShortfall, DivergenceError, DomainError, PoleError
from .precision import BigReal, PrecisionContext
from .sequences import accelerate_partial_sums

__all__ = [
    "SingularValue",
    "gamma",
    "agm",
    "ellK",
    "ellKprime",
    "ellE",
    "nome",
    "theta2",
    "theta3",
    "theta4",
    "eta",
    "pFq",
    "incomplete_gamma_int",
    "g2",
    "singular_value",
]


# ---------------------------------------------------------------------------
# raw kernels
# ---------------------------------------------------------------------------

def _agm_raw(mp, a, b):
    """Common limit of the arithmetic-geometric iteration, a, b > 0."""
    eps = mp.mpf(10) ** (-mp.dps)
    for _ in range(mp.prec.bit_length() + 64):
        gap = abs(a - b)
        if gap <= eps * a:
            break
        a, b = (a + b) / 2, mp.sqrt(a * b)
    return (a + b) / 2


def _K_from_complement(mp, one_minus_k, one_plus_k):
    """K(k) given the factored complement pieces 1-k and 1+k."""
    return mp.pi / (2 * _agm_raw(mp, mp.mpf(1), mp.sqrt(one_minus_k * one_plus_k)))


def _Kprime_raw(mp, k):
    """K'(k) = pi / (2 agm(1, k)); diverges logarithmically as k -> 0."""
    return mp.pi / (2 * _agm_raw(mp, mp.mpf(1), k))


def _E_raw(mp, k):
    """E(k) by the AGM variant tracking sum 2^(n-1) c_n^2."""
    one = mp.mpf(1)
    if k == 1:
        return one
    a, b = one, mp.sqrt((1 - k) * (1 + k))
    c = mp.mpf(k)
    acc = c * c / 2
    eps = mp.mpf(10) ** (-mp.dps)
    weight = one
    for _ in range(mp.prec.bit_length() + 64):
        a, b, c = (a + b) / 2, mp.sqrt(a * b), (a - b) / 2
        weight *= 2
        acc += weight * c * c / 2
        if abs(c) <= eps * a:
            break
    K = mp.pi / (2 * a)
    return K * (1 - acc)


def _theta_trunc(mp, q) -> int:
    """Smallest N with q^(N^2) below the working tail tolerance."""
    logq = -mp.log(q)
    bound = (mp.dps + 5) * mp.log(10)
    return int(mp.ceil(mp.sqrt(bound / logq))) + 1


def _theta234_raw(mp, q):
    """(theta2, theta3, theta4)(q) by direct summation, 0 < q < 1."""
    N = _theta_trunc(mp, q)
    one = mp.mpf(1)
    q2 = q * q
    # theta3/theta4: powers q^(n^2) via ratio q^(2n+1)
    t3 = one
    t4 = one
    term = one
    ratio = q
    for n in range(1, N + 1):
        term *= ratio          # now q^(n^2)
        ratio *= q2
        t3 += 2 * term
        t4 += 2 * term if (n % 2 == 0) else -2 * term
    # theta2: 2 * q^(1/4) * sum q^(n(n+1)),  ratio q^(2n)
    s = one
    term = one
    ratio = q2
    for n in range(1, N + 1):
        term *= ratio          # now q^(n(n+1))
        ratio *= q2
        s += term
    t2 = 2 * mp.power(q, mp.mpf(1) / 4) * s
    return t2, t3, t4


def _eta_raw(mp, y):
    """eta(i*y) for y > 0, with the inversion eta(iy) = eta(i/y)/sqrt(y)."""
    if y < 1:
        return _eta_raw(mp, 1 / y) / mp.sqrt(y)
    q = mp.exp(-2 * mp.pi * y)
    # pentagonal-number series for prod(1-q^n); indices grow quadratically
    bound = (mp.dps + 5) * mp.log(10) / (2 * mp.pi * y)
    s = mp.mpf(1)
    j = 1
    while True:
        e1 = j * (3 * j - 1) // 2
        e2 = j * (3 * j + 1) // 2
        if e1 > bound:
            break
        sgn = -1 if (j % 2) else 1
        s += sgn * (mp.power(q, e1) + (mp.power(q, e2) if e2 <= bound else 0))
        j += 1
    return mp.power(q, mp.mpf(1) / 24) * s


def _nome_raw(mp, alpha):
    """q = exp(-pi * 2F1(.5,.5;1;1-a) / 2F1(.5,.5;1;a)) via AGM quotient."""
    num = _agm_raw(mp, mp.mpf(1), mp.sqrt(alpha))
    den = _agm_raw(mp, mp.mpf(1), mp.sqrt(1 - alpha))
    return mp.exp(-mp.pi * num / den)


def _g2_raw(mp, y):
    """Weierstrass g2 at tau = i*y via theta constants at q = exp(-pi*y)."""
    q = mp.exp(-mp.pi * y)
    t2, t3, _ = _theta234_raw(mp, q)
    k2 = (t2 / t3) ** 4          # k^2 = theta2^4 / theta3^4
    K = mp.pi / 2 * t3 * t3
    return mp.mpf(64) / 3 * (1 - k2 + k2 * k2) * K ** 4


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def gamma(x, ctx: PrecisionContext) -> BigReal:
    """Gamma function; pole error at nonpositive integers.

    Fraction arguments hit the shared per-precision memo, which matters for
    the closed-form and PSLQ layers that evaluate the same Gamma(p/q) basis
    constants over and over.
    """
    if isinstance(x, (int, Fraction)):
        fx = Fraction(x)
        if fx.denominator == 1 and fx <= 0:
            raise PoleError(f"gamma pole at {x}")
        return ctx.real(ctx.gamma(fx))
    xv = ctx.mpf(x)
    if xv <= 0 and ctx.mp.isint(xv):
        raise PoleError(f"gamma pole at {x}")
    return ctx.real(ctx.mp.gamma(xv))


def agm(a, b, ctx: PrecisionContext) -> BigReal:
    av, bv = ctx.mpf(a), ctx.mpf(b)
    if av <= 0 or bv <= 0:
        raise DomainError("agm requires positive arguments")
    return ctx.real(_agm_raw(ctx.mp, av, bv))


def ellK(k, ctx: PrecisionContext) -> BigReal:
    """Complete elliptic integral K(k), 0 <= k < 1."""
    kv = ctx.mpf(k)
    if kv < 0 or kv >= 1:
        raise DivergenceError("ellK needs 0 <= k < 1 (diverges at k = 1)")
    return ctx.real(_K_from_complement(ctx.mp, 1 - kv, 1 + kv))


def ellKprime(k, ctx: PrecisionContext) -> BigReal:
    """Complementary integral K'(k) = K(sqrt(1-k^2)), 0 < k <= 1."""
    kv = ctx.mpf(k)
    if kv <= 0 or kv > 1:
        raise DivergenceError("ellKprime needs 0 < k <= 1 (diverges at k = 0)")
    return ctx.real(_Kprime_raw(ctx.mp, kv))


def ellE(k, ctx: PrecisionContext) -> BigReal:
    """Complete elliptic integral of the second kind, 0 <= k <= 1."""
    kv = ctx.mpf(k)
    if kv < 0 or kv > 1:
        raise DomainError("ellE needs 0 <= k <= 1")
    return ctx.real(_E_raw(ctx.mp, kv))


def nome(alpha, ctx: PrecisionContext) -> BigReal:
    """Elliptic nome q(alpha) for alpha in (0,1); strictly increasing."""
    av = ctx.mpf(alpha)
    if not (0 < av < 1):
        raise DomainError("nome needs 0 < alpha < 1")
    return ctx.real(_nome_raw(ctx.mp, av))


def _check_nome_arg(q, ctx):
    qv = ctx.mpf(q)
    if not (0 < qv < 1):
        raise DivergenceError("theta series need 0 < q < 1")
    return qv


def theta2(q, ctx: PrecisionContext) -> BigReal:
    qv = _check_nome_arg(q, ctx)
    return ctx.real(_theta234_raw(ctx.mp, qv)[0])


def theta3(q, ctx: PrecisionContext) -> BigReal:
    qv = _check_nome_arg(q, ctx)
    return ctx.real(_theta234_raw(ctx.mp, qv)[1])


def theta4(q, ctx: PrecisionContext) -> BigReal:
    qv = _check_nome_arg(q, ctx)
    return ctx.real(_theta234_raw(ctx.mp, qv)[2])


def eta(y, ctx: PrecisionContext) -> BigReal:
    """Dedekind eta at i*y, y > 0."""
    yv = ctx.mpf(y)
    if yv <= 0:
        raise DomainError("eta(y) needs y > 0")
    return ctx.real(_eta_raw(ctx.mp, yv))


def incomplete_gamma_int(s: int, x, ctx: PrecisionContext) -> BigReal:
    """Upper incomplete Gamma(s, x) for integer s >= 1, exact finite form."""
    if not isinstance(s, int) or s < 1:
        raise DomainError("incomplete_gamma_int needs integer s >= 1")
    xv = ctx.mpf(x)
    if xv < 0:
        raise DomainError("incomplete_gamma_int needs x >= 0")
    mp = ctx.mp
    poly = mp.mpf(0)
    term = mp.mpf(1)
    for j in range(s):
        if j > 0:
            term = term * xv / j
        poly += term
    return ctx.real(mp.mpf(math.factorial(s - 1)) * mp.exp(-xv) * poly)


def pFq(
    upper: Sequence,
    lower: Sequence,
    z,
    ctx: PrecisionContext,
    accel: bool = False,
) -> BigReal:
    """Generalized hypergeometric sum with exact rational term ratios.

    With ``accel`` set, the partial-sum sequence is run through the Levin
    u-transform (needed at z = 1 where the terms decay only polynomially).
    The returned BigReal's ``precision`` field carries the honest estimate of
    achieved digits; an AccuracyShortfall is raised if that estimate lands
    below the context target.
    """
    ups = [Fraction(a) for a in upper]
    lows = [Fraction(b) for b in lower]
    for b in lows:
        if b.denominator == 1 and b <= 0:
            raise PoleError("lower parameter is a nonpositive integer")
    terminating = any(a.denominator == 1 and a <= 0 for a in ups)

    # Acceleration forms deep divided differences, so it runs with roughly
    # doubled guard digits and the result is rounded back at the end.
    mp = ctx.widen(ctx.target_digits + 10).mp if accel else ctx.mp
    z_frac = Fraction(z) if isinstance(z, (int, Fraction)) else None
    zv = mp.mpf(ctx.mpf(z))

    if not terminating:
        if abs(zv) > 1:
            raise DivergenceError("pFq series diverges for |z| > 1")
        if abs(zv) == 1:
            # term decay exponent: t_n ~ n^(sum(ups) - sum(lows) - 1)
            if sum(lows) - sum(ups) <= 0:
                raise DivergenceError(
                    "pFq at |z| = 1 needs sum(lower) > sum(upper)"
                )

    eps = mp.mpf(10) ** (-(mp.dps - 2))
    term = mp.mpf(1)
    total = mp.mpf(1)
    sums = [total]
    max_terms = 100000 if not accel else max(80, 3 * ctx.target_digits)
    n = 0
    small_streak = 0
    while n < max_terms:
        ratio_num = 1
        ratio_den = 1
        for a in ups:
            r = a + n
            ratio_num *= r.numerator
            ratio_den *= r.denominator
        for b in lows:
            r = b + n
            ratio_num *= r.denominator
            ratio_den *= r.numerator
        ratio_den *= n + 1
        if ratio_num == 0:
            break  # terminating series
        if z_frac is not None:
            ratio_num *= z_frac.numerator
            ratio_den *= z_frac.denominator
            term = term * ratio_num / ratio_den
        else:
            term = term * ratio_num / ratio_den * zv
        total += term
        sums.append(total)
        n += 1
        if not accel:
            small_streak = small_streak + 1 if abs(term) < eps * abs(total) else 0
            if small_streak >= 2:
                return ctx.real(total)

    if not accel:
        if terminating:
            return ctx.real(total)
        raise AccuracyShortfall(
            "pFq stopped before the tail fell below tolerance; "
            "polynomial decay needs accel=True",
            value=ctx.real(total),
        )

    value, achieved = accelerate_partial_sums(sums, mp, ctx.target_digits)
    achieved = min(achieved, ctx.working_digits)
    out = BigReal(ctx.mpf(value), max(achieved, 1))
    if achieved < ctx.target_digits:
        raise AccuracyShortfall(
            f"pFq acceleration reached ~{achieved} digits "
            f"(target {ctx.target_digits})",
            value=out,
            achieved=achieved,
        )
    return out


def g2(y, ctx: PrecisionContext) -> BigReal:
    """Weierstrass invariant g2 at tau = i*y (y > 0)."""
    yv = ctx.mpf(y)
    if yv <= 0:
        raise DomainError("g2 needs y > 0")
    return ctx.real(_g2_raw(ctx.mp, yv))


@dataclass(frozen=True)
class SingularValue:
    """Modulus k_p with K'(k_p)/K(k_p) = sqrt(p)."""

    p: Fraction
    modulus: BigReal


def singular_value(p, ctx: PrecisionContext) -> SingularValue:
    """k_p from theta constants at q = exp(-pi sqrt(p)); always numeric."""
    pf = Fraction(p)
    if pf <= 0:
        raise DomainError("singular_value needs p > 0")
    mp = ctx.mp
    q = mp.exp(-mp.pi * mp.sqrt(mp.mpf(pf.numerator) / pf.denominator))
    t2, t3, _ = _theta234_raw(mp, q)
    return SingularValue(pf, ctx.real((t2 / t3) ** 2))
