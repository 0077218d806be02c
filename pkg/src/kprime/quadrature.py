"""Tanh-sinh quadrature on (0,1) and the catalog of elliptic-moment integrands.

The variable change x = (1 + tanh((pi/2) sinh t))/2 pushes both endpoints to
infinity in t, so algebraic and logarithmic endpoint singularities are tamed
by the double-exponential decay of the weight.  Two implementation choices do
the heavy lifting for accuracy:

  * Abscissas come in exact pairs (x, 1-x): with u = (pi/2) sinh t,
    x = 1/(1+exp(-2u)) and 1-x = 1/(1+exp(2u)) are computed independently,
    each to full relative precision.  Kernels receive both, so expressions
    like (1-x^2)^(-3/4) never suffer cancellation near x = 1.
  * The weight simplifies to pi*cosh(t)*x*(1-x), which reuses those values.

Levels halve the step h = 2^(-level); each level only evaluates the odd
multiples of h and reuses the rest.  Convergence is declared when the last
two levels agree to the target, and the reported error estimate is their
relative gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import ConvergenceFailure, UnknownIdError
from .precision import BigReal, PrecisionContext
from .special import _E_raw, _K_from_complement, _Kprime_raw, _agm_raw

__all__ = [
    "Integrand",
    "QuadResult",
    "tanh_sinh",
    "moment",
    "moment_ids",
    "lvalue_ratio_integrals",
    "tricomi_partial_sum",
    "tricomi_identity_sides",
]


@dataclass(frozen=True)
class Integrand:
    """A named integrand on (0,1).

    ``kernel(mp, x, xc)`` evaluates the integrand at x given xc = 1-x exact;
    ``singularity`` documents the endpoint behavior; ``heavy`` marks kernels
    with third-or-higher powers of K/K' (their log^3+ endpoints want a wider
    working precision, at least target+15).
    """

    id: str
    kernel: Callable
    singularity: str = "smooth"
    heavy: bool = False

    def evaluator(self, k, ctx: PrecisionContext) -> BigReal:
        """Spec-shaped entry point: evaluate at a point given only k."""
        mp = ctx.mp
        kv = ctx.mpf(k)
        return ctx.real(self.kernel(mp, kv, 1 - kv))


@dataclass(frozen=True)
class QuadResult:
    """Outcome of a tanh-sinh run.

    ``error_estimate`` is the relative gap between the last two level
    refinements; the value is only returned when that gap is below
    10^(-target).
    """

    value: BigReal
    error_estimate: BigReal
    levels_used: int
    level_errors: tuple = field(default_factory=tuple, compare=False)


def _as_integrand(f) -> Integrand:
    if isinstance(f, Integrand):
        return f
    return Integrand(id="<callable>", kernel=lambda mp, x, xc: f(x, xc))


def tanh_sinh(
    f,
    ctx: PrecisionContext,
    max_level: int = 12,
    start_level: int = 3,
) -> QuadResult:
    """Integrate f over (0,1) to the context target.

    Accepts an Integrand or a bare callable ``(x, xc) -> value``.  Raises
    ConvergenceFailure if the level refinements have not settled to the
    target by ``max_level``, or if the integrand produces a NaN.
    """
    integrand = _as_integrand(f)
    mp = ctx.mp
    kernel = integrand.kernel
    target = ctx.target_digits

    ln10 = mp.log(10)
    # Truncate the t-grid where weight*|f| is provably dead even for
    # (1-x)^(-3/4)-type kernels: the effective decay exponent is u/2, so ask
    # for u beyond ~2.2x the working decimal budget.
    u_needed = mp.mpf(22) / 10 * (mp.dps + 8) * ln10
    T = mp.log(4 * u_needed / mp.pi) + mp.mpf(1) / 2
    half_pi = mp.pi / 2

    def g(t):
        """weight(t) * f(x(t)); t > 0 handles the pair (x, 1-x)."""
        u = half_pi * mp.sinh(t)
        emu = mp.exp(-2 * u)
        epu = mp.exp(2 * u)
        x = 1 / (1 + emu)
        xc = 1 / (1 + epu)
        w = mp.pi * mp.cosh(t) * x * xc
        if t == 0:
            return w * kernel(mp, x, xc)
        return w * (kernel(mp, x, xc) + kernel(mp, xc, x))

    tol = mp.mpf(10) ** (-(target + 2))
    h = mp.mpf(2) ** (-start_level)
    # Base level: all multiples of h in [0, T].
    total = g(mp.mpf(0))
    j = 1
    while j * h <= T:
        val = g(j * h)
        if mp.isnan(val):
            raise ConvergenceFailure(
                f"integrand {integrand.id!r} returned NaN near t={float(j * h):.3f}"
            )
        total += val
        j += 1
    estimate = total * h
    prev = None
    errors = []
    rel_err = mp.inf

    for level in range(start_level + 1, max_level + 1):
        h = h / 2
        new = mp.mpf(0)
        j = 1
        while j * h <= T:
            val = g(j * h)
            if mp.isnan(val):
                raise ConvergenceFailure(
                    f"integrand {integrand.id!r} returned NaN near t={float(j * h):.3f}"
                )
            new += val
            j += 2
        prev, estimate = estimate, estimate / 2 + new * h
        scale = max(abs(estimate), mp.mpf(1))
        rel_err = abs(estimate - prev) / scale
        errors.append(rel_err)
        if rel_err <= tol:
            achieved = int(mp.floor(-mp.log10(rel_err))) if rel_err > 0 else mp.dps
            prec = max(min(achieved, mp.dps - 2), 1)
            return QuadResult(
                value=BigReal(estimate, prec),
                error_estimate=ctx.real(rel_err),
                levels_used=level,
                level_errors=tuple(errors),
            )

    raise ConvergenceFailure(
        f"tanh-sinh did not reach {target} digits for {integrand.id!r} "
        f"within level {max_level} (last relative gap ~1e{int(mp.log10(rel_err)) if rel_err > 0 else 'tiny'})"
    )


# ---------------------------------------------------------------------------
# integrand catalog
# ---------------------------------------------------------------------------

def _K(mp, x, xc):
    return _K_from_complement(mp, xc, 1 + x)


def _Kp(mp, x):
    return _Kprime_raw(mp, x)


def _kernel_k3(mp, x, xc):
    return _Kp(mp, x) ** 3


def _kernel_K3(mp, x, xc):
    return _K(mp, x, xc) ** 3


def _kernel_kK3(mp, x, xc):
    return x * _Kp(mp, x) ** 3


def _kernel_K2Kp(mp, x, xc):
    return _K(mp, x, xc) ** 2 * _Kp(mp, x)


def _kernel_EKp2(mp, x, xc):
    return _E_raw(mp, x) * _Kp(mp, x) ** 2


def _kernel_g1(mp, x, xc):
    return x * _K(mp, x, xc) ** 3


def _kernel_g2m(mp, x, xc):
    return x * _K(mp, x, xc) ** 2 * _Kp(mp, x)


def _kernel_g3(mp, x, xc):
    return x * _Kp(mp, x) ** 2 * _K(mp, x, xc)


def _kernel_h4(mp, x, xc):
    return _Kp(mp, x) ** 3 / (mp.sqrt(x) * (xc * (1 + x)) ** (mp.mpf(3) / 4))


def _kernel_h4_alt(mp, x, xc):
    return (1 + x) ** 3 * _Kp(mp, x) ** 3 / (x ** (mp.mpf(3) / 4) * mp.sqrt(xc))


def _kernel_h3(mp, x, xc):
    return (
        _Kp(mp, x) ** 2
        * _K(mp, x, xc)
        / (mp.sqrt(x) * (xc * (1 + x)) ** (mp.mpf(3) / 4))
    )


def _kernel_w9(mp, x, xc):
    x2 = x * x
    return x * (4 + x2 - x2 * x2) * _Kp(mp, x) ** 7


def _kernel_w13(mp, x, xc):
    x2 = x * x
    poly = 16 + x2 * (-92 + x2 * (93 + x2 * (-2 + x2)))
    return x * poly * _Kp(mp, x) ** 11


def _kernel_t42a(mp, x, xc):
    return _K(mp, x, xc) / mp.sqrt(x * xc)


def _kernel_t42b(mp, x, xc):
    return _K(mp, x, xc) / (mp.sqrt(x) * (xc * (1 + x)) ** (mp.mpf(3) / 4))


def _kernel_t42c(mp, x, xc):
    return _K(mp, x, xc) / mp.sqrt(1 + x)


def _kernel_i1(mp, x, xc):
    return _Kp(mp, x) / mp.sqrt(1 + x)


def _kernel_i2(mp, x, xc):
    return _Kp(mp, x) / mp.sqrt(xc)


def _kernel_e6(mp, x, xc):
    return _K(mp, x, xc) / mp.sqrt(xc * (1 + x))


def _kernel_cubic(mp, x, xc):
    # modulus p^(3/2) sqrt(2+p) / sqrt(1+2p); its complement factors as
    # 1 - k^2 = (1-p)(1+p)^3/(1+2p), which the pair (x, xc) supplies exactly.
    one_minus_k2 = xc * (1 + x) ** 3 / (1 + 2 * x)
    K = mp.pi / (2 * _agm_raw(mp, mp.mpf(1), mp.sqrt(one_minus_k2)))
    return K / mp.sqrt(3 + 6 * x)


def _kernel_K2sq(mp, x, xc):
    return _K(mp, x, xc) ** 2


def _kernel_KKp(mp, x, xc):
    return _K(mp, x, xc) * _Kp(mp, x) / mp.sqrt(xc * (1 + x))


def _kernel_K2w(mp, x, xc):
    return _K(mp, x, xc) ** 2 / mp.sqrt(xc * (1 + x))


def _kernel_tricomi(mp, x, xc):
    kprime = mp.sqrt(xc * (1 + x))
    return kprime * _Kp(mp, x) - x * _K(mp, x, xc)


_CATALOG = {
    ig.id: ig
    for ig in [
        Integrand("k3", _kernel_k3, "log^3 at 0", heavy=True),
        Integrand("K3", _kernel_K3, "log^3 at 1", heavy=True),
        Integrand("kK3", _kernel_kK3, "log^3 at 0", heavy=True),
        Integrand("K2Kp", _kernel_K2Kp, "log at 0, log^2 at 1", heavy=True),
        Integrand("EKp2", _kernel_EKp2, "log^2 at 0", heavy=True),
        Integrand("g1", _kernel_g1, "log^3 at 1", heavy=True),
        Integrand("g2m", _kernel_g2m, "log at 0, log^2 at 1", heavy=True),
        Integrand("g3", _kernel_g3, "log^2 at 0, log at 1", heavy=True),
        Integrand("h4", _kernel_h4, "x^-1/2 log^3 at 0, (1-x)^-3/4 at 1", heavy=True),
        Integrand(
            "h4_alt", _kernel_h4_alt, "x^-3/4 log^3 at 0, (1-x)^-1/2 at 1", heavy=True
        ),
        Integrand(
            "h3", _kernel_h3, "x^-1/2 log^2 at 0, (1-x)^-3/4 log at 1", heavy=True
        ),
        Integrand("w9", _kernel_w9, "log^7 at 0", heavy=True),
        Integrand("w13", _kernel_w13, "log^11 at 0", heavy=True),
        Integrand("t42a", _kernel_t42a, "x^-1/2 at 0, (1-x)^-1/2 log at 1"),
        Integrand("t42b", _kernel_t42b, "x^-1/2 at 0, (1-x)^-3/4 log at 1"),
        Integrand("t42c", _kernel_t42c, "log at 1"),
        Integrand("i1", _kernel_i1, "log at 0"),
        Integrand("i2", _kernel_i2, "log at 0, (1-x)^-1/2 at 1"),
        Integrand("e6", _kernel_e6, "(1-x)^-1/2 log at 1"),
        Integrand("cubic", _kernel_cubic, "log at 1"),
        Integrand("K2sq", _kernel_K2sq, "log^2 at 1", heavy=True),
        Integrand("KKp", _kernel_KKp, "mixed logs, (1-x)^-1/2 at 1", heavy=True),
        Integrand("K2w", _kernel_K2w, "log^2 (1-x)^-1/2 at 1", heavy=True),
        Integrand("tricomi_f1", _kernel_tricomi, "log at both ends"),
    ]
}


def moment_ids() -> Sequence[str]:
    """All catalog ids, sorted."""
    return sorted(_CATALOG)


def moment(id: str, ctx: PrecisionContext) -> BigReal:
    """Tanh-sinh value of the cataloged integrand ``id``.

    Heavy kernels run with at least 15 guard digits.  On a convergence
    failure the guard is escalated twice (the plateau is roundoff noise,
    not a level shortage) before giving up.
    """
    try:
        integrand = _CATALOG[id]
    except KeyError:
        raise UnknownIdError(f"no integrand {id!r}; known: {', '.join(moment_ids())}")
    run_ctx = ctx
    if integrand.heavy and run_ctx.guard_digits < 15:
        run_ctx = run_ctx.widen(15 - run_ctx.guard_digits)
    last_exc = None
    for extra in (0, 12, 24):
        try:
            result = tanh_sinh(integrand, run_ctx.widen(extra) if extra else run_ctx)
            return result.value
        except ConvergenceFailure as exc:
            last_exc = exc
    raise last_exc


def lvalue_ratio_integrals(idA: str, idB: str, ctx: PrecisionContext) -> BigReal:
    """moment(idA) / moment(idB); pair with to_rational for ratio detection."""
    return moment(idA, ctx) / moment(idB, ctx)


# ---------------------------------------------------------------------------
# Fourier-series cross-checks
# ---------------------------------------------------------------------------

def tricomi_partial_sum(t, N: int, ctx: PrecisionContext) -> BigReal:
    """Partial sum of the K(sin t) sine series, N terms.

    The coefficient is Gamma^2(n+1/2)/Gamma^2(n+1), updated by the exact
    ratio ((n+1/2)/(n+1))^2 per term.
    """
    mp = ctx.mp
    tv = ctx.mpf(t)
    coeff = mp.pi  # Gamma(1/2)^2
    total = mp.mpf(0)
    for n in range(N):
        total += coeff * mp.sin((4 * n + 1) * tv)
        r = (2 * n + 1) / mp.mpf(2 * n + 2)
        coeff *= r * r
    return ctx.real(total)


def tricomi_identity_sides(ctx: PrecisionContext):
    """Both sides of the F = 1 moment identity tied to the sine series.

    Left: sum over n of Gamma^2(n+1/2)/Gamma^2(n+1) * (1/(2(4n+1)) -
    1/(2(4n+3))), resummed as two 3F2(1) values under Levin acceleration.
    Right: the cataloged integral of k'K'(k) - kK(k).
    Returns (lhs, rhs) as BigReals.
    """
    from fractions import Fraction

    from .special import pFq

    half = Fraction(1, 2)
    lhs_a = pFq([half, half, Fraction(1, 4)], [1, Fraction(5, 4)], 1, ctx, accel=True)
    lhs_b = pFq([half, half, Fraction(3, 4)], [1, Fraction(7, 4)], 1, ctx, accel=True)
    pi = ctx.real(ctx.pi)
    lhs = (pi * lhs_a - pi * lhs_b / 3) / 2
    rhs = moment("tricomi_f1", ctx)
    return lhs, rhs
