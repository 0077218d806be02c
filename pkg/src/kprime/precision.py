"""Precision policy and arbitrary-precision value types.

Everything in this package computes against an explicit PrecisionContext:
``target_digits`` is what the caller wants to trust, ``guard_digits`` is the
extra slack the computation runs with.  There is deliberately no module-level
precision knob.  Each context owns a private mpmath context (mpmath allows
instantiating independent MPContext objects), so importing this package never
touches ``mpmath.mp`` and two computations at different precisions can run
side by side, including on different threads.

BigReal/BigComplex are thin immutable wrappers around mpf/mpc that remember
the working precision (in decimal digits) they were produced at.  Arithmetic
between BigReals propagates the minimum of the operand precisions, which keeps
``digits_agreement`` honest: you can never claim more agreement than the least
precise input could support.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath
from mpmath.ctx_mp import MPContext

__all__ = [
    "PrecisionContext",
    "BigReal",
    "BigComplex",
    "digits_agreement",
    "to_rational",
]

_ctx_cache: dict[int, MPContext] = {}
_ctx_lock = threading.Lock()

# Shared memo table for expensive transcendental constants, keyed by
# (name, working_digits).  Registry runs and PSLQ sweeps ask for the same
# gamma values thousands of times.
_const_cache: dict[tuple, object] = {}
_const_lock = threading.Lock()


def _mp_for(digits: int) -> MPContext:
    """Return a (cached) private mpmath context running at `digits` decimals."""
    with _ctx_lock:
        ctx = _ctx_cache.get(digits)
        if ctx is None:
            ctx = MPContext()
            ctx.dps = digits
            _ctx_cache[digits] = ctx
        return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Requested precision plus guard slack; working = target + guard."""

    target_digits: int
    guard_digits: int = 12

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be a positive integer")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be at least 10")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def mp(self) -> MPContext:
        """The private mpmath context at working precision."""
        return _mp_for(self.working_digits)

    def widen(self, extra: int) -> "PrecisionContext":
        """A context with `extra` more guard digits (doubled-guard retries)."""
        return PrecisionContext(self.target_digits, self.guard_digits + extra)

    def with_target(self, target: int) -> "PrecisionContext":
        return PrecisionContext(target, self.guard_digits)

    # -- raw value constructors -------------------------------------------

    def mpf(self, x) -> mpmath.mpf:
        if isinstance(x, BigReal):
            return self.mp.mpf(x.value)
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def mpc(self, re, im=0) -> mpmath.mpc:
        return self.mp.mpc(self.mpf(re), self.mpf(im))

    def real(self, x) -> "BigReal":
        """Wrap a finished value as a BigReal carrying this working precision."""
        return BigReal(self.mpf(x), self.working_digits)

    def complex(self, re, im=0) -> "BigComplex":
        return BigComplex(self.real(re), self.real(im))

    # -- memoized constants -----------------------------------------------

    def constant(self, name: str, builder) -> mpmath.mpf:
        """Fetch `name` from the shared per-precision memo, building on miss.

        `builder` receives the private mp context and returns the raw value.
        """
        key = (name, self.working_digits)
        with _const_lock:
            hit = _const_cache.get(key)
        if hit is not None:
            return hit
        val = builder(self.mp)
        with _const_lock:
            _const_cache[key] = val
        return val

    @property
    def pi(self) -> mpmath.mpf:
        return self.constant("pi", lambda mp: +mp.pi)

    @property
    def eps(self) -> mpmath.mpf:
        return self.constant("eps", lambda mp: mp.mpf(10) ** (-self.working_digits))

    def gamma(self, x) -> mpmath.mpf:
        """Memoized gamma for Fraction arguments, plain gamma otherwise."""
        if isinstance(x, Fraction):
            return self.constant(
                f"gamma({x})", lambda mp: mp.gamma(mp.mpf(x.numerator) / x.denominator)
            )
        return self.mp.gamma(self.mpf(x))

    def log_int(self, n: int) -> mpmath.mpf:
        return self.constant(f"log({n})", lambda mp: mp.log(mp.mpf(n)))


def _coerce(other, prec: int):
    if isinstance(other, BigReal):
        return other.value, min(prec, other.precision)
    if isinstance(other, (int, Fraction, float, mpmath.mpf)):
        mp = _mp_for(prec)
        if isinstance(other, Fraction):
            return mp.mpf(other.numerator) / other.denominator, prec
        return mp.mpf(other), prec
    return None, prec


@dataclass(frozen=True)
class BigReal:
    """An arbitrary-precision real plus the decimal precision it carries."""

    value: mpmath.mpf
    precision: int

    def __post_init__(self):
        if isinstance(self.value, BigReal):  # tolerate accidental re-wrapping
            object.__setattr__(self, "precision", min(self.precision, self.value.precision))
            object.__setattr__(self, "value", self.value.value)

    # Arithmetic keeps the weakest precision of the operands.  Operations are
    # evaluated in a context wide enough for both, so the per-op relative
    # error stays within 10**(-p+2) of the tracked precision p.

    def _bin(self, other, fn):
        ov, prec = _coerce(other, self.precision)
        if ov is None:
            return NotImplemented
        return BigReal(fn(self.value, ov), prec)

    def __add__(self, other):
        return self._bin(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._bin(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._bin(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._bin(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._bin(other, lambda a, b: b / a)

    def __pow__(self, other):
        return self._bin(other, lambda a, b: a ** b)

    def __neg__(self):
        return BigReal(-self.value, self.precision)

    def __abs__(self):
        return BigReal(abs(self.value), self.precision)

    def __float__(self):
        return float(self.value)

    def __lt__(self, other):
        ov, _ = _coerce(other, self.precision)
        return self.value < ov

    def __le__(self, other):
        ov, _ = _coerce(other, self.precision)
        return self.value <= ov

    def __gt__(self, other):
        ov, _ = _coerce(other, self.precision)
        return self.value > ov

    def __ge__(self, other):
        ov, _ = _coerce(other, self.precision)
        return self.value >= ov

    def __str__(self):
        return mpmath.nstr(self.value, self.precision, strip_zeros=False)

    def digits(self, n: int) -> str:
        """Decimal string with n significant digits."""
        return mpmath.nstr(self.value, n, strip_zeros=False)

    def is_finite(self) -> bool:
        return mpmath.isfinite(self.value)


@dataclass(frozen=True)
class BigComplex:
    """Complex value as a pair of BigReals."""

    re: BigReal
    im: BigReal

    @property
    def precision(self) -> int:
        return min(self.re.precision, self.im.precision)

    def modulus(self) -> BigReal:
        mp = _mp_for(self.precision)
        return BigReal(mp.hypot(self.re.value, self.im.value), self.precision)

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.re, -self.im)

    def as_mpc(self, ctx: PrecisionContext) -> mpmath.mpc:
        return ctx.mp.mpc(self.re.value, self.im.value)


RealLike = Union[BigReal, mpmath.mpf, int, float, Fraction]


def digits_agreement(x: BigReal, y: BigReal) -> int:
    """Largest d >= 0 with |x - y| <= 10^-d * max(|x|, |y|, 1).

    Identical representations count as full agreement, capped at the smaller
    of the two tracked precisions; so does any difference small enough that
    the cap binds first.
    """
    if not isinstance(x, BigReal):
        x = BigReal(mpmath.mpf(x), 15)
    if not isinstance(y, BigReal):
        y = BigReal(mpmath.mpf(y), 15)
    cap = min(x.precision, y.precision)
    mp = _mp_for(max(cap, 15) + 10)
    xv, yv = mp.mpf(x.value), mp.mpf(y.value)
    if xv == yv:
        return cap
    diff = abs(xv - yv)
    scale = max(abs(xv), abs(yv), mp.mpf(1))
    # floor(log10(scale/diff)), then nudge to satisfy the inequality exactly.
    d = int(mp.floor(mp.log10(scale / diff)))
    while diff <= scale * mp.mpf(10) ** (-(d + 1)):
        d += 1
    while d >= 0 and diff > scale * mp.mpf(10) ** (-d):
        d -= 1
    return max(min(d, cap), 0)


def _as_fraction(v: mpmath.mpf) -> Fraction:
    """Exact rational value of an mpf (mpf values are dyadic rationals)."""
    sign, man, exp, _ = v._mpf_
    if man == 0:
        return Fraction(0)
    num = -man if sign else man
    if exp >= 0:
        return Fraction(num * (1 << exp))
    return Fraction(num, 1 << (-exp))


def to_rational(x: BigReal, max_denominator: int) -> Optional[Fraction]:
    """Best rational p/q, q <= max_denominator, if it matches x to its precision.

    Uses continued-fraction convergents (Fraction.limit_denominator) on the
    exact dyadic value, then insists the match be within 10^(-prec+8); returns
    None when no convergent is that close.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    if not isinstance(x, BigReal):
        raise TypeError("to_rational expects a BigReal")
    if not mpmath.isfinite(x.value):
        raise ValueError("to_rational needs a finite value")
    exact = _as_fraction(x.value)
    cand = exact.limit_denominator(max_denominator)
    tol = Fraction(1, 10 ** max(x.precision - 8, 1))
    if abs(exact - cand) <= tol:
        return cand
    return None
