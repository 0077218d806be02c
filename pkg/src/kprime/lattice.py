"""Two-dimensional lattice sums: exact partial sums and accelerated limits.

A sum is sigma(m,n) P(m,n) / Q(m,n)^p over integer pairs, with the optional
origin excluded.  Three evaluation routes live here:

  rect_sum        exact enumeration over a box, (m,n) and (-m,-n) added as
                  a pair so partial sums respect the symmetric limit;
  accelerated_sum closed forms for each row over n (cotangent/cosecant
                  polynomials after partial fractions), then Levin-u on the
                  alternating outer sum over m -- or, for plain signs, a
                  Riesz-smoothed float64 sweep over expanding ellipses;
  ellipse_sum     the smoothed partial sum itself, exposed because the
                  smoothing weights make certain rearrangements exact at
                  every cutoff, which is a strong enumeration test.

Row closed forms: sum over n of (n+w)^(-j) is pi^j R_j(cot pi w) and the
alternating version is pi^j csc(pi w) S_j(cot pi w), with R/S integer-
coefficient polynomials generated from the derivative recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AccuracyShortfall, DivergenceError, DomainError, UnknownIdError
from .precision import BigReal, PrecisionContext, digits_agreement
from .sequences import accelerate_partial_sums

__all__ = [
    "LatticeSumSpec",
    "lattice_spec",
    "lattice_spec_names",
    "rect_sum",
    "accelerated_sum",
    "ellipse_sum",
    "g2_combination_check",
    "log2_family_check",
]


_SIGN_TAGS = {
    "+1": (0, 0, 0),
    "(-1)^m": (1, 0, 0),
    "(-1)^(m+n)": (1, 1, 0),
    "(-1)^(m+1)": (1, 0, 1),
    "(-1)^(m+n+1)": (1, 1, 1),
}


@dataclass(frozen=True)
class LatticeSumSpec:
    """sigma(m,n) P(m,n) / Q(m,n)^power summed over Z^2.

    P maps (deg_m, deg_n) to an integer coefficient; Q is the 6-tuple
    (m^2, mn, n^2, m, n, 1) of an integer quadratic; sign is one of
    +1, (-1)^m, (-1)^(m+n), (-1)^(m+1), (-1)^(m+n+1).
    """

    P: Tuple[Tuple[Tuple[int, int], int], ...]
    sign: str
    Q: Tuple[int, int, int, int, int, int]
    power: int
    exclude_origin: bool = True

    def __post_init__(self):
        if self.sign not in _SIGN_TAGS:
            raise ValueError(f"unknown sign tag {self.sign!r}")
        if self.power < 1:
            raise ValueError("power must be >= 1")

    def p_value(self, m: int, n: int) -> int:
        return sum(c * m ** em * n ** en for (em, en), c in self.P)

    def q_value(self, m: int, n: int) -> int:
        a, b, c, d, e, f = self.Q
        return a * m * m + b * m * n + c * n * n + d * m + e * n + f

    def sign_value(self, m: int, n: int) -> int:
        cm, cn, c1 = _SIGN_TAGS[self.sign]
        return -1 if (cm * m + cn * n + c1) % 2 else 1

    @property
    def alternating_rows(self) -> bool:
        """True when the outer sum over m alternates."""
        return _SIGN_TAGS[self.sign][0] == 1


def _p(*terms) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    return tuple(terms)


_SPECS: Dict[str, LatticeSumSpec] = {
    # (2n+1)^4 - 6(2n+1)^2(2m)^2 + (2m)^4 over ((2m)^2+(2n+1)^2)^power
    "quartic-alt-p4": LatticeSumSpec(
        P=_p(((0, 4), 16), ((0, 3), 32), ((0, 2), 24), ((0, 1), 8), ((0, 0), 1),
             ((2, 2), -96), ((2, 1), -96), ((2, 0), -24), ((4, 0), 16)),
        sign="(-1)^m",
        Q=(4, 0, 4, 0, 4, 1),
        power=4,
        exclude_origin=False,
    ),
    "quartic-alt-p3": LatticeSumSpec(
        P=_p(((0, 4), 16), ((0, 3), 32), ((0, 2), 24), ((0, 1), 8), ((0, 0), 1),
             ((2, 2), -96), ((2, 1), -96), ((2, 0), -24), ((4, 0), 16)),
        sign="(-1)^m",
        Q=(4, 0, 4, 0, 4, 1),
        power=3,
        exclude_origin=False,
    ),
    # n^4 - 6 n^2 m^2 + m^4 over (n^2+m^2)^4, alternating in m
    "quartic-plain-p4": LatticeSumSpec(
        P=_p(((0, 4), 1), ((2, 2), -6), ((4, 0), 1)),
        sign="(-1)^m",
        Q=(1, 0, 1, 0, 0, 0),
        power=4,
    ),
    "four-square-dipole": LatticeSumSpec(
        P=_p(((2, 0), 1), ((0, 2), -4)),
        sign="(-1)^(m+1)",
        Q=(1, 0, 4, 0, 0, 0),
        power=2,
    ),
    "four-square-n2": LatticeSumSpec(
        P=_p(((0, 2), 1)),
        sign="(-1)^m",
        Q=(1, 0, 4, 0, 0, 0),
        power=2,
    ),
    "four-square-m2": LatticeSumSpec(
        P=_p(((2, 0), 1)),
        sign="(-1)^(m+1)",
        Q=(1, 0, 4, 0, 0, 0),
        power=2,
    ),
    "oct-dipole-alt": LatticeSumSpec(
        P=_p(((2, 0), 1), ((0, 2), -2)),
        sign="(-1)^(m+1)",
        Q=(1, 0, 2, 0, 0, 0),
        power=2,
    ),
    "oct-dipole-plain": LatticeSumSpec(
        P=_p(((2, 0), 1), ((0, 2), -2)),
        sign="+1",
        Q=(1, 0, 2, 0, 0, 0),
        power=2,
    ),
    # 18 (3m+1)(3n+1) over ((3m+1)^2 + 2(3n+1)^2)^2, no excluded point
    "oct-dipole-twisted": LatticeSumSpec(
        P=_p(((1, 1), 162), ((1, 0), 54), ((0, 1), 54), ((0, 0), 18)),
        sign="(-1)^m",
        Q=(9, 0, 18, 6, 12, 3),
        power=2,
        exclude_origin=False,
    ),
    "three-dipole": LatticeSumSpec(
        P=_p(((2, 0), 1), ((0, 2), -3)),
        sign="(-1)^(m+n+1)",
        Q=(1, 0, 3, 0, 0, 0),
        power=2,
    ),
    "seven-dipole": LatticeSumSpec(
        P=_p(((0, 2), 2), ((2, 0), -1)),
        sign="(-1)^m",
        Q=(1, 1, 2, 0, 0, 0),
        power=2,
    ),
    "checker-m2n2": LatticeSumSpec(
        P=_p(((2, 2), 1)),
        sign="(-1)^(m+n)",
        Q=(1, 0, 1, 0, 0, 0),
        power=3,
    ),
    "checker-m4": LatticeSumSpec(
        P=_p(((4, 0), 1)),
        sign="(-1)^(m+n)",
        Q=(1, 0, 1, 0, 0, 0),
        power=3,
    ),
    "col-m2n2": LatticeSumSpec(
        P=_p(((2, 2), 1)),
        sign="(-1)^m",
        Q=(1, 0, 1, 0, 0, 0),
        power=3,
    ),
}


def lattice_spec(name: str) -> LatticeSumSpec:
    try:
        return _SPECS[name]
    except KeyError:
        raise UnknownIdError(
            f"no lattice spec {name!r}; known: {', '.join(lattice_spec_names())}"
        )


def lattice_spec_names():
    return sorted(_SPECS)


# ---------------------------------------------------------------------------
# exact box sums
# ---------------------------------------------------------------------------

def rect_sum(spec: LatticeSumSpec, M: int, ctx: PrecisionContext) -> BigReal:
    """Partial sum over |m| <= M, |n| <= M with (m,n),(-m,-n) paired."""
    mp = ctx.mp
    total = mp.mpf(0)

    def term(m, n):
        q = spec.q_value(m, n)
        if q == 0:
            if spec.exclude_origin and m == 0 and n == 0:
                return mp.mpf(0)
            raise DivergenceError(f"Q vanishes at interior point ({m}, {n})")
        if spec.exclude_origin and m == 0 and n == 0:
            return mp.mpf(0)
        p = spec.p_value(m, n)
        if p == 0:
            return mp.mpf(0)
        return mp.mpf(spec.sign_value(m, n) * p) / mp.mpf(q) ** spec.power

    if not spec.exclude_origin:
        total += term(0, 0)
    for n in range(1, M + 1):
        total += term(0, n) + term(0, -n)
    for m in range(1, M + 1):
        for n in range(-M, M + 1):
            total += term(m, n) + term(-m, -n)
    return ctx.real(total)


# ---------------------------------------------------------------------------
# closed row sums
# ---------------------------------------------------------------------------

def _build_row_tables(kmax: int):
    """R_k and S_k as Fraction coefficient lists in c = cot(pi w)."""
    def d_dc(poly):
        return [Fraction(i + 1) * poly[i + 1] for i in range(len(poly) - 1)]

    def times_1pc2(poly):
        out = [Fraction(0)] * (len(poly) + 2)
        for i, v in enumerate(poly):
            out[i] += v
            out[i + 2] += v
        return out

    def add(a, b):
        out = [Fraction(0)] * max(len(a), len(b))
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] += v
        return out

    def times_c(poly):
        return [Fraction(0)] + list(poly)

    R = {1: [Fraction(0), Fraction(1)]}
    S = {1: [Fraction(1)]}
    for j in range(1, kmax):
        R[j + 1] = [v / j for v in times_1pc2(d_dc(R[j]))]
        S[j + 1] = [v / j for v in add(times_c(S[j]), times_1pc2(d_dc(S[j])))]
    return R, S


_ROW_R, _ROW_S = _build_row_tables(8)

# zeta(2k) = pi^(2k) * _ZETA_FRAC[2k]
_ZETA_FRAC = {
    2: Fraction(1, 6),
    4: Fraction(1, 90),
    6: Fraction(1, 945),
    8: Fraction(1, 9450),
}


def _poly_eval(coeffs: Sequence[Fraction], x, mp):
    total = mp.mpf(0) if not hasattr(x, "imag") or x.imag == 0 else mp.mpc(0)
    for c in reversed(coeffs):
        total = total * x + mp.mpf(c.numerator) / c.denominator
    return total


def _taylor_shift(coeffs: List, shift):
    """Coefficients of N(shift + t) given those of N(n); exact when inputs are."""
    out = list(coeffs)
    n = len(out)
    # synthetic Horner shift, one variable
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += shift * out[j + 1]
    return out


def _row_poly_in_n(spec: LatticeSumSpec, m: int) -> List[int]:
    deg = max((en for (_em, en), _c in spec.P), default=0)
    out = [0] * (deg + 1)
    for (em, en), c in spec.P:
        out[en] += c * m ** em
    return out


def _lattice_row(spec: LatticeSumSpec, m: int, ctx: PrecisionContext):
    """sum over n of [(-1)^n]^alt P(m,n)/Q(m,n)^p for this fixed m."""
    mp = ctx.mp
    p = spec.power
    a, b, c_, d, e, f = spec.Q
    C = c_
    if C <= 0:
        raise DomainError("row closed forms need a positive n^2 coefficient")
    beta = b * m + e
    gamma = a * m * m + d * m + f
    alt = _SIGN_TAGS[spec.sign][1] == 1
    N = _row_poly_in_n(spec, m)
    if len(N) - 1 >= 2 * p:
        raise DomainError("numerator degree too high for convergence in n")
    disc = beta * beta - 4 * C * gamma

    if disc == 0:
        r = Fraction(-beta, 2 * C)
        if r.denominator == 1:
            # double root on the integer grid; only tolerable when the
            # offending point is the excluded origin
            r_int = int(r)
            if not (spec.exclude_origin and m == 0 and spec.q_value(0, r_int) == 0):
                raise DivergenceError(f"row m={m} has a pole at n={r_int}")
            shifted = _taylor_shift([Fraction(v) for v in N], Fraction(r_int))
            total = mp.mpf(0)
            sign_r = -1 if (r_int % 2 and alt) else 1
            for j, coeff in enumerate(shifted):
                k = 2 * p - j
                if k <= 0 or k % 2 == 1 or coeff == 0:
                    continue
                zf = _ZETA_FRAC[k]
                base = 2 * zf if not alt else -2 * (1 - Fraction(2) ** (1 - k)) * zf
                val = Fraction(coeff) * base
                total += (
                    mp.mpf(val.numerator) / val.denominator * mp.pi ** k
                )
            return sign_r * total / mp.mpf(C) ** p
        # real, non-integer double root: cot/csc formulas with real argument
        shifted = _taylor_shift([Fraction(v) for v in N], r)
        w = -r
        wv = mp.mpf(w.numerator) / w.denominator
        cval = mp.cot(mp.pi * wv)
        csc = 1 / mp.sin(mp.pi * wv)
        total = mp.mpf(0)
        for j, coeff in enumerate(shifted):
            k = 2 * p - j
            if k <= 0 or coeff == 0:
                continue
            tab = _ROW_S[k] if alt else _ROW_R[k]
            piece = _poly_eval(tab, cval, mp) * mp.pi ** k
            if alt:
                piece *= csc
            total += mp.mpf(coeff.numerator) / coeff.denominator * piece
        return total / mp.mpf(C) ** p

    if disc > 0:
        raise DomainError(f"row m={m} is not positive definite (disc {disc})")

    # conjugate complex roots
    root_im = mp.sqrt(mp.mpf(-disc)) / (2 * C)
    root_re = mp.mpf(-beta) / (2 * C)
    z = mp.mpc(root_re, root_im)
    dgap = mp.mpc(0, 2 * root_im)  # z - conj(z)
    shifted = _taylor_shift([mp.mpc(v) for v in N], z)
    # alpha_{p-j} = [t^j] N(z+t) (dgap+t)^(-p) / C^p
    inv_geom = [mp.mpc(1)]
    for j in range(1, p):
        inv_geom.append(
            inv_geom[-1] * (-1) * (p + j - 1) / j / dgap
        )
    dpow = dgap ** (-p)
    alphas = {}
    for j in range(p):
        acc = mp.mpc(0)
        for l in range(j + 1):
            if l < len(shifted):
                acc += shifted[l] * inv_geom[j - l]
        alphas[p - j] = acc * dpow
    w = -z
    cval = mp.cot(mp.pi * w)
    csc = 1 / mp.sin(mp.pi * w) if alt else None
    total = mp.mpc(0)
    Cp = mp.mpf(C) ** p
    for k, alpha in alphas.items():
        if alpha == 0:
            continue
        tab = _ROW_S[k] if alt else _ROW_R[k]
        piece = _poly_eval(tab, cval, mp) * mp.pi ** k
        if alt:
            piece *= csc
        total += alpha * piece
    return 2 * total.real / Cp


def _levin_lattice(spec: LatticeSumSpec, ctx: PrecisionContext, target: int):
    """Closed rows plus Levin-u over the alternating outer index."""
    wctx = ctx.with_target(target).widen(max(12, ctx.guard_digits))
    mp = wctx.mp
    cm, _cn, c1 = _SIGN_TAGS[spec.sign]
    overall = -1 if c1 else 1

    def outer_mult(m):
        return -1 if (cm * m) % 2 else 1

    def unit(k):
        if k == 0:
            return outer_mult(0) * _lattice_row(spec, 0, wctx)
        return outer_mult(k) * _lattice_row(spec, k, wctx) + outer_mult(
            -k
        ) * _lattice_row(spec, -k, wctx)

    partial = []
    running = mp.mpf(0)
    best = None
    achieved = 0
    K = 0
    for block in (48, 40, 64, 96, 120):
        for _ in range(block):
            running += unit(K)
            partial.append(running)
            K += 1
        value, got = accelerate_partial_sums(partial, mp, target + 2)
        if best is None or got > achieved:
            best, achieved = value, got
        if achieved >= target + 2:
            break
    return overall * best, min(achieved, wctx.working_digits - 2)


# ---------------------------------------------------------------------------
# smoothed ellipse sums (float64)
# ---------------------------------------------------------------------------

def ellipse_sum(
    spec: LatticeSumSpec,
    M: float,
    order: int = 4,
    block: int = 512,
) -> float:
    """Riesz-smoothed partial sum over Q <= M: terms weighted (1 - Q/M)^order.

    float64 throughout with a fixed enumeration order, so repeated calls
    are bit-identical.  The smoothing makes expanding-ellipse partial sums
    of conditionally convergent specs settle at the symmetric limit.
    """
    a, b, c, d, e, f = spec.Q
    lam_min = ((a + c) - math.hypot(a - c, b)) / 2
    if lam_min <= 0:
        raise DomainError("quadratic form must be positive definite")
    radius = math.sqrt(M / lam_min) + 3
    cm, cn, c1 = _SIGN_TAGS[spec.sign]
    m_lo, m_hi = int(-radius) - 1, int(radius) + 1
    block_totals = []
    Mf = float(M)
    for m_start in range(m_lo, m_hi + 1, block):
        ms = np.arange(m_start, min(m_start + block, m_hi + 1), dtype=np.float64)
        if ms.size == 0:
            continue
        ns = np.arange(int(-radius) - 1, int(radius) + 2, dtype=np.float64)
        mm, nn = np.meshgrid(ms, ns, indexing="ij")
        Q = a * mm * mm + b * mm * nn + c * nn * nn + d * mm + e * nn + f
        mask = (Q <= Mf) & (Q > 0)
        if spec.exclude_origin:
            mask &= ~((mm == 0) & (nn == 0))
        if not mask.any():
            continue
        P = np.zeros_like(Q)
        for (em, en), coeff in spec.P:
            P += coeff * mm ** em * nn ** en
        sgn = np.where((cm * mm + cn * nn + c1).astype(np.int64) & 1, -1.0, 1.0)
        w = (1.0 - Q / Mf) ** order
        Qsafe = np.where(mask, Q, 1.0)
        vals = np.where(mask, sgn * P * w / Qsafe ** spec.power, 0.0)
        block_totals.append(float(vals.sum()))
    return math.fsum(block_totals)


def _ellipse_count(spec: LatticeSumSpec, M: float) -> float:
    a, b, c = spec.Q[0], spec.Q[1], spec.Q[2]
    return 2 * math.pi * M / math.sqrt(4 * a * c - b * b)


def _plain_accelerated(spec: LatticeSumSpec, ctx: PrecisionContext, target: int):
    """Riesz-smoothed ellipse sweeps with the cutoff bias extrapolated away.

    A sweep with weight (1 - Q/M)^J sits at limit - J*z1/M + O(M^-2), where
    z1 is a fixed continuation value of the spec (Beta poles of the weight's
    Mellin transform; the smoothing order only scales the coefficient).  Two
    sweeps at M and M/2 cancel the 1/M term without knowing z1, and the
    matching pair at half size measures what is left, which in practice is
    the float64 enumeration noise.
    """
    a, b, c = spec.Q[0], spec.Q[1], spec.Q[2]
    # all three sweeps together stay around seven million lattice points
    M = int(4 * 10 ** 6 * math.sqrt(4 * a * c - b * b) / (2 * math.pi))
    mp = ctx.mp
    sweeps = {f: mp.mpf(ellipse_sum(spec, M / f)) for f in (1, 2, 4)}
    extrapolated = 2 * sweeps[1] - sweeps[2]
    check = 2 * sweeps[2] - sweeps[4]
    achieved = min(
        digits_agreement(ctx.real(extrapolated), ctx.real(check)), 14
    )
    return extrapolated, achieved


def accelerated_sum(
    spec: LatticeSumSpec,
    ctx: PrecisionContext,
    target_digits: Optional[int] = None,
) -> BigReal:
    """Limit of the lattice sum to target_digits, or AccuracyShortfall.

    Specs alternating in m go through closed rows and Levin acceleration
    (25+ digits in a few hundred rows); plain signs fall back to smoothed
    float64 ellipses, which top out near 13 digits.
    """
    target = target_digits if target_digits is not None else ctx.target_digits
    if spec.alternating_rows:
        value, achieved = _levin_lattice(spec, ctx, target)
    else:
        value, achieved = _plain_accelerated(spec, ctx, target)
    result = BigReal(ctx.mp.mpf(value), min(achieved, ctx.working_digits))
    if achieved < target:
        raise AccuracyShortfall(
            f"lattice sum reached {achieved} of {target} digits",
            value=result,
            achieved=achieved,
        )
    return result


# ---------------------------------------------------------------------------
# named cross-checks
# ---------------------------------------------------------------------------

def g2_combination_check(ctx: PrecisionContext):
    """Quartic-invariant combination against the quartic lattice sum.

    Returns (combination, lattice) where the first is
    (g2(i) - 18 g2(2i) + 32 g2(4i))/960 and the second is the accelerated
    '(2n+1)/(2m)' quartic sum; they agree as BigReals.
    """
    from .special import g2

    left = (
        g2(1, ctx).value - 18 * g2(2, ctx).value + 32 * g2(4, ctx).value
    ) / 960
    right = accelerated_sum(lattice_spec("quartic-alt-p4"), ctx)
    return ctx.real(left), right


def log2_family_check(ctx: PrecisionContext):
    """The three checkerboard/column sums with log-2 closed forms.

    Returns three (lattice, closed-form) pairs:
      (-1)^(m+n) m^2 n^2 / (m^2+n^2)^3;  (-1)^(m+n) m^4 / (m^2+n^2)^3;
      (-1)^m m^2 n^2 / (m^2+n^2)^3.
    """
    mp = ctx.mp
    g4 = mp.gamma(mp.mpf(1) / 4) ** 8
    log2 = mp.log(2)
    pi = mp.pi
    closed = [
        g4 / (2 ** 9 * 3 * pi ** 3) - pi * log2 / 8,
        -g4 / (2 ** 9 * 3 * pi ** 3) - 3 * pi * log2 / 8,
        -g4 / (2 ** 10 * 3 * pi ** 3) - pi * log2 / 16,
    ]
    names = ["checker-m2n2", "checker-m4", "col-m2n2"]
    out = []
    for name, cf in zip(names, closed):
        lhs = accelerated_sum(lattice_spec(name), ctx)
        out.append((lhs, ctx.real(cf)))
    return tuple(out)
