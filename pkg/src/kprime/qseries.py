"""Exact q-expansions: eta quotients, bivariate theta sums, and checks on them.

Everything here is integer arithmetic.  A series is a block of coefficients
on the grid lead, lead+1, lead+2, ... where the lead exponent is a rational
with denominator dividing 24 (eta prefactors contribute m/24 each).  Products
and inverses stay exact; convolution is done by Kronecker substitution (pack
the coefficient block into one big integer, multiply, unpack), which keeps
order-2000 work comfortably fast in pure Python.

Theta expansions enumerate a quadratic lattice region exactly.  Every
coefficient is accumulated as a Gaussian integer over the whole orbit and
asserted real and integral before it is stored, so a wrong quadratic form or
sign tag fails loudly instead of producing a slightly wrong series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError

__all__ = [
    "QSeries",
    "EtaQuotientSpec",
    "ThetaSpec",
    "eta_quotient_expand",
    "theta_expand",
    "series_equal",
    "multiplicativity_check",
    "twist_negate",
    "weight9_ktheta_check",
    "eta_factor",
    "eta3_theta",
    "h_product_series",
    "THETA_G",
    "THETA_H",
    "THETA_W9",
    "THETA_SEVENTH",
]


# ---------------------------------------------------------------------------
# integer convolution via Kronecker substitution
# ---------------------------------------------------------------------------

def _pack(values: Sequence[int], nbytes: int) -> int:
    buf = b"".join(v.to_bytes(nbytes, "little") for v in values)
    return int.from_bytes(buf, "little")


def _unpack(big: int, count: int, nbytes: int) -> List[int]:
    big &= (1 << (8 * count * nbytes)) - 1
    buf = big.to_bytes(count * nbytes, "little")
    return [
        int.from_bytes(buf[i * nbytes : (i + 1) * nbytes], "little")
        for i in range(count)
    ]


def _convolve(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    """First n coefficients of the product of two integer sequences."""
    a = list(a[:n])
    b = list(b[:n])
    if not a or not b:
        return [0] * n
    if len(a) * len(b) <= 4096:
        out = [0] * n
        for i, av in enumerate(a):
            if av == 0:
                continue
            jmax = min(len(b), n - i)
            for j in range(jmax):
                out[i + j] += av * b[j]
        return out
    amax = max(max(a), -min(a), 1)
    bmax = max(max(b), -min(b), 1)
    bound = min(len(a), len(b)) * amax * bmax
    nbytes = (bound.bit_length() + 9) // 8
    ap = _pack([v if v > 0 else 0 for v in a], nbytes)
    an = _pack([-v if v < 0 else 0 for v in a], nbytes)
    bp = _pack([v if v > 0 else 0 for v in b], nbytes)
    bn = _pack([-v if v < 0 else 0 for v in b], nbytes)
    pos = _unpack(ap * bp + an * bn, n, nbytes)
    neg = _unpack(ap * bn + an * bp, n, nbytes)
    return [p - q for p, q in zip(pos, neg)]


# ---------------------------------------------------------------------------
# the series container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QSeries:
    """Truncated q-series: coeffs[i] multiplies q^(lead + i).

    The block is valid modulo q^(lead + order); order == len(coeffs).
    """

    lead: Fraction
    coeffs: Tuple[int, ...]
    order: int

    def __post_init__(self):
        if self.order != len(self.coeffs):
            raise ValueError("order must equal len(coeffs)")

    @staticmethod
    def make(lead, coeffs) -> "QSeries":
        cs = tuple(int(c) for c in coeffs)
        return QSeries(Fraction(lead), cs, len(cs))

    def coefficient(self, exponent) -> int:
        """Coefficient of q^exponent; zero off-grid, error past the block."""
        e = Fraction(exponent)
        off = e - self.lead
        if off.denominator != 1:
            return 0
        i = off.numerator
        if i < 0:
            return 0
        if i >= self.order:
            raise IndexError(f"exponent {e} beyond truncation {self.lead + self.order}")
        return self.coeffs[i]

    def valid_through(self) -> Fraction:
        """Largest exponent the block covers."""
        return self.lead + self.order - 1

    def __mul__(self, other):
        if isinstance(other, QSeries):
            n = min(self.order, other.order)
            return QSeries.make(
                self.lead + other.lead, _convolve(self.coeffs, other.coeffs, n)
            )
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "QSeries":
        f = Fraction(c)
        out = []
        for v in self.coeffs:
            w = f * v
            if w.denominator != 1:
                raise DomainError(f"scaling by {c} breaks integrality at {v}")
            out.append(w.numerator)
        return QSeries.make(self.lead, out)

    def shift(self, k) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.lead + Fraction(k), self.coeffs, self.order)

    def _aligned(self, other: "QSeries"):
        dl = other.lead - self.lead
        if dl.denominator != 1:
            raise DomainError(
                f"cannot align leads {self.lead} and {other.lead}: "
                "offset is not an integer"
            )
        lead = min(self.lead, other.lead)
        sa = int(self.lead - lead)
        sb = int(other.lead - lead)
        end = min(sa + self.order, sb + other.order)
        a = [0] * sa + list(self.coeffs)
        b = [0] * sb + list(other.coeffs)
        return lead, a[:end], b[:end]

    def __add__(self, other: "QSeries") -> "QSeries":
        lead, a, b = self._aligned(other)
        return QSeries.make(lead, [x + y for x, y in zip(a, b)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        lead, a, b = self._aligned(other)
        return QSeries.make(lead, [x - y for x, y in zip(a, b)])

    def __neg__(self) -> "QSeries":
        return QSeries.make(self.lead, [-c for c in self.coeffs])

    def invert(self) -> "QSeries":
        """Reciprocal series, exact; the constant coefficient must be +-1."""
        c0 = self.coeffs[0] if self.coeffs else 0
        if c0 not in (1, -1):
            raise DomainError(f"cannot invert exactly: leading coefficient {c0}")
        n = self.order
        # Newton doubling: x <- x(2 - a x), exact over the integers when
        # the constant term is a unit.
        x = [c0]
        length = 1
        a = list(self.coeffs)
        while length < n:
            length = min(2 * length, n)
            ax = _convolve(a[:length], x, length)
            ax[0] -= 2
            x = [-v for v in _convolve(x, ax, length)]
        return QSeries.make(-self.lead, x[:n])

    def pow(self, e: int) -> "QSeries":
        if e == 0:
            return QSeries.make(0, [1] + [0] * (self.order - 1))
        base = self if e > 0 else self.invert()
        k = abs(e)
        result = None
        acc = base
        while k:
            if k & 1:
                result = acc if result is None else result * acc
            k >>= 1
            if k:
                acc = acc * acc
        return result

    __pow__ = pow

    def rescale(self, m: int) -> "QSeries":
        """Substitute q -> q^m (m >= 1)."""
        if m == 1:
            return self
        out = [0] * self.order
        for i, c in enumerate(self.coeffs):
            j = i * m
            if j >= self.order:
                break
            out[j] = c
        return QSeries.make(self.lead * m, out)

    def value_at(self, ctx, q) -> "object":
        """Numeric value sum coeffs[i] q^(lead+i) at a real 0 < q < 1."""
        mp = ctx.mp
        qv = ctx.mpf(q)
        total = mp.mpf(0)
        qpow = qv ** ctx.mpf(self.lead)
        for c in self.coeffs:
            if c:
                total += c * qpow
            qpow *= qv
        return ctx.real(total)


def twist_negate(A: QSeries) -> QSeries:
    """The series of A(-q); requires integer exponents."""
    if A.lead.denominator != 1:
        raise DomainError("q -> -q needs an integer exponent grid")
    base = int(A.lead)
    out = [c if (base + i) % 2 == 0 else -c for i, c in enumerate(A.coeffs)]
    return QSeries.make(A.lead, out)


def series_equal(A: QSeries, B: QSeries, N: int):
    """Compare two series through N coefficients of their common window.

    Returns (True, None) or (False, first mismatched exponent).
    """
    start = min(A.lead, B.lead)
    stop = min(A.valid_through(), B.valid_through(), start + N - 1)
    diff = start - B.lead if (A.lead - B.lead).denominator != 1 else None
    if diff is not None:
        # incompatible grids: first nonzero coefficient of either side wins
        for S in sorted((A, B), key=lambda s: s.lead):
            for i, c in enumerate(S.coeffs):
                if c:
                    return False, S.lead + i
        return True, None
    e = start
    while e <= stop:
        ca = A.coefficient(e) if e >= A.lead else 0
        cb = B.coefficient(e) if e >= B.lead else 0
        if ca != cb:
            return False, e
        e += 1
    return True, None


def multiplicativity_check(A: QSeries, N: int) -> List[Tuple[int, int]]:
    """Coprime pairs (m, n), m < n, mn <= N with a(m)a(n) != a(mn).

    Coefficients are read on the integer grid; an empty list means the
    expansion looks multiplicative through N.
    """
    if A.lead.denominator != 1:
        raise DomainError("multiplicativity needs an integer exponent grid")
    if A.valid_through() < N:
        raise DomainError(f"series truncated below {N}")
    a = {n: A.coefficient(n) for n in range(1, N + 1)}
    bad = []
    for m in range(2, N):
        for n in range(m + 1, N // m + 1):
            if gcd(m, n) != 1:
                continue
            if a[m] * a[n] != a[m * n]:
                bad.append((m, n))
    return bad


# ---------------------------------------------------------------------------
# eta quotients
# ---------------------------------------------------------------------------

def eta_factor(m: int, N: int) -> QSeries:
    """eta(m tau) truncated to N coefficients: q^(m/24) prod (1 - q^(mn)).

    The product is the pentagonal-number series, so the block is sparse.
    """
    coeffs = [0] * N
    j = 0
    while True:
        placed = False
        for jj in (j, -j) if j else (0,):
            e = m * jj * (3 * jj - 1) // 2
            if 0 <= e < N:
                coeffs[e] += -1 if jj % 2 else 1
                placed = True
        if not placed and j > 0:
            break
        j += 1
    return QSeries.make(Fraction(m, 24), coeffs)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Product of eta(m tau)^e factors.

    factors: tuple of (scale m, integer exponent e), m >= 1.
    """

    factors: Tuple[Tuple[int, int], ...]

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)

    @property
    def lead(self) -> Fraction:
        return Fraction(sum(m * e for m, e in self.factors), 24)

    @staticmethod
    def parse(text: str) -> "EtaQuotientSpec":
        """Parse 'eta(1)^4*eta(2)^2*eta(4)^-2' style strings."""
        factors = []
        for chunk in text.replace(" ", "").split("*"):
            if not chunk:
                continue
            if not chunk.startswith("eta(") or ")" not in chunk:
                raise ValueError(f"bad eta factor {chunk!r}")
            inside, _, rest = chunk[4:].partition(")")
            m = int(inside)
            if m < 1:
                raise ValueError(f"eta scale must be positive, got {m}")
            if rest == "":
                e = 1
            elif rest.startswith("^"):
                e = int(rest[1:])
            else:
                raise ValueError(f"bad eta factor {chunk!r}")
            factors.append((m, e))
        if not factors:
            raise ValueError("empty eta quotient")
        return EtaQuotientSpec(tuple(factors))

    def __str__(self) -> str:
        return "*".join(
            f"eta({m})" if e == 1 else f"eta({m})^{e}" for m, e in self.factors
        )

    def expand(self, N: int) -> QSeries:
        return eta_quotient_expand(self, N)


def eta_quotient_expand(spec: EtaQuotientSpec, N: int) -> QSeries:
    """N exact coefficients of the eta quotient, starting at its lead."""
    if isinstance(spec, str):
        spec = EtaQuotientSpec.parse(spec)
    result: Optional[QSeries] = None
    for m, e in spec.factors:
        base = eta_factor(m, N)
        piece = base.pow(e)
        result = piece if result is None else result * piece
    return result


def eta3_theta(N: int) -> QSeries:
    """The classical odd-square series with lead 1/8.

    Coefficient n*chi(n) at q^(n^2/8) over odd n, chi the nontrivial
    character mod 4; integer grid offsets are the triangular numbers.
    """
    coeffs = [0] * N
    j = 0
    while True:
        off = j * (j + 1) // 2
        if off >= N:
            break
        n = 2 * j + 1
        coeffs[off] = n if j % 2 == 0 else -n
        j += 1
    return QSeries.make(Fraction(1, 8), coeffs)


def h_product_series(N: int) -> QSeries:
    """q * prod (1 - (-1)^n q^(4n))^14 / (1 - q^(8n))^4, exactly.

    Single-factor multiplies and divides are stride updates on the
    coefficient block, so no large convolutions are needed.
    """
    c = [0] * N
    c[0] = 1

    def mul_one_minus(j: int, times: int, sign: int):
        # multiply by (1 - sign*q^j)^times
        for _ in range(times):
            for i in range(N - 1, j - 1, -1):
                c[i] -= sign * c[i - j]

    def div_one_minus(j: int, times: int):
        # divide by (1 - q^j)^times
        for _ in range(times):
            for i in range(j, N):
                c[i] += c[i - j]

    n = 1
    while 4 * n < N:
        mul_one_minus(4 * n, 14, -1 if n % 2 else 1)
        n += 1
    n = 1
    while 8 * n < N:
        div_one_minus(8 * n, 4)
        n += 1
    return QSeries.make(1, c)


# ---------------------------------------------------------------------------
# bivariate theta expansions
# ---------------------------------------------------------------------------

Gaussian = Tuple[int, int]
GPoly = Dict[Tuple[int, int], Gaussian]


def gp_const(re: int, im: int = 0) -> GPoly:
    return {(0, 0): (re, im)}


GP_M: GPoly = {(1, 0): (1, 0)}
GP_N: GPoly = {(0, 1): (1, 0)}


def gp_add(a: GPoly, b: GPoly) -> GPoly:
    out = dict(a)
    for k, (br, bi) in b.items():
        ar, ai = out.get(k, (0, 0))
        v = (ar + br, ai + bi)
        if v == (0, 0):
            out.pop(k, None)
        else:
            out[k] = v
    return out


def gp_scale(a: GPoly, re: int, im: int = 0) -> GPoly:
    return {
        k: (ar * re - ai * im, ar * im + ai * re)
        for k, (ar, ai) in a.items()
        if (ar * re - ai * im, ar * im + ai * re) != (0, 0)
    }


def gp_mul(a: GPoly, b: GPoly) -> GPoly:
    out: GPoly = {}
    for (am, an), (ar, ai) in a.items():
        for (bm, bn), (br, bi) in b.items():
            k = (am + bm, an + bn)
            cr, ci = out.get(k, (0, 0))
            out[k] = (cr + ar * br - ai * bi, ci + ar * bi + ai * br)
    return {k: v for k, v in out.items() if v != (0, 0)}


def gp_pow(a: GPoly, e: int) -> GPoly:
    result = gp_const(1)
    for _ in range(e):
        result = gp_mul(result, a)
    return result


_SIGN_TAGS = {
    "+1": (0, 0, 0),
    "(-1)^m": (1, 0, 0),
    "(-1)^(m+n)": (1, 1, 0),
    "(-1)^(m+1)": (1, 0, 1),
    "(-1)^(m+n+1)": (1, 1, 1),
}


def _sign_value(tag: str, m: int, n: int) -> int:
    try:
        cm, cn, c1 = _SIGN_TAGS[tag]
    except KeyError:
        raise ValueError(f"unknown sign tag {tag!r}; known: {sorted(_SIGN_TAGS)}")
    return -1 if (cm * m + cn * n + c1) % 2 else 1


@dataclass(frozen=True)
class ThetaSpec:
    """Lattice sum  prefactor * sum sigma(m,n) P(m,n) q^Q(m,n)  over Z^2.

    Q is (qm2, qmn, qn2, qm, qn, qc): linear terms let substituted index
    sets (even/odd sublattices) stay plain sums over all of Z^2, and
    congruence constraints [(var, mod, res), ...] filter further if needed.
    P maps (deg_m, deg_n) to a Gaussian-integer coefficient.
    """

    Q: Tuple[int, int, int, int, int, int]
    P: GPoly = field(default_factory=lambda: gp_const(1))
    sign: str = "+1"
    constraints: Tuple[Tuple[str, int, int], ...] = ()
    prefactor: Fraction = Fraction(1)

    def q_value(self, m: int, n: int) -> int:
        a, b, c, d, e, f = self.Q
        return a * m * m + b * m * n + c * n * n + d * m + e * n + f

    def p_value(self, m: int, n: int) -> Gaussian:
        re = im = 0
        for (em, en), (cr, ci) in self.P.items():
            t = (m ** em) * (n ** en)
            re += cr * t
            im += ci * t
        return re, im

    def allows(self, m: int, n: int) -> bool:
        for var, mod, res in self.constraints:
            v = m if var == "m" else n
            if v % mod != res % mod:
                return False
        return True


def _theta_ranges(spec: ThetaSpec, X: int):
    a, b, c, d, e, _f = spec.Q
    disc = 4 * a * c - b * b
    if disc <= 0 or a <= 0:
        raise DomainError("quadratic part must be positive definite")
    tr = a + c
    lam_min = (tr - ((a - c) ** 2 + b * b) ** 0.5) / 2
    mstar = (b * e - 2 * c * d) / disc
    nstar = (b * d - 2 * a * e) / disc
    radius = (max(X, 0) / lam_min) ** 0.5 + 3
    return (
        int(mstar - radius) - 1,
        int(mstar + radius) + 1,
        int(nstar - radius) - 1,
        int(nstar + radius) + 1,
    )


def theta_expand(spec: ThetaSpec, N: int) -> QSeries:
    """Exact expansion of the theta sum through q^N.

    Every exponent's Gaussian accumulator must come out real, and the
    prefactor must divide it; both are asserted per coefficient.
    """
    acc_re: Dict[int, int] = {}
    acc_im: Dict[int, int] = {}
    m_lo, m_hi, n_lo, n_hi = _theta_ranges(spec, N)
    for m in range(m_lo, m_hi + 1):
        for n in range(n_lo, n_hi + 1):
            e = spec.q_value(m, n)
            if e < 0 or e > N:
                continue
            if not spec.allows(m, n):
                continue
            s = _sign_value(spec.sign, m, n)
            pr, pi = spec.p_value(m, n)
            acc_re[e] = acc_re.get(e, 0) + s * pr
            acc_im[e] = acc_im.get(e, 0) + s * pi
    for e, v in acc_im.items():
        if v != 0:
            raise AssertionError(f"theta coefficient at q^{e} is not real: {v}i")
    nonzero = sorted(e for e, v in acc_re.items() if v != 0)
    if not nonzero:
        return QSeries.make(0, [0] * (N + 1))
    lead = nonzero[0]
    coeffs = []
    for e in range(lead, N + 1):
        raw = Fraction(acc_re.get(e, 0)) * spec.prefactor
        if raw.denominator != 1:
            raise AssertionError(
                f"theta coefficient at q^{e} not integral: {raw}"
            )
        coeffs.append(raw.numerator)
    return QSeries.make(lead, coeffs)


# the recurring bivariate sums, named once
THETA_G = ThetaSpec(
    Q=(1, 0, 1, 0, 0, 0),
    P=gp_pow(gp_add(GP_N, gp_scale(GP_M, 0, -1)), 4),
    sign="+1",
    prefactor=Fraction(1, 4),
)

# index (2m)^2 + (2n+1)^2 with numerator (2n+1-2im)^4 and sign (-1)^m
THETA_H = ThetaSpec(
    Q=(4, 0, 4, 0, 4, 1),
    P=gp_pow(
        gp_add(gp_add(gp_scale(GP_N, 2), gp_const(1)), gp_scale(GP_M, 0, -2)), 4
    ),
    sign="(-1)^m",
    prefactor=Fraction(1, 2),
)

THETA_W9 = ThetaSpec(
    Q=(1, 0, 1, 0, 0, 0),
    P=gp_pow(gp_add(GP_M, gp_scale(GP_N, 0, -1)), 8),
    sign="+1",
    prefactor=Fraction(1, 4),
)

THETA_SEVENTH = ThetaSpec(
    Q=(1, 0, 2, 0, 0, 0),
    P=gp_add(gp_mul(GP_M, GP_M), gp_scale(gp_mul(GP_N, GP_N), -2)),
    sign="+1",
    prefactor=Fraction(1, 2),
)


def weight9_ktheta_check(N: int, ctx):
    """Evaluate the weight-9 theta series against its modular closed form.

    At q = e^(-pi) and e^(-2 pi) the series must match
    8 (4 k^2 k'^2 + k^4 k'^4) (K/pi)^9 with k, K read off theta nulls at
    the same nome.  Returns ((series, closed), (series, closed)).
    """
    from .special import _theta234_raw

    series = theta_expand(THETA_W9, N)
    mp = ctx.mp
    out = []
    for yy in (1, 2):
        q = mp.exp(-mp.pi * yy)
        sval = series.value_at(ctx, q)
        t2, t3, t4 = _theta234_raw(mp, q)
        k2 = (t2 / t3) ** 4
        kp2 = (t4 / t3) ** 4
        K = mp.pi / 2 * t3 * t3
        closed = 8 * (4 * k2 * kp2 + k2 * k2 * kp2 * kp2) * (K / mp.pi) ** 9
        out.append((sval, ctx.real(closed)))
    return tuple(out)
