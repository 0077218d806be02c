"""Integer-relation detection and Gamma-product closed forms.

pslq is a from-scratch PSLQ (Ferguson-Bailey, gamma = sqrt(4/3)) over a
caller-supplied precision context.  On top of it, discover_gamma_form
searches log-linear relations between a computed value and a small basis of
logarithms (primes, pi, Gamma at rational arguments) and converts a hit into
a ClosedForm: an exact rational times a product of those constants raised to
exact rational exponents.  Discovered forms are only reported after
re-evaluation at higher precision; a mismatch there means a PSLQ artifact
and returns None instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from .errors import ConvergenceFailure, DomainError, UnknownIdError
from .precision import BigReal, PrecisionContext, digits_agreement

__all__ = [
    "ClosedForm",
    "ConstantBasis",
    "Relation",
    "basis_by_name",
    "basis_names",
    "closedform_eval",
    "constant_value",
    "discover_gamma_form",
    "discovery_report",
    "pslq",
]


# ---------------------------------------------------------------------------
# the constant universe
# ---------------------------------------------------------------------------

_GAMMA_NAME = re.compile(r"^gamma\((\d+)/(\d+)\)$")


def constant_value(name: str, ctx: PrecisionContext):
    """Numeric value of a named basis constant at working precision."""
    if name == "pi":
        return ctx.pi
    m = _GAMMA_NAME.match(name)
    if m:
        return ctx.gamma(Fraction(int(m.group(1)), int(m.group(2))))
    if name.isdigit():
        return ctx.mp.mpf(int(name))
    raise UnknownIdError(f"unknown constant {name!r}")


def _log_constant(name: str, ctx: PrecisionContext):
    if name.isdigit():
        return ctx.log_int(int(name))
    return ctx.constant(
        f"log[{name}]", lambda mp: mp.log(constant_value(name, ctx))
    )


@dataclass(frozen=True)
class ConstantBasis:
    """A fixed-order list of constants whose logs feed the relation search."""

    name: str
    constants: Tuple[str, ...]

    def log_values(self, ctx: PrecisionContext):
        return [_log_constant(c, ctx) for c in self.constants]

    def __len__(self):
        return len(self.constants)


_FULL_CONSTANTS = (
    "2", "3", "5", "7",
    "pi",
    "gamma(1/4)", "gamma(1/3)",
    "gamma(1/8)", "gamma(3/8)",
    "gamma(1/7)", "gamma(2/7)", "gamma(4/7)",
    "gamma(1/15)", "gamma(2/15)", "gamma(4/15)", "gamma(8/15)",
)

# Curated sub-bases.  PSLQ reliability drops with basis size, so discovery
# runs keep at most eight constants and pick the set matching the weight
# class of the target value.
_BASES: Dict[str, ConstantBasis] = {
    b.name: b
    for b in (
        ConstantBasis("full", _FULL_CONSTANTS),
        ConstantBasis("quarter", ("2", "3", "pi", "gamma(1/4)")),
        ConstantBasis("quarter5", ("2", "3", "5", "pi", "gamma(1/4)")),
        ConstantBasis("quarter13", ("2", "3", "5", "7", "13", "pi", "gamma(1/4)")),
        ConstantBasis("third", ("2", "3", "pi", "gamma(1/3)")),
        ConstantBasis("eighth", ("2", "3", "pi", "gamma(1/8)", "gamma(3/8)")),
        ConstantBasis(
            "seventh", ("2", "7", "pi", "gamma(1/7)", "gamma(2/7)", "gamma(4/7)")
        ),
        ConstantBasis(
            "level15",
            ("2", "3", "5", "pi",
             "gamma(1/15)", "gamma(2/15)", "gamma(4/15)", "gamma(8/15)"),
        ),
    )
}


def basis_by_name(name: str) -> ConstantBasis:
    try:
        return _BASES[name]
    except KeyError:
        raise UnknownIdError(
            f"no constant basis {name!r}; known: {', '.join(basis_names())}"
        )


def basis_names():
    return sorted(_BASES)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    """rational * prod(constant^exponent) with exact rational exponents.

    Surds ride along as half-integer exponents on prime constants, e.g.
    2^(-11/2) for 1/(32*sqrt 2), so there is exactly one encoding and
    dataclass equality is form equality.  The printer folds integer prime
    powers back into the fraction and shows the leftover half as sqrt().
    """

    rational: Fraction = Fraction(1)
    exponents: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def from_parts(cls, rational, exponents: Dict[str, object]) -> "ClosedForm":
        items = []
        for name, e in exponents.items():
            ef = e if isinstance(e, Fraction) else Fraction(e)
            if ef != 0:
                items.append((name, ef))
        return cls(Fraction(rational), tuple(sorted(items)))

    def text(self) -> str:
        """Readable single-line form, sqrt factors and plain integers pulled out."""
        num_f = self.rational.numerator
        den_f = self.rational.denominator
        num, den = [], []
        for name, e in self.exponents:
            if name.isdigit():
                # split |e| into whole + proper fraction on the side e points
                # to, so 2^(-11/2) renders as 32*sqrt(2) under the bar
                side = num if e > 0 else den
                p = abs(e)
                whole = p.numerator // p.denominator
                frac = p - whole
                if whole:
                    if e > 0:
                        num_f *= int(name) ** whole
                    else:
                        den_f *= int(name) ** whole
                if frac == 0:
                    continue
                if frac == Fraction(1, 2):
                    side.append(f"sqrt({name})")
                else:
                    side.append(f"{name}^({frac.numerator}/{frac.denominator})")
                continue
            side = num if e > 0 else den
            p = abs(e)
            if p == 1:
                side.append(name)
            elif p.denominator == 1:
                side.append(f"{name}^{p.numerator}")
            elif p.denominator == 2:
                k = p - Fraction(1, 2)
                side.append(f"sqrt({name})")
                if k == 1:
                    side.append(name)
                elif k > 0:
                    side.append(f"{name}^{k.numerator}")
            else:
                side.append(f"{name}^({p.numerator}/{p.denominator})")
        if num_f != 1 or not num:
            num.insert(0, str(num_f))
        if den_f != 1:
            den.insert(0, str(den_f))
        top = "*".join(num)
        if not den:
            return top
        bottom = "*".join(den)
        if len(den) > 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def __str__(self):
        return self.text()


def closedform_eval(cf: ClosedForm, ctx: PrecisionContext) -> BigReal:
    """Evaluate a ClosedForm at the context's working precision."""
    mp = ctx.mp
    acc = mp.mpf(cf.rational.numerator) / cf.rational.denominator
    for name, e in cf.exponents:
        base = constant_value(name, ctx)
        if e.denominator == 1:
            acc *= base ** e.numerator
        else:
            acc *= base ** (mp.mpf(e.numerator) / e.denominator)
    return ctx.real(acc)


# ---------------------------------------------------------------------------
# PSLQ
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """Integer vector c with sum(c_i * x_i) numerically zero."""

    coefficients: Tuple[int, ...]
    norm: int
    residual: BigReal


def pslq(
    values: Sequence,
    ctx: PrecisionContext,
    max_coeff_digits: int = 3,
) -> Optional[Relation]:
    """Search for an integer relation among `values`.

    Ferguson-Bailey iteration with gamma = sqrt(4/3) and a full Hermite
    reduction per step.  Returns the first relation whose residual, recomputed
    against the raw inputs, stays below 10^-(working - 12); returns None once
    the norm lower bound 1/max|H_jj| passes 10^max_coeff_digits, which proves
    no relation that small exists.  Raises ConvergenceFailure if the iteration
    reaches the precision floor of its inputs with the question still open.
    """
    n = len(values)
    if n < 2:
        raise DomainError("pslq needs at least two values")
    mp = ctx.mp
    working = ctx.working_digits
    xs = [ctx.mpf(v) for v in values]

    # a zero input is its own relation
    for i, x in enumerate(xs):
        if x == 0:
            coeffs = tuple(1 if j == i else 0 for j in range(n))
            return Relation(coeffs, 1, ctx.real(0))

    detect_eps = mp.mpf(10) ** (-(working - 10))
    certify_eps = mp.mpf(10) ** (-(working - 12))
    floor_eps = mp.mpf(10) ** (-(working - 3))
    norm_bound_cap = mp.mpf(10) ** max_coeff_digits
    gamma = mp.sqrt(mp.mpf(4) / 3)

    scale = mp.sqrt(mp.fsum(x * x for x in xs))
    y = [x / scale for x in xs]
    # B accumulates the inverse transformations column-wise: a small |y_k|
    # certifies column k of B as the relation.
    B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    s = [mp.mpf(0)] * n
    acc = mp.mpf(0)
    for k in range(n - 1, -1, -1):
        acc += y[k] * y[k]
        s[k] = mp.sqrt(acc)
    H = [[mp.mpf(0)] * (n - 1) for _ in range(n)]
    for j in range(n - 1):
        H[j][j] = s[j + 1] / s[j]
        for i in range(j + 1, n):
            H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])

    def reduce_all():
        for i in range(1, n):
            for j in range(min(i - 1, n - 2), -1, -1):
                if H[j][j] == 0:
                    continue
                t = mp.nint(H[i][j] / H[j][j])
                if t == 0:
                    continue
                ti = int(t)
                y[j] += ti * y[i]
                for k in range(j + 1):
                    H[i][k] -= ti * H[j][k]
                for k in range(n):
                    B[k][j] += ti * B[k][i]

    def check_detect() -> Optional[Relation]:
        idx = min(range(n), key=lambda k: abs(y[k]))
        if abs(y[idx]) >= detect_eps:
            return None
        coeffs = [B[k][idx] for k in range(n)]
        residual = mp.fsum(c * x for c, x in zip(coeffs, xs))
        if abs(residual) > certify_eps * scale:
            return None
        if all(c == 0 for c in coeffs):
            return None
        lead = next(c for c in coeffs if c != 0)
        if lead < 0:
            coeffs = [-c for c in coeffs]
            residual = -residual
        return Relation(tuple(coeffs), max(abs(c) for c in coeffs), ctx.real(residual))

    reduce_all()
    found = check_detect()
    if found is not None:
        return found

    # Two honest exits: a certified relation, or a norm bound that rules one
    # out.  Hitting the precision floor first means the inputs cannot answer
    # the question, hence the error rather than None.
    max_iter = 2000 * n * max(max_coeff_digits, 1)
    for _ in range(max_iter):
        m = max(range(n - 1), key=lambda i: gamma ** i * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        for k in range(n):
            B[k][m], B[k][m + 1] = B[k][m + 1], B[k][m]
        if m < n - 2:
            t0 = mp.hypot(H[m][m], H[m][m + 1])
            if t0 != 0:
                c0, s0 = H[m][m] / t0, H[m][m + 1] / t0
                for i in range(m, n):
                    a, b = H[i][m], H[i][m + 1]
                    H[i][m] = c0 * a + s0 * b
                    H[i][m + 1] = -s0 * a + c0 * b
        reduce_all()

        found = check_detect()
        if found is not None:
            return found
        if min(abs(v) for v in y) < floor_eps:
            break
        hmax = max(abs(H[j][j]) for j in range(n - 1))
        if hmax == 0:
            break
        if 1 / hmax > norm_bound_cap:
            return None
    raise ConvergenceFailure(
        "pslq hit the precision floor with no certified relation and no "
        f"exclusion bound; inputs carry only {working} working digits"
    )


# ---------------------------------------------------------------------------
# discovery
# ---------------------------------------------------------------------------

_MAX_EXP_DENOMINATOR = 6


def _relation_to_form(rel: Relation, basis: ConstantBasis) -> Optional[ClosedForm]:
    c0 = rel.coefficients[0]
    if c0 == 0:
        return None
    exponents = {}
    for name, c in zip(basis.constants, rel.coefficients[1:]):
        if c == 0:
            continue
        e = Fraction(-c, c0)
        if e.denominator > _MAX_EXP_DENOMINATOR:
            return None
        exponents[name] = e
    return ClosedForm.from_parts(Fraction(1), exponents)


def _search(
    value,
    basis: ConstantBasis,
    ctx: PrecisionContext,
    recompute,
    max_coeff_digits: int,
):
    v = value if isinstance(value, BigReal) else ctx.real(value)
    if not (v.value > 0):
        raise DomainError("closed-form discovery needs a positive value")
    mp = ctx.mp
    logs = [ctx.real(mp.log(v.value))] + [ctx.real(lv) for lv in basis.log_values(ctx)]
    rel = pslq(logs, ctx, max_coeff_digits=max_coeff_digits)
    if rel is None:
        return None
    form = _relation_to_form(rel, basis)
    if form is None:
        return None

    # Anti-false-positive guard: rebuild both sides 20 digits past the search
    # and insist they still agree.  A coincidental relation certified at w
    # digits can only track the true value to about w - 12, so this margin
    # separates the cases cleanly.
    wide = ctx.widen(20)
    lhs = closedform_eval(form, wide)
    if recompute is not None:
        rhs = recompute(wide)
        needed = min(ctx.working_digits, rhs.precision) - 5
    else:
        rhs = v
        needed = min(v.precision, ctx.working_digits) - 5
    got = digits_agreement(lhs, rhs)
    if got < needed:
        return None
    return rel, form, got


def discover_gamma_form(
    value,
    basis: ConstantBasis,
    ctx: PrecisionContext,
    recompute: Optional[Callable[[PrecisionContext], BigReal]] = None,
    max_coeff_digits: int = 3,
) -> Optional[ClosedForm]:
    """Closed form of a positive value over a constant basis, or None.

    Runs pslq on [log value] + basis logs; a relation with nonzero leading
    coefficient c0 becomes the form prod(const^(-c_i/c0)).  Before anything
    is returned the form is re-evaluated 20 digits past the search precision
    and compared against `recompute(wider_ctx)` when that callback is given,
    else against the supplied value at its own stated precision; a mismatch,
    a zero c0, or an exponent denominator beyond 6 all yield None.
    """
    hit = _search(value, basis, ctx, recompute, max_coeff_digits)
    if hit is None:
        return None
    return hit[1]


def discovery_report(
    value,
    basis: ConstantBasis,
    ctx: PrecisionContext,
    recompute: Optional[Callable[[PrecisionContext], BigReal]] = None,
    max_coeff_digits: int = 3,
) -> Optional[dict]:
    """JSON-ready account of one discovery run, or None when nothing survived.

    Fields: value_digits, basis, relation, closed_form_text, verified_digits.
    """
    v = value if isinstance(value, BigReal) else ctx.real(value)
    hit = _search(v, basis, ctx, recompute, max_coeff_digits)
    if hit is None:
        return None
    rel, form, verified = hit
    return {
        "value_digits": min(v.precision, ctx.working_digits),
        "basis": basis.name,
        "relation": list(rel.coefficients),
        "closed_form_text": form.text(),
        "verified_digits": verified,
    }
