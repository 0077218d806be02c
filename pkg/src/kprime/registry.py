"""Identity registry: the shipped catalog of verifiable statements.

Every entry is an :class:`IdentityRecord` loaded from ``data/registry.json``.
A record couples two recipes (left and right side), a comparison method,
and a target.  Recipes are small dicts ``{"op": ..., "args": {...}}`` whose
arguments are literals, so each record is self-contained: nothing refers to
another record's runtime output.

Three comparison methods exist.

``numeric-compare``
    Both sides evaluate to :class:`~kprime.precision.BigReal`; the record
    passes when they agree to at least ``target`` digits.  A side that stops
    early with :class:`~kprime.errors.AccuracyShortfall` downgrades the
    status to ``"shortfall"`` instead of ``"fail"``.

``exact-series``
    Both sides expand to integer q-series compared coefficient by
    coefficient through the first ``target`` exponents.  The special right
    side ``{"op": "multiplicative"}`` instead asserts that the left series
    has multiplicative coefficients for coprime index pairs with product up
    to ``target``.

``rational-ratio``
    The left side must reduce exactly to ``p/q * pi^e`` as stated on the
    right, either through :func:`~kprime.precision.to_rational` on a numeric
    value or through :func:`~kprime.lseries.critical_ratio`.

Reports carry the two values as decimal strings with ten digits beyond the
target, so a reader can see how far past the requirement the match extends.
"""

from __future__ import annotations

import json
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from time import perf_counter
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import lattice as _lattice
from . import lseries as _lseries
from . import qseries as _qseries
from . import quadrature as _quadrature
from . import special as _special
from .errors import AccuracyShortfall, DomainError, UnknownIdError
from .precision import BigReal, PrecisionContext, digits_agreement, to_rational
from .qseries import EtaQuotientSpec, QSeries
from .relations import ClosedForm, closedform_eval

__all__ = [
    "EXPECTED_ANCHORS",
    "IdentityRecord",
    "VerificationReport",
    "anchor_coverage",
    "load_registry",
    "registry_ids",
    "reports_from_json",
    "reports_to_json",
    "run_all",
    "verify",
]


# ---------------------------------------------------------------------------
# records and reports
# ---------------------------------------------------------------------------

_METHODS = ("numeric-compare", "exact-series", "rational-ratio")


@dataclass(frozen=True)
class IdentityRecord:
    """One verifiable identity.

    ``target`` is a digit count for numeric and rational records and a
    coefficient count for exact-series records.  ``anchor`` is a short
    stable label used only for coverage bookkeeping; ``note`` carries any
    caveat worth surfacing next to the result.
    """

    id: str
    description: str
    lhs: Mapping[str, object]
    rhs: Mapping[str, object]
    method: str
    target: int
    anchor: Optional[str] = None
    note: Optional[str] = None

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r} on {self.id!r}")
        if self.target < 1:
            raise ValueError(f"target must be positive on {self.id!r}")


@dataclass
class VerificationReport:
    """Outcome of verifying one record."""

    id: str
    status: str
    lhs_value: str
    rhs_value: str
    digits_achieved: Optional[int] = None
    first_mismatch: Optional[str] = None
    diagnostic: Optional[str] = None
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "status": self.status,
            "lhs_value": self.lhs_value,
            "rhs_value": self.rhs_value,
            "digits_achieved": self.digits_achieved,
            "first_mismatch": self.first_mismatch,
            "diagnostic": self.diagnostic,
            "wall_time": self.wall_time,
        }

    @staticmethod
    def from_dict(d: Mapping[str, object]) -> "VerificationReport":
        return VerificationReport(
            id=d["id"],
            status=d["status"],
            lhs_value=d["lhs_value"],
            rhs_value=d["rhs_value"],
            digits_achieved=d.get("digits_achieved"),
            first_mismatch=d.get("first_mismatch"),
            diagnostic=d.get("diagnostic"),
            wall_time=float(d.get("wall_time", 0.0)),
        )


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_from_json(text: str) -> List[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]


@lru_cache(maxsize=1)
def load_registry() -> "OrderedDict[str, IdentityRecord]":
    """Parse data/registry.json once; keyed by id, authoring order kept."""
    raw = json.loads(
        resources.files("kprime").joinpath("data/registry.json").read_text()
    )
    out: "OrderedDict[str, IdentityRecord]" = OrderedDict()
    for entry in raw:
        rec = IdentityRecord(
            id=entry["id"],
            description=entry["description"],
            lhs=entry["lhs"],
            rhs=entry["rhs"],
            method=entry["method"],
            target=int(entry["target"]),
            anchor=entry.get("anchor"),
            note=entry.get("note"),
        )
        if rec.id in out:
            raise ValueError(f"duplicate registry id {rec.id!r}")
        out[rec.id] = rec
    return out


def registry_ids(pattern: str = "*") -> List[str]:
    ids = sorted(i for i in load_registry() if fnmatchcase(i, pattern))
    if not ids:
        raise UnknownIdError(f"no registry records match {pattern!r}")
    return ids


# ---------------------------------------------------------------------------
# recipe evaluation: numeric ops
# ---------------------------------------------------------------------------

def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _parse_closed_form(args: Mapping) -> ClosedForm:
    exps = {name: _frac(e) for name, e in args.get("exponents", ())}
    return ClosedForm.from_parts(_frac(args.get("rational", 1)), exps)


def _op_moment(args, ctx, target):
    return _quadrature.moment(args["id"], ctx)


def _op_moment_ratio(args, ctx, target):
    return _quadrature.lvalue_ratio_integrals(args["a"], args["b"], ctx)


def _op_lvalue(args, ctx, target):
    return _lseries.lvalue(args["form"], int(args["s"]), ctx)


def _op_lvalue_weight3(args, ctx, target):
    return _lseries.lvalue_weight3(int(args["r"]), int(args["s"]), ctx)


def _op_lvalue_weight3_combo(args, ctx, target):
    total = None
    for coef, r, s in args["terms"]:
        term = _lseries.lvalue_weight3(int(r), int(s), ctx) * ctx.real(coef)
        total = term if total is None else total + term
    return total


def _op_lvalue_weight9_s8(args, ctx, target):
    return _lseries.lvalue_weight9_s8(ctx)


def _op_critical_ratio(args, ctx, target):
    return _lseries.critical_ratio(
        args["form"],
        int(args["s1"]),
        int(args["s2"]),
        ctx,
        max_denominator=int(args.get("max_denominator", 10 ** 6)),
    )


def _op_lattice_sum(args, ctx, target):
    spec = _lattice.lattice_spec(args["spec"])
    return _lattice.accelerated_sum(spec, ctx, target_digits=target)


def _op_g2_at(args, ctx, target):
    return _special.g2(_frac(args["y"]), ctx)


def _op_ellk_singular(args, ctx, target):
    k2 = _frac(args["k2"])
    k = ctx.mp.sqrt(ctx.mpf(k2))
    return _special.ellK(k, ctx)


def _op_basic_integral(args, ctx, target):
    kind = args["kind"]
    mp = ctx.mp
    if kind == "one":
        f = lambda x, xc: mp.mpf(1)  # noqa: E731
    elif kind == "kprime":
        from .quadrature import _Kp

        # K' integrated in the squared-modulus variable: substituting
        # m = k^2 turns this into 2 * int k K'(k) dk, which telescopes to
        # exactly 2 via the termwise beta reduction.
        f = lambda x, xc: _Kp(mp, mp.sqrt(x))  # noqa: E731
    else:
        raise UnknownIdError(f"no basic integrand {kind!r}")
    return _quadrature.tanh_sinh(f, ctx).value


def _op_tricomi(args, ctx, target):
    sides = _quadrature.tricomi_identity_sides(ctx)
    return sides[0] if args["side"] == "series" else sides[1]


def _op_pfq(args, ctx, target):
    upper = [_frac(u) for u in args["upper"]]
    lower = [_frac(l) for l in args["lower"]]
    z = _frac(args.get("z", 1))
    return _special.pFq(upper, lower, z, ctx, accel=bool(args.get("accel", False)))


def _op_duke_3f2(args, ctx, target):
    mp = ctx.mp
    k2 = _frac(args["k2"])
    k = mp.sqrt(ctx.mpf(k2))
    K = _special.ellK(k, ctx).value
    h = Fraction(3, 4)
    f = _special.pFq([h, h, 1], [Fraction(5, 4), Fraction(5, 4)], k2, ctx).value
    return ctx.real(mp.pi * mp.sqrt(k) / (4 * K) * f)


def _duke_series_value(ctx, K, Kp):
    """Sum a_n / n^2 q^(n/4) for the eta(4 tau)^6 coefficients a_n."""
    mp = ctx.mp
    q4 = mp.exp(-mp.pi * Kp / K / 4)
    need = ctx.working_digits + 5
    N = int(need * mp.log(10) / -mp.log(q4)) + 8
    series = _qseries.eta_quotient_expand("eta(4)^6", N)
    total = mp.mpf(0)
    power = mp.mpf(1)
    for n in range(1, N + 1):
        power *= q4
        c = series.coefficient(n)
        if c:
            total += mp.mpf(c) / (n * n) * power
    return ctx.real(total)


def _op_duke_series(args, ctx, target):
    mp = ctx.mp
    k2 = _frac(args["k2"])
    k = mp.sqrt(ctx.mpf(k2))
    K = _special.ellK(k, ctx).value
    Kp = _special.ellKprime(k, ctx).value
    return _duke_series_value(ctx, K, Kp)


_TABLE1ST_CF = ClosedForm.from_parts(
    Fraction(1, 64), {"gamma(1/4)": 4, "pi": -1}
)


def _op_duke_trend(args, ctx, target):
    """The series side at k = 1 - 10^-j, j = 2..6.

    The five values must approach the Gamma^4(1/4)/(64 pi) limit with
    strictly shrinking distance; the last one is returned.  A broken trend
    raises DomainError, which the harness reports as a failure.
    """
    mp = ctx.mp
    limit = closedform_eval(_TABLE1ST_CF, ctx).value
    dists: List = []
    value = None
    for j in args.get("js", (2, 3, 4, 5, 6)):
        delta = mp.mpf(10) ** (-int(j))
        k = 1 - delta
        kp = mp.sqrt(delta * (2 - delta))
        K = _special.ellK(k, ctx).value
        Kp = _special.ellK(kp, ctx).value
        value = _duke_series_value(ctx, K, Kp)
        dists.append(abs(value.value - limit))
    for a, b in zip(dists, dists[1:]):
        if not b < a:
            raise DomainError(
                "distance to the limit stopped shrinking: "
                + ", ".join(mp.nstr(d, 6) for d in dists)
            )
    return value


def _op_w9_theta(args, ctx, target):
    y = int(args["y"])
    n = int(args.get("n", 0)) or int(
        (ctx.working_digits + 10) * 2.303 / (3.1415 * y) + 25
    )
    pairs = _qseries.weight9_ktheta_check(n, ctx)
    series, closed = pairs[0] if y == 1 else pairs[1]
    return series if args["side"] == "series" else closed


def _op_closed_form(args, ctx, target):
    return closedform_eval(_parse_closed_form(args), ctx)


def _op_scaled(args, ctx, target):
    inner = _eval_value(args["of"], ctx, target)
    mp = ctx.mp
    factor = mp.mpf(int(args.get("num", 1))) / int(args.get("den", 1))
    if "sqrt" in args:
        factor *= mp.sqrt(mp.mpf(int(args["sqrt"])))
    p = int(args.get("pi_power", 0))
    if p:
        factor *= mp.pi ** p
    return inner * ctx.real(factor)


def _op_combo(args, ctx, target):
    mp = ctx.mp
    total = None
    for num, den, sub in args["terms"]:
        term = _eval_value(sub, ctx, target) * ctx.real(
            mp.mpf(int(num)) / int(den)
        )
        total = term if total is None else total + term
    return total


def _op_pi_log(args, ctx, target):
    mp = ctx.mp
    value = mp.log(mp.mpf(int(args["log_of"])))
    p = int(args.get("pi_power", 0))
    if p:
        value *= mp.pi ** p
    return ctx.real(value)


def _op_rational(args, ctx, target):
    return (
        Fraction(int(args["p"]), int(args.get("q", 1))),
        int(args.get("pi_power", 0)),
    )


_VALUE_OPS = {
    "moment": _op_moment,
    "moment_ratio": _op_moment_ratio,
    "lvalue": _op_lvalue,
    "lvalue_weight3": _op_lvalue_weight3,
    "lvalue_weight3_combo": _op_lvalue_weight3_combo,
    "lvalue_weight9_s8": _op_lvalue_weight9_s8,
    "critical_ratio": _op_critical_ratio,
    "lattice_sum": _op_lattice_sum,
    "g2_at": _op_g2_at,
    "ellk_singular": _op_ellk_singular,
    "basic_integral": _op_basic_integral,
    "tricomi": _op_tricomi,
    "pfq": _op_pfq,
    "duke_3f2": _op_duke_3f2,
    "duke_series": _op_duke_series,
    "duke_trend": _op_duke_trend,
    "w9_theta": _op_w9_theta,
    "closed_form": _op_closed_form,
    "scaled": _op_scaled,
    "combo": _op_combo,
    "pi_log": _op_pi_log,
    "rational": _op_rational,
}


def _eval_value(recipe: Mapping, ctx: PrecisionContext, target: int):
    op = recipe.get("op")
    fn = _VALUE_OPS.get(op)
    if fn is None:
        raise UnknownIdError(f"no numeric recipe op {op!r}")
    return fn(recipe.get("args", {}), ctx, target)


# ---------------------------------------------------------------------------
# recipe evaluation: series ops
# ---------------------------------------------------------------------------

def _series_for_form(name: str, N: int) -> QSeries:
    form = _lseries.form_by_name(name)
    if isinstance(form.source, EtaQuotientSpec):
        return _qseries.eta_quotient_expand(form.source, N)
    return _qseries.theta_expand(form.source, N)


def _op_qs_form(args, N):
    return _series_for_form(args["name"], N)


def _op_qs_eta(args, N):
    return _qseries.eta_quotient_expand(args["spec"], N)


def _op_qs_eta_combo(args, N):
    total = None
    for coef, spec in args["terms"]:
        piece = int(coef) * _qseries.eta_quotient_expand(spec, N)
        total = piece if total is None else total + piece
    return total


def _op_qs_theta(args, N):
    spec = {"g": _qseries.THETA_G, "h": _qseries.THETA_H, "w9": _qseries.THETA_W9}[
        args["name"]
    ]
    return _qseries.theta_expand(spec, N)


def _op_qs_h_product(args, N):
    return _qseries.h_product_series(N)


def _op_qs_eta3_theta(args, N):
    return _qseries.eta3_theta(N)


_SERIES_OPS = {
    "qs_form": _op_qs_form,
    "qs_eta": _op_qs_eta,
    "qs_eta_combo": _op_qs_eta_combo,
    "qs_theta": _op_qs_theta,
    "qs_h_product": _op_qs_h_product,
    "qs_eta3_theta": _op_qs_eta3_theta,
}


def _eval_series(recipe: Mapping, N: int) -> QSeries:
    op = recipe.get("op")
    fn = _SERIES_OPS.get(op)
    if fn is None:
        raise UnknownIdError(f"no series recipe op {op!r}")
    return fn(recipe.get("args", {}), N)


def _series_preview(S: QSeries, count: int = 8) -> str:
    coeffs = ", ".join(str(c) for c in S.coeffs[:count])
    return f"q^({S.lead}) * [{coeffs}, ...]"


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _context_for(rec: IdentityRecord, ctx: Optional[PrecisionContext]):
    if ctx is not None:
        return ctx
    if rec.method == "exact-series":
        return PrecisionContext(30)
    return PrecisionContext(max(rec.target + 10, 25))


def _numeric_string(v: BigReal, ctx: PrecisionContext, shown: int) -> str:
    return ctx.mp.nstr(v.value, max(shown, 4), strip_zeros=False)


def _verify_numeric(rec, ctx, target) -> VerificationReport:
    shown = target + 10
    shortfall = False
    sides = []
    for recipe in (rec.lhs, rec.rhs):
        try:
            sides.append(_eval_value(recipe, ctx, target))
        except AccuracyShortfall as exc:
            if exc.value is None:
                raise
            shortfall = True
            sides.append(exc.value)
    lhs, rhs = sides
    digits = digits_agreement(lhs, rhs)
    if digits >= target:
        status = "pass"
    else:
        status = "shortfall" if shortfall else "fail"
    return VerificationReport(
        id=rec.id,
        status=status,
        lhs_value=_numeric_string(lhs, ctx, shown),
        rhs_value=_numeric_string(rhs, ctx, shown),
        digits_achieved=digits,
    )


def _ratio_text(pair: Optional[Tuple[Fraction, int]]) -> str:
    if pair is None:
        return "no rational fit"
    frac, power = pair
    if power == 0:
        return str(frac)
    return f"{frac} * pi^{power}"


def _verify_ratio(rec, ctx, target) -> VerificationReport:
    expected = _op_rational(rec.rhs.get("args", {}), ctx, target)
    found = _eval_value(rec.lhs, ctx, target)
    if isinstance(found, BigReal):
        maxden = int(rec.rhs.get("args", {}).get("max_denominator", 100))
        rat = to_rational(found, maxden)
        found = None if rat is None else (rat, 0)
    ok = found == expected
    return VerificationReport(
        id=rec.id,
        status="pass" if ok else "fail",
        lhs_value=_ratio_text(found),
        rhs_value=_ratio_text(expected),
        first_mismatch=None if ok else _ratio_text(found),
    )


def _verify_series(rec, ctx, target) -> VerificationReport:
    N = target
    A = _eval_series(rec.lhs, N)
    if rec.rhs.get("op") == "multiplicative":
        bad = _qseries.multiplicativity_check(A, N)
        ok = not bad
        mismatch = None if ok else f"a({bad[0][0]}) a({bad[0][1]}) != a({bad[0][0] * bad[0][1]})"
        rhs_text = f"multiplicative for coprime products <= {N}"
    else:
        B = _eval_series(rec.rhs, N)
        ok, where = _qseries.series_equal(A, B, N)
        mismatch = None if ok else f"q^({where})"
        rhs_text = _series_preview(B)
    return VerificationReport(
        id=rec.id,
        status="pass" if ok else "fail",
        lhs_value=_series_preview(A),
        rhs_value=rhs_text,
        digits_achieved=N if ok else None,
        first_mismatch=mismatch,
    )


def verify(
    id: str,
    ctx: Optional[PrecisionContext] = None,
    target: Optional[int] = None,
) -> VerificationReport:
    """Run one record and return its report.

    ``ctx`` overrides the default working precision (target + 10 digits);
    ``target`` overrides the record's own requirement, e.g. from the CLI's
    ``--digits``.  Unknown ids raise UnknownIdError; computational errors
    are folded into a ``"fail"`` report with a diagnostic.
    """
    try:
        rec = load_registry()[id]
    except KeyError:
        known = ", ".join(sorted(load_registry()))
        raise UnknownIdError(f"no registry record {id!r}; known ids: {known}")
    goal = rec.target if target is None else int(target)
    run_ctx = _context_for(
        rec if target is None else IdentityRecord(
            rec.id, rec.description, rec.lhs, rec.rhs, rec.method, goal,
            rec.anchor, rec.note,
        ),
        ctx,
    )
    start = perf_counter()
    try:
        if rec.method == "numeric-compare":
            report = _verify_numeric(rec, run_ctx, goal)
        elif rec.method == "rational-ratio":
            report = _verify_ratio(rec, run_ctx, goal)
        else:
            report = _verify_series(rec, run_ctx, goal)
    except AccuracyShortfall as exc:
        report = VerificationReport(
            id=rec.id,
            status="shortfall",
            lhs_value="",
            rhs_value="",
            digits_achieved=exc.achieved,
            diagnostic=str(exc),
        )
    except Exception as exc:  # deliberate: a broken record must not stop a run
        report = VerificationReport(
            id=rec.id,
            status="fail",
            lhs_value="",
            rhs_value="",
            diagnostic=f"{type(exc).__name__}: {exc}",
        )
    report.wall_time = perf_counter() - start
    return report


def _verify_in_worker(job) -> VerificationReport:
    rid, ctx_spec = job
    ctx = None if ctx_spec is None else PrecisionContext(*ctx_spec)
    return verify(rid, ctx)


def run_all(
    pattern: str = "*",
    parallelism: int = 1,
    ctx: Optional[PrecisionContext] = None,
) -> List[VerificationReport]:
    """Verify every record matching the glob pattern, ordered by id.

    With ``parallelism > 1`` records run in worker processes; reports come
    back in the same id order and, wall time aside, are identical to a
    sequential run.
    """
    ids = registry_ids(pattern)
    if parallelism > 1 and len(ids) > 1:
        ctx_spec = None if ctx is None else (ctx.target_digits, ctx.guard_digits)
        jobs = [(rid, ctx_spec) for rid in ids]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(_verify_in_worker, jobs))
    return [verify(rid, ctx) for rid in ids]


# ---------------------------------------------------------------------------
# coverage bookkeeping
# ---------------------------------------------------------------------------

#: Anchor labels that must each be carried by at least one record.
EXPECTED_ANCHORS = frozenset(
    {
        "1.1", "1.2", "2.2", "2.3", "2.4",
        "3.1", "3.3", "3.5", "3.6", "e-integral", "h4-alt",
        "3.9", "3.10", "eta14", "eta3", "hecke",
        "3.11", "3.12", "3.13", "3.14", "3.16", "3.18", "3.19", "3.20",
        "lg-integrals", "lg-ratios", "lh-ratios",
        "4.1", "thm4.2-1", "thm4.2-2", "thm4.2-3", "thm4.2-4",
        "thm4.2-5", "thm4.2-6", "thm4.2-7",
        "4.2int", "4.3int", "4f3",
        "4.4int", "4.4", "4.5", "4.6",
        "duke", "table1st-limit",
        "4.7", "4.8", "4.9", "4.10a", "4.10b", "4.10c",
        "5.1", "5.2",
    }
)


def anchor_coverage() -> Tuple[List[str], List[str]]:
    """(expected anchors with no record, record anchors not expected)."""
    present = {r.anchor for r in load_registry().values() if r.anchor}
    missing = sorted(EXPECTED_ANCHORS - present)
    unexpected = sorted(present - EXPECTED_ANCHORS)
    return missing, unexpected
