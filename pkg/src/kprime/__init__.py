"""Arbitrary-precision verification of elliptic-integral moments, critical
L-values of modular forms, and two-dimensional lattice sums, together with
PSLQ-based discovery of Gamma-product closed forms.

The package is organized around an explicit :class:`PrecisionContext`; no
function reads or writes global precision state.  The main layers:

``precision``   contexts, BigReal/BigComplex, digit agreement, rationality
``special``     AGM, K/K'/E, nome, thetas, eta, pFq, g2, singular moduli
``quadrature``  tanh-sinh integration and the moment-integrand catalog
``qseries``     exact integer q-expansions (eta quotients, binary thetas)
``lseries``     critical L-values via a Mellin head/tail split
``lattice``     conditionally convergent 2D sums, rows in closed form
``relations``   PSLQ and closed-form discovery/evaluation
``registry``    the shipped identity registry and verification harness
"""

from .errors import (
    AccuracyShortfall,
    ConvergenceFailure,
    DivergenceError,
    DomainError,
    NonCuspidalError,
    PoleError,
    UnknownIdError,
)
from .precision import (
    BigComplex,
    BigReal,
    PrecisionContext,
    digits_agreement,
    to_rational,
)
from .special import (
    agm,
    ellE,
    ellK,
    ellKprime,
    eta,
    g2,
    gamma,
    incomplete_gamma_int,
    nome,
    pFq,
    singular_value,
    theta2,
    theta3,
    theta4,
)
from .quadrature import (
    Integrand,
    QuadResult,
    lvalue_ratio_integrals,
    moment,
    moment_ids,
    tanh_sinh,
)
from .qseries import (
    EtaQuotientSpec,
    QSeries,
    ThetaSpec,
    eta_quotient_expand,
    multiplicativity_check,
    series_equal,
    theta_expand,
    twist_negate,
    weight9_ktheta_check,
)
from .lseries import (
    ModularFormSpec,
    critical_ratio,
    form_by_name,
    lvalue,
    lvalue_weight3,
    lvalue_weight9_s8,
)
from .lattice import (
    LatticeSumSpec,
    accelerated_sum,
    ellipse_sum,
    g2_combination_check,
    lattice_spec,
    log2_family_check,
    rect_sum,
)
from .relations import (
    ClosedForm,
    ConstantBasis,
    Relation,
    basis_by_name,
    closedform_eval,
    discover_gamma_form,
    pslq,
)
from .registry import load_registry, run_all, verify

__version__ = "0.1.0"

__all__ = [
    "AccuracyShortfall",
    "BigComplex",
    "BigReal",
    "ClosedForm",
    "ConstantBasis",
    "ConvergenceFailure",
    "DivergenceError",
    "DomainError",
    "EtaQuotientSpec",
    "Integrand",
    "LatticeSumSpec",
    "ModularFormSpec",
    "NonCuspidalError",
    "PoleError",
    "PrecisionContext",
    "QSeries",
    "QuadResult",
    "Relation",
    "ThetaSpec",
    "UnknownIdError",
    "accelerated_sum",
    "agm",
    "basis_by_name",
    "closedform_eval",
    "critical_ratio",
    "digits_agreement",
    "discover_gamma_form",
    "ellE",
    "ellK",
    "ellKprime",
    "ellipse_sum",
    "eta",
    "eta_quotient_expand",
    "form_by_name",
    "g2",
    "g2_combination_check",
    "gamma",
    "incomplete_gamma_int",
    "lattice_spec",
    "load_registry",
    "log2_family_check",
    "lvalue",
    "lvalue_ratio_integrals",
    "lvalue_weight3",
    "lvalue_weight9_s8",
    "moment",
    "moment_ids",
    "multiplicativity_check",
    "nome",
    "pFq",
    "pslq",
    "rect_sum",
    "run_all",
    "series_equal",
    "singular_value",
    "tanh_sinh",
    "theta2",
    "theta3",
    "theta4",
    "theta_expand",
    "to_rational",
    "twist_negate",
    "verify",
    "weight9_ktheta_check",
]
