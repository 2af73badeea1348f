"""Hilbert's tenth problem over subrings of Q, at desk scale.

Exact polynomial arithmetic and encodings, bounded zero search in R_W,
reductions between solvability problems, a quadratic-form oracle, cylinder
certificates on the space of prime sets, measure estimates, and bounded
definability checks.
"""

from .category import (
    CylinderCertificate,
    Inconclusive,
    Member,
    NonMember,
    PhiBudget,
    Undecided,
    boundary_probe,
    generic_check,
    negative_certificates,
    nowhere_dense_probe,
    phi_decide,
    positive_certificates,
    validate_certificate,
)
from .definability import DiophantineModelSpec, ExistentialDefSpec, check_existential_def, check_model
from .measure import boundary_gap, cylinder_union_measure, estimate_measure_A, sample_condition
from .polyring import Polynomial, decode, encode, eval_poly, parse_poly, to_text
from .quadratic_oracle import decide_family_member, hilbert_symbol, isotropic_over_Q, two_squares_in_subring
from .reductions import conjoin, four_squares, homogenize_with_positivity, semilocal_reduce
from .solver import ExhaustedUpTo, Found, ResourceLimitExceeded, SearchLimits, search
from .subrings import (
    CofiniteExclude,
    Condition,
    ConditionPlusDefault,
    FiniteInclude,
    ResidueRule,
    Sampled,
    nth_prime,
    parse_descriptor,
)

__version__ = "0.1.0"

__all__ = [
    "CofiniteExclude",
    "Condition",
    "ConditionPlusDefault",
    "CylinderCertificate",
    "DiophantineModelSpec",
    "ExhaustedUpTo",
    "ExistentialDefSpec",
    "FiniteInclude",
    "Found",
    "Inconclusive",
    "Member",
    "NonMember",
    "PhiBudget",
    "Polynomial",
    "ResidueRule",
    "ResourceLimitExceeded",
    "Sampled",
    "SearchLimits",
    "Undecided",
    "boundary_gap",
    "boundary_probe",
    "check_existential_def",
    "check_model",
    "conjoin",
    "cylinder_union_measure",
    "decide_family_member",
    "decode",
    "encode",
    "estimate_measure_A",
    "eval_poly",
    "four_squares",
    "generic_check",
    "hilbert_symbol",
    "homogenize_with_positivity",
    "isotropic_over_Q",
    "negative_certificates",
    "nowhere_dense_probe",
    "nth_prime",
    "parse_descriptor",
    "parse_poly",
    "phi_decide",
    "positive_certificates",
    "sample_condition",
    "search",
    "semilocal_reduce",
    "to_text",
    "two_squares_in_subring",
    "validate_certificate",
]
