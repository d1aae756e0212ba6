"""Cyclic string rewriting over monoid presentations."""

from .analysis import (
    cyclic_confluence_verdict,
    find_candidates,
    find_cyclical_inclusions,
    find_cyclical_overlaps,
    is_c_defined,
    presuf_intersections,
)
from .completion import cyclical_completion, orientation_policy, verify_cyclically_complete
from .conjugacy import Certificate, conjugacy_test, tilde_classes, verify_certificate
from .cyclic import Budget, Tri, cyclic_steps, explore_allseq, rho
from .errors import BudgetExceeded, ConsistencyError, ContractError, ParseError
from .rewriting import CyclicRule, RewritingSystem, Rule, normal_form
from .sysfile import dump_system, load_system, parse_system
from .words import Alphabet, canonical_rotation, rotate

__all__ = [
    "Alphabet", "Budget", "BudgetExceeded", "Certificate", "ConsistencyError", "ContractError",
    "CyclicRule", "ParseError", "RewritingSystem", "Rule", "Tri", "canonical_rotation",
    "conjugacy_test", "cyclic_confluence_verdict", "cyclic_steps", "cyclical_completion",
    "dump_system", "explore_allseq", "find_candidates", "find_cyclical_inclusions",
    "find_cyclical_overlaps", "is_c_defined", "load_system", "normal_form",
    "orientation_policy", "parse_system", "presuf_intersections", "rho", "rotate",
    "tilde_classes", "verify_certificate", "verify_cyclically_complete",
]
