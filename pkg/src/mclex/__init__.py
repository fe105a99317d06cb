"""Matrix properties of finitely complete categories: a solver library.

Decides degeneracy (trivial / anti-trivial / neither), lex-implication
between matrix properties by fixpoint saturation with replayable
certificates, the regular-context dichotomy, and implication posets of whole
shape classes, with independent finite-model oracles for cross-checking.
"""

from .matrix import (Matrix, CanonicalMatrix, Column, validate, canonicalize,
                     maltsev, majority, arithmetical, gen_named,
                     pair_projection_matrix, select_rows, parse_matrix,
                     render_matrix)
from .degeneracy import (Degeneracy, DegeneracyVerdict, TruthTable,
                         boolean_term_witness, degeneracy_class,
                         is_anti_trivial, is_trivial)
from .engine import (ClosureState, DerivationStep, ImplicationVerdict,
                     check_certificate, derive_closure, equivalent_lex,
                     implies_lex, one_step)
from .classify import (RegularClassification, RegularTag, Side, TwoRowClass,
                       classify_regular, dichotomy_side,
                       implied_by_arithmetical_reg, implies_maltsev,
                       two_row_class)
from .finite_models import (ClosednessReport, FiniteRelation,
                            bool_has_closed_relations,
                            enumerate_bool_relations, interp_closed,
                            parse_relation, replay_counterexample)
from .poset import (ImplicationPoset, PosetClass, build_poset, emit_dot,
                    enumerate_canonical, hasse, nondegenerate, poset_to_dict,
                    subposet)
from .errors import (MclexError, ShapeError, VariableError, DomainError,
                     ParseError, ResourceLimitError, CertificateError)

__version__ = "0.1.0"

__all__ = [
    "Matrix", "CanonicalMatrix", "Column", "validate", "canonicalize",
    "maltsev", "majority", "arithmetical", "gen_named",
    "pair_projection_matrix", "select_rows", "parse_matrix", "render_matrix",
    "Degeneracy", "DegeneracyVerdict", "TruthTable", "boolean_term_witness",
    "degeneracy_class", "is_anti_trivial", "is_trivial",
    "ClosureState", "DerivationStep", "ImplicationVerdict",
    "check_certificate", "derive_closure", "equivalent_lex", "implies_lex",
    "one_step",
    "RegularClassification", "RegularTag", "Side", "TwoRowClass",
    "classify_regular", "dichotomy_side", "implied_by_arithmetical_reg",
    "implies_maltsev", "two_row_class",
    "ClosednessReport", "FiniteRelation", "bool_has_closed_relations",
    "enumerate_bool_relations", "interp_closed", "parse_relation",
    "replay_counterexample",
    "ImplicationPoset", "PosetClass", "build_poset", "emit_dot",
    "enumerate_canonical", "hasse", "nondegenerate", "poset_to_dict",
    "subposet",
    "MclexError", "ShapeError", "VariableError", "DomainError", "ParseError",
    "ResourceLimitError", "CertificateError",
    "__version__",
]
