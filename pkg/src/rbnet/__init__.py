"""Relational Bayesian networks: model types, exact inference, and a DSL.

A relational Bayesian network assigns each probabilistic relation a
probability formula over its parents; for every finite domain (and rigid
structure, in the recursive case) this induces a joint distribution over
full interpretations.  The package provides the formula evaluator, a
first-order-logic bridge, symbolic dependency analysis, minimal ground
networks with variable elimination, brute-force oracles, and a concrete
syntax with a CLI.
"""
from .combinators import (CombinationFunction, CumulativeTable, Registry,
                          default_registry, noisy_or)
from .dependency import (CardinalityNormalForm, DependencyAnalyzer,
                         DependencyFormula, ancestor_closure_on_structure,
                         ancestor_formula, check_wellfounded, eval_dependency,
                         normalize, parent_formula)
from .errors import (BudgetExceededError, DuplicateCombinatorError,
                     InconsistentEvidenceError, MissingInterpretationError,
                     ModelValidationError, NotNormalizableError, ParseError,
                     RbnError, RecursiveNetworkError, UnboundVariableError,
                     UnknownCombinatorError, WellFoundednessError)
from .evaluator import (atom_probability, build_multiset, compile_formula,
                        eval_constraint, eval_formula,
                        interpretation_probability, joint_probability)
from .fol import (FAnd, FAtom, FEq, FExists, FForall, FNot, FOr, model_check,
                  translate)
from .frontend import (ModelDocument, ParsedModel, ScenarioDocument,
                       document_to_network, format_constraint, format_formula,
                       parse_fol, parse_model, parse_scenario, pretty_print,
                       scenario_evidence, scenario_structure)
from .grounding import (EMPTY_EVIDENCE, Evidence, GroundNetwork,
                        InferenceResult, brute_force_conditional,
                        brute_force_joint, build_auxiliary_network, infer,
                        infer_report, variable_elimination)
from .model import (And, Comb, Const, Convex, Eq, FALSE, GroundAtom, Indicator,
                    Not, Or, RelationalNetwork, RigidAtom, RigidConst,
                    Structure, TRUE, ValidationReport, Var, Vocabulary,
                    free_vars, validate_network)

__version__ = "0.1.0"
