"""A small answer-set engine: grounding, stable models, weak-constraint optimization."""
from .grounding import UnsafeRuleError, check_safety, ground, possible_atoms
from .solver import (
    BoundExceeded,
    CostedAnswerSet,
    SolveTimeout,
    cost,
    enumerate_models,
    is_stable,
    least_model,
    model_key,
    optimize,
    reduct,
    solve,
    stats,
)
from .syntax import (
    AspSyntaxError,
    Atom,
    Program,
    Rule,
    Var,
    WeakConstraint,
    atom,
    fact,
    parse_atoms,
    parse_program,
    render_term,
    to_aspcore2,
)
from .external import ExternalSolverError, parse_external_models, run_external

enumerate = enumerate_models
