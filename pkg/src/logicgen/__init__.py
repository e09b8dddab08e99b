"""Generate, solve and check temporal/propositional logic datasets."""

__version__ = "0.1.0"

from .automata import (
    DeadlineExceeded,
    check_containment,
    is_satisfiable,
    ltl_to_nba,
    solve_ltl,
)
from .datagen import (
    DatasetRecord,
    GenConfig,
    GenStats,
    gen_cnf_dataset,
    gen_pattern_conjunctions,
    gen_random_ltl,
    gen_random_prop,
    gen_unsolved_patterns,
    instantiate_pattern,
    load_patterns,
    read_dataset,
    run_sharded,
    split_dataset,
    write_dataset,
)
from .evaluation import (
    EvalReport,
    PredictionRecord,
    audit_references,
    classify_prediction,
    emit_report,
    evaluate,
    load_predictions,
    load_report,
)
from .formulas import Formula, parse_ltl, parse_prop, print_ltl, print_prop, props_of, size
from .sat import (
    PartialAssignment,
    check_partial_assignment,
    derive_partial_assignment,
    falsifying_completion,
    minimal_unsat_core,
    parse_assignment,
    sat_solve,
    solve_clauses,
    to_cnf,
)
from .semantics import eval_concrete
from .traces import (
    ConcreteTrace,
    SymbolicTrace,
    parse_trace,
    print_trace,
    sample_concretization,
    trace_token_count,
)
