"""Executable three-valued semantics for pure logic programs.

Atoms are true, false or inadmissible (not worth asking about).  The
toolkit parses programs, builds their completed disjunctive form,
checks interpretations for model and strong-model status, iterates
consequence operators to the Fitting least fixpoint, runs a resolution
engine whose outcomes respect the declarative reading, and diagnoses
wrong or missing answers against an oracle.
"""

from .truth import TV, T, F, I, and3, arrow3, conj3, exists3, leq_info, not3, or3, parse_tv
from .kernel_terms import (
    BoundedUniverse,
    Constraints,
    Num,
    Struct,
    Substitution,
    Term,
    Var,
    as_list,
    cons,
    format_term,
    is_ground,
    mklist,
    term_depth,
    unify,
    variables_of,
)
from .syntax import (
    Clause,
    ClausalProgram,
    Literal,
    ParseError,
    format_atom,
    format_clause,
    format_program,
    parse_goal,
    parse_program,
    parse_term,
)
from .normalform import (
    CompletedProgram,
    Definition,
    Disjunct,
    DisjunctiveProgram,
    completion,
    format_completion,
    format_disjunctive,
    to_disjunctive,
)
from .interpretations import (
    Interpretation3,
    InterpretationError,
    Table,
    SpecTable,
    intersect_inadmissible,
    intersect_true,
    load_interpretation,
    registry_table,
    repartition,
    save_interpretation,
    universe_from_program,
)
from .consequence import (
    FixpointResult,
    all_inadmissible,
    classical_tp,
    fitting_lfp,
    t3,
    t3_minus,
    t3_plus,
)
from .modelcheck import (
    CheckResult,
    Violation,
    check_model_completion,
    check_model_definite,
    check_strong_model,
    crosscheck_fixpoint_props,
    verify_synopsis,
)
from .slddnf import (
    DEFAULT_BUDGET,
    DEFAULT_RULE,
    RULES,
    Answer,
    Outcome,
    check_operational_theorems,
    enumerate_sets,
    finite_failure_set,
    solve,
    success_set,
)
from .debugger import (
    DebugController,
    DebugError,
    Diagnosis,
    InterpretationOracle,
    TranscriptOracle,
    build_call_answer_tree,
    build_proof_tree,
    diagnose_missing_answer,
    diagnose_wrong_answer,
    load_transcript,
    replay_transcript,
    save_transcript,
    transcript_document,
)

__version__ = "0.1.0"
