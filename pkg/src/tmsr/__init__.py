"""Timed multiset rewriting: modelling, static classification and
verification of realizability and survivability properties."""

from .terms import (
    App,
    Configuration,
    ConfigurationError,
    Const,
    Fact,
    Signature,
    SortError,
    Substitution,
    Term,
    TimestampedFact,
    TmsrError,
    UnboundVariableError,
    Var,
    apply_subst,
    canonical_sequence,
    fact_size,
    fact_text,
    make_signature,
    term_text,
)
from .rules import (
    CreatedFact,
    CriticalPair,
    CriticalSpec,
    FactSizeError,
    Rule,
    RulePattern,
    RuleError,
    System,
    TICK,
    TICK_LABEL,
    TickRule,
    TimeConstraint,
    apply_rule,
    check_balanced,
    check_progressive,
    compute_dmax,
    enabled,
    eval_constraint,
    expand_critical_pair,
    expand_rule,
    is_critical,
    make_system,
    match_rule,
    must_tick,
    tick,
)
from .delta import (
    DeltaConfig,
    INFINITY,
    abstract,
    count_bound,
    delta_is_critical,
    delta_step,
    representative,
)
from .search import (
    EngineInvariantError,
    FAILS,
    HOLDS,
    Lasso,
    SearchBudget,
    SearchStats,
    Trace,
    TraceStep,
    UNKNOWN,
    ValidationResult,
    Verdict,
    VerifierInputError,
    bounded_realizability,
    bounded_survivability,
    invariant_counters,
    lazy_successors,
    realizability,
    survivability,
    validate_lasso,
    validate_trace,
)
from .specfile import SpecFile, SpecParseError, parse_spec, print_spec

__version__ = "0.1.0"
