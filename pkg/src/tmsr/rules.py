"""Rewrite rules, guards, matching, criticality and the static classifier.

An instantaneous rule reads the global clock through its time variable,
keeps a multiset of preserved fact patterns, consumes a multiset of fact
patterns and creates fact patterns stamped at a non-negative offset from
the clock. Every consumed pattern additionally carries the implicit
past-only bound (its timestamp must not exceed the clock); this bound is
materialized on the rule at construction time and is what the progressive
check inspects.

Guards are conjunctions of atoms ``L > R + N`` or ``L = R + N`` with a
signed offset N. A ``>=`` written by the user denotes the disjunction of
the two and is loaded by expanding the rule into alternatives sharing the
same name, except where the atom merely restates a past-only bound on a
consumed fact, in which case it is absorbed into the materialized bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .terms import (
    App,
    Configuration,
    Fact,
    Signature,
    Substitution,
    Term,
    TimestampedFact,
    TmsrError,
    Var,
    apply_subst,
    check_fact,
    fact_size,
    fact_text,
    fact_vars,
)

GREATER = "greater"
EQUAL = "equal"
GE = "ge"  # input sugar only; never stored on a loaded rule

TICK_LABEL = "tick"


class RuleError(TmsrError):
    pass


class FactSizeError(TmsrError):
    """A created fact exceeded the declared size bound; the run aborts."""


@dataclass(frozen=True, slots=True)
class TimeConstraint:
    rel: str  # GREATER or EQUAL (GE only as expander input)
    left: str
    right: str
    offset: int = 0

    def text(self) -> str:
        op = {GREATER: ">", EQUAL: "=", GE: ">="}[self.rel]
        if self.offset > 0:
            return f"{self.left} {op} {self.right} + {self.offset}"
        if self.offset < 0:
            return f"{self.left} {op} {self.right} - {-self.offset}"
        return f"{self.left} {op} {self.right}"


def eval_constraint(c: TimeConstraint, s: Substitution | dict) -> bool:
    """Arithmetic truth of the ground constraint under s."""
    times = s.time_dict() if isinstance(s, Substitution) else s
    try:
        left = times[c.left]
        right = times[c.right]
    except KeyError as exc:
        raise UnboundTimeError(str(exc.args[0])) from None
    if c.rel == GREATER:
        return left > right + c.offset
    if c.rel == EQUAL:
        return left == right + c.offset
    if c.rel == GE:
        return left >= right + c.offset
    raise RuleError(f"unknown relation {c.rel!r}")


class UnboundTimeError(TmsrError):
    def __init__(self, name: str):
        super().__init__(f"time variable {name!r} is not bound")
        self.name = name


@dataclass(frozen=True, slots=True)
class RulePattern:
    """A fact pattern together with its timestamp variable."""

    fact: Fact
    tvar: str


@dataclass(frozen=True, slots=True)
class CreatedFact:
    """A fact pattern created at clock + offset."""

    fact: Fact
    offset: int


@dataclass(frozen=True)
class Rule:
    name: str
    time_var: str
    preserved: tuple[RulePattern, ...]
    consumed: tuple[RulePattern, ...]
    created: tuple[CreatedFact, ...]
    guard: tuple[TimeConstraint, ...]
    # Materialized past-only bounds: timestamp variables of consumed facts,
    # each required to be <= the clock at match time.
    past_bounds: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "past_bounds", tuple(p.tvar for p in self.consumed)
        )
        for c in self.guard:
            if c.rel not in (GREATER, EQUAL):
                raise RuleError(
                    f"rule {self.name!r}: guard relation {c.rel!r} must be "
                    "expanded before rule construction"
                )
        bound = self.bound_time_vars()
        for c in self.guard:
            for v in (c.left, c.right):
                if v not in bound:
                    raise RuleError(
                        f"rule {self.name!r}: guard variable {v!r} does not "
                        "appear in the precondition"
                    )
        for cf in self.created:
            if cf.offset < 0:
                raise RuleError(f"rule {self.name!r}: negative creation offset")
        bound_term_vars = set(self.bound_term_vars())
        for cf in self.created:
            for v in fact_vars(cf.fact):
                if v not in bound_term_vars:
                    raise RuleError(
                        f"rule {self.name!r}: created fact uses unbound "
                        f"variable {v.name!r}"
                    )

    def bound_time_vars(self) -> set[str]:
        out = {self.time_var}
        for p in self.preserved + self.consumed:
            out.add(p.tvar)
        return out

    def bound_term_vars(self) -> Iterator[Var]:
        for p in self.preserved + self.consumed:
            yield from fact_vars(p.fact)

    @property
    def patterns(self) -> tuple[RulePattern, ...]:
        """Full precondition in declaration order, clock pattern excluded."""
        return self.preserved + self.consumed

    def max_creation_offset(self) -> int:
        return max((cf.offset for cf in self.created), default=0)


class TickRule:
    """The unique clock rule: advances the global time by one."""

    _instance: "TickRule | None" = None

    def __new__(cls) -> "TickRule":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    name = TICK_LABEL


TICK = TickRule()


def tick(c: Configuration) -> Configuration:
    return c.replace_time(c.time + 1)


def _expand_atoms(
    atoms: Sequence[TimeConstraint],
    time_var: str | None,
    consumed_tvars: frozenset[str],
) -> list[tuple[TimeConstraint, ...]]:
    """Expand >= atoms into alternative conjunctions. Atoms restating a
    past-only bound on a consumed fact are dropped (already materialized);
    trivially true atoms (T >= T) are dropped too."""
    alternatives: list[list[TimeConstraint]] = [[]]
    for a in atoms:
        if a.rel != GE:
            for alt in alternatives:
                alt.append(a)
            continue
        if a.offset == 0 and a.left == a.right:
            continue
        if (
            time_var is not None
            and a.offset == 0
            and a.left == time_var
            and a.right in consumed_tvars
        ):
            continue
        branched = []
        for alt in alternatives:
            branched.append(alt + [TimeConstraint(GREATER, a.left, a.right, a.offset)])
            branched.append(alt + [TimeConstraint(EQUAL, a.left, a.right, a.offset)])
        alternatives = branched
    return [tuple(alt) for alt in alternatives]


def expand_rule(
    name: str,
    time_var: str,
    preserved: Sequence[RulePattern],
    consumed: Sequence[RulePattern],
    created: Sequence[CreatedFact],
    guard: Sequence[TimeConstraint] = (),
) -> tuple[Rule, ...]:
    """Load one declared rule, expanding >= guard atoms into alternative
    rules sharing the declared name."""
    consumed_tvars = frozenset(p.tvar for p in consumed)
    alts = _expand_atoms(guard, time_var, consumed_tvars)
    return tuple(
        Rule(name, time_var, tuple(preserved), tuple(consumed), tuple(created), alt)
        for alt in alts
    )


@dataclass(frozen=True)
class CriticalPair:
    name: str
    patterns: tuple[RulePattern, ...]
    guard: tuple[TimeConstraint, ...]

    def __post_init__(self) -> None:
        tvars = {p.tvar for p in self.patterns}
        for c in self.guard:
            if c.rel not in (GREATER, EQUAL):
                raise RuleError(
                    f"critical pair {self.name!r}: relation {c.rel!r} must be expanded"
                )
            for v in (c.left, c.right):
                if v not in tvars:
                    raise RuleError(
                        f"critical pair {self.name!r}: constraint variable {v!r} "
                        "not bound by the patterns"
                    )


def expand_critical_pair(
    name: str,
    patterns: Sequence[RulePattern],
    guard: Sequence[TimeConstraint] = (),
) -> tuple[CriticalPair, ...]:
    alts = _expand_atoms(guard, None, frozenset())
    return tuple(CriticalPair(name, tuple(patterns), alt) for alt in alts)


@dataclass(frozen=True)
class CriticalSpec:
    pairs: tuple[CriticalPair, ...] = ()

    def max_offset(self) -> int:
        return max(
            (abs(c.offset) for p in self.pairs for c in p.guard), default=0
        )


EMPTY_SPEC = CriticalSpec()


@dataclass(frozen=True)
class System:
    """A rule set over a signature with a declared fact-size bound."""

    signature: Signature
    rules: tuple[Rule, ...]
    max_fact_size: int
    dmax_override: int | None = None

    def __post_init__(self) -> None:
        for r in self.rules:
            for p in r.patterns:
                check_fact(self.signature, p.fact)
                if fact_size(p.fact) > self.max_fact_size:
                    raise RuleError(
                        f"rule {r.name!r}: pattern {fact_text(p.fact)} exceeds "
                        f"the declared fact-size bound {self.max_fact_size}"
                    )
            for cf in r.created:
                check_fact(self.signature, cf.fact)
                if fact_size(cf.fact) > self.max_fact_size:
                    raise RuleError(
                        f"rule {r.name!r}: created pattern {fact_text(cf.fact)} "
                        f"exceeds the declared fact-size bound {self.max_fact_size}"
                    )


def default_fact_size_bound(
    rules: Iterable[Rule], init: Configuration | None = None
) -> int:
    """Largest fact size over all rule patterns and the initial facts."""
    best = 1
    for r in rules:
        for p in r.patterns:
            best = max(best, fact_size(p.fact))
        for cf in r.created:
            best = max(best, fact_size(cf.fact))
    if init is not None:
        for tf in init:
            best = max(best, fact_size(tf.fact))
    return best


def make_system(
    signature: Signature,
    rules: Sequence[Rule],
    max_fact_size: int | None = None,
    init: Configuration | None = None,
    dmax_override: int | None = None,
) -> System:
    if max_fact_size is None:
        max_fact_size = default_fact_size_bound(rules, init)
    return System(signature, tuple(rules), max_fact_size, dmax_override)


# ---------------------------------------------------------------------------
# Matching


def _match_term(pat: Term, ground: Term, binding: dict[Var, Term]) -> bool:
    if isinstance(pat, Var):
        seen = binding.get(pat)
        if seen is None:
            binding[pat] = ground
            return True
        return seen == ground
    if isinstance(pat, int):
        return pat == ground
    if isinstance(pat, App):
        if pat.fn == "s" and len(pat.args) == 1 and isinstance(ground, int):
            if ground >= 1:
                return _match_term(pat.args[0], ground - 1, binding)
            return False
        if isinstance(ground, App) and ground.fn == pat.fn and len(ground.args) == len(pat.args):
            return all(
                _match_term(p, g, binding) for p, g in zip(pat.args, ground.args)
            )
        return False
    return pat == ground  # Const


def _match_fact(pat: Fact, ground: Fact, binding: dict[Var, Term]) -> bool:
    if pat.pred != ground.pred or len(pat.args) != len(ground.args):
        return False
    return all(_match_term(p, g, binding) for p, g in zip(pat.args, ground.args))


def _match_patterns(
    patterns: Sequence[RulePattern],
    elements: Sequence[TimestampedFact],
    tbind: dict[str, int],
    vbind: dict[Var, Term],
    past_tvars: frozenset[str],
    clock: int | None,
    guard: Sequence[TimeConstraint],
    first_only: bool,
) -> list[Substitution]:
    """Backtracking sub-multiset matcher. Patterns are tried in order,
    elements in canonical order, so enumeration is deterministic."""
    out: list[Substitution] = []
    seen: set[Substitution] = set()
    used = [False] * len(elements)

    def walk(i: int) -> bool:
        if i == len(patterns):
            if all(eval_constraint(c, tbind) for c in guard):
                s = Substitution.of(tbind, vbind)
                if s not in seen:
                    seen.add(s)
                    out.append(s)
                    if first_only:
                        return True
            return False
        pat = patterns[i]
        for j, el in enumerate(elements):
            if used[j] or el.fact.pred != pat.fact.pred:
                continue
            if pat.tvar in past_tvars and clock is not None and el.ts > clock:
                continue
            prev_t = tbind.get(pat.tvar)
            if prev_t is not None and prev_t != el.ts:
                continue
            saved_v = dict(vbind)
            if not _match_fact(pat.fact, el.fact, vbind):
                vbind.clear()
                vbind.update(saved_v)
                continue
            if prev_t is None:
                tbind[pat.tvar] = el.ts
            used[j] = True
            stop = walk(i + 1)
            used[j] = False
            if prev_t is None:
                del tbind[pat.tvar]
            vbind.clear()
            vbind.update(saved_v)
            if stop:
                return True
        return False

    walk(0)
    return out


def match_rule(
    r: Rule, c: Configuration, first_only: bool = False
) -> list[Substitution]:
    """All grounding substitutions making the rule's precondition a
    sub-multiset of c with the guard and past-only bounds satisfied."""
    clock = c.time
    tbind: dict[str, int] = {r.time_var: clock}
    return _match_patterns(
        r.patterns,
        c.facts,
        tbind,
        {},
        frozenset(r.past_bounds),
        clock,
        r.guard,
        first_only,
    )


def rule_applicable(r: Rule, c: Configuration) -> bool:
    return bool(match_rule(r, c, first_only=True))


def _config_preds(c: Configuration) -> frozenset[str]:
    return frozenset(tf.fact.pred for tf in c.facts)


def _rule_may_match(r: Rule, preds: frozenset[str]) -> bool:
    return all(p.fact.pred in preds for p in r.patterns)


def enabled(sys: System, c: Configuration) -> list[tuple[Rule, Substitution]]:
    """Applicable (rule, substitution) pairs of instantaneous rules, in
    rule declaration order, then match enumeration order."""
    preds = _config_preds(c)
    out: list[tuple[Rule, Substitution]] = []
    for r in sys.rules:
        if not _rule_may_match(r, preds):
            continue
        for s in match_rule(r, c):
            out.append((r, s))
    return out


def must_tick(sys: System, c: Configuration) -> bool:
    """True iff no instantaneous rule applies, so the clock must advance."""
    preds = _config_preds(c)
    for r in sys.rules:
        if _rule_may_match(r, preds) and match_rule(r, c, first_only=True):
            return False
    return True


def apply_rule(
    r: Rule,
    c: Configuration,
    s: Substitution,
    max_fact_size: int | None = None,
) -> Configuration:
    """Apply r under s: consumed instances removed, created facts added at
    clock + offset. Raises RuleError if s does not satisfy the
    precondition, FactSizeError if a created fact exceeds the bound."""
    clock = c.time
    if s.time(r.time_var) != clock:
        raise RuleError(f"rule {r.name!r}: clock binding does not match")
    terms = s.term_dict()
    times = s.time_dict()
    needed = []
    for p in r.patterns:
        inst = apply_subst(p.fact, terms)
        ts = times.get(p.tvar)
        if ts is None:
            raise UnboundTimeError(p.tvar)
        needed.append(TimestampedFact(inst, ts))
    if not c.contains(needed):
        raise RuleError(f"rule {r.name!r}: precondition not a sub-multiset")
    for tv in r.past_bounds:
        if times[tv] > clock:
            raise RuleError(f"rule {r.name!r}: consumed fact stamped in the future")
    for g in r.guard:
        if not eval_constraint(g, times):
            raise RuleError(f"rule {r.name!r}: guard {g.text()} fails")
    consumed_inst = [
        TimestampedFact(apply_subst(p.fact, terms), times[p.tvar]) for p in r.consumed
    ]
    remaining = c.without(consumed_inst)
    for cf in r.created:
        inst = apply_subst(cf.fact, terms)
        if max_fact_size is not None and fact_size(inst) > max_fact_size:
            raise FactSizeError(
                f"rule {r.name!r} created {fact_text(inst)} of size "
                f"{fact_size(inst)}, exceeding the bound {max_fact_size}"
            )
        remaining.append(TimestampedFact(inst, clock + cf.offset))
    return Configuration(tuple(remaining))


# ---------------------------------------------------------------------------
# Criticality


def is_critical(
    cs: CriticalSpec, c: Configuration
) -> tuple[int, Substitution] | None:
    """First matching pair index and substitution, or None."""
    for i, pair in enumerate(cs.pairs):
        matches = _match_patterns(
            pair.patterns,
            c.facts,
            {},
            {},
            frozenset(),
            None,
            pair.guard,
            first_only=True,
        )
        if matches:
            return i, matches[0]
    return None


# ---------------------------------------------------------------------------
# Static classification


@dataclass(frozen=True)
class RuleBalance:
    name: str
    consumed_total: int
    created_total: int

    @property
    def balanced(self) -> bool:
        return self.consumed_total == self.created_total


@dataclass(frozen=True)
class BalanceReport:
    per_rule: tuple[RuleBalance, ...]

    @property
    def ok(self) -> bool:
        return all(rb.balanced for rb in self.per_rule)

    def offenders(self) -> list[str]:
        return [rb.name for rb in self.per_rule if not rb.balanced]


def check_balanced(sys: System) -> BalanceReport:
    """Per-rule verdicts. The clock and preserved facts sit on both sides,
    so a rule is balanced iff it creates as many facts as it consumes."""
    rows = []
    for r in sys.rules:
        base = 1 + len(r.preserved)
        rows.append(
            RuleBalance(r.name, base + len(r.consumed), base + len(r.created))
        )
    return BalanceReport(tuple(rows))


@dataclass(frozen=True)
class RuleProgress:
    name: str
    creates_future_fact: bool
    past_only_consumption: bool

    @property
    def progressive(self) -> bool:
        return self.creates_future_fact and self.past_only_consumption


@dataclass(frozen=True)
class ProgressReport:
    per_rule: tuple[RuleProgress, ...]

    @property
    def ok(self) -> bool:
        return all(rp.progressive for rp in self.per_rule)

    def offenders(self) -> list[str]:
        return [rp.name for rp in self.per_rule if not rp.progressive]


def check_progressive(sys: System) -> ProgressReport:
    """Per-rule verdicts: at least one created fact strictly in the future,
    and past-only bounds present on every consumed fact. The bounds are
    materialized at construction, so the second check reports on them."""
    balance = check_balanced(sys)
    if not balance.ok:
        raise RuleError(
            "progressive check requires a balanced system; unbalanced rules: "
            + ", ".join(balance.offenders())
        )
    rows = []
    for r in sys.rules:
        future = any(cf.offset >= 1 for cf in r.created)
        past = len(r.past_bounds) == len(r.consumed)
        rows.append(RuleProgress(r.name, future, past))
    return ProgressReport(tuple(rows))


def compute_dmax(
    sys: System, init: Configuration | None, cs: CriticalSpec
) -> int:
    """Truncation bound: the maximum over initial timestamps, creation
    offsets and absolute guard offsets, never below 1."""
    best = 1
    if init is not None:
        for tf in init:
            best = max(best, tf.ts)
    for r in sys.rules:
        best = max(best, r.max_creation_offset())
        for g in r.guard:
            best = max(best, abs(g.offset))
    best = max(best, cs.max_offset())
    if sys.dmax_override is not None:
        if sys.dmax_override < best:
            raise RuleError(
                f"declared truncation bound {sys.dmax_override} is below the "
                f"inferred bound {best}"
            )
        best = sys.dmax_override
    return best
