"""Decision procedures: realizability and survivability, bounded and not.

Unbounded modes explore concrete configurations but key their visited
sets on the truncated-difference quotient, which is finite for balanced
systems and bisimilar to the concrete graph. Realizability holds iff the
compliant part of that graph contains a reachable cycle (lazy sampling
gives every state a successor, so an infinite compliant trace exists iff
a compliant cycle does); the witness is a lasso. Survivability
additionally requires that no critical state is reachable at all; the
counterexample is the shortest trace to one.

Bounded modes run on concrete configurations with a tick budget; the
trace is cut exactly at the n-th clock advance.

Two structural invariants are asserted on every explored path and
counted in ``invariant_counters``: strictly fewer instantaneous steps
than facts between consecutive clock advances, and bounded-search depth
within (n+2)*m + n.
"""

from __future__ import annotations

import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .delta import abstract, count_bound
from .rules import (
    CriticalSpec,
    Rule,
    Substitution,
    System,
    TICK_LABEL,
    apply_rule,
    check_progressive,
    compute_dmax,
    enabled,
    is_critical,
    must_tick,
    tick,
)
from .terms import Configuration, TmsrError

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"

REALIZABILITY = "realizability"
SURVIVABILITY = "survivability"
BOUNDED_REALIZABILITY = "bounded-realizability"
BOUNDED_SURVIVABILITY = "bounded-survivability"


class VerifierInputError(TmsrError):
    """Bad input to a decision procedure (distinct from verdict 'fails')."""


class EngineInvariantError(TmsrError):
    """An internal structural invariant failed; indicates an engine bug."""


invariant_counters = {"instantaneous_run": 0, "bounded_depth": 0}


def _violate(kind: str, message: str) -> None:
    invariant_counters[kind] += 1
    raise EngineInvariantError(message)


@dataclass(frozen=True)
class TraceStep:
    label: str
    subst: Substitution | None
    config: Configuration


@dataclass(frozen=True)
class Trace:
    init: Configuration
    steps: tuple[TraceStep, ...] = ()

    @property
    def final(self) -> Configuration:
        return self.steps[-1].config if self.steps else self.init

    def tick_count(self) -> int:
        return sum(1 for s in self.steps if s.label == TICK_LABEL)

    def configs(self):
        yield self.init
        for s in self.steps:
            yield s.config


@dataclass(frozen=True)
class Lasso:
    """Finite witness of an infinite compliant trace: a stem into a cycle
    of the quotient graph. The cycle's endpoints are equivalent (equal
    abstractions), not necessarily equal configurations."""

    stem: Trace
    cycle: Trace


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 1_000_000
    max_seconds: float = 600.0
    workers: int = 1


@dataclass
class SearchStats:
    states: int = 0
    peak_frontier: int = 0
    elapsed_ms: float = 0.0
    l_sigma_decimal: str | None = None
    max_depth: int = 0
    depth_cap: int | None = None


@dataclass
class Verdict:
    mode: str
    outcome: str
    stats: SearchStats
    witness: Trace | Lasso | None = None
    counterexample: Trace | None = None
    critical_pair: int | None = None
    note: str = ""


def _require_progressive(sys: System) -> None:
    report = check_progressive(sys)
    if not report.ok:
        raise VerifierInputError(
            "system is not progressive; offending rules: "
            + ", ".join(report.offenders())
        )


def _l_sigma(sys: System, init: Configuration, dmax: int) -> str:
    return str(
        count_bound(
            len(init),
            sys.max_fact_size,
            dmax,
            sys.signature.predicate_count,
            sys.signature.symbol_count,
        )
    )


def lazy_successors(
    sys: System, c: Configuration
) -> list[tuple[str, Substitution | None, Configuration]]:
    """Successors under lazy sampling: every enabled instantaneous
    instance, or the single clock advance when none is enabled."""
    pairs = enabled(sys, c)
    if pairs:
        return [
            (r.name, s, apply_rule(r, c, s, sys.max_fact_size)) for r, s in pairs
        ]
    return [(TICK_LABEL, None, tick(c))]


def _check_run(run: int, label: str, m: int) -> int:
    if label == TICK_LABEL:
        return 0
    if run + 1 >= m:
        _violate(
            "instantaneous_run",
            f"{run + 1} instantaneous steps between clock advances "
            f"(limit {m - 1} for {m} facts)",
        )
    return run + 1


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.start = _time.monotonic()

    def expired(self) -> bool:
        return _time.monotonic() - self.start > self.budget.max_seconds

    def elapsed_ms(self) -> float:
        return (_time.monotonic() - self.start) * 1000.0


# ---------------------------------------------------------------------------
# Unbounded realizability: depth-first cycle search in the compliant part.


def realizability(
    sys: System,
    init: Configuration,
    cs: CriticalSpec,
    budget: SearchBudget | None = None,
) -> Verdict:
    budget = budget or SearchBudget()
    _require_progressive(sys)
    dmax = compute_dmax(sys, init, cs)
    clock = _Clock(budget)
    stats = SearchStats(l_sigma_decimal=_l_sigma(sys, init, dmax))

    hit = is_critical(cs, init)
    if hit is not None:
        stats.elapsed_ms = clock.elapsed_ms()
        stats.states = 1
        return Verdict(
            REALIZABILITY,
            FAILS,
            stats,
            counterexample=Trace(init),
            critical_pair=hit[0],
            note="initial configuration is critical",
        )

    m = len(init)
    crit_memo: dict = {}

    def critical_key(key, config) -> bool:
        got = crit_memo.get(key)
        if got is None:
            got = is_critical(cs, config) is not None
            crit_memo[key] = got
        return got

    # Stack entries: [entry_label, entry_subst, config, key, run, successors, idx]
    GRAY, BLACK = 1, 2
    color: dict = {}
    init_key = abstract(init, dmax)
    stack = [
        [None, None, init, init_key, 0, lazy_successors(sys, init), 0]
    ]
    color[init_key] = GRAY
    gray_depth = {init_key: 0}
    seen_keys = {init_key}

    while stack:
        if clock.expired() or len(seen_keys) > budget.max_states:
            stats.states = len(seen_keys)
            stats.elapsed_ms = clock.elapsed_ms()
            stats.peak_frontier = max(stats.peak_frontier, len(stack))
            return Verdict(REALIZABILITY, UNKNOWN, stats, note="budget exhausted")
        stats.peak_frontier = max(stats.peak_frontier, len(stack))
        stats.max_depth = max(stats.max_depth, len(stack) - 1)
        top = stack[-1]
        succs = top[5]
        if top[6] >= len(succs):
            stack.pop()
            color[top[3]] = BLACK
            del gray_depth[top[3]]
            continue
        label, subst, child = succs[top[6]]
        top[6] += 1
        child_key = abstract(child, dmax)
        seen_keys.add(child_key)
        if critical_key(child_key, child):
            continue
        child_run = _check_run(top[4], label, m)
        state = color.get(child_key)
        if state == GRAY:
            # Cycle closed: stem up to the gray entry, cycle from there.
            at = gray_depth[child_key]
            stem_steps = tuple(
                TraceStep(e[0], e[1], e[2]) for e in stack[1 : at + 1]
            )
            cycle_steps = tuple(
                TraceStep(e[0], e[1], e[2]) for e in stack[at + 1 :]
            ) + (TraceStep(label, subst, child),)
            stem = Trace(init, stem_steps)
            cycle = Trace(stack[at][2], cycle_steps)
            if not any(s.label == TICK_LABEL for s in cycle_steps):
                _violate(
                    "instantaneous_run",
                    "witness cycle contains no clock advance",
                )
            stats.states = len(seen_keys)
            stats.elapsed_ms = clock.elapsed_ms()
            return Verdict(
                REALIZABILITY, HOLDS, stats, witness=Lasso(stem, cycle)
            )
        if state == BLACK:
            continue
        color[child_key] = GRAY
        gray_depth[child_key] = len(stack)
        stack.append(
            [label, subst, child, child_key, child_run, lazy_successors(sys, child), 0]
        )

    stats.states = len(seen_keys)
    stats.elapsed_ms = clock.elapsed_ms()
    return Verdict(
        REALIZABILITY,
        FAILS,
        stats,
        note="no compliant cycle reachable",
    )


# ---------------------------------------------------------------------------
# Breadth-first reachability of a critical state (shortest counterexample).


def _expand_layer(expand, layer, workers):
    if workers > 1 and len(layer) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(expand, layer))
    return [expand(node) for node in layer]


def _critical_reach(
    sys: System,
    init: Configuration,
    cs: CriticalSpec,
    budget: SearchBudget,
    clock: _Clock,
    stats: SearchStats,
    dmax: int,
    max_ticks: int | None = None,
) -> tuple[str, Trace | None, int | None, int]:
    """Layered BFS over the quotient (or over (config, ticks) pairs when a
    tick budget is given; the trace is cut at the last allowed clock
    advance). Returns (status, shortest critical trace, pair index,
    states); status is HOLDS (none reachable), FAILS (found), UNKNOWN
    (budget)."""
    m = len(init)

    def key_of(config, ticks):
        if max_ticks is None:
            return abstract(config, dmax)
        return (config, ticks)

    hit = is_critical(cs, init)
    if hit is not None:
        return FAILS, Trace(init), hit[0], 1

    init_key = key_of(init, 0)
    parents: dict = {init_key: None}
    # Node: (key, config, ticks, run)
    layer = [(init_key, init, 0, 0)]
    depth = 0

    def expand(node):
        _, config, ticks, run = node
        if max_ticks is not None and ticks >= max_ticks:
            return []
        out = []
        for label, subst, child in lazy_successors(sys, config):
            child_ticks = ticks + (1 if label == TICK_LABEL else 0)
            out.append((label, subst, child, child_ticks, run, node))
        return out

    while layer:
        if clock.expired() or len(parents) > budget.max_states:
            return UNKNOWN, None, None, len(parents)
        stats.peak_frontier = max(stats.peak_frontier, len(layer))
        depth += 1
        stats.max_depth = max(stats.max_depth, depth)
        next_layer = []
        for group in _expand_layer(expand, layer, budget.workers):
            for label, subst, child, child_ticks, run, parent_node in group:
                child_key = key_of(child, child_ticks)
                if child_key in parents:
                    continue
                parents[child_key] = (parent_node[0], label, subst, child)
                hit = is_critical(cs, child)
                if hit is not None:
                    return FAILS, _chain(parents, init, child_key), hit[0], len(parents)
                child_run = _check_run(run, label, m)
                next_layer.append((child_key, child, child_ticks, child_run))
        layer = next_layer
    return HOLDS, None, None, len(parents)


def _chain(parents, init, key) -> Trace:
    steps = []
    while parents[key] is not None:
        pkey, label, subst, config = parents[key]
        steps.append(TraceStep(label, subst, config))
        key = pkey
    steps.reverse()
    return Trace(init, tuple(steps))


def survivability(
    sys: System,
    init: Configuration,
    cs: CriticalSpec,
    budget: SearchBudget | None = None,
) -> Verdict:
    budget = budget or SearchBudget()
    _require_progressive(sys)
    dmax = compute_dmax(sys, init, cs)
    clock = _Clock(budget)
    stats = SearchStats(l_sigma_decimal=_l_sigma(sys, init, dmax))

    real = realizability(sys, init, cs, budget)
    stats.states = real.stats.states
    stats.max_depth = real.stats.max_depth
    stats.peak_frontier = real.stats.peak_frontier
    if real.outcome == UNKNOWN:
        stats.elapsed_ms = clock.elapsed_ms()
        return Verdict(SURVIVABILITY, UNKNOWN, stats, note=real.note)

    status, counterexample, pair, reach_states = _critical_reach(
        sys, init, cs, budget, clock, stats, dmax
    )
    stats.states += reach_states
    stats.elapsed_ms = clock.elapsed_ms()
    if status == UNKNOWN:
        return Verdict(SURVIVABILITY, UNKNOWN, stats, note="budget exhausted")
    if status == FAILS:
        return Verdict(
            SURVIVABILITY,
            FAILS,
            stats,
            counterexample=counterexample,
            critical_pair=pair,
        )
    if real.outcome == FAILS:
        raise EngineInvariantError(
            "no critical state reachable yet no compliant cycle found"
        )
    return Verdict(SURVIVABILITY, HOLDS, stats, witness=real.witness)


# ---------------------------------------------------------------------------
# Bounded modes: concrete search with a tick budget, cut at the n-th tick.


def _bounded_cap(m: int, n: int) -> int:
    return (n + 2) * m + n


def bounded_realizability(
    sys: System,
    init: Configuration,
    cs: CriticalSpec,
    n: int,
    budget: SearchBudget | None = None,
) -> Verdict:
    budget = budget or SearchBudget()
    _require_progressive(sys)
    if n < 1:
        raise VerifierInputError("tick budget must be at least 1")
    clock = _Clock(budget)
    dmax = compute_dmax(sys, init, cs)
    m = len(init)
    cap = _bounded_cap(m, n)
    stats = SearchStats(
        l_sigma_decimal=_l_sigma(sys, init, dmax), depth_cap=cap
    )

    hit = is_critical(cs, init)
    if hit is not None:
        stats.states = 1
        stats.elapsed_ms = clock.elapsed_ms()
        return Verdict(
            BOUNDED_REALIZABILITY,
            FAILS,
            stats,
            counterexample=Trace(init),
            critical_pair=hit[0],
            note="initial configuration is critical",
        )

    visited = {(init, 0)}
    # Stack entries: [label, subst, config, ticks, run, successors, idx]
    stack = [[None, None, init, 0, 0, lazy_successors(sys, init), 0]]
    while stack:
        if clock.expired() or len(visited) > budget.max_states:
            stats.states = len(visited)
            stats.elapsed_ms = clock.elapsed_ms()
            return Verdict(
                BOUNDED_REALIZABILITY, UNKNOWN, stats, note="budget exhausted"
            )
        stats.peak_frontier = max(stats.peak_frontier, len(stack))
        depth = len(stack) - 1
        stats.max_depth = max(stats.max_depth, depth)
        if depth > cap:
            _violate(
                "bounded_depth",
                f"search depth {depth} exceeds the cap {cap}",
            )
        top = stack[-1]
        succs = top[5]
        if top[6] >= len(succs):
            stack.pop()
            continue
        label, subst, child = succs[top[6]]
        top[6] += 1
        child_ticks = top[3] + (1 if label == TICK_LABEL else 0)
        if is_critical(cs, child) is not None:
            continue
        child_run = _check_run(top[4], label, m)
        if child_ticks == n:
            steps = tuple(TraceStep(e[0], e[1], e[2]) for e in stack[1:]) + (
                TraceStep(label, subst, child),
            )
            stats.states = len(visited)
            stats.elapsed_ms = clock.elapsed_ms()
            return Verdict(
                BOUNDED_REALIZABILITY, HOLDS, stats, witness=Trace(init, steps)
            )
        node = (child, child_ticks)
        if node in visited:
            continue
        visited.add(node)
        stack.append(
            [label, subst, child, child_ticks, child_run, lazy_successors(sys, child), 0]
        )

    stats.states = len(visited)
    stats.elapsed_ms = clock.elapsed_ms()
    return Verdict(
        BOUNDED_REALIZABILITY,
        FAILS,
        stats,
        note=f"no compliant trace with exactly {n} clock advances",
    )


def bounded_survivability(
    sys: System,
    init: Configuration,
    cs: CriticalSpec,
    n: int,
    budget: SearchBudget | None = None,
) -> Verdict:
    budget = budget or SearchBudget()
    _require_progressive(sys)
    if n < 1:
        raise VerifierInputError("tick budget must be at least 1")
    clock = _Clock(budget)
    dmax = compute_dmax(sys, init, cs)
    m = len(init)
    cap = _bounded_cap(m, n)
    stats = SearchStats(
        l_sigma_decimal=_l_sigma(sys, init, dmax), depth_cap=cap
    )

    real = bounded_realizability(sys, init, cs, n, budget)
    stats.states = real.stats.states
    stats.max_depth = real.stats.max_depth
    stats.peak_frontier = real.stats.peak_frontier
    if real.outcome == UNKNOWN:
        stats.elapsed_ms = clock.elapsed_ms()
        return Verdict(BOUNDED_SURVIVABILITY, UNKNOWN, stats, note=real.note)

    status, counterexample, pair, reach_states = _critical_reach(
        sys, init, cs, budget, clock, stats, dmax, max_ticks=n
    )
    stats.states += reach_states
    if stats.max_depth > cap:
        _violate(
            "bounded_depth",
            f"search depth {stats.max_depth} exceeds the cap {cap}",
        )
    stats.elapsed_ms = clock.elapsed_ms()
    if real.outcome == FAILS:
        # Not realizable; for a progressive system every trace then hits a
        # critical state within the budget, so the reach search supplies
        # the counterexample (unless it ran out of budget first).
        if status == HOLDS:
            raise EngineInvariantError(
                "no critical state reachable yet no compliant bounded trace"
            )
        if status == UNKNOWN:
            return Verdict(
                BOUNDED_SURVIVABILITY, UNKNOWN, stats, note="budget exhausted"
            )
        return Verdict(
            BOUNDED_SURVIVABILITY,
            FAILS,
            stats,
            counterexample=counterexample,
            critical_pair=pair,
            note="not realizable within the tick budget",
        )
    if status == UNKNOWN:
        return Verdict(BOUNDED_SURVIVABILITY, UNKNOWN, stats, note="budget exhausted")
    if status == FAILS:
        return Verdict(
            BOUNDED_SURVIVABILITY,
            FAILS,
            stats,
            counterexample=counterexample,
            critical_pair=pair,
        )
    return Verdict(BOUNDED_SURVIVABILITY, HOLDS, stats, witness=real.witness)


# ---------------------------------------------------------------------------
# Independent trace validation.


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    failed_index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_trace(
    sys: System,
    cs: CriticalSpec,
    t: Trace,
    expected_ticks: int | None = None,
    expect_critical_end: bool = False,
) -> ValidationResult:
    """Replay every step, enforce lazy sampling at every clock advance and
    compliance of every configuration (with ``expect_critical_end`` the
    final configuration must instead be critical, as in a counterexample).
    The failing step index counts from 0; -1 denotes the initial
    configuration."""
    by_name: dict[str, list[Rule]] = {}
    for r in sys.rules:
        by_name.setdefault(r.name, []).append(r)

    def compliance(config, index, is_last) -> ValidationResult | None:
        crit = is_critical(cs, config) is not None
        if expect_critical_end and is_last:
            if not crit:
                return ValidationResult(False, index, "final configuration not critical")
            return None
        if crit:
            return ValidationResult(False, index, "critical configuration in trace")
        return None

    bad = compliance(t.init, -1, is_last=not t.steps)
    if bad is not None:
        return bad

    current = t.init
    ticks = 0
    for i, step in enumerate(t.steps):
        if step.label == TICK_LABEL:
            if not must_tick(sys, current):
                return ValidationResult(
                    False, i, "clock advanced while an instantaneous rule was enabled"
                )
            replayed = tick(current)
            ticks += 1
        else:
            candidates = by_name.get(step.label, [])
            if not candidates:
                return ValidationResult(False, i, f"unknown rule {step.label!r}")
            if step.subst is None:
                return ValidationResult(False, i, "missing substitution")
            replayed = None
            for r in candidates:
                try:
                    got = apply_rule(r, current, step.subst, sys.max_fact_size)
                except TmsrError:
                    continue
                if got == step.config:
                    replayed = got
                    break
            if replayed is None:
                return ValidationResult(
                    False, i, f"step does not replay under rule {step.label!r}"
                )
        if replayed != step.config:
            return ValidationResult(False, i, "recorded configuration differs")
        current = replayed
        bad = compliance(current, i, is_last=(i == len(t.steps) - 1))
        if bad is not None:
            return bad

    if expected_ticks is not None and ticks != expected_ticks:
        return ValidationResult(
            False,
            len(t.steps) - 1 if t.steps else -1,
            f"expected {expected_ticks} clock advances, found {ticks}",
        )
    return ValidationResult(True)


def validate_lasso(
    sys: System,
    cs: CriticalSpec,
    lasso: Lasso,
    dmax: int,
) -> ValidationResult:
    """Certify a realizability witness: stem and cycle replay compliantly,
    the cycle endpoints are equivalent and the cycle advances the clock."""
    got = validate_trace(sys, cs, lasso.stem)
    if not got:
        return got
    if lasso.stem.final != lasso.cycle.init:
        return ValidationResult(False, None, "cycle does not start at the stem end")
    got = validate_trace(sys, cs, lasso.cycle)
    if not got:
        return got
    if not lasso.cycle.steps:
        return ValidationResult(False, None, "empty cycle")
    if abstract(lasso.cycle.init, dmax) != abstract(lasso.cycle.final, dmax):
        return ValidationResult(False, None, "cycle endpoints are not equivalent")
    if not any(s.label == TICK_LABEL for s in lasso.cycle.steps):
        return ValidationResult(False, None, "cycle contains no clock advance")
    return ValidationResult(True)
