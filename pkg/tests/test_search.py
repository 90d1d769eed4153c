import random

import pytest

from support import oracle_verdicts, random_progressive_system

from tmsr import (
    Configuration,
    CreatedFact,
    CriticalPair,
    CriticalSpec,
    FAILS,
    Fact,
    HOLDS,
    Lasso,
    RulePattern,
    SearchBudget,
    Trace,
    TraceStep,
    TimestampedFact,
    UNKNOWN,
    VerifierInputError,
    abstract,
    bounded_realizability,
    bounded_survivability,
    compute_dmax,
    expand_rule,
    invariant_counters,
    make_signature,
    make_system,
    realizability,
    survivability,
    validate_lasso,
    validate_trace,
)
from tmsr.rules import TICK_LABEL
from tmsr.scenarios import DroneParams, gen_drone


def ts(fact, t):
    return TimestampedFact(fact, t)


def tick_only_system():
    sig = make_signature((), {"F": ()}, {}, {})
    sysm = make_system(sig, [], max_fact_size=1)
    init = Configuration((ts(Fact("Time"), 0),))
    return sysm, init, CriticalSpec()


def branching_system():
    """One fact, two rules: keep cycling, or decay into a flagged fact."""
    sig = make_signature((), {"A": (), "Bad": ()}, {}, {})
    good = expand_rule("keep", "T", [], [RulePattern(Fact("A"), "T1")], [CreatedFact(Fact("A"), 1)], [])
    bad = expand_rule("drop", "T", [], [RulePattern(Fact("A"), "T1")], [CreatedFact(Fact("Bad"), 1)], [])
    sysm = make_system(sig, list(good) + list(bad))
    init = Configuration((ts(Fact("Time"), 0), ts(Fact("A"), 0)))
    cs = CriticalSpec((CriticalPair("flagged", (RulePattern(Fact("Bad"), "Tb"),), ()),))
    return sysm, init, cs


def burst_system(width):
    """Time plus `width` independent facts, each re-created every tick."""
    sig = make_signature((), {f"A{i}": () for i in range(width)}, {}, {})
    rules = []
    for i in range(width):
        rules.extend(
            expand_rule(
                f"r{i}", "T", [],
                [RulePattern(Fact(f"A{i}"), "Ti")],
                [CreatedFact(Fact(f"A{i}"), 1)],
                [],
            )
        )
    init = Configuration(
        (ts(Fact("Time"), 0),) + tuple(ts(Fact(f"A{i}"), 0) for i in range(width))
    )
    return make_system(sig, rules), init, CriticalSpec()


class TestBoundedRealizability:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_tick_only_holds_for_any_budget(self, n):
        sysm, init, cs = tick_only_system()
        v = bounded_realizability(sysm, init, cs, n)
        assert v.outcome == HOLDS
        assert v.witness.tick_count() == n
        assert all(s.label == TICK_LABEL for s in v.witness.steps)

    def test_critical_init_fails_with_empty_trace(self):
        sysm, init, _ = tick_only_system()
        cs = CriticalSpec((CriticalPair("now", (RulePattern(Fact("Time"), "T"),), ()),))
        for n in (1, 3):
            v = bounded_realizability(sysm, init, cs, n)
            assert v.outcome == FAILS
            assert v.counterexample is not None and v.counterexample.steps == ()
            assert v.critical_pair == 0

    def test_tick_budget_must_be_positive(self):
        sysm, init, cs = tick_only_system()
        with pytest.raises(VerifierInputError):
            bounded_realizability(sysm, init, cs, 0)

    def test_non_progressive_system_rejected(self):
        sig = make_signature((), {"F": ()}, {}, {})
        (r,) = expand_rule("now", "T", [], [RulePattern(Fact("F"), "T1")], [CreatedFact(Fact("F"), 0)], [])
        sysm = make_system(sig, [r])
        init = Configuration((ts(Fact("Time"), 0), ts(Fact("F"), 0)))
        with pytest.raises(VerifierInputError):
            bounded_realizability(sysm, init, CriticalSpec(), 1)

    def test_budget_exhaustion_is_unknown(self):
        spec = gen_drone(DroneParams(recency=6))
        v = bounded_realizability(
            spec.system, spec.init, spec.critical, 24, SearchBudget(max_states=5)
        )
        assert v.outcome == UNKNOWN


class TestBoundedSurvivability:
    def test_tick_only_holds(self):
        sysm, init, cs = tick_only_system()
        assert bounded_survivability(sysm, init, cs, 3).outcome == HOLDS

    def test_single_bad_branch_fails_with_shortest_counterexample(self):
        sysm, init, cs = branching_system()
        real = bounded_realizability(sysm, init, cs, 2)
        assert real.outcome == HOLDS  # the keep branch is compliant
        v = bounded_survivability(sysm, init, cs, 2)
        assert v.outcome == FAILS
        cex = v.counterexample
        assert cex is not None
        assert cex.steps[-1].label == "drop"
        assert len(cex.steps) == 1  # drop immediately, before any tick
        assert validate_trace(sysm, cs, cex, expect_critical_end=True)

    def test_unreachable_critical_pattern_holds(self):
        sysm, init, _ = tick_only_system()
        cs = CriticalSpec((CriticalPair("never", (RulePattern(Fact("F"), "Tf"),), ()),))
        assert bounded_survivability(sysm, init, cs, 4).outcome == HOLDS

    def test_monotone_in_the_tick_budget(self):
        spec = gen_drone(DroneParams(recency=6))
        outcomes = {}
        for n in (6, 12, 24):
            outcomes[n] = bounded_survivability(
                spec.system, spec.init, spec.critical, n
            ).outcome
        assert outcomes[24] == HOLDS
        assert outcomes[12] == HOLDS and outcomes[6] == HOLDS

    def test_workers_do_not_change_the_verdict(self):
        spec = gen_drone(DroneParams(recency=2))
        v1 = bounded_survivability(spec.system, spec.init, spec.critical, 8)
        v2 = bounded_survivability(
            spec.system, spec.init, spec.critical, 8, SearchBudget(workers=3)
        )
        assert v1.outcome == v2.outcome == FAILS
        assert len(v1.counterexample.steps) == len(v2.counterexample.steps)


class TestRealizability:
    def test_tick_only_lasso_is_a_self_loop(self):
        sysm, init, cs = tick_only_system()
        v = realizability(sysm, init, cs)
        assert v.outcome == HOLDS
        lasso = v.witness
        assert isinstance(lasso, Lasso)
        assert lasso.stem.steps == ()
        assert len(lasso.cycle.steps) == 1
        assert lasso.cycle.steps[0].label == TICK_LABEL
        assert validate_lasso(sysm, cs, lasso, compute_dmax(sysm, init, cs))

    def test_every_branch_going_critical_fails(self):
        spec = gen_drone(DroneParams(points=((0, 0),), recency=2, energy_cap=6))
        v = realizability(spec.system, spec.init, spec.critical)
        assert v.outcome == FAILS

    def test_witness_cycles_always_advance_the_clock(self):
        rng = random.Random(2024)
        seen_holds = 0
        for _ in range(40):
            sysm, init, cs = random_progressive_system(rng)
            v = realizability(sysm, init, cs)
            if v.outcome == HOLDS:
                seen_holds += 1
                assert any(s.label == TICK_LABEL for s in v.witness.cycle.steps)
                dmax = compute_dmax(sysm, init, cs)
                assert validate_lasso(sysm, cs, v.witness, dmax)
        assert seen_holds > 5

    def test_critical_init_fails_immediately(self):
        sysm, init, _ = tick_only_system()
        cs = CriticalSpec((CriticalPair("now", (RulePattern(Fact("Time"), "T"),), ()),))
        v = realizability(sysm, init, cs)
        assert v.outcome == FAILS and v.critical_pair == 0


class TestSurvivability:
    def test_tick_only_holds(self):
        sysm, init, cs = tick_only_system()
        assert survivability(sysm, init, cs).outcome == HOLDS

    def test_deterministic_system_matches_realizability(self):
        for M in (1, 2):
            spec = gen_drone(DroneParams(points=((1, 1),), recency=M, energy_cap=2))
            r = realizability(spec.system, spec.init, spec.critical).outcome
            s = survivability(spec.system, spec.init, spec.critical).outcome
            assert r == s

    def test_bad_branch_fails_with_counterexample(self):
        sysm, init, cs = branching_system()
        assert realizability(sysm, init, cs).outcome == HOLDS
        v = survivability(sysm, init, cs)
        assert v.outcome == FAILS
        assert v.counterexample is not None
        assert validate_trace(sysm, cs, v.counterexample, expect_critical_end=True)

    def test_holding_survivability_implies_realizability(self):
        rng = random.Random(4096)
        for _ in range(40):
            sysm, init, cs = random_progressive_system(rng)
            s = survivability(sysm, init, cs).outcome
            if s == HOLDS:
                assert realizability(sysm, init, cs).outcome == HOLDS

    def test_agrees_with_exhaustive_oracle(self):
        rng = random.Random(11111)
        for _ in range(50):
            sysm, init, cs = random_progressive_system(rng)
            dmax = compute_dmax(sysm, init, cs)
            want_real, want_surv = oracle_verdicts(sysm, init, cs, dmax)
            assert realizability(sysm, init, cs).outcome == (HOLDS if want_real else FAILS)
            assert survivability(sysm, init, cs).outcome == (HOLDS if want_surv else FAILS)


class TestValidateTrace:
    def test_searcher_witnesses_validate(self):
        sysm, init, cs = branching_system()
        v = bounded_realizability(sysm, init, cs, 3)
        assert validate_trace(sysm, cs, v.witness, expected_ticks=3)

    def test_early_tick_rejected(self):
        sysm, init, cs = branching_system()
        bad = Trace(
            init,
            (TraceStep(TICK_LABEL, None, Configuration(
                (ts(Fact("Time"), 1), ts(Fact("A"), 0))
            )),),
        )
        result = validate_trace(sysm, cs, bad)
        assert not result.ok and result.failed_index == 0
        assert "instantaneous" in result.message

    def test_tampered_configuration_rejected(self):
        sysm, init, cs = tick_only_system()
        bad = Trace(
            init,
            (TraceStep(TICK_LABEL, None, Configuration((ts(Fact("Time"), 5),))),),
        )
        result = validate_trace(sysm, cs, bad)
        assert not result.ok and result.failed_index == 0

    def test_tick_count_enforced(self):
        sysm, init, cs = tick_only_system()
        v = bounded_realizability(sysm, init, cs, 2)
        assert validate_trace(sysm, cs, v.witness, expected_ticks=2)
        result = validate_trace(sysm, cs, v.witness, expected_ticks=3)
        assert not result.ok and "clock advances" in result.message

    def test_longest_legal_trace_under_the_depth_cap(self):
        # With 5 facts and 4 ticks the step cap is (4+2)*5+4 = 34; the
        # longest lazy trace cut at the 4th tick has 4*(5-1)+4 = 20 steps.
        sysm, init, cs = burst_system(4)
        assert len(init) == 5
        v = bounded_realizability(sysm, init, cs, 4)
        assert v.outcome == HOLDS
        assert len(v.witness.steps) == 20 <= 34
        assert v.stats.depth_cap == 34
        assert v.stats.max_depth <= 34
        assert validate_trace(sysm, cs, v.witness, expected_ticks=4)
        # the same trace is rejected as soon as a critical spec matches it
        poisoned = CriticalSpec(
            (CriticalPair("no-a0", (RulePattern(Fact("A0"), "Ta"),), ()),)
        )
        assert not validate_trace(sysm, poisoned, v.witness, expected_ticks=4)

    def test_extension_past_the_final_tick_still_replays(self):
        from tmsr import apply_rule, enabled

        sysm, init, cs = burst_system(4)
        v = bounded_realizability(sysm, init, cs, 4)
        config = v.witness.final
        steps = list(v.witness.steps)
        for _ in range(4):
            pairs = enabled(sysm, config)
            r, s = pairs[0]
            config = apply_rule(r, config, s, sysm.max_fact_size)
            steps.append(TraceStep(r.name, s, config))
        longer = Trace(init, tuple(steps))
        assert len(longer.steps) == 24
        assert validate_trace(sysm, cs, longer, expected_ticks=4)


class TestInvariants:
    def test_no_structural_violations_recorded(self):
        assert invariant_counters["instantaneous_run"] == 0
        assert invariant_counters["bounded_depth"] == 0

    def test_statistics_are_populated(self):
        sysm, init, cs = branching_system()
        v = survivability(sysm, init, cs)
        assert v.stats.states > 0
        assert v.stats.l_sigma_decimal is not None
        assert int(v.stats.l_sigma_decimal) > 0
