import json
import random

from support import random_progressive_system

from tmsr import (
    FAILS,
    HOLDS,
    SearchBudget,
    bounded_realizability,
    bounded_survivability,
    compute_dmax,
    realizability,
    survivability,
    validate_lasso,
    validate_trace,
)
from tmsr.reports import (
    VerdictReport,
    emit_report,
    input_digest,
    parse_report,
    report_json,
)
from tmsr.specfile import SpecFile, parse_spec, print_spec
from tmsr.scenarios import Cnf3, DroneParams, gen_3sat, gen_drone


def spec_of(system, init, critical, ticks=None):
    return SpecFile(system, init, critical, ticks)


class TestEmission:
    def test_configs_serialize_in_canonical_order(self):
        spec = gen_drone(DroneParams(recency=2))
        v = bounded_survivability(spec.system, spec.init, spec.critical, 8)
        doc = report_json(VerdictReport(v, ticks=8, digest="x"))
        for entry in [doc["init"]] + [s["config"] for s in doc["trace"]]:
            keys = [(e["ts"], e["fact"]) for e in entry]
            assert keys == sorted(keys)

    def test_digest_is_stable(self):
        assert input_digest("abc") == input_digest("abc")
        assert input_digest("abc") != input_digest("abd")

    def test_statistics_block(self):
        spec = gen_drone(DroneParams(recency=2))
        v = bounded_survivability(spec.system, spec.init, spec.critical, 8)
        doc = report_json(VerdictReport(v, ticks=8, digest=""))
        stats = doc["statistics"]
        assert set(stats) >= {"states", "elapsed_ms", "l_sigma_decimal", "peak_frontier"}
        assert json.loads(emit_report(VerdictReport(v, ticks=8, digest="")))


class TestRoundTrips:
    def test_random_verdict_traces_revalidate_after_reingestion(self):
        rng = random.Random(60601)
        revalidated = 0
        for _ in range(40):
            sysm, init, cs = random_progressive_system(rng)
            spec = spec_of(sysm, init, cs)
            for verdict in (
                survivability(sysm, init, cs),
                bounded_survivability(sysm, init, cs, 2),
                bounded_realizability(sysm, init, cs, 2),
            ):
                text = emit_report(VerdictReport(verdict, digest="d"))
                parsed = parse_report(text, spec)
                assert parsed.outcome == verdict.outcome
                if parsed.trace is not None:
                    expect_critical = parsed.outcome == FAILS
                    assert validate_trace(
                        sysm, cs, parsed.trace, expect_critical_end=expect_critical
                    ), text
                    revalidated += 1
                if parsed.lasso is not None:
                    dmax = compute_dmax(sysm, init, cs)
                    assert validate_lasso(sysm, cs, parsed.lasso, dmax)
                    revalidated += 1
        assert revalidated >= 30

    def test_lasso_round_trip_with_substitutions(self):
        sat = gen_3sat(Cnf3(2, ((1, 2, 2),)))
        v = realizability(sat.system, sat.init, sat.critical)
        assert v.outcome == HOLDS
        spec = spec_of(sat.system, sat.init, sat.critical)
        parsed = parse_report(emit_report(VerdictReport(v, digest="")), spec)
        assert parsed.lasso is not None
        dmax = compute_dmax(sat.system, sat.init, sat.critical)
        assert validate_lasso(sat.system, sat.critical, parsed.lasso, dmax)

    def test_spec_text_digest_matches_cli_convention(self):
        spec = gen_drone(DroneParams(recency=2))
        text = print_spec(spec)
        again = parse_spec(text)
        assert print_spec(again) == text
        assert input_digest(text) == input_digest(print_spec(again))
