"""JSON verdict reports: emission and re-ingestion for replay.

Schema (stable): mode, outcome, optional ticks, statistics (states,
peak_frontier, max_depth, optional depth_cap, elapsed_ms,
l_sigma_decimal), init (canonical config array), trace (step array,
present for bounded witnesses and for counterexamples), lasso (stem and
cycle step arrays, present for unbounded holds), optional critical_pair
and note, version and input digest. Configurations always serialize in
canonical order. All fields other than elapsed_ms are deterministic for
single-worker runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .search import Lasso, Trace, TraceStep, Verdict
from .specfile import SpecFile, SpecParseError, parse_fact_text, parse_term_text
from .terms import (
    Configuration,
    Substitution,
    TimestampedFact,
    TmsrError,
    Var,
    fact_text,
    term_sort,
    term_text,
)

TOOL_VERSION = "0.1.0"


class ReportError(TmsrError):
    pass


def _config_json(c: Configuration) -> list[dict]:
    return [{"fact": fact_text(tf.fact), "ts": tf.ts} for tf in c.facts]


def _subst_json(s: Substitution | None) -> dict | None:
    if s is None:
        return None
    return {
        "times": {name: value for name, value in s.times},
        "terms": [
            {"var": v.name, "sort": v.sort, "term": term_text(t)}
            for v, t in s.terms
        ],
    }


def _steps_json(steps) -> list[dict]:
    return [
        {
            "label": st.label,
            "subst": _subst_json(st.subst),
            "config": _config_json(st.config),
        }
        for st in steps
    ]


def input_digest(spec_text: str) -> str:
    return hashlib.sha256(spec_text.encode()).hexdigest()


@dataclass(frozen=True)
class VerdictReport:
    verdict: Verdict
    ticks: int | None = None
    digest: str = ""


def report_json(report: VerdictReport) -> dict:
    v = report.verdict
    out: dict = {
        "mode": v.mode,
        "outcome": v.outcome,
    }
    if report.ticks is not None:
        out["ticks"] = report.ticks
    stats = {
        "states": v.stats.states,
        "peak_frontier": v.stats.peak_frontier,
        "max_depth": v.stats.max_depth,
        "elapsed_ms": round(v.stats.elapsed_ms, 3),
        "l_sigma_decimal": v.stats.l_sigma_decimal,
    }
    if v.stats.depth_cap is not None:
        stats["depth_cap"] = v.stats.depth_cap
    out["statistics"] = stats

    trace = None
    if v.outcome == "holds" and isinstance(v.witness, Trace):
        trace = v.witness
    elif v.counterexample is not None:
        trace = v.counterexample
    if trace is not None:
        out["init"] = _config_json(trace.init)
        out["trace"] = _steps_json(trace.steps)
    if isinstance(v.witness, Lasso):
        out["init"] = _config_json(v.witness.stem.init)
        out["lasso"] = {
            "stem": _steps_json(v.witness.stem.steps),
            "cycle": _steps_json(v.witness.cycle.steps),
        }
    if v.critical_pair is not None:
        out["critical_pair"] = v.critical_pair
    if v.note:
        out["note"] = v.note
    out["version"] = TOOL_VERSION
    out["input_digest"] = report.digest
    return out


def emit_report(report: VerdictReport) -> str:
    return json.dumps(report_json(report), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Re-ingestion


@dataclass(frozen=True)
class ParsedReport:
    mode: str
    outcome: str
    ticks: int | None
    trace: Trace | None
    lasso: Lasso | None


def _config_from_json(spec: SpecFile, arr) -> Configuration:
    facts = []
    for entry in arr:
        fact = parse_fact_text(spec, entry["fact"])
        facts.append(TimestampedFact(fact, int(entry["ts"])))
    return Configuration(tuple(facts))


def _subst_from_json(spec: SpecFile, obj) -> Substitution | None:
    if obj is None:
        return None
    times = {str(k): int(v) for k, v in obj.get("times", {}).items()}
    terms = {}
    for entry in obj.get("terms", []):
        var = Var(entry["var"], entry["sort"])
        term = parse_term_text(spec, entry["term"], entry["sort"])
        sig = spec.system.signature
        if term_sort(sig, term) != var.sort:
            raise ReportError(f"term {entry['term']!r} is not of sort {var.sort!r}")
        terms[var] = term
    return Substitution.of(times, terms)


def _steps_from_json(spec: SpecFile, arr) -> tuple[TraceStep, ...]:
    steps = []
    for entry in arr:
        steps.append(
            TraceStep(
                entry["label"],
                _subst_from_json(spec, entry.get("subst")),
                _config_from_json(spec, entry["config"]),
            )
        )
    return tuple(steps)


def parse_report(text: str, spec: SpecFile) -> ParsedReport:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"not valid JSON: {exc}") from None
    try:
        mode = obj["mode"]
        outcome = obj["outcome"]
    except KeyError as exc:
        raise ReportError(f"missing field {exc.args[0]!r}") from None
    ticks = obj.get("ticks")
    trace = None
    lasso = None
    try:
        if "lasso" in obj:
            init = _config_from_json(spec, obj["init"])
            stem = Trace(init, _steps_from_json(spec, obj["lasso"]["stem"]))
            cycle = Trace(stem.final, _steps_from_json(spec, obj["lasso"]["cycle"]))
            lasso = Lasso(stem, cycle)
        elif "trace" in obj:
            init = _config_from_json(spec, obj["init"])
            trace = Trace(init, _steps_from_json(spec, obj["trace"]))
    except (KeyError, SpecParseError, TmsrError) as exc:
        raise ReportError(f"malformed trace: {exc}") from None
    return ParsedReport(mode, outcome, ticks, trace, lasso)
