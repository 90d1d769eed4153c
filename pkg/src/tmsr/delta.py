"""Finite quotient of configurations by truncated time differences.

Two configurations are equivalent for a truncation bound when their
canonically ordered facts coincide and so do the pairwise-adjacent
timestamp gaps, with every gap above the bound collapsed to infinity.
For balanced systems the quotient is finite and bisimilar to the concrete
transition system, so the searchers key their visited sets on it.

Canonical serialization (stable, used for hashing and debugging dumps):
facts in canonical order printed in their textual form, joined by the gap
values, e.g. ``P(p1,1,1) ~inf~ Dr(d1,0,0,2) ~0~ Time``. Infinity prints
as ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rules import (
    CriticalSpec,
    Substitution,
    System,
    TICK_LABEL,
    apply_rule,
    enabled,
    is_critical,
    tick,
)
from .terms import Configuration, Fact, TimestampedFact, fact_text, term_text

INFINITY = math.inf

DeltaGap = float  # a natural number <= the bound, or INFINITY


@dataclass(frozen=True)
class DeltaConfig:
    """Alternating fact/gap sequence with the bound it was built for."""

    facts: tuple[Fact, ...]
    gaps: tuple[DeltaGap, ...]
    dmax: int

    def __post_init__(self) -> None:
        if len(self.facts) == 0:
            raise ValueError("empty delta configuration")
        if len(self.gaps) != len(self.facts) - 1:
            raise ValueError("gap count must be fact count minus one")
        for g in self.gaps:
            if not math.isinf(g) and not (0 <= g <= self.dmax):
                raise ValueError(f"gap {g} outside 0..{self.dmax}")
        # Zero-gap runs carry the canonical tie-break; out-of-order ties
        # would not survive a reconstruct/abstract round trip.
        for a, g, b in zip(self.facts, self.gaps, self.facts[1:]):
            if g == 0 and fact_text(a) > fact_text(b):
                raise ValueError(
                    f"facts {fact_text(a)} and {fact_text(b)} break the "
                    "canonical tie order"
                )

    def text(self) -> str:
        parts = [fact_text(self.facts[0])]
        for g, f in zip(self.gaps, self.facts[1:]):
            parts.append(f"~{'inf' if math.isinf(g) else int(g)}~")
            parts.append(fact_text(f))
        return " ".join(parts)


def abstract(c: Configuration, dmax: int) -> DeltaConfig:
    """Quotient representative of c: canonical facts plus truncated gaps."""
    if dmax < 1:
        raise ValueError("truncation bound must be at least 1")
    seq = c.facts
    facts = tuple(tf.fact for tf in seq)
    gaps = []
    for a, b in zip(seq, seq[1:]):
        diff = b.ts - a.ts
        gaps.append(diff if diff <= dmax else INFINITY)
    return DeltaConfig(facts, tuple(gaps), dmax)


def representative(d: DeltaConfig) -> Configuration:
    """A concrete configuration abstracting back to d: first fact at 0,
    each infinite gap reconstructed as dmax + 1 (the smallest faithful
    witness for any guard offset within the bound)."""
    ts = 0
    out = [TimestampedFact(d.facts[0], 0)]
    for g, f in zip(d.gaps, d.facts[1:]):
        ts += d.dmax + 1 if math.isinf(g) else int(g)
        out.append(TimestampedFact(f, ts))
    return Configuration(tuple(out))


StepLabel = tuple[str, tuple[tuple[str, str], ...]]
"""Rule name (or "tick") plus the substitution restricted to term
variables, rendered textually."""


def term_label(rule_name: str, s: Substitution | None) -> StepLabel:
    if s is None:
        return (rule_name, ())
    return (
        rule_name,
        tuple((v.name, term_text(t)) for v, t in s.term_items()),
    )


def delta_step(
    sys: System, cs: CriticalSpec, d: DeltaConfig
) -> list[tuple[StepLabel, DeltaConfig]]:
    """Successors under lazy time sampling: one per enabled instantaneous
    instance, or the single clock advance when none is enabled. Computed
    on a representative; any representative yields the same set. Entries
    may repeat when matches differing only in their time bindings lead to
    the same class."""
    c = representative(d)
    pairs = enabled(sys, c)
    if pairs:
        return [
            (
                term_label(rule.name, s),
                abstract(apply_rule(rule, c, s, sys.max_fact_size), d.dmax),
            )
            for rule, s in pairs
        ]
    return [((TICK_LABEL, ()), abstract(tick(c), d.dmax))]


def delta_is_critical(cs: CriticalSpec, d: DeltaConfig) -> bool:
    """Criticality of the class; invariant across representatives as long
    as every constraint offset is within the bound."""
    return is_critical(cs, representative(d)) is not None


def count_bound(
    fact_count: int,
    size_bound: int,
    dmax: int,
    predicate_count: int,
    symbol_count: int,
) -> int:
    """Exact upper bound on the number of distinct delta configurations:
    (dmax+2)^(m-1) * J^m * (E+2mk)^(mk) for m facts of size at most k over
    J predicates and E constant and function symbols."""
    m, k, j, e = fact_count, size_bound, predicate_count, symbol_count
    if min(m, k, dmax, j, e) < 1:
        raise ValueError("all counting-bound arguments must be at least 1")
    return (dmax + 2) ** (m - 1) * j**m * (e + 2 * m * k) ** (m * k)
