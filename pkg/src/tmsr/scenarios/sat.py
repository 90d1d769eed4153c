"""Reduction from 3-CNF satisfiability to tick-bounded realizability.

The built system first rewrites every undecided variable fact into a
true or false assignment fact (one instantaneous step per variable, all
before the first clock advance), then walks the clause list one clause
per tick: the pending-suffix fact is rewritten to the next suffix
whenever some literal of its head clause is satisfied by an assignment
fact. A configuration is critical when the pending suffix's head clause
is already falsified: all its falsifying assignment facts are present.
With n clauses, a compliant trace with exactly n clock advances exists
iff the formula is satisfiable.

Rule count is 2p + 6n for p variables and n clauses: two assignment
rules per variable, and per clause one reduction rule per literal
position whose at-least-as-old-as guard on the preserved assignment fact
loads as two alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..rules import (
    CreatedFact,
    CriticalPair,
    CriticalSpec,
    GE,
    Rule,
    RulePattern,
    TimeConstraint,
    expand_rule,
    make_system,
)
from ..specfile import SpecFile
from ..terms import (
    Configuration,
    Fact,
    TIME,
    TimestampedFact,
    TmsrError,
    make_signature,
)


class CnfError(TmsrError):
    pass


@dataclass(frozen=True)
class Cnf3:
    """3-CNF with 1-based signed literals, e.g. (x1 or not x2 or x3) is
    (1, -2, 3)."""

    variables: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.variables < 1:
            raise CnfError("need at least one variable")
        if not self.clauses:
            raise CnfError("need at least one clause")
        for clause in self.clauses:
            if len(clause) != 3:
                raise CnfError("clauses carry exactly three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.variables:
                    raise CnfError(f"literal {lit} out of range")


def _suffix_pred(j: int, n: int) -> str:
    """Pending-suffix fact: clauses j.. remain; the empty tail is Itop."""
    return "Itop" if j > n else f"I{j}"


def gen_3sat(f: Cnf3) -> SpecFile:
    p, n = f.variables, len(f.clauses)
    preds: dict[str, tuple[str, ...]] = {"Start": ()}
    for i in range(1, p + 1):
        preds[f"V{i}"] = ()
        preds[f"A{i}"] = ()
        preds[f"B{i}"] = ()
    for j in range(1, n + 1):
        preds[f"I{j}"] = ()
    preds["Itop"] = ()
    sig = make_signature((), preds, {}, {})

    rules: list[Rule] = []
    for i in range(1, p + 1):
        for value, pred in (("true", f"A{i}"), ("false", f"B{i}")):
            rules.extend(
                expand_rule(
                    f"set{i}-{value}",
                    "T",
                    [],
                    [RulePattern(Fact(f"V{i}"), "Tv")],
                    [CreatedFact(Fact(pred), 1)],
                    [TimeConstraint(GE, "T", "Tv")],
                )
            )
    for j, clause in enumerate(f.clauses, start=1):
        for pos, lit in enumerate(clause, start=1):
            key = f"A{abs(lit)}" if lit > 0 else f"B{abs(lit)}"
            rules.extend(
                expand_rule(
                    f"clause{j}-lit{pos}",
                    "T",
                    [RulePattern(Fact(key), "Ta")],
                    [RulePattern(Fact(f"I{j}"), "Tc")],
                    [CreatedFact(Fact(_suffix_pred(j + 1, n)), 1)],
                    [
                        TimeConstraint(GE, "T", "Ta"),
                        TimeConstraint(GE, "T", "Tc"),
                    ],
                )
            )

    init_facts = [TimestampedFact(Fact(TIME), 0)]
    for i in range(1, p + 1):
        init_facts.append(TimestampedFact(Fact(f"V{i}"), 0))
    init_facts.append(TimestampedFact(Fact("I1"), 0))
    init_facts.append(TimestampedFact(Fact("Start"), 0))
    init = Configuration(tuple(init_facts))

    pairs = []
    for j, clause in enumerate(f.clauses, start=1):
        patterns = [
            RulePattern(Fact("Start"), "Ts"),
            RulePattern(Fact(f"I{j}"), "Tc"),
        ]
        for lit in sorted(set(clause)):
            falsifier = f"B{lit}" if lit > 0 else f"A{-lit}"
            patterns.append(RulePattern(Fact(falsifier), f"Tf{len(patterns)}"))
        pairs.append(CriticalPair(f"falsified-{j}", tuple(patterns), ()))

    system = make_system(sig, rules, init=init)
    return SpecFile(system, init, CriticalSpec(tuple(pairs)), ticks=n)
