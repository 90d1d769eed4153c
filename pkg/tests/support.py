"""Shared test helpers: brute-force oracles and random system generation.

Everything here is deliberately independent of the package's search code:
the concrete-state oracle normalizes timestamps by hand and detects
cycles with networkx, the matcher enumerates candidate substitutions
exhaustively, and satisfiability / machine termination are decided by
direct enumeration and simulation.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from tmsr import (
    Configuration,
    Const,
    CreatedFact,
    CriticalSpec,
    Fact,
    RulePattern,
    Substitution,
    System,
    TimeConstraint,
    TimestampedFact,
    UnboundVariableError,
    Var,
    apply_rule,
    apply_subst,
    enabled,
    eval_constraint,
    expand_critical_pair,
    expand_rule,
    is_critical,
    make_signature,
    make_system,
    tick,
)
from tmsr.terms import TIME, fact_vars, term_text


# ---------------------------------------------------------------------------
# Exhaustive matcher


def ground_subterms(t):
    if isinstance(t, int):
        return {k for k in range(t + 1)}
    if hasattr(t, "args"):  # App
        out = {t}
        for a in t.args:
            out |= ground_subterms(a)
        return out
    return {t}


def brute_force_matches(rule, config: Configuration) -> set[Substitution]:
    """All substitutions over the configuration's stamps and ground
    subterms satisfying the rule, found by plain enumeration."""
    tvars = sorted({p.tvar for p in rule.patterns} | {rule.time_var})
    vvars = sorted(
        {v for p in rule.patterns for v in fact_vars(p.fact)},
        key=lambda v: (v.name, v.sort),
    )
    stamps = sorted({tf.ts for tf in config.facts})
    terms = set()
    for tf in config.facts:
        for a in tf.fact.args:
            terms |= ground_subterms(a)
    terms = sorted(terms, key=term_text)

    out = set()
    for tvals in itertools.product(stamps, repeat=len(tvars)):
        tmap = dict(zip(tvars, tvals))
        if tmap[rule.time_var] != config.time:
            continue
        if any(tmap[tv] > config.time for tv in rule.past_bounds):
            continue
        if not all(eval_constraint(c, tmap) for c in rule.guard):
            continue
        for vvals in itertools.product(terms, repeat=len(vvars)):
            vmap = dict(zip(vvars, vvals))
            try:
                needed = [
                    TimestampedFact(apply_subst(p.fact, vmap), tmap[p.tvar])
                    for p in rule.patterns
                ]
            except UnboundVariableError:
                continue
            if config.contains(needed):
                out.add(
                    Substitution.of(
                        {tv: tmap[tv] for tv in tvars}, vmap
                    )
                )
    return out


# ---------------------------------------------------------------------------
# Concrete-state oracle with hand-rolled timestamp normalization


def normalize(config: Configuration, dmax: int) -> Configuration:
    seq = config.facts
    out = [TimestampedFact(seq[0].fact, 0)]
    ts = 0
    prev = seq[0].ts
    for tf in seq[1:]:
        ts += min(tf.ts - prev, dmax + 1)
        out.append(TimestampedFact(tf.fact, ts))
        prev = tf.ts
    return Configuration(tuple(out))


def oracle_graph(sys: System, init: Configuration, cs: CriticalSpec, dmax: int):
    """Reachable normalized concrete states under lazy sampling. Critical
    states are kept as nodes but not expanded."""
    start = normalize(init, dmax)
    graph = nx.DiGraph()
    critical = {}
    stack = [start]
    graph.add_node(start)
    critical[start] = is_critical(cs, start) is not None
    while stack:
        node = stack.pop()
        if critical[node]:
            continue
        pairs = enabled(sys, node)
        if pairs:
            children = [
                normalize(apply_rule(r, node, s, sys.max_fact_size), dmax)
                for r, s in pairs
            ]
        else:
            children = [normalize(tick(node), dmax)]
        for child in children:
            if child not in graph:
                graph.add_node(child)
                critical[child] = is_critical(cs, child) is not None
                stack.append(child)
            graph.add_edge(node, child)
    return start, graph, critical


def oracle_verdicts(
    sys: System, init: Configuration, cs: CriticalSpec, dmax: int
) -> tuple[bool, bool]:
    """(realizable, survivable) by exhaustive quotient exploration."""
    start, graph, critical = oracle_graph(sys, init, cs, dmax)
    critical_reachable = any(critical.values())
    if critical[start]:
        return False, False
    compliant = graph.subgraph([n for n in graph if not critical[n]])
    realizable = False
    reachable = nx.descendants(compliant, start) | {start}
    for scc in nx.strongly_connected_components(compliant.subgraph(reachable)):
        node = next(iter(scc))
        if len(scc) > 1 or compliant.has_edge(node, node):
            realizable = True
            break
    return realizable, realizable and not critical_reachable


# ---------------------------------------------------------------------------
# Random progressive systems


def random_progressive_system(rng: random.Random):
    """A small progressive system, initial configuration and critical
    spec with all numeric offsets within 2."""
    n_preds = rng.randint(2, 4)
    preds = {f"P{i}": () for i in range(n_preds)}
    consts = {}
    if rng.random() < 0.3:
        preds["U"] = ("Obj",)
        consts = {"a": "Obj", "b": "Obj"}
    sig = make_signature(("Obj",) if consts else (), preds, {}, consts)
    pred_names = [p for p in preds]

    def random_pattern(tvar: str, allow_var: bool):
        name = rng.choice(pred_names)
        if name == "U":
            if allow_var and rng.random() < 0.5:
                arg = Var("X", "Obj")
            else:
                arg = Const(rng.choice("ab"))
            return RulePattern(Fact("U", (arg,)), tvar)
        return RulePattern(Fact(name), tvar)

    def random_ground_fact():
        name = rng.choice(pred_names)
        if name == "U":
            return Fact("U", (Const(rng.choice("ab")),))
        return Fact(name)

    rules = []
    for ri in range(rng.randint(1, 5)):
        n_cons = rng.randint(1, 2)
        consumed = [random_pattern(f"T{j}", allow_var=True) for j in range(n_cons)]
        preserved = []
        if rng.random() < 0.4:
            preserved.append(random_pattern("Tp", allow_var=False))
        bound_vars = [
            v for p in consumed + preserved for v in fact_vars(p.fact)
        ]
        created = []
        offsets = [rng.randint(1, 2)] + [
            rng.randint(0, 2) for _ in range(n_cons - 1)
        ]
        for off in offsets:
            name = rng.choice(pred_names)
            if name == "U":
                if bound_vars and rng.random() < 0.5:
                    created.append(CreatedFact(Fact("U", (bound_vars[0],)), off))
                else:
                    created.append(
                        CreatedFact(Fact("U", (Const(rng.choice("ab")),)), off)
                    )
            else:
                created.append(CreatedFact(Fact(name), off))
        tvars = ["T"] + [p.tvar for p in consumed + preserved]
        guard = []
        for _ in range(rng.randint(0, 2)):
            rel = rng.choice(["greater", "equal", "ge"])
            guard.append(
                TimeConstraint(
                    rel, rng.choice(tvars), rng.choice(tvars), rng.randint(-2, 2)
                )
            )
        rules.extend(
            expand_rule(f"r{ri}", "T", preserved, consumed, created, guard)
        )

    m = rng.randint(2, 4)
    facts = [TimestampedFact(Fact(TIME), rng.randint(0, 2))]
    for _ in range(m - 1):
        facts.append(TimestampedFact(random_ground_fact(), rng.randint(0, 2)))
    init = Configuration(tuple(facts))

    pairs = []
    for pi in range(rng.randint(0, 2)):
        pats = [random_pattern(f"S{j}", allow_var=False) for j in range(rng.randint(1, 2))]
        if rng.random() < 0.5:
            pats.append(RulePattern(Fact(TIME), "St"))
        guard = []
        if rng.random() < 0.6 and len(pats) >= 2:
            guard.append(
                TimeConstraint(
                    rng.choice(["greater", "equal", "ge"]),
                    pats[0].tvar,
                    pats[1].tvar,
                    rng.randint(-2, 2),
                )
            )
        pairs.extend(expand_critical_pair(f"c{pi}", pats, guard))
    cs = CriticalSpec(tuple(pairs))

    system = make_system(sig, rules, init=init)
    return system, init, cs


# ---------------------------------------------------------------------------
# Satisfiability and machine-termination oracles


def brute_force_sat(variables: int, clauses) -> bool:
    for bits in itertools.product((False, True), repeat=variables):
        if all(
            any((lit > 0) == bits[abs(lit) - 1] for lit in clause)
            for clause in clauses
        ):
            return True
    return False


def all_small_cnfs(max_vars: int = 3, max_clauses: int = 3):
    """Canonical representatives of every 3-CNF over the variable and
    clause budgets, literals drawn with repetition."""
    literals = []
    for v in range(1, max_vars + 1):
        literals += [v, -v]
    clause_pool = sorted(
        {tuple(sorted(c)) for c in itertools.combinations_with_replacement(literals, 3)}
    )
    for n in range(1, max_clauses + 1):
        for combo in itertools.combinations_with_replacement(clause_pool, n):
            yield combo


def machine_runs_forever(spec) -> bool:
    """Direct simulation with repetition detection. Halting means
    reaching a final state; leaving the tape window in a non-final state
    idles forever."""
    tape = list(spec.tape_cells())
    q = spec.start_state
    pos = spec.head
    seen = set()
    while True:
        if q in spec.final_states:
            return False
        if not (0 <= pos <= spec.space + 1):
            return True
        key = (q, pos, tuple(tape))
        if key in seen:
            return True
        seen.add(key)
        q2, sym2, move = spec.instructions[(q, tape[pos])]
        tape[pos] = sym2
        q = q2
        pos += {"L": -1, "R": 1, "N": 0}[move]
