"""Plain-text spec files: parser, printer and the loaded bundle.

Format (line oriented, ``#`` starts a comment, first line is a version
header). Identifiers starting with an upper-case letter are variables;
their sorts are inferred from the argument position they occupy. Decimal
numerals are allowed wherever a Nat term is expected. Example::

    tmsr-spec 1
    sort Id
    const d1 : Id
    pred Dr : Id Nat Nat Nat
    pred P : Id Nat Nat
    rule "move": Time@T, P(p1,0,1)@T1, Dr(d1,1,1,2)@T | T = T1 + 1 ->
        Time@T, P(p1,0,1)@T1, Dr(d1,0,1,1)@(T+1)
    init: Time@0, Dr(d1,1,1,2)@0, P(p1,0,1)@0
    critical "flat": { Dr(Id,X,Y,0)@T }
    critical "stale": { P(p1,0,1)@T1, Time@T | T > T1 + 6 }
    params: k=12, ticks=24

(rules stay on one line in real files; wrapped above for readability).
A rule's right-hand side entry equal to a left-hand side entry (same fact
pattern, same time variable) is preserved; any other entry must be
stamped ``@(T+d)`` relative to the clock variable and is created. A rule
that consumes a fact at the clock variable and recreates it at offset 0
normalizes to a preserved fact; the two are the same rule.

Guard atoms use ``>``, ``=`` or ``>=`` with an optional ``+ n``/``- n``
offset. ``>=`` is sugar for the disjunction of the other two and loads as
alternative rules (or critical pairs) sharing the declared name.

The sort ``Nat``, the predicate ``Time``, the constant ``z`` and the
function ``s`` are implicit in every signature and cannot be redeclared.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .rules import (
    CreatedFact,
    CriticalPair,
    CriticalSpec,
    EQUAL,
    GE,
    GREATER,
    Rule,
    RulePattern,
    RuleError,
    System,
    TimeConstraint,
    expand_critical_pair,
    expand_rule,
    make_system,
)
from .terms import (
    App,
    Configuration,
    ConfigurationError,
    Const,
    Fact,
    NAT,
    Signature,
    SortError,
    Term,
    TIME,
    TimestampedFact,
    TmsrError,
    Var,
    check_fact,
    fact_text,
    make_signature,
    normalize_term,
)

HEADER = "tmsr-spec 1"

RESERVED_SORTS = {NAT}
RESERVED_PREDS = {TIME}
RESERVED_FNS = {"s"}
RESERVED_CONSTS = {"z"}


class SpecParseError(TmsrError):
    """Diagnostic with a stable code and a source position."""

    def __init__(self, code: str, message: str, line: int, col: int = 0):
        super().__init__(f"{line}:{col}: [{code}] {message}")
        self.code = code
        self.reason = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SpecFile:
    """A parsed spec: system, initial configuration, criticality spec and
    the default tick budget for bounded checking."""

    system: System
    init: Configuration
    critical: CriticalSpec
    ticks: int | None = None


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"[^"]*")
  | (?P<arrow>->)
  | (?P<ge>>=)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[@(),:|+\-><={}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SpecParseError("syntax", f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], line: int):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def done(self) -> bool:
        return self.i >= len(self.tokens)

    def col(self) -> int:
        t = self.peek()
        return t.col if t else (self.tokens[-1].col if self.tokens else 1)

    def take(self) -> Token:
        t = self.peek()
        if t is None:
            raise SpecParseError("syntax", "unexpected end of line", self.line, self.col())
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.take()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise SpecParseError(
                "syntax", f"expected {want!r}, found {t.text!r}", self.line, t.col
            )
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.peek()
        if t and t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None


def _is_var_name(name: str) -> bool:
    return name[0].isupper()


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self) -> None:
        self.sorts: list[str] = []
        self.preds: dict[str, tuple[str, ...]] = {}
        self.fns: dict[str, tuple[tuple[str, ...], str]] = {}
        self.consts: dict[str, str] = {}
        self.rule_lines: list[tuple[int, list[Token]]] = []
        self.init_lines: list[tuple[int, list[Token]]] = []
        self.critical_lines: list[tuple[int, list[Token]]] = []
        self.params: dict[str, int] = {}
        self.params_line: int | None = None
        self.sig: Signature | None = None

    # -- pass 1: collect declarations ------------------------------------

    def read(self, text: str) -> None:
        lines = text.splitlines()
        body: list[tuple[int, str]] = []
        for idx, raw in enumerate(lines, start=1):
            stripped = self._strip_comment(raw)
            if stripped.strip():
                body.append((idx, stripped))
        if not body:
            raise SpecParseError("syntax", "empty spec", 1)
        first_line, first = body[0]
        if first.strip() != HEADER:
            raise SpecParseError(
                "syntax", f"missing header line {HEADER!r}", first_line
            )
        for line, content in body[1:]:
            cur = _Cursor(_tokenize(content, line), line)
            head = cur.expect("ident")
            if head.text == "sort":
                self._decl_sort(cur)
            elif head.text == "pred":
                self._decl_pred(cur)
            elif head.text == "fn":
                self._decl_fn(cur)
            elif head.text == "const":
                self._decl_const(cur)
            elif head.text == "rule":
                self.rule_lines.append((line, cur.tokens[cur.i :]))
            elif head.text == "init":
                cur.expect("sym", ":")
                self.init_lines.append((line, cur.tokens[cur.i :]))
            elif head.text == "critical":
                self.critical_lines.append((line, cur.tokens[cur.i :]))
            elif head.text == "params":
                self._decl_params(cur)
            else:
                raise SpecParseError(
                    "syntax", f"unknown declaration {head.text!r}", line, head.col
                )

    @staticmethod
    def _strip_comment(raw: str) -> str:
        out = []
        in_string = False
        for ch in raw:
            if ch == '"':
                in_string = not in_string
            if ch == "#" and not in_string:
                break
            out.append(ch)
        return "".join(out)

    def _decl_sort(self, cur: _Cursor) -> None:
        name = cur.expect("ident")
        if name.text in RESERVED_SORTS or name.text in self.sorts:
            raise SpecParseError(
                "duplicate", f"sort {name.text!r} already declared", cur.line, name.col
            )
        self.sorts.append(name.text)
        self._end(cur)

    def _decl_pred(self, cur: _Cursor) -> None:
        name = cur.expect("ident")
        if name.text in RESERVED_PREDS or name.text in self.preds:
            raise SpecParseError(
                "duplicate", f"predicate {name.text!r} already declared", cur.line, name.col
            )
        argsorts: list[str] = []
        if cur.accept("sym", ":"):
            while not cur.done():
                argsorts.append(cur.expect("ident").text)
        self.preds[name.text] = tuple(argsorts)

    def _decl_fn(self, cur: _Cursor) -> None:
        name = cur.expect("ident")
        if name.text in RESERVED_FNS or name.text in self.fns:
            raise SpecParseError(
                "duplicate", f"function {name.text!r} already declared", cur.line, name.col
            )
        cur.expect("sym", ":")
        argsorts: list[str] = []
        while not cur.accept("arrow"):
            argsorts.append(cur.expect("ident").text)
        result = cur.expect("ident").text
        self.fns[name.text] = (tuple(argsorts), result)
        self._end(cur)

    def _decl_const(self, cur: _Cursor) -> None:
        name = cur.expect("ident")
        if name.text in RESERVED_CONSTS or name.text in self.consts:
            raise SpecParseError(
                "duplicate", f"constant {name.text!r} already declared", cur.line, name.col
            )
        cur.expect("sym", ":")
        sort = cur.expect("ident").text
        self.consts[name.text] = sort
        self._end(cur)

    def _decl_params(self, cur: _Cursor) -> None:
        cur.expect("sym", ":")
        self.params_line = cur.line
        while not cur.done():
            key = cur.expect("ident")
            if key.text not in ("k", "dmax", "ticks"):
                raise SpecParseError(
                    "params", f"unknown parameter {key.text!r}", cur.line, key.col
                )
            cur.expect("sym", "=")
            val = cur.expect("num")
            self.params[key.text] = int(val.text)
            if not cur.done():
                cur.expect("sym", ",")

    def _end(self, cur: _Cursor) -> None:
        if not cur.done():
            t = cur.peek()
            raise SpecParseError(
                "syntax", f"trailing input {t.text!r}", cur.line, t.col
            )

    # -- pass 2: terms, facts, rules -------------------------------------

    def build_signature(self) -> Signature:
        try:
            self.sig = make_signature(self.sorts, self.preds, self.fns, self.consts)
        except SortError as exc:
            raise SpecParseError("sort", str(exc), 1) from None
        return self.sig

    def _parse_term(self, cur: _Cursor, expected: str, vars_seen: dict[str, str]) -> Term:
        t = cur.take()
        if t.kind == "num":
            if expected != NAT:
                raise SpecParseError(
                    "sort", f"numeral where a {expected!r} term is expected", cur.line, t.col
                )
            return int(t.text)
        if t.kind != "ident":
            raise SpecParseError("syntax", f"expected a term, found {t.text!r}", cur.line, t.col)
        name = t.text
        if cur.accept("sym", "("):
            if name not in self.fns and name not in RESERVED_FNS:
                raise SpecParseError("sort", f"undeclared function {name!r}", cur.line, t.col)
            argsorts, result = self.fns.get(name, ((NAT,), NAT))
            if result != expected:
                raise SpecParseError(
                    "sort",
                    f"function {name!r} yields {result!r}, expected {expected!r}",
                    cur.line,
                    t.col,
                )
            args = []
            for i, asort in enumerate(argsorts):
                if i:
                    cur.expect("sym", ",")
                args.append(self._parse_term(cur, asort, vars_seen))
            cur.expect("sym", ")")
            return normalize_term(App(name, tuple(args)))
        if _is_var_name(name):
            seen = vars_seen.get(name)
            if seen is not None and seen != expected:
                raise SpecParseError(
                    "sort",
                    f"variable {name!r} used at sorts {seen!r} and {expected!r}",
                    cur.line,
                    t.col,
                )
            vars_seen[name] = expected
            return Var(name, expected)
        if name == "z":
            if expected != NAT:
                raise SpecParseError("sort", "z is a Nat constant", cur.line, t.col)
            return 0
        if name not in self.consts:
            raise SpecParseError("sort", f"undeclared constant {name!r}", cur.line, t.col)
        if self.consts[name] != expected:
            raise SpecParseError(
                "sort",
                f"constant {name!r} has sort {self.consts[name]!r}, expected {expected!r}",
                cur.line,
                t.col,
            )
        return Const(name)

    def _parse_fact(self, cur: _Cursor, vars_seen: dict[str, str]) -> Fact:
        t = cur.expect("ident")
        name = t.text
        argsorts = self.preds.get(name)
        if name == TIME:
            argsorts = ()
        if argsorts is None:
            raise SpecParseError("sort", f"undeclared predicate {name!r}", cur.line, t.col)
        args: list[Term] = []
        if cur.accept("sym", "("):
            for i, asort in enumerate(argsorts):
                if i:
                    nxt = cur.peek()
                    if nxt and nxt.text == ")":
                        raise SpecParseError(
                            "arity",
                            f"predicate {name!r} takes {len(argsorts)} arguments",
                            cur.line,
                            nxt.col,
                        )
                    cur.expect("sym", ",")
                args.append(self._parse_term(cur, asort, vars_seen))
            closing = cur.peek()
            if closing and closing.text == ",":
                raise SpecParseError(
                    "arity",
                    f"predicate {name!r} takes {len(argsorts)} arguments",
                    cur.line,
                    closing.col,
                )
            cur.expect("sym", ")")
        if len(args) != len(argsorts):
            raise SpecParseError(
                "arity",
                f"predicate {name!r} takes {len(argsorts)} arguments, found {len(args)}",
                cur.line,
                t.col,
            )
        return Fact(name, tuple(args))

    def _parse_tvar(self, cur: _Cursor) -> str:
        t = cur.expect("ident")
        if not _is_var_name(t.text):
            raise SpecParseError(
                "syntax", f"time variable expected, found {t.text!r}", cur.line, t.col
            )
        return t.text

    def _parse_constraint(self, cur: _Cursor) -> TimeConstraint:
        left = self._parse_tvar(cur)
        op = cur.take()
        if op.kind == "ge":
            rel = GE
        elif op.text == ">":
            rel = GREATER
        elif op.text == "=":
            rel = EQUAL
        else:
            raise SpecParseError(
                "syntax", f"expected >, = or >=, found {op.text!r}", cur.line, op.col
            )
        right = self._parse_tvar(cur)
        offset = 0
        sign = cur.accept("sym", "+") or cur.accept("sym", "-")
        if sign:
            num = cur.expect("num")
            offset = int(num.text) if sign.text == "+" else -int(num.text)
        return TimeConstraint(rel, left, right, offset)

    def _parse_rule(self, line: int, tokens: list[Token]) -> tuple[Rule, ...]:
        cur = _Cursor(tokens, line)
        name_tok = cur.expect("string")
        name = name_tok.text.strip('"')
        cur.expect("sym", ":")
        vars_seen: dict[str, str] = {}

        lhs: list[tuple[Fact, str]] = []
        while True:
            f = self._parse_fact(cur, vars_seen)
            cur.expect("sym", "@")
            tv = self._parse_tvar(cur)
            lhs.append((f, tv))
            if not cur.accept("sym", ","):
                break
        guard: list[TimeConstraint] = []
        if cur.accept("sym", "|"):
            while True:
                guard.append(self._parse_constraint(cur))
                if not cur.accept("sym", ","):
                    break
        cur.expect("arrow")
        rhs: list[tuple[Fact, str, int]] = []
        while True:
            f = self._parse_fact(cur, vars_seen)
            cur.expect("sym", "@")
            if cur.accept("sym", "("):
                tv = self._parse_tvar(cur)
                cur.expect("sym", "+")
                off = int(cur.expect("num").text)
                cur.expect("sym", ")")
            else:
                tv = self._parse_tvar(cur)
                off = 0
            rhs.append((f, tv, off))
            if not cur.accept("sym", ","):
                break
        self._end(cur)

        time_vars = [tv for f, tv in lhs if f.pred == TIME]
        rhs_time = [(f, tv, off) for f, tv, off in rhs if f.pred == TIME]
        if len(time_vars) > 1 or len(rhs_time) > 1:
            raise SpecParseError(
                "single-time",
                f"rule {name!r} may read the clock through at most one Time fact",
                line,
            )
        if time_vars:
            time_var = time_vars[0]
            if (
                len(rhs_time) != 1
                or rhs_time[0][1] != time_var
                or rhs_time[0][2] != 0
            ):
                raise SpecParseError(
                    "single-time",
                    f"rule {name!r} must keep the Time fact unchanged on the right",
                    line,
                )
        elif rhs_time:
            raise SpecParseError(
                "single-time",
                f"rule {name!r} has a Time fact only on the right",
                line,
            )
        else:
            time_var = None  # inferred below from the created facts
        lhs = [(f, tv) for f, tv in lhs if f.pred != TIME]
        rhs = [(f, tv, off) for f, tv, off in rhs if f.pred != TIME]

        remaining = list(lhs)
        preserved: list[RulePattern] = []
        created_raw: list[tuple[Fact, str, int]] = []
        for f, tv, off in rhs:
            if off == 0 and (f, tv) in remaining:
                remaining.remove((f, tv))
                preserved.append(RulePattern(f, tv))
            else:
                created_raw.append((f, tv, off))
        if time_var is None:
            # The clock fact was left implicit; the clock variable is the
            # one the created facts are stamped against.
            stamped = {tv for _, tv, _ in created_raw}
            if len(stamped) == 1:
                time_var = stamped.pop()
            elif not stamped and lhs:
                time_var = lhs[0][1]
            else:
                raise SpecParseError(
                    "single-time",
                    f"rule {name!r}: cannot infer the clock variable",
                    line,
                )
        created: list[CreatedFact] = []
        for f, tv, off in created_raw:
            if tv != time_var:
                raise SpecParseError(
                    "syntax",
                    f"rule {name!r}: created fact {fact_text(f)} must be stamped "
                    f"relative to the clock variable {time_var!r}",
                    line,
                )
            created.append(CreatedFact(f, off))
        consumed = [RulePattern(f, tv) for f, tv in remaining]
        try:
            return expand_rule(name, time_var, preserved, consumed, created, guard)
        except RuleError as exc:
            raise SpecParseError("syntax", str(exc), line) from None

    def _parse_init(self, line: int, tokens: list[Token]) -> list[TimestampedFact]:
        cur = _Cursor(tokens, line)
        out = []
        vars_seen: dict[str, str] = {}
        while True:
            f = self._parse_fact(cur, vars_seen)
            if vars_seen:
                name = next(iter(vars_seen))
                raise SpecParseError(
                    "syntax", f"initial facts must be ground, found variable {name!r}", line
                )
            cur.expect("sym", "@")
            ts = int(cur.expect("num").text)
            out.append(TimestampedFact(f, ts))
            if not cur.accept("sym", ","):
                break
        self._end(cur)
        return out

    def _parse_critical(self, line: int, tokens: list[Token]) -> tuple[CriticalPair, ...]:
        cur = _Cursor(tokens, line)
        name = cur.expect("string").text.strip('"')
        cur.expect("sym", ":")
        cur.expect("sym", "{")
        vars_seen: dict[str, str] = {}
        patterns: list[RulePattern] = []
        while True:
            f = self._parse_fact(cur, vars_seen)
            cur.expect("sym", "@")
            tv = self._parse_tvar(cur)
            patterns.append(RulePattern(f, tv))
            if not cur.accept("sym", ","):
                break
        guard: list[TimeConstraint] = []
        if cur.accept("sym", "|"):
            while not (cur.peek() and cur.peek().text == "}"):
                guard.append(self._parse_constraint(cur))
                if not cur.accept("sym", ","):
                    break
        cur.expect("sym", "}")
        self._end(cur)
        try:
            return expand_critical_pair(name, patterns, guard)
        except RuleError as exc:
            raise SpecParseError("syntax", str(exc), line) from None

    # -- assembly ---------------------------------------------------------

    def assemble(self) -> SpecFile:
        self.build_signature()
        rules: list[Rule] = []
        for line, tokens in self.rule_lines:
            rules.extend(self._parse_rule(line, tokens))
        init_facts: list[TimestampedFact] = []
        for line, tokens in self.init_lines:
            init_facts.extend(self._parse_init(line, tokens))
        if not self.init_lines:
            raise SpecParseError("single-time", "missing init block", 1)
        try:
            init = Configuration(tuple(init_facts))
        except ConfigurationError:
            raise SpecParseError(
                "single-time",
                "single Time fact required in the initial configuration",
                self.init_lines[0][0],
            ) from None
        pairs: list[CriticalPair] = []
        for line, tokens in self.critical_lines:
            pairs.extend(self._parse_critical(line, tokens))
        critical = CriticalSpec(tuple(pairs))
        try:
            system = make_system(
                self.sig,
                rules,
                max_fact_size=self.params.get("k"),
                init=init,
                dmax_override=self.params.get("dmax"),
            )
        except (RuleError, SortError) as exc:
            raise SpecParseError(
                "sort", str(exc), self.params_line or 1
            ) from None
        for tf in init:
            try:
                check_fact(self.sig, tf.fact)
            except SortError as exc:
                raise SpecParseError("sort", str(exc), self.init_lines[0][0]) from None
        return SpecFile(system, init, critical, self.params.get("ticks"))


def parse_spec(text: str) -> SpecFile:
    p = _Parser()
    p.read(text)
    return p.assemble()


def parse_fact_text(sig_or_spec, text: str, line: int = 1) -> Fact:
    """Parse one ground fact in the spec-file syntax."""
    parser = _from_signature(sig_or_spec)
    cur = _Cursor(_tokenize(text, line), line)
    vars_seen: dict[str, str] = {}
    f = parser._parse_fact(cur, vars_seen)
    if vars_seen:
        raise SpecParseError("syntax", "fact is not ground", line)
    parser._end(cur)
    return f


def parse_term_text(sig_or_spec, text: str, expected: str, line: int = 1) -> Term:
    parser = _from_signature(sig_or_spec)
    cur = _Cursor(_tokenize(text, line), line)
    t = parser._parse_term(cur, expected, {})
    parser._end(cur)
    return t


def _from_signature(sig_or_spec) -> _Parser:
    sig = sig_or_spec.system.signature if isinstance(sig_or_spec, SpecFile) else sig_or_spec
    p = _Parser()
    p.sorts = [s for s in sig.sorts if s not in RESERVED_SORTS]
    p.preds = {k: v for k, v in sig.predicates.items() if k not in RESERVED_PREDS}
    p.fns = {k: v for k, v in sig.functions.items() if k not in RESERVED_FNS}
    p.consts = {k: v for k, v in sig.constants.items() if k not in RESERVED_CONSTS}
    p.sig = sig
    return p


# ---------------------------------------------------------------------------
# Printer


def _constraint_text(c: TimeConstraint) -> str:
    return c.text()


def _rule_text(r: Rule) -> str:
    lhs = [f"{TIME}@{r.time_var}"]
    lhs += [f"{fact_text(p.fact)}@{p.tvar}" for p in r.preserved]
    lhs += [f"{fact_text(p.fact)}@{p.tvar}" for p in r.consumed]
    rhs = [f"{TIME}@{r.time_var}"]
    rhs += [f"{fact_text(p.fact)}@{p.tvar}" for p in r.preserved]
    for cf in r.created:
        if cf.offset == 0:
            rhs.append(f"{fact_text(cf.fact)}@{r.time_var}")
        else:
            rhs.append(f"{fact_text(cf.fact)}@({r.time_var}+{cf.offset})")
    guard = ""
    if r.guard:
        guard = " | " + ", ".join(_constraint_text(c) for c in r.guard)
    return f'rule "{r.name}": {", ".join(lhs)}{guard} -> {", ".join(rhs)}'


def _critical_text(p: CriticalPair) -> str:
    pats = ", ".join(f"{fact_text(q.fact)}@{q.tvar}" for q in p.patterns)
    if p.guard:
        guard = " | " + ", ".join(_constraint_text(c) for c in p.guard)
    else:
        guard = ""
    return f'critical "{p.name}": {{ {pats}{guard} }}'


def print_spec(spec: SpecFile) -> str:
    sig = spec.system.signature
    lines = [HEADER]
    for s in sorted(sig.sorts - RESERVED_SORTS):
        lines.append(f"sort {s}")
    for name in sorted(sig.constants):
        if name not in RESERVED_CONSTS:
            lines.append(f"const {name} : {sig.constants[name]}")
    for name in sorted(sig.functions):
        if name not in RESERVED_FNS:
            argsorts, res = sig.functions[name]
            lines.append(f"fn {name} : {' '.join(argsorts)} -> {res}")
    for name in sorted(sig.predicates):
        if name not in RESERVED_PREDS:
            argsorts = sig.predicates[name]
            suffix = f" : {' '.join(argsorts)}" if argsorts else ""
            lines.append(f"pred {name}{suffix}")
    for r in spec.system.rules:
        lines.append(_rule_text(r))
    lines.append("init: " + spec.init.text())
    for p in spec.critical.pairs:
        lines.append(_critical_text(p))
    params = [f"k={spec.system.max_fact_size}"]
    if spec.system.dmax_override is not None:
        params.append(f"dmax={spec.system.dmax_override}")
    if spec.ticks is not None:
        params.append(f"ticks={spec.ticks}")
    lines.append("params: " + ", ".join(params))
    return "\n".join(lines) + "\n"
