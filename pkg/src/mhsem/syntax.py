"""Rule language: terms, atoms, rules, parsing, grounding and canonical printing.

Concrete syntax::

    % comment
    beach :- not mountain.
    p(X) :- q(X), not r(X).
    q(a).
    :- beach, travel.

Identifiers starting with a lowercase letter (or digits) are constants and
predicate names; identifiers starting with an uppercase letter are variables.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional


class Atom(NamedTuple):
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(self.args)})"

    def variables(self) -> set[str]:
        return {t for t in self.args if is_variable(t)}

    def is_ground(self) -> bool:
        return not any(is_variable(t) for t in self.args)

    def substitute(self, binding: dict[str, str]) -> "Atom":
        return Atom(self.predicate, tuple(binding.get(t, t) for t in self.args))


class Literal(NamedTuple):
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"

    def sort_key(self) -> tuple:
        return (not self.positive, self.atom)


def is_variable(term: str) -> bool:
    return term[:1].isupper()


@dataclass(frozen=True, slots=True)
class Rule:
    """``head :- pos, not neg.``; a rule with ``head=None`` is a denial.

    Parsed denials always have a body. Rewriting may empty one, which
    leaves a denial that every interpretation violates.
    """

    head: Optional[Atom]
    pos: frozenset[Atom] = frozenset()
    neg: frozenset[Atom] = frozenset()
    id: int = 0

    @property
    def body(self) -> frozenset[Literal]:
        return frozenset(
            [Literal(a, True) for a in self.pos] + [Literal(a, False) for a in self.neg]
        )

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.pos and not self.neg

    @property
    def is_denial(self) -> bool:
        return self.head is None

    def key(self) -> tuple:
        """Identity of the rule as a logical object, ignoring its id."""
        return (self.head, self.pos, self.neg)

    def body_atoms(self) -> frozenset[Atom]:
        return self.pos | self.neg

    def atoms(self) -> set[Atom]:
        out = set(self.pos) | set(self.neg)
        if self.head is not None:
            out.add(self.head)
        return out

    def variables(self) -> set[str]:
        return set().union(*(a.variables() for a in self.atoms()))

    def with_id(self, rule_id: int) -> "Rule":
        return Rule(self.head, self.pos, self.neg, rule_id)

    def sort_key(self) -> tuple:
        body = sorted(self.body, key=Literal.sort_key)
        return (self.head is None, self.head or Atom(""), [lit.sort_key() for lit in body])

    def __str__(self) -> str:
        body = ", ".join(str(lit) for lit in sorted(self.body, key=Literal.sort_key))
        if self.head is None:
            return f":- {body}."
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    """A parsed, possibly non-ground program."""

    rules: tuple[Rule, ...] = ()
    herbrand_constants: frozenset[str] = frozenset()


@dataclass(frozen=True, eq=False)
class GroundProgram:
    """A finite set of ground rules over a fixed Herbrand base.

    Equality compares the rule set (ignoring ids) and the base.
    """

    rules: tuple[Rule, ...] = ()
    herbrand_base: frozenset[Atom] = frozenset()
    _keys: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_keys", frozenset(r.key() for r in self.rules))

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], base: Iterable[Atom] = ()) -> "GroundProgram":
        """Build a program, dropping duplicate rules and renumbering from 0."""
        seen: set = set()
        out = []
        for r in rules:
            if r.key() in seen:
                continue
            seen.add(r.key())
            out.append(r.with_id(len(out)))
        atoms = set(base)
        for r in out:
            atoms |= r.atoms()
        return cls(tuple(out), frozenset(atoms))

    def __eq__(self, other):
        if not isinstance(other, GroundProgram):
            return NotImplemented
        return self._keys == other._keys and self.herbrand_base == other.herbrand_base

    def __hash__(self):
        return hash((self._keys, self.herbrand_base))

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def same_rules(self, other: "GroundProgram") -> bool:
        return self._keys == other._keys

    def rule_keys(self) -> frozenset:
        return self._keys

    def rule(self, rule_id: int) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def heads(self) -> frozenset[Atom]:
        return frozenset(r.head for r in self.rules if r.head is not None)

    def facts(self) -> frozenset[Atom]:
        return frozenset(r.head for r in self.rules if r.is_fact)

    def denials(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_denial)

    def without_denials(self) -> "GroundProgram":
        return GroundProgram(tuple(r for r in self.rules if not r.is_denial), self.herbrand_base)

    def with_facts(self, atoms: Iterable[Atom]) -> "GroundProgram":
        """Return ``self ∪ {a. : a ∈ atoms}``; the base is kept."""
        rules = list(self.rules)
        keys = set(self._keys)
        next_id = max((r.id for r in rules), default=-1) + 1
        for a in sorted(atoms):
            fact = Rule(a, id=next_id)
            if fact.key() in keys:
                continue
            keys.add(fact.key())
            rules.append(fact)
            next_id += 1
        return GroundProgram(tuple(rules), self.herbrand_base | frozenset(atoms))

    def is_definite(self) -> bool:
        return all(not r.neg for r in self.rules)

    def as_program(self) -> Program:
        consts = frozenset(t for a in self.herbrand_base for t in a.args)
        return Program(self.rules, consts)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SafetyError(ValueError):
    def __init__(self, message: str, rule_index: int):
        super().__init__(f"rule {rule_index}: {message}")
        self.rule_index = rule_index


class GroundingError(ValueError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<punct>[(),.])
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*|[0-9]+)
    """,
    re.VERBOSE,
)


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.advance()
        if tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    def program(self) -> list[Rule]:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.rule(len(rules)))
        return rules

    def rule(self, index: int) -> Rule:
        head = None
        if self.peek().kind != "if":
            head = self.atom()
            if self.peek().text == ".":
                self.advance()
                return Rule(head, id=index)
        if_tok = self.expect(":-")
        if head is None and self.peek().text == ".":
            self.fail("a denial needs a non-empty body", if_tok)
        pos, neg = self.body()
        self.expect(".")
        return Rule(head, frozenset(pos), frozenset(neg), index)

    def body(self) -> tuple[list[Atom], list[Atom]]:
        pos, neg = [], []
        while True:
            lit = self.literal()
            (pos if lit.positive else neg).append(lit.atom)
            if self.peek().text != ",":
                return pos, neg
            self.advance()

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.text == "not" and self.tokens[self.i + 1].kind == "ident":
            self.advance()
            return Literal(self.atom(), False)
        return Literal(self.atom(), True)

    def atom(self) -> Atom:
        tok = self.advance()
        if tok.kind != "ident" or tok.text[0].isdigit():
            self.fail(f"expected a predicate name, found {tok.text or 'end of input'!r}", tok)
        if tok.text == "not":
            self.fail("'not' is reserved", tok)
        if self.peek().text != "(":
            return Atom(tok.text)
        self.advance()
        args = [self.term()]
        while self.peek().text == ",":
            self.advance()
            args.append(self.term())
        self.expect(")")
        return Atom(tok.text, tuple(args))

    def term(self) -> str:
        tok = self.advance()
        if tok.kind not in ("ident", "var"):
            self.fail(f"expected a term, found {tok.text or 'end of input'!r}", tok)
        if self.peek().text == "(":
            self.fail("function symbols are not supported", self.peek())
        return tok.text


def parse_program(text: str) -> Program:
    """Parse ``text`` into a :class:`Program`, checking rule safety."""
    rules = _Parser(text).program()
    for r in rules:
        unsafe = (r.head.variables() if r.head else set()) - set().union(
            *(a.variables() for a in r.pos)
        )
        if unsafe:
            raise SafetyError(
                f"head variable(s) {', '.join(sorted(unsafe))} not bound by a positive body literal",
                r.id,
            )
    consts = frozenset(t for r in rules for a in r.atoms() for t in a.args if not is_variable(t))
    return Program(tuple(rules), consts)


def parse_literals(text: str) -> frozenset[Literal]:
    """Parse a comma-separated ground literal list such as ``"a, not b"``."""
    parser = _Parser(text)
    if parser.peek().kind == "eof":
        return frozenset()
    pos, neg = parser.body()
    if parser.peek().text == ".":
        parser.advance()
    if parser.peek().kind != "eof":
        parser.fail(f"unexpected {parser.peek().text!r}")
    lits = [Literal(a, True) for a in pos] + [Literal(a, False) for a in neg]
    for lit in lits:
        if not lit.atom.is_ground():
            raise GroundingError(f"query literal {lit} is not ground")
    return frozenset(lits)


def _order_key(term: str) -> tuple:
    return (0, int(term), "") if term.isdigit() else (1, 0, term)


def ground(program: Program) -> GroundProgram:
    """Instantiate every rule over the program's constants.

    Instances appear in rule order, each rule's instances ordered
    lexicographically by the binding of its variables (sorted by name).
    Duplicate ground rules are kept once, at their first position.
    """
    constants = sorted(program.herbrand_constants, key=_order_key)
    out: list[Rule] = []
    for r in program.rules:
        for a in r.atoms():
            for t in a.args:
                if "(" in t:
                    raise GroundingError(f"function term {t!r} in rule {r.id}")
        names = sorted(r.variables())
        if not names:
            out.append(r)
            continue
        for values in itertools.product(constants, repeat=len(names)):
            binding = dict(zip(names, values))
            out.append(
                Rule(
                    r.head.substitute(binding) if r.head is not None else None,
                    frozenset(a.substitute(binding) for a in r.pos),
                    frozenset(a.substitute(binding) for a in r.neg),
                )
            )
    return GroundProgram.from_rules(out)


def format_program(p: GroundProgram) -> str:
    lines = [str(r) for r in sorted(p.rules, key=Rule.sort_key)]
    return "".join(line + "\n" for line in lines)


def format_atoms(atoms: Iterable[Atom], sep: str = " ") -> str:
    return sep.join(str(a) for a in sorted(atoms))


def load_ground(text: str) -> GroundProgram:
    return ground(parse_program(text))
