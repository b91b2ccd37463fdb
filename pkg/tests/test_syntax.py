import pytest
from hypothesis import given, settings

from mhsem.syntax import (
    Atom,
    GroundingError,
    Literal,
    ParseError,
    Program,
    Rule,
    SafetyError,
    format_program,
    ground,
    parse_literals,
    parse_program,
)

from conftest import DATA, programs


def test_parse_single_rule():
    prog = parse_program("beach :- not mountain.")
    assert len(prog.rules) == 1
    (r,) = prog.rules
    assert r.head == Atom("beach")
    assert r.body == {Literal(Atom("mountain"), False)}


def test_parse_empty():
    assert parse_program("") == Program()
    assert parse_program("% only a comment\n") == Program()


def test_parse_variables():
    prog = parse_program("p(X) :- q(X), not r(X).  q(a).")
    assert len(prog.rules) == 2
    assert prog.rules[0].variables() == {"X"}
    assert prog.rules[1].variables() == set()
    assert prog.herbrand_constants == {"a"}


def test_parse_fact_and_denial():
    prog = parse_program("a.\n:- a, not b.")
    fact, denial = prog.rules
    assert fact.is_fact and fact.head == Atom("a")
    assert denial.is_denial
    assert denial.pos == {Atom("a")} and denial.neg == {Atom("b")}


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("a :- b", 1, 7),
        ("a.\nb :- , c.", 2, 6),
        ("a :- f(g(x)).", 1, 9),
        ("a ! b.", 1, 3),
        ("Abc.", 1, 1),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_program(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_denial_needs_body():
    with pytest.raises(ParseError):
        parse_program(":- .")


def test_safety_violation_names_rule():
    with pytest.raises(SafetyError) as err:
        parse_program("q(a).\np(X) :- not q(X).")
    assert err.value.rule_index == 1


def test_ground_single_constant():
    g = ground(parse_program("p(X) :- q(X). q(a)."))
    assert format_program(g) == "p(a) :- q(a).\nq(a).\n"


def test_ground_two_constants():
    g = ground(parse_program("p(X) :- q(X). q(a). q(b)."))
    assert len(g.rules) == 4
    assert g.herbrand_base == {Atom("p", ("a",)), Atom("p", ("b",)), Atom("q", ("a",)), Atom("q", ("b",))}


def test_ground_order_is_lexicographic():
    g = ground(parse_program("p(X, Y) :- q(X), q(Y). q(b). q(a)."))
    heads = [str(r.head) for r in g.rules[:4]]
    assert heads == ["p(a,a)", "p(a,b)", "p(b,a)", "p(b,b)"]


def test_ground_already_ground_is_identity(vacation):
    assert ground(vacation.as_program()) == vacation


def test_ground_rejects_function_terms():
    prog = Program((Rule(Atom("p", ("f(a)",))),), frozenset({"f(a)"}))
    with pytest.raises(GroundingError):
        ground(prog)


def test_ground_unsafe_negative_variable_uses_all_constants():
    g = ground(parse_program("p(X) :- q(X), not r(X, Y). q(a). r(a, b)."))
    assert len([r for r in g.rules if r.head.predicate == "p"]) == 4


def test_format_empty_and_fact():
    assert format_program(ground(parse_program(""))) == ""
    assert format_program(ground(parse_program("beach."))) == "beach.\n"


def test_format_is_canonical():
    g = ground(parse_program(":- z. b :- not c, a. a."))
    assert format_program(g) == "a.\nb :- a, not c.\n:- z.\n"


def test_format_idempotent_on_vacation(vacation):
    text = format_program(vacation)
    again = format_program(ground(parse_program(text)))
    assert again == text
    assert ground(parse_program(text)) == vacation


def test_data_files_parse():
    for path in DATA.glob("*.lp"):
        ground(parse_program(path.read_text()))


def test_parse_literals():
    assert parse_literals("a, not b") == {Literal(Atom("a")), Literal(Atom("b"), False)}
    assert parse_literals("") == frozenset()
    with pytest.raises(GroundingError):
        parse_literals("p(X)")


@given(programs(denials=True))
@settings(max_examples=150, deadline=None)
def test_round_trip(p):
    text = format_program(p)
    reparsed = ground(parse_program(text))
    assert reparsed.same_rules(p)
    assert format_program(reparsed) == text
    assert parse_program(format_program(ground(parse_program(text)))) == parse_program(text)


@given(programs(denials=True))
@settings(max_examples=100, deadline=None)
def test_ground_idempotent_and_base(p):
    assert ground(p.as_program()) == p
    atoms = set()
    for r in p.rules:
        atoms |= r.atoms()
    assert p.herbrand_base == atoms
