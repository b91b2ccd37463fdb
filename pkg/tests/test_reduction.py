import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhsem.depgraph import build_dependency_graph
from mhsem.oracle import randomized_remainder
from mhsem.reduction import (
    ReductionTrace,
    Step,
    StepKind,
    layered_remainder,
    remainder,
    remainder_program,
    step_failure,
    step_layered_negative_reduction,
    step_loop_detection,
    step_negative_reduction,
    step_positive_reduction,
    step_success,
    well_founded_model,
)
from mhsem.syntax import Atom, format_program, load_ground

from conftest import atoms, programs


def text(p):
    return format_program(p)


@pytest.mark.parametrize(
    "step, source, expected",
    [
        (step_positive_reduction, "mountain :- not travel.", "mountain.\n"),
        (step_positive_reduction, "a.", None),
        (step_positive_reduction, "a :- not b. b :- c.", None),
        (step_negative_reduction, "a :- not b.", None),
        (step_negative_reduction, "b. a :- not b, c.", "b.\n"),
        (step_layered_negative_reduction, "b. a :- not b.", "b.\n"),
        (step_layered_negative_reduction, "b. a :- not b. b :- a.", None),
        (step_success, "b. a :- b.", "a.\nb.\n"),
        (step_success, "a :- b.", None),
        (step_success, "b. a :- b, not c.", "a :- not c.\nb.\n"),
        (step_failure, "a :- b.", ""),
        (step_failure, "b. a :- b.", None),
        (step_failure, "t :- a, b. b :- not a.", "b :- not a.\n"),
        (step_loop_detection, "a :- b. b :- a.", ""),
        (step_loop_detection, "a :- not b.", None),
    ],
)
def test_single_steps(step, source, expected):
    res = step(load_ground(source))
    if expected is None:
        assert res is None
    else:
        assert res is not None
        assert text(res[0]) == expected


def test_negative_reduction_stubborn(stubborn):
    p2, step = step_negative_reduction(stubborn)
    assert step.kind is StepKind.NEGATIVE_REDUCTION
    assert "travel :- not beach." not in text(p2)
    assert len(p2.rules) == 3


def test_layered_negative_reduction_blocked_in_loop(stubborn):
    assert step_layered_negative_reduction(stubborn, build_dependency_graph(stubborn)) is None


def test_loop_detection_records_loop_set():
    _, step = step_loop_detection(load_ground("a :- b. b :- a. c :- not a."))
    assert step.loop_set >= atoms("a", "b")
    assert step.removed_rules == {0, 1}


def test_loop_detection_vacation(vacation):
    assert step_loop_detection(vacation) is None


def test_step_deterministic_choice():
    p = load_ground("a :- not y, not x. b :- not z.")
    _, step = step_positive_reduction(p)
    assert [(i, str(lit)) for i, lit in step.removed_literals] == [(0, "not x")]


def test_step_record_validation():
    with pytest.raises(ValueError):
        Step(StepKind.FAILURE, loop_set=frozenset())
    with pytest.raises(ValueError):
        Step(StepKind.LOOP_DETECTION)


def test_remainder_stubborn_trace(stubborn):
    rem, trace = remainder(stubborn)
    assert text(rem) == "beach.\nmountain.\n"
    assert trace.kinds() == [
        StepKind.NEGATIVE_REDUCTION,
        StepKind.POSITIVE_REDUCTION,
        StepKind.NEGATIVE_REDUCTION,
    ]
    assert trace.format() == (
        "NegativeReduction removed=2\n"
        "PositiveReduction removed=1:not travel\n"
        "NegativeReduction removed=0\n"
    )


def test_remainder_vacation_unchanged(vacation):
    rem, trace = remainder(vacation)
    assert rem == vacation and len(trace) == 0


def test_remainder_success_chain():
    rem, trace = remainder(load_ground("a. b :- a."))
    assert text(rem) == "a.\nb.\n"
    assert trace.kinds() == [StepKind.SUCCESS]


def test_remainder_merges_duplicate_rules():
    rem, trace = remainder(load_ground("a. b :- a. b."))
    assert text(rem) == "a.\nb.\n"
    assert trace.steps[0].removed_rules == {1}


@pytest.mark.parametrize("fixture", ["stubborn", "passport"])
def test_layered_remainder_unchanged(fixture, request):
    p = request.getfixturevalue(fixture)
    rem, trace = layered_remainder(p)
    assert rem == p and trace == ReductionTrace()


def test_layered_remainder_loop_free():
    assert text(layered_remainder(load_ground("b. a :- not b."))[0]) == "b.\n"


def test_wfm_stubborn(stubborn):
    w = well_founded_model(stubborn)
    assert (w.true_atoms, w.undefined_atoms, w.false_atoms) == (
        atoms("beach", "mountain"),
        frozenset(),
        atoms("travel"),
    )


def test_wfm_vacation(vacation):
    w = well_founded_model(vacation)
    assert w.undefined_atoms == atoms("beach", "mountain", "travel")
    assert not w.true_atoms and not w.false_atoms


def test_wfm_fact():
    w = well_founded_model(load_ground("a."))
    assert w.true_atoms == atoms("a") and w.is_total


def test_wfm_keeps_frozen_base():
    # b loses its only rule; it stays in the base as false
    w = well_founded_model(load_ground("a. b :- not a. c :- b."))
    assert w.false_atoms == atoms("b", "c")


def test_denials_do_not_count_as_heads():
    rem = remainder_program(load_ground("a :- not b. :- a."))
    assert rem.heads() == atoms("a")
    assert rem.facts() == atoms("a")


@given(programs(max_atoms=6, max_rules=12, denials=True), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_confluence(p, seed):
    traced = remainder(p)[0]
    ltraced = layered_remainder(p)[0]
    assert traced.same_rules(remainder_program(p))
    assert ltraced.same_rules(remainder_program(p, layered=True))
    for k in range(5):
        assert randomized_remainder(p, seed + k).same_rules(traced)
        assert randomized_remainder(p, seed + k, layered=True).same_rules(ltraced)


@given(programs(max_rules=10))
@settings(max_examples=150, deadline=None)
def test_idempotent(p):
    rem = remainder_program(p)
    assert remainder_program(rem).same_rules(rem)
    lrem = remainder_program(p, layered=True)
    assert remainder_program(lrem, layered=True).same_rules(lrem)


@given(programs(max_rules=10))
@settings(max_examples=150, deadline=None)
def test_loop_free_remainders_coincide(p):
    g = build_dependency_graph(p)
    acyclic = all(not g.depends_on(r.id, r.id) for r in p.rules)
    if acyclic:
        assert remainder_program(p).same_rules(remainder_program(p, layered=True))


@given(programs(max_rules=10))
@settings(max_examples=150, deadline=None)
def test_wfm_partitions_base(p):
    w = well_founded_model(p)
    assert w.true_atoms | w.undefined_atoms | w.false_atoms == p.herbrand_base
    assert len(w.true_atoms) + len(w.undefined_atoms) + len(w.false_atoms) == len(p.herbrand_base)


def size(p):
    return (len(p.rules), sum(len(r.pos) + len(r.neg) for r in p.rules))


@given(programs(max_rules=10))
@settings(max_examples=150, deadline=None)
def test_every_step_shrinks_program(p):
    for engine in (remainder, layered_remainder):
        current = p
        rem, trace = engine(p)
        bound = size(p)[0] + size(p)[1]
        assert len(trace) <= bound
        # replay the trace to check each recorded step strictly shrinks the program
        steps = iter(trace)
        while True:
            nxt = engine_step(current, engine)
            if nxt is None:
                break
            new, step = nxt
            assert step == next(steps)
            assert size(new) < size(current)
            current = new
        assert current.same_rules(rem)


def engine_step(p, engine):
    steps = [step_positive_reduction]
    steps.append(step_negative_reduction if engine is remainder else step_layered_negative_reduction)
    steps += [step_success, step_failure, step_loop_detection]
    for s in steps:
        res = s(p)
        if res is not None:
            return res
    return None
