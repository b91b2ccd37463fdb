"""Remainder rewriting: the six rewrite steps, the X and LX systems and the WFM.

Two routes compute the same fixpoints.  :func:`remainder` and
:func:`layered_remainder` apply one rewrite at a time and record a trace;
:func:`remainder_program` applies every enabled P/N/S/F instance in a single
pass before falling back to loop detection.  All instances enabled in a pass
stay enabled after applying the others (facts and missing heads are never
undone), so a pass is a legal sequence of single steps and confluence makes
both routes agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

from .depgraph import build_dependency_graph, loop_atoms, RuleGraph, strongly_connected_components
from .syntax import Atom, GroundProgram, Literal, Rule


class StepKind(enum.Enum):
    POSITIVE_REDUCTION = "PositiveReduction"
    NEGATIVE_REDUCTION = "NegativeReduction"
    LAYERED_NEGATIVE_REDUCTION = "LayeredNegativeReduction"
    SUCCESS = "Success"
    FAILURE = "Failure"
    LOOP_DETECTION = "LoopDetection"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Step:
    kind: StepKind
    removed_rules: frozenset[int] = frozenset()
    removed_literals: frozenset[tuple[int, Literal]] = frozenset()
    loop_set: Optional[frozenset[Atom]] = None

    def __post_init__(self):
        if (self.loop_set is not None) != (self.kind is StepKind.LOOP_DETECTION):
            raise ValueError("loop_set is recorded for loop detection steps only")

    def describe(self) -> str:
        parts = [str(i) for i in sorted(self.removed_rules)]
        parts += [f"{i}:{lit}" for i, lit in sorted(self.removed_literals, key=lambda x: (x[0], x[1].sort_key()))]
        line = f"{self.kind} removed={','.join(parts)}"
        if self.loop_set is not None:
            line += " loop={" + ",".join(str(a) for a in sorted(self.loop_set)) + "}"
        return line


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[Step, ...] = ()

    def kinds(self) -> list[StepKind]:
        return [s.kind for s in self.steps]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def format(self) -> str:
        return "".join(s.describe() + "\n" for s in self.steps)


# An enabled rewrite: (kind, rule id, literal removed or None for deletions).
Instance = tuple[StepKind, int, Optional[Literal]]


def _by_id(p: GroundProgram) -> list[Rule]:
    return sorted(p.rules, key=lambda r: r.id)


def _sorted_lits(atoms, positive: bool) -> list[Literal]:
    return [Literal(a, positive) for a in sorted(atoms)]


def enabled_instances(
    p: GroundProgram, kind: StepKind, g: Optional[RuleGraph] = None
) -> list[Instance]:
    """Every enabled single-rule rewrite of ``kind``, by rule id then literal."""
    heads, facts = p.heads(), p.facts()
    out: list[Instance] = []
    if kind is StepKind.LAYERED_NEGATIVE_REDUCTION and g is None:
        g = build_dependency_graph(p)
    for r in _by_id(p):
        if kind is StepKind.POSITIVE_REDUCTION:
            out += [(kind, r.id, lit) for lit in _sorted_lits(r.neg - heads, False)]
        elif kind is StepKind.NEGATIVE_REDUCTION:
            if r.neg & facts:
                out.append((kind, r.id, None))
        elif kind is StepKind.LAYERED_NEGATIVE_REDUCTION:
            if (r.neg & facts) - loop_atoms(p, g, r):
                out.append((kind, r.id, None))
        elif kind is StepKind.SUCCESS:
            out += [(kind, r.id, lit) for lit in _sorted_lits(r.pos & facts, True)]
        elif kind is StepKind.FAILURE:
            if r.pos - heads:
                out.append((kind, r.id, None))
        else:
            raise ValueError(f"{kind} is not a single-rule rewrite")
    return out


def apply_instance(p: GroundProgram, inst: Instance) -> tuple[GroundProgram, Step]:
    kind, rule_id, lit = inst
    if lit is None:
        rules = tuple(r for r in p.rules if r.id != rule_id)
        return GroundProgram(rules, p.herbrand_base), Step(kind, frozenset([rule_id]))
    old = p.rule(rule_id)
    if lit.positive:
        new = Rule(old.head, old.pos - {lit.atom}, old.neg, old.id)
    else:
        new = Rule(old.head, old.pos, old.neg - {lit.atom}, old.id)
    removed_rules: frozenset[int] = frozenset()
    if any(r.key() == new.key() for r in p.rules if r.id != rule_id):
        # identical to a surviving rule; programs are sets
        rules = tuple(r for r in p.rules if r.id != rule_id)
        removed_rules = frozenset([rule_id])
    else:
        rules = tuple(new if r.id == rule_id else r for r in p.rules)
    step = Step(kind, removed_rules, frozenset([(rule_id, lit)]))
    return GroundProgram(rules, p.herbrand_base), step


def founded_atoms(rules) -> set[Atom]:
    """Least fixpoint of the positive parts of ``rules`` (negation ignored)."""
    waiting: dict[Atom, list[list]] = {}
    founded: set[Atom] = set()
    todo: list[Atom] = []
    for r in rules:
        if r.head is None:
            continue
        if not r.pos:
            if r.head not in founded:
                founded.add(r.head)
                todo.append(r.head)
            continue
        entry = [r.head, len(r.pos)]
        for a in r.pos:
            waiting.setdefault(a, []).append(entry)
    while todo:
        a = todo.pop()
        for entry in waiting.get(a, ()):
            entry[1] -= 1
            if entry[1] == 0 and entry[0] not in founded:
                founded.add(entry[0])
                todo.append(entry[0])
    return founded


def greatest_loop_set(p: GroundProgram) -> frozenset[Atom]:
    """Greatest ``A`` such that every rule with head in ``A`` has a positive
    body atom in ``A``, over the atoms occurring in ``p``."""
    atoms: set[Atom] = set()
    for r in p.rules:
        atoms |= r.atoms()
    return frozenset(atoms - founded_atoms(p.rules))


def apply_loop_detection(p: GroundProgram, loop_set: frozenset[Atom]) -> Optional[tuple[GroundProgram, Step]]:
    removed = frozenset(r.id for r in p.rules if r.pos & loop_set)
    if not removed:
        return None
    rules = tuple(r for r in p.rules if r.id not in removed)
    return GroundProgram(rules, p.herbrand_base), Step(StepKind.LOOP_DETECTION, removed, loop_set=loop_set)


def _first(p, kind, g=None):
    found = enabled_instances(p, kind, g)
    return apply_instance(p, found[0]) if found else None


def step_positive_reduction(p: GroundProgram):
    """Drop ``not b`` from a body when ``b`` heads no rule."""
    return _first(p, StepKind.POSITIVE_REDUCTION)


def step_negative_reduction(p: GroundProgram):
    """Delete a rule with ``not b`` in its body when ``b`` is a fact."""
    return _first(p, StepKind.NEGATIVE_REDUCTION)


def step_layered_negative_reduction(p: GroundProgram, g: Optional[RuleGraph] = None):
    """Negative reduction restricted to ``not b`` outside the rule's loop."""
    return _first(p, StepKind.LAYERED_NEGATIVE_REDUCTION, g)


def step_success(p: GroundProgram):
    return _first(p, StepKind.SUCCESS)


def step_failure(p: GroundProgram):
    return _first(p, StepKind.FAILURE)


def step_loop_detection(p: GroundProgram):
    return apply_loop_detection(p, greatest_loop_set(p))


def _fixpoint(p: GroundProgram, steps: list[Callable]) -> tuple[GroundProgram, ReductionTrace]:
    trace = []
    while True:
        for step in steps:
            res = step(p)
            if res is not None:
                p, record = res
                trace.append(record)
                break
        else:
            return p, ReductionTrace(tuple(trace))


def remainder(p: GroundProgram) -> tuple[GroundProgram, ReductionTrace]:
    """Fixpoint of P, N, S, F, L (tried in that order, restarting after each)."""
    return _fixpoint(
        p,
        [step_positive_reduction, step_negative_reduction, step_success, step_failure, step_loop_detection],
    )


def layered_remainder(p: GroundProgram) -> tuple[GroundProgram, ReductionTrace]:
    """Fixpoint of P, LN, S, F, L; the rule graph is rebuilt for every LN probe."""
    return _fixpoint(
        p,
        [
            step_positive_reduction,
            step_layered_negative_reduction,
            step_success,
            step_failure,
            step_loop_detection,
        ],
    )


def _loop_atoms_by_rule(rules: list[Rule]) -> dict[int, set[Atom]]:
    by_head: dict[Atom, list[int]] = {}
    for i, r in enumerate(rules):
        if r.head is not None:
            by_head.setdefault(r.head, []).append(i)
    edges = [[j for a in r.neg for j in by_head.get(a, ())] + [j for a in r.pos for j in by_head.get(a, ())] for r in rules]
    scc_of = {}
    for k, comp in enumerate(strongly_connected_components(range(len(rules)), edges.__getitem__)):
        for n in comp:
            scc_of[n] = k
    return {
        i: {a for a in r.neg if any(scc_of[j] == scc_of[i] for j in by_head.get(a, ()))}
        for i, r in enumerate(rules)
    }


def remainder_program(p: GroundProgram, layered: bool = False) -> GroundProgram:
    """The remainder (or layered remainder) of ``p`` without a trace."""
    rules = list(p.rules)
    while True:
        heads = {r.head for r in rules if r.head is not None}
        facts = {r.head for r in rules if r.head is not None and not r.pos and not r.neg}
        in_loop = _loop_atoms_by_rule(rules) if layered else None
        changed = False
        seen = set()
        out = []
        for i, r in enumerate(rules):
            if r.pos and not r.pos <= heads:
                changed = True
                continue
            if r.neg and r.neg & facts:
                if not layered or (r.neg & facts) - in_loop[i]:
                    changed = True
                    continue
            pos, neg = r.pos, r.neg
            if pos and pos & facts:
                pos = pos - facts
            if neg and not neg <= heads:
                neg = neg & heads
            if pos is not r.pos or neg is not r.neg:
                changed = True
                r = Rule(r.head, pos, neg, r.id)
            key = (r.head, pos, neg)
            if key in seen:
                changed = True
                continue
            seen.add(key)
            out.append(r)
        rules = out
        if changed:
            continue
        founded = founded_atoms(rules)
        kept = [r for r in rules if r.pos <= founded]
        if len(kept) == len(rules):
            return GroundProgram(tuple(rules), p.herbrand_base)
        rules = kept


@dataclass(frozen=True)
class ThreeValuedModel:
    true_atoms: frozenset[Atom]
    undefined_atoms: frozenset[Atom]
    false_atoms: frozenset[Atom]

    def __post_init__(self):
        if (self.true_atoms & self.undefined_atoms) or (self.true_atoms & self.false_atoms) or (
            self.undefined_atoms & self.false_atoms
        ):
            raise ValueError("truth classes overlap")

    @property
    def base(self) -> frozenset[Atom]:
        return self.true_atoms | self.undefined_atoms | self.false_atoms

    @property
    def is_total(self) -> bool:
        return not self.undefined_atoms


def well_founded_model(p: GroundProgram) -> ThreeValuedModel:
    rem = remainder_program(p)
    facts, heads = rem.facts(), rem.heads()
    return ThreeValuedModel(facts, heads - facts, p.herbrand_base - heads)
