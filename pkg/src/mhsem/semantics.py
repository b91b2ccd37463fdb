"""Minimal Hypotheses models, stable-model checks, denials and queries."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .depgraph import Interpretation, is_classical_model, relevant_part
from .reduction import remainder_program
from .syntax import Atom, GroundProgram, Literal, Rule

MAX_MINIMALITY_ATOMS = 20


def _negated_atoms(p: GroundProgram) -> frozenset[Atom]:
    return frozenset(a for r in p.rules for a in r.neg)


def hypotheses_set(p: GroundProgram) -> frozenset[Atom]:
    """Atoms occurring default-negated in the layered remainder."""
    return _negated_atoms(remainder_program(p.without_denials(), layered=True))


def classical_hypotheses_set(p: GroundProgram) -> frozenset[Atom]:
    """Atoms occurring default-negated in the remainder."""
    return _negated_atoms(remainder_program(p.without_denials()))


def determines(p: GroundProgram, h: Iterable[Atom]) -> Optional[Interpretation]:
    """The total model fixed by assuming ``h`` true, or None if
    ``Rem(p ∪ h)`` leaves some atom undefined."""
    h = frozenset(h)
    rem = remainder_program(p.with_facts(h))
    facts = rem.facts()
    if facts != rem.heads():
        return None
    return Interpretation(p.herbrand_base | h, facts)


@dataclass(frozen=True)
class MHModel:
    model: Interpretation
    witnesses: tuple[frozenset[Atom], ...]

    @property
    def true_atoms(self) -> frozenset[Atom]:
        return self.model.true_atoms

    def satisfies(self, query: Iterable[Literal]) -> bool:
        return self.model.satisfies_all(query)

    def sort_key(self) -> list[Atom]:
        return sorted(self.true_atoms)

    def to_json(self) -> dict:
        return {
            "true": [str(a) for a in sorted(self.true_atoms)],
            "witnesses": [[str(a) for a in sorted(w)] for w in self.witnesses],
        }


@dataclass(frozen=True)
class ModelSet:
    """Result of an MH enumeration. ``complete`` is False when the subset
    budget ran out before every candidate was examined."""

    models: tuple[MHModel, ...]
    hypotheses: frozenset[Atom]
    complete: bool = True

    def __iter__(self):
        return iter(self.models)

    def __len__(self):
        return len(self.models)

    def true_sets(self) -> set[frozenset[Atom]]:
        return {m.true_atoms for m in self.models}

    def to_json(self) -> dict:
        return {"models": [m.to_json() for m in self.models], "complete": self.complete}


def _witness_key(w: frozenset[Atom]) -> tuple:
    return (len(w), sorted(w))


def mh_models(p: GroundProgram, limit: Optional[int] = None) -> ModelSet:
    """Enumerate the MH models of the denial-free part of ``p``.

    Hypothesis subsets are tried by increasing size; a subset strictly
    containing an earlier successful non-empty subset is skipped. ``limit``
    bounds the number of non-empty subsets examined.
    """
    p = p.without_denials()
    hyps = sorted(hypotheses_set(p))
    found: dict[frozenset[Atom], tuple[Interpretation, list[frozenset[Atom]]]] = {}

    def record(h, m):
        found.setdefault(m.true_atoms, (m, []))[1].append(h)

    empty = determines(p, ())
    if empty is not None:
        record(frozenset(), empty)

    successes: list[frozenset[Atom]] = []
    explored = 0
    complete = True
    for size in range(1, len(hyps) + 1):
        for combo in itertools.combinations(hyps, size):
            h = frozenset(combo)
            if any(w < h for w in successes):
                continue
            if limit is not None and explored >= limit:
                complete = False
                break
            explored += 1
            m = determines(p, h)
            if m is not None:
                successes.append(h)
                record(h, m)
        if not complete:
            break

    models = [
        MHModel(m, tuple(sorted(ws, key=_witness_key))) for m, ws in found.values()
    ]
    models.sort(key=MHModel.sort_key)
    return ModelSet(tuple(models), frozenset(hyps), complete)


def gl_reduct(p: GroundProgram, m: Interpretation) -> GroundProgram:
    rules = tuple(
        Rule(r.head, r.pos, frozenset(), r.id) for r in p.rules if not (r.neg & m.true_atoms)
    )
    return GroundProgram(rules, p.herbrand_base)


def least_model(p: GroundProgram) -> frozenset[Atom]:
    if not p.is_definite():
        raise ValueError("least_model needs a definite program")
    model: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for r in p.rules:
            if r.head is not None and r.head not in model and r.pos <= model:
                model.add(r.head)
                changed = True
    return frozenset(model)


def violates_denials(m: Interpretation, denials: Iterable[Rule]) -> bool:
    return any(m.satisfies_body(d) for d in denials)


def is_stable_model(p: GroundProgram, m: Interpretation) -> bool:
    if violates_denials(m, p.denials()):
        return False
    return least_model(gl_reduct(p, m)) == m.true_atoms


def is_minimal_model(p: GroundProgram, m: Interpretation) -> bool:
    """True iff ``m`` is a classical model of the rules and no strict subset
    of its true atoms is one. Brute force over subsets of the true atoms."""
    rules = p.without_denials()
    if not is_classical_model(rules, m):
        return False
    atoms = sorted(m.true_atoms)
    if len(atoms) > MAX_MINIMALITY_ATOMS:
        raise ValueError(f"minimality check limited to {MAX_MINIMALITY_ATOMS} true atoms")
    for size in range(len(atoms)):
        for sub in itertools.combinations(atoms, size):
            if is_classical_model(rules, Interpretation(m.base, frozenset(sub))):
                return False
    return True


def filter_denials(models: Iterable[MHModel], denials: Iterable[Rule]) -> tuple[MHModel, ...]:
    denials = tuple(denials)
    return tuple(m for m in models if not violates_denials(m.model, denials))


def solve(p: GroundProgram, limit: Optional[int] = None) -> ModelSet:
    """MH models of ``p`` with its denials applied."""
    result = mh_models(p, limit)
    kept = filter_denials(result.models, p.denials())
    return ModelSet(kept, result.hypotheses, result.complete)


@dataclass(frozen=True)
class QueryAnswer:
    holds: bool
    witness: Optional[MHModel] = None
    complete: bool = True

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "witness": self.witness.to_json() if self.witness else None,
            "complete": self.complete,
        }


def _query_program(p: GroundProgram, q: frozenset[Literal], use_relevance: bool) -> GroundProgram:
    atoms = {lit.atom for lit in q}
    if len(atoms) != len(q):
        raise ValueError("inconsistent query: an atom occurs with both signs")
    if use_relevance and len(q) == 1 and not p.denials():
        (lit,) = q
        if lit.positive and lit.atom in p.herbrand_base:
            return relevant_part(p, lit.atom)
    return p


def brave_query(
    p: GroundProgram, q: Iterable[Literal], use_relevance: bool = False, limit: Optional[int] = None
) -> QueryAnswer:
    q = frozenset(q)
    models = solve(_query_program(p, q, use_relevance), limit)
    for m in models:
        if m.satisfies(q):
            return QueryAnswer(True, m, models.complete)
    return QueryAnswer(False, None, models.complete)


def cautious_query(
    p: GroundProgram, q: Iterable[Literal], use_relevance: bool = False, limit: Optional[int] = None
) -> QueryAnswer:
    q = frozenset(q)
    models = solve(_query_program(p, q, use_relevance), limit)
    for m in models:
        if not m.satisfies(q):
            return QueryAnswer(False, m, models.complete)
    return QueryAnswer(True, None, models.complete)
