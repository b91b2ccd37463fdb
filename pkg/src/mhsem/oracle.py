"""Brute-force reference semantics, random programs and property sweeps."""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass
from typing import Iterable, Optional

from .depgraph import (
    Interpretation,
    build_dependency_graph,
    is_classical_model,
    relevant_part,
    support_status,
    strongly_connected_components,
)
from .reduction import layered_remainder, remainder, remainder_program, well_founded_model
from .semantics import cautious_query, determines, is_stable_model, mh_models
from .syntax import Atom, GroundProgram, Literal, Rule

MAX_ORACLE_ATOMS = 20

PROPERTIES = (
    "existence",
    "sm-subset",
    "wfm",
    "confluence",
    "support",
    "mh-classical",
    "mh-layered",
    "minimality",
    "cumulativity",
    "cumulativity-family",
    "relevance",
)


def _interpretations(p: GroundProgram):
    base = sorted(p.herbrand_base)
    if len(base) > MAX_ORACLE_ATOMS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_ATOMS} atoms, got {len(base)}")
    for mask in range(1 << len(base)):
        yield Interpretation(
            frozenset(base), frozenset(a for i, a in enumerate(base) if mask >> i & 1)
        )


def all_stable_models_bruteforce(p: GroundProgram) -> list[Interpretation]:
    return [m for m in _interpretations(p) if is_stable_model(p, m)]


def all_minimal_models(p: GroundProgram) -> list[Interpretation]:
    """Classical models of the (non-denial) rules with subset-minimal true sets."""
    rules = p.without_denials()
    models = [m for m in _interpretations(p) if is_classical_model(rules, m)]
    return [
        m for m in models if not any(o.true_atoms < m.true_atoms for o in models)
    ]


def _check_loop_set(rules: dict[int, tuple], loop_set: set) -> bool:
    return all(pos & loop_set for h, pos, _ in rules.values() if h in loop_set)


def _shrink_loop_set(rules: dict[int, tuple], seed: set) -> set:
    loop = set(seed)
    changed = True
    while changed:
        changed = False
        for h, pos, _ in rules.values():
            if h in loop and not (pos & loop):
                loop.discard(h)
                changed = True
    return loop


def _in_loop_negatives(rules: dict[int, tuple]) -> dict[int, set]:
    ids = list(rules)
    by_head: dict = {}
    for i in ids:
        h = rules[i][0]
        if h is not None:
            by_head.setdefault(h, []).append(i)
    succ = {i: [j for a in rules[i][1] | rules[i][2] for j in by_head.get(a, ())] for i in ids}
    scc_of = {n: k for k, comp in enumerate(strongly_connected_components(ids, succ.__getitem__)) for n in comp}
    return {
        i: {a for a in rules[i][2] if any(scc_of[j] == scc_of[i] for j in by_head.get(a, ()))}
        for i in ids
    }


def randomized_remainder(p: GroundProgram, seed: int, layered: bool = False) -> GroundProgram:
    """Remainder computed by applying a uniformly chosen enabled rewrite at
    each step. Loop detection uses a random qualifying loop set."""
    rng = random.Random(seed)
    rules = {r.id: (r.head, set(r.pos), set(r.neg)) for r in p.rules}
    while True:
        heads = {h for h, _, _ in rules.values() if h is not None}
        facts = {h for h, pos, neg in rules.values() if h is not None and not pos and not neg}
        options: list[tuple] = []
        in_loop = None
        for i in sorted(rules):
            _, pos, neg = rules[i]
            options += [("P", i, a) for a in sorted(neg - heads)]
            options += [("S", i, a) for a in sorted(pos & facts)]
            if pos - heads:
                options.append(("F", i, None))
            blocked = neg & facts
            if blocked:
                if layered:
                    if in_loop is None:
                        in_loop = _in_loop_negatives(rules)
                    blocked = blocked - in_loop[i]
                if blocked:
                    options.append(("N", i, None))
        atoms = set()
        for h, pos, neg in rules.values():
            atoms |= pos | neg
            if h is not None:
                atoms.add(h)
        greatest = _shrink_loop_set(rules, atoms)
        if any(pos & greatest for _, pos, _ in rules.values()):
            options.append(("L", None, None))
        if not options:
            break
        kind, i, a = rng.choice(options)
        if kind == "L":
            loop = _shrink_loop_set(rules, {x for x in sorted(greatest) if rng.random() < 0.5})
            if not any(pos & loop for _, pos, _ in rules.values()):
                loop = greatest
            assert _check_loop_set(rules, loop)
            rules = {k: v for k, v in rules.items() if not (v[1] & loop)}
        elif kind in ("N", "F"):
            del rules[i]
        else:
            h, pos, neg = rules[i]
            if kind == "P":
                neg = neg - {a}
            else:
                pos = pos - {a}
            # programs are sets: a rewrite may collapse a rule into another
            if any(k != i and v[0] == h and v[1] == pos and v[2] == neg for k, v in rules.items()):
                del rules[i]
            else:
                rules[i] = (h, pos, neg)
    out = tuple(Rule(h, frozenset(pos), frozenset(neg), i) for i, (h, pos, neg) in sorted(rules.items()))
    return GroundProgram(out, p.herbrand_base)


@dataclass(frozen=True)
class GeneratorParams:
    atom_count: int = 6
    rule_count: int = 10
    max_body: int = 3
    negative_probability: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.atom_count < 1 or self.max_body < 0 or self.rule_count < 0:
            raise ValueError("atom_count >= 1, rule_count >= 0 and max_body >= 0 required")
        if not 0.0 <= self.negative_probability <= 1.0:
            raise ValueError("negative_probability must lie in [0, 1]")


def atom_names(n: int) -> list[str]:
    letters = string.ascii_lowercase
    return [letters[i] if i < len(letters) else f"p{i}" for i in range(n)]


def random_program(params: GeneratorParams) -> GroundProgram:
    """A propositional program with at most ``rule_count`` distinct rules."""
    rng = random.Random(params.seed)
    atoms = [Atom(n) for n in atom_names(params.atom_count)]
    rules = []
    for _ in range(params.rule_count):
        head = rng.choice(atoms)
        pos, neg = set(), set()
        for _ in range(rng.randint(0, params.max_body)):
            a = rng.choice(atoms)
            (neg if rng.random() < params.negative_probability else pos).add(a)
        rules.append(Rule(head, frozenset(pos), frozenset(neg)))
    return GroundProgram.from_rules(rules)


def sweep_params(count: int, max_atoms: int, max_rules: int, seed: int) -> list[GeneratorParams]:
    rng = random.Random(seed)
    return [
        GeneratorParams(
            atom_count=rng.randint(min(2, max_atoms), max_atoms),
            rule_count=rng.randint(max(1, max_rules // 3), max_rules),
            max_body=rng.randint(0, 3),
            negative_probability=rng.choice([0.0, 0.25, 0.5, 0.75, 1.0]),
            seed=rng.randrange(2**32),
        )
        for _ in range(count)
    ]


def _true_family(p: GroundProgram) -> set[frozenset[Atom]]:
    return mh_models(p).true_sets()


def check_program(
    p: GroundProgram, properties: Iterable[str] = PROPERTIES, seed: int = 0, orders: int = 50
) -> list[str]:
    """Check each named property on ``p``; returns a description of every
    violation found (empty when all hold)."""
    properties = set(properties)
    unknown = properties - set(PROPERTIES)
    if unknown:
        raise ValueError(f"unknown properties: {sorted(unknown)}")
    failures: list[str] = []
    rng = random.Random(seed)
    models = mh_models(p)
    true_sets = models.true_sets()

    if "existence" in properties and not models.models:
        failures.append("existence: no MH model")

    if "sm-subset" in properties:
        sms = {m.true_atoms for m in all_stable_models_bruteforce(p)}
        if not sms <= true_sets:
            failures.append(f"sm-subset: stable models {_fmt(sms - true_sets)} missing from MH models")
        stable_mh = {m.true_atoms for m in models if is_stable_model(p, m.model)}
        if stable_mh != sms:
            failures.append("sm-subset: stable MH models differ from brute-force stable models")

    if "wfm" in properties:
        wfm = well_founded_model(p)
        upper = wfm.true_atoms | wfm.undefined_atoms
        if not any(wfm.true_atoms <= s <= upper for s in true_sets):
            failures.append("wfm: no MH model between WFM+ and WFM+u")

    if "confluence" in properties:
        for layered in (False, True):
            label = "layered remainder" if layered else "remainder"
            traced = (layered_remainder if layered else remainder)(p)[0]
            fast = remainder_program(p, layered=layered)
            if not traced.same_rules(fast):
                failures.append(f"confluence: traced and batch {label} differ")
            for _ in range(orders):
                s = rng.randrange(2**32)
                if not randomized_remainder(p, s, layered).same_rules(traced):
                    failures.append(f"confluence: {label} differs under order seed {s}")
                    break

    if properties & {"support", "mh-layered"}:
        g = build_dependency_graph(p)
    if "support" in properties:
        base = sorted(p.herbrand_base)
        for _ in range(5):
            i = Interpretation(frozenset(base), frozenset(a for a in base if rng.random() < 0.5))
            for a in base:
                s = support_status(p, g, i, a)
                if s.classical and not s.layered:
                    failures.append(f"support: {a} classically but not layer supported")

    if "mh-classical" in properties:
        for m in models:
            if not is_classical_model(p, m.model):
                failures.append(f"mh-classical: {_fmt([m.true_atoms])} is not a classical model")

    if "mh-layered" in properties:
        for m in models:
            for a in sorted(m.true_atoms):
                if not support_status(p, g, m.model, a).layered:
                    failures.append(f"mh-layered: {a} not layer supported in {_fmt([m.true_atoms])}")

    if "minimality" in properties:
        for m in models:
            for w in m.witnesses:
                for size in range(1, len(w)):
                    for sub in itertools.combinations(sorted(w), size):
                        if determines(p, sub) is not None:
                            failures.append(f"minimality: witness {_fmt([w])} has determining subset")

    if properties & {"cumulativity", "cumulativity-family"} and true_sets:
        always = frozenset.intersection(*true_sets)
        for a in sorted(always):
            extended = _true_family(p.with_facts([a]))
            if "cumulativity-family" in properties and extended != true_sets:
                failures.append(f"cumulativity-family: adding fact {a} changes the MH models")
            if "cumulativity" in properties:
                after = frozenset.intersection(*extended) if extended else p.herbrand_base
                if after != always:
                    failures.append(f"cumulativity: adding fact {a} changes the cautious consequences")

    if "relevance" in properties:
        for a in sorted(p.herbrand_base):
            q = [Literal(a, True)]
            whole = cautious_query(p, q).holds
            local = cautious_query(relevant_part(p, a), q).holds
            if whole != local:
                failures.append(f"relevance: cautious {a} is {whole} on P but {local} on Rel_P({a})")
    return failures


def _fmt(sets) -> str:
    return ", ".join("{" + ", ".join(str(a) for a in sorted(s)) + "}" for s in sets)


@dataclass
class SweepReport:
    checked: int = 0
    counterexample: Optional[GroundProgram] = None
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def sweep(
    programs: int,
    max_atoms: int = 8,
    max_rules: int = 12,
    seed: int = 0,
    properties: Iterable[str] = PROPERTIES,
    orders: int = 50,
) -> SweepReport:
    """Run ``check_program`` on random programs, stopping at the first failure."""
    properties = tuple(properties)
    report = SweepReport()
    for params in sweep_params(programs, max_atoms, max_rules, seed):
        p = random_program(params)
        failures = check_program(p, properties, seed=params.seed, orders=orders)
        report.checked += 1
        if failures:
            report.counterexample = p
            report.failures = tuple(failures)
            break
    return report
