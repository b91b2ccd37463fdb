"""Rule dependency graph, SCCs, loop-free body parts, relevance and support."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .syntax import Atom, GroundProgram, Literal, Rule


def strongly_connected_components(nodes: Iterable, successors) -> list[list]:
    """Tarjan's algorithm, iterative. Components come out in reverse
    topological order (a component is emitted after everything it reaches)."""
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    sccs: list[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    lowlink[parent] = min(lowlink[parent], lowlink[v])
                if lowlink[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    sccs.append(comp)
    return sccs


@dataclass(frozen=True)
class RuleGraph:
    """Edges point from a rule to the rules it depends on directly, i.e.
    ``(ra, r)`` whenever ``head(r)`` occurs in the body of ``ra``."""

    nodes: tuple[int, ...]
    edges: dict[int, frozenset[int]]
    scc_of: dict[int, int]
    scc_dag: dict[int, frozenset[int]]
    _reach: dict = field(default_factory=dict, repr=False, compare=False)

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(a, b) for a, succ in self.edges.items() for b in succ}

    def components(self) -> list[list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for n in self.nodes:
            out[self.scc_of[n]].append(n)
        return [sorted(out[i]) for i in sorted(out)]

    def reachable(self, rule_id: int) -> frozenset[int]:
        """Rules reachable from ``rule_id`` by a path of length >= 1."""
        if rule_id not in self._reach:
            seen: set[int] = set()
            todo = list(self.edges[rule_id])
            while todo:
                n = todo.pop()
                if n in seen:
                    continue
                seen.add(n)
                todo.extend(self.edges[n])
            self._reach[rule_id] = frozenset(seen)
        return self._reach[rule_id]

    def depends_on(self, ra: int, r: int) -> bool:
        return r in self.reachable(ra)


def build_dependency_graph(p: GroundProgram) -> RuleGraph:
    by_head: dict[Atom, list[int]] = defaultdict(list)
    for r in p.rules:
        if r.head is not None:
            by_head[r.head].append(r.id)
    edges = {
        r.id: frozenset(t for a in r.body_atoms() for t in by_head.get(a, ()))
        for r in p.rules
    }
    nodes = tuple(r.id for r in p.rules)
    sccs = strongly_connected_components(nodes, lambda n: sorted(edges[n]))
    # number SCCs so that dependees get lower indices
    scc_of = {n: i for i, comp in enumerate(sccs) for n in comp}
    dag: dict[int, set[int]] = {i: set() for i in range(len(sccs))}
    for a, succ in edges.items():
        for b in succ:
            if scc_of[a] != scc_of[b]:
                dag[scc_of[a]].add(scc_of[b])
    return RuleGraph(nodes, edges, scc_of, {k: frozenset(v) for k, v in dag.items()})


def _rules_by_head(p: GroundProgram) -> dict[Atom, list[Rule]]:
    out: dict[Atom, list[Rule]] = defaultdict(list)
    for r in p.rules:
        if r.head is not None:
            out[r.head].append(r)
    return out


def loop_atoms(p: GroundProgram, g: RuleGraph, r: Rule) -> frozenset[Atom]:
    """Body atoms of ``r`` having some rule that depends on ``r``.

    Such a rule is a direct dependee of ``r``; it depends back on ``r``
    exactly when both sit in the same SCC.
    """
    scc = g.scc_of[r.id]
    heads = _rules_by_head(p)
    return frozenset(
        a for a in r.body_atoms() if any(g.scc_of[ra.id] == scc for ra in heads.get(a, ()))
    )


def overline_body(p: GroundProgram, g: RuleGraph, r: Rule) -> frozenset[Literal]:
    """The part of ``body(r)`` whose atoms do not depend on ``r``."""
    in_loop = loop_atoms(p, g, r)
    return frozenset(lit for lit in r.body if lit.atom not in in_loop)


def overline_bodies(p: GroundProgram, g: RuleGraph) -> dict[int, frozenset[Literal]]:
    heads = _rules_by_head(p)
    out = {}
    for r in p.rules:
        scc = g.scc_of[r.id]
        out[r.id] = frozenset(
            lit
            for lit in r.body
            if not any(g.scc_of[ra.id] == scc for ra in heads.get(lit.atom, ()))
        )
    return out


def relevant_part(p: GroundProgram, a: Atom) -> GroundProgram:
    """Rules for ``a`` plus every rule some rule for ``a`` depends on."""
    g = build_dependency_graph(p)
    keep: set[int] = set()
    for r in p.rules:
        if r.head == a:
            keep.add(r.id)
            keep |= g.reachable(r.id)
    rules = tuple(r for r in p.rules if r.id in keep)
    base = {a}
    for r in rules:
        base |= r.atoms()
    return GroundProgram(rules, frozenset(base))


@dataclass(frozen=True)
class Interpretation:
    """Total two-valued interpretation: atoms of ``base`` outside
    ``true_atoms`` are false."""

    base: frozenset[Atom]
    true_atoms: frozenset[Atom]

    def __post_init__(self):
        if not self.true_atoms <= self.base:
            raise ValueError("true atoms must be drawn from the base")

    def satisfies(self, lit: Literal) -> bool:
        return (lit.atom in self.true_atoms) == lit.positive

    def satisfies_all(self, lits: Iterable[Literal]) -> bool:
        return all(self.satisfies(lit) for lit in lits)

    def satisfies_body(self, r: Rule) -> bool:
        return r.pos <= self.true_atoms and not (r.neg & self.true_atoms)

    @property
    def false_atoms(self) -> frozenset[Atom]:
        return self.base - self.true_atoms


class Support(NamedTuple):
    classical: bool
    layered: bool


def support_status(p: GroundProgram, g: RuleGraph, i: Interpretation, a: Atom) -> Support:
    rules = [r for r in p.rules if r.head == a]
    classical = any(i.satisfies_body(r) for r in rules)
    layered = any(i.satisfies_all(overline_body(p, g, r)) for r in rules)
    return Support(classical, layered)


def is_classical_model(p: GroundProgram, i: Interpretation) -> bool:
    """Every rule with a true body has a true head; denials have false bodies."""
    for r in p.rules:
        if i.satisfies_body(r) and (r.head is None or r.head not in i.true_atoms):
            return False
    return True


def to_dot(p: GroundProgram, g: RuleGraph) -> str:
    lines = ["digraph rules {"]
    for idx, comp in enumerate(g.components()):
        lines.append(f"  subgraph cluster_{idx} {{")
        lines.append(f'    label="scc {idx}";')
        for n in comp:
            label = str(p.rule(n)).replace('"', '\\"')
            lines.append(f'    r{n} [label="{label}"];')
        lines.append("  }")
    for a, b in sorted(g.edge_pairs()):
        lines.append(f"  r{a} -> r{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
