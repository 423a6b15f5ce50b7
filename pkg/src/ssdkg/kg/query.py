"""Basic-graph-pattern query evaluation.

The supported query language is the conjunctive subset: an ordered list of
triple patterns whose terms are constants or named variables, evaluated
against graph edges plus the class-assignment pseudo-triples (s, a, class).
No OPTIONAL, no UNION; equality filters fold into constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .model import TYPE_RELATION, KnowledgeGraph


class PatternError(ValueError):
    """Structurally invalid graph pattern."""


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


Term = "Var | str"


@dataclass(frozen=True)
class TriplePattern:
    subject: Var | str
    relation: Var | str
    object: Var | str

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.relation, self.object) if isinstance(t, Var)}

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.relation!r} {self.object!r})"


@dataclass(frozen=True)
class GraphPattern:
    patterns: tuple[TriplePattern, ...]
    select: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.patterns:
            raise PatternError("pattern must contain at least one triple pattern")
        available = set()
        for p in self.patterns:
            available |= p.variables()
        select = self.select or tuple(sorted(available))
        object.__setattr__(self, "select", select)
        missing = [v for v in select if v not in available]
        if missing:
            raise PatternError(f"selected variables absent from patterns: {', '.join(missing)}")

    def text(self) -> str:
        """Stable one-line rendering, used in audit records."""
        body = " . ".join(
            " ".join(f"?{t.name}" if isinstance(t, Var) else str(t) for t in (p.subject, p.relation, p.object))
            for p in self.patterns
        )
        return f"SELECT {' '.join('?' + v for v in self.select)} WHERE {{ {body} }}"


@dataclass(frozen=True)
class BindingSet:
    rows: tuple[dict[str, str], ...]
    pattern: GraphPattern = field(compare=False, default=None)  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[dict[str, str]]:
        return iter(self.rows)

    def column(self, var: str) -> list[str]:
        return [row[var] for row in self.rows]


def _graph_facts(graph: KnowledgeGraph) -> list[tuple[str, str, str]]:
    facts = list(graph.edges)
    for node_id, node in graph.nodes.items():
        if node.cls is not None:
            facts.append((node_id, TYPE_RELATION, node.cls))
    return facts


def _match_term(term: Var | str, value: str, binding: dict[str, str]) -> dict[str, str] | None:
    if isinstance(term, Var):
        bound = binding.get(term.name)
        if bound is None:
            out = dict(binding)
            out[term.name] = value
            return out
        return binding if bound == value else None
    return binding if term == value else None


def evaluate_pattern(graph: KnowledgeGraph, pattern: GraphPattern) -> BindingSet:
    """All variable assignments whose substitution satisfies every triple
    pattern, projected onto the selected variables.

    Rows are deduplicated and sorted lexicographically by bound entity ids so
    results are deterministic.
    """
    facts = _graph_facts(graph)
    bindings: list[dict[str, str]] = [{}]
    for tp in pattern.patterns:
        extended: list[dict[str, str]] = []
        for binding in bindings:
            for s, r, o in facts:
                b = _match_term(tp.subject, s, binding)
                if b is None:
                    continue
                b = _match_term(tp.relation, r, b)
                if b is None:
                    continue
                b = _match_term(tp.object, o, b)
                if b is None:
                    continue
                extended.append(b)
        bindings = extended
        if not bindings:
            break

    projected = {tuple(b[v] for v in pattern.select): b for b in bindings}
    rows = tuple(
        {v: values[i] for i, v in enumerate(pattern.select)}
        for values in sorted(projected)
    )
    return BindingSet(rows=rows, pattern=pattern)


def pattern(
    triples: Iterable[tuple[Var | str, Var | str, Var | str]],
    select: Iterable[str] = (),
) -> GraphPattern:
    """Convenience constructor from plain tuples."""
    return GraphPattern(
        patterns=tuple(TriplePattern(*t) for t in triples),
        select=tuple(select),
    )
