"""Ontology schema: classes, typed relations with domain/range, subclass
axioms, and the triple admission check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .model import KnowledgeGraph, SSD_NS, DATA_NS, ANN_NS


class SchemaError(ValueError):
    """Ill-formed ontology schema."""


@dataclass(frozen=True)
class Relation:
    name: str
    domain: str
    range: str


@dataclass(frozen=True)
class OntologySchema:
    """Shared vocabulary constraints for both literature and data graphs."""

    classes: frozenset[str]
    relations: dict[str, Relation]
    subclass_of: frozenset[tuple[str, str]]  # (child, parent)
    directional: frozenset[str] = frozenset()
    prefixes: dict[str, str] = field(
        default_factory=lambda: {"ex": SSD_NS, "d": DATA_NS, "ann": ANN_NS}
    )

    def __post_init__(self) -> None:
        for rel in self.relations.values():
            if rel.domain not in self.classes:
                raise SchemaError(f"relation {rel.name}: undeclared domain {rel.domain}")
            if rel.range not in self.classes:
                raise SchemaError(f"relation {rel.name}: undeclared range {rel.range}")
        for child, parent in self.subclass_of:
            if child not in self.classes or parent not in self.classes:
                raise SchemaError(f"subclass axiom references undeclared class: {child} < {parent}")
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        parents: dict[str, set[str]] = {}
        for child, parent in self.subclass_of:
            parents.setdefault(child, set()).add(parent)
        state: dict[str, int] = {}

        def visit(c: str) -> None:
            state[c] = 1
            for p in parents.get(c, ()):
                if state.get(p) == 1:
                    raise SchemaError(f"subclass cycle through {p}")
                if state.get(p, 0) == 0:
                    visit(p)
            state[c] = 2

        for c in self.classes:
            if state.get(c, 0) == 0:
                visit(c)

    def is_subclass(self, cls: str, ancestor: str) -> bool:
        """Reflexive-transitive subclass test."""
        if cls == ancestor:
            return True
        seen = {cls}
        frontier = [cls]
        while frontier:
            c = frontier.pop()
            for child, parent in self.subclass_of:
                if child == c and parent not in seen:
                    if parent == ancestor:
                        return True
                    seen.add(parent)
                    frontier.append(parent)
        return False

    def is_directional(self, relation: str) -> bool:
        return relation in self.directional


@dataclass(frozen=True)
class TypeCheckResult:
    accepted: bool
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted


REASON_UNKNOWN_RELATION = "unknown-relation"
REASON_DOMAIN = "domain-violation"
REASON_RANGE = "range-violation"
REASON_UNRESOLVED = "unresolved-class"


def check_triple(
    triple: tuple[str, str, str],
    schema: OntologySchema,
    graph: KnowledgeGraph | None = None,
    classes: Mapping[str, str] | None = None,
) -> TypeCheckResult:
    """Admission check for one triple.

    Accepts iff the relation is declared and the subject/object classes fall
    under the declared domain/range (subclass closure). Entity classes are
    resolved from ``classes`` first, then from ``graph``; an unresolvable
    class yields a rejection with its own reason code rather than a crash.
    """
    s, r, o = triple
    rel = schema.relations.get(r)
    if rel is None:
        return TypeCheckResult(False, REASON_UNKNOWN_RELATION, f"relation {r} not declared")

    def resolve(entity: str) -> str | None:
        if classes and entity in classes:
            return classes[entity]
        if graph is not None:
            return graph.class_of(entity)
        return None

    s_cls = resolve(s)
    if s_cls is None:
        return TypeCheckResult(False, REASON_UNRESOLVED, f"class of subject {s} unresolved")
    o_cls = resolve(o)
    if o_cls is None:
        return TypeCheckResult(False, REASON_UNRESOLVED, f"class of object {o} unresolved")

    if not schema.is_subclass(s_cls, rel.domain):
        return TypeCheckResult(
            False, REASON_DOMAIN, f"subject {s}:{s_cls} outside domain {rel.domain} of {r}"
        )
    if not schema.is_subclass(o_cls, rel.range):
        return TypeCheckResult(
            False, REASON_RANGE, f"object {o}:{o_cls} outside range {rel.range} of {r}"
        )
    return TypeCheckResult(True)
