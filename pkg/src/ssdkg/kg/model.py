"""Typed knowledge-graph model: nodes with classes, labeled edges, per-triple
provenance annotations, and graph merging.

Graphs are immutable values after construction; every mutating helper returns
a new graph. This makes them safe to share across threads and lets versioned
artifacts be compared as plain values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

SSD_NS = "http://example.org/ssd#"
DATA_NS = "http://example.org/data#"
ANN_NS = "http://example.org/annotation#"

# Relation name reserved for class assignment (rdf:type shorthand).
TYPE_RELATION = "a"


class GraphError(ValueError):
    """Invalid graph construction or mutation."""


class MergeError(GraphError):
    """Graphs disagree on the class of one or more entities."""

    def __init__(self, entities: list[str]):
        self.entities = entities
        super().__init__(f"class conflict for entities: {', '.join(sorted(entities))}")


@dataclass(frozen=True, order=True)
class Provenance:
    """Where a triple came from: source document, verbatim evidence, and the
    collection/version that materialized it."""

    document_id: str = ""
    evidence: str = ""
    collection_id: str = ""
    version: int = 0


@dataclass(frozen=True, order=True)
class Annotation:
    """Per-triple metadata: provenance plus confidence and retrieval weight."""

    provenance: Provenance = field(default_factory=Provenance)
    confidence: float = 1.0
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise GraphError(f"confidence {self.confidence} outside [0, 1]")
        if not 0.0 < self.weight <= 1.0:
            raise GraphError(f"retrieval weight {self.weight} outside (0, 1]")


@dataclass(frozen=True)
class Node:
    """Graph entity. ``cls`` is None when the class could not be resolved
    (e.g. parsed from a document without type statements)."""

    id: str
    cls: str | None = None
    props: tuple[tuple[str, Any], ...] = ()

    @staticmethod
    def make(id: str, cls: str | None = None, props: Mapping[str, Any] | None = None) -> "Node":
        items = tuple(sorted((props or {}).items()))
        return Node(id=id, cls=cls, props=items)

    @property
    def properties(self) -> dict[str, Any]:
        return dict(self.props)


EdgeKey = tuple[str, str, str]


class KnowledgeGraph:
    """Set of typed nodes and labeled edges with per-triple annotations.

    Invariants enforced at construction:
      * every edge endpoint exists in the node set,
      * each node has at most one class,
      * the triple set is duplicate-free under (s, r, o, provenance).
    """

    def __init__(
        self,
        nodes: Iterable[Node] = (),
        edges: Mapping[EdgeKey, Iterable[Annotation]] | Iterable[EdgeKey] = (),
    ):
        node_map: dict[str, Node] = {}
        for n in nodes:
            prev = node_map.get(n.id)
            if prev is not None and prev != n:
                if prev.cls != n.cls and prev.cls is not None and n.cls is not None:
                    raise MergeError([n.id])
                # keep the more informative node
                cls = prev.cls if prev.cls is not None else n.cls
                props = prev.props if prev.props else n.props
                n = Node(id=n.id, cls=cls, props=props)
            node_map[n.id] = n

        edge_map: dict[EdgeKey, tuple[Annotation, ...]] = {}
        if isinstance(edges, Mapping):
            items: Iterable[tuple[EdgeKey, Iterable[Annotation]]] = edges.items()
        else:
            items = ((key, ()) for key in edges)
        for key, anns in items:
            s, r, o = key
            for end in (s, o):
                if end not in node_map:
                    node_map[end] = Node(id=end)
            seen = set(edge_map.get(key, ()))
            merged = list(edge_map.get(key, ()))
            for a in anns:
                if a not in seen:
                    seen.add(a)
                    merged.append(a)
            edge_map[key] = tuple(sorted(merged))

        self._nodes = node_map
        self._edges = edge_map

    # -- accessors ---------------------------------------------------------

    @property
    def nodes(self) -> dict[str, Node]:
        return dict(self._nodes)

    @property
    def edges(self) -> dict[EdgeKey, tuple[Annotation, ...]]:
        return dict(self._edges)

    def node(self, node_id: str) -> Node | None:
        return self._nodes.get(node_id)

    def class_of(self, node_id: str) -> str | None:
        n = self._nodes.get(node_id)
        return n.cls if n is not None else None

    def has_edge(self, s: str, r: str, o: str) -> bool:
        return (s, r, o) in self._edges

    def annotations(self, s: str, r: str, o: str) -> tuple[Annotation, ...]:
        return self._edges.get((s, r, o), ())

    def triples(self) -> Iterator[tuple[EdgeKey, Annotation | None]]:
        """Triple view: one row per (s, r, o, provenance); edges without
        annotations yield a single row with annotation None."""
        for key in sorted(self._edges):
            anns = self._edges[key]
            if not anns:
                yield key, None
            else:
                for a in anns:
                    yield key, a

    def __len__(self) -> int:
        return len(self._edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __repr__(self) -> str:
        return f"KnowledgeGraph(nodes={len(self._nodes)}, edges={len(self._edges)})"

    # -- functional updates -------------------------------------------------

    def with_node(self, node: Node) -> "KnowledgeGraph":
        return KnowledgeGraph(list(self._nodes.values()) + [node], self._edges)

    def with_edge(self, s: str, r: str, o: str, *anns: Annotation) -> "KnowledgeGraph":
        edges = self.edges
        edges[(s, r, o)] = tuple(list(edges.get((s, r, o), ())) + list(anns))
        return KnowledgeGraph(self._nodes.values(), edges)

    def with_weights(self, weights: Mapping[tuple[EdgeKey, Provenance], float]) -> "KnowledgeGraph":
        """New graph with retrieval weights replaced for the addressed triples."""
        edges: dict[EdgeKey, tuple[Annotation, ...]] = {}
        for key, anns in self._edges.items():
            adjusted = []
            for a in anns:
                w = weights.get((key, a.provenance))
                if w is not None:
                    a = Annotation(provenance=a.provenance, confidence=a.confidence, weight=w)
                adjusted.append(a)
            edges[key] = tuple(sorted(adjusted))
        return KnowledgeGraph(self._nodes.values(), edges)


def merge(graphs: Iterable[KnowledgeGraph]) -> KnowledgeGraph:
    """Union of triples across graphs.

    Identical (s, r, o) asserted by different collections is kept once per
    distinct provenance. Associative and commutative as a triple set; a class
    conflict for one entity id across inputs raises MergeError listing it.
    """
    graphs = list(graphs)
    conflicts: set[str] = set()
    classes: dict[str, str] = {}
    for g in graphs:
        for n in g._nodes.values():
            if n.cls is None:
                continue
            prev = classes.get(n.id)
            if prev is not None and prev != n.cls:
                conflicts.add(n.id)
            classes[n.id] = prev or n.cls
    if conflicts:
        raise MergeError(sorted(conflicts))

    nodes: dict[str, Node] = {}
    for g in graphs:
        for n in g._nodes.values():
            prev = nodes.get(n.id)
            if prev is None:
                nodes[n.id] = n
            else:
                cls = prev.cls if prev.cls is not None else n.cls
                props = prev.props if prev.props else n.props
                nodes[n.id] = Node(id=n.id, cls=cls, props=props)

    edges: dict[EdgeKey, list[Annotation]] = {}
    for g in graphs:
        for key, anns in g._edges.items():
            bucket = edges.setdefault(key, [])
            for a in anns:
                if a not in bucket:
                    bucket.append(a)
    return KnowledgeGraph(nodes.values(), {k: tuple(v) for k, v in edges.items()})


def canonical_props(props: Mapping[str, Any]) -> str:
    """Canonical JSON used wherever node properties are persisted."""
    return json.dumps(dict(props), sort_keys=True, separators=(", ", ": "))
