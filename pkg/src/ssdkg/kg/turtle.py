"""Turtle serialization and parsing for knowledge graphs.

The emitted document is deterministic: prefix header, node type statements,
edge statements, node property statements, then per-triple annotation blocks,
each section sorted. Provenance/confidence/weight live in reified annotation
statements under a dedicated namespace so a graph stays a single
round-trippable document.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from typing import Any, Iterator

from .model import (
    ANN_NS,
    DATA_NS,
    SSD_NS,
    Annotation,
    EdgeKey,
    KnowledgeGraph,
    Node,
    Provenance,
)

RDF_TYPE_IRI = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

_SAFE_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
_UNSAFE_IRI_CHARS = re.compile(r"[\x00-\x20<>\"{}|^`\\]")

_ANN_FIELDS = (
    "onSubject",
    "onPredicate",
    "onObject",
    "document",
    "evidence",
    "collection",
    "version",
    "confidence",
    "weight",
)


class SerializationError(ValueError):
    pass


class TurtleParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _term(entity_id: str) -> str:
    """Render an entity id as a Turtle term under the namespace scheme."""
    if _SAFE_LOCAL.match(entity_id):
        return f"ex:{entity_id}"
    if entity_id.startswith(("http://", "https://", "urn:")):
        iri = entity_id
    else:
        iri = DATA_NS + entity_id
    if _UNSAFE_IRI_CHARS.search(iri):
        raise SerializationError(f"entity id not expressible as an IRI: {entity_id!r}")
    return f"<{iri}>"


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _literal(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return f'"{_escape(str(value))}"'


def _annotation_id(key: EdgeKey, ann: Annotation) -> str:
    payload = json.dumps(
        [
            *key,
            ann.provenance.document_id,
            ann.provenance.evidence,
            ann.provenance.collection_id,
            ann.provenance.version,
            repr(ann.confidence),
            repr(ann.weight),
        ],
        separators=(",", ":"),
    )
    return "x" + hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


def serialize_turtle(graph: KnowledgeGraph, prefixes: dict[str, str] | None = None) -> str:
    prefixes = prefixes or {"ann": ANN_NS, "d": DATA_NS, "ex": SSD_NS}
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    lines.append("")

    nodes = graph.nodes
    for node_id in sorted(nodes):
        node = nodes[node_id]
        if node.cls is not None:
            lines.append(f"{_term(node_id)} a {_term(node.cls)} .")

    for s, r, o in sorted(graph.edges):
        lines.append(f"{_term(s)} {_term(r)} {_term(o)} .")

    edge_endpoints = {e for key in graph.edges for e in (key[0], key[2])}
    for node_id in sorted(nodes):
        node = nodes[node_id]
        orphan = node.cls is None and node_id not in edge_endpoints
        if node.props or orphan:
            props_json = json.dumps(dict(node.props), sort_keys=True)
            lines.append(f"{_term(node_id)} ann:props {_literal(props_json)} .")

    ann_rows: list[tuple[str, list[str]]] = []
    for key in sorted(graph.edges):
        for ann in graph.edges[key]:
            s, r, o = key
            body = [
                f"ann:onSubject {_term(s)}",
                f"ann:onPredicate {_term(r)}",
                f"ann:onObject {_term(o)}",
                f"ann:document {_literal(ann.provenance.document_id)}",
                f"ann:evidence {_literal(ann.provenance.evidence)}",
                f"ann:collection {_literal(ann.provenance.collection_id)}",
                f"ann:version {_literal(ann.provenance.version)}",
                f"ann:confidence {_literal(ann.confidence)}",
                f"ann:weight {_literal(ann.weight)}",
            ]
            ann_rows.append((_annotation_id(key, ann), body))
    for ann_id, body in ann_rows:
        lines.append(f"ann:{ann_id} " + " ;\n    ".join(body) + " .")

    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # PREFIX IRIREF PNAME STRING NUMBER BOOLEAN A DOT SEMI COMMA EOF
    value: Any
    line: int
    col: int


_TOKEN_RES = [
    ("PREFIX", re.compile(r"@prefix\b")),
    ("IRIREF", re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")),
    ("BOOLEAN", re.compile(r"\b(?:true|false)\b")),
    (
        "PNAME",
        re.compile(
            r"([A-Za-z][A-Za-z0-9_\-]*)?:"
            r"([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?"
        ),
    ),
    ("NUMBER", re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][+-]?\d+)?")),
    ("A", re.compile(r"\ba\b")),
    ("DOT", re.compile(r"\.")),
    ("SEMI", re.compile(r";")),
    ("COMMA", re.compile(r",")),
]

_STRING_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}


def _tokenize(text: str) -> Iterator[_Token]:
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            j = i + 1
            chunks: list[str] = []
            while True:
                if j >= n or text[j] == "\n":
                    raise TurtleParseError("unterminated string literal", start_line, start_col)
                c = text[j]
                if c == "\\":
                    if j + 1 >= n:
                        raise TurtleParseError("dangling escape", line, col + (j - i))
                    esc = text[j + 1]
                    if esc in _STRING_ESCAPES:
                        chunks.append(_STRING_ESCAPES[esc])
                        j += 2
                    elif esc == "u":
                        chunks.append(chr(int(text[j + 2 : j + 6], 16)))
                        j += 6
                    elif esc == "U":
                        chunks.append(chr(int(text[j + 2 : j + 10], 16)))
                        j += 10
                    else:
                        raise TurtleParseError(f"bad escape \\{esc}", start_line, start_col)
                elif c == '"':
                    j += 1
                    break
                else:
                    chunks.append(c)
                    j += 1
            yield _Token("STRING", "".join(chunks), start_line, start_col)
            col += j - i
            i = j
            continue

        for kind, rx in _TOKEN_RES:
            m = rx.match(text, i)
            if m and m.end() > i:
                value: Any = m.group(0)
                if kind == "IRIREF":
                    value = m.group(1)
                elif kind == "PNAME":
                    value = (m.group(1) or "", m.group(2) or "")
                elif kind == "BOOLEAN":
                    value = value == "true"
                elif kind == "NUMBER":
                    raw = m.group(0)
                    value = int(raw) if re.fullmatch(r"[+-]?\d+", raw) else float(raw)
                yield _Token(kind, value, line, col)
                col += m.end() - i
                i = m.end()
                break
        else:
            raise TurtleParseError(f"unexpected character {ch!r}", line, col)
    yield _Token("EOF", None, line, col)


_RESOURCE = "resource"
_LITERAL = "literal"


@dataclass(frozen=True)
class _ParsedTerm:
    kind: str  # resource | literal
    value: Any
    line: int
    col: int


def _fold_iri(iri: str) -> str:
    for ns in (SSD_NS, DATA_NS):
        if iri.startswith(ns):
            return iri[len(ns) :]
    return iri


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        # raw statements: (subject, predicate, object) as _ParsedTerm
        self.raw: list[tuple[_ParsedTerm, _ParsedTerm, _ParsedTerm]] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise TurtleParseError(f"expected {kind}, found {tok.kind}", tok.line, tok.col)
        self.pos += 1
        return tok

    def resolve_pname(self, tok: _Token) -> str:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise TurtleParseError(f"undeclared prefix {prefix!r}", tok.line, tok.col)
        return self.prefixes[prefix] + local

    def parse_resource(self) -> _ParsedTerm:
        tok = self.peek()
        if tok.kind == "IRIREF":
            self.take()
            return _ParsedTerm(_RESOURCE, tok.value, tok.line, tok.col)
        if tok.kind == "PNAME":
            self.take()
            return _ParsedTerm(_RESOURCE, self.resolve_pname(tok), tok.line, tok.col)
        raise TurtleParseError(f"expected IRI or prefixed name, found {tok.kind}", tok.line, tok.col)

    def parse_predicate(self) -> _ParsedTerm:
        tok = self.peek()
        if tok.kind == "A":
            self.take()
            return _ParsedTerm(_RESOURCE, RDF_TYPE_IRI, tok.line, tok.col)
        return self.parse_resource()

    def parse_object(self) -> _ParsedTerm:
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER", "BOOLEAN"):
            self.take()
            return _ParsedTerm(_LITERAL, tok.value, tok.line, tok.col)
        return self.parse_resource()

    def parse_document(self) -> None:
        while self.peek().kind != "EOF":
            if self.peek().kind == "PREFIX":
                self.take()
                pname = self.take("PNAME")
                prefix, local = pname.value
                if local:
                    raise TurtleParseError("malformed prefix declaration", pname.line, pname.col)
                iri = self.take("IRIREF")
                self.take("DOT")
                self.prefixes[prefix] = iri.value
                continue
            self.parse_statement()

    def parse_statement(self) -> None:
        subject = self.parse_resource()
        while True:
            predicate = self.parse_predicate()
            while True:
                obj = self.parse_object()
                self.raw.append((subject, predicate, obj))
                if self.peek().kind == "COMMA":
                    self.take()
                    continue
                break
            nxt = self.peek()
            if nxt.kind == "SEMI":
                self.take()
                continue
            if nxt.kind == "DOT":
                self.take()
                return
            raise TurtleParseError(
                "statement missing terminal '.'", nxt.line, nxt.col
            )


def parse_turtle(text: str) -> KnowledgeGraph:
    """Parse a Turtle document into a graph.

    The triple set is independent of whitespace, comments, and statement
    order; annotation statements are folded back into per-triple metadata
    and ann:props literals back into node properties.
    """
    parser = _Parser(text)
    parser.parse_document()

    classes: dict[str, str] = {}
    props: dict[str, dict[str, Any]] = {}
    edges: dict[EdgeKey, list[Annotation]] = {}
    mentioned: set[str] = set()
    ann_records: dict[str, dict[str, Any]] = {}
    ann_order: list[str] = []

    for subject, predicate, obj in parser.raw:
        s_iri = subject.value
        p_iri = predicate.value

        if s_iri.startswith(ANN_NS):
            field = p_iri[len(ANN_NS) :] if p_iri.startswith(ANN_NS) else None
            if field not in _ANN_FIELDS:
                raise TurtleParseError(
                    f"unknown annotation field {p_iri}", predicate.line, predicate.col
                )
            rec = ann_records.setdefault(s_iri, {})
            if s_iri not in ann_order:
                ann_order.append(s_iri)
            if field in ("onSubject", "onPredicate", "onObject"):
                if obj.kind != _RESOURCE:
                    raise TurtleParseError(
                        f"annotation {field} must be a resource", obj.line, obj.col
                    )
                rec[field] = _fold_iri(obj.value)
            else:
                rec[field] = obj.value
            rec.setdefault("_pos", (subject.line, subject.col))
            continue

        if p_iri == ANN_NS + "props":
            if obj.kind != _LITERAL or not isinstance(obj.value, str):
                raise TurtleParseError("ann:props requires a string literal", obj.line, obj.col)
            try:
                decoded = json.loads(obj.value)
            except json.JSONDecodeError as exc:
                raise TurtleParseError(f"bad ann:props JSON: {exc}", obj.line, obj.col) from exc
            node_id = _fold_iri(s_iri)
            props[node_id] = decoded
            mentioned.add(node_id)
            continue

        if p_iri == RDF_TYPE_IRI:
            if obj.kind != _RESOURCE:
                raise TurtleParseError("class must be a resource", obj.line, obj.col)
            node_id = _fold_iri(s_iri)
            cls = _fold_iri(obj.value)
            if classes.get(node_id, cls) != cls:
                raise TurtleParseError(
                    f"conflicting classes for {node_id}", subject.line, subject.col
                )
            classes[node_id] = cls
            mentioned.add(node_id)
            continue

        if obj.kind != _RESOURCE:
            raise TurtleParseError(
                "literal object outside the annotation namespace", obj.line, obj.col
            )
        s_id, r_id, o_id = _fold_iri(s_iri), _fold_iri(p_iri), _fold_iri(obj.value)
        edges.setdefault((s_id, r_id, o_id), [])
        mentioned.update((s_id, o_id))

    for ann_iri in ann_order:
        rec = ann_records[ann_iri]
        line, col = rec.get("_pos", (0, 0))
        for required in ("onSubject", "onPredicate", "onObject"):
            if required not in rec:
                raise TurtleParseError(f"annotation missing {required}", line, col)
        key = (rec["onSubject"], rec["onPredicate"], rec["onObject"])
        ann = Annotation(
            provenance=Provenance(
                document_id=str(rec.get("document", "")),
                evidence=str(rec.get("evidence", "")),
                collection_id=str(rec.get("collection", "")),
                version=int(rec.get("version", 0)),
            ),
            confidence=float(rec.get("confidence", 1.0)),
            weight=float(rec.get("weight", 1.0)),
        )
        bucket = edges.setdefault(key, [])
        if ann not in bucket:
            bucket.append(ann)
        mentioned.update((key[0], key[2]))

    nodes = [
        Node.make(node_id, classes.get(node_id), props.get(node_id))
        for node_id in sorted(mentioned)
    ]
    return KnowledgeGraph(nodes, {k: tuple(v) for k, v in edges.items()})
