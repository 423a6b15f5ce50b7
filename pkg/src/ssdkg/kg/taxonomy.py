"""Expert-seeded concept tree providing the shared SSD vocabulary.

Concepts carry a status; pending proposals are stored in the tree but never
match during term normalization until approved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

STATUS_ESTABLISHED = "established"
STATUS_PENDING = "pending-proposal"

ROOT_NAME = "SSD"


class TaxonomyError(ValueError):
    pass


def _fold(term: str) -> str:
    """Case/spacing/punctuation-insensitive key used for term matching."""
    return re.sub(r"[\s_\-]+", "", term.strip().lower())


@dataclass(frozen=True)
class Concept:
    name: str
    definition: str = ""
    parent: str | None = None  # None only for the root
    status: str = STATUS_ESTABLISHED
    synonyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class Taxonomy:
    """Tree of concepts with a monotonically increasing version."""

    concepts: dict[str, Concept] = field(default_factory=dict)
    version: int = 1

    def __post_init__(self) -> None:
        roots = [c for c in self.concepts.values() if c.parent is None]
        if len(roots) != 1 or roots[0].name != ROOT_NAME:
            raise TaxonomyError(f"taxonomy must have exactly one root named {ROOT_NAME!r}")
        for c in self.concepts.values():
            if c.parent is not None and c.parent not in self.concepts:
                raise TaxonomyError(f"concept {c.name}: unknown parent {c.parent}")
        # reject cycles / orphan subtrees by walking every concept to the root
        for c in self.concepts.values():
            seen = {c.name}
            cur = c
            while cur.parent is not None:
                if cur.parent in seen:
                    raise TaxonomyError(f"parent cycle at {cur.parent}")
                seen.add(cur.parent)
                cur = self.concepts[cur.parent]

    def __contains__(self, name: str) -> bool:
        return name in self.concepts

    def path(self, name: str) -> str:
        """Slash-joined path from the root, e.g. SSD/Metrics/Latency/p99Latency."""
        if name not in self.concepts:
            raise TaxonomyError(f"unknown concept {name}")
        parts = []
        cur: Concept | None = self.concepts[name]
        while cur is not None:
            parts.append(cur.name)
            cur = self.concepts[cur.parent] if cur.parent else None
        return "/".join(reversed(parts))

    def resolve_path(self, path: str) -> Concept | None:
        """Concept at a slash path; accepts either a full path or a bare name."""
        name = path.rstrip("/").split("/")[-1]
        c = self.concepts.get(name)
        if c is None:
            return None
        if "/" in path and self.path(name) != path.rstrip("/"):
            return None
        return c

    def synonym_table(self) -> dict[str, str]:
        """Folded mention -> canonical concept name, established concepts only."""
        table: dict[str, str] = {}
        for c in self.concepts.values():
            if c.status != STATUS_ESTABLISHED:
                continue
            table[_fold(c.name)] = c.name
            for syn in c.synonyms:
                table[_fold(syn)] = c.name
        return table

    def normalize(self, mention: str) -> str | None:
        """Canonical concept name for a mention, or None when out of vocabulary.

        Pending proposals never match.
        """
        return self.synonym_table().get(_fold(mention))

    def with_concept(self, concept: Concept) -> "Taxonomy":
        """New taxonomy (version + 1) containing the concept."""
        if concept.parent is None:
            raise TaxonomyError("cannot add a second root")
        if concept.parent not in self.concepts:
            raise TaxonomyError(f"unknown parent {concept.parent}")
        if concept.name in self.concepts:
            raise TaxonomyError(f"concept {concept.name} already present")
        concepts = dict(self.concepts)
        concepts[concept.name] = concept
        return replace(self, concepts=concepts, version=self.version + 1)

    def children(self, name: str) -> list[Concept]:
        return sorted(
            (c for c in self.concepts.values() if c.parent == name), key=lambda c: c.name
        )

    def descends_from(self, name: str, ancestor: str) -> bool:
        """True when `name` sits in the subtree rooted at `ancestor` (reflexive)."""
        cur = self.concepts.get(name)
        while cur is not None:
            if cur.name == ancestor:
                return True
            cur = self.concepts.get(cur.parent) if cur.parent else None
        return False
