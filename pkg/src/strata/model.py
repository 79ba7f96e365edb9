"""Social-network data model: persons, typed relations, dataset documents.

A dataset is an ordered list of persons plus an ordered list of relations.
Document order is canonical: every algorithm in this package iterates
persons and relations in that order, which is what makes whole-pipeline
runs reproducible byte for byte.

Datasets are immutable after construction and safe to share across
threads. Construction itself does not enforce invariants (so that
``validate`` can inspect broken data); ``parse_dataset`` always validates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

from .errors import DatasetSyntaxError, SchemaError, ValidationError

PARENT_OF = "parent_of"
SPOUSE_OF = "spouse_of"
GODPARENT_OF = "godparent_of"

# kind -> directed. Open registry: registering a kind makes it legal in documents.
_KIND_REGISTRY: dict[str, bool] = {
    PARENT_OF: True,
    SPOUSE_OF: False,
    GODPARENT_OF: True,
}

# Violation codes emitted by validate().
EMPTY_ID = "EMPTY_ID"
DUPLICATE_ID = "DUPLICATE_ID"
TEMPORAL_ORDER = "TEMPORAL_ORDER"
SELF_LOOP = "SELF_LOOP"
UNKNOWN_PERSON = "UNKNOWN_PERSON"
UNKNOWN_KIND = "UNKNOWN_KIND"
DUPLICATE_RELATION = "DUPLICATE_RELATION"


def register_relation_kind(kind: str, directed: bool) -> None:
    """Register a user-defined relation kind. Idempotent for equal directedness."""
    if not kind:
        raise ValueError("relation kind must be non-empty")
    existing = _KIND_REGISTRY.get(kind)
    if existing is not None and existing != directed:
        raise ValueError(f"kind {kind!r} already registered with directed={existing}")
    _KIND_REGISTRY[kind] = directed


def registered_kinds() -> dict[str, bool]:
    return dict(_KIND_REGISTRY)


def kind_is_directed(kind: str) -> bool:
    # Unregistered kinds are treated as directed; validate() flags them anyway.
    return _KIND_REGISTRY.get(kind, True)


@dataclass(frozen=True)
class Person:
    """One actor. Years are optional because archival records are incomplete;
    absent years are represented as None, never as sentinel numbers."""

    id: str
    label: str
    birth_year: int | None = None
    death_year: int | None = None
    attributes: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Relation:
    """A typed link between two persons. parent_of and godparent_of read
    source -> target; spouse_of is undirected."""

    source: str
    target: str
    kind: str

    @property
    def directed(self) -> bool:
        return kind_is_directed(self.kind)

    def key(self) -> tuple[str, str, str]:
        """Identity triple; undirected kinds normalize endpoint order."""
        if self.directed:
            return (self.kind, self.source, self.target)
        a, b = sorted((self.source, self.target))
        return (self.kind, a, b)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject}): {self.message}"


@dataclass(frozen=True)
class GraphDataset:
    persons: tuple[Person, ...]
    relations: tuple[Relation, ...]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "persons", tuple(self.persons))
        object.__setattr__(self, "relations", tuple(self.relations))

    @cached_property
    def index_of(self) -> dict[str, int]:
        """Person id -> canonical index (document order)."""
        return {p.id: i for i, p in enumerate(self.persons)}

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.persons)

    def person(self, person_id: str) -> Person:
        return self.persons[self.index_of[person_id]]

    def __len__(self) -> int:
        return len(self.persons)


def validate(dataset: GraphDataset) -> list[Violation]:
    """Check every dataset invariant. Violations are returned, not raised."""
    violations: list[Violation] = []
    seen_ids: set[str] = set()
    for person in dataset.persons:
        if not person.id:
            violations.append(Violation(EMPTY_ID, repr(person.id), "person id is empty"))
        elif person.id in seen_ids:
            violations.append(Violation(DUPLICATE_ID, person.id, "person id appears more than once"))
        else:
            seen_ids.add(person.id)
        if (
            person.birth_year is not None
            and person.death_year is not None
            and person.birth_year > person.death_year
        ):
            violations.append(
                Violation(
                    TEMPORAL_ORDER,
                    person.id,
                    f"birth {person.birth_year} is after death {person.death_year}",
                )
            )

    seen_triples: set[tuple[str, str, str]] = set()
    for rel in dataset.relations:
        subject = f"{rel.source}->{rel.target}:{rel.kind}"
        if rel.source == rel.target:
            violations.append(Violation(SELF_LOOP, subject, "relation links a person to themselves"))
        for endpoint in (rel.source, rel.target):
            if endpoint not in seen_ids:
                violations.append(
                    Violation(UNKNOWN_PERSON, subject, f"relation references unknown person {endpoint!r}")
                )
        if rel.kind not in _KIND_REGISTRY:
            violations.append(Violation(UNKNOWN_KIND, subject, f"relation kind {rel.kind!r} is not registered"))
        triple = rel.key()
        if triple in seen_triples:
            violations.append(Violation(DUPLICATE_RELATION, subject, "duplicate relation triple"))
        else:
            seen_triples.add(triple)
    return violations


# ---------------------------------------------------------------------------
# Document parsing / serialization.
#
# Canonical document shape (UTF-8 JSON, exact case-sensitive field names):
#   { "meta": {..}, "persons": [ {"id", "label", "birth_year"?,
#     "death_year"?, "attributes"?} ], "relations": [ {"source", "target",
#     "kind"} ] }

_TOP_KEYS = {"meta", "persons", "relations"}
_PERSON_KEYS = {"id", "label", "birth_year", "death_year", "attributes"}
_RELATION_KEYS = {"source", "target", "kind"}


def _require_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"expected string, got {type(value).__name__}", path)
    return value


def _require_year(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected integer year, got {type(value).__name__}", path)
    return value


def _require_str_map(value: Any, path: str) -> dict[str, str]:
    if not isinstance(value, dict):
        raise SchemaError(f"expected object, got {type(value).__name__}", path)
    out: dict[str, str] = {}
    for key, item in value.items():
        out[key] = _require_str(item, f"{path}.{key}")
    return out


def _person_from_object(obj: Any, path: str) -> Person:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected object, got {type(obj).__name__}", path)
    unknown = set(obj) - _PERSON_KEYS
    if unknown:
        raise SchemaError(f"unknown field {sorted(unknown)[0]!r}", f"{path}.{sorted(unknown)[0]}")
    for required in ("id", "label"):
        if required not in obj:
            raise SchemaError(f"missing field {required!r}", path)
    return Person(
        id=_require_str(obj["id"], f"{path}.id"),
        label=_require_str(obj["label"], f"{path}.label"),
        birth_year=_require_year(obj["birth_year"], f"{path}.birth_year") if "birth_year" in obj else None,
        death_year=_require_year(obj["death_year"], f"{path}.death_year") if "death_year" in obj else None,
        attributes=_require_str_map(obj.get("attributes", {}), f"{path}.attributes"),
    )


def _relation_from_object(obj: Any, path: str) -> Relation:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected object, got {type(obj).__name__}", path)
    unknown = set(obj) - _RELATION_KEYS
    if unknown:
        raise SchemaError(f"unknown field {sorted(unknown)[0]!r}", f"{path}.{sorted(unknown)[0]}")
    for required in ("source", "target", "kind"):
        if required not in obj:
            raise SchemaError(f"missing field {required!r}", path)
    return Relation(
        source=_require_str(obj["source"], f"{path}.source"),
        target=_require_str(obj["target"], f"{path}.target"),
        kind=_require_str(obj["kind"], f"{path}.kind"),
    )


def dataset_from_document(doc: Any) -> GraphDataset:
    """Build a dataset from a parsed JSON document, checking shape only."""
    if not isinstance(doc, dict):
        raise SchemaError(f"expected top-level object, got {type(doc).__name__}", "$")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SchemaError(f"unknown field {sorted(unknown)[0]!r}", f"$.{sorted(unknown)[0]}")
    for required in ("persons", "relations"):
        if required not in doc:
            raise SchemaError(f"missing field {required!r}", "$")
        if not isinstance(doc[required], list):
            raise SchemaError(f"expected array, got {type(doc[required]).__name__}", f"$.{required}")
    meta = _require_str_map(doc.get("meta", {}), "$.meta")
    persons = tuple(
        _person_from_object(obj, f"$.persons[{i}]") for i, obj in enumerate(doc["persons"])
    )
    relations = tuple(
        _relation_from_object(obj, f"$.relations[{i}]") for i, obj in enumerate(doc["relations"])
    )
    return GraphDataset(persons=persons, relations=relations, meta=meta)


def parse_dataset(text: str, format: str = "json") -> GraphDataset:
    """Parse and fully validate a dataset document.

    Raises DatasetSyntaxError for malformed text, SchemaError for shape
    problems (with a path), ValidationError when invariants fail.
    """
    if format != "json":
        raise ValueError(f"unsupported format {format!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetSyntaxError(f"not valid JSON: {exc}") from exc
    dataset = dataset_from_document(doc)
    violations = validate(dataset)
    if violations:
        raise ValidationError(violations)
    return dataset


def dataset_to_document(dataset: GraphDataset) -> dict[str, Any]:
    """Canonical JSON-ready form: schema key order, sorted meta/attributes,
    absent years omitted, empty attributes omitted."""
    persons = []
    for p in dataset.persons:
        obj: dict[str, Any] = {"id": p.id, "label": p.label}
        if p.birth_year is not None:
            obj["birth_year"] = p.birth_year
        if p.death_year is not None:
            obj["death_year"] = p.death_year
        if p.attributes:
            obj["attributes"] = {k: p.attributes[k] for k in sorted(p.attributes)}
        persons.append(obj)
    relations = [{"source": r.source, "target": r.target, "kind": r.kind} for r in dataset.relations]
    return {
        "meta": {k: dataset.meta[k] for k in sorted(dataset.meta)},
        "persons": persons,
        "relations": relations,
    }


def serialize_dataset(dataset: GraphDataset) -> str:
    return json.dumps(dataset_to_document(dataset), indent=2, ensure_ascii=False) + "\n"
