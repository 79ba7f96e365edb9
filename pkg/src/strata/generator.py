"""Synthetic genealogies for fixtures and benchmarks.

The generator is a pure function of its spec: every draw flows through the
portable Lcg in a fixed order, so equal specs produce byte-identical
datasets when serialized. The output always passes validation, and every
ancestry edge respects chronology (parents are born before children).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LimitError
from .model import GODPARENT_OF, PARENT_OF, SPOUSE_OF, GraphDataset, Person, Relation
from .rng import Lcg

GIVEN_NAMES = (
    "Adriaen", "Anna", "Barbara", "Catharina", "Clara", "Cornelis", "Daniel",
    "Dirck", "Elisabeth", "Frans", "Geert", "Gillis", "Hendrick", "Isaack",
    "Jacob", "Jan", "Joos", "Joris", "Lucas", "Lysbeth", "Maeyken", "Magdalena",
    "Margareta", "Maria", "Martina", "Matthijs", "Paulina", "Pieter", "Rombout",
    "Sara", "Susanna", "Tanneke", "Tobias", "Wouter",
)

SURNAMES = (
    "Vermeulen", "De Clerck", "Moons", "Peeters", "Wouters", "de Vos",
    "Snyers", "Verbeeck", "Huybrechts", "Bols", "Cruys", "Aerts", "Jordaens",
    "Baes", "Stevens", "Lenaerts", "Goossens", "Mertens", "van Aelst", "Claes",
)

PROFESSIONS = (
    "painter", "tapestry weaver", "engraver", "merchant",
    "sculptor", "gilder", "art dealer", "apprentice",
)

FOUNDER_BIRTH_BASE = 1570


@dataclass(frozen=True)
class GeneratorSpec:
    """Size and shape of a synthetic genealogy."""

    n_families: int = 2
    generations: int = 3
    children_mean: float = 2.0
    intermarriage_rate: float = 0.2
    godparent_rate: float = 0.3
    seed: int = 0

    def check(self) -> None:
        if self.n_families < 1:
            raise ValueError("n_families must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.children_mean < 0:
            raise ValueError("children_mean must be >= 0")
        for name in ("intermarriage_rate", "godparent_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


def expected_person_count(spec: GeneratorSpec) -> float:
    """A-priori size estimate: founders plus children and married-in spouses."""
    total = 2.0 * spec.n_families
    couples = float(spec.n_families)
    for _ in range(1, spec.generations):
        children = couples * spec.children_mean
        total += 2.0 * children  # worst case: every child marries an outsider
        couples = children
    return total


class _Builder:
    def __init__(self, rng: Lcg, cap: int) -> None:
        self.rng = rng
        self.cap = cap
        self.persons: list[Person] = []
        self.relations: list[Relation] = []
        self.birth: dict[str, int] = {}

    def new_person(self, surname: str, birth_year: int) -> str:
        if len(self.persons) >= self.cap:
            raise LimitError(f"generation exceeded cap of {self.cap} persons")
        pid = f"p{len(self.persons)}"
        given = GIVEN_NAMES[self.rng.below(len(GIVEN_NAMES))]
        death_year = birth_year + 40 + self.rng.below(35)
        attributes = {}
        if self.rng.uniform() < 0.6:
            attributes["profession"] = PROFESSIONS[self.rng.below(len(PROFESSIONS))]
        self.persons.append(
            Person(
                id=pid,
                label=f"{given} {surname}",
                birth_year=birth_year,
                death_year=death_year,
                attributes=attributes,
            )
        )
        self.birth[pid] = birth_year
        return pid

    def relate(self, source: str, target: str, kind: str) -> None:
        self.relations.append(Relation(source=source, target=target, kind=kind))


def synth_family(spec: GeneratorSpec, cap: int = 100_000) -> GraphDataset:
    """Generate a multi-family genealogy with ancestry, marriage and
    godparenthood links. Deterministic in the spec, including the seed."""
    spec.check()
    if expected_person_count(spec) > cap:
        raise LimitError(
            f"spec implies about {expected_person_count(spec):.0f} persons, cap is {cap}"
        )
    rng = Lcg(spec.seed)
    b = _Builder(rng, cap)

    surnames = [SURNAMES[(f * 7 + rng.below(len(SURNAMES))) % len(SURNAMES)] for f in range(spec.n_families)]

    # generation 0: one founder couple per family
    couples: list[list[tuple[int, str, str]]] = [[] for _ in range(spec.generations)]
    for family in range(spec.n_families):
        birth = FOUNDER_BIRTH_BASE + rng.below(20)
        a = b.new_person(surnames[family], birth)
        partner = b.new_person(SURNAMES[rng.below(len(SURNAMES))], birth + rng.below(7) - 3)
        b.relate(a, partner, SPOUSE_OF)
        couples[0].append((family, a, partner))

    for gen in range(1, spec.generations):
        final = gen == spec.generations - 1
        children: list[tuple[int, str]] = []
        for family, left, right in couples[gen - 1]:
            count = rng.poisson(spec.children_mean)
            for _ in range(count):
                birth = max(b.birth[left], b.birth[right]) + 20 + rng.below(9)
                child = b.new_person(surnames[family], birth)
                b.relate(left, child, PARENT_OF)
                b.relate(right, child, PARENT_OF)
                children.append((family, child))

        # marriages: intermarry across families when the coin and the pool
        # allow it, otherwise (non-final generations) marry in an outsider
        married: set[str] = set()
        for family, child in children:
            if child in married:
                continue
            partner_id = None
            if rng.uniform() < spec.intermarriage_rate:
                for other_family, candidate in children:
                    if other_family != family and candidate not in married:
                        partner_id = candidate
                        break
            if partner_id is None and not final:
                birth = b.birth[child] + rng.below(7) - 3
                partner_id = b.new_person(SURNAMES[rng.below(len(SURNAMES))], birth)
            if partner_id is None:
                continue
            married.add(child)
            married.add(partner_id)
            b.relate(child, partner_id, SPOUSE_OF)
            if not final:
                couples[gen].append((family, child, partner_id))

        # godparents come from any earlier generation, never the parents
        for family, child in children:
            if rng.uniform() >= spec.godparent_rate:
                continue
            parents = {r.source for r in b.relations if r.kind == PARENT_OF and r.target == child}
            candidates = [
                p.id for p in b.persons if b.birth[p.id] <= b.birth[child] - 18 and p.id not in parents and p.id != child
            ]
            if candidates:
                b.relate(candidates[rng.below(len(candidates))], child, GODPARENT_OF)

    meta = {
        "title": f"synthetic genealogy ({spec.n_families} families, {spec.generations} generations)",
        "generator_seed": str(spec.seed),
    }
    return GraphDataset(persons=tuple(b.persons), relations=tuple(b.relations), meta=meta)
