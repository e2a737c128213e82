"""Shared fixtures: the worked examples and a random instance generator."""

import random
from pathlib import Path

import pytest

from dacmatrix import (
    AttributeFamily,
    AttributeSchema,
    Decision,
    EntityProfile,
    PolicyUniverse,
    Precedent,
)

FIXTURES = Path(__file__).parent / "fixtures"

ALLOW_ALL = Decision("allow", frozenset({"all"}))
DENY_ALL = Decision("deny", frozenset({"all"}))


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def example1_schema() -> AttributeSchema:
    return AttributeSchema(
        subject_families=(
            AttributeFamily("A1", ("x", "y")),
            AttributeFamily("A2", ("x", "y")),
        ),
        object_families=(
            AttributeFamily("B1", ("x", "y")),
            AttributeFamily("B2", ("x", "y")),
            AttributeFamily("B3", ("x", "z")),
        ),
    )


@pytest.fixture
def example1_universe(example1_schema) -> PolicyUniverse:
    subjects = [
        EntityProfile("S1", "subject", ("x", "x")),
        EntityProfile("S2", "subject", ("y", "x")),
        EntityProfile("S3", "subject", ("x", "y")),
    ]
    objects = [
        EntityProfile("O1", "object", ("x", "x", "x")),
        EntityProfile("O2", "object", ("y", "y", "x")),
        EntityProfile("O3", "object", ("x", "y", "z")),
    ]
    return PolicyUniverse.build(example1_schema, ("all",), subjects, objects)


@pytest.fixture
def q1() -> Precedent:
    return Precedent("S1", "O1", ALLOW_ALL, seq=1, note="q1")


@pytest.fixture
def q2() -> Precedent:
    return Precedent("S1", "O3", DENY_ALL, seq=2, note="q2")


@pytest.fixture
def q3() -> Precedent:
    return Precedent("S2", "O2", ALLOW_ALL, seq=3, note="q3")


@pytest.fixture
def table7_universe() -> PolicyUniverse:
    schema = AttributeSchema(
        subject_families=(
            AttributeFamily("A1", ("x",)),
            AttributeFamily("A2", ("x",)),
        ),
        object_families=(
            AttributeFamily("B1", ("x", "y", "z")),
            AttributeFamily("B2", ("x", "y", "z", "s", "t")),
        ),
    )
    subjects = [EntityProfile("S1", "subject", ("x", "x"))]
    objects = [
        EntityProfile("O4", "object", ("x", "x")),
        EntityProfile("O5", "object", ("y", "y")),
        EntityProfile("O6", "object", ("z", "z")),
        EntityProfile("O7", "object", ("x", "s")),
        EntityProfile("O8", "object", ("x", "t")),
    ]
    return PolicyUniverse.build(schema, ("all",), subjects, objects)


@pytest.fixture
def table7_precedents() -> list[Precedent]:
    return [
        Precedent("S1", "O4", ALLOW_ALL, seq=1),
        Precedent("S1", "O6", DENY_ALL, seq=2),
        Precedent("S1", "O8", DENY_ALL, seq=3),
    ]


def random_instance(
    rng: random.Random,
    max_subjects: int = 8,
    max_objects: int = 8,
    max_subject_families: int = 4,
    max_object_families: int = 4,
    max_precedents: int = 12,
    max_rights: int = 1,
) -> tuple[PolicyUniverse, list[Precedent]]:
    """A random universe plus a conflict-free precedent list.

    Precedents land on distinct representative cells, so they are
    collision-free regardless of rights or polarity.
    """
    n = rng.randint(1, max_subject_families)
    m = rng.randint(1, max_object_families)
    subject_families = tuple(
        AttributeFamily(f"A{k + 1}", tuple(f"v{j}" for j in range(rng.randint(1, 3))))
        for k in range(n)
    )
    object_families = tuple(
        AttributeFamily(f"B{k + 1}", tuple(f"v{j}" for j in range(rng.randint(1, 3))))
        for k in range(m)
    )
    schema = AttributeSchema(subject_families, object_families)
    rights = tuple(f"r{j}" for j in range(rng.randint(1, max_rights)))

    subjects = [
        EntityProfile(
            f"S{i + 1}", "subject",
            tuple(rng.choice(f.domain) for f in subject_families),
        )
        for i in range(rng.randint(1, max_subjects))
    ]
    objects = [
        EntityProfile(
            f"O{i + 1}", "object",
            tuple(rng.choice(f.domain) for f in object_families),
        )
        for i in range(rng.randint(1, max_objects))
    ]
    universe = PolicyUniverse.build(schema, rights, subjects, objects)

    cells = [
        (s.id, o.id)
        for s in universe.subject_reps
        for o in universe.object_reps
    ]
    rng.shuffle(cells)
    count = min(rng.randint(0, max_precedents), len(cells))
    precedents = []
    for seq, (sid, oid) in enumerate(cells[:count], start=1):
        effect = rng.choice(["allow", "deny"])
        granted = frozenset(rng.sample(rights, rng.randint(1, len(rights))))
        precedents.append(Precedent(sid, oid, Decision(effect, granted), seq=seq))
    return universe, precedents
