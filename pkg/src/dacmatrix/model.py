"""Attribute schema, entity profiles, and the coincidence ordering.

Subjects and objects are described by vectors of security-attribute
values. Analogy between two entities of the same kind is measured by the
set of attribute positions on which their values coincide; positions are
totally ordered by significance (subject families outrank object
families, and within each side earlier declaration outranks later).
That ordering is what lets the interpolation engine pick one dominant
precedent among several influencing ones.

All types here are immutable values: safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SUBJECT = "subject"
OBJECT = "object"
KINDS = (SUBJECT, OBJECT)

ALLOW = "allow"
DENY = "deny"

LEXICOGRAPHIC = "lexicographic"
STRICT_PAPER = "strict-paper"
DOMINANCE_DEPTHS = (LEXICOGRAPHIC, STRICT_PAPER)

# A coincidence key: strictly increasing 1-based attribute positions at
# which two same-kind profiles carry equal values. Empty means "no
# coincidence" and never supports influence.
CoincidenceKey = tuple[int, ...]


@dataclass(frozen=True)
class AttributeFamily:
    """One attribute family: a name and its finite value domain."""

    name: str
    domain: tuple[str, ...]

    def __contains__(self, value: str) -> bool:
        return value in self.domain


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute families for subjects and objects.

    Declaration order is the significance order: subject family k
    outranks subject family k+1, every subject family outranks every
    object family, and object families rank by position likewise.
    """

    subject_families: tuple[AttributeFamily, ...]
    object_families: tuple[AttributeFamily, ...]

    def families(self, kind: str) -> tuple[AttributeFamily, ...]:
        if kind == SUBJECT:
            return self.subject_families
        if kind == OBJECT:
            return self.object_families
        raise ValueError(f"unknown entity kind: {kind!r}")

    def family_names(self, kind: str) -> tuple[str, ...]:
        return tuple(f.name for f in self.families(kind))


@dataclass(frozen=True)
class EntityProfile:
    """A subject or object as a vector of attribute values.

    ``values`` holds one token per family of the matching kind, in
    family order. Entities with identical vectors are interchangeable
    for access decisions and collapse into one equivalence class.
    """

    id: str
    kind: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class Decision:
    """Allow or deny a non-empty set of rights at one matrix cell."""

    effect: str
    rights: frozenset[str]

    def __post_init__(self) -> None:
        if self.effect not in (ALLOW, DENY):
            raise ValueError(f"effect must be {ALLOW!r} or {DENY!r}, got {self.effect!r}")
        if not isinstance(self.rights, frozenset):
            object.__setattr__(self, "rights", frozenset(self.rights))
        if not self.rights:
            raise ValueError("a decision must carry at least one right")

    def sort_key(self) -> tuple:
        return (self.effect, tuple(sorted(self.rights)))


def validate_schema(schema: AttributeSchema) -> list[str]:
    """Check a schema and return the complete list of violations.

    An empty list means the schema is well formed. Checks: at least one
    family per side, family names unique across both sides, every value
    domain non-empty and free of duplicates.
    """
    violations: list[str] = []
    if not schema.subject_families:
        violations.append("at least one subject attribute family is required (n >= 1)")
    if not schema.object_families:
        violations.append("at least one object attribute family is required (m >= 1)")
    seen: set[str] = set()
    for fam in schema.subject_families + schema.object_families:
        if not fam.name:
            violations.append("attribute family with empty name")
        if fam.name in seen:
            violations.append(f"duplicate family name: {fam.name!r}")
        seen.add(fam.name)
        if not fam.domain:
            violations.append(f"family {fam.name!r} has an empty value domain")
        if len(set(fam.domain)) != len(fam.domain):
            violations.append(f"family {fam.name!r} has duplicate domain values")
    return violations


def validate_profile(schema: AttributeSchema, profile: EntityProfile) -> list[str]:
    """Check one profile against the schema; returns violations."""
    if profile.kind not in KINDS:
        return [f"entity {profile.id!r}: unknown kind {profile.kind!r}"]
    families = schema.families(profile.kind)
    violations: list[str] = []
    if len(profile.values) != len(families):
        violations.append(
            f"entity {profile.id!r}: expected {len(families)} attribute values, "
            f"got {len(profile.values)}"
        )
        return violations
    for fam, value in zip(families, profile.values):
        if value not in fam:
            violations.append(
                f"entity {profile.id!r}: value {value!r} is outside the domain "
                f"of family {fam.name!r}"
            )
    return violations


@dataclass(frozen=True)
class EquivalenceClass:
    """All entities of one kind sharing an identical value vector.

    The representative is the first-declared member; interpolation
    operates on representatives only.
    """

    representative: EntityProfile
    member_ids: tuple[str, ...]


def canonicalize_entities(
    schema: AttributeSchema, entities: list[EntityProfile]
) -> list[EquivalenceClass]:
    """Partition entities into equivalence classes by (kind, values).

    Classes are returned in first-declaration order. Profiles must
    validate against the schema; an out-of-domain value raises with the
    offending family named. Idempotent: canonicalizing representatives
    reproduces the same partition.
    """
    classes: dict[tuple[str, tuple[str, ...]], list[EntityProfile]] = {}
    for profile in entities:
        problems = validate_profile(schema, profile)
        if problems:
            raise ValueError("; ".join(problems))
        classes.setdefault((profile.kind, profile.values), []).append(profile)
    return [
        EquivalenceClass(
            representative=members[0],
            member_ids=tuple(p.id for p in members),
        )
        for members in classes.values()
    ]


def coinciding_attributes(x: EntityProfile, y: EntityProfile) -> CoincidenceKey:
    """Positions (1-based) at which two same-kind profiles agree.

    Symmetric; equal profiles return the full index list. Raises on a
    kind mismatch, since a subject and an object are incomparable.
    """
    if x.kind != y.kind:
        raise ValueError(f"incomparable kinds: {x.kind!r} vs {y.kind!r}")
    return tuple(i for i, (a, b) in enumerate(zip(x.values, y.values), start=1) if a == b)


def compare_keys(x: CoincidenceKey, y: CoincidenceKey, depth: str = LEXICOGRAPHIC) -> int:
    """Order two non-empty coincidence keys by significance.

    Returns -1 when ``x`` dominates, 1 when ``y`` dominates, 0 on a tie.
    The primary discriminator is the most significant (smallest)
    coinciding position. With ``depth="lexicographic"`` equal heads are
    broken by comparing the remaining positions lexicographically, so
    only identical keys tie; with ``depth="strict-paper"`` only the
    heads are compared and equal heads always tie.
    """
    if not x or not y:
        raise ValueError("no influence: an empty coincidence key is not comparable")
    if depth == STRICT_PAPER:
        if x[0] < y[0]:
            return -1
        if y[0] < x[0]:
            return 1
        return 0
    if depth != LEXICOGRAPHIC:
        raise ValueError(f"unknown dominance depth: {depth!r}")
    if x < y:
        return -1
    if y < x:
        return 1
    return 0


@dataclass(frozen=True)
class PolicyUniverse:
    """Validated schema, rights universe, and canonicalized entities.

    The single context object the precedent log and the interpolation
    engine work against. ``subjects``/``objects`` keep declaration
    order; the class lists collapse duplicate vectors.
    """

    schema: AttributeSchema
    rights: tuple[str, ...]
    subjects: tuple[EntityProfile, ...]
    objects: tuple[EntityProfile, ...]
    subject_classes: tuple[EquivalenceClass, ...]
    object_classes: tuple[EquivalenceClass, ...]
    _by_id: dict = field(compare=False, repr=False, default_factory=dict)
    _rep_of: dict = field(compare=False, repr=False, default_factory=dict)

    @classmethod
    def build(
        cls,
        schema: AttributeSchema,
        rights: tuple[str, ...],
        subjects: list[EntityProfile],
        objects: list[EntityProfile],
    ) -> "PolicyUniverse":
        problems = check_universe(schema, rights, subjects, objects)
        if problems:
            raise ValueError("; ".join(problems))
        subject_classes = canonicalize_entities(schema, list(subjects))
        object_classes = canonicalize_entities(schema, list(objects))
        by_id = {p.id: p for p in list(subjects) + list(objects)}
        rep_of: dict[str, str] = {}
        for cls_ in subject_classes + object_classes:
            for member in cls_.member_ids:
                rep_of[member] = cls_.representative.id
        return cls(
            schema=schema,
            rights=tuple(rights),
            subjects=tuple(subjects),
            objects=tuple(objects),
            subject_classes=tuple(subject_classes),
            object_classes=tuple(object_classes),
            _by_id=by_id,
            _rep_of=rep_of,
        )

    def profile(self, entity_id: str) -> EntityProfile:
        try:
            return self._by_id[entity_id]
        except KeyError:
            raise KeyError(f"unknown entity: {entity_id!r}") from None

    def rep_id(self, entity_id: str) -> str:
        try:
            return self._rep_of[entity_id]
        except KeyError:
            raise KeyError(f"unknown entity: {entity_id!r}") from None

    def representative(self, entity_id: str) -> EntityProfile:
        return self._by_id[self.rep_id(entity_id)]

    @property
    def subject_reps(self) -> tuple[EntityProfile, ...]:
        return tuple(c.representative for c in self.subject_classes)

    @property
    def object_reps(self) -> tuple[EntityProfile, ...]:
        return tuple(c.representative for c in self.object_classes)


def check_universe(
    schema: AttributeSchema,
    rights: tuple[str, ...],
    subjects: list[EntityProfile],
    objects: list[EntityProfile],
) -> list[str]:
    """Full validation of schema, rights universe, and entities."""
    problems = validate_schema(schema)
    if not rights:
        problems.append("the rights universe must not be empty")
    if len(set(rights)) != len(rights):
        problems.append("duplicate right names in the rights universe")
    seen_ids: set[str] = set()
    for profile in list(subjects) + list(objects):
        if profile.id in seen_ids:
            problems.append(f"duplicate entity id: {profile.id!r}")
        seen_ids.add(profile.id)
        problems.extend(validate_profile(schema, profile))
    expected = {SUBJECT: subjects, OBJECT: objects}
    for kind, group in expected.items():
        for profile in group:
            if profile.kind != kind:
                problems.append(
                    f"entity {profile.id!r} declared under {kind}s but has kind {profile.kind!r}"
                )
    return problems
