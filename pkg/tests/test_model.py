"""Schema validation, canonicalization, and the coincidence ordering."""

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dacmatrix import (
    AttributeFamily,
    AttributeSchema,
    Decision,
    EntityProfile,
    canonicalize_entities,
    coinciding_attributes,
    compare_keys,
    validate_schema,
)


class TestValidateSchema:
    def test_example_schema_is_ok(self, example1_schema):
        assert validate_schema(example1_schema) == []

    def test_zero_subject_families_rejected(self):
        schema = AttributeSchema((), (AttributeFamily("B1", ("x",)),))
        violations = validate_schema(schema)
        assert any("subject" in v for v in violations)

    def test_duplicate_family_name_across_sides(self):
        schema = AttributeSchema(
            (AttributeFamily("type", ("x",)),),
            (AttributeFamily("type", ("y",)),),
        )
        violations = validate_schema(schema)
        assert any("duplicate family name" in v for v in violations)

    def test_empty_domain_rejected(self):
        schema = AttributeSchema(
            (AttributeFamily("A1", ()),),
            (AttributeFamily("B1", ("x",)),),
        )
        assert any("empty value domain" in v for v in validate_schema(schema))


class TestCanonicalize:
    def test_example_subjects_are_singletons(self, example1_schema):
        subjects = [
            EntityProfile("S1", "subject", ("x", "x")),
            EntityProfile("S2", "subject", ("y", "x")),
            EntityProfile("S3", "subject", ("x", "y")),
        ]
        classes = canonicalize_entities(example1_schema, subjects)
        assert len(classes) == 3
        assert all(len(c.member_ids) == 1 for c in classes)

    def test_identical_vectors_merge(self, example1_schema):
        subjects = [
            EntityProfile("S1", "subject", ("x", "x")),
            EntityProfile("S1b", "subject", ("x", "x")),
        ]
        classes = canonicalize_entities(example1_schema, subjects)
        assert len(classes) == 1
        assert classes[0].representative.id == "S1"
        assert classes[0].member_ids == ("S1", "S1b")

    def test_pigeonhole_on_two_by_two_domain(self, example1_schema):
        # Oracle: enumerate every possible vector over the 2x2 subject
        # domains; 50 random subjects can form at most that many classes.
        domains = [f.domain for f in example1_schema.subject_families]
        possible = set(itertools.product(*domains))
        rng = random.Random(7)
        subjects = [
            EntityProfile(f"S{i}", "subject",
                          tuple(rng.choice(d) for d in domains))
            for i in range(50)
        ]
        classes = canonicalize_entities(example1_schema, subjects)
        assert len(classes) <= len(possible) == 4
        assert all(c.representative.values in possible for c in classes)

    def test_out_of_domain_value_names_family(self, example1_schema):
        bad = EntityProfile("S9", "subject", ("x", "zzz"))
        with pytest.raises(ValueError, match="A2"):
            canonicalize_entities(example1_schema, [bad])

    def test_idempotent(self, example1_schema):
        rng = random.Random(3)
        domains = [f.domain for f in example1_schema.subject_families]
        subjects = [
            EntityProfile(f"S{i}", "subject",
                          tuple(rng.choice(d) for d in domains))
            for i in range(12)
        ]
        once = canonicalize_entities(example1_schema, subjects)
        twice = canonicalize_entities(example1_schema, [c.representative for c in once])
        assert [c.representative for c in twice] == [c.representative for c in once]
        assert [c.member_ids for c in twice] == [(c.representative.id,) for c in once]


class TestCoincidingAttributes:
    def test_o2_vs_o1_third_attribute(self, example1_universe):
        o2 = example1_universe.profile("O2")
        o1 = example1_universe.profile("O1")
        assert coinciding_attributes(o2, o1) == (3,)

    def test_o2_vs_o3_second_attribute(self, example1_universe):
        o2 = example1_universe.profile("O2")
        o3 = example1_universe.profile("O3")
        assert coinciding_attributes(o2, o3) == (2,)

    def test_reflexive_full_key(self, example1_universe):
        o1 = example1_universe.profile("O1")
        assert coinciding_attributes(o1, o1) == (1, 2, 3)

    def test_kind_mismatch_rejected(self, example1_universe):
        with pytest.raises(ValueError, match="incomparable"):
            coinciding_attributes(
                example1_universe.profile("S1"), example1_universe.profile("O1")
            )

    def test_disjoint_profiles_have_empty_key(self, example1_universe):
        s2 = example1_universe.profile("S2")
        s3 = example1_universe.profile("S3")
        assert coinciding_attributes(s2, s3) == ()

    @given(
        left=st.tuples(*[st.sampled_from("abc") for _ in range(4)]),
        right=st.tuples(*[st.sampled_from("abc") for _ in range(4)]),
    )
    def test_symmetric(self, left, right):
        x = EntityProfile("X", "object", left)
        y = EntityProfile("Y", "object", right)
        assert coinciding_attributes(x, y) == coinciding_attributes(y, x)


def _all_keys(limit: int) -> list[tuple[int, ...]]:
    positions = range(1, limit + 1)
    keys = []
    for r in range(1, limit + 1):
        keys.extend(itertools.combinations(positions, r))
    return keys


class TestCompareKeys:
    def test_head_order(self):
        assert compare_keys((2,), (3,)) == -1

    def test_identical_keys_tie(self):
        assert compare_keys((1,), (1,)) == 0

    def test_lexicographic_extension(self):
        # Oracle: plain lexicographic comparison on index lists.
        assert compare_keys((1, 3), (1, 2)) == 1

    def test_empty_key_not_comparable(self):
        with pytest.raises(ValueError, match="not comparable"):
            compare_keys((), (1,))

    def test_strict_paper_ties_on_equal_heads(self):
        assert compare_keys((1, 3), (1, 2), depth="strict-paper") == 0
        assert compare_keys((1,), (2, 3), depth="strict-paper") == -1

    def test_exhaustive_against_lexicographic_oracle(self):
        def oracle(x, y):
            sx, sy = list(x), list(y)
            for a, b in zip(sx, sy):
                if a != b:
                    return -1 if a < b else 1
            if len(sx) == len(sy):
                return 0
            return -1 if len(sx) < len(sy) else 1

        for x in _all_keys(3):
            for y in _all_keys(3):
                assert compare_keys(x, y) == oracle(x, y), (x, y)

    def test_total_preorder_over_subsets_of_four(self):
        keys = _all_keys(4)
        for depth in ("lexicographic", "strict-paper"):
            for x in keys:
                assert compare_keys(x, x, depth) == 0
                for y in keys:
                    assert compare_keys(x, y, depth) == -compare_keys(y, x, depth)
            for x in keys:
                for y in keys:
                    for z in keys:
                        if (compare_keys(x, y, depth) <= 0
                                and compare_keys(y, z, depth) <= 0):
                            assert compare_keys(x, z, depth) <= 0


class TestDecision:
    def test_empty_rights_rejected(self):
        with pytest.raises(ValueError, match="at least one right"):
            Decision("allow", frozenset())

    def test_unknown_effect_rejected(self):
        with pytest.raises(ValueError, match="effect"):
            Decision("maybe", frozenset({"all"}))

    def test_equality_is_exact(self):
        a = Decision("allow", frozenset({"read"}))
        assert a == Decision("allow", frozenset({"read"}))
        assert a != Decision("deny", frozenset({"read"}))
        assert a != Decision("allow", frozenset({"read", "write"}))
