"""Line embeddability: majorization, the exact LP decision, the four-point
classification, and class-profile conditions."""

import itertools
import random
from fractions import Fraction

import pytest

from conftest import collinear, load_space, random_space, relabel, space_from_values
from ordspace.errors import SizeLimitError, ValidationError
from ordspace.line import (
    NOT_EMBEDDABLE,
    IndexSequence,
    MajorizationMode,
    SeqRelation,
    check_majorization,
    class_profile,
    classify_four_point,
    compare_sequences,
    embed_line,
    find_majorizing_enumeration,
    interval_ranks,
    majorization_consequences,
    probe_majorization_conjecture,
    profile_equivalence_report,
    profile_necessary_check,
)
from ordspace.space import ordinal_type

IDENT7 = tuple(range(7))

ALL_EQUAL_3 = space_from_values(3, [1, 1, 1])
ALL_EQUAL_4 = space_from_values(4, [1, 1, 1, 1, 1, 1])

CASE_TAGS = [f"d{i}" for i in range(1, 14)] + ["d15"]


def test_index_sequence_validation():
    IndexSequence((1, 1, 3))
    with pytest.raises(ValidationError):
        IndexSequence((2,))
    with pytest.raises(ValidationError):
        IndexSequence((3, 2))
    with pytest.raises(ValidationError):
        IndexSequence((0, 1))


def test_interval_ranks_min3():
    s = load_space("min3.ord")
    assert interval_ranks(s, (0, 1, 2), (1, 2, 3)) == (1, 2)
    # repeated position gives a zero interval
    assert interval_ranks(s, (0, 1, 2), (1, 1, 3)) == (0, 3)
    with pytest.raises(ValidationError):
        interval_ranks(s, (0, 1, 2), (1, 4))
    with pytest.raises(ValidationError):
        interval_ranks(s, (0, 1, 1), (1, 2))


def test_compare_sequences_examples():
    s = load_space("min3.ord")
    e = (0, 1, 2)
    assert compare_sequences(s, (1, 2), (2, 3), e) is SeqRelation.PREC
    assert compare_sequences(s, (1, 1), (2, 2), e) is SeqRelation.EQUIV
    assert compare_sequences(s, (1, 3), (1, 2), e) is SeqRelation.NEITHER
    with pytest.raises(ValidationError):
        compare_sequences(s, (1, 2), (1, 2, 3), e)


def test_compare_sequences_seven_point():
    s = load_space("seven_swap.ord")
    assert compare_sequences(s, (1, 3, 4), (4, 6, 7), IDENT7) is SeqRelation.PREC


def test_seven_point_full_fails_with_pinned_counterexample():
    s = load_space("seven_swap.ord")
    res = check_majorization(s, IDENT7, MajorizationMode.FULL)
    assert not res
    assert res.counterexample == ((1, 3, 4), (4, 6, 7))


def test_seven_point_consecutive_passes():
    s = load_space("seven_swap.ord")
    res = check_majorization(s, IDENT7, MajorizationMode.CONSECUTIVE)
    assert res.ok
    assert res.counterexample is None


def test_min3_identity_majorizes():
    s = load_space("min3.ord")
    assert check_majorization(s, (0, 1, 2), MajorizationMode.FULL).ok


def test_check_majorization_rejects_bad_enumeration():
    s = load_space("min3.ord")
    with pytest.raises(ValidationError):
        check_majorization(s, (0, 1, 1))


def test_find_majorizing_enumeration_examples():
    assert find_majorizing_enumeration(load_space("min3.ord")) == (0, 1, 2)
    assert find_majorizing_enumeration(load_space("case_d8.ord")) == (0, 1, 2, 3)
    assert find_majorizing_enumeration(ALL_EQUAL_3) is None
    with pytest.raises(SizeLimitError):
        find_majorizing_enumeration(ALL_EQUAL_3, limit=2)


def test_embed_line_min3_witness():
    w = embed_line(load_space("min3.ord"))
    assert w is not None
    assert w.gaps == (Fraction(1, 3), Fraction(2, 3))
    assert w.margin == Fraction(1, 3)
    assert w.coordinates() == (Fraction(0), Fraction(1, 3), Fraction(1))


def test_embed_line_two_max_sides_refused():
    assert embed_line(load_space("twomax3.ord")) is None


def test_embed_line_d8_gap_proportions():
    w = embed_line(load_space("case_d8.ord"))
    assert w is not None
    g = w.gaps
    # a = b + c with b = c: gaps proportional to (2, 1, 1) in some direction
    assert g in ((2 * g[1], g[1], g[1]), (g[0], g[0], 2 * g[0]))


def test_embed_line_guard_and_single_point():
    w = embed_line(space_from_values(1, []))
    assert w.ordering == (0,)
    with pytest.raises(SizeLimitError):
        embed_line(load_space("seven_swap.ord"), limit=6)


def embeddable_fixture_spaces():
    for tag in CASE_TAGS:
        yield f"case_{tag}.ord", load_space(f"case_{tag}.ord")
    yield "min3.ord", load_space("min3.ord")
    yield "min4.ord", load_space("min4.ord")


def test_witness_soundness_on_fixtures():
    # re-derive the ordinal type from the witness coordinates independently
    for name, s in embeddable_fixture_spaces():
        w = embed_line(s)
        assert w is not None, name
        coords = w.coordinates()
        assert all(g > 0 for g in w.gaps)
        assert sum(w.gaps) == 1
        values = []
        inv = {pt: pos for pos, pt in enumerate(w.ordering)}
        for i in range(s.n):
            for j in range(i + 1, s.n):
                values.append(abs(coords[inv[i]] - coords[inv[j]]))
        assert space_from_values(s.n, values) == s, name


def test_embed_line_success_implies_majorizing_enumeration():
    for name, s in embeddable_fixture_spaces():
        e = find_majorizing_enumeration(s)
        assert e is not None, name
        assert check_majorization(s, e, MajorizationMode.FULL).ok, name


def test_majorizing_enumeration_satisfies_consequences():
    for name, s in embeddable_fixture_spaces():
        e = find_majorizing_enumeration(s)
        assert majorization_consequences(s, e) == [], name


def test_consequence_clauses_fire():
    clauses = majorization_consequences(load_space("tree5_a.ord"), tuple(range(5)))
    assert clauses == [
        "nesting",
        "endpoint_chain",
        "single_diametrical_pair",
        "crossing_equivalences",
    ]
    for e in itertools.permutations(range(3)):
        assert "single_diametrical_pair" in majorization_consequences(
            load_space("twomax3.ord"), e
        )


def test_classify_four_point_all_fixture_cases():
    for tag in CASE_TAGS:
        assert classify_four_point(load_space(f"case_{tag}.ord")) == tag


def test_classify_four_point_mirror_and_refusal():
    d4 = load_space("case_d4.ord")
    assert classify_four_point(relabel(d4, (3, 2, 1, 0))) == "mirror-d4"
    # swapping the two inner points keeps the diagonal order
    assert classify_four_point(relabel(d4, (0, 3, 2, 1))) == "d4"
    assert classify_four_point(ALL_EQUAL_4) is NOT_EMBEDDABLE
    with pytest.raises(ValidationError):
        classify_four_point(ALL_EQUAL_3)


def test_classify_four_point_d1_pattern():
    # delta14 > delta24 = delta13 > delta23 > delta12 = delta34
    s = space_from_values(4, [1, 3, 4, 2, 3, 1])
    assert classify_four_point(s) == "d1"


def test_classify_agrees_with_embed_line_on_samples():
    rng = random.Random(20260815)
    spaces = [s for _, s in embeddable_fixture_spaces() if s.n == 4]
    spaces += [ALL_EQUAL_4, relabel(load_space("case_d4.ord"), (3, 2, 1, 0))]
    spaces += [random_space(rng, 4, max_value=4) for _ in range(40)]
    for s in spaces:
        tag = classify_four_point(s)
        witness = embed_line(s)
        assert (tag is not NOT_EMBEDDABLE) == (witness is not None)


def test_reverse_symmetry_of_full_check():
    rng = random.Random(99)
    for _ in range(30):
        s = random_space(rng, 5, max_value=6)
        e = list(range(5))
        rng.shuffle(e)
        fwd = check_majorization(s, tuple(e), MajorizationMode.FULL).ok
        rev = check_majorization(s, tuple(reversed(e)), MajorizationMode.FULL).ok
        assert fwd == rev


def test_class_profile_examples():
    assert class_profile(load_space("min3.ord")) == (1, 1, 1)
    assert class_profile(load_space("table6.ord")) == (1,) * 15
    assert class_profile(load_space("tree5_a.ord")) == (6, 1, 2, 1)
    profile = class_profile(ALL_EQUAL_4)
    assert profile == (6,)
    assert sum(profile) == 6
    with pytest.raises(ValidationError):
        class_profile(space_from_values(1, []))


def test_profile_necessary_check_examples():
    assert profile_necessary_check(load_space("min3.ord")) == (True, None)
    ok, reason = profile_necessary_check(ALL_EQUAL_3)
    assert not ok and reason == "only 1 class for 3 points"
    ok, reason = profile_necessary_check(load_space("twomax3.ord"))
    assert not ok and reason == "top class has 2 pairs"
    ok, reason = profile_necessary_check(load_space("tree5_a.ord"))
    assert not ok and reason == "top class has 6 pairs"


def test_profile_check_holds_for_embeddable_spaces():
    for name, s in embeddable_fixture_spaces():
        assert profile_necessary_check(s) == (True, None), name


def test_profile_equivalence_report():
    even = load_space("case_d2.ord")
    rep = profile_equivalence_report(even)
    assert (rep.class_count_is_nm1, rep.nearest_class_is_nm1, rep.profile_is_staircase) == (
        True,
        True,
        True,
    )
    assert rep.all_equal()

    rep = profile_equivalence_report(load_space("min3.ord"))
    assert (rep.class_count_is_nm1, rep.nearest_class_is_nm1, rep.profile_is_staircase) == (
        False,
        False,
        False,
    )
    assert rep.all_equal()

    rep = profile_equivalence_report(space_from_values(2, [1]))
    assert rep.class_count_is_nm1 and rep.nearest_class_is_nm1 and rep.profile_is_staircase


def test_profile_equivalence_clauses_agree_when_embeddable():
    for name, s in embeddable_fixture_spaces():
        assert profile_equivalence_report(s).all_equal(), name


def test_conjecture_probe_on_line_like_sample():
    rng = random.Random(5)
    spaces = []
    for _ in range(12):
        xs = sorted(rng.sample(range(40), 5))
        spaces.append(collinear(*xs))
    spaces.append(space_from_values(5, [1] * 10))
    report = probe_majorization_conjecture(spaces)
    assert report["tested"] == 13
    assert report["majorizing"] >= 12
    assert report["embeddable"] >= 12
    assert report["must_hold_failures"] == []
