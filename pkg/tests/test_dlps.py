from fractions import Fraction

import pytest

from ultraball.ballean import ballean_space, enumerate_ballean, hausdorff_balls, min_positive_distance
from ultraball.core import BadParamsError, NegativeRadiusError, find_violation
from ultraball.dlps import (
    CenterNotInSpaceError,
    GeometricTail,
    NegativeInputError,
    Singleton,
    Truncation,
    _tails_intersect,
    balls_equal_as_sets,
    dlps_acc,
    dlps_ball,
    dlps_ball_count_at_most,
    dlps_ballean_analysis,
    dlps_distance,
    dlps_from_json_dict,
    dlps_hausdorff,
    dlps_is_boundedly_compact,
    dlps_is_discrete,
    dlps_is_locally_finite,
    dlps_is_metrically_discrete,
    dlps_iso,
    dlps_min_positive_distance,
    dlps_sample,
    dlps_space,
)

F = Fraction


def finite_012():
    return dlps_space(points=(1, 2), has_zero=True)


def zero_tail():
    return dlps_space(has_zero=True, tails=[(1, "1/2")])


def bare_tail():
    return dlps_space(tails=[(1, "1/2")])


# --- distance ----------------------------------------------------------------


def test_distance_examples():
    assert dlps_distance(2, 3) == 3
    assert dlps_distance(5, 5) == 0
    assert dlps_distance(0, "1/2") == F(1, 2)


def test_distance_rejects_negative():
    with pytest.raises(NegativeInputError):
        dlps_distance(-1, 2)


# --- construction ------------------------------------------------------------


def test_empty_presentation_rejected():
    with pytest.raises(BadParamsError):
        dlps_space()


def test_bad_ratio_rejected():
    with pytest.raises(BadParamsError):
        dlps_space(tails=[(1, "1")])
    with pytest.raises(BadParamsError):
        dlps_space(tails=[(1, "3/2")])


def test_point_on_tail_rejected():
    with pytest.raises(BadParamsError):
        dlps_space(points=("1/4",), tails=[(1, "1/2")])


def test_intersecting_tails_rejected():
    with pytest.raises(BadParamsError):
        dlps_space(tails=[(1, "1/4"), ("1/2", "1/8")])  # both hit 1/16


@pytest.mark.parametrize(
    "t1, t2, expected",
    [
        ((1, "1/4"), ("1/2", "1/8"), True),  # 1*(1/4)^2 == (1/2)*(1/8)^1
        ((1, "1/2"), ("1/3", "1/2"), False),  # powers of 2 never reach 1/3 * 2^-k
        ((1, "1/2"), (1, "1/3"), True),  # equal first terms
        ((1, "1/4"), ("1/2", "1/4"), False),  # same ratio, offset by 1/2
        ((1, "1/4"), (2, "1/2"), True),  # 1*(1/4)^0 == 2*(1/2)^1
        (("1/6", "1/6"), (("1/4"), ("2/3")), True),  # both reach 1/6
        (("1/6", "1/6"), (("1/5"), ("2/3")), False),  # the factor 5 never cancels
        (("9/4", "2/3"), (("8/3"), ("3/4")), True),  # (9/4)(2/3) == (8/3)(3/4)^2 == 3/2
    ],
)
def test_tail_intersection_solver(t1, t2, expected):
    a = GeometricTail(F(t1[0]), F(t1[1]))
    b = GeometricTail(F(t2[0]), F(t2[1]))
    assert _tails_intersect(a, b) == expected
    assert _tails_intersect(b, a) == expected


def test_tail_solver_agrees_with_term_scan():
    # cross-check the algebra against direct enumeration of small terms
    candidates = [
        (F(1), F(1, 2)),
        (F(1), F(1, 3)),
        (F(2), F(1, 2)),
        (F(1, 3), F(1, 2)),
        (F(3, 4), F(1, 4)),
        (F(1), F(2, 5)),
        (F(5, 2), F(1, 5)),
    ]
    for t1 in candidates:
        for t2 in candidates:
            a, b = GeometricTail(*t1), GeometricTail(*t2)
            terms_a = {a.first * a.ratio**k for k in range(40)}
            terms_b = {b.first * b.ratio**k for k in range(40)}
            scanned = bool(terms_a & terms_b)
            assert _tails_intersect(a, b) == scanned


# --- balls -------------------------------------------------------------------


def test_ball_examples():
    space = finite_012()
    assert dlps_ball(space, 2, 1) == Singleton(F(2))
    # cutoffs normalize to the largest trapped element
    whole = dlps_ball(space, 2, 3)
    assert whole == Truncation(F(2))
    assert dlps_ball(space, 2, 2) == Truncation(F(2))
    assert dlps_ball(space, 1, 1) == Truncation(F(1))  # {0, 1}
    assert dlps_ball(space, 0, 0) == Truncation(F(0))  # degenerates to {0}


def test_ball_errors():
    space = finite_012()
    with pytest.raises(CenterNotInSpaceError):
        dlps_ball(space, 5, 1)
    with pytest.raises(NegativeRadiusError):
        dlps_ball(space, 1, -1)


def test_ball_set_equality_across_kinds():
    space = dlps_space(points=(2, 3))
    # nothing lies below 2, so the truncation at 2 is the bare singleton
    assert balls_equal_as_sets(space, Singleton(F(2)), Truncation(F(2)))
    assert not balls_equal_as_sets(finite_012(), Singleton(F(2)), Truncation(F(2)))


# --- iso / acc ---------------------------------------------------------------


def test_acc_examples():
    assert dlps_acc(zero_tail()) == frozenset({F(0)})
    assert dlps_acc(finite_012()) == frozenset()
    assert dlps_acc(bare_tail()) == frozenset()


def test_iso_examples():
    iso = dlps_iso(finite_012())
    assert all(x in iso for x in (0, 1, 2))
    iso = dlps_iso(zero_tail())
    assert 0 not in iso
    assert F(1, 4) in iso
    assert iso.describe() == "X \\ {0}"
    iso = dlps_iso(bare_tail())
    assert F(1, 8) in iso
    assert 0 not in iso  # 0 is not even a member


# --- predicate table ---------------------------------------------------------


@pytest.mark.parametrize(
    "factory, discrete, metrically, locally, boundedly",
    [
        (finite_012, True, True, True, True),
        (zero_tail, False, False, False, False),
        (bare_tail, True, False, False, False),
    ],
)
def test_predicates(factory, discrete, metrically, locally, boundedly):
    space = factory()
    assert dlps_is_discrete(space) == discrete
    assert dlps_is_metrically_discrete(space) == metrically
    assert dlps_is_locally_finite(space) == locally
    assert dlps_is_boundedly_compact(space) == boundedly


def test_min_positive_distance_closed_form():
    assert dlps_min_positive_distance(finite_012()) == 1  # second-smallest of {0,1,2}
    assert dlps_min_positive_distance(zero_tail()) == 0  # infimum, not attained
    assert dlps_min_positive_distance(dlps_space(points=(5,))) is None


def test_min_positive_distance_matches_sampled_brute_force():
    space = finite_012()
    sample = dlps_sample(space, 3, 1)
    assert dlps_min_positive_distance(space) == min_positive_distance(sample)


def test_ball_count_at_most():
    space = finite_012()
    assert dlps_ball_count_at_most(space, 2) == 5  # 2*3 - 1
    assert dlps_ball_count_at_most(space, 1) == 3  # {0}, {1}, {0,1}
    assert dlps_ball_count_at_most(space, "1/2") == 1
    assert dlps_ball_count_at_most(zero_tail(), "1/2") is None


# --- ballean analysis --------------------------------------------------------


def test_ballean_analysis_examples():
    report = dlps_ballean_analysis(zero_tail())
    assert not report.ballean_discrete
    assert report.ballean_acc == frozenset({Singleton(F(0))})

    report = dlps_ballean_analysis(finite_012())
    assert report.ballean_discrete
    assert report.ballean_acc == frozenset()

    third = dlps_space(points=(1,), has_zero=True, tails=[("1/3", "1/2")])
    assert not dlps_ballean_analysis(third).ballean_discrete


def test_ballean_analysis_consistency():
    for space in (finite_012(), zero_tail(), bare_tail()):
        report = dlps_ballean_analysis(space)
        assert report.ballean_discrete == dlps_is_discrete(space)
        assert report.ballean_metrically_discrete == dlps_is_metrically_discrete(space)
        assert report.ballean_acc == frozenset(Singleton(x) for x in dlps_acc(space))


def test_ballean_discrete_vs_metrically_discrete_needs_zero():
    # without 0 the two ballean predicates can split: the bare tail is
    # discrete but not metrically discrete
    report = dlps_ballean_analysis(bare_tail())
    assert report.ballean_discrete and not report.ballean_metrically_discrete


# --- symbolic Hausdorff ------------------------------------------------------


def test_hausdorff_examples():
    assert dlps_hausdorff(dlps_space(points=(2, 3)), Singleton(F(2)), Singleton(F(3))) == 3
    space = finite_012()
    assert dlps_hausdorff(space, Singleton(F(2)), Truncation(F(1))) == 2
    assert dlps_hausdorff(space, Truncation(F(1)), Truncation(F(2))) == 2
    assert dlps_hausdorff(space, Truncation(F(1)), Truncation(F(1))) == 0


def test_hausdorff_equal_sets_across_kinds_is_zero():
    space = dlps_space(points=(2, 3))
    assert dlps_hausdorff(space, Singleton(F(2)), Truncation(F(2))) == 0


# --- sampling ----------------------------------------------------------------


def test_sample_examples():
    full = dlps_sample(finite_012(), 3, 1)
    assert full.labels == ("0", "1", "2")

    s = dlps_sample(zero_tail(), 4, "1/8")
    assert s.labels == ("0", "1/4", "1/2", "1")

    assert dlps_sample(zero_tail(), 1, "1/8").n == 1


def test_sample_always_valid():
    for factory in (finite_012, zero_tail, bare_tail):
        for n in (1, 2, 5, 9):
            s = dlps_sample(factory(), n, "1/64")
            assert find_violation(s.dist, s.labels) is None


def test_sample_bad_params():
    with pytest.raises(BadParamsError):
        dlps_sample(finite_012(), 0, 1)
    with pytest.raises(BadParamsError):
        dlps_sample(finite_012(), 3, 0)


def test_sample_cut_above_everything_falls_back_to_max():
    s = dlps_sample(bare_tail(), 3, 4)
    assert s.labels == ("1",)


# --- finite shadow agreement -------------------------------------------------


def test_finite_shadow_agreement_full_survival():
    """On a finite presentation every symbolic ball survives sampling, and
    symbolic Hausdorff distances match the sampled-space computation."""
    space = finite_012()
    sample = dlps_sample(space, 3, 1)
    value_of = {lab: F(lab) for lab in sample.labels}
    index_of = {v: i for i, v in enumerate(value_of[lab] for lab in sample.labels)}

    symbolic_balls = [Singleton(F(1)), Singleton(F(2)), Truncation(F(0)), Truncation(F(1)), Truncation(F(2))]

    def shadow(ball):
        if isinstance(ball, Singleton):
            members = (index_of[ball.value],)
        else:
            members = tuple(sorted(index_of[v] for v in index_of if v <= ball.cutoff))
        for b in enumerate_ballean(sample).balls:
            if b.members == members:
                return b
        raise AssertionError(f"symbolic ball {ball} did not survive sampling")

    for i, b1 in enumerate(symbolic_balls):
        for b2 in symbolic_balls[i + 1 :]:
            assert dlps_hausdorff(space, b1, b2) == hausdorff_balls(sample, shadow(b1), shadow(b2))


def test_sampled_tail_min_distance_shrinks_with_cut():
    # evidence that the infimum of pairwise distances is 0 when a tail is present
    space = zero_tail()
    coarse = min_positive_distance(dlps_sample(space, 5, "1/8"))
    fine = min_positive_distance(dlps_sample(space, 8, "1/128"))
    assert fine < coarse


def test_sample_ballean_is_ultrametric():
    for factory in (finite_012, zero_tail, bare_tail):
        sample = dlps_sample(factory(), 6, "1/32")
        bspace = ballean_space(sample)
        assert find_violation(bspace.dist, bspace.labels) is None


# --- JSON --------------------------------------------------------------------


def test_json_round_trip():
    space = dlps_space(points=("1", "2"), has_zero=True, tails=[("1/3", "1/2")])
    again = dlps_from_json_dict(space.to_json_dict())
    assert again == space
    assert space.to_json_dict() == {
        "points": ["1", "2"],
        "zero": True,
        "tails": [{"first": "1/3", "ratio": "1/2"}],
    }
