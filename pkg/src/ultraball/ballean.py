"""The ballean of a finite ultrametric space and exact Hausdorff distances.

The ballean is the set of all distinct closed balls.  Between two distinct
balls the Hausdorff distance collapses to the diameter of their union; this
module also carries the raw sup-inf definition and the disjoint/nested case
split so the three routes can be checked against each other.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

from .core import (
    ZERO,
    BadParamsError,
    Ball,
    EqualBallsError,
    FamilyTooSmallError,
    FiniteUltrametricSpace,
    PointId,
    _as_index_tuple,
    closed_ball,
    diam,
    isolated_points,
    require_canonical,
    smallest_ball,
)

DEBUG_ENV_VAR = "ULTRABALL_DEBUG_ASSERT"


def _debug_enabled(flag: bool | None) -> bool:
    # The environment variable forces the cross-check on everywhere, no
    # matter what individual call sites ask for.
    if os.environ.get(DEBUG_ENV_VAR, "") == "1":
        return True
    return bool(flag)


@dataclass(frozen=True)
class Ballean:
    """All distinct closed balls of a space, sorted by (size, members)."""

    balls: tuple[Ball, ...]
    host: FiniteUltrametricSpace

    def __iter__(self) -> Iterator[Ball]:
        return iter(self.balls)

    def __len__(self) -> int:
        return len(self.balls)

    def member_sets(self) -> set[tuple[int, ...]]:
        return {b.members for b in self.balls}


@dataclass(frozen=True)
class BallFamily:
    """A nonempty collection of balls together with the union of their points."""

    balls: tuple[Ball, ...]

    @property
    def union(self) -> tuple[int, ...]:
        return tuple(sorted({m for b in self.balls for m in b.members}))


def enumerate_ballean(space: FiniteUltrametricSpace) -> Ballean:
    """Every closed ball of the space, one entry per distinct member set.

    Radii only need to range over zero and the distances realized from each
    center: any other radius reproduces one of those balls.
    """
    by_members: dict[tuple[int, ...], Ball] = {}
    for c in range(space.n):
        radii = set(space.dist[c])
        radii.add(ZERO)
        for r in radii:
            b = closed_ball(space, c, r)
            by_members[b.members] = b
    balls = tuple(sorted(by_members.values(), key=lambda b: (len(b.members), b.members)))
    assert len(balls) <= 2 * space.n - 1, "ballean exceeded the 2n-1 bound"
    return Ballean(balls, space)


def hausdorff_oracle(
    space: FiniteUltrametricSpace, a: Iterable[int], b: Iterable[int]
) -> Fraction:
    """Hausdorff distance between two nonempty point sets, straight from the
    two-sided sup-inf definition.  Works on arbitrary subsets, not only balls."""
    a_idx = _as_index_tuple(space, a)
    b_idx = _as_index_tuple(space, b)
    dist = space.dist
    forward = max(min(dist[x][y] for y in b_idx) for x in a_idx)
    backward = max(min(dist[x][y] for x in a_idx) for y in b_idx)
    return max(forward, backward)


def hausdorff_by_cases(space: FiniteUltrametricSpace, b1: Ball, b2: Ball) -> Fraction:
    """Hausdorff distance via the case split: the gap between disjoint balls,
    the larger diameter for intersecting ones, zero for equal ones."""
    require_canonical(space, b1)
    require_canonical(space, b2)
    if b1.members == b2.members:
        return ZERO
    s1, s2 = set(b1.members), set(b2.members)
    if s1 & s2:
        return max(b1.diameter, b2.diameter)
    dist = space.dist
    return min(dist[x][y] for x in b1.members for y in b2.members)


def hausdorff_balls(
    space: FiniteUltrametricSpace, b1: Ball, b2: Ball, *, debug: bool | None = None
) -> Fraction:
    """Hausdorff distance between two balls: the diameter of their union.

    With debug on (or ULTRABALL_DEBUG_ASSERT=1) the case-split form and the
    sup-inf definition are evaluated too and all three must agree exactly.
    """
    require_canonical(space, b1)
    require_canonical(space, b2)
    if b1.members == b2.members:
        result = ZERO
    else:
        result = diam(space, b1.members + b2.members)
    if _debug_enabled(debug):
        cases = hausdorff_by_cases(space, b1, b2)
        oracle = hausdorff_oracle(space, b1.members, b2.members)
        if not (result == cases == oracle):
            raise AssertionError(
                f"Hausdorff routes disagree on {b1} vs {b2}: "
                f"union-diam={result}, cases={cases}, sup-inf={oracle}"
            )
    return result


def smallest_ball_distance(
    space: FiniteUltrametricSpace, b1: Ball, b2: Ball
) -> tuple[Ball, Fraction]:
    """The smallest ball containing two distinct balls, with its diameter.

    The diameter equals the Hausdorff distance between the balls.
    """
    require_canonical(space, b1)
    require_canonical(space, b2)
    if b1.members == b2.members:
        raise EqualBallsError("the two balls must be distinct")
    bstar = smallest_ball(space, b1.members + b2.members)
    return bstar, bstar.diameter


def ball_label(space: FiniteUltrametricSpace, ball: Ball) -> str:
    return "+".join(sorted(space.points[m].label for m in ball.members))


def ballean_space(
    space: FiniteUltrametricSpace, *, debug: bool | None = None
) -> FiniteUltrametricSpace:
    """The ballean as a space of its own: points are balls, distances are
    Hausdorff distances.

    The result is built directly from the ball list; it is not revalidated
    here, so checking it against the ultrametric axioms stays a meaningful
    test rather than a tautology.
    """
    balls = enumerate_ballean(space).balls
    labels = _dedupe_labels([ball_label(space, b) for b in balls])
    m = len(balls)
    rows = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            d = hausdorff_balls(space, balls[i], balls[j], debug=debug)
            rows[i][j] = rows[j][i] = d
    points = tuple(PointId(i, labels[i]) for i in range(m))
    return FiniteUltrametricSpace(points, tuple(tuple(row) for row in rows))


def _dedupe_labels(labels: list[str]) -> list[str]:
    # "+"-joined member labels are unique unless the input labels themselves
    # embed "+"; disambiguate deterministically in that corner.
    seen: dict[str, int] = {}
    out = []
    for lab in labels:
        count = seen.get(lab, 0) + 1
        seen[lab] = count
        out.append(lab if count == 1 else f"{lab}#{count}")
    return out


def iterate_ballean(
    space: FiniteUltrametricSpace, depth: int, *, cap: int = 3, debug: bool | None = None
) -> FiniteUltrametricSpace:
    """Apply the ballean-space construction `depth` times.

    Sizes roughly double each round, so depth is capped (default 3); raise
    the cap explicitly if you really want a deeper tower.
    """
    if depth < 0 or depth > cap:
        raise BadParamsError(f"iteration depth must be between 0 and {cap}, got {depth}")
    out = space
    for _ in range(depth):
        out = ballean_space(out, debug=debug)
    return out


def family_diameters(
    space: FiniteUltrametricSpace, family: BallFamily | Iterable[Ball]
) -> tuple[Fraction, Fraction, Fraction]:
    """Three diameters of a family of at least two distinct balls.

    Returns (diameter of the family under the Hausdorff distance, diameter
    of the union of the balls, diameter of the smallest ball containing the
    union).  The three are provably equal and the function insists on it.
    """
    balls = family.balls if isinstance(family, BallFamily) else tuple(family)
    distinct = sorted({b.members: b for b in balls}.values(), key=lambda b: b.members)
    if len(distinct) < 2:
        raise FamilyTooSmallError(
            "need at least two distinct balls; for a lone ball the three "
            "diameters agree only when the ball is a singleton"
        )
    hd = max(
        hausdorff_balls(space, x, y) for x, y in combinations(distinct, 2)
    )
    union = sorted({m for b in distinct for m in b.members})
    ud = diam(space, union)
    sd = smallest_ball(space, union).diameter
    if not (hd == ud == sd):
        raise AssertionError(
            f"family diameters disagree: hausdorff={hd}, union={ud}, smallest-ball={sd}"
        )
    return hd, ud, sd


def b0_set(space: FiniteUltrametricSpace) -> set[Ball]:
    """Balls admitting a positive-radius presentation.

    Computed set-theoretically as the balls of positive diameter together
    with the singletons at isolated points.  For a finite space every point
    is isolated, so this is the whole ballean, and that is asserted.
    """
    bl = enumerate_ballean(space)
    iso = isolated_points(space)
    result = {b for b in bl.balls if b.diameter > 0}
    result.update(closed_ball(space, x, ZERO) for x in iso)
    assert result == set(bl.balls), "finite-scale positive-radius balls must exhaust the ballean"
    return result


# The positive-radius balls are exactly the isolated points of the ballean,
# so the same computation serves both names.
iso_of_ballean = b0_set


def singleton_embedding(space: FiniteUltrametricSpace) -> dict[PointId, Ball]:
    """Map each point to its singleton ball and check the map is an isometry."""
    mapping = {p: closed_ball(space, p.index, ZERO) for p in space.points}
    pts = space.points
    for i in range(space.n):
        for j in range(i + 1, space.n):
            dh = hausdorff_balls(space, mapping[pts[i]], mapping[pts[j]])
            if dh != space.dist[i][j]:
                raise AssertionError(
                    f"singleton embedding failed to preserve d({pts[i].label},{pts[j].label})"
                )
    return mapping


def min_positive_distance(space: FiniteUltrametricSpace) -> Fraction | None:
    """Smallest positive pairwise distance, or None for a one-point space."""
    vals = [
        space.dist[i][j]
        for i in range(space.n)
        for j in range(i + 1, space.n)
        if space.dist[i][j] > 0
    ]
    return min(vals) if vals else None
