"""Finite ultrametric spaces, closed balls, and exact rational distances.

Every distance in this package is a ``fractions.Fraction``.  Nothing here
touches floating point: the structure theorems being machine-checked are
exact equalities, and a single rounded bit would make them unverifiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

ZERO = Fraction(0)

RationalLike = Fraction | int | str


class UltraballError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptySubsetError(UltraballError):
    pass


class NegativeRadiusError(UltraballError):
    pass


class ForeignBallError(UltraballError):
    """A ball is not a canonical closed ball of the given space."""


class EqualBallsError(UltraballError):
    pass


class FamilyTooSmallError(UltraballError):
    pass


class MalformedTreeError(UltraballError):
    pass


class BadParamsError(UltraballError):
    pass


class ConfigError(UltraballError):
    pass


class UltrametricViolation(UltraballError):
    """A distance matrix broke one of the ultrametric axioms.

    ``axiom`` is one of ``AsymmetricEntry``, ``NonzeroDiagonal``,
    ``ZeroOffDiagonal``, ``NegativeEntry``, ``StrongTriangleViolation``.
    ``witness`` holds point indices; for the strong triangle case it is the
    lexicographically first ordered triple ``(i, j, k)`` with
    ``d(i,j) > max(d(i,k), d(k,j))``.
    """

    def __init__(self, axiom: str, witness: tuple[int, ...], labels: Sequence[str]):
        self.axiom = axiom
        self.witness = tuple(witness)
        self.witness_labels = tuple(labels[i] for i in self.witness)
        super().__init__(f"{axiom} at {self.witness_labels}")

    def to_json_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness_labels)}


def parse_rational(value: RationalLike) -> Fraction:
    """Parse an exact rational from an int, Fraction, or string.

    Strings may be fractions ("3/2") or decimals ("1.5"); both parse
    exactly.  Floats are rejected outright: a binary float would silently
    poison every exact comparison downstream.
    """
    if isinstance(value, bool):
        raise BadParamsError(f"cannot use boolean {value!r} as a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise BadParamsError(f"cannot parse {value!r} as a rational: {exc}") from exc
    raise BadParamsError(f"cannot parse {type(value).__name__} value {value!r} as a rational")


def rational_str(value: Fraction) -> str:
    """Canonical text form: "2" for integers, "3/2" otherwise."""
    return str(value)


@dataclass(frozen=True)
class PointId:
    """A point of a finite space: dense index plus a unique label."""

    index: int
    label: str


@dataclass(frozen=True)
class FiniteUltrametricSpace:
    """A finite set of labeled points with an exact symmetric distance matrix.

    Construct through :func:`validate_ultrametric` to get the axioms checked;
    the raw constructor trusts its input (used when the matrix is built from
    structures that guarantee validity, and by replay tooling that must be
    able to carry known-bad matrices).
    """

    points: tuple[PointId, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.points)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index_of(self, label: str) -> int:
        for p in self.points:
            if p.label == label:
                return p.index
        raise BadParamsError(f"no point labeled {label!r}")

    def restrict(self, indices: Iterable[int]) -> "FiniteUltrametricSpace":
        """Subspace on the given points, reindexed densely, labels kept."""
        idx = tuple(indices)
        pts = tuple(PointId(i, self.points[p].label) for i, p in enumerate(idx))
        rows = tuple(tuple(self.dist[p][q] for q in idx) for p in idx)
        return FiniteUltrametricSpace(pts, rows)

    def positive_distances(self) -> tuple[Fraction, ...]:
        """Sorted distinct positive values realized by the matrix."""
        vals = {self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)}
        return tuple(sorted(v for v in vals if v > 0))


@dataclass(frozen=True)
class Ball:
    """A canonical closed ball: its member set and its diameter.

    The stored diameter is the minimal radius presenting the ball, which is
    exactly the diameter of the member set; the radius a caller asked for is
    presentation noise and is not kept.
    """

    members: tuple[int, ...]
    diameter: Fraction


def _as_index_tuple(space: FiniteUltrametricSpace, subset: Iterable[int]) -> tuple[int, ...]:
    idx = sorted(set(subset))
    if not idx:
        raise EmptySubsetError("subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= space.n:
        raise BadParamsError(f"point index out of range for a {space.n}-point space: {idx}")
    return tuple(idx)


def _make_labels(n: int, labels: Sequence[str] | None) -> tuple[str, ...]:
    if labels is None:
        return tuple(f"p{i}" for i in range(n))
    out = tuple(str(s) for s in labels)
    if len(out) != n:
        raise BadParamsError(f"{len(out)} labels for a {n}x{n} matrix")
    if len(set(out)) != n:
        raise BadParamsError("labels must be unique within a space")
    return out


def find_violation(
    matrix: Sequence[Sequence[RationalLike]],
    labels: Sequence[str] | None = None,
) -> UltrametricViolation | None:
    """Return the first broken axiom of the matrix, or None if it is valid.

    Axioms are checked in a fixed order (symmetry, zero diagonal, negative
    entries, zero off-diagonal entries, strong triangle inequality) and each
    scan reports its lexicographically first witness, so the result is
    deterministic.
    """
    n = len(matrix)
    if n == 0:
        raise BadParamsError("a space must contain at least one point")
    rows = [[parse_rational(v) for v in row] for row in matrix]
    for row in rows:
        if len(row) != n:
            raise BadParamsError("distance matrix must be square")
    labs = _make_labels(n, labels)

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                return UltrametricViolation("AsymmetricEntry", (i, j), labs)
    for i in range(n):
        if rows[i][i] != 0:
            return UltrametricViolation("NonzeroDiagonal", (i,), labs)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] < 0:
                return UltrametricViolation("NegativeEntry", (i, j), labs)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == 0:
                return UltrametricViolation("ZeroOffDiagonal", (i, j), labs)

    # Rescale to integers for the O(n^3) scan; exact and order-preserving.
    scale = math.lcm(*(v.denominator for row in rows for v in row))
    m = [[int(v * scale) for v in row] for row in rows]
    for i in range(n):
        mi = m[i]
        for j in range(n):
            if j == i:
                continue
            dij = mi[j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if dij > mi[k] and dij > m[k][j]:
                    return UltrametricViolation("StrongTriangleViolation", (i, j, k), labs)
    return None


def validate_ultrametric(
    matrix: Sequence[Sequence[RationalLike]],
    labels: Sequence[str] | None = None,
) -> FiniteUltrametricSpace:
    """Build a space from a matrix, raising UltrametricViolation on bad input."""
    violation = find_violation(matrix, labels)
    if violation is not None:
        raise violation
    n = len(matrix)
    labs = _make_labels(n, labels)
    rows = tuple(tuple(parse_rational(v) for v in row) for row in matrix)
    points = tuple(PointId(i, labs[i]) for i in range(n))
    return FiniteUltrametricSpace(points, rows)


def diam(space: FiniteUltrametricSpace, subset: Iterable[int]) -> Fraction:
    """Diameter of a nonempty subset.

    Uses the ultrametric shortcut (max distance to a fixed base point),
    which agrees with the full pairwise maximum on every subset of a valid
    space.
    """
    idx = _as_index_tuple(space, subset)
    row = space.dist[idx[0]]
    return max(row[p] for p in idx)


def closed_ball(space: FiniteUltrametricSpace, center: int, radius: RationalLike) -> Ball:
    """All points within the given radius of the center, canonicalized.

    The returned ball stores the diameter of its member set, not the
    requested radius, so equal point sets compare equal as balls.
    """
    r = parse_rational(radius)
    if r < 0:
        raise NegativeRadiusError(f"radius must be nonnegative, got {r}")
    if not 0 <= center < space.n:
        raise BadParamsError(f"center {center} out of range")
    row = space.dist[center]
    members = tuple(x for x in range(space.n) if row[x] <= r)
    return Ball(members, diam(space, members))


def smallest_ball(space: FiniteUltrametricSpace, subset: Iterable[int]) -> Ball:
    """The least closed ball containing the subset.

    In an ultrametric space this is the ball of radius diam(subset) around
    any point of the subset; it contains the subset and is contained in
    every ball that does.
    """
    idx = _as_index_tuple(space, subset)
    return closed_ball(space, idx[0], diam(space, idx))


def require_canonical(space: FiniteUltrametricSpace, ball: Ball) -> None:
    """Raise ForeignBallError unless ball is a canonical ball of the space."""
    if not ball.members:
        raise ForeignBallError("a ball must have at least one member")
    members = _as_index_tuple(space, ball.members)
    if members != tuple(ball.members):
        raise ForeignBallError(f"ball members must be sorted distinct indices: {ball.members}")
    if closed_ball(space, members[0], ball.diameter) != ball:
        raise ForeignBallError(f"{ball} is not a canonical ball of this space")


class BallRelation(Enum):
    EQUAL = "Equal"
    PROPER_SUBSET = "ProperSubset"
    PROPER_SUPERSET = "ProperSuperset"
    DISJOINT = "Disjoint"


def ball_relation(space: FiniteUltrametricSpace, b1: Ball, b2: Ball) -> BallRelation:
    """Classify two balls: equal, nested one way or the other, or disjoint.

    Partial overlap is impossible for ultrametric balls, so those four
    outcomes are exhaustive.
    """
    require_canonical(space, b1)
    require_canonical(space, b2)
    if b1.members == b2.members:
        return BallRelation.EQUAL
    s1, s2 = set(b1.members), set(b2.members)
    if s1 < s2:
        return BallRelation.PROPER_SUBSET
    if s1 > s2:
        return BallRelation.PROPER_SUPERSET
    if not s1 & s2:
        return BallRelation.DISJOINT
    raise AssertionError(f"partial overlap between balls {b1} and {b2}: the space is not ultrametric")


def isolated_points(space: FiniteUltrametricSpace) -> tuple[int, ...]:
    """Points with a punctured neighborhood empty of the space.

    In a finite metric space every point qualifies, but the membership is
    still computed from the matrix rather than assumed.
    """
    out = []
    for x in range(space.n):
        others = [space.dist[x][y] for y in range(space.n) if y != x]
        if not others or min(others) > 0:
            out.append(x)
    return tuple(out)


def equidistant_space(
    n: int, value: RationalLike, labels: Sequence[str] | None = None
) -> FiniteUltrametricSpace:
    """The n-point space in which every pair of distinct points is at `value`."""
    t = parse_rational(value)
    if n < 1:
        raise BadParamsError("n must be at least 1")
    if t <= 0:
        raise BadParamsError("the common distance must be positive")
    matrix = [[ZERO if i == j else t for j in range(n)] for i in range(n)]
    return validate_ultrametric(matrix, labels)


def member_labels(space: FiniteUltrametricSpace, members: Iterable[int]) -> tuple[str, ...]:
    return tuple(space.points[m].label for m in members)


def space_to_json_dict(space: FiniteUltrametricSpace) -> dict:
    """JSON form: {"labels": [...], "matrix": [[exact strings]]}."""
    return {
        "labels": list(space.labels),
        "matrix": [[rational_str(v) for v in row] for row in space.dist],
    }


def space_from_json_dict(data: dict, validate: bool = True) -> FiniteUltrametricSpace:
    """Load a space from its JSON form.

    With ``validate=False`` the matrix is taken as-is, which is what replay
    tooling needs in order to carry a known-bad matrix to the check that
    should reject it.
    """
    try:
        labels = data["labels"]
        matrix = data["matrix"]
    except (KeyError, TypeError) as exc:
        raise BadParamsError(f"space JSON needs 'labels' and 'matrix': {exc}") from exc
    if validate:
        return validate_ultrametric(matrix, labels)
    n = len(matrix)
    labs = _make_labels(n, labels)
    rows = tuple(tuple(parse_rational(v) for v in row) for row in matrix)
    points = tuple(PointId(i, labs[i]) for i in range(n))
    return FiniteUltrametricSpace(points, rows)
