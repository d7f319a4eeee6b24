"""Symbolic subsets of the nonnegative rationals under the max ultrametric.

The distance is ``d(x, y) = max(x, y)`` for distinct x, y (and 0 on the
diagonal).  A space is presented as finitely many positive rationals, an
optional zero, and finitely many geometric tails ``first * ratio**k``
(k >= 0, ratio in (0, 1)) converging to zero.  Under this metric the only
possible accumulation point is 0, so the presentation keeps every predicate
of interest (isolation, discreteness, metrical discreteness, local
finiteness, bounded compactness) exactly decidable while the underlying set
is genuinely infinite.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .core import (
    ZERO,
    BadParamsError,
    FiniteUltrametricSpace,
    NegativeRadiusError,
    RationalLike,
    UltraballError,
    parse_rational,
    rational_str,
    validate_ultrametric,
)


class NegativeInputError(UltraballError):
    pass


class CenterNotInSpaceError(UltraballError):
    pass


def dlps_distance(x: RationalLike, y: RationalLike) -> Fraction:
    """max(x, y) for distinct nonnegative arguments, 0 for equal ones."""
    xf, yf = parse_rational(x), parse_rational(y)
    if xf < 0 or yf < 0:
        raise NegativeInputError(f"arguments must be nonnegative, got {xf}, {yf}")
    return ZERO if xf == yf else max(xf, yf)


@dataclass(frozen=True)
class GeometricTail:
    """The infinite set {first * ratio**k : k >= 0}; first > 0, ratio in (0,1)."""

    first: Fraction
    ratio: Fraction

    def contains(self, x: Fraction) -> bool:
        if x <= 0 or x > self.first:
            return False
        q = x / self.first
        cur = Fraction(1)
        while cur > q:
            cur *= self.ratio
        return cur == q

    def terms_at_least(self, cut: Fraction) -> list[Fraction]:
        out = []
        term = self.first
        while term >= cut:
            out.append(term)
            term *= self.ratio
        return out

    def max_at_most(self, r: Fraction) -> Fraction | None:
        """Largest term <= r, or None when r <= 0."""
        if r <= 0:
            return None
        term = self.first
        while term > r:
            term *= self.ratio
        return term


# ---------------------------------------------------------------------------
# Exact disjointness of two geometric tails.
#
# first1 * ratio1**k == first2 * ratio2**l is a multiplicative equation over
# the rationals.  Factoring all four numbers over a shared pairwise-coprime
# base turns it into the integer linear system k*u - l*w = c on exponent
# vectors, which is solved exactly (no floats, no factorization into primes
# required: coprime-base refinement is enough for uniqueness).
# ---------------------------------------------------------------------------


def _coprime_basis(values: Iterable[int]) -> list[int]:
    """Pairwise-coprime integers > 1 over which every input factors exactly."""
    basis: list[int] = []
    stack = [abs(v) for v in values if abs(v) > 1]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        for i, b in enumerate(basis):
            g = math.gcd(m, b)
            if g == 1:
                continue
            basis.pop(i)
            stack.extend((g, b // g, m // g))
            break
        else:
            basis.append(m)
    return sorted(basis)


def _int_exponents(n: int, basis: Sequence[int]) -> list[int]:
    out = []
    for b in basis:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        out.append(e)
    assert n == 1, "value does not factor over the basis it was built from"
    return out


def _exponent_vector(q: Fraction, basis: Sequence[int]) -> list[int]:
    num = _int_exponents(q.numerator, basis)
    den = _int_exponents(q.denominator, basis)
    return [a - b for a, b in zip(num, den)]


def _tails_intersect(t1: GeometricTail, t2: GeometricTail) -> bool:
    """Decide whether the two tails share any element, exactly."""
    a, r = t1.first, t1.ratio
    b, s = t2.first, t2.ratio
    if a == b:
        return True

    nums = []
    for q in (a, b, r, s):
        nums.extend((q.numerator, q.denominator))
    basis = _coprime_basis(nums)
    u = _exponent_vector(r, basis)
    w = _exponent_vector(s, basis)
    c = [x - y for x, y in zip(_exponent_vector(b, basis), _exponent_vector(a, basis))]

    def verify(k: int, l: int) -> bool:
        return k >= 0 and l >= 0 and a * r**k == b * s**l

    # Independent exponent directions: a 2x2 subsystem pins (k, l).
    dim = len(basis)
    for i in range(dim):
        for j in range(i + 1, dim):
            det = -u[i] * w[j] + w[i] * u[j]
            if det == 0:
                continue
            k_num = -c[i] * w[j] + w[i] * c[j]
            l_num = u[i] * c[j] - c[i] * u[j]
            if k_num % det or l_num % det:
                return False
            return verify(k_num // det, l_num // det)

    # Parallel case: u = (p/q) * w with q > 0, so the system collapses to
    # one Diophantine equation k*p*f - l*q*f = e*q where c = (e/f) * w.
    pivot = next(i for i in range(dim) if w[i] != 0)
    p, q = u[pivot], w[pivot]
    if q < 0:
        p, q = -p, -q
    g = math.gcd(p, q)
    p, q = p // g, q // g
    for i in range(dim):
        if (w[i] == 0) != (c[i] == 0) or c[i] * w[pivot] != c[pivot] * w[i]:
            return False
    e, f = c[pivot], w[pivot]
    if f < 0:
        e, f = -e, -f
    g = math.gcd(e, f)
    e, f = e // g, f // g

    big_p, big_q, big_r = p * f, q * f, e * q
    g = math.gcd(big_p, big_q)
    if big_r % g:
        return False
    mod = big_q // g
    if mod == 1:
        k0 = 0
    else:
        k0 = (big_r // g) % mod * pow(big_p // g % mod, -1, mod) % mod
    if big_p > 0:
        # l grows with k, so push k up until l is nonnegative.
        k = k0
        while k * big_p < big_r:
            k += mod
        return verify(k, (k * big_p - big_r) // big_q)
    # big_p < 0: only finitely many k keep l nonnegative.
    k = k0
    while k * big_p >= big_r:
        if verify(k, (k * big_p - big_r) // big_q):
            return True
        k += mod
    return False


@dataclass(frozen=True)
class DlpsSpace:
    """Symbolic presentation: finite positive points, optional 0, geometric tails.

    Tails must be pairwise disjoint and disjoint from the finite points;
    overlapping presentations are rejected at construction rather than
    merged, so membership stays a cheap scan.
    """

    finite_points: tuple[Fraction, ...]
    has_zero: bool
    tails: tuple[GeometricTail, ...]

    def contains(self, x: RationalLike) -> bool:
        xf = parse_rational(x)
        if xf == 0:
            return self.has_zero
        if xf < 0:
            return False
        i = bisect.bisect_left(self.finite_points, xf)
        if i < len(self.finite_points) and self.finite_points[i] == xf:
            return True
        return any(t.contains(xf) for t in self.tails)

    def max_element(self) -> Fraction:
        best = ZERO if self.has_zero else None
        if self.finite_points:
            best = self.finite_points[-1] if best is None else max(best, self.finite_points[-1])
        for t in self.tails:
            best = t.first if best is None else max(best, t.first)
        assert best is not None
        return best

    def max_at_most(self, r: Fraction) -> Fraction | None:
        """Largest element of the space that is <= r, if any."""
        best: Fraction | None = None
        i = bisect.bisect_right(self.finite_points, r)
        if i > 0:
            best = self.finite_points[i - 1]
        for t in self.tails:
            cand = t.max_at_most(r)
            if cand is not None and (best is None or cand > best):
                best = cand
        if best is None and self.has_zero and r >= 0:
            best = ZERO
        return best

    def has_element_below(self, v: Fraction) -> bool:
        """Is there an element strictly less than v?  Tails reach arbitrarily
        far down, so any tail answers yes for positive v."""
        if v <= 0:
            return False
        if self.has_zero or self.tails:
            return True
        return bool(self.finite_points) and self.finite_points[0] < v

    def to_json_dict(self) -> dict:
        return {
            "points": [rational_str(p) for p in self.finite_points],
            "zero": self.has_zero,
            "tails": [
                {"first": rational_str(t.first), "ratio": rational_str(t.ratio)}
                for t in self.tails
            ],
        }


def dlps_space(
    points: Iterable[RationalLike] = (),
    has_zero: bool = False,
    tails: Iterable[tuple[RationalLike, RationalLike]] = (),
) -> DlpsSpace:
    """Validated constructor for a symbolic space presentation."""
    pts = sorted({parse_rational(p) for p in points})
    if pts and pts[0] <= 0:
        raise BadParamsError("finite points must be positive; use has_zero for 0")
    tl = []
    for first, ratio in tails:
        ff, rf = parse_rational(first), parse_rational(ratio)
        if ff <= 0:
            raise BadParamsError(f"tail first term must be positive, got {ff}")
        if not 0 < rf < 1:
            raise BadParamsError(f"tail ratio must lie strictly between 0 and 1, got {rf}")
        tl.append(GeometricTail(ff, rf))
    if not pts and not has_zero and not tl:
        raise BadParamsError("the presented set must be nonempty")

    for i, t in enumerate(tl):
        for p in pts:
            if t.contains(p):
                raise BadParamsError(f"point {p} already lies on tail ({t.first}, {t.ratio})")
        for other in tl[i + 1 :]:
            if _tails_intersect(t, other):
                raise BadParamsError(
                    f"tails ({t.first}, {t.ratio}) and ({other.first}, {other.ratio}) intersect"
                )
    return DlpsSpace(tuple(pts), bool(has_zero), tuple(tl))


def dlps_from_json_dict(data: dict) -> DlpsSpace:
    try:
        points = data.get("points", [])
        zero = data.get("zero", False)
        tails = [(t["first"], t["ratio"]) for t in data.get("tails", [])]
    except (KeyError, TypeError) as exc:
        raise BadParamsError(f"bad symbolic-space JSON: {exc}") from exc
    return dlps_space(points, zero, tails)


@dataclass(frozen=True)
class Singleton:
    """The one-element ball {value}."""

    value: Fraction


@dataclass(frozen=True)
class Truncation:
    """The ball X intersected with [0, cutoff]; cutoff normalized to the
    largest element it actually traps, so equal sets get equal cutoffs."""

    cutoff: Fraction


SymbolicBall = Union[Singleton, Truncation]


def normalize_ball(space: DlpsSpace, ball: SymbolicBall) -> SymbolicBall:
    if isinstance(ball, Singleton):
        if not space.contains(ball.value):
            raise BadParamsError(f"singleton value {ball.value} is not in the space")
        return ball
    cutoff = space.max_at_most(ball.cutoff)
    if cutoff is None:
        raise BadParamsError(f"no element of the space lies at or below {ball.cutoff}")
    return Truncation(cutoff)


def ball_max(ball: SymbolicBall) -> Fraction:
    return ball.value if isinstance(ball, Singleton) else ball.cutoff


def balls_equal_as_sets(space: DlpsSpace, b1: SymbolicBall, b2: SymbolicBall) -> bool:
    b1 = normalize_ball(space, b1)
    b2 = normalize_ball(space, b2)
    if type(b1) is type(b2):
        return b1 == b2
    single, trunc = (b1, b2) if isinstance(b1, Singleton) else (b2, b1)
    # A truncation collapses to one point iff nothing lies below its cutoff.
    return single.value == trunc.cutoff and not space.has_element_below(trunc.cutoff)


def dlps_ball(space: DlpsSpace, c: RationalLike, r: RationalLike) -> SymbolicBall:
    """Closed ball around c: a bare singleton below the center's own value,
    the whole initial segment [0, r] of the space from the center on up."""
    cf, rf = parse_rational(c), parse_rational(r)
    if rf < 0:
        raise NegativeRadiusError(f"radius must be nonnegative, got {rf}")
    if not space.contains(cf):
        raise CenterNotInSpaceError(f"{cf} is not a point of the space")
    if cf > 0 and rf < cf:
        return Singleton(cf)
    return normalize_ball(space, Truncation(rf))


def dlps_acc(space: DlpsSpace) -> frozenset[Fraction]:
    """Accumulation points: at most {0}, and exactly {0} when 0 is present
    and some tail brings points arbitrarily close to it."""
    if space.has_zero and space.tails:
        return frozenset({ZERO})
    return frozenset()


@dataclass(frozen=True)
class DlpsIsolatedSet:
    """The isolated points, described as the space minus its accumulation set."""

    space: DlpsSpace
    excludes_zero: bool

    def __contains__(self, x: object) -> bool:
        xf = parse_rational(x)  # type: ignore[arg-type]
        if self.excludes_zero and xf == 0:
            return False
        return self.space.contains(xf)

    def describe(self) -> str:
        return "X \\ {0}" if self.excludes_zero else "X"


def dlps_iso(space: DlpsSpace) -> DlpsIsolatedSet:
    return DlpsIsolatedSet(space, excludes_zero=bool(dlps_acc(space)))


def dlps_is_discrete(space: DlpsSpace) -> bool:
    return not dlps_acc(space)


def dlps_min_positive_distance(space: DlpsSpace) -> Fraction | None:
    """Infimum of distances between distinct elements; None with < 2 elements.

    Under the max metric the closest pair is the two smallest elements, so
    the infimum is the second-smallest element; tails force it to 0 (then
    it is a true infimum, not attained).
    """
    if space.tails:
        return ZERO
    elements = ([ZERO] if space.has_zero else []) + list(space.finite_points)
    if len(elements) < 2:
        return None
    return elements[1]


def dlps_is_metrically_discrete(space: DlpsSpace) -> bool:
    m = dlps_min_positive_distance(space)
    return m is None or m > 0


def dlps_is_locally_finite(space: DlpsSpace) -> bool:
    # A bounded set [0, t] traps a whole tail end, so any tail kills this.
    return not space.tails


def dlps_is_boundedly_compact(space: DlpsSpace) -> bool:
    # Equivalent here to every initial segment X n [0, t] being finite.
    return not space.tails


def dlps_ball_count_at_most(space: DlpsSpace, threshold: RationalLike) -> int | None:
    """Number of distinct balls whose members all lie at or below threshold;
    None means infinitely many (any tail supplies them)."""
    t = parse_rational(threshold)
    if t < 0:
        return 0
    if space.tails:
        return None
    count_elems = len([p for p in space.finite_points if p <= t]) + (1 if space.has_zero else 0)
    return 0 if count_elems == 0 else 2 * count_elems - 1


def dlps_ballean_locally_finite(space: DlpsSpace) -> bool:
    return dlps_ball_count_at_most(space, space.max_element()) is not None


@dataclass(frozen=True)
class DlpsBalleanReport:
    ballean_discrete: bool
    ballean_acc: frozenset[SymbolicBall]
    ballean_metrically_discrete: bool

    def to_json_dict(self) -> dict:
        return {
            "discrete": self.ballean_discrete,
            "accumulation_balls": sorted(
                rational_str(ball_max(b)) for b in self.ballean_acc
            ),
            "metrically_discrete": self.ballean_metrically_discrete,
        }


def dlps_ballean_analysis(space: DlpsSpace) -> DlpsBalleanReport:
    """Predicates of the ball space, derived from the point-space presentation.

    The ball space is discrete iff 0 is not an accumulation point of the
    space; its accumulation balls are exactly the singletons at accumulation
    points; it is metrically discrete iff the space is.  When 0 belongs to
    the space, discreteness and metrical discreteness of the ball space are
    required to agree; the equivalence is only reported, not enforced, when
    0 is absent.
    """
    acc = dlps_acc(space)
    ballean_discrete = ZERO not in acc
    ballean_acc = frozenset(Singleton(x) for x in acc)
    ballean_metrically_discrete = dlps_is_metrically_discrete(space)

    assert ballean_discrete == dlps_is_discrete(space)
    if space.has_zero and ballean_metrically_discrete != ballean_discrete:
        raise AssertionError(
            "with 0 present, ball-space discreteness and metrical discreteness must coincide"
        )
    return DlpsBalleanReport(ballean_discrete, ballean_acc, ballean_metrically_discrete)


def dlps_hausdorff(space: DlpsSpace, b1: SymbolicBall, b2: SymbolicBall) -> Fraction:
    """Hausdorff distance between two symbolic balls: the maximum of their
    top elements, i.e. the diameter of the union; 0 for equal sets."""
    n1 = normalize_ball(space, b1)
    n2 = normalize_ball(space, b2)
    if balls_equal_as_sets(space, n1, n2):
        return ZERO
    return max(ball_max(n1), ball_max(n2))


def dlps_sample(space: DlpsSpace, n: int, scale_cut: RationalLike) -> FiniteUltrametricSpace:
    """Finite shadow of the space: 0 when present, all finite points, and
    tail terms down to scale_cut, truncated to n points by dropping the
    smallest positives first."""
    if n < 1:
        raise BadParamsError("sample size must be at least 1")
    cut = parse_rational(scale_cut)
    if cut <= 0:
        raise BadParamsError("scale cut must be positive")
    positives: set[Fraction] = set(space.finite_points)
    for t in space.tails:
        positives.update(t.terms_at_least(cut))
    chosen: list[Fraction] = []
    budget = n
    if space.has_zero:
        chosen.append(ZERO)
        budget -= 1
    chosen.extend(sorted(positives, reverse=True)[:budget])
    if not chosen:
        chosen = [space.max_element()]
    values = sorted(chosen)
    labels = [rational_str(v) for v in values]
    matrix = [[dlps_distance(x, y) for y in values] for x in values]
    return validate_ultrametric(matrix, labels)
