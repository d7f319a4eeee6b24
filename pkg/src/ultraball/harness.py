"""Seeded randomized verification suite and structured reports.

Each check verifies one exact structural property of balleans on randomly
generated spaces (plus fixed symbolic instances).  Everything is driven by
a master seed through per-check substreams, so identical configurations
yield identical reports, and every failure record carries a serialized
instance that reproduces the failure on its own.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .ballean import (
    b0_set,
    ballean_space,
    enumerate_ballean,
    family_diameters,
    hausdorff_balls,
    hausdorff_by_cases,
    hausdorff_oracle,
    min_positive_distance,
    singleton_embedding,
    smallest_ball_distance,
)
from .core import (
    ZERO,
    ConfigError,
    FiniteUltrametricSpace,
    UltraballError,
    equidistant_space,
    find_violation,
    parse_rational,
    rational_str,
    space_from_json_dict,
    space_to_json_dict,
    validate_ultrametric,
)
from .dendrogram import are_isometric, build_dendrogram, is_binary, node_leaf_sets, random_space
from .dlps import (
    DlpsSpace,
    Singleton,
    dlps_acc,
    dlps_ball_count_at_most,
    dlps_ballean_analysis,
    dlps_hausdorff,
    dlps_is_boundedly_compact,
    dlps_is_discrete,
    dlps_is_locally_finite,
    dlps_is_metrically_discrete,
    dlps_min_positive_distance,
    dlps_sample,
    dlps_space,
)

DEFAULT_LEVEL_POOL: tuple[Fraction, ...] = tuple(
    parse_rational(v) for v in ("1", "3/2", "2", "3", "7/2", "4")
)


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 42
    trials: int = 200
    max_points: int = 12
    level_pool: tuple[Fraction, ...] = DEFAULT_LEVEL_POOL
    checks: tuple[str, ...] = ()  # empty means: run every registered check

    def selected_checks(self) -> tuple[str, ...]:
        if not self.checks:
            return tuple(CHECKS)
        return self.checks

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "max_points": self.max_points,
            "level_pool": [rational_str(v) for v in self.level_pool],
            "checks": list(self.selected_checks()),
        }


@dataclass
class CheckOutcome:
    check_id: str
    claim: str
    trials: int = 0
    failures: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def to_json_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "id": self.check_id,
            "claim": self.claim,
            "trials": self.trials,
            "failures": self.failures,
            "stats": self.stats,
        }
        if include_elapsed:
            out["elapsed_s"] = round(self.elapsed_s, 6)
        return out


@dataclass
class CheckReport:
    config: TrialConfig
    checks: list[CheckOutcome]

    @property
    def passed(self) -> bool:
        return all(not c.failures for c in self.checks)

    def outcome(self, check_id: str) -> CheckOutcome:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def to_json_dict(self, include_elapsed: bool = True) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "checks": [c.to_json_dict(include_elapsed) for c in self.checks],
            "status": "pass" if self.passed else "fail",
        }


def _substream(seed: int, *parts: object) -> int:
    data = ":".join([str(seed), *map(str, parts)]).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def _trial_rng(cfg: TrialConfig, check_id: str, trial: int) -> random.Random:
    return random.Random(_substream(cfg.seed, check_id, trial))


def _trial_space(
    cfg: TrialConfig, check_id: str, trial: int, max_points: int | None = None
) -> tuple[FiniteUltrametricSpace, random.Random]:
    rng = _trial_rng(cfg, check_id, trial)
    n = rng.randint(1, max_points if max_points is not None else cfg.max_points)
    return random_space(rng.getrandbits(63), n, cfg.level_pool), rng


def _failure(trial: int, detail: str, space: FiniteUltrametricSpace | None = None, **extra) -> dict:
    record: dict = {"trial": trial, "detail": detail}
    if space is not None:
        record["space"] = space_to_json_dict(space)
    record.update(extra)
    return record


# --- per-space check bodies -------------------------------------------------
# Each body returns a failure detail string, or None when the space passes.


def _body_h1(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    balls = enumerate_ballean(space).balls
    pairs = list(combinations(range(len(balls)), 2))
    if len(pairs) > 300:
        pairs = rng.sample(pairs, 300)
    for i, j in pairs:
        b1, b2 = balls[i], balls[j]
        union = hausdorff_balls(space, b1, b2, debug=False)
        cases = hausdorff_by_cases(space, b1, b2)
        oracle = hausdorff_oracle(space, b1.members, b2.members)
        if not (union == cases == oracle):
            return (
                f"routes disagree on {b1.members} vs {b2.members}: "
                f"union={union} cases={cases} supinf={oracle}"
            )
    return None


def _body_h2(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    bspace = ballean_space(space, debug=False)
    violation = find_violation(bspace.dist, bspace.labels)
    if violation is not None:
        return f"ballean space failed validation: {violation.to_json_dict()}"
    return None


def _body_h3(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    balls = enumerate_ballean(space).balls
    ball_sets = [set(b.members) for b in balls]
    for b1, b2 in combinations(balls, 2):
        bstar, value = smallest_ball_distance(space, b1, b2)
        if value != hausdorff_balls(space, b1, b2, debug=False):
            return f"smallest-ball diameter != Hausdorff distance for {b1.members}, {b2.members}"
        union = set(b1.members) | set(b2.members)
        if not union <= set(bstar.members):
            return f"smallest ball does not contain the union for {b1.members}, {b2.members}"
        for other, other_set in zip(balls, ball_sets):
            if union <= other_set and not set(bstar.members) <= other_set:
                return (
                    f"ball {other.members} contains the union of {b1.members} and "
                    f"{b2.members} but not their smallest ball"
                )
    return None


def _body_h4(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    balls = enumerate_ballean(space).balls
    if len(balls) < 2:
        return None
    for _ in range(50):
        size = rng.randint(2, min(8, len(balls)))
        family = rng.sample(balls, size)
        try:
            family_diameters(space, family)
        except AssertionError as exc:
            return f"family {[b.members for b in family]}: {exc}"
    return None


def _body_h5(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    bl = enumerate_ballean(space)
    if len(bl) > 2 * space.n - 1:
        return f"{len(bl)} balls exceeds 2n-1 = {2 * space.n - 1}"
    dend = build_dendrogram(space)
    if node_leaf_sets(dend) != bl.member_sets():
        return "merge-tree node leaf sets differ from ball member sets"
    if is_binary(dend) and len(bl) != 2 * space.n - 1:
        return f"binary merge tree but only {len(bl)} balls (expected {2 * space.n - 1})"
    return None


def _body_h6(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    singleton_embedding(space)  # raises AssertionError when not an isometry
    return None


def _body_h7(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    if space.n < 2:
        return None
    base = min_positive_distance(space)
    lifted = min_positive_distance(ballean_space(space, debug=False))
    if base != lifted:
        return f"min positive distance changed: space={base}, ballean={lifted}"
    return None


def _body_h9(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    bl = enumerate_ballean(space)
    for y in bl.balls:
        y_set = set(y.members)
        position = {orig: i for i, orig in enumerate(y.members)}
        expected = {
            tuple(sorted(position[m] for m in b.members))
            for b in bl.balls
            if set(b.members) <= y_set
        }
        actual = enumerate_ballean(space.restrict(y.members)).member_sets()
        if expected != actual:
            return f"subballs of {y.members} do not match the ballean of the restriction"
    return None


def _body_h11(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    bspace = ballean_space(space, debug=False)
    m = bspace.n
    universe = set(range(m))

    def iso_of(subset: frozenset[int]) -> set[int]:
        out = set()
        for s in subset:
            others = [bspace.dist[s][t] for t in subset if t != s]
            if not others or min(others) > 0:
                out.add(s)
        return out

    def acc_of(subset: frozenset[int]) -> set[int]:
        out = set()
        for c in range(m):
            others = [bspace.dist[c][s] for s in subset if s != c]
            if others and min(others) == 0:
                out.add(c)
        return out

    dense_discrete: list[frozenset[int]] = []
    for bits in range(1, 2**m):
        subset = frozenset(i for i in range(m) if bits >> i & 1)
        iso, acc = iso_of(subset), acc_of(subset)
        if iso & acc:
            return f"iso and acc intersect for subset {sorted(subset)}"
        dense = subset == universe  # in a finite space only the whole set is dense
        if ((iso | acc) == universe) != dense:
            return f"iso+acc covers the space but subset {sorted(subset)} is not dense"
        if dense and iso == subset:
            dense_discrete.append(subset)
    if dense_discrete != [frozenset(universe)]:
        return f"dense discrete subsets are not unique: {len(dense_discrete)} found"
    # The unique dense discrete subset is the positive-radius ball family.
    if len(b0_set(space)) != m:
        return "positive-radius ball family does not exhaust the ballean"
    return None


def _body_h12(space: FiniteUltrametricSpace, rng: random.Random) -> str | None:
    first = ballean_space(space, debug=False)
    second = ballean_space(first, debug=False)
    for stage, candidate in (("first", first), ("second", second)):
        violation = find_violation(candidate.dist, candidate.labels)
        if violation is not None:
            return f"{stage} iterated ballean failed validation: {violation.to_json_dict()}"
    return None


_PER_SPACE_BODIES = {
    "H1": _body_h1,
    "H2": _body_h2,
    "H3": _body_h3,
    "H4": _body_h4,
    "H5": _body_h5,
    "H6": _body_h6,
    "H7": _body_h7,
    "H9": _body_h9,
    "H11": _body_h11,
    "H12": _body_h12,
}

# Checks whose instances are small by design (exhaustive subset scans).
_SMALL_SPACE_CHECKS = {"H11": 4}


def _run_per_space_check(
    check_id: str,
    cfg: TrialConfig,
    outcome: CheckOutcome,
    replay: list[FiniteUltrametricSpace] | None,
) -> None:
    body = _PER_SPACE_BODIES[check_id]
    cap = _SMALL_SPACE_CHECKS.get(check_id)
    sizes: list[int] = []
    if replay is not None:
        instances = [(t, s, _trial_rng(cfg, check_id, t)) for t, s in enumerate(replay)]
    else:
        instances = []
        for trial in range(cfg.trials):
            max_points = min(cfg.max_points, cap) if cap else None
            space, rng = _trial_space(cfg, check_id, trial, max_points)
            instances.append((trial, space, rng))
    for trial, space, rng in instances:
        outcome.trials += 1
        sizes.append(space.n)
        try:
            detail = body(space, rng)
        except (UltraballError, AssertionError) as exc:
            detail = f"{type(exc).__name__}: {exc}"
            # A replayed matrix may itself be broken; surface its witness.
            input_violation = find_violation(space.dist, space.labels)
            if input_violation is not None:
                detail += f"; input space invalid: {input_violation.to_json_dict()}"
        if detail is not None:
            outcome.failures.append(_failure(trial, detail, space))
    if sizes:
        outcome.stats["max_space_size"] = max(sizes)
    if check_id == "H12" and replay is None and not outcome.failures:
        largest = max(sizes) if sizes else 0
        outcome.stats["iterated_sizes_recorded"] = True
        outcome.stats["largest_base_size"] = largest


def _run_h8(cfg: TrialConfig, outcome: CheckOutcome) -> None:
    top = max(2, min(10, cfg.max_points)) if cfg.max_points >= 2 else 1
    for n, t in product(range(1, top + 1), (Fraction(1), Fraction(3, 2))):
        outcome.trials += 1
        space = equidistant_space(n, t)
        bl = enumerate_ballean(space)
        bspace = ballean_space(space, debug=False)
        expected_size = 1 if n == 1 else n + 1
        problems = []
        if len(bl) != expected_size:
            problems.append(f"ballean size {len(bl)} != {expected_size}")
        off_diagonal = {
            bspace.dist[i][j]
            for i in range(bspace.n)
            for j in range(i + 1, bspace.n)
        }
        if n >= 2 and off_diagonal != {t}:
            problems.append(f"ballean distances {sorted(off_diagonal)} not all {t}")
        if are_isometric(space, bspace) != (n == 1):
            problems.append("isometry to own ballean has the wrong truth value")
        if problems:
            outcome.failures.append(_failure(outcome.trials - 1, "; ".join(problems), space, n=n))


def _dlps_fixtures() -> list[tuple[str, DlpsSpace]]:
    return [
        ("finite {0,1,2}", dlps_space(points=(1, 2), has_zero=True)),
        ("zero plus tail(1,1/2)", dlps_space(has_zero=True, tails=[(1, "1/2")])),
        ("tail(1,1/2) without zero", dlps_space(tails=[(1, "1/2")])),
        ("{0,1} plus tail(1/3,1/2)", dlps_space(points=(1,), has_zero=True, tails=[("1/3", "1/2")])),
    ]


# (discrete, metrically discrete, locally finite, boundedly compact,
#  ballean discrete, ballean acc is {singleton 0})
_DLPS_EXPECTED = {
    "finite {0,1,2}": (True, True, True, True, True, False),
    "zero plus tail(1,1/2)": (False, False, False, False, False, True),
    "tail(1,1/2) without zero": (True, False, False, False, True, False),
    "{0,1} plus tail(1/3,1/2)": (False, False, False, False, False, True),
}


def _run_h10(cfg: TrialConfig, outcome: CheckOutcome) -> None:
    for name, space in _dlps_fixtures():
        outcome.trials += 1
        problems: list[str] = []
        discrete = dlps_is_discrete(space)
        metrically = dlps_is_metrically_discrete(space)
        locally = dlps_is_locally_finite(space)
        boundedly = dlps_is_boundedly_compact(space)
        try:
            report = dlps_ballean_analysis(space)
        except AssertionError as exc:
            outcome.failures.append({"trial": name, "detail": str(exc), "dlps": space.to_json_dict()})
            continue
        expected = _DLPS_EXPECTED[name]
        got = (
            discrete,
            metrically,
            locally,
            boundedly,
            report.ballean_discrete,
            report.ballean_acc == frozenset({Singleton(ZERO)}),
        )
        if got != expected:
            problems.append(f"predicate table {got} != expected {expected}")
        if report.ballean_acc != frozenset(Singleton(x) for x in dlps_acc(space)):
            problems.append("ballean accumulation balls are not the singletons at acc points")
        if report.ballean_discrete != discrete:
            problems.append("discreteness does not transfer between space and ballean")
        if report.ballean_metrically_discrete != metrically:
            problems.append("metrical discreteness does not transfer")
        if (dlps_ball_count_at_most(space, space.max_element()) is not None) != locally:
            problems.append("bounded ball counts disagree with local finiteness")
        if boundedly != (not space.tails) or boundedly != locally:
            problems.append("bounded compactness criterion broke")

        sample = dlps_sample(space, 6, Fraction(1, 32))
        violation = find_violation(sample.dist, sample.labels)
        if violation is not None:
            problems.append(f"finite sample failed validation: {violation.to_json_dict()}")
        else:
            bsample = ballean_space(sample, debug=False)
            if find_violation(bsample.dist, bsample.labels) is not None:
                problems.append("ballean of the finite sample is not ultrametric")
            # Finite shadow: symbolic Hausdorff between surviving singleton
            # balls must match the sampled-space computation.
            values = [parse_rational(lab) for lab in sample.labels]
            for i in range(sample.n):
                for j in range(i + 1, sample.n):
                    symbolic = dlps_hausdorff(space, Singleton(values[i]), Singleton(values[j]))
                    if symbolic != sample.dist[i][j]:
                        problems.append(
                            f"symbolic vs sampled distance differ at {values[i]}, {values[j]}"
                        )
            if not space.tails:
                sampled_min = min_positive_distance(sample)
                if sampled_min != dlps_min_positive_distance(space):
                    problems.append("sampled min positive distance != symbolic second-smallest")
        if problems:
            outcome.failures.append(
                {"trial": name, "detail": "; ".join(problems), "dlps": space.to_json_dict()}
            )


CHECKS: dict[str, str] = {
    "H1": "Hausdorff distance between distinct balls: sup-inf definition, "
    "disjoint/nested case split, and diameter of the union all agree exactly",
    "H2": "the ballean under the Hausdorff distance is itself a valid ultrametric space",
    "H3": "the Hausdorff distance between distinct balls equals the diameter of the "
    "smallest ball containing their union",
    "H4": "a family of two or more balls has the same diameter measured between balls, "
    "on the union of their points, and on the smallest enclosing ball",
    "H5": "at most 2n-1 balls, ball member sets equal merge-tree node leaf sets, "
    "with equality of the bound for binary merge trees",
    "H6": "mapping points to singleton balls embeds the space isometrically in its ballean",
    "H7": "the minimum positive pairwise distance of the ballean equals that of the space",
    "H8": "an equidistant space has an equidistant ballean with the same value and one "
    "extra point, and is isometric to it only in the one-point case",
    "H9": "the balls contained in a ball Y are exactly the ballean of Y as a subspace",
    "H10": "symbolic max-metric spaces: discreteness, metrical discreteness, local "
    "finiteness, bounded compactness and accumulation sets transfer between a space "
    "and its ballean as the closed forms predict",
    "H11": "isolated and accumulation points of subsets partition correctly, and the "
    "ballean has exactly one dense discrete subset: itself",
    "H12": "iterating the ballean construction twice still yields ultrametric spaces",
}


def run_suite(
    config: TrialConfig, replay_spaces: list[dict] | None = None
) -> CheckReport:
    """Run the selected checks and collect a deterministic report.

    ``replay_spaces`` bypasses generation: each listed space (loaded without
    validation, so known-bad matrices reach the checks that must reject
    them) is fed to every selected per-space check.
    """
    if config.trials < 1:
        raise ConfigError("trials must be at least 1")
    if config.max_points < 1:
        raise ConfigError("max_points must be at least 1")
    if not config.level_pool or any(parse_rational(v) <= 0 for v in config.level_pool):
        raise ConfigError("level pool must be nonempty and positive")
    unknown = [c for c in config.selected_checks() if c not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks: {unknown}; known: {sorted(CHECKS)}")

    replay = None
    if replay_spaces is not None:
        replay = [space_from_json_dict(d, validate=False) for d in replay_spaces]

    outcomes = []
    for check_id in config.selected_checks():
        outcome = CheckOutcome(check_id, CHECKS[check_id])
        start = time.perf_counter()
        if check_id in _PER_SPACE_BODIES:
            _run_per_space_check(check_id, config, outcome, replay)
        elif check_id == "H8":
            _run_h8(config, outcome)
        elif check_id == "H10":
            _run_h10(config, outcome)
        outcome.elapsed_s = time.perf_counter() - start
        outcomes.append(outcome)
    return CheckReport(config, outcomes)


def _enumerate_small_spaces(max_n: int = 4) -> list[FiniteUltrametricSpace]:
    """Every valid distance matrix over small value pools, up to max_n points."""
    pools = {1: [], 2: [Fraction(1), Fraction(2), Fraction(3)],
             3: [Fraction(1), Fraction(2), Fraction(3)], 4: [Fraction(1), Fraction(2)]}
    spaces = [validate_ultrametric([[0]])]
    for n in range(2, max_n + 1):
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for values in product(pools[n], repeat=len(slots)):
            matrix = [[ZERO] * n for _ in range(n)]
            for (i, j), v in zip(slots, values):
                matrix[i][j] = matrix[j][i] = v
            if find_violation(matrix) is None:
                spaces.append(validate_ultrametric(matrix))
    return spaces


def _is_equidistant(space: FiniteUltrametricSpace) -> bool:
    values = {
        space.dist[i][j] for i in range(space.n) for j in range(i + 1, space.n)
    }
    return len(values) <= 1


def probe_q63(config: TrialConfig) -> dict:
    """Finite-scale search for a non-equidistant space isometric to its ballean.

    None can exist: for n >= 2 the ballean always holds the n singletons plus
    the whole space, so it has at least n+1 points and the cardinalities
    already differ.  The probe verifies that excess on every instance it
    visits and reports the (always empty) witness list.  The corresponding
    question for infinite spaces is untouched by any finite search.
    """
    if config.trials < 1:
        raise ConfigError("trials must be at least 1")
    if config.max_points < 1:
        raise ConfigError("max_points must be at least 1")

    witnesses: list[dict] = []
    excess_ok = 0
    one_point_isometric = None

    exhaustive = _enumerate_small_spaces()
    randoms = [
        _trial_space(config, "q63", trial)[0] for trial in range(config.trials)
    ]
    for space in exhaustive + randoms:
        bl = enumerate_ballean(space)
        bspace = ballean_space(space, debug=False)
        isometric = are_isometric(space, bspace)
        if space.n == 1:
            if one_point_isometric is None:
                one_point_isometric = isometric
            continue
        if len(bl) < space.n + 1:
            witnesses.append(
                {"detail": "ballean smaller than n+1", "space": space_to_json_dict(space)}
            )
            continue
        excess_ok += 1
        if isometric and not _is_equidistant(space):
            witnesses.append(
                {"detail": "non-equidistant space isometric to its ballean",
                 "space": space_to_json_dict(space)}
            )
    return {
        "config": config.to_json_dict(),
        "exhaustive_instances": len(exhaustive),
        "random_instances": len(randoms),
        "ballean_excess_verified": excess_ok,
        "one_point_space_isometric": bool(one_point_isometric),
        "witnesses": witnesses,
        "conclusion": (
            "no finite witness possible: |ballean| >= n+1 for n >= 2, so no "
            "finite space with at least two points is isometric to its "
            "ballean; the infinite case is left open"
        ),
    }
