"""Brute-force ground truth: neighbor averages, full-space statistics, and
a generic elementarity checker.

Everything here enumerates literally and independently of the closed-form
evaluators it is used to validate. Enumeration walks permutations in
lexicographic order, so float-mode reductions are deterministic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, NamedTuple, Optional

from .core import Permutation, Scalar, neighborhood_size
from .decomposition import Problem, decompose

# 8! = 40320 points; anything larger must opt in explicitly.
DEFAULT_ENUMERATION_CAP = 8

EvalFn = Callable[[Permutation], Scalar]


@dataclass(frozen=True)
class SpaceStats:
    """Mean and population variance over all n! permutations."""

    mean: Scalar
    variance: Scalar
    count: int


@dataclass(frozen=True)
class ElementarityReport:
    """Outcome of fitting the wave equation to a function by least squares.

    fitted_k is the recovered characteristic constant, present only when
    the fit is exact. A constant function satisfies the equation trivially
    but leaves k undefined; that case is flagged with constant=True.
    """

    is_elementary: bool
    fitted_k: Optional[Scalar]
    max_residual: Scalar
    worst_point: Optional[Permutation]
    constant: bool = False


class ComponentVariances(NamedTuple):
    """Population variances of the three components and of the objective."""

    c1: Scalar
    c2: Scalar
    c3: Scalar
    total: Scalar


def _mean_of(total: Scalar, count: int) -> Scalar:
    if isinstance(total, float):
        return total / count
    return Fraction(total, count)


def neighborhood_avg_brute(evalfn: EvalFn, x: Permutation) -> Scalar:
    """Literal mean of evalfn over all swap neighbors of x."""
    total = 0
    for y in x.neighbors():
        total = total + evalfn(y)
    return _mean_of(total, neighborhood_size(x.n))


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ValueError(
            f"full enumeration of {n}! permutations exceeds the cap {cap}"
        )


def space_points(n: int):
    """All permutations of size n in lexicographic order."""
    for t in permutations(range(n)):
        yield Permutation._wrap(t)


def enumerate_space(
    evalfn: EvalFn, n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> SpaceStats:
    """Exact mean and population variance of evalfn over all n! points."""
    _check_cap(n, cap)
    values = [evalfn(x) for x in space_points(n)]
    count = len(values)
    if any(isinstance(v, float) for v in values):
        mean = math.fsum(values) / count
        variance = math.fsum((v - mean) ** 2 for v in values) / count
        return SpaceStats(mean, variance, count)
    total = sum(values)
    total_sq = sum(v * v for v in values)
    mean = _mean_of(total, count)
    variance = _mean_of(total_sq, count) - mean * mean
    return SpaceStats(mean, variance, count)


def check_elementary(
    evalfn: EvalFn,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    float_tolerance: float = 1e-9,
) -> ElementarityReport:
    """Fit neighbor_mean(x) = a * f(x) + b over all x by least squares.

    A function is elementary exactly when the fit leaves zero residual
    everywhere; the characteristic constant is then k = d (1 - a). In float
    mode "zero" means max residual <= float_tolerance * max(1, max |f|).
    """
    _check_cap(n, cap)
    points = list(space_points(n))
    value_of = {x.mapping: evalfn(x) for x in points}
    d = neighborhood_size(n)

    averages = []
    for x in points:
        total = 0
        for y in x.neighbors():
            total = total + value_of[y.mapping]
        averages.append(_mean_of(total, d))

    values = [value_of[x.mapping] for x in points]
    floaty = any(isinstance(v, float) for v in values)
    count = len(points)
    s_x = sum(values)
    s_xx = sum(v * v for v in values)
    s_y = sum(averages)
    s_xy = sum(v * g for v, g in zip(values, averages))
    denom = count * s_xx - s_x * s_x

    if denom == 0:
        # Constant function: the equation holds for every a, k undefined.
        residual = max(abs(g - v) for v, g in zip(values, averages))
        return ElementarityReport(True, None, residual, None, constant=True)

    if floaty:
        a = (count * s_xy - s_x * s_y) / denom
        b = (s_y - a * s_x) / count
    else:
        a = Fraction(count * s_xy - s_x * s_y, denom)
        b = _mean_of(s_y - a * s_x, count)

    max_residual = 0
    worst = points[0]
    for x, v, g in zip(points, values, averages):
        residual = abs(g - (a * v + b))
        if residual > max_residual:
            max_residual = residual
            worst = x

    if floaty:
        scale = max(1.0, max(abs(v) for v in values))
        elementary = max_residual <= float_tolerance * scale
    else:
        elementary = max_residual == 0
    fitted_k = d * (1 - a) if elementary else None
    return ElementarityReport(elementary, fitted_k, max_residual, worst)


def population_variance(values) -> Scalar:
    """Population variance of a value sequence (exact for int/Fraction)."""
    count = len(values)
    if any(isinstance(v, float) for v in values):
        mean = math.fsum(values) / count
        return math.fsum((v - mean) ** 2 for v in values) / count
    total = sum(values)
    total_sq = sum(v * v for v in values)
    mean = _mean_of(total, count)
    return _mean_of(total_sq, count) - mean * mean


def variance_triple(
    problem: Problem,
    cap: int = DEFAULT_ENUMERATION_CAP,
    samples: Optional[int] = None,
    seed: int = 0,
) -> ComponentVariances:
    """Population variances of the three components and of the objective.

    Exact (full enumeration) when n is within the cap. Beyond the cap a
    sample size must be given; the sample is drawn from a generator seeded
    with the given seed, so results replay.
    """
    n = problem.n
    if n <= cap:
        points = space_points(n)
    else:
        if samples is None:
            raise ValueError(
                f"n={n} exceeds the enumeration cap {cap}; "
                "pass a sample count to estimate variances"
            )
        rng = random.Random(seed)
        points = (Permutation.random(n, rng) for _ in range(samples))

    c1s, c2s, c3s, fs = [], [], [], []
    for x in points:
        t = decompose(problem, x)
        c1s.append(t.c1)
        c2s.append(t.c2)
        c3s.append(t.c3)
        fs.append(problem.fitness(x))
    return ComponentVariances(
        population_variance(c1s),
        population_variance(c2s),
        population_variance(c3s),
        population_variance(fs),
    )
