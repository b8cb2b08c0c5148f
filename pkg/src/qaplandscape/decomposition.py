"""Three-way elementary split of the assignment objective under swaps.

The off-diagonal coefficients decompose through a family of five-case
functions of (x(i), x(j)) relative to a target pair (p, q). Three parameter
choices of that family are elementary landscapes, meaning their average
over the swap neighborhood is an affine function of their current value
(the wave equation), with characteristic constants 2n, 2(n-1) and n.
Weighted by 1/(2n), 1/(2(n-2)) and 1/(n(n-2)), the three choices add up,
case by case, to the pair indicator [x(i)=p][x(j)=q]. Summing against the
coefficients yields objective components with c1 + c2 + c3 = f exactly.
Diagonal coefficients psi[i][i][p][p] ride along in component 3, whose
indicator [x(i)=p] is itself elementary with constant n.

Coefficients with i = j but p != q (or i != j, p = q) are structurally
zero for every bijection and belong to neither the off-diagonal nor the
diagonal sum; they are skipped.

All functions are pure; callers may parallelize across permutations.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from operator import mul
from typing import Callable, Dict, NamedTuple, Union

from .core import (
    GeneralTensor,
    Permutation,
    QapInstance,
    Scalar,
    exact_div,
    neighborhood_size,
)

Problem = Union[QapInstance, GeneralTensor]


class OmegaKind(enum.Enum):
    """The three elementary members of the five-case function family."""

    OMEGA1 = 1
    OMEGA2 = 2
    OMEGA3 = 3


class OmegaParams(NamedTuple):
    """Values taken in the five cases, in case order."""

    alpha: int    # x(i) = p and x(j) = q
    beta: int     # x(i) = q and x(j) = p
    gamma: int    # exactly one of x(i) = p, x(j) = q
    epsilon: int  # exactly one of x(i) = q, x(j) = p
    zeta: int     # x(i) and x(j) both avoid {p, q}


# Parameter vectors as functions of n. Other solutions of the underlying
# linear system exist; these three are the ones whose weighted sum is the
# pair indicator.
OMEGA_PARAMS: Dict[OmegaKind, Callable[[int], OmegaParams]] = {
    OmegaKind.OMEGA1: lambda n: OmegaParams(n - 3, 1 - n, -2, 0, -1),
    OmegaKind.OMEGA2: lambda n: OmegaParams(n - 3, n - 3, 0, 0, 1),
    OmegaKind.OMEGA3: lambda n: OmegaParams(2 * n - 3, 1, n - 2, 0, -1),
}


def omega_params(kind: OmegaKind, n: int) -> OmegaParams:
    return OMEGA_PARAMS[kind](n)


def characteristic_constant(kind: OmegaKind, n: int) -> int:
    """The wave-equation constant k of each kind: 2n, 2(n-1), n."""
    if kind is OmegaKind.OMEGA1:
        return 2 * n
    if kind is OmegaKind.OMEGA2:
        return 2 * (n - 1)
    return n


def weight_denominator(kind: OmegaKind, n: int) -> int:
    """Divisor turning each kind into its share of the pair indicator."""
    if kind is OmegaKind.OMEGA1:
        return 2 * n
    if kind is OmegaKind.OMEGA2:
        return 2 * (n - 2)
    return n * (n - 2)


def omega_mean(kind: OmegaKind, n: int) -> Scalar:
    """Mean over the whole permutation space: -1, (n-3)/(n-1), 1."""
    if kind is OmegaKind.OMEGA1:
        return -1
    if kind is OmegaKind.OMEGA2:
        return Fraction(n - 3, n - 1)
    return 1


def _check_pair_indices(i: int, j: int, p: int, q: int, n: int) -> None:
    for name, v in (("i", i), ("j", j), ("p", p), ("q", q)):
        if not (0 <= v < n):
            raise ValueError(f"index {name}={v} out of range 0..{n - 1}")
    if i == j:
        raise ValueError("positions i and j must differ")
    if p == q:
        raise ValueError("targets p and q must differ")


def phi_diag(i: int, p: int, x: Permutation) -> int:
    """Indicator that position i is mapped to p; elementary with k = n."""
    n = x.n
    if not (0 <= i < n and 0 <= p < n):
        raise ValueError(f"indices must lie in 0..{n - 1}: ({i}, {p})")
    return 1 if x.mapping[i] == p else 0


def omega(kind: OmegaKind, i: int, j: int, p: int, q: int, x: Permutation) -> int:
    """Five-case value of the given kind at x, for target pair (p, q)."""
    n = x.n
    _check_pair_indices(i, j, p, q, n)
    xi = x.mapping[i]
    xj = x.mapping[j]
    cases = (
        xi == p and xj == q,
        xi == q and xj == p,
        (xi == p) != (xj == q),
        (xi == q) != (xj == p),
        xi != p and xi != q and xj != p and xj != q,
    )
    assert sum(cases) == 1, f"cases must be exhaustive and exclusive: {cases}"
    return omega_params(kind, n)[cases.index(True)]


def omega_neighborhood_sum_oracle(
    kind: OmegaKind, i: int, j: int, p: int, q: int, x: Permutation
) -> int:
    """Closed-form sum of the kind's value over all swap neighbors of x.

    One formula per case of x, derived by counting the neighbors falling
    into each case. Used as ground truth against literal enumeration.
    """
    n = x.n
    _check_pair_indices(i, j, p, q, n)
    a, b, g, e, z = omega_params(kind, n)
    d = neighborhood_size(n)
    xi = x.mapping[i]
    xj = x.mapping[j]
    if xi == p and xj == q:
        return b + 2 * (n - 2) * g + (d - 2 * n + 3) * a
    if xi == q and xj == p:
        return a + 2 * (n - 2) * e + (d - 2 * n + 3) * b
    if (xi == p) != (xj == q):
        return a + 2 * e + (n - 3) * z + (d - n) * g
    if (xi == q) != (xj == p):
        return b + 2 * g + (n - 3) * z + (d - n) * e
    return 2 * g + 2 * e + (d - 4) * z


def _check_component(m: int) -> None:
    if m not in (1, 2, 3):
        raise ValueError(f"component index must be 1, 2 or 3, got {m}")


def component_value_ref(tensor: GeneralTensor, m: int, x: Permutation) -> Scalar:
    """Reference component evaluator, direct O(n^4) sum over coefficients.

    Component m sums psi[i][j][p][q] times the kind-m case value over all
    i != j, p != q, divided by the kind's weight denominator. Component 3
    additionally carries the diagonal sum of psi[i][i][x(i)][x(i)].
    """
    _check_component(m)
    if x.n != tensor.n:
        raise ValueError(f"permutation size {x.n} != tensor size {tensor.n}")
    n = tensor.n
    kind = OmegaKind(m)
    alpha, beta, gamma, epsilon, zeta = omega_params(kind, n)
    xm = x.mapping
    psi = tensor.psi
    acc = 0
    for i in range(n):
        xi = xm[i]
        block = psi[i]
        for j in range(n):
            if j == i:
                continue
            xj = xm[j]
            plane = block[j]
            for p in range(n):
                row = plane[p]
                if p == xi:
                    for q in range(n):
                        if q == p:
                            continue
                        v = row[q]
                        if v:
                            acc += v * (alpha if q == xj else gamma)
                elif p == xj:
                    for q in range(n):
                        if q == p:
                            continue
                        v = row[q]
                        if v:
                            acc += v * (beta if q == xi else epsilon)
                else:
                    for q in range(n):
                        if q == p:
                            continue
                        v = row[q]
                        if v:
                            if q == xi:
                                acc += v * epsilon
                            elif q == xj:
                                acc += v * gamma
                            else:
                                acc += v * zeta
    den = weight_denominator(kind, n)
    value = exact_div(acc, den) if tensor.exact else acc / den
    if m == 3:
        value = value + sum(psi[i][i][xm[i]][xm[i]] for i in range(n))
    return value


def _case_totals(inst: QapInstance, x: Permutation):
    """Coefficient mass of each of the five cases at x, in O(n^2).

    For product-form coefficients r[i][j] * w[p][q] the five case sums
    factor through row/column marginals of r and w:
      alpha case: sum r_ij w_{x(i)x(j)} over i != j,
      beta case:  sum r_ij w_{x(j)x(i)} over i != j,
    and the one-sided cases reduce to marginal sums minus those two.
    Returns (s_alpha, s_beta, s_gamma, s_epsilon, s_zeta, diag) where diag
    is the diagonal mass sum_i r_ii w_{x(i)x(i)}.
    """
    xm = x.mapping
    n = inst.n
    r = inst.r
    w = inst.w
    wx = [w[v] for v in xm]
    f_same = 0
    f_swapped = 0
    diag = 0
    for i in range(n):
        ri = r[i]
        xi = xm[i]
        wxi = wx[i]
        perm_row = [wxi[v] for v in xm]
        perm_col = [wx[j][xi] for j in range(n)]
        f_same += sum(map(mul, ri, perm_row))
        f_swapped += sum(map(mul, ri, perm_col))
        diag += ri[i] * wxi[xi]

    row_off_r = inst._row_off_r
    col_off_r = inst._col_off_r
    row_w = inst._row_w
    col_w = inst._col_w
    w_diag = inst._w_diag
    p1 = sum(row_off_r[i] * (row_w[xm[i]] - w_diag[xm[i]]) for i in range(n))
    p2 = sum(col_off_r[j] * (col_w[xm[j]] - w_diag[xm[j]]) for j in range(n))
    q1 = sum(row_off_r[i] * (col_w[xm[i]] - w_diag[xm[i]]) for i in range(n))
    q2 = sum(col_off_r[j] * (row_w[xm[j]] - w_diag[xm[j]]) for j in range(n))

    s_alpha = f_same - diag
    s_beta = f_swapped - diag
    s_gamma = p1 + p2 - 2 * s_alpha
    s_epsilon = q1 + q2 - 2 * s_beta
    s_zeta = (
        inst._off_total_r * inst._off_total_w
        - s_alpha - s_beta - s_gamma - s_epsilon
    )
    return s_alpha, s_beta, s_gamma, s_epsilon, s_zeta, diag


def _numerator(kind: OmegaKind, n: int, totals) -> Scalar:
    a, b, g, e, z = omega_params(kind, n)
    sa, sb, sg, se, sz, _ = totals
    return a * sa + b * sb + g * sg + e * se + z * sz


def _value_from_totals(inst: QapInstance, m: int, totals) -> Scalar:
    n = inst.n
    kind = OmegaKind(m)
    num = _numerator(kind, n, totals)
    den = weight_denominator(kind, n)
    if m == 3:
        num = num + den * totals[5]
    return exact_div(num, den) if inst.exact else num / den


def component_value_fast(inst: QapInstance, m: int, x: Permutation) -> Scalar:
    """O(n^2) component evaluator for product-form instances.

    Contract: agrees exactly (rational mode) with component_value_ref on
    the tensor built from the same instance.
    """
    _check_component(m)
    if not isinstance(inst, QapInstance):
        raise TypeError("fast path is defined for product-form instances only")
    if x.n != inst.n:
        raise ValueError(f"permutation size {x.n} != instance size {inst.n}")
    return _value_from_totals(inst, m, _case_totals(inst, x))


def component_value(problem: Problem, m: int, x: Permutation) -> Scalar:
    """Component m of the objective at x; picks the fast or reference path."""
    if isinstance(problem, QapInstance):
        return component_value_fast(problem, m, x)
    if isinstance(problem, GeneralTensor):
        return component_value_ref(problem, m, x)
    raise TypeError(f"expected QapInstance or GeneralTensor, got {type(problem)!r}")


class ComponentTriple(NamedTuple):
    """Component values at one permutation; total is their sum."""

    c1: Scalar
    c2: Scalar
    c3: Scalar
    total: Scalar

    @classmethod
    def of(cls, c1: Scalar, c2: Scalar, c3: Scalar) -> "ComponentTriple":
        return cls(c1, c2, c3, c1 + c2 + c3)


class AverageTriple(NamedTuple):
    """Search-space means of the components; total is the objective mean."""

    a1: Scalar
    a2: Scalar
    a3: Scalar
    total: Scalar

    @classmethod
    def of(cls, a1: Scalar, a2: Scalar, a3: Scalar) -> "AverageTriple":
        return cls(a1, a2, a3, a1 + a2 + a3)


def decompose(problem: Problem, x: Permutation) -> ComponentTriple:
    """Split the objective at x into its three elementary components.

    The total equals the plain objective value, exactly in rational mode
    and to 1e-9 relative in float mode.
    """
    if isinstance(problem, QapInstance):
        if x.n != problem.n:
            raise ValueError(
                f"permutation size {x.n} != instance size {problem.n}"
            )
        totals = _case_totals(problem, x)
        return ComponentTriple.of(
            _value_from_totals(problem, 1, totals),
            _value_from_totals(problem, 2, totals),
            _value_from_totals(problem, 3, totals),
        )
    if isinstance(problem, GeneralTensor):
        return ComponentTriple.of(
            component_value_ref(problem, 1, x),
            component_value_ref(problem, 2, x),
            component_value_ref(problem, 3, x),
        )
    raise TypeError(f"expected QapInstance or GeneralTensor, got {type(problem)!r}")


def _coefficient_sums(problem: Problem):
    if isinstance(problem, QapInstance):
        off = problem._off_total_r * problem._off_total_w
        diag = problem._r_diag_sum * problem._w_diag_sum
        return off, diag
    if isinstance(problem, GeneralTensor):
        return problem.coefficient_sums()
    raise TypeError(f"expected QapInstance or GeneralTensor, got {type(problem)!r}")


def component_average(problem: Problem, m: int) -> Scalar:
    """Closed-form mean of component m over all n! permutations.

    By linearity the mean is the total off-diagonal coefficient mass times
    the kind's space mean over its weight denominator; component 3 adds the
    diagonal mass divided by n.
    """
    _check_component(m)
    n = problem.n
    off, diag = _coefficient_sums(problem)
    if isinstance(off, float) or isinstance(diag, float):
        if m == 1:
            return -off / (2 * n)
        if m == 2:
            return off * (n - 3) / (2 * (n - 2) * (n - 1))
        return off / (n * (n - 2)) + diag / n
    if m == 1:
        return exact_div(-off, 2 * n)
    if m == 2:
        return exact_div(off * (n - 3), 2 * (n - 2) * (n - 1))
    return exact_div(off, n * (n - 2)) + exact_div(diag, n)


def average_triple(problem: Problem) -> AverageTriple:
    return AverageTriple.of(
        component_average(problem, 1),
        component_average(problem, 2),
        component_average(problem, 3),
    )


def wave_predict_component(problem: Problem, m: int, x: Permutation) -> Scalar:
    """Wave-equation prediction of the neighborhood mean of component m:
    c_m(x) + (k_m / d) (mean_m - c_m(x)) with k_m in {2n, 2(n-1), n}."""
    _check_component(m)
    n = problem.n
    c = component_value(problem, m, x)
    a = component_average(problem, m)
    k = characteristic_constant(OmegaKind(m), n)
    d = neighborhood_size(n)
    if isinstance(c, float) or isinstance(a, float):
        return c + (k / d) * (a - c)
    return c + Fraction(k, d) * (a - c)


def neighborhood_avg_wave(problem: Problem, x: Permutation) -> Scalar:
    """Mean objective value over the swap neighbors of x, via the three
    per-component wave equations.

    Equals f(x) + 4/(n-1) (mean1 - c1) + 4/n (mean2 - c2)
    + 2/(n-1) (mean3 - c3); the coefficients are k_m / d reduced.
    """
    n = problem.n
    f = problem.fitness(x)
    t = decompose(problem, x)
    a = average_triple(problem)
    if not problem.exact:
        return (
            f
            + 4.0 / (n - 1) * (a.a1 - t.c1)
            + 4.0 / n * (a.a2 - t.c2)
            + 2.0 / (n - 1) * (a.a3 - t.c3)
        )
    return (
        f
        + Fraction(4, n - 1) * (a.a1 - t.c1)
        + Fraction(4, n) * (a.a2 - t.c2)
        + Fraction(2, n - 1) * (a.a3 - t.c3)
    )
