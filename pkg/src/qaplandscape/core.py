"""Permutations, problem instances, and swap-neighborhood primitives.

Everything here is a pure function over immutable values, so instances and
permutations can be shared freely across threads.

Indices are 0-based throughout. The classical problem statement indexes
facilities and locations from 1, so published formulas shift by one.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Sequence, Union

Scalar = Union[int, Fraction, float]

# Smallest supported problem size. The three-way decomposition divides by
# n - 2 and the swap-neighborhood case analysis degenerates below n = 3.
MIN_SIZE = 3

# Dense four-index coefficient arrays hold n**4 entries; refuse beyond this.
MAX_TENSOR_SIZE = 32


def neighborhood_size(n: int) -> int:
    """Number of swap neighbors of a permutation of n elements: n(n-1)/2."""
    return n * (n - 1) // 2


def exact_div(value: Scalar, divisor: int) -> Scalar:
    """Divide, staying exact for int/Fraction values; floats divide as floats."""
    if isinstance(value, float):
        return value / divisor
    return Fraction(value, divisor)


def _entries_are_exact(rows) -> bool:
    for row in rows:
        for v in row:
            if isinstance(v, float):
                return False
            if not isinstance(v, (int, Fraction)):
                raise ValueError(f"matrix entries must be numbers, got {v!r}")
    return True


class Permutation:
    """A bijection on {0, ..., n-1}; mapping[i] is the location of item i."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Sequence[int]) -> None:
        m = tuple(mapping)
        n = len(m)
        if n < MIN_SIZE:
            raise ValueError(f"need at least {MIN_SIZE} elements, got {n}")
        if any(not isinstance(v, int) for v in m) or sorted(m) != list(range(n)):
            raise ValueError(f"not a bijection on 0..{n - 1}: {list(m)!r}")
        self.mapping = m

    @classmethod
    def _wrap(cls, mapping: tuple) -> "Permutation":
        # Fast path for mappings that are bijections by construction.
        p = object.__new__(cls)
        p.mapping = mapping
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        if n < MIN_SIZE:
            raise ValueError(f"need at least {MIN_SIZE} elements, got {n}")
        return cls._wrap(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "Permutation":
        """Uniform random permutation drawn with rng.shuffle (Fisher-Yates)."""
        if n < MIN_SIZE:
            raise ValueError(f"need at least {MIN_SIZE} elements, got {n}")
        values = list(range(n))
        rng.shuffle(values)
        return cls._wrap(tuple(values))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"

    def swap(self, u: int, v: int) -> "Permutation":
        """New permutation with the images of positions u and v exchanged."""
        n = len(self.mapping)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"swap positions must lie in 0..{n - 1}: ({u}, {v})")
        if u == v:
            raise ValueError("swap positions must differ")
        m = list(self.mapping)
        m[u], m[v] = m[v], m[u]
        return Permutation._wrap(tuple(m))

    def neighbors(self) -> Iterator["Permutation"]:
        """All n(n-1)/2 swap neighbors, in lexicographic (u, v) order, u < v."""
        m = self.mapping
        n = len(m)
        for u in range(n):
            for v in range(u + 1, n):
                lst = list(m)
                lst[u], lst[v] = lst[v], lst[u]
                yield Permutation._wrap(tuple(lst))


class QapInstance:
    """Distances r between locations and flows w between items, both n x n.

    No symmetry or zero diagonal is assumed. Instances whose entries are all
    int or Fraction run in exact rational mode; any float entry switches the
    whole instance to float mode. Row/column marginals are precomputed for
    the O(n^2) component evaluators.
    """

    __slots__ = (
        "n", "r", "w", "exact",
        "_row_off_r", "_col_off_r", "_row_w", "_col_w", "_w_diag",
        "_off_total_r", "_off_total_w", "_r_diag_sum", "_w_diag_sum",
    )

    def __init__(self, r, w) -> None:
        rt = tuple(tuple(row) for row in r)
        wt = tuple(tuple(row) for row in w)
        n = len(rt)
        if n < MIN_SIZE:
            raise ValueError(f"instance size must be at least {MIN_SIZE}, got {n}")
        if any(len(row) != n for row in rt):
            raise ValueError("distance matrix is not square")
        if len(wt) != n or any(len(row) != n for row in wt):
            raise ValueError(f"flow matrix is not {n} x {n}")
        exact = _entries_are_exact(rt) & _entries_are_exact(wt)
        if not exact:
            rt = tuple(tuple(float(v) for v in row) for row in rt)
            wt = tuple(tuple(float(v) for v in row) for row in wt)
        self.n = n
        self.r = rt
        self.w = wt
        self.exact = exact

        self._row_w = tuple(sum(row) for row in wt)
        self._col_w = tuple(sum(col) for col in zip(*wt))
        self._w_diag = tuple(wt[p][p] for p in range(n))
        row_r = [sum(row) for row in rt]
        col_r = [sum(col) for col in zip(*rt)]
        self._row_off_r = tuple(row_r[i] - rt[i][i] for i in range(n))
        self._col_off_r = tuple(col_r[j] - rt[j][j] for j in range(n))
        self._r_diag_sum = sum(rt[i][i] for i in range(n))
        self._w_diag_sum = sum(self._w_diag)
        self._off_total_r = sum(row_r) - self._r_diag_sum
        self._off_total_w = sum(self._row_w) - self._w_diag_sum

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QapInstance)
            and self.r == other.r
            and self.w == other.w
        )

    def __hash__(self) -> int:
        return hash((self.r, self.w))

    def __repr__(self) -> str:
        mode = "rational" if self.exact else "float"
        return f"<QapInstance n={self.n} mode={mode}>"

    def as_float(self) -> "QapInstance":
        """Copy of this instance with every entry coerced to float."""
        if not self.exact:
            return self
        return QapInstance(
            [[float(v) for v in row] for row in self.r],
            [[float(v) for v in row] for row in self.w],
        )

    def fitness(self, x: Permutation) -> Scalar:
        """Total assignment cost: sum over all ordered pairs (i, j), the
        diagonal i = j included, of r[i][j] * w[x(i)][x(j)]."""
        if x.n != self.n:
            raise ValueError(f"permutation size {x.n} != instance size {self.n}")
        xm = x.mapping
        w = self.w
        total = 0
        for ri, xi in zip(self.r, xm):
            wrow = w[xi]
            total += sum(a * wrow[b] for a, b in zip(ri, xm))
        return total


class GeneralTensor:
    """Dense four-index coefficients psi[i][j][p][q] weighting the pair
    indicator [x(i)=p][x(j)=q].

    A QapInstance is the rank-factored special case psi[i][j][p][q] =
    r[i][j] * w[p][q]. Storage is dense, so construction is refused beyond
    n = 32.
    """

    __slots__ = ("n", "psi", "exact", "_sums")

    def __init__(self, psi) -> None:
        t = tuple(
            tuple(tuple(tuple(row) for row in plane) for plane in block)
            for block in psi
        )
        n = len(t)
        if n < MIN_SIZE:
            raise ValueError(f"tensor size must be at least {MIN_SIZE}, got {n}")
        if n > MAX_TENSOR_SIZE:
            raise ValueError(
                f"dense tensor storage is limited to n <= {MAX_TENSOR_SIZE}, got {n}"
            )
        for block in t:
            if len(block) != n:
                raise ValueError("tensor is not n x n x n x n")
            for plane in block:
                if len(plane) != n or any(len(row) != n for row in plane):
                    raise ValueError("tensor is not n x n x n x n")
        exact = all(
            _entries_are_exact(plane) for block in t for plane in block
        )
        if not exact:
            t = tuple(
                tuple(
                    tuple(tuple(float(v) for v in row) for row in plane)
                    for plane in block
                )
                for block in t
            )
        self.n = n
        self.psi = t
        self.exact = exact
        self._sums = None

    @classmethod
    def from_qap(cls, inst: QapInstance) -> "GeneralTensor":
        """Dense coefficients psi[i][j][p][q] = r[i][j] * w[p][q]."""
        if inst.n > MAX_TENSOR_SIZE:
            raise ValueError(
                f"dense tensor storage is limited to n <= {MAX_TENSOR_SIZE}, "
                f"got {inst.n}"
            )
        psi = [
            [[[rij * wpq for wpq in wrow] for wrow in inst.w] for rij in rrow]
            for rrow in inst.r
        ]
        return cls(psi)

    def __repr__(self) -> str:
        mode = "rational" if self.exact else "float"
        return f"<GeneralTensor n={self.n} mode={mode}>"

    def fitness(self, x: Permutation) -> Scalar:
        """Sum over all ordered pairs (i, j) of psi[i][j][x(i)][x(j)]."""
        if x.n != self.n:
            raise ValueError(f"permutation size {x.n} != tensor size {self.n}")
        xm = x.mapping
        total = 0
        for block, xi in zip(self.psi, xm):
            for plane, xj in zip(block, xm):
                total += plane[xi][xj]
        return total

    def coefficient_sums(self):
        """(sum of psi over i != j and p != q, sum of psi[i][i][p][p])."""
        if self._sums is None:
            n = self.n
            diag = sum(
                self.psi[i][i][p][p] for i in range(n) for p in range(n)
            )
            off = 0
            for i in range(n):
                block = self.psi[i]
                for j in range(n):
                    if j == i:
                        continue
                    plane = block[j]
                    for p in range(n):
                        row = plane[p]
                        off += sum(row[q] for q in range(n) if q != p)
            self._sums = (off, diag)
        return self._sums
