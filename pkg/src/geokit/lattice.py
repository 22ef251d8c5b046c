"""Exact integer matrices, Smith normal form and cokernels."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import NotPrime


@dataclass(frozen=True, slots=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"inconsistent dimensions for {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == k) for k in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, *values: int) -> IntMatrix:
        n = len(values)
        return cls(n, n, tuple(tuple(values[i] if i == k else 0 for k in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols_t = list(zip(*other.data)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols_t) for r in self.data),
        )

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def delete_columns(self, cols: Iterable[int]) -> IntMatrix:
        drop = set(cols)
        keep = [k for k in range(self.cols) if k not in drop]
        return IntMatrix(self.rows, len(keep), tuple(tuple(r[k] for k in keep) for r in self.data))

    def stack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def det(self) -> int:
        """Fraction-free Bareiss determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __str__(self) -> str:
        if not self.rows:
            return f"<empty {self.rows}x{self.cols}>"
        width = max(len(str(x)) for r in self.data for x in r) if self.cols else 0
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.data)


@dataclass(frozen=True, slots=True)
class SnfResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


@dataclass(frozen=True, slots=True)
class AbelianGroup:
    """Z^rank + Z/t1 + ... + Z/tk with t1 | t2 | ... | tk, all t > 1."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        for t in self.torsion:
            if t <= 1:
                raise ValueError(f"torsion factor {t} must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} violates the divisibility chain")

    @classmethod
    def from_cyclic(cls, rank: int, orders: Iterable[int]) -> AbelianGroup:
        """Normalise an arbitrary direct sum of cyclic groups (order 0 means Z)."""
        orders = list(orders)
        extra = sum(1 for o in orders if o == 0)
        finite = [abs(o) for o in orders if o != 0]
        res = snf(IntMatrix.diag(*finite)) if finite else None
        tors = tuple(f for f in res.invariant_factors if f > 1) if res else ()
        return cls(rank + extra, tors)

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    @property
    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def contains_cyclic(self, k: int) -> bool:
        """Whether the torsion subgroup has an element of order k."""
        return k == 1 or (k > 1 and self.exponent % k == 0)

    def __add__(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup.from_cyclic(self.rank + other.rank, self.torsion + other.torsion)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def _min_pivot(s: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(s)):
        row = s[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return None if best is None else (best[1], best[2])


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with transforms: U @ A @ V == S.

    The pivot is always the nonzero entry of least absolute value in the
    remaining block, ties going to the lowest (row, col).
    """
    m, n = a.rows, a.cols
    s = [list(r) for r in a.data]
    u = [[int(i == k) for k in range(m)] for i in range(m)]
    v = [[int(i == k) for k in range(n)] for i in range(n)]

    def swap_rows(i, k):
        s[i], s[k] = s[k], s[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(i, k):
        for r in s:
            r[i], r[k] = r[k], r[i]
        for r in v:
            r[i], r[k] = r[k], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        sd, ss = s[dst], s[src]
        for j in range(n):
            sd[j] += q * ss[j]
        ud, us = u[dst], u[src]
        for j in range(m):
            ud[j] += q * us[j]

    def add_col(dst, src, q):
        for r in s:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        pos = _min_pivot(s, t)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = s[t][t]
            clean = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    clean = clean and s[i][t] == 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    clean = clean and s[t][j] == 0
            if clean:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad, 1)
            pos = _min_pivot(s, t)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    factors = tuple(s[i][i] for i in range(min(m, n)) if s[i][i])
    return SnfResult(
        IntMatrix(m, n, tuple(map(tuple, s))),
        IntMatrix(m, m, tuple(map(tuple, u))),
        IntMatrix(n, n, tuple(map(tuple, v))),
        factors,
    )


def cokernel(a: IntMatrix) -> AbelianGroup:
    """Z^cols modulo the row span of A."""
    factors = snf(a).invariant_factors
    return AbelianGroup(a.cols - len(factors), tuple(f for f in factors if f > 1))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def rank_mod_p(a: IntMatrix, p: int) -> int:
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    rows = [[x % p for x in r] for r in a.data]
    rank = 0
    for col in range(a.cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def parse_matrix(text: str) -> IntMatrix:
    """Whitespace-separated integer rows; blank lines and '#' comments ignored."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    if not rows:
        return IntMatrix(0, 0, ())
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix rows")
    return IntMatrix.from_rows(rows, width)


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
