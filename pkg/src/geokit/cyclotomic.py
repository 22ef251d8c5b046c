"""Exact arithmetic in Z[zeta] for a primitive 12th root of unity zeta.

Elements are stored in the power basis 1, zeta, zeta^2, zeta^3 and reduced
with zeta^4 = zeta^2 - 1 (the minimal polynomial is x^4 - x^2 + 1).
Complex conjugation sends zeta to zeta^-1 = zeta - zeta^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotAUnit, SingularMatrix


def _reduce(poly: list[int]) -> tuple[int, int, int, int]:
    p = list(poly) + [0] * max(0, 4 - len(poly))
    for k in range(len(p) - 1, 3, -1):
        t = p[k]
        if t:
            # zeta^k = zeta^(k-2) - zeta^(k-4)
            p[k - 2] += t
            p[k - 4] -= t
            p[k] = 0
    return p[0], p[1], p[2], p[3]


@dataclass(frozen=True, slots=True)
class CyclotomicElement:
    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0

    @classmethod
    def coerce(cls, x: CyclotomicElement | int) -> CyclotomicElement:
        if isinstance(x, CyclotomicElement):
            return x
        if isinstance(x, int):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CyclotomicElement")

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other):
        try:
            o = CyclotomicElement.coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicElement(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)

    __radd__ = __add__

    def __neg__(self) -> CyclotomicElement:
        return CyclotomicElement(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        try:
            o = CyclotomicElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = CyclotomicElement.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coefficients, o.coefficients
        prod = [0] * 7
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b):
                    prod[i + k] += x * y
        return CyclotomicElement(*_reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CyclotomicElement:
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CyclotomicElement(other)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __bool__(self) -> bool:
        return any(self.coefficients)

    def is_integer(self) -> bool:
        return self.c1 == self.c2 == self.c3 == 0

    def galois(self, k: int) -> CyclotomicElement:
        """Image under the automorphism zeta -> zeta^k, k coprime to 12."""
        if k % 2 == 0 or k % 3 == 0:
            raise ValueError(f"{k} is not coprime to 12")
        acc = [0, 0, 0, 0]
        for i, c in enumerate(self.coefficients):
            if c:
                for slot, v in enumerate(_ZETA_POWERS[(i * k) % 12]):
                    acc[slot] += c * v
        return CyclotomicElement(*acc)

    def conj(self) -> CyclotomicElement:
        # zeta^-1 = zeta - zeta^3, zeta^-2 = 1 - zeta^2, zeta^-3 = -zeta^3
        c0, c1, c2, c3 = self.coefficients
        return CyclotomicElement(c0 + c2, c1, -c2, -c1 - c3)

    def norm(self) -> int:
        """Field norm to Q: product of the four Galois conjugates."""
        n = self * self.galois(5) * self.galois(7) * self.galois(11)
        assert n.is_integer(), n
        return n.c0

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def inverse(self) -> CyclotomicElement:
        n = self.norm()
        if n not in (1, -1):
            raise NotAUnit(f"{self} has norm {n}")
        return self.galois(5) * self.galois(7) * self.galois(11) * n

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / 12)
        return sum(c * z**i for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = ("", "ζ", "ζ^2", "ζ^3")[i]
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


ZERO = CyclotomicElement()
ONE = CyclotomicElement(1)
ZETA = CyclotomicElement(0, 1)
# 2*zeta - zeta^3 is the real square root of 3
SQRT3 = CyclotomicElement(0, 2, 0, -1)

_ZETA_POWERS: list[tuple[int, int, int, int]] = []
_p = ONE
for _ in range(12):
    _ZETA_POWERS.append(_p.coefficients)
    _p = _p * ZETA
del _p


def cyc_mul(a: CyclotomicElement, b: CyclotomicElement) -> CyclotomicElement:
    return a * b


def cyc_conj(a: CyclotomicElement) -> CyclotomicElement:
    return a.conj()


def cyc_inverse(a: CyclotomicElement) -> CyclotomicElement:
    return a.inverse()


@dataclass(frozen=True, slots=True)
class CycMatrix:
    """A 3x3 matrix over Z[zeta]."""

    entries: tuple[tuple[CyclotomicElement, ...], ...]

    def __post_init__(self):
        if len(self.entries) != 3 or any(len(r) != 3 for r in self.entries):
            raise ValueError("CycMatrix must be 3x3")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[CyclotomicElement | int | tuple]]) -> CycMatrix:
        def conv(x):
            if isinstance(x, tuple):
                return CyclotomicElement(*x)
            return CyclotomicElement.coerce(x)

        return cls(tuple(tuple(conv(x) for x in row) for row in rows))

    @classmethod
    def identity(cls) -> CycMatrix:
        return cls.scalar(ONE)

    @classmethod
    def scalar(cls, lam: CyclotomicElement | int) -> CycMatrix:
        lam = CyclotomicElement.coerce(lam)
        return cls(tuple(tuple(lam if i == k else ZERO for k in range(3)) for i in range(3)))

    def __getitem__(self, ij: tuple[int, int]) -> CyclotomicElement:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: CycMatrix) -> CycMatrix:
        a, b = self.entries, other.entries
        return CycMatrix(
            tuple(
                tuple(a[i][0] * b[0][k] + a[i][1] * b[1][k] + a[i][2] * b[2][k] for k in range(3))
                for i in range(3)
            )
        )

    def scale(self, lam: CyclotomicElement | int) -> CycMatrix:
        return CycMatrix(tuple(tuple(lam * x for x in row) for row in self.entries))

    def conj_transpose(self) -> CycMatrix:
        return CycMatrix(tuple(tuple(self.entries[k][i].conj() for k in range(3)) for i in range(3)))

    @property
    def H(self) -> CycMatrix:
        return self.conj_transpose()

    def det(self) -> CyclotomicElement:
        m = self.entries
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def adjugate(self) -> CycMatrix:
        m = self.entries

        def minor(r, c):
            rows = [i for i in range(3) if i != r]
            cols = [k for k in range(3) if k != c]
            return m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]

        # adj[i][j] = (-1)^(i+j) * minor(j, i)
        return CycMatrix(
            tuple(tuple(minor(j, i) if (i + j) % 2 == 0 else -minor(j, i) for j in range(3)) for i in range(3))
        )

    def inverse(self) -> CycMatrix:
        d = self.det()
        try:
            dinv = d.inverse()
        except NotAUnit:
            raise SingularMatrix(f"determinant {d} is not a unit in Z[zeta]") from None
        return self.adjugate().scale(dinv)

    def scalar_value(self) -> CyclotomicElement | None:
        """Return lam if this matrix equals lam * I, else None."""
        lam = self.entries[0][0]
        for i in range(3):
            for k in range(3):
                if self.entries[i][k] != (lam if i == k else ZERO):
                    return None
        return lam

    def __pow__(self, e: int) -> CycMatrix:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = CycMatrix.identity()
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def to_complex(self) -> list[list[complex]]:
        return [[x.to_complex() for x in row] for row in self.entries]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)


def mat_mul(p: CycMatrix, q: CycMatrix) -> CycMatrix:
    return p @ q


def mat_conj_transpose(p: CycMatrix) -> CycMatrix:
    return p.conj_transpose()


def mat_det(p: CycMatrix) -> CyclotomicElement:
    return p.det()


def mat_inverse(p: CycMatrix) -> CycMatrix:
    return p.inverse()


def verify_form_preservation(p: CycMatrix, a: CycMatrix) -> bool:
    """True iff P* A P == A exactly."""
    return p.H @ a @ p == a


@dataclass(frozen=True, slots=True)
class ScalarWitness:
    lam: CyclotomicElement
    relation_name: str = ""

    def __post_init__(self):
        if not self.lam.is_unit():
            raise NotAUnit(f"witness {self.lam} is not a unit")

    @property
    def modulus_squared(self) -> CyclotomicElement:
        return self.lam * self.lam.conj()


def scalar_equivalent(p: CycMatrix, q: CycMatrix, relation_name: str = "") -> ScalarWitness | None:
    """Find lam with P = lam * Q, deciding via P Q^-1 == lam I."""
    lam = (p @ q.inverse()).scalar_value()
    if lam is None or not lam.is_unit():
        return None
    return ScalarWitness(lam, relation_name)
