"""Exact scalars over Q and F_p, combinatorial coefficients, dense exact linear algebra.

No floating point anywhere: rationals are arbitrary-precision `fractions.Fraction`
(always in lowest terms with positive denominator), prime-field residues are plain
ints kept reduced in [0, p).  Matrices are dense and row-major; elimination is
deterministic (leftmost pivot, topmost row).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Sequence


class MixedFieldsError(ValueError):
    """Operands belong to different ground fields."""


class NotSquareError(ValueError):
    """Determinant requested for a non-square matrix."""


class OutOfRangeError(ValueError):
    """Argument outside the documented domain of a combinatorial map."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Ground field: the rationals (char 0) or the prime field F_p (char p).

    Scalar values are raw: `Fraction` over the rationals, `int` in [0, p) over F_p.
    All methods keep values canonical.
    """

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        if char != 0 and not is_prime(char):
            raise ValueError(f"field characteristic must be 0 or prime, got {char}")
        self.char = char

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls(p)

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def coerce(self, x):
        """Coerce an int, Fraction, or "a/b" string into a canonical scalar."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                raise ZeroDivisionError(
                    f"denominator {x.denominator} not invertible mod {self.char}")
            return x.numerator * pow(x.denominator, -1, self.char) % self.char
        return x % self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.char == 0 else pow(a, -1, self.char)

    def div(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError("division by zero")
        return a / b if self.char == 0 else a * pow(b, -1, self.char) % self.char

    def is_zero(self, a) -> bool:
        return a == 0

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        return self.coerce(text)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self) -> int:
        return hash(("Field", self.char))

    def __repr__(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"


class Scalar:
    """Field element wrapper used at API boundaries; raises on cross-field mixes."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.coerce(value)

    def _join(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedFieldsError(f"{self.field} vs {other.field}")
            return other
        return Scalar(self.field, other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._join(other).value))

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._join(other).value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._join(other).value))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._join(other).value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        return self.value == self.field.coerce(other)

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"Scalar({self.field!r}, {self.value})"

    def __str__(self):
        return self.field.fmt(self.value)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; 0 outside 0 <= k <= n."""
    if n < 0:
        raise OutOfRangeError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem: product of base-p digit binomials."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        out = out * binomial(n % p, k % p) % p
        if out == 0:
            return 0
        n //= p
        k //= p
    return out


def binom_p_quotient(p: int, m: int, i: int) -> int:
    """(C(p^m, i) / p) mod p for 0 < i < p^m.

    C(p^m, i) is divisible by p exactly m - v_p(i) >= 1 times (carries in base-p
    addition of i and p^m - i), so the quotient is an integer; this is asserted.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise OutOfRangeError("need m >= 1")
    if not 0 < i < p**m:
        raise OutOfRangeError(f"need 0 < i < {p**m}, got {i}")
    c = math.comb(p**m, i)
    q, r = divmod(c, p)
    assert r == 0
    return q % p


class Matrix:
    """Dense matrix over one Field, row-major, entries stored raw."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence]):
        self.field = field
        self.data = [[field.coerce(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, [[0] * cols for _ in range(rows)])

    def at(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.data[i][j])

    def copy(self) -> "Matrix":
        return Matrix(self.field, [row[:] for row in self.data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [[self.data[i][j] for i in range(self.rows)]
                                   for j in range(self.cols)])

    def mul_vec(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        f = self.field
        vv = [f.coerce(x) for x in v]
        out = []
        for row in self.data:
            acc = f.zero
            for a, b in zip(row, vv):
                acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return out

    def rref(self) -> tuple["Matrix", int, tuple[int, ...]]:
        """Reduced row echelon form; returns (R, rank, pivot column indices).

        Deterministic: scan columns left to right, pick the topmost nonzero row.
        """
        f = self.field
        m = [row[:] for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = next((i for i in range(r, self.rows) if not f.is_zero(m[i][c])), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(inv, x) for x in m[r]]
            for i in range(self.rows):
                if i != r and not f.is_zero(m[i][c]):
                    q = m[i][c]
                    m[i] = [f.sub(x, f.mul(q, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(f, m), r, tuple(pivots)

    def rank(self) -> int:
        return self.rref()[1]

    def nullspace(self) -> list[list]:
        """Canonical basis of the right kernel: one vector per RREF free column
        (that free variable set to one, the others zero), ordered by column index.
        """
        f = self.field
        R, rank, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            v = [f.zero] * self.cols
            v[free] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(R.data[r][free])
            basis.append(v)
        return basis

    def det(self):
        """Exact determinant by fraction-free (Bareiss) elimination with row swaps."""
        if self.rows != self.cols:
            raise NotSquareError(f"{self.rows}x{self.cols}")
        f = self.field
        n = self.rows
        m = [row[:] for row in self.data]
        sign = 1
        prev = f.one
        for k in range(n - 1):
            pr = next((i for i in range(k, n) if not f.is_zero(m[i][k])), None)
            if pr is None:
                return f.zero
            if pr != k:
                m[k], m[pr] = m[pr], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = f.sub(f.mul(m[i][j], m[k][k]), f.mul(m[i][k], m[k][j]))
                    m[i][j] = f.div(num, prev)
                m[i][k] = f.zero
            prev = m[k][k]
        d = m[n - 1][n - 1]
        return f.neg(d) if sign < 0 else d

    def solve(self, rhs: Sequence):
        """One exact solution of M x = rhs (free variables zero), or None."""
        f = self.field
        aug = Matrix(f, [row + [f.coerce(b)] for row, b in zip(self.data, rhs)])
        R, rank, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [f.zero] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = R.data[r][self.cols]
        return x

    def to_json(self) -> str:
        return json.dumps([[self.field.fmt(x) for x in row] for row in self.data])

    @classmethod
    def from_json(cls, field: Field, text: str) -> "Matrix":
        return cls(field, json.loads(text))

    def to_text(self) -> str:
        cells = [[self.field.fmt(x) for x in row] for row in self.data]
        widths = [max(len(cells[i][j]) for i in range(self.rows))
                  for j in range(self.cols)] if self.rows else []
        return "\n".join(" ".join(c.rjust(w) for c, w in zip(row, widths))
                         for row in cells)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.field == other.field
                and self.data == other.data)

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.rows}x{self.cols})"
