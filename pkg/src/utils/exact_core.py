"""
Exact scalar and polynomial arithmetic shared by every other module.

Rationals are ``fractions.Fraction`` values: numerator and denominator are
Python integers (arbitrary precision) and every operation returns the reduced
form with a positive denominator, so equality is structural.
"""
import logging
import math
import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

logger = logging.getLogger(__name__)

Rational = Fraction

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def to_rational(value) -> Fraction:
    """Coerces ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValueError(f"Not a rational value: {value!r}")


def parse_rational(text: str) -> Fraction:
    """
    Parses the interchange form of a rational.

    Args:
        text (str): "p/q" or "p", with optional sign on p.

    Returns:
        Fraction: The canonical rational.

    Raises:
        ValueError: On malformed text or a zero denominator.
    """
    if not isinstance(text, str):
        raise ValueError(f"Expected a string rational, got {text!r}")
    match = _RATIONAL_PATTERN.match(text)
    if not match:
        raise ValueError(f"Malformed rational: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"Zero denominator in rational: {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value) -> str:
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial expects n >= 0 (got {n})")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def alternating_binomial_sum(n: int, k: int) -> int:
    """Sum over k <= l <= n of (-1)^l C(n, l) C(l, k); zero for k < n."""
    return sum((-1) ** l * binomial(n, l) * binomial(l, k) for l in range(k, n + 1))


def pochhammer(x, j: int) -> Fraction:
    """Rising factorial (x)_j = x (x+1) ... (x+j-1), with (x)_0 = 1."""
    if j < 0:
        raise ValueError(f"pochhammer expects j >= 0 (got {j})")
    result = Fraction(1)
    x = to_rational(x)
    for i in range(j):
        result *= x + i
    return result


def hypergeom_terminating(a: int, b: int, c: int, z) -> Fraction:
    """
    Evaluates the terminating series 2F1(a, b; c; z) exactly.

    Args:
        a (int): Non-positive integer; the series stops after -a + 1 terms.
        b (int): Integer upper parameter.
        c (int): Positive integer lower parameter.
        z: Rational argument.

    Returns:
        Fraction: Sum over 0 <= j <= -a of (a)_j (b)_j / ((c)_j j!) z^j.

    Raises:
        ValueError: If a > 0 (series would not terminate) or c <= 0.
    """
    if a > 0:
        raise ValueError(f"hypergeom_terminating needs a <= 0 (got {a})")
    if c <= 0:
        raise ValueError(f"hypergeom_terminating needs c > 0 (got {c}); (c)_j may vanish")
    z = to_rational(z)
    total = Fraction(0)
    term = Fraction(1)
    for j in range(-a + 1):
        total += term
        term = term * (a + j) * (b + j) * z / ((c + j) * (j + 1))
    return total


class BivariatePolynomial:
    """
    Exact polynomial in the two formal variables a and b.

    Terms map exponent pairs (i, j) to non-zero Fraction coefficients of
    a^i b^j. Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[dict] = None):
        cleaned = {}
        for key, coefficient in (terms or {}).items():
            i, j = key
            if not isinstance(i, int) or not isinstance(j, int) or i < 0 or j < 0:
                raise ValueError(f"Exponents must be non-negative integers (got {key!r})")
            coefficient = to_rational(coefficient)
            if coefficient != 0:
                cleaned[(i, j)] = cleaned.get((i, j), Fraction(0)) + coefficient
                if cleaned[(i, j)] == 0:
                    del cleaned[(i, j)]
        self._terms = dict(sorted(cleaned.items(), reverse=True))

    @classmethod
    def constant(cls, value) -> "BivariatePolynomial":
        return cls({(0, 0): value})

    @classmethod
    def a(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def b(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self._terms}) <= 1

    def evaluate(self, a, b) -> Fraction:
        a, b = to_rational(a), to_rational(b)
        return sum((c * a ** i * b ** j for (i, j), c in self._terms.items()), Fraction(0))

    def __add__(self, other):
        other = _as_polynomial(other)
        merged = dict(self._terms)
        for key, coefficient in other._terms.items():
            merged[key] = merged.get(key, Fraction(0)) + coefficient
        return BivariatePolynomial(merged)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_polynomial(other))

    def __rsub__(self, other):
        return _as_polynomial(other) - self

    def __mul__(self, other):
        other = _as_polynomial(other)
        product = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                product[key] = product.get(key, Fraction(0)) + c1 * c2
        return BivariatePolynomial(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = BivariatePolynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivariatePolynomial.constant(other)
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self._terms.items():
            factors = []
            if i:
                factors.append("a" if i == 1 else f"a^{i}")
            if j:
                factors.append("b" if j == 1 else f"b^{j}")
            if not factors:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{format_rational(c)}*" + "*".join(factors))
        return " + ".join(parts)


def _as_polynomial(value) -> BivariatePolynomial:
    if isinstance(value, BivariatePolynomial):
        return value
    return BivariatePolynomial.constant(value)


def poly_coefficient(p: BivariatePolynomial, i: int, j: int) -> Fraction:
    return p.coefficient(i, j)


def poly_mul(p: BivariatePolynomial, q: BivariatePolynomial) -> BivariatePolynomial:
    return p * q


def poly_add(p: BivariatePolynomial, q: BivariatePolynomial) -> BivariatePolynomial:
    return p + q


def poly_evaluate(p: BivariatePolynomial, a, b) -> Fraction:
    return p.evaluate(a, b)


class RationalMatrix:
    """Dense matrix of Fractions; immutable."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(to_rational(x) for x in row) for row in entries]
        if not rows or not rows[0]:
            raise ValueError("RationalMatrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("RationalMatrix rows must have equal length")
        self.rows = len(rows)
        self.cols = width
        self._entries = tuple(rows)

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def from_function(cls, rows: int, cols: int, entry) -> "RationalMatrix":
        return cls([[entry(i, j) for j in range(cols)] for i in range(rows)])

    def __getitem__(self, index):
        i, j = index
        return self._entries[i][j]

    def row(self, i: int) -> tuple:
        return self._entries[i]

    def to_lists(self) -> list:
        return [list(row) for row in self._entries]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Dimension mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}")
        return RationalMatrix([
            [sum((self._entries[i][k] * other._entries[k][j] for k in range(self.cols)), Fraction(0))
             for j in range(other.cols)]
            for i in range(self.rows)
        ])

    def matvec(self, vector: Sequence) -> list:
        if len(vector) != self.cols:
            raise ValueError(f"Dimension mismatch: {self.rows}x{self.cols} matrix and vector of length {len(vector)}")
        vector = [to_rational(x) for x in vector]
        return [sum((a * x for a, x in zip(row, vector)), Fraction(0)) for row in self._entries]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self._entries)
        return f"RationalMatrix([{body}])"


def gaussian_solve(m: RationalMatrix, rhs: Sequence) -> Optional[list]:
    """
    Solves m x = rhs exactly by Gauss-Jordan elimination.

    Args:
        m (RationalMatrix): Square coefficient matrix.
        rhs: Right-hand side, one rational per row.

    Returns:
        list[Fraction] | None: The unique solution, or None when m is singular.

    Raises:
        ValueError: If m is not square or rhs has the wrong length.
    """
    if not m.is_square():
        raise ValueError(f"gaussian_solve needs a square matrix (got {m.rows}x{m.cols})")
    if len(rhs) != m.rows:
        raise ValueError(f"Dimension mismatch: matrix has {m.rows} rows, rhs has {len(rhs)} entries")
    size = m.rows
    augmented = [list(m.row(i)) + [to_rational(rhs[i])] for i in range(size)]
    for column in range(size):
        pivot = next((r for r in range(column, size) if augmented[r][column] != 0), None)
        if pivot is None:
            return None
        augmented[column], augmented[pivot] = augmented[pivot], augmented[column]
        pivot_value = augmented[column][column]
        pivot_row = [x / pivot_value for x in augmented[column]]
        augmented[column] = pivot_row
        for r in range(size):
            if r != column and augmented[r][column] != 0:
                factor = augmented[r][column]
                augmented[r] = [x - factor * y for x, y in zip(augmented[r], pivot_row)]
    return [augmented[i][size] for i in range(size)]


def matrix_inverse(m: RationalMatrix) -> Optional[RationalMatrix]:
    """Inverse of a square matrix, column by column; None if singular."""
    if not m.is_square():
        raise ValueError(f"matrix_inverse needs a square matrix (got {m.rows}x{m.cols})")
    columns = []
    for j in range(m.cols):
        unit = [1 if i == j else 0 for i in range(m.rows)]
        column = gaussian_solve(m, unit)
        if column is None:
            return None
        columns.append(column)
    return RationalMatrix([[columns[j][i] for j in range(m.cols)] for i in range(m.rows)])


def dot(u: Iterable, v: Iterable):
    return sum((x * y for x, y in zip(u, v)), 0)
