"""
Multidegrees, Segre numbers and determinantal matrices of Cremona
transformations of P^n, with the standard transformation S_n as the worked case.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from utils import mixed_volume
from utils.exact_core import RationalMatrix, binomial, hypergeom_terminating
from utils.guards import DeskGuard

logger = logging.getLogger(__name__)


def _require_n(n: int, minimum: int, label: str) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < minimum:
        raise ValueError(f"{label} needs n >= {minimum} (got {n!r})")


@dataclass(frozen=True)
class MultidegreeSequence:
    """
    Degrees d_0..d_n of the strict transforms of general linear subspaces,
    together with the algebraic degree of the map.
    """

    n: int
    degrees: tuple
    algebraic_degree: int

    def __post_init__(self):
        _require_n(self.n, 1, "MultidegreeSequence")
        degrees = tuple(int(d) for d in self.degrees)
        if len(degrees) != self.n + 1:
            raise ValueError(f"MultidegreeSequence for n={self.n} needs {self.n + 1} degrees (got {len(degrees)})")
        if self.algebraic_degree < 1:
            raise ValueError(f"Algebraic degree must be positive (got {self.algebraic_degree})")
        object.__setattr__(self, "degrees", degrees)

    @property
    def is_consistent(self) -> bool:
        """d_0 = 1 and d_1 equals the algebraic degree."""
        return self.degrees[0] == 1 and self.degrees[1] == self.algebraic_degree

    @property
    def is_effective(self) -> bool:
        return all(d >= 0 for d in self.degrees)

    @property
    def is_birational(self) -> bool:
        return self.degrees[-1] == 1


@dataclass(frozen=True)
class SegreVector:
    """Segre numbers s_0..s_(n-2); s_(n-1) = 0 and s_n = -1 by convention."""

    n: int
    numbers: tuple

    def __post_init__(self):
        _require_n(self.n, 1, "SegreVector")
        numbers = tuple(int(s) for s in self.numbers)
        if len(numbers) != max(self.n - 1, 0):
            raise ValueError(f"SegreVector for n={self.n} needs {max(self.n - 1, 0)} numbers (got {len(numbers)})")
        object.__setattr__(self, "numbers", numbers)

    def extended(self, k: int) -> int:
        if k < 0 or k > self.n:
            raise ValueError(f"Segre index must satisfy 0 <= k <= n (got k={k}, n={self.n})")
        if k == self.n:
            return -1
        if k == self.n - 1:
            return 0
        return self.numbers[k]

    def extended_numbers(self) -> tuple:
        return tuple(self.extended(k) for k in range(self.n + 1))


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple

    def __post_init__(self):
        coefficients = tuple(int(c) for c in self.coefficients)
        if not coefficients:
            raise ValueError("LinearForm needs at least one coefficient")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def variables(self) -> int:
        return len(self.coefficients)

    @classmethod
    def zero(cls, variables: int) -> "LinearForm":
        return cls((0,) * variables)

    @classmethod
    def variable(cls, index: int, variables: int, coefficient: int = 1) -> "LinearForm":
        return cls(tuple(coefficient if i == index else 0 for i in range(variables)))

    def padded(self, variables: int) -> "LinearForm":
        if variables < self.variables:
            raise ValueError(f"Cannot pad a form in {self.variables} variables down to {variables}")
        return LinearForm(self.coefficients + (0,) * (variables - self.variables))

    def to_polynomial(self) -> "SparsePolynomial":
        terms = {}
        for i, c in enumerate(self.coefficients):
            if c:
                terms[tuple(1 if t == i else 0 for t in range(self.variables))] = c
        return SparsePolynomial(self.variables, terms)


class SparsePolynomial:
    """Integer polynomial in X_0..X_(variables-1), stored as exponent tuple -> coefficient."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: int, terms: Optional[dict] = None):
        if variables < 1:
            raise ValueError(f"SparsePolynomial needs at least one variable (got {variables})")
        self.variables = variables
        cleaned = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(exponents)
            if len(exponents) != variables or any(e < 0 for e in exponents):
                raise ValueError(f"Bad exponent vector {exponents} for {variables} variables")
            if coefficient:
                cleaned[exponents] = cleaned.get(exponents, 0) + int(coefficient)
        self._terms = {e: c for e, c in cleaned.items() if c}

    @classmethod
    def zero(cls, variables: int) -> "SparsePolynomial":
        return cls(variables)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: int = 1) -> "SparsePolynomial":
        return cls(len(exponents), {tuple(exponents): coefficient})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def pad(self, variables: int) -> "SparsePolynomial":
        if variables < self.variables:
            raise ValueError(f"Cannot pad a polynomial in {self.variables} variables down to {variables}")
        extra = (0,) * (variables - self.variables)
        return SparsePolynomial(variables, {e + extra: c for e, c in self._terms.items()})

    def _check(self, other: "SparsePolynomial") -> None:
        if not isinstance(other, SparsePolynomial):
            raise TypeError(f"Expected SparsePolynomial, got {type(other).__name__}")
        if other.variables != self.variables:
            raise ValueError(f"Variable count mismatch: {self.variables} and {other.variables}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return SparsePolynomial(self.variables, terms)

    def __neg__(self):
        return SparsePolynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return SparsePolynomial(self.variables, {e: c * other for e, c in self._terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return SparsePolynomial(self.variables, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exponents in sorted(self._terms, reverse=True):
            coefficient = self._terms[exponents]
            factors = []
            for i, e in enumerate(exponents):
                if e == 1:
                    factors.append(f"X{i}")
                elif e > 1:
                    factors.append(f"X{i}^{e}")
            monomial = "*".join(factors)
            if not monomial:
                parts.append(str(coefficient))
            elif coefficient == 1:
                parts.append(monomial)
            elif coefficient == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{coefficient}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class LinearFormMatrix:
    """(n+1) x n matrix of linear forms in X_0..X_n."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(f if isinstance(f, LinearForm) else LinearForm(f) for f in row) for row in self.rows)
        if not rows or not rows[0]:
            raise ValueError("LinearFormMatrix needs at least one column")
        cols = len(rows[0])
        if any(len(row) != cols for row in rows):
            raise ValueError("LinearFormMatrix rows must have equal length")
        if len(rows) != cols + 1:
            raise ValueError(f"LinearFormMatrix needs rows = cols + 1 (got {len(rows)} x {cols})")
        for row in rows:
            for form in row:
                if form.variables != cols + 1:
                    raise ValueError(f"Every form needs {cols + 1} coefficients (got {form.variables})")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def variables(self) -> int:
        return self.n + 1


# Multidegrees and Segre numbers

def multidegrees_standard(n: int) -> MultidegreeSequence:
    _require_n(n, 2, "multidegrees_standard")
    return MultidegreeSequence(n, tuple(binomial(n, k) for k in range(n + 1)), n)


def segre_numbers_standard(n: int) -> SegreVector:
    """s_k = (-1)^(n-k-1) sum_j (-1)^j C(n-k, j) C(n, j) n^(n-k-j), for 0 <= k <= n-2."""
    _require_n(n, 2, "segre_numbers_standard")
    numbers = []
    for k in range(n - 1):
        total = sum((-1) ** j * binomial(n - k, j) * binomial(n, j) * n ** (n - k - j)
                    for j in range(n - k + 1))
        numbers.append((-1) ** ((n - k + 1) % 2) * total)
    return SegreVector(n, tuple(numbers))


def segre_numbers_hypergeometric(n: int) -> SegreVector:
    """The same numbers as -F(-n, k-n; 1; -1/n) * (-n)^(n-k)."""
    _require_n(n, 2, "segre_numbers_hypergeometric")
    numbers = []
    for k in range(n - 1):
        value = -hypergeom_terminating(-n, k - n, 1, Fraction(-1, n)) * (-n) ** (n - k)
        if value.denominator != 1:
            raise ValueError(f"Hypergeometric Segre value is not an integer: {value} (n={n}, k={k})")
        numbers.append(value.numerator)
    return SegreVector(n, tuple(numbers))


def segre_tail_closed_forms(n: int) -> dict:
    """
    Closed forms for the last Segre numbers of S_n, keyed by m with value s_(n-m).

    Only m with n - m >= 0 are returned; the quintic factor of s_(n-5) is
    7n^2 + 7n + 6.
    """
    _require_n(n, 2, "segre_tail_closed_forms")
    forms = {
        2: Fraction(n * (n + 1), 2),
        3: Fraction(-n * (n + 1) * (2 * n + 1), 3),
        4: Fraction(n * (n + 1) * (5 * n * n + 5 * n + 2), 8),
        5: Fraction(-n * (n + 1) * (2 * n + 1) * (7 * n * n + 7 * n + 6), 30),
    }
    return {m: int(value) for m, value in forms.items() if n - m >= 0}


def conversion_matrix(degree: int, n: int) -> RationalMatrix:
    """Lower-triangular a_kl = -C(k, l) degree^(k-l)."""
    _require_n(n, 1, "conversion_matrix")
    return RationalMatrix.from_function(
        n + 1, n + 1, lambda k, l: -binomial(k, l) * degree ** (k - l) if l <= k else 0)


def conversion_matrix_inverse(degree: int, n: int) -> RationalMatrix:
    """b_kl = (-1)^(1+k+l) C(k, l) degree^(k-l)."""
    _require_n(n, 1, "conversion_matrix_inverse")
    return RationalMatrix.from_function(
        n + 1, n + 1, lambda k, l: (-1) ** (1 + k + l) * binomial(k, l) * degree ** (k - l) if l <= k else 0)


def multidegrees_from_segre(s: SegreVector, degree: int) -> MultidegreeSequence:
    """d = M v with v = (-1, 0, s_(n-2), ..., s_0)."""
    n = s.n
    v = [s.extended(n - l) for l in range(n + 1)]
    d = conversion_matrix(degree, n).matvec(v)
    return MultidegreeSequence(n, tuple(int(x) for x in d), degree)


def segre_from_multidegrees(d: MultidegreeSequence) -> SegreVector:
    """
    s_k = (-1)^(n-k-1) sum_l (-1)^l C(n-k, l) degree^(n-k-l) d_l.

    The same sum is evaluated at k = n-1 and k = n; it must give 0 and -1.

    Raises:
        ValueError: "inconsistent multidegree data" when it does not.
    """
    n = d.n
    degree = d.algebraic_degree
    values = []
    for k in range(n + 1):
        total = sum((-1) ** l * binomial(n - k, l) * degree ** (n - k - l) * d.degrees[l]
                    for l in range(n - k + 1))
        values.append((-1) ** ((n - k + 1) % 2) * total)
    if values[n] != -1 or (n >= 1 and values[n - 1] != 0):
        logger.debug(f"Extended Segre entries for {d.degrees}: s_(n-1)={values[n - 1]}, s_n={values[n]}")
        raise ValueError(f"inconsistent multidegree data (degrees {list(d.degrees)}, algebraic degree {degree})")
    return SegreVector(n, tuple(values[:n - 1]))


def inverse_multidegrees(d: MultidegreeSequence) -> MultidegreeSequence:
    """Multidegrees of the inverse of a birational map: d_k(F^-1) = d_(n-k)(F)."""
    if not d.is_birational:
        raise ValueError(f"map is not birational (d_n = {d.degrees[-1]})")
    reversed_degrees = tuple(reversed(d.degrees))
    return MultidegreeSequence(d.n, reversed_degrees, d.degrees[d.n - 1])


def segre_class_terms(s: SegreVector) -> list:
    """(k, s_k, "H^(n-k)") for k = 0..n-2, the terms of s(B) = sum s_k [H^(n-k)]."""
    return [(k, s.numbers[k], f"H^{s.n - k}") for k in range(len(s.numbers))]


# Base locus

def base_components(n: int) -> list:
    """Coordinate pairs (i, j): the subspaces X_i = X_j = 0 of the base locus of S_n."""
    _require_n(n, 2, "base_components")
    return list(itertools.combinations(range(n + 1), 2))


def chow_ranks(n: int) -> list:
    _require_n(n, 3, "chow_ranks")
    return [(k, 1) for k in range(n - 2)] + [(n - 2, n * (n + 1) // 2)]


# Determinantal matrices

def standard_matrix(n: int) -> LinearFormMatrix:
    """m_ij = delta_ij X_(j-1) for the first n rows; the last row is -X_n throughout."""
    _require_n(n, 1, "standard_matrix")
    rows = []
    for i in range(n):
        rows.append(tuple(LinearForm.variable(i, n + 1) if j == i else LinearForm.zero(n + 1)
                          for j in range(n)))
    rows.append(tuple(LinearForm.variable(n, n + 1, -1) for _ in range(n)))
    return LinearFormMatrix(tuple(rows))


def _determinant(entries: list, rows: tuple, cols: tuple, memo: dict, variables: int) -> SparsePolynomial:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        result = entries[rows[0]][cols[0]]
    else:
        result = SparsePolynomial.zero(variables)
        first, rest = rows[0], rows[1:]
        for position, c in enumerate(cols):
            entry = entries[first][c]
            if entry.is_zero():
                continue
            minor = _determinant(entries, rest, cols[:position] + cols[position + 1:], memo, variables)
            if minor.is_zero():
                continue
            term = entry * minor
            result = result + term if position % 2 == 0 else result - term
    memo[key] = result
    return result


def maximal_minors(m: LinearFormMatrix) -> list:
    """
    The n+1 maximal minors; minor i is the determinant with row i deleted.

    Laplace expansion along the first remaining row, memoized on (rows, cols)
    so the n+1 determinants share their sub-minors.

    Raises:
        DeskGuardError: If n exceeds the minors_n guard.
    """
    n = m.n
    DeskGuard().check("minors_n", n, "maximal minors out of desk range")
    entries = [[form.to_polynomial() for form in row] for row in m.rows]
    cols = tuple(range(n))
    memo = {}
    minors = []
    for i in range(n + 1):
        rows = tuple(r for r in range(n + 1) if r != i)
        minors.append(_determinant(entries, rows, cols, memo, m.variables))
    logger.debug(f"Maximal minors for n={n}: {len(memo)} memoized sub-determinants")
    return minors


def extend_determinantal_matrix(m: LinearFormMatrix, column: Sequence) -> LinearFormMatrix:
    """
    The (n+2) x (n+1) matrix obtained by adding a zero row and then `column`.

    Existing forms are padded with the new variable X_(n+1); `column` holds
    n+2 forms in n+2 variables.
    """
    n = m.n
    variables = n + 2
    column = [f if isinstance(f, LinearForm) else LinearForm(f) for f in column]
    if len(column) != n + 2:
        raise ValueError(f"Extension column needs {n + 2} forms (got {len(column)})")
    if any(f.variables != variables for f in column):
        raise ValueError(f"Extension column forms need {variables} coefficients")
    rows = []
    for r, row in enumerate(m.rows):
        rows.append(tuple(form.padded(variables) for form in row) + (column[r],))
    rows.append(tuple(LinearForm.zero(variables) for _ in range(n)) + (column[n + 1],))
    return LinearFormMatrix(tuple(rows))


def example_matrix() -> LinearFormMatrix:
    """The 4 x 3 matrix of the cubo-quadric transformation of P^3 used as a worked example."""
    x0, x1, x2, x3 = (LinearForm.variable(i, 4) for i in range(4))
    zero = LinearForm.zero(4)

    def combine(*pairs):
        return LinearForm(tuple(sum(c * f.coefficients[i] for c, f in pairs) for i in range(4)))

    return LinearFormMatrix((
        (zero, x1, zero),
        (x0, zero, zero),
        (combine((-1, x1)), combine((-1, x1)), combine((1, x1), (-1, x0))),
        (x3, x3, combine((1, x2), (-1, x3))),
    ))


def example_components() -> list:
    """Its components X0(X1X2 - X0X3), X1(X1X2 - X0X3), X0X1(X2 - X3), X0X1(X0 - X1)."""
    return [
        SparsePolynomial(4, {(1, 1, 1, 0): 1, (2, 0, 0, 1): -1}),
        SparsePolynomial(4, {(0, 2, 1, 0): 1, (1, 1, 0, 1): -1}),
        SparsePolynomial(4, {(1, 1, 1, 0): 1, (1, 1, 0, 1): -1}),
        SparsePolynomial(4, {(2, 1, 0, 0): 1, (1, 2, 0, 0): -1}),
    ]


def load_matrix(data: dict) -> LinearFormMatrix:
    """Reads { "n": n, "rows": [[[c_0, ..., c_n], ...], ...] }."""
    if not isinstance(data, dict) or "n" not in data or "rows" not in data:
        raise ValueError("Matrix JSON needs 'n' and 'rows'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"Matrix n must be a positive integer (got {n!r})")
    rows = data["rows"]
    if not isinstance(rows, list) or len(rows) != n + 1:
        raise ValueError(f"Matrix JSON for n={n} needs {n + 1} rows")
    parsed = []
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise ValueError(f"Every matrix row needs {n} forms (got {row!r})")
        forms = []
        for coefficients in row:
            if (not isinstance(coefficients, list) or len(coefficients) != n + 1
                    or not all(isinstance(c, int) and not isinstance(c, bool) for c in coefficients)):
                raise ValueError(f"Every form needs {n + 1} integer coefficients (got {coefficients!r})")
            forms.append(LinearForm(tuple(coefficients)))
        parsed.append(tuple(forms))
    return LinearFormMatrix(tuple(parsed))


def dump_matrix(m: LinearFormMatrix) -> dict:
    return {"n": m.n, "rows": [[list(form.coefficients) for form in row] for row in m.rows]}


# Report

def segre_report(n: int) -> dict:
    """Every invariant of S_n computed by every available path, with agreement flags."""
    _require_n(n, 2, "segre_report")
    multidegrees = mixed_volume.multidegrees_all_paths(n)
    formula = list(segre_numbers_standard(n).numbers)
    conversion = list(segre_from_multidegrees(multidegrees_standard(n)).numbers)
    hypergeometric = list(segre_numbers_hypergeometric(n).numbers)
    closed_forms = segre_tail_closed_forms(n)
    closed_forms_agree = all(formula[n - m] == value for m, value in closed_forms.items())
    segre_agree = formula == conversion == hypergeometric and closed_forms_agree
    components = len(base_components(n))
    report = {
        "n": n,
        "degree": n,
        "multidegrees": multidegrees,
        "segre": {
            "formula": formula,
            "conversion": conversion,
            "hypergeometric": hypergeometric,
            "closed_forms": {str(m): value for m, value in closed_forms.items()},
            "paths_agree": segre_agree,
        },
        "base_components": components,
        "base_components_match_segre": components == formula[n - 2],
        "chow_ranks": [list(pair) for pair in chow_ranks(n)] if n >= 3 else "not applicable",
    }
    report["agreement"] = (multidegrees["paths_agree"] and segre_agree
                           and report["base_components_match_segre"])
    if not report["agreement"]:
        logger.warning(f"Segre report for n={n} has disagreeing paths")
    return report
