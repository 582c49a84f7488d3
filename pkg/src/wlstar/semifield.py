"""Weight algebras: commutative, zero-sum-free semifields.

Every semifield exposes ``plus`` (⊕), ``times`` (⊗), ``div`` (⊘), the
constants ``zero``/``one`` and an equality predicate ``eq``.  Values are plain
immutable Python objects (``bool``, ``Fraction``, ``float``), so all methods
are pure and thread-safe.

Four instances ship: :data:`BOOLEAN`, :data:`RATIONAL`, :data:`MINPLUS` and
:class:`RealSemifield` (floating point, tolerance-based equality).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from .errors import DivisionByZero, ParseError

DEFAULT_TOLERANCE = 1e-9


class Semifield:
    """Base class; subclasses override the algebra."""

    name = "abstract"
    zero = None
    one = None
    # Exact instances support hashing of normalized rows.
    exact = True
    idempotent = False

    def plus(self, x, y):
        raise NotImplementedError

    def times(self, x, y):
        raise NotImplementedError

    def _div(self, x, y):
        raise NotImplementedError

    def div(self, x, y):
        if self.is_zero(y):
            raise DivisionByZero(f"{self.name}: division of {x!r} by zero")
        return self._div(x, y)

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return self.eq(x, self.zero)

    def nfold(self, n, x):
        """``x ⊕ ... ⊕ x`` with ``n`` summands."""
        if n < 1:
            raise ValueError(f"nfold needs n >= 1, got {n}")
        if self.idempotent:
            return x
        return reduce(self.plus, [x] * n)

    def sum(self, values):
        return reduce(self.plus, values, self.zero)

    def prod(self, values):
        return reduce(self.times, values, self.one)

    def parse(self, text):
        raise NotImplementedError

    def format(self, x):
        return str(x)

    def sample(self, rng):
        """A random nonzero weight drawn from ``rng`` (a ``random.Random``)."""
        raise NotImplementedError

    def normalize(self, values):
        """Canonical representative of the homothetic class of ``values``.

        Two tuples are homothetic iff their normalized forms compare equal.
        Only meaningful for exact instances.
        """
        for v in values:
            if not self.is_zero(v):
                return tuple(self._div(x, v) for x in values)
        return tuple(values)

    def __repr__(self):
        return f"<semifield {self.name}>"


class BooleanSemifield(Semifield):
    name = "boolean"
    zero = False
    one = True
    idempotent = True

    def plus(self, x, y):
        return x or y

    def times(self, x, y):
        return x and y

    def _div(self, x, y):
        return x

    def parse(self, text):
        text = text.strip()
        if text in ("0", "1"):
            return text == "1"
        raise ParseError(f"boolean weight must be '0' or '1', got {text!r}")

    def format(self, x):
        return "1" if x else "0"

    def sample(self, rng):
        return True


class RationalSemifield(Semifield):
    """Exact non-negative rationals under ordinary + and ×."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def plus(self, x, y):
        return x + y

    def times(self, x, y):
        return x * y

    def _div(self, x, y):
        return x / y

    def nfold(self, n, x):
        if n < 1:
            raise ValueError(f"nfold needs n >= 1, got {n}")
        return n * x

    def parse(self, text):
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational weight {text!r}") from exc
        if value < 0:
            raise ParseError(f"rational weight must be non-negative, got {text!r}")
        return value

    def sample(self, rng):
        return Fraction(rng.randint(1, 9), rng.randint(1, 9))


class RealSemifield(Semifield):
    """Non-negative floats; equality up to a relative tolerance."""

    name = "real"
    zero = 0.0
    one = 1.0
    exact = False

    def __init__(self, tolerance=DEFAULT_TOLERANCE):
        self.tolerance = tolerance

    def plus(self, x, y):
        return x + y

    def times(self, x, y):
        return x * y

    def _div(self, x, y):
        return x / y

    def eq(self, x, y):
        return abs(x - y) <= self.tolerance * max(abs(x), abs(y), 1.0)

    def nfold(self, n, x):
        if n < 1:
            raise ValueError(f"nfold needs n >= 1, got {n}")
        return n * x

    def parse(self, text):
        try:
            value = float(Fraction(text)) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad real weight {text!r}") from exc
        if not value >= 0 or math.isinf(value):
            raise ParseError(f"real weight must be finite and non-negative, got {text!r}")
        return value

    def format(self, x):
        return repr(float(x))

    def sample(self, rng):
        return rng.uniform(0.05, 1.0)

    def __eq__(self, other):
        return isinstance(other, RealSemifield) and other.tolerance == self.tolerance

    def __hash__(self):
        return hash((self.name, self.tolerance))


class MinPlusSemifield(Semifield):
    """Tropical semifield over exact rationals: ⊕ = min, ⊗ = +, 0̄ = +∞."""

    name = "minplus"
    zero = math.inf
    one = Fraction(0)
    idempotent = True

    def plus(self, x, y):
        return x if x <= y else y

    def times(self, x, y):
        if x == math.inf or y == math.inf:
            return math.inf
        return x + y

    def _div(self, x, y):
        if x == math.inf:
            return math.inf
        return x - y

    def parse(self, text):
        text = text.strip()
        if text in ("inf", "+inf", "Infinity"):
            return math.inf
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad min-plus weight {text!r}") from exc

    def format(self, x):
        if x == math.inf:
            return "inf"
        if x.denominator == 1:
            return str(x.numerator)
        den = x.denominator
        while den % 2 == 0:
            den //= 2
        while den % 5 == 0:
            den //= 5
        if den == 1:
            # terminating decimal, printed exactly
            digits = 0
            scaled = x
            while scaled.denominator != 1:
                scaled *= 10
                digits += 1
            sign = "-" if scaled < 0 else ""
            mag = str(abs(scaled.numerator)).rjust(digits + 1, "0")
            return f"{sign}{mag[:-digits]}.{mag[-digits:]}"
        return str(x)

    def sample(self, rng):
        return Fraction(rng.randint(0, 9))


BOOLEAN = BooleanSemifield()
RATIONAL = RationalSemifield()
MINPLUS = MinPlusSemifield()
REAL = RealSemifield()

NAMES = ("boolean", "rational", "real", "minplus")


def get(name, tolerance=None):
    """Look up a shipped instance by its file-format name."""
    if name == "boolean":
        return BOOLEAN
    if name == "rational":
        return RATIONAL
    if name == "minplus":
        return MINPLUS
    if name == "real":
        return REAL if tolerance is None else RealSemifield(tolerance)
    raise ParseError(f"unknown semifield {name!r}; expected one of {', '.join(NAMES)}")
