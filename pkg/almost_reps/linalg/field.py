"""
Ground Fields
Prime fields GF(p) and the rationals, with canonical scalars and numpy array helpers
"""

from fractions import Fraction

import numpy as np
from sympy import isprime

from almost_reps.utils.errors import SpecError

DEFAULT_PRIME = 32003

# Above this modulus int64 products could overflow inside a matrix product
NATIVE_PRIME_LIMIT = 1 << 25


class Field:
    """Common interface of the exact fields used for every matrix"""

    kind = None
    dtype = object

    def element(self, value):
        """Return the canonical scalar for an int, Fraction or numeric string"""
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, arr):
        """Bring an array of raw arithmetic results back to canonical form"""
        return arr

    def format(self, x):
        """JSON form of a scalar: int for integers, "num/den" otherwise"""
        raise NotImplementedError

    def signed(self, x):
        """Display representative of a scalar"""
        return x

    def descriptor(self):
        raise NotImplementedError

    def label(self):
        raise NotImplementedError

    def parse(self, text):
        """
        Parse a scalar literal

        Args:
            text: Integer or fraction literal such as "3", "-2" or "3/4"

        Returns:
            Canonical scalar
        """
        text = str(text).strip()
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise SpecError(f"Invalid scalar literal: {text!r}") from e
        return self.element(value)

    def is_zero(self, x):
        return x == 0

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def zeros(self, rows, cols):
        return np.zeros((rows, cols), dtype=self.dtype)

    def eye(self, n):
        return np.eye(n, dtype=self.dtype)

    def array(self, rows, shape=None):
        """
        Build a canonical 2-D array from nested sequences

        Args:
            rows: Sequence of row sequences
            shape: Optional (rows, cols), needed when rows is empty

        Returns:
            numpy array of canonical scalars
        """
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        out = self.zeros(*shape)
        for i, row in enumerate(rows):
            if len(row) != shape[1]:
                raise SpecError(f"Row {i} has {len(row)} entries, expected {shape[1]}")
            for j, value in enumerate(row):
                out[i, j] = self.element(value)
        return out

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.label())

    def __repr__(self):
        return f"Field({self.label()})"


class PrimeField(Field):
    """GF(p); scalars are least nonnegative residues"""

    kind = "gfp"

    def __init__(self, p=DEFAULT_PRIME):
        """
        Initialize prime field

        Args:
            p: Prime modulus
        """
        p = int(p)
        if not isprime(p):
            raise SpecError(f"Field modulus {p} is not prime")
        self.p = p
        self.dtype = np.int64 if p < NATIVE_PRIME_LIMIT else object

    def element(self, value):
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"Denominator {value.denominator} vanishes in GF({self.p})")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError(f"Division by zero in GF({self.p})")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        return np.mod(arr, self.p)

    def format(self, x):
        return int(x)

    def signed(self, x):
        """Representative in (-p/2, p/2], for display"""
        x = int(x) % self.p
        return x - self.p if x > self.p // 2 else x

    def descriptor(self):
        return {"type": "gfp", "p": self.p}

    def label(self):
        return f"gfp:{self.p}"


class RationalField(Field):
    """Q; scalars are Fractions in lowest terms with positive denominator"""

    kind = "rational"
    dtype = object

    def element(self, value):
        return Fraction(value)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("Division by zero in Q")
        return 1 / Fraction(x)

    def zeros(self, rows, cols):
        return np.full((rows, cols), Fraction(0), dtype=object)

    def eye(self, n):
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def format(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return x.numerator
        return f"{x.numerator}/{x.denominator}"

    def descriptor(self):
        return {"type": "rational"}

    def label(self):
        return "rational"


def make_field(descriptor=None):
    """
    Build a field from a descriptor

    Args:
        descriptor: None (default GF(32003)), a Field, "gfp:P", "rational",
            or a dict {"type": "gfp", "p": P} / {"type": "rational"}

    Returns:
        Field instance
    """
    if descriptor is None:
        return PrimeField(DEFAULT_PRIME)
    if isinstance(descriptor, Field):
        return descriptor
    if isinstance(descriptor, str):
        text = descriptor.strip().lower()
        if text in ("rational", "q"):
            return RationalField()
        if text.startswith("gfp:"):
            try:
                return PrimeField(int(text[4:]))
            except ValueError as e:
                raise SpecError(f"Invalid field descriptor: {descriptor!r}") from e
        if text == "gfp":
            return PrimeField(DEFAULT_PRIME)
        raise SpecError(f"Invalid field descriptor: {descriptor!r}")
    if isinstance(descriptor, dict):
        kind = descriptor.get("type")
        if kind == "rational":
            return RationalField()
        if kind == "gfp":
            return PrimeField(descriptor.get("p", DEFAULT_PRIME))
    raise SpecError(f"Invalid field descriptor: {descriptor!r}")


def format_ratio(value):
    """Exact "num/den" string for a ratio"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_ratio(text):
    """Inverse of format_ratio"""
    return Fraction(str(text))
