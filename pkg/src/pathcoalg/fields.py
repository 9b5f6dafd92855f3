"""Exact scalar fields: arbitrary-precision rationals and prime fields GF(p).

A field object bundles the arithmetic, parsing and formatting of its scalars.
Rationals are plain fractions.Fraction values (always in lowest terms with
positive denominator); GF(p) scalars are ints in range(p).
"""
from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class RationalField:
    """The field of rational numbers."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def of_int(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise FieldError("division by zero")
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, text: str) -> Fraction:
        text = text.strip()
        if not _RATIONAL_RE.match(text):
            raise FieldError(f"bad rational literal {text!r}; expected a, -a or a/b")
        value = Fraction(text)
        return value

    def format(self, a) -> str:
        return str(Fraction(a))

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rational")

    def __repr__(self) -> str:
        return "QQ"


class PrimeField:
    """GF(p) for a prime p; scalars are canonical representatives in range(p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"gf {p}"
        self.zero = 0
        self.one = 1 % p

    def of_int(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def parse(self, text: str):
        # same literal grammar as the rationals, reduced into GF(p)
        text = text.strip()
        if not _RATIONAL_RE.match(text):
            raise FieldError(f"bad scalar literal {text!r}; expected a, -a or a/b")
        q = Fraction(text)
        if q.denominator % self.p == 0:
            raise FieldError(f"literal {text!r} has denominator divisible by {self.p}")
        return self.div(self.of_int(q.numerator), self.of_int(q.denominator))

    def format(self, a) -> str:
        return str(a % self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("gf", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


QQ = RationalField()


def field_by_name(name: str):
    """Map a field declaration ("rational" or "gf P") to a field object."""
    parts = name.split()
    if parts == ["rational"]:
        return QQ
    if len(parts) == 2 and parts[0] == "gf":
        try:
            p = int(parts[1])
        except ValueError:
            raise FieldError(f"bad prime in field declaration {name!r}")
        return PrimeField(p)
    raise FieldError(f"unknown field {name!r}; expected 'rational' or 'gf P'")
