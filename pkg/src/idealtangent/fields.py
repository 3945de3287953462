"""Exact base fields: arbitrary-precision rationals and large prime fields.

Every scalar in the engine is either a ``fractions.Fraction`` (rational mode)
or a Python int in ``[0, p)`` (prime mode).  There is no floating point
anywhere.  Prime mode is an accelerator; rational mode is the reference.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid far beyond any prime we accept
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field of rationals; elements are Fraction instances."""

    kind = "rational"
    name = "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        t = type(x)
        if t is Fraction:
            return x
        if t is int:
            return Fraction(x)
        if isinstance(x, (Fraction, int)):
            return Fraction(x)
        raise ValidationError(f"cannot coerce {x!r} into QQ")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """GF(p) for a prime p; elements are ints in [0, p)."""

    kind = "prime"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValidationError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x):
        p = self.p
        t = type(x)
        if t is int:
            return x % p
        if t is Fraction or isinstance(x, (Fraction, int)):
            den = x.denominator % p
            if den == 0:
                raise ValidationError(
                    f"denominator of {x} divisible by the prime {p}")
            return x.numerator % p * pow(den, p - 2, p) % p
        raise ValidationError(f"cannot coerce {x!r} into GF({p})")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return a * pow(b, self.p - 2, self.p) % self.p

    def neg(self, a):
        return -a % self.p

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()

#: default accelerator prime (> 10**6, comfortably above all structure
#: constants met in the acceptance suite)
DEFAULT_PRIME = 1000003


def field_from_spec(spec: str):
    """Parse a field spec: ``q`` for rationals, ``p:<prime>`` for GF(p)."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.startswith("p:"):
        try:
            p = int(s[2:])
        except ValueError:
            raise ValidationError(f"bad prime in field spec {spec!r}") from None
        return PrimeField(p)
    if s in ("p", "prime"):
        return PrimeField(DEFAULT_PRIME)
    raise ValidationError(f"unknown field spec {spec!r} (use 'q' or 'p:<prime>')")
