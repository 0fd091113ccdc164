"""Exact coefficient fields: prime fields GF(p) and the rationals.

Scalars are plain python ints in [0, p) for prime fields and
fractions.Fraction for the rationals.  Everything downstream (matrices,
ring elements) stores scalars in these representations, so arithmetic is
exact by construction.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """A coefficient field, either GF(p) for a prime p < 2**31 or Q."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "prime":
            if p is None or not (2 <= p < 2**31):
                raise FieldError("prime field characteristic must satisfy 2 <= p < 2**31")
            if not _is_prime(p):
                raise FieldError("%d is not prime" % p)
        elif kind == "rationals":
            if p is not None:
                raise FieldError("rationals take no characteristic")
        else:
            raise FieldError("unknown field kind %r" % kind)
        self.kind = kind
        self.p = p

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def of(self, x):
        """Coerce an int, Fraction, or 'a/b' string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "prime":
            if isinstance(x, Fraction):
                return (x.numerator * self.inv(x.denominator % self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime" else -a

    def inv(self, a):
        if self.kind == "prime":
            a = int(a) % self.p
            if a == 0:
                raise ZeroDivisionError("inverse of zero in GF(%d)" % self.p)
            # p is prime, so Fermat gives the inverse
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def rand(self, rng):
        """A uniform scalar for prime fields, a small integer for Q."""
        if self.kind == "prime":
            return rng.randrange(self.p)
        return Fraction(rng.randint(-20, 20))

    def rand_nonzero(self, rng):
        while True:
            a = self.rand(rng)
            if a != 0:
                return a

    def scalar_str(self, a) -> str:
        if self.kind == "prime":
            return str(int(a))
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "GF(%d)" % self.p if self.kind == "prime" else "QQ"


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)
