"""Exact scalar fields: the rationals, prime fields and their quadratic extensions.

Elements are plain Python values in canonical form so that equality,
hashing and ordering are representational:

* ``Q``      -- :class:`fractions.Fraction` (always reduced)
* ``Fp:p``   -- ``int`` in ``range(p)``
* ``Fp2:p``  -- ``(a, b)`` with ``a, b`` in ``range(p)``, meaning ``a + b*w``
  where ``w**2`` is the least quadratic non-residue mod ``p``

Arithmetic goes through the field object (``F.mul(a, b)``), in the same
style as coefficient-list polynomial libraries.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction

from sympy import isprime
from sympy.ntheory import sqrt_mod

MIN_PRIME = 23


class FieldError(ValueError):
    pass


class Field:
    kind = None
    p = 0
    degree = 1

    # -- structure ---------------------------------------------------------
    @property
    def tag(self):
        raise NotImplementedError

    @property
    def is_finite(self):
        return self.kind != "Q"

    @property
    def characteristic(self):
        return self.p

    def __repr__(self):
        return f"Field({self.tag!r})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    # -- generic helpers ---------------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def is_zero(self, a):
        return a == self.zero

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, u, v):
        acc = self.zero
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc


class RationalField(Field):
    kind = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def tag(self):
        return "Q"

    def __call__(self, value):
        return Fraction(value)

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def key(self, a):
        return a

    def is_square(self, a):
        return self.sqrt(a) is not None

    def sqrt(self, a):
        if a < 0:
            return None
        num, den = a.numerator, a.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    def fmt(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text.strip())

    def elements(self):
        raise FieldError("the rationals are not enumerable here")


class PrimeField(Field):
    kind = "Fp"

    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1

    @property
    def tag(self):
        return f"Fp:{self.p}"

    @property
    def order(self):
        return self.p

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def key(self, a):
        return a

    def is_square(self, a):
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        """Least square root in ``range(p)``, or None for a non-residue."""
        if a == 0:
            return 0
        if not self.is_square(a):
            return None
        r = sqrt_mod(a, self.p)
        return min(r, self.p - r)

    def fmt(self, a):
        return str(a)

    def parse(self, text):
        return self(Fraction(text.strip()))

    def elements(self):
        return range(self.p)

    def random(self, rng):
        return rng.randrange(self.p)

    @functools.cached_property
    def nonresidue(self):
        return next(a for a in range(2, self.p) if not self.is_square(a))

    def extension(self):
        return quadratic_field(self.p)


class QuadraticField(Field):
    """F_{p^2} = F_p[w] / (w^2 - r), r the least non-residue."""

    kind = "Fp2"
    degree = 2

    def __init__(self, p):
        self.p = p
        self.base = prime_field(p)
        self.r = self.base.nonresidue
        self.zero = (0, 0)
        self.one = (1, 0)

    @property
    def tag(self):
        return f"Fp2:{self.p}"

    @property
    def order(self):
        return self.p * self.p

    def __call__(self, value):
        if isinstance(value, tuple):
            return (value[0] % self.p, value[1] % self.p)
        return (self.base(value), 0)

    def lift(self, a):
        return (a, 0)

    def is_base(self, a):
        return a[1] == 0

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def mul(self, a, b):
        p = self.p
        return ((a[0] * b[0] + self.r * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def neg(self, a):
        return (-a[0] % self.p, -a[1] % self.p)

    def conj(self, a):
        return (a[0], -a[1] % self.p)

    def inv(self, a):
        p = self.p
        norm = (a[0] * a[0] - self.r * a[1] * a[1]) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        ni = pow(norm, -1, p)
        return (a[0] * ni % p, -a[1] * ni % p)

    def key(self, a):
        return a

    def is_square(self, a):
        if a == self.zero:
            return True
        return self.pow(a, (self.order - 1) // 2) == self.one

    def sqrt(self, a):
        if a == self.zero:
            return self.zero
        if not self.is_square(a):
            return None
        r = _tonelli_shanks(self, a)
        return min(r, self.neg(r))

    def fmt(self, a):
        if a[1] == 0:
            return str(a[0])
        return f"{a[0]}+{a[1]}*w"

    def parse(self, text):
        text = text.replace(" ", "")
        m = re.fullmatch(r"(-?\d+)(?:\+(-?\d+)\*w)?", text)
        if not m:
            raise FieldError(f"cannot parse F_p^2 element {text!r}")
        return self((int(m.group(1)), int(m.group(2) or 0)))

    def elements(self):
        p = self.p
        return ((a, b) for b in range(p) for a in range(p))

    def random(self, rng):
        return (rng.randrange(self.p), rng.randrange(self.p))

    @functools.cached_property
    def nonresidue(self):
        return next(a for a in self.elements() if not self.is_square(a))

    def frobenius(self, a):
        return self.conj(a)


def _isqrt_exact(n):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def _tonelli_shanks(F, a):
    q = F.order
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = F.nonresidue
    m, c = s, F.pow(z, t)
    x, b = F.pow(a, (t + 1) // 2), F.pow(a, t)
    while b != F.one:
        i, b2 = 0, b
        while b2 != F.one:
            b2, i = F.mul(b2, b2), i + 1
        for _ in range(m - i - 1):
            c = F.mul(c, c)
        x, c = F.mul(x, c), F.mul(c, c)
        b, m = F.mul(b, c), i
    return x


QQ = RationalField()


@functools.cache
def prime_field(p):
    if not isprime(p):
        raise FieldError(f"{p} is not prime")
    if p < MIN_PRIME:
        raise FieldError(f"prime {p} is below the supported minimum {MIN_PRIME}")
    return PrimeField(p)


@functools.cache
def quadratic_field(p):
    prime_field(p)
    return QuadraticField(p)


def field_from_tag(tag):
    """Parse ``Q``, ``Fp:101`` or ``Fp2:101``."""
    tag = tag.strip()
    if tag == "Q":
        return QQ
    m = re.fullmatch(r"(Fp2?):(\d+)", tag)
    if not m:
        raise FieldError(f"unknown field tag {tag!r}")
    p = int(m.group(2))
    return prime_field(p) if m.group(1) == "Fp" else quadratic_field(p)
