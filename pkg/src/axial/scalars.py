"""Exact scalar rings: rationals, odd prime fields, quadratic extensions, dual numbers.

A ring object owns the arithmetic; its elements are plain values:

* ``Rationals``          -> ``gmpy2.mpq``
* ``PrimeField(p)``      -> ``int`` in ``[0, p)``
* ``QuadraticExtension`` -> ``QuadElem``
* ``DualNumbers``        -> ``DualElem``

Every element type supports Python's ``+ - *`` so that hot loops can
accumulate with native operators and canonicalise once via ``ring.reduce``.
Prime-field ints may grow unreduced inside such a loop; that is exact since
Python ints are unbounded.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator

import gmpy2
from gmpy2 import mpq

MPQ = type(mpq(0))


class FieldError(Exception):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class FieldMismatch(FieldError, TypeError):
    pass


class NotIrreducible(FieldError, ValueError):
    pass


def _as_fraction(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, MPQ):
        return Fraction(int(value.numerator), int(value.denominator))
    return Fraction(value)


class Ring:
    """Common interface. Subclasses fill in the carrier-specific pieces."""

    characteristic: int = 0
    is_field = True

    # -- construction -----------------------------------------------------
    def __call__(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def half(self):
        return self._half

    def reduce(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise FieldMismatch(f"{x!r} is not an element of {self}")

    # -- arithmetic -------------------------------------------------------
    def add(self, a, b):
        self.check(a, b)
        return self.reduce(a + b)

    def sub(self, a, b):
        self.check(a, b)
        return self.reduce(a - b)

    def neg(self, a):
        self.check(a)
        return self.reduce(-a)

    def mul(self, a, b):
        self.check(a, b)
        return self.reduce(a * b)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.reduce(result * base)
            base = self.reduce(base * base)
            k >>= 1
        return result

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.is_zero(self.reduce(a - b))

    # -- enumeration / sampling -------------------------------------------
    @property
    def order(self) -> int | None:
        """Number of elements, or None for infinite rings."""
        return None

    def elements(self) -> Iterator:
        raise FieldError(f"{self} is infinite")

    def random(self, rng: random.Random):
        raise NotImplementedError

    def sqrt(self, x):
        """A square root of ``x`` in this field, or None."""
        raise NotImplementedError

    def embed(self, x):
        """Map an element of a subring (or a rational constant) into this ring."""
        return self(x)

    # -- serialisation ----------------------------------------------------
    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, obj):
        return self(obj)

    def spec(self) -> dict:
        raise NotImplementedError

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


class Rationals(Ring):
    characteristic = 0

    def __init__(self):
        self._zero = mpq(0)
        self._one = mpq(1)
        self._half = mpq(1, 2)

    def __call__(self, value):
        if isinstance(value, MPQ):
            return value
        if isinstance(value, int):
            return mpq(value)
        if isinstance(value, (str, Fraction)):
            f = _as_fraction(value)
            return mpq(f.numerator, f.denominator)
        if isinstance(value, (QuadElem, DualElem)):
            raise FieldMismatch(f"{value!r} is not rational")
        raise TypeError(f"refusing inexact or unknown scalar {value!r}")

    def reduce(self, x):
        return x if isinstance(x, MPQ) else mpq(x)

    def contains(self, x):
        return isinstance(x, (MPQ, int)) and not isinstance(x, bool)

    def inv(self, a):
        self.check(a)
        if a == 0:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / mpq(a)

    def is_zero(self, x):
        return x == 0

    def random(self, rng):
        return mpq(rng.randint(-9, 9), rng.randint(1, 9))

    def sqrt(self, x):
        x = mpq(x)
        if x < 0:
            return None
        num, den = gmpy2.mpz(x.numerator), gmpy2.mpz(x.denominator)
        if gmpy2.is_square(num) and gmpy2.is_square(den):
            return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
        return None

    def to_json(self, x):
        return str(mpq(x))

    def spec(self):
        return {"kind": "Q"}

    def _key(self):
        return ("Q",)

    def __repr__(self):
        return "Q"


class PrimeField(Ring):
    def __init__(self, p: int):
        p = int(p)
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if p < 3 or p >= 2**31 or not gmpy2.is_prime(p):
            raise FieldError(f"{p} is not an odd prime below 2^31")
        self.p = p
        self.characteristic = p
        self._zero = 0
        self._one = 1
        self._half = (p + 1) // 2

    def __call__(self, value):
        if isinstance(value, bool):
            raise FieldMismatch("bool is not a field element")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, (QuadElem, DualElem)):
            raise FieldMismatch(f"{value!r} is not in F_{self.p}")
        f = _as_fraction(value)
        if f.denominator % self.p == 0:
            raise DivisionByZero(f"{value} has denominator divisible by {self.p}")
        return f.numerator * pow(f.denominator, -1, self.p) % self.p

    def reduce(self, x):
        return x % self.p

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.p

    def inv(self, a):
        self.check(a)
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, x):
        return x % self.p == 0

    @property
    def order(self):
        return self.p

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def sqrt(self, x):
        x %= self.p
        if x == 0:
            return 0
        if pow(x, (self.p - 1) // 2, self.p) != 1:
            return None
        from sympy.ntheory import sqrt_mod

        return int(sqrt_mod(x, self.p))

    def to_json(self, x):
        return int(x)

    def spec(self):
        return {"kind": "Fp", "p": self.p}

    def _key(self):
        return ("Fp", self.p)

    def __repr__(self):
        return f"F{self.p}"


class QuadElem:
    """``c0 + c1*t`` in ``base[t]/(t^2 + m1*t + m0)``."""

    __slots__ = ("c0", "c1", "field")

    def __init__(self, c0, c1, field: "QuadraticExtension"):
        self.c0 = c0
        self.c1 = c1
        self.field = field

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatch(f"{other.field} vs {self.field}")
        return self.field.embed(other)

    def __add__(self, other):
        o = self._coerce(other)
        b = self.field.base
        return QuadElem(b.reduce(self.c0 + o.c0), b.reduce(self.c1 + o.c1), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        b = self.field.base
        return QuadElem(b.reduce(self.c0 - o.c0), b.reduce(self.c1 - o.c1), self.field)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        b = self.field.base
        return QuadElem(b.reduce(-self.c0), b.reduce(-self.c1), self.field)

    def __mul__(self, other):
        F = self.field
        b = F.base
        if not isinstance(other, QuadElem):
            if isinstance(other, DualElem):
                return NotImplemented
            s = b(other) if not b.contains(other) else other
            return QuadElem(b.reduce(self.c0 * s), b.reduce(self.c1 * s), F)
        o = self._coerce(other)
        a0, a1, b0, b1 = self.c0, self.c1, o.c0, o.c1
        hh = a1 * b1
        # t^2 = -m1 t - m0
        return QuadElem(
            b.reduce(a0 * b0 - F.m0 * hh),
            b.reduce(a0 * b1 + a1 * b0 - F.m1 * hh),
            F,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.field == other.field and self.c0 == other.c0 and self.c1 == other.c1
        if isinstance(other, (int, MPQ, Fraction)):
            return self.c1 == 0 and self.c0 == self.field.base(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __repr__(self):
        return f"({self.c0} + {self.c1}*t)"


class QuadraticExtension(Ring):
    """``base[t] / (t^2 + m1 t + m0)`` for an irreducible minimal polynomial."""

    def __init__(self, base: Ring, m0, m1=0, *, check: bool = True):
        if not isinstance(base, (Rationals, PrimeField)):
            raise FieldError("quadratic extensions are only built over Q or F_p")
        self.base = base
        self.m0 = base(m0)
        self.m1 = base(m1)
        self.characteristic = base.characteristic
        if check and _has_root(base, self.m0, self.m1):
            raise NotIrreducible(f"t^2 + {self.m1} t + {self.m0} has a root in {base}")
        self._zero = QuadElem(base.zero, base.zero, self)
        self._one = QuadElem(base.one, base.zero, self)
        self._half = QuadElem(base.half, base.zero, self)
        self.t = QuadElem(base.zero, base.one, self)

    def __call__(self, value):
        if isinstance(value, QuadElem):
            if value.field == self:
                return value
            raise FieldMismatch(f"{value!r} not in {self}")
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return QuadElem(self.base(value[0]), self.base(value[1]), self)
        return QuadElem(self.base(value), self.base.zero, self)

    def embed(self, x):
        if isinstance(x, QuadElem):
            if x.field == self:
                return x
            raise FieldMismatch(f"cannot embed {x!r} into {self}")
        return QuadElem(self.base(x), self.base.zero, self)

    def reduce(self, x):
        if isinstance(x, QuadElem):
            return x
        return self.embed(x)

    def contains(self, x):
        return isinstance(x, QuadElem) and x.field == self

    def norm(self, x):
        b = self.base
        return b.reduce(x.c0 * x.c0 - self.m1 * x.c0 * x.c1 + self.m0 * x.c1 * x.c1)

    def conj(self, x):
        b = self.base
        return QuadElem(b.reduce(x.c0 - self.m1 * x.c1), b.reduce(-x.c1), self)

    def inv(self, a):
        self.check(a)
        n = self.norm(a)
        if self.base.is_zero(n):
            raise DivisionByZero(f"inverse of 0 in {self}")
        return self.conj(a) * self.base.inv(n)

    def is_zero(self, x):
        b = self.base
        return b.is_zero(x.c0) and b.is_zero(x.c1)

    @property
    def order(self):
        q = self.base.order
        return None if q is None else q * q

    def elements(self):
        base_elems = list(self.base.elements())
        for c0 in base_elems:
            for c1 in base_elems:
                yield QuadElem(c0, c1, self)

    def random(self, rng):
        return QuadElem(self.base.random(rng), self.base.random(rng), self)

    def sqrt(self, x):
        """Square root via the base field after completing the square.

        With ``s = t + m1/2`` we have ``s^2 = d`` for ``d = m1^2/4 - m0``, and
        ``(x + y s)^2 = (x^2 + d y^2) + 2xy s``.
        """
        b = self.base
        if self.is_zero(x):
            return self.zero
        h = b.half
        shift = b.reduce(self.m1 * h)
        d = b.reduce(shift * shift - self.m0)
        # x = A + B s  with s = t + shift
        A = b.reduce(x.c0 - x.c1 * shift)
        B = x.c1
        s_elem = QuadElem(shift, b.one, self)

        def build(px, py):
            return self.reduce(self.embed(px) + s_elem * py)

        if b.is_zero(B):
            r = b.sqrt(A)
            if r is not None:
                return build(r, b.zero)
            r = b.sqrt(b.div(A, d))
            return None if r is None else build(b.zero, r)
        # y^2 = Y solves d Y^2 - A Y + B^2/4 = 0
        disc = b.reduce(A * A - d * B * B)
        rd = b.sqrt(disc)
        if rd is None:
            return None
        inv2d = b.inv(b.reduce(2 * d))
        for sign in (1, -1):
            Y = b.reduce((A + sign * rd) * inv2d)
            y = b.sqrt(Y)
            if y is None or b.is_zero(y):
                continue
            xx = b.div(B, b.reduce(2 * y))
            cand = build(xx, y)
            if self.is_zero(self.reduce(cand * cand - x)):
                return cand
        return None

    def to_json(self, x):
        return [self.base.to_json(x.c0), self.base.to_json(x.c1)]

    def spec(self):
        return {
            "kind": "Quad",
            "base": self.base.spec(),
            "minpoly": [self.base.to_json(self.m0), self.base.to_json(self.m1)],
        }

    def _key(self):
        return ("Quad", self.base._key(), self.m0, self.m1)

    def __repr__(self):
        return f"{self.base}[t]/(t^2+{self.m1}t+{self.m0})"


class DualElem:
    """``re + eps*ε`` with ``ε^2 = 0``."""

    __slots__ = ("re", "eps", "ring")

    def __init__(self, re, eps, ring: "DualNumbers"):
        self.re = re
        self.eps = eps
        self.ring = ring

    def _coerce(self, other):
        if isinstance(other, DualElem):
            if other.ring == self.ring:
                return other
            raise FieldMismatch(f"{other.ring} vs {self.ring}")
        return self.ring.embed(other)

    def __add__(self, other):
        o = self._coerce(other)
        b = self.ring.base
        return DualElem(b.reduce(self.re + o.re), b.reduce(self.eps + o.eps), self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        b = self.ring.base
        return DualElem(b.reduce(self.re - o.re), b.reduce(self.eps - o.eps), self.ring)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        b = self.ring.base
        return DualElem(b.reduce(-self.re), b.reduce(-self.eps), self.ring)

    def __mul__(self, other):
        o = self._coerce(other)
        b = self.ring.base
        return DualElem(
            b.reduce(self.re * o.re),
            b.reduce(self.re * o.eps + self.eps * o.re),
            self.ring,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, DualElem):
            return self.ring == other.ring and self.re == other.re and self.eps == other.eps
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.eps))

    def __repr__(self):
        return f"({self.re} + {self.eps}ε)"


class DualNumbers(Ring):
    """The ring ``base[ε]/(ε^2)``; not a field."""

    is_field = False

    def __init__(self, base: Ring):
        self.base = base
        self.characteristic = base.characteristic
        self._zero = DualElem(base.zero, base.zero, self)
        self._one = DualElem(base.one, base.zero, self)
        self._half = DualElem(base.half, base.zero, self)
        self.epsilon = DualElem(base.zero, base.one, self)

    def __call__(self, value):
        if isinstance(value, DualElem):
            if value.ring == self:
                return value
            raise FieldMismatch(f"{value!r} not in {self}")
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return DualElem(self.base(value[0]), self.base(value[1]), self)
        return DualElem(self.base(value), self.base.zero, self)

    def embed(self, x):
        if isinstance(x, DualElem):
            return self(x)
        return DualElem(self.base.reduce(self.base(x) if not self.base.contains(x) else x),
                        self.base.zero, self)

    def make(self, re, eps):
        return DualElem(self.base.reduce(re), self.base.reduce(eps), self)

    def reduce(self, x):
        return x if isinstance(x, DualElem) else self.embed(x)

    def contains(self, x):
        return isinstance(x, DualElem) and x.ring == self

    def inv(self, a):
        self.check(a)
        b = self.base
        if b.is_zero(a.re):
            raise DivisionByZero(f"{a!r} is not a unit of {self}")
        r = b.inv(a.re)
        return DualElem(r, b.reduce(-a.eps * r * r), self)

    def is_zero(self, x):
        return self.base.is_zero(x.re) and self.base.is_zero(x.eps)

    @property
    def order(self):
        q = self.base.order
        return None if q is None else q * q

    def random(self, rng):
        return DualElem(self.base.random(rng), self.base.random(rng), self)

    def sqrt(self, x):
        raise FieldError("square roots are not defined for dual numbers")

    def to_json(self, x):
        return [self.base.to_json(x.re), self.base.to_json(x.eps)]

    def spec(self):
        return {"kind": "Dual", "base": self.base.spec()}

    def _key(self):
        return ("Dual", self.base._key())

    def __repr__(self):
        return f"{self.base}[ε]"


def _has_root(base: Ring, m0, m1) -> bool:
    """Whether ``t^2 + m1 t + m0`` has a root in ``base``."""
    if base.order is not None and base.order <= 10**6:
        return any(base.is_zero(base.reduce(x * x + m1 * x + m0)) for x in base.elements())
    if isinstance(base, Rationals):
        # clear denominators: s = d t gives the monic integer form s^2 + B s + C;
        # a rational root of it is an integer, which exists iff B^2 - 4C is a square
        f0, f1 = _as_fraction(m0), _as_fraction(m1)
        d = f0.denominator * f1.denominator
        B = int(f1 * d)
        C = int(f0 * d * d)
        disc = B * B - 4 * C
        return disc >= 0 and gmpy2.is_square(disc)
    disc = base.reduce(m1 * m1 - 4 * m0)
    return base.sqrt(disc) is not None


def quadratic_closure_step(base: Ring, d) -> QuadraticExtension:
    """The extension ``base(sqrt(d))`` for a non-square ``d``."""
    return QuadraticExtension(base, base.reduce(-base(d)), 0)


def non_square(field: Ring):
    """Smallest non-square of a finite prime field."""
    for x in range(2, field.characteristic):
        if field.sqrt(field(x)) is None:
            return field(x)
    raise FieldError(f"{field} has no non-square")


def finite_extension_of_degree_two(field: PrimeField) -> QuadraticExtension:
    return quadratic_closure_step(field, non_square(field))


# -- field specs ------------------------------------------------------------

def field_from_spec(obj) -> Ring:
    """Parse ``{"kind": "Q"}``, ``{"kind": "Fp", "p": 5}``, ``{"kind": "Quad", ...}``
    or the CLI shorthands ``"Q"`` and ``"Fp:5"``."""
    if isinstance(obj, Ring):
        return obj
    if isinstance(obj, str):
        s = obj.strip()
        if s.upper() in ("Q", "QQ"):
            return Rationals()
        if s.lower().startswith("fp:") or s.lower().startswith("f"):
            digits = s.split(":", 1)[1] if ":" in s else s[1:]
            return PrimeField(int(digits))
        raise FieldError(f"unrecognised field {obj!r}")
    kind = obj.get("kind")
    if kind == "Q":
        return Rationals()
    if kind == "Fp":
        return PrimeField(obj["p"])
    if kind == "Quad":
        base = field_from_spec(obj["base"])
        m0, m1 = obj["minpoly"]
        return QuadraticExtension(base, base.from_json(m0), base.from_json(m1))
    if kind == "Dual":
        return DualNumbers(field_from_spec(obj["base"]))
    raise FieldError(f"unknown field kind {kind!r}")


# -- spec-level function aliases ------------------------------------------

def field_add(F: Ring, a, b):
    return F.add(a, b)


def field_mul(F: Ring, a, b):
    return F.mul(a, b)


def field_inv(F: Ring, a):
    return F.inv(a)


def multiplicative_order(F: Ring, x, bound: int) -> int | None:
    """Least ``n <= bound`` with ``x^n = 1``, else None."""
    if F.is_zero(x):
        return None
    y = x
    for n in range(1, bound + 1):
        if F.eq(y, F.one):
            return n
        y = F.reduce(y * x)
    return None
