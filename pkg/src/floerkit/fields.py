"""Exact coefficient fields.

Three fields are supported: the two-element field, the rationals, and the
field of rational functions in one variable ``T`` over either of those (used
for twisted coefficients).  Elements are plain Python objects; all arithmetic
goes through the field object so the linear algebra stays generic.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import GF, QQ
from sympy.polys.fields import field as _sympy_field


class Field:
    name = "abstract"

    def coerce(self, n):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def __repr__(self):
        return f"<field {self.name}>"

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class _F2(Field):
    name = "F2"

    def coerce(self, n):
        return int(n) & 1

    def add(self, a, b):
        return a ^ b

    sub = add

    def mul(self, a, b):
        return a & b

    def neg(self, a):
        return a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1


class _Q(Field):
    name = "Q"

    def coerce(self, n):
        return Fraction(n)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)


class RationalFunctions(Field):
    """Fraction field ``base(T)`` of the Laurent polynomial ring ``base[T, 1/T]``."""

    def __init__(self, base: Field):
        self.base = base
        self.name = f"{base.name}(T)"
        domain = GF(2) if base.name == "F2" else QQ
        self._K, self.T = _sympy_field("T", domain)

    def coerce(self, n):
        if isinstance(n, Fraction):
            return self._K(QQ(n.numerator, n.denominator))
        return self._K(int(n)) if isinstance(n, int) else self._K(n)

    def is_zero(self, a) -> bool:
        return not a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return self._K.one / a


F2 = _F2()
Q = _Q()

_RF_CACHE: dict[str, RationalFunctions] = {}


def rational_functions(base: Field) -> RationalFunctions:
    if base.name not in _RF_CACHE:
        _RF_CACHE[base.name] = RationalFunctions(base)
    return _RF_CACHE[base.name]


def field_by_name(name: str) -> Field:
    key = name.strip().upper()
    if key == "F2":
        return F2
    if key == "Q":
        return Q
    raise ValueError(f"unknown coefficient field {name!r} (expected F2 or Q)")
