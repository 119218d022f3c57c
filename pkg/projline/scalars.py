"""Exact field arithmetic: prime fields GF(p) and the rationals.

Scalars are immutable and always held in canonical form (a residue in
``[0, p)`` or a reduced ``Fraction``), so ``==`` and ``hash`` are structural.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from sympy import isprime

from projline.errors import (
    ContextMismatch,
    DivisionByZero,
    NotEnumerable,
    NotPrime,
    UsageError,
)

PRIME = "prime"
RATIONAL = "rational"
MAX_MODULUS = 2**31

Number = Union[int, Fraction, "Scalar"]


@dataclass(frozen=True)
class FieldContext:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == PRIME:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise NotPrime(f"Modulus must be an integer, got {self.p!r}.")
            if self.p < 2 or self.p > MAX_MODULUS or not isprime(self.p):
                raise NotPrime(f"{self.p} is not a prime in [2, 2^31].")
        elif self.kind == RATIONAL:
            if self.p is not None:
                raise UsageError("The rational context takes no modulus.")
        else:
            raise UsageError(f"Unknown field kind '{self.kind}'.")

    @classmethod
    def prime(cls, p: int) -> "FieldContext":
        return cls(PRIME, p)

    @classmethod
    def rational(cls) -> "FieldContext":
        return cls(RATIONAL)

    @classmethod
    def parse(cls, text: str) -> "FieldContext":
        text = str(text).strip()
        if text.lower() in ("rational", "q"):
            return cls.rational()
        try:
            p = int(text)
        except ValueError:
            raise UsageError(f"Cannot read a field from '{text}'.")
        return cls.prime(p)

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    def __str__(self):
        return f"GF({self.p})" if self.is_prime else "Q"

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ctx != self:
                raise ContextMismatch(f"{value!r} does not live in {self}.")
            return value
        if isinstance(value, str):
            return Scalar.from_string(self, value)
        return Scalar(self, value)

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, 0)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, 1)

    @property
    def minus_one(self) -> "Scalar":
        return Scalar(self, -1)


def _canonical(ctx: FieldContext, value):
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"Cannot build a scalar from {value!r}.")
    if ctx.kind == RATIONAL:
        return Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator % ctx.p == 0:
            raise DivisionByZero(f"{value} has no image in {ctx}.")
        return value.numerator * pow(value.denominator, -1, ctx.p) % ctx.p
    return value % ctx.p


@dataclass(frozen=True)
class Scalar:
    ctx: FieldContext
    value: Union[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "value", _canonical(self.ctx, self.value))

    @classmethod
    def from_string(cls, ctx: FieldContext, text: str) -> "Scalar":
        text = text.strip()
        try:
            if "/" in text:
                num, den = (int(part) for part in text.split("/", 1))
            else:
                num, den = int(text), 1
        except ValueError:
            raise UsageError(f"Cannot read a scalar of {ctx} from '{text}'.")
        if den == 0:
            raise DivisionByZero(f"'{text}' divides by zero.")
        return cls(ctx, Fraction(num, den) if den != 1 else num)

    def __str__(self):
        if self.ctx.is_prime:
            return str(self.value)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self):
        return f"Scalar({self}, {self.ctx})"

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"Cannot combine {self!r} with {other!r}.")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar(self.ctx, other)
        return NotImplemented

    def _binary(self, other, op, reflected=False):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        left, right = (other, self) if reflected else (self, other)
        return Scalar(self.ctx, op(left.value, right.value))

    def __add__(self, other):
        return self._binary(other, operator.add)

    def __radd__(self, other):
        return self._binary(other, operator.add, reflected=True)

    def __sub__(self, other):
        return self._binary(other, operator.sub)

    def __rsub__(self, other):
        return self._binary(other, operator.sub, reflected=True)

    def __mul__(self, other):
        return self._binary(other, operator.mul)

    def __rmul__(self, other):
        return self._binary(other, operator.mul, reflected=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return Scalar(self.ctx, -self.value)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if self.ctx.is_prime:
            return Scalar(self.ctx, pow(self.value, exponent, self.ctx.p))
        return Scalar(self.ctx, self.value**exponent)

    def __bool__(self):
        return self.value != 0

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise DivisionByZero(f"0 has no inverse in {self.ctx}.")
        if self.ctx.is_prime:
            return Scalar(self.ctx, pow(self.value, -1, self.ctx.p))
        return Scalar(self.ctx, 1 / self.value)


_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
    "eq": operator.eq,
}


def scalar_arith(op: str, x: Scalar, y: Optional[Scalar] = None) -> Union[Scalar, bool]:
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    if op not in _ARITH:
        raise UsageError(f"Unknown scalar operation '{op}'.")
    if y is None:
        raise UsageError(f"'{op}' takes two operands.")
    if x.ctx != y.ctx:
        raise ContextMismatch(f"Cannot combine {x!r} with {y!r}.")
    return _ARITH[op](x, y)


def enumerate_scalars(ctx: FieldContext) -> Tuple[Scalar, ...]:
    if not ctx.is_prime:
        raise NotEnumerable("The rational field cannot be enumerated.")
    return tuple(Scalar(ctx, v) for v in range(ctx.p))


def nonzero_scalars(ctx: FieldContext) -> Tuple[Scalar, ...]:
    return enumerate_scalars(ctx)[1:]
