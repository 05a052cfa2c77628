"""Exact scalars: the rationals and the quadratic fields Q[x]/(p).

Rationals are ``gmpy2.mpq`` values.  A quadratic field stores irrational
elements as pairs ``(c0, c1)`` meaning ``c0 + c1*x`` with
``x**2 = -a1*x - a0`` where ``p(x) = x**2 + a1*x + a0``.  Rational values
are kept as plain ``mpq`` in every field, so computations that never leave
Q run at rational speed.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["Field", "QuadraticElement", "RATIONALS", "SQRT2", "EISENSTEIN", "mpq", "field_for"]


def _rat(value) -> mpq:
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
        return mpq(value)
    raise TypeError(f"not a rational: {value!r}")


_MPQ = type(mpq(0))
_ZERO = mpq(0)


def _make(c0, c1, field):
    return c0 if c1 == 0 else QuadraticElement(c0, c1, field)


class QuadraticElement:
    """An element ``c0 + c1*x`` of a quadratic field."""

    __slots__ = ("c0", "c1", "field")

    def __init__(self, c0, c1, field: "Field"):
        self.c0 = c0
        self.c1 = c1
        self.field = field

    def _lift(self, other):
        if isinstance(other, QuadraticElement):
            if other.field is not self.field:
                raise ValueError("mixing scalars from different fields")
            return other
        return QuadraticElement(_rat(other), _ZERO, self.field)

    def __add__(self, other):
        if type(other) is _MPQ:
            return QuadraticElement(self.c0 + other, self.c1, self.field)
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return _make(self.c0 + o.c0, self.c1 + o.c1, self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(-self.c0, -self.c1, self.field)

    def __sub__(self, other):
        if type(other) is _MPQ:
            return QuadraticElement(self.c0 - other, self.c1, self.field)
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return _make(self.c0 - o.c0, self.c1 - o.c1, self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is _MPQ:
            if not other:
                return other
            return QuadraticElement(self.c0 * other, self.c1 * other, self.field)
        if not isinstance(other, QuadraticElement):
            try:
                r = _rat(other)
            except TypeError:
                return NotImplemented
            return _make(self.c0 * r, self.c1 * r, self.field)
        if other.field is not self.field:
            raise ValueError("mixing scalars from different fields")
        f = self.field
        bd = self.c1 * other.c1
        return _make(
            self.c0 * other.c0 - bd * f.a0,
            self.c0 * other.c1 + self.c1 * other.c0 - bd * f.a1,
            f,
        )

    __rmul__ = __mul__

    def norm(self) -> mpq:
        a0, a1 = self.field.a0, self.field.a1
        return self.c0 * self.c0 - self.c0 * self.c1 * a1 + self.c1 * self.c1 * a0

    def inverse(self) -> "QuadraticElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        conj0 = self.c0 - self.c1 * self.field.a1
        return QuadraticElement(conj0 / n, -self.c1 / n, self.field)

    def __truediv__(self, other):
        if isinstance(other, QuadraticElement):
            return self * other.inverse()
        return _make(self.c0 / _rat(other), self.c1 / _rat(other), self.field)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = mpq(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadraticElement):
            return self.field is other.field and self.c0 == other.c0 and self.c1 == other.c1
        try:
            return self.c1 == 0 and self.c0 == _rat(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.c0) if self.c1 == 0 else hash((self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0) or bool(self.c1)

    def __repr__(self):
        return f"{self.field.name}({self.c0}, {self.c1})"


class Field:
    """Exact base field: plain rationals or a quadratic extension.

    ``minpoly`` is ``(a0, a1)`` for ``x**2 + a1*x + a0``, or ``None`` for Q.
    """

    def __init__(self, name: str, minpoly: tuple[int, int] | None = None, generator: str = "x"):
        self.name = name
        self.minpoly = minpoly
        self.generator = generator
        if minpoly is not None:
            self.a0, self.a1 = mpq(minpoly[0]), mpq(minpoly[1])
        self.zero = self(0)
        self.one = self(1)

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else 2

    def __call__(self, value):
        if isinstance(value, QuadraticElement):
            if self.minpoly is None:
                if value.c1:
                    raise ValueError(f"{value!r} is not rational")
                return value.c0
            if value.field is not self:
                raise ValueError("scalar from another field")
            return value
        if isinstance(value, (tuple, list)):
            if self.minpoly is None:
                if len(value) == 2 and _rat(value[1]) != 0:
                    raise ValueError("irrational value in Q")
                return _rat(value[0])
            return _make(_rat(value[0]), _rat(value[1]), self)
        return _rat(value)

    @property
    def gen(self):
        if self.minpoly is None:
            raise ValueError("Q has no adjoined generator")
        return QuadraticElement(mpq(0), mpq(1), self)

    def components(self, x) -> tuple:
        x = self(x)
        if self.minpoly is None:
            return (x,)
        if isinstance(x, QuadraticElement):
            return (x.c0, x.c1)
        return (x, mpq(0))

    def is_rational(self, x) -> bool:
        return not isinstance(x, QuadraticElement) or x.c1 == 0

    def root_of_unity(self, m: int):
        """A fixed primitive m-th root of unity, for m in {1, 2, 3}."""
        if m == 1:
            return self.one
        if m == 2:
            return -self.one
        if m == 3 and self.minpoly == (1, 1):
            return self.gen
        raise ValueError(f"{self.name} has no chosen primitive {m}-th root of unity")

    def sqrt(self, n: int):
        """Square root of a small positive integer when it lies in the field."""
        if n in (0, 1, 4, 9):
            return self(int(round(n ** 0.5)))
        if n == 2 and self.minpoly == (-2, 0):
            return self.gen
        raise ValueError(f"sqrt({n}) is not in {self.name}")

    def encode(self, x) -> str:
        """String form: "p/q" for rationals, "[c0, c1]" for extension elements."""
        comps = self.components(x)
        if self.minpoly is None:
            return str(comps[0])
        return f"[{comps[0]}, {comps[1]}]"

    def parse(self, text):
        text = text.strip() if isinstance(text, str) else text
        if isinstance(text, str) and text.startswith("["):
            return self([p.strip() for p in text.strip("[]").split(",")])
        return self(text)

    def sort_key(self, x) -> tuple:
        return tuple(self.components(x))

    def __repr__(self):
        return f"Field({self.name})"


RATIONALS = Field("Q")
SQRT2 = Field("Q(sqrt2)", (-2, 0), "sqrt2")
EISENSTEIN = Field("Q(eta)", (1, 1), "eta")


def field_for(minpoly: str) -> Field:
    """Look up a shipped field by its minimal polynomial label."""
    table = {"x": RATIONALS, "x^2-2": SQRT2, "x^2+x+1": EISENSTEIN}
    try:
        return table[minpoly]
    except KeyError:
        raise ValueError(f"unsupported minimal polynomial {minpoly!r}") from None
