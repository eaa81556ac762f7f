"""Dense univariate polynomials and rational functions over two coefficient fields.

Two field tags exist and never mix inside one operation:

* ``"exact"`` -- Gaussian rationals, a pair of ``fractions.Fraction`` values
  (real and imaginary part).  Every operation is exact; equality is exact.
* ``"float"`` -- IEEE complex doubles.

Representation invariants:

* ``Poly.coeffs`` is a tuple in ascending order of powers; the leading
  coefficient is nonzero unless the polynomial is zero, which is stored as the
  empty tuple (``degree == -1``).
* ``RationalFn`` produced by :func:`simplify` has, in the exact field, a monic
  denominator and numerator/denominator with no common factor; in the float
  field only the leading denominator coefficient is scaled to 1.

Evaluation points are real (the interpolation variable), but coefficients and
values are complex; ``conjugate`` flips coefficient signs so that Hermitian
inner products of polynomial vectors stay inside the ring.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    FieldMismatchError,
    PoleError,
    UnsupportedFieldError,
    ValidationError,
    ZeroDenominatorError,
)

EXACT = "exact"
FLOAT = "float"

_FractionLike = Union[int, Fraction]


class GaussianRational:
    """Complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: _FractionLike = 0, im: _FractionLike = 0):
        object.__setattr__(self, "re", re if isinstance(re, Fraction) else Fraction(re))
        object.__setattr__(self, "im", im if isinstance(im, Fraction) else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        """Exact lift of a binary float; no rounding is involved."""
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(value[0], value[1])
        raise ValidationError(f"cannot coerce {value!r} to GaussianRational")

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        d = other.abs_sq()
        if not d:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except ValidationError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: ``"a/b+c/d*i"`` with optional denominators."""
        s = text.strip()
        if not s.endswith("*i"):
            raise ValidationError(f"bad coefficient string {text!r}")
        s = s[:-2]
        for pos in range(len(s) - 1, 0, -1):
            if s[pos] in "+-" and s[pos - 1] not in "+-/":
                re_part, sign, im_part = s[:pos], s[pos], s[pos + 1 :]
                im = Fraction(im_part)
                return cls(Fraction(re_part), -im if sign == "-" else im)
        raise ValidationError(f"bad coefficient string {text!r}")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def _as_exact_scalar(value) -> GaussianRational:
    return GaussianRational.coerce(value)


def _as_float_scalar(value) -> complex:
    if isinstance(value, GaussianRational):
        raise FieldMismatchError("exact scalar used in float context")
    return complex(value)


class Poly:
    """Immutable dense polynomial; construct via :meth:`exact` or :meth:`floating`."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, field: str):
        if field not in (EXACT, FLOAT):
            raise ValidationError(f"unknown field tag {field!r}")
        coeffs = list(coeffs)
        while coeffs and (coeffs[-1].is_zero if field == EXACT else coeffs[-1] == 0):
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def exact(cls, coeffs: Iterable) -> "Poly":
        return cls([_as_exact_scalar(c) for c in coeffs], EXACT)

    @classmethod
    def floating(cls, coeffs: Iterable) -> "Poly":
        return cls([_as_float_scalar(c) for c in coeffs], FLOAT)

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _zero_scalar(self):
        return ZERO if self.field == EXACT else 0j

    def _one_scalar(self):
        return ONE if self.field == EXACT else 1 + 0j

    def _check_field(self, other: "Poly"):
        if self.field != other.field:
            raise FieldMismatchError(
                f"mixed fields {self.field!r} and {other.field!r}"
            )

    def __add__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self._zero_scalar()
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self.field)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.field)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check_field(other)
        if self.is_zero or other.is_zero:
            return Poly([], self.field)
        zero = self._zero_scalar()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar) -> "Poly":
        scalar = (
            _as_exact_scalar(scalar) if self.field == EXACT else _as_float_scalar(scalar)
        )
        return Poly([c * scalar for c in self.coeffs], self.field)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __call__(self, theta):
        """Horner evaluation; theta is real (int/Fraction or float per field)."""
        if self.field == EXACT:
            x = _as_exact_scalar(theta)
            acc = ZERO
        else:
            x = complex(theta)
            acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def conjugate(self) -> "Poly":
        """Coefficient-wise conjugate; equals pointwise conjugation on real theta."""
        return Poly([c.conjugate() for c in self.coeffs], self.field)

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs], self.field)

    def __divmod__(self, other: "Poly"):
        self._check_field(other)
        if self.field != EXACT:
            raise UnsupportedFieldError("polynomial division is exact-field only")
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = other.degree
        lead = other.coeffs[-1]
        quo = [ZERO] * max(len(rem) - dn, 0)
        for k in range(len(rem) - dn - 1, -1, -1):
            c = rem[k + dn] / lead
            quo[k] = c
            if not c.is_zero:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quo, EXACT), Poly(rem[:dn], EXACT)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def to_float(self) -> "Poly":
        if self.field == FLOAT:
            return self
        return Poly([c.to_complex() for c in self.coeffs], FLOAT)

    def to_jsonable(self):
        """Coefficient list: strings in the exact field, [re, im] pairs in float."""
        if self.field == EXACT:
            return [str(c) for c in self.coeffs]
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_jsonable(cls, data, field: str) -> "Poly":
        if field == EXACT:
            return cls.exact([GaussianRational.parse(s) for s in data])
        return cls.floating([complex(re, im) for re, im in data])

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r}, field={self.field!r})"


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic Euclidean gcd; gcd(p, 0) is monic(p), gcd(0, 0) is 0."""
    if a.field != EXACT or b.field != EXACT:
        raise UnsupportedFieldError("gcd is exact-field only")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


class PolyVector:
    """Column of polynomials over one shared field."""

    __slots__ = ("entries", "field")

    def __init__(self, entries: Sequence[Poly]):
        entries = tuple(entries)
        if not entries:
            raise ValidationError("empty PolyVector")
        field = entries[0].field
        for e in entries:
            if e.field != field:
                raise FieldMismatchError("PolyVector entries must share one field")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("PolyVector is immutable")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector([a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, p: Poly) -> "PolyVector":
        return PolyVector([p * e for e in self.entries])

    def inner(self, other: "PolyVector") -> Poly:
        """Hermitian inner product, conjugate-linear in self."""
        if len(self) != len(other):
            raise ValidationError("PolyVector length mismatch")
        acc = Poly([], self.field)
        for a, b in zip(self.entries, other.entries):
            acc = acc + a.conjugate() * b
        return acc

    def norm_sq(self) -> Poly:
        return self.inner(self)

    def max_degree(self) -> int:
        return max(e.degree for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"PolyVector({list(self.entries)!r})"


class RationalFn:
    """Quotient of two polynomials with a declared degree bound."""

    __slots__ = ("num", "den", "degree_bound")

    def __init__(self, num: Poly, den: Poly, degree_bound: tuple):
        num._check_field(den)
        if den.is_zero:
            raise ZeroDenominatorError("denominator is identically zero")
        k1, k2 = degree_bound
        if num.degree > k1 or den.degree > k2:
            raise ValidationError(
                f"degrees ({num.degree},{den.degree}) exceed bound {degree_bound}"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "degree_bound", (int(k1), int(k2)))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @property
    def field(self) -> str:
        return self.num.field

    @property
    def degrees(self) -> tuple:
        return (self.num.degree, self.den.degree)

    def __call__(self, theta):
        d = self.den(theta)
        if (d.is_zero if self.field == EXACT else abs(d) == 0.0):
            raise PoleError(f"evaluation at a pole theta={theta}")
        return self.num(theta) / d

    def equivalent(self, other: "RationalFn") -> bool:
        """Equality as functions: cross-multiplied numerators agree."""
        return (self.num * other.den) == (other.num * self.den)

    def to_float(self) -> "RationalFn":
        if self.field == FLOAT:
            return self
        return RationalFn(self.num.to_float(), self.den.to_float(), self.degree_bound)

    def to_jsonable(self):
        return {
            "field": self.field,
            "degree_bound": list(self.degree_bound),
            "num": self.num.to_jsonable(),
            "den": self.den.to_jsonable(),
        }

    @classmethod
    def from_jsonable(cls, data) -> "RationalFn":
        field = data["field"]
        return cls(
            Poly.from_jsonable(data["num"], field),
            Poly.from_jsonable(data["den"], field),
            tuple(data["degree_bound"]),
        )

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return (
            self.num == other.num
            and self.den == other.den
            and self.degree_bound == other.degree_bound
        )

    def __repr__(self):
        return f"RationalFn({self.num!r}, {self.den!r}, bound={self.degree_bound})"


def simplify(num: Poly, den: Poly, degree_bound: tuple | None = None) -> RationalFn:
    """Canonical form of num/den.

    Exact field: divide out the gcd and scale the denominator monic.  Float
    field: scale the leading denominator coefficient to 1; no cancellation is
    attempted.  The default degree bound is the reduced degrees.
    """
    num._check_field(den)
    if den.is_zero:
        raise ZeroDenominatorError("denominator is identically zero")
    if num.field == EXACT:
        if num.is_zero:
            num, den = num, Poly.exact([1])
        else:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.coeffs[-1]
            num = Poly([c / lead for c in num.coeffs], EXACT)
            den = Poly([c / lead for c in den.coeffs], EXACT)
    else:
        lead = den.coeffs[-1]
        num = Poly([c / lead for c in num.coeffs], FLOAT)
        den = Poly([c / lead for c in den.coeffs], FLOAT)
    if degree_bound is None:
        degree_bound = (max(num.degree, 0), max(den.degree, 0))
    return RationalFn(num, den, degree_bound)
