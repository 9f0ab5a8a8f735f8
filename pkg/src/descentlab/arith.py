"""Exact arithmetic in real multiquadratic fields Q(sqrt p1, ..., sqrt pk),
complex numbers over them, and the arbitrary precision context.

Basis of a field with generators (p1, ..., pk) is indexed by bitmasks:
mask m stands for sqrt(prod of p_i with bit i set), ordered by m.  For
generators [2, 3] that is (1, sqrt2, sqrt3, sqrt6).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import combinations
from typing import Iterable, Sequence, Union

import mpmath

from . import linalg
from .errors import DomainError, FieldMismatchError, NumericOverflowError

Rational = Fraction

__all__ = [
    "Rational", "RealField", "RealAlgebraic", "ExactComplex", "PrecisionContext",
    "rank_over_Q", "is_rational", "conjugate", "abs_squared", "is_rational_square",
    "is_quadratic_irrational", "to_big", "exact", "QQ",
]


def _squarefree(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class RealField:
    """Q(sqrt g for g in generators); generators are sorted squarefree radicands."""

    generators: tuple[int, ...] = ()

    def __post_init__(self):
        gens = tuple(sorted(int(g) for g in self.generators))
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise DomainError(f"repeated radicand in {gens}")
        for g in gens:
            if not _squarefree(g):
                raise DomainError(f"radicand {g} is not a squarefree integer > 1")
        # every nonempty subset product must be a non-square, otherwise the
        # basis is linearly dependent
        for mask in range(1, 1 << len(gens)):
            if _is_square_int(self.radicand(mask)):
                raise DomainError(f"generators {gens} are not independent modulo squares")

    @property
    def degree(self) -> int:
        return 1 << len(self.generators)

    def radicand(self, mask: int) -> int:
        r = 1
        for i, g in enumerate(self.generators):
            if mask >> i & 1:
                r *= g
        return r

    def basis_label(self, mask: int) -> str:
        return "1" if mask == 0 else f"sqrt{self.radicand(mask)}"

    def embedding_of(self, other: "RealField") -> list[tuple[int, Fraction]] | None:
        """How each generator of `other` sits in self, as (mask, coefficient).

        sqrt(g) = c * sqrt(radicand(mask)).  Returns None if other is not a subfield.
        """
        out = []
        for g in other.generators:
            hit = None
            for mask in range(self.degree):
                P = self.radicand(mask)
                if _is_square_int(g * P):
                    hit = (mask, Fraction(math.isqrt(g * P), P))
                    break
            if hit is None:
                return None
            out.append(hit)
        return out

    def contains(self, other: "RealField") -> bool:
        return self.embedding_of(other) is not None

    @staticmethod
    def join(*fields: "RealField") -> "RealField":
        fields = tuple(fields)
        for f in fields:
            if all(f.contains(o) for o in fields):
                return f
        primes = set()
        for f in fields:
            for g in f.generators:
                primes.update(_prime_factors(g))
        return RealField(tuple(sorted(primes)))

    def __str__(self):
        if not self.generators:
            return "Q"
        return "Q(" + ", ".join(f"sqrt{g}" for g in self.generators) + ")"


QQ = RealField(())


@lru_cache(maxsize=None)
def _mul_table(gens: tuple[int, ...]):
    f = RealField(gens)
    n = f.degree
    table = {}
    for a in range(n):
        for b in range(n):
            table[a, b] = (a ^ b, f.radicand(a & b))
    return table


Scalar = Union[int, Fraction, "RealAlgebraic"]


class RealAlgebraic:
    """Element of a RealField with exact rational coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, fld: RealField, coords: Sequence):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != fld.degree:
            raise DomainError(f"expected {fld.degree} coordinates, got {len(coords)}")
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("RealAlgebraic is immutable")

    # construction
    @classmethod
    def rational(cls, q, fld: RealField = QQ) -> "RealAlgebraic":
        c = [Fraction(0)] * fld.degree
        c[0] = Fraction(q)
        return cls(fld, c)

    @classmethod
    def sqrt(cls, n: int) -> "RealAlgebraic":
        """sqrt(n) for a positive integer n, in the smallest suitable field."""
        if n < 0:
            raise DomainError("sqrt of a negative integer is not real")
        if n == 0:
            return cls.rational(0)
        sq, rest = 1, 1
        for p in set(_prime_factors(n)):
            e = 0
            m = n
            while m % p == 0:
                m //= p
                e += 1
            sq *= p ** (e // 2)
            rest *= p ** (e % 2)
        if rest == 1:
            return cls.rational(sq)
        fld = RealField((rest,))
        return cls(fld, [0, sq])

    @staticmethod
    def coerce(x) -> "RealAlgebraic":
        if isinstance(x, RealAlgebraic):
            return x
        if isinstance(x, (int, Fraction)):
            return RealAlgebraic.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RealAlgebraic")

    def lift(self, fld: RealField) -> "RealAlgebraic":
        if fld == self.field:
            return self
        emb = fld.embedding_of(self.field)
        if emb is None:
            raise FieldMismatchError(f"{self.field} is not contained in {fld}")
        gen_images = [RealAlgebraic._monomial(fld, m, c) for m, c in emb]
        total = RealAlgebraic.rational(0, fld)
        for mask, c in enumerate(self.coords):
            if c == 0:
                continue
            term = RealAlgebraic.rational(c, fld)
            for i in range(len(self.field.generators)):
                if mask >> i & 1:
                    term = term * gen_images[i]
            total = total + term
        return total

    @staticmethod
    def _monomial(fld: RealField, mask: int, c: Fraction) -> "RealAlgebraic":
        v = [Fraction(0)] * fld.degree
        v[mask] = Fraction(c)
        return RealAlgebraic(fld, v)

    @staticmethod
    def unify(*xs) -> list["RealAlgebraic"]:
        xs = [RealAlgebraic.coerce(x) for x in xs]
        fld = RealField.join(*(x.field for x in xs))
        return [x.lift(fld) for x in xs]

    # arithmetic
    def __add__(self, other):
        try:
            a, b = RealAlgebraic.unify(self, other)
        except TypeError:
            return NotImplemented
        return RealAlgebraic(a.field, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return RealAlgebraic(self.field, [-x for x in self.coords])

    def __sub__(self, other):
        try:
            return self + (-RealAlgebraic.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return RealAlgebraic.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RealAlgebraic(self.field, [x * other for x in self.coords])
        if not isinstance(other, RealAlgebraic):
            return NotImplemented
        a, b = RealAlgebraic.unify(self, other)
        table = _mul_table(a.field.generators)
        out = [Fraction(0)] * a.field.degree
        for i, x in enumerate(a.coords):
            if x == 0:
                continue
            for j, y in enumerate(b.coords):
                if y == 0:
                    continue
                k, f = table[i, j]
                out[k] += x * y * f
        return RealAlgebraic(a.field, out)

    __rmul__ = __mul__

    def galois(self, index: int) -> "RealAlgebraic":
        """Flip the sign of sqrt(generators[index])."""
        return RealAlgebraic(self.field, [-c if m >> index & 1 else c for m, c in enumerate(self.coords)])

    def inverse(self) -> "RealAlgebraic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        acc = RealAlgebraic.rational(1, self.field)
        y = self
        for k in range(len(self.field.generators)):
            c = y.galois(k)
            acc = acc * c
            y = y * c
        return acc * (1 / y.coords[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, RealAlgebraic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RealAlgebraic.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RealAlgebraic.rational(1, self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # predicates
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other):
        try:
            a, b = RealAlgebraic.unify(self, other)
        except (TypeError, FieldMismatchError):
            return NotImplemented
        return a.coords == b.coords

    def __hash__(self):
        # hash the minimal representation so equal values across fields agree
        nz = [(self.field.radicand(m), c) for m, c in enumerate(self.coords) if c != 0]
        return hash(tuple(sorted(nz)))

    def to_mpf(self, ctx=mpmath.mp):
        with ctx.extraprec(30):
            total = ctx.mpf(0)
            for m, c in enumerate(self.coords):
                if c != 0:
                    total += ctx.mpf(c.numerator) / c.denominator * ctx.sqrt(self.field.radicand(m))
        return +total

    def sign(self) -> int:
        """Exact sign: zero is detected exactly, otherwise numeric with escalating precision."""
        if self.is_zero():
            return 0
        dps = 30
        while True:
            ctx = mpmath.MPContext()
            ctx.dps = dps
            v = self.to_mpf(ctx)
            scale = max(abs(c) for c in self.coords) * max(self.field.radicand(m) for m in range(self.field.degree))
            if abs(v) > ctx.mpf(10) ** (-(dps // 2)) * (1 + ctx.mpf(scale.numerator) / scale.denominator):
                return 1 if v > 0 else -1
            dps *= 2
            if dps > 100000:  # a nonzero algebraic number cannot be this small here
                raise ArithmeticError("sign determination failed")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RealAlgebraic({self})"

    def __str__(self):
        parts = []
        for m, c in enumerate(self.coords):
            if c == 0:
                continue
            label = self.field.basis_label(m)
            if m == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(label)
            else:
                parts.append(f"({c})*{label}")
        return " + ".join(parts) if parts else "0"


class ExactComplex:
    """re + i*im with re, im in a common RealField."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        re, im = RealAlgebraic.unify(re, im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, *a):
        raise AttributeError("ExactComplex is immutable")

    @property
    def field(self) -> RealField:
        return self.re.field

    @staticmethod
    def coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        return ExactComplex(RealAlgebraic.coerce(x), 0)

    def lift(self, fld: RealField) -> "ExactComplex":
        return ExactComplex(self.re.lift(fld), self.im.lift(fld))

    @staticmethod
    def unify(*zs) -> list["ExactComplex"]:
        zs = [ExactComplex.coerce(z) for z in zs]
        fld = RealField.join(*(z.field for z in zs))
        return [z.lift(fld) for z in zs]

    def __add__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            return self + (-ExactComplex.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs_squared(self) -> RealAlgebraic:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ExactComplex":
        n = self.abs_squared()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ninv = n.inverse()
        return ExactComplex(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactComplex(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def __eq__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_big(self, ctx: "PrecisionContext"):
        return to_big(self, ctx)

    def __repr__(self):
        return f"ExactComplex({self})"

    def __str__(self):
        if self.im.is_zero():
            return str(self.re)
        im = f"({self.im})*i"
        if self.re.is_zero():
            return im
        return f"{self.re} + {im}"


I = ExactComplex(0, 1)


def exact(x) -> ExactComplex:
    """Coerce ints, Fractions, RealAlgebraic, ExactComplex or text into ExactComplex."""
    if isinstance(x, str):
        from .textformat import parse_exact
        return parse_exact(x)
    return ExactComplex.coerce(x)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision.  Passed explicitly everywhere; never global.

    decimal_digits: target accuracy; guard_digits: extra working digits;
    series_tail_target: absolute bound each series truncation must meet
    (None means 10^-decimal_digits).
    """

    decimal_digits: int = 50
    guard_digits: int = 10
    series_tail_target: mpmath.mpf | None = None

    def __post_init__(self):
        if int(self.decimal_digits) < 15:
            raise DomainError("decimal_digits must be at least 15")
        if int(self.guard_digits) < 10:
            raise DomainError("guard_digits must be at least 10")
        if self.series_tail_target is not None and not mpmath.mpf(self.series_tail_target) > 0:
            raise DomainError("series_tail_target must be positive")

    @property
    def bits(self) -> int:
        return math.ceil((self.decimal_digits + self.guard_digits) * math.log2(10))

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        c = mpmath.MPContext()
        c.prec = self.bits
        return c

    @property
    def tail(self):
        if self.series_tail_target is None:
            return self.mp.mpf(10) ** -self.decimal_digits
        return self.mp.mpf(self.series_tail_target)

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.decimal_digits, self.guard_digits)

    def big(self, x):
        """Coerce numbers, strings or ExactComplex into this context's mpc."""
        if isinstance(x, ExactComplex):
            return to_big(x, self)
        if isinstance(x, RealAlgebraic):
            return self.mp.mpc(x.to_mpf(self.mp))
        if isinstance(x, Fraction):
            return self.mp.mpc(self.mp.mpf(x.numerator) / x.denominator)
        return self.mp.mpc(x)

    def check_finite(self, z):
        z = self.mp.mpc(z)
        if not (self.mp.isfinite(z.real) and self.mp.isfinite(z.imag)):
            raise NumericOverflowError("non-finite value produced")
        return z


# functional API


def rank_over_Q(values: Iterable[RealAlgebraic]) -> int:
    values = [RealAlgebraic.coerce(v) for v in values]
    if not values:
        return 0
    fld = values[0].field
    for v in values:
        if v.field != fld:
            raise FieldMismatchError(f"values live in different fields: {fld} vs {v.field}")
    return linalg.rank([v.coords for v in values])


def is_rational(x) -> bool:
    return RealAlgebraic.coerce(x).is_rational()


def conjugate(z) -> ExactComplex:
    return ExactComplex.coerce(z).conjugate()


def abs_squared(z) -> RealAlgebraic:
    return ExactComplex.coerce(z).abs_squared()


def is_rational_square(x) -> Fraction | None:
    x = RealAlgebraic.coerce(x)
    if not x.is_rational():
        return None
    q = x.coords[0]
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if _is_square_int(n) and _is_square_int(d):
        return Fraction(math.isqrt(n), math.isqrt(d))
    return None


def quadratic_relation(tau) -> tuple[int, int, int] | None:
    """Primitive (a, b, c) with a*tau^2 + b*tau + c = 0 and a > 0, or None."""
    tau = ExactComplex.coerce(tau)
    one, t, t2 = ExactComplex.unify(1, tau, tau * tau)
    cols = [t2, t, one]
    rows = [[z.re.coords[k] for z in cols] for k in range(one.field.degree)]
    rows += [[z.im.coords[k] for z in cols] for k in range(one.field.degree)]
    ker = linalg.nullspace(rows, 3)
    if not ker:
        return None
    a, b, c = linalg.primitive(ker[0])
    if a == 0:
        # linear relation: tau rational, excluded by the caller
        return None
    return a, b, c


def is_quadratic_irrational(tau) -> int | None:
    """Discriminant b^2 - 4ac of the minimal quadratic of a non-real tau, or None."""
    tau = ExactComplex.coerce(tau)
    if tau.is_real():
        raise DomainError("is_quadratic_irrational needs a non-real input")
    rel = quadratic_relation(tau)
    if rel is None:
        return None
    a, b, c = rel
    return b * b - 4 * a * c


def to_big(z, ctx: PrecisionContext):
    z = ExactComplex.coerce(z)
    mp = ctx.mp
    return mp.mpc(z.re.to_mpf(mp), z.im.to_mpf(mp))
