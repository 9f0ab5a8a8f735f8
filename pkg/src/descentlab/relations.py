"""Integer relation detection among high-precision constants via LLL.

A search over values x_1..x_n builds the lattice with rows
[e_i | round(2^m Re x_i) | round(2^m Im x_i)], m = floor((digits - guard) log2 10),
reduces it (delta 0.99) and reads candidate relations off the short rows.
Candidates are re-checked at doubled precision.  Absence of a relation is
always reported together with its bounds, never as independence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import Any, Callable, Sequence, Union

import flint

from .arith import PrecisionContext
from .errors import DomainError, InsufficientPrecisionError
from .weierstrass import Lattice, invariants

ValueSource = Union[Sequence[Any], Callable[[PrecisionContext], Sequence[Any]]]


@dataclass(frozen=True)
class RelationQuery:
    values: Any  # list of numbers, or callable ctx -> list (enables re-verification)
    max_coeff: int
    ctx: PrecisionContext

    def __post_init__(self):
        if self.max_coeff < 1:
            raise DomainError("max_coeff must be at least 1")

    def evaluate(self, ctx: PrecisionContext | None = None):
        ctx = ctx or self.ctx
        vals = self.values(ctx) if callable(self.values) else self.values
        vals = [ctx.big(v) for v in vals]
        if len(vals) < 2:
            raise DomainError("need at least two values")
        return vals


@dataclass(frozen=True)
class Found:
    coefficients: tuple
    residual: Any
    verified_residual: Any = None

    status = "Found"

    def to_json(self, digits=10):
        import mpmath
        return {"status": "Found", "coefficients": list(self.coefficients),
                "residual": mpmath.nstr(self.residual, digits),
                "verified_residual": None if self.verified_residual is None
                else mpmath.nstr(self.verified_residual, digits)}


@dataclass(frozen=True)
class NoneUpTo:
    max_coeff: int
    decimal_digits: int

    status = "NoneUpTo"

    def to_json(self, digits=10):
        return {"status": "NoneUpTo", "max_coeff": self.max_coeff,
                "decimal_digits": self.decimal_digits}


def _normalize(coeffs: Sequence[int]) -> tuple:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    cs = [c // g for c in coeffs]
    lead = next(c for c in cs if c != 0)
    return tuple(-c for c in cs) if lead < 0 else tuple(cs)


def verify_relation(values, coefficients, ctx: PrecisionContext):
    """|sum c_i x_i| at the context precision."""
    if len(values) != len(coefficients):
        raise DomainError("values and coefficients differ in length")
    mp = ctx.mp
    total = mp.mpc(0)
    for c, x in zip(coefficients, values):
        total += int(c) * ctx.big(x)
    return abs(total)


def _check_precision(n: int, H: int, ctx: PrecisionContext):
    usable = ctx.decimal_digits - ctx.guard_digits
    need = n * math.log10(H + 1) + 5
    if usable < need:
        raise InsufficientPrecisionError(
            f"{n} values with coefficients up to {H} need about {need:.0f} usable digits; "
            f"have {usable} (decimal_digits - guard_digits)")


def _threshold(ctx: PrecisionContext, scale, coeffs) -> Any:
    mp = ctx.mp
    return mp.mpf(10) ** (-(ctx.decimal_digits - ctx.guard_digits)) * scale * (1 + sum(abs(c) for c in coeffs))


def _candidates(vals, H: int, ctx: PrecisionContext) -> list[tuple]:
    mp = ctx.mp
    n = len(vals)
    scale = max(abs(v) for v in vals)
    if scale == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    m = math.floor((ctx.decimal_digits - ctx.guard_digits) * math.log2(10))
    f = mp.mpf(2) ** m / scale
    cols_re = [int(mp.nint(v.real * f)) for v in vals]
    cols_im = [int(mp.nint(v.imag * f)) for v in vals]
    use_im = any(cols_im)
    rows = []
    for i in range(n):
        row = [int(i == j) for j in range(n)] + [cols_re[i]]
        if use_im:
            row.append(cols_im[i])
        rows.append(row)
    red = flint.fmpz_mat(rows).lll(delta=0.99)
    out = []
    for i in range(red.nrows()):
        c = [int(red[i, j]) for j in range(n)]
        if not any(c) or max(abs(x) for x in c) > H:
            continue
        if verify_relation(vals, c, ctx) <= _threshold(ctx, scale, c):
            out.append(_normalize(c))
    return out


def _confirmed(q: RelationQuery, c: tuple, residual) -> Found | None:
    """Re-evaluate at doubled precision; true relations shrink by >= 10^(digits/2)."""
    ctx2 = q.ctx.doubled()
    vals2 = q.evaluate(ctx2)
    scale = max(abs(v) for v in vals2)
    r2 = verify_relation(vals2, c, ctx2)
    mp2 = ctx2.mp
    tiny = _threshold(ctx2, scale, c)
    if r2 <= tiny or r2 <= residual * mp2.mpf(10) ** (-(q.ctx.decimal_digits / 2)):
        return Found(c, residual, r2)
    return None


def find_integer_relations(q: RelationQuery) -> list[Found]:
    """All independent relations among the LLL short rows, each re-verified."""
    vals = q.evaluate()
    _check_precision(len(vals), q.max_coeff, q.ctx)
    out = []
    for c in _candidates(vals, q.max_coeff, q.ctx):
        f = _confirmed(q, c, verify_relation(vals, c, q.ctx))
        if f is not None:
            out.append(f)
    return out


def find_integer_relation(q: RelationQuery) -> Union[Found, NoneUpTo]:
    found = find_integer_relations(q)
    if not found:
        return NoneUpTo(q.max_coeff, q.ctx.decimal_digits)
    return min(found, key=lambda f: (max(abs(c) for c in f.coefficients), f.coefficients))


@dataclass(frozen=True)
class MasserReport:
    relations_full: tuple
    relations_periods: tuple
    dim_full: int
    dim_periods: int
    status_full: str
    status_periods: str
    consistent: bool
    max_coeff: int
    decimal_digits: int

    def to_json(self):
        return {
            "dim_full": self.dim_full, "dim_periods": self.dim_periods,
            "relations_full": [list(f.coefficients) for f in self.relations_full],
            "relations_periods": [list(f.coefficients) for f in self.relations_periods],
            "status_full": self.status_full, "status_periods": self.status_periods,
            "consistent": self.consistent, "max_coeff": self.max_coeff,
            "decimal_digits": self.decimal_digits,
        }


FULL_LABELS = ("1", "Re lambda1", "Im lambda1", "Re eta1", "Im eta1",
               "Re lambda2", "Im lambda2", "Re eta2", "Im eta2", "2pi")
PERIOD_LABELS = ("Re lambda1", "Im lambda1", "Re lambda2", "Im lambda2")


def lattice_values(L):
    """Callables ctx -> the full and period value lists of a lattice.

    L is a Lattice or a callable ctx -> Lattice; pass a callable when the lattice
    itself is computed numerically, so that re-verification sees fresh digits.
    """
    build = L if callable(L) else (lambda ctx: L)

    def full(ctx):
        lat = build(ctx)
        inv = invariants(lat, ctx)
        l1, l2 = lat.numeric_basis(ctx)
        mp = ctx.mp
        return [mp.mpf(1), l1.real, l1.imag, inv.eta1.real, inv.eta1.imag,
                l2.real, l2.imag, inv.eta2.real, inv.eta2.imag, 2 * mp.pi]

    def periods(ctx):
        l1, l2 = build(ctx).numeric_basis(ctx)
        return [l1.real, l1.imag, l2.real, l2.imag]

    return full, periods


def _independent_count(found: Sequence[Found]) -> int:
    from . import linalg
    return linalg.rank([f.coefficients for f in found]) if found else 0


def masser_probe(L, ctx: PrecisionContext, H: int = 100) -> MasserReport:
    """Empirical check of dim{1, periods, quasi-periods, 2pi} = 2 + 2 dim{periods}."""
    full, periods = lattice_values(L)
    rf = find_integer_relations(RelationQuery(full, H, ctx))
    rp = find_integer_relations(RelationQuery(periods, H, ctx))
    dim_full = len(FULL_LABELS) - _independent_count(rf)
    dim_per = len(PERIOD_LABELS) - _independent_count(rp)
    return MasserReport(
        tuple(rf), tuple(rp), dim_full, dim_per,
        "Found" if rf else "NoneUpTo", "Found" if rp else "NoneUpTo",
        dim_full == 2 + 2 * dim_per, H, ctx.decimal_digits,
    )
