"""Weierstrass functions of a period lattice at arbitrary precision.

Evaluation uses q-expansions in the Gauss-reduced basis (w1, w2) with
tau = w2/w1, q = exp(2 pi i tau), |q| <= exp(-pi*sqrt(3)).  Arguments are
first reduced into the fundamental cell, where every expansion converges
geometrically with ratio at most exp(-pi*sqrt(3)/2).

    g2   = (2pi/w1)^4 E4 / 12          E4 = 1 + 240 sum n^3 q^n/(1-q^n)
    g3   = (2pi/w1)^6 E6 / 216         E6 = 1 - 504 sum n^5 q^n/(1-q^n)
    eta1 = pi^2 E2 / (3 w1)            E2 = 1 - 24 sum n q^n/(1-q^n)

with u = pi z / w1:

    P(z)     = -eta1/w1 + (pi/w1)^2 [csc^2 u - 8 sum n q^n/(1-q^n) cos 2nu]
    P'(z)    = (pi/w1)^3 [-2 csc^2 u cot u + 16 sum n^2 q^n/(1-q^n) sin 2nu]
    zeta(z)  = eta1 z/w1 + (pi/w1) [cot u + 4 sum q^n/(1-q^n) sin 2nu]
    sigma(z) = (w1/pi) exp(eta1 z^2/(2 w1)) sin u prod (1 - 2 q^n cos 2u + q^2n)/(1-q^n)^2

Here eta(w) denotes the quasi-period zeta(z + w) - zeta(z) of a full period w.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Union

import mpmath

from .arith import ExactComplex, PrecisionContext, RealAlgebraic
from .errors import DegenerateLatticeError, DomainError, PoleError

Number = Union[ExactComplex, Any]  # exact or mpmath mpc

_MAX_TERMS = 10000


def _is_exact(x) -> bool:
    return isinstance(x, (ExactComplex, RealAlgebraic, int)) or type(x).__name__ == "Fraction"


@dataclass(frozen=True)
class Lattice:
    """Z*lambda1 + Z*lambda2.

    The plain constructor keeps the basis as given (useful for negative
    controls); use from_tau / from_basis to get an oriented basis.
    """

    lambda1: Number
    lambda2: Number
    source_tau: ExactComplex | None = None

    def __post_init__(self):
        l1, l2 = self.lambda1, self.lambda2
        if _is_exact(l1) and _is_exact(l2):
            l1, l2 = ExactComplex.coerce(l1), ExactComplex.coerce(l2)
            object.__setattr__(self, "lambda1", l1)
            object.__setattr__(self, "lambda2", l2)
        else:
            l1, l2 = self._as_mpc(l1), self._as_mpc(l2)
            object.__setattr__(self, "lambda1", l1)
            object.__setattr__(self, "lambda2", l2)
        if self._orientation() == 0:
            raise DegenerateLatticeError(f"basis ({self.lambda1}, {self.lambda2}) is R-linearly dependent")

    @staticmethod
    def _as_mpc(x):
        if _is_exact(x):
            x = ExactComplex.coerce(x)
            with mpmath.workdps(40):
                return mpmath.mpc(x.re.to_mpf(), x.im.to_mpf())
        if isinstance(x, str):
            from .textformat import parse_exact
            return Lattice._as_mpc(parse_exact(x))
        if hasattr(x, "_mpc_"):
            return x
        return mpmath.mpc(x)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.lambda1, ExactComplex) and isinstance(self.lambda2, ExactComplex)

    def _orientation(self) -> int:
        """Sign of Im(lambda2 / lambda1)."""
        if self.is_exact:
            return (self.lambda2 * self.lambda1.conjugate()).im.sign()
        a, b = self.lambda1, self.lambda2
        cross = (b * mpmath.conj(a)).imag
        scale = abs(a) * abs(b)
        if scale == 0 or abs(cross) <= mpmath.mpf(10) ** -25 * scale:
            return 0
        return 1 if cross > 0 else -1

    @property
    def oriented(self) -> bool:
        return self._orientation() > 0

    @classmethod
    def from_tau(cls, tau) -> "Lattice":
        """Z + tau Z, with tau replaced by -tau when Im tau < 0 (same lattice)."""
        if isinstance(tau, str):
            from .textformat import parse_exact
            tau = parse_exact(tau)
        if _is_exact(tau):
            tau = ExactComplex.coerce(tau)
            if tau.im.is_zero():
                raise DegenerateLatticeError("tau must not be real")
            if tau.im.sign() < 0:
                tau = -tau
            return cls(ExactComplex(1), tau, source_tau=tau)
        tau = cls._as_mpc(tau)
        if tau.imag < 0:
            tau = -tau
        return cls(mpmath.mpc(1), tau)

    @classmethod
    def from_basis(cls, lambda1, lambda2, orient: bool = True) -> "Lattice":
        L = cls(lambda1, lambda2)
        if orient and not L.oriented:
            L = cls(L.lambda1, -L.lambda2)
        return L

    def numeric_basis(self, ctx: PrecisionContext):
        return ctx.big(self.lambda1), ctx.big(self.lambda2)

    def scaled(self, c) -> "Lattice":
        """c * Lattice, keeping orientation (c != 0)."""
        if self.is_exact and _is_exact(c):
            c = ExactComplex.coerce(c)
            return Lattice(c * self.lambda1, c * self.lambda2)
        c = self._as_mpc(c)
        return Lattice(c * self._as_mpc(self.lambda1), c * self._as_mpc(self.lambda2))

    @property
    def tau(self):
        return self.lambda2 / self.lambda1

    def __str__(self):
        return f"Z*({self.lambda1}) + Z*({self.lambda2})"


@dataclass(frozen=True)
class LatticeInvariants:
    g2: Any
    g3: Any
    discriminant: Any
    j: Any
    eta1: Any
    eta2: Any


def _gauss_matrix(l1, l2, mp):
    """Unimodular U (det 1) with (w1, w2) = U (l1, l2) Gauss-reduced.

    Assumes Im(l2/l1) > 0.
    """
    U = [[1, 0], [0, 1]]
    a, b = l1, l2
    for _ in range(10000):
        t = b / a
        m = int(mp.nint(t.real))
        if m:
            b = b - m * a
            U[1] = [U[1][0] - m * U[0][0], U[1][1] - m * U[0][1]]
        if abs(b) < abs(a) * (1 - mp.mpf(10) ** -20):
            a, b = b, -a
            U = [U[1], [-U[0][0], -U[0][1]]]
        else:
            return U
    raise DegenerateLatticeError("lattice reduction did not terminate")


def reduce_basis(L: Lattice, ctx: PrecisionContext | None = None) -> Lattice:
    """Gauss-reduced oriented basis of the same lattice.

    |w1| minimal, |Re(w2/w1)| <= 1/2, |w2/w1| >= 1.  Exact lattices stay exact.
    """
    ctx = ctx or PrecisionContext(30)
    s = 1 if L.oriented else -1
    l1, l2 = L.numeric_basis(ctx)
    U = _gauss_matrix(l1, s * l2, ctx.mp)
    a, b = L.lambda1, L.lambda2 * s
    w1 = a * U[0][0] + b * U[0][1]
    w2 = a * U[1][0] + b * U[1][1]
    return Lattice(w1, w2)


class _Frame:
    """Numeric data of a lattice at one precision (reduced basis + q-series constants)."""

    def __init__(self, L: Lattice, ctx: PrecisionContext):
        self.ctx = ctx
        mp = self.mp = ctx.mp
        self.sign = 1 if L.oriented else -1
        l1, l2 = L.numeric_basis(ctx)
        U = _gauss_matrix(l1, self.sign * l2, mp)
        self.U = U
        if L.is_exact:
            a, b = L.lambda1, L.lambda2 * self.sign
            w1 = ctx.big(a * U[0][0] + b * U[0][1])
            w2 = ctx.big(a * U[1][0] + b * U[1][1])
        else:
            w1 = l1 * U[0][0] + self.sign * l2 * U[0][1]
            w2 = l1 * U[1][0] + self.sign * l2 * U[1][1]
        self.w1, self.w2 = w1, w2
        self.tau = w2 / w1
        self.q = mp.exp(2j * mp.pi * self.tau)
        self.tol = ctx.tail * mp.mpf(10) ** -5
        # given basis in reduced coordinates: (l1, s*l2) = U^-1 (w1, w2)
        (a, b), (c, d) = U
        inv = [[d, -b], [-c, a]]
        self.given = [inv[0], [self.sign * inv[1][0], self.sign * inv[1][1]]]
        self._eisenstein()
        self.eta2 = 2 * self._series(w2 / 2)[2]

    def _eisenstein(self):
        mp, q = self.mp, self.q
        s1 = s3 = s5 = mp.mpc(0)
        qn = mp.mpc(1)
        for n in range(1, _MAX_TERMS):
            qn *= q
            f = qn / (1 - qn)
            s1 += n * f
            s3 += n ** 3 * f
            s5 += n ** 5 * f
            if abs(f) * n ** 5 < self.tol:
                break
        E2 = 1 - 24 * s1
        E4 = 1 + 240 * s3
        E6 = 1 - 504 * s5
        w1 = self.w1
        self.g2 = (2 * mp.pi / w1) ** 4 * E4 / 12
        self.g3 = (2 * mp.pi / w1) ** 6 * E6 / 216
        self.eta1 = mp.pi ** 2 * E2 / (3 * w1)

    def coords(self, z):
        """Real coordinates (a, b) with z = a*w1 + b*w2."""
        t = z / self.w1
        b = t.imag / self.tau.imag
        a = t.real - b * self.tau.real
        return a, b

    def reduce(self, z):
        a, b = self.coords(z)
        m, n = int(self.mp.nint(a)), int(self.mp.nint(b))
        return z - m * self.w1 - n * self.w2, m, n

    def eta_of(self, m: int, n: int):
        return m * self.eta1 + n * self.eta2

    def check_pole(self, z0, what="z"):
        if abs(z0) < self.mp.mpf(10) ** (-(self.ctx.decimal_digits / 2)) * abs(self.w1):
            raise PoleError(f"{what} lies within pole tolerance of a lattice point", coordinate=what)

    def _series(self, z0):
        """(P, P', zeta) at a point of the fundamental cell."""
        mp = self.mp
        u = mp.pi * z0 / self.w1
        e2 = mp.exp(2j * u)
        e2inv = 1 / e2
        sp = sz = spp = mp.mpc(0)
        qn = mp.mpc(1)
        en = mp.mpc(1)
        eninv = mp.mpc(1)
        for n in range(1, _MAX_TERMS):
            qn *= self.q
            en *= e2
            eninv *= e2inv
            f = qn / (1 - qn)
            cos_n = (en + eninv) / 2
            sin_n = (en - eninv) / 2j
            sp += f * n * cos_n
            sz += f * sin_n
            spp += f * n * n * sin_n
            if abs(f) * max(abs(en), abs(eninv)) * n * n < self.tol:
                break
        s, c = mp.sin(u), mp.cos(u)
        csc2 = 1 / (s * s)
        cot = c / s
        k = mp.pi / self.w1
        wp = -self.eta1 / self.w1 + k ** 2 * (csc2 - 8 * sp)
        wpp = k ** 3 * (-2 * csc2 * cot + 16 * spp)
        zt = self.eta1 * z0 / self.w1 + k * (cot + 4 * sz)
        return wp, wpp, zt

    def sigma_product(self, z):
        mp = self.mp
        u = mp.pi * z / self.w1
        c2 = mp.cos(2 * u)
        prod = mp.mpc(1)
        qn = mp.mpc(1)
        bound = mp.exp(2 * abs(u.imag))
        for _ in range(1, _MAX_TERMS):
            qn *= self.q
            prod *= (1 - 2 * qn * c2 + qn * qn) / (1 - qn) ** 2
            if abs(qn) * bound < self.tol:
                break
        return (self.w1 / mp.pi) * mp.exp(self.eta1 * z * z / (2 * self.w1)) * mp.sin(u) * prod


@lru_cache(maxsize=256)
def _frame(L: Lattice, ctx: PrecisionContext) -> _Frame:
    return _Frame(L, ctx)


def _z(ctx, z):
    return ctx.big(z)


def invariants(L: Lattice, ctx: PrecisionContext) -> LatticeInvariants:
    """g2, g3, discriminant, j and the quasi-periods at the basis vectors as given."""
    fr = _frame(L, ctx)
    g2, g3 = fr.g2, fr.g3
    disc = g2 ** 3 - 27 * g3 ** 2
    scale = abs(g2) ** 3 + 27 * abs(g3) ** 2
    if abs(disc) <= ctx.tail * scale:
        raise DegenerateLatticeError("discriminant below tolerance")
    l1, l2 = L.numeric_basis(ctx)
    eta1 = 2 * zeta_w(l1 / 2, L, ctx)
    eta2 = 2 * zeta_w(l2 / 2, L, ctx)
    return LatticeInvariants(
        g2=ctx.check_finite(g2), g3=ctx.check_finite(g3), discriminant=ctx.check_finite(disc),
        j=ctx.check_finite(1728 * g2 ** 3 / disc), eta1=eta1, eta2=eta2,
    )


def wp(z, L: Lattice, ctx: PrecisionContext):
    fr = _frame(L, ctx)
    z0, _, _ = fr.reduce(_z(ctx, z))
    fr.check_pole(z0)
    return ctx.check_finite(fr._series(z0)[0])


def wp_prime(z, L: Lattice, ctx: PrecisionContext):
    fr = _frame(L, ctx)
    z0, _, _ = fr.reduce(_z(ctx, z))
    fr.check_pole(z0)
    return ctx.check_finite(fr._series(z0)[1])


def wp_all(z, L: Lattice, ctx: PrecisionContext):
    """(P, P', zeta) at z in one pass."""
    fr = _frame(L, ctx)
    z0, m, n = fr.reduce(_z(ctx, z))
    fr.check_pole(z0)
    p, pp, zt = fr._series(z0)
    return p, pp, zt + fr.eta_of(m, n)


def zeta_w(z, L: Lattice, ctx: PrecisionContext):
    fr = _frame(L, ctx)
    z0, m, n = fr.reduce(_z(ctx, z))
    fr.check_pole(z0)
    return ctx.check_finite(fr._series(z0)[2] + fr.eta_of(m, n))


def sigma_w(z, L: Lattice, ctx: PrecisionContext):
    """sigma(z); entire, so no pole check.  Far arguments use the quasi-period law."""
    fr = _frame(L, ctx)
    z = _z(ctx, z)
    _, b = fr.coords(z)
    n = int(fr.mp.nint(b))
    if abs(n) <= 2:
        return ctx.check_finite(fr.sigma_product(z))
    # sigma(z0 + lam) = eps(lam) exp(eta(lam) (z0 + lam/2)) sigma(z0), lam = n*w2
    lam = n * fr.w2
    z0 = z - lam
    eps = -1 if n % 2 else 1
    return ctx.check_finite(eps * fr.mp.exp(fr.eta_of(0, n) * (z0 + lam / 2)) * fr.sigma_product(z0))


def lattice_coordinates(L: Lattice, lam, ctx: PrecisionContext) -> tuple[int, int]:
    """Integers (m, n) with lam = m*lambda1 + n*lambda2 (basis as given)."""
    l1, l2 = L.numeric_basis(ctx)
    lam = _z(ctx, lam)
    det = (l1.conjugate() * l2).imag
    m = (lam.conjugate() * l2).imag / det
    n = (l1.conjugate() * lam).imag / det
    mi, ni = int(ctx.mp.nint(m.real)), int(ctx.mp.nint(n.real))
    if abs(lam - mi * l1 - ni * l2) > ctx.mp.mpf(10) ** (-(ctx.decimal_digits / 2)) * abs(l1):
        raise DomainError("value is not a lattice vector")
    return mi, ni


def eta(lam, L: Lattice, ctx: PrecisionContext):
    """Quasi-period of a lattice vector: zeta(z + lam) - zeta(z)."""
    inv = invariants(L, ctx)
    m, n = lattice_coordinates(L, lam, ctx)
    return m * inv.eta1 + n * inv.eta2


def legendre_residual(L: Lattice, ctx: PrecisionContext):
    inv = invariants(L, ctx)
    l1, l2 = L.numeric_basis(ctx)
    mp = ctx.mp
    return abs(inv.eta1 * l2 - inv.eta2 * l1 - 2j * mp.pi)


def conjugate_lattice(L: Lattice) -> Lattice:
    """The complex-conjugate lattice, re-oriented: (conj l1, -conj l2)."""
    if L.is_exact:
        tau = None
        if L.source_tau is not None:
            tau = -L.source_tau.conjugate()
        return Lattice(L.lambda1.conjugate(), -L.lambda2.conjugate(), source_tau=tau)
    return Lattice(L.lambda1.conjugate(), -L.lambda2.conjugate())


def normalize_g2(L: Lattice, target, ctx: PrecisionContext) -> Lattice:
    """Homothetic numeric lattice c*L with g2(c*L) = target (target != 0)."""
    g2 = invariants(L, ctx).g2
    mp = ctx.mp
    c = mp.root(g2 / ctx.big(target), 4)
    l1, l2 = L.numeric_basis(ctx)
    return Lattice(c * l1, c * l2)


def same_lattice(A: Lattice, B: Lattice, ctx: PrecisionContext | None = None) -> bool:
    """True if A and B are the same subset of C."""
    ctx = ctx or PrecisionContext(30)
    try:
        for lam in A.numeric_basis(ctx):
            lattice_coordinates(B, lam, ctx)
        for lam in B.numeric_basis(ctx):
            lattice_coordinates(A, lam, ctx)
    except DomainError:
        return False
    return True
