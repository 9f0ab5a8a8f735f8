"""Uniformizations of the extensions of an elliptic curve E = C/L by Ga and Gm,
as maps C^2 -> P^5, and numerical checks of their period lattices.

    exp(z1, z2) = [P(z2) : P'(z2) : 1 : f3 : f2 : f1]

Two normalizations are provided.

"lemma" (default) is chosen so that the kernel is generated exactly by
(t*eta(lam), lam) for Ga and (zeta(w)*lam - eta(lam)*w, lam) for Gm:

    Ga:  f1 = z1 - t zeta(z2),  f2 = P' f1 - 2t P^2,  f3 = P f1 - (t/2) P'
    Gm:  f1 = sigma(z2 + w) exp(z1 - zeta(w) z2) / (sigma(z2) sigma(w)),
         f2 = P'(z2 + w) f1,  f3 = P(z2 + w) f1

"printed" is the textbook-style form with the opposite sign of t and the
cubed theta factor:

    Ga:  f1 = z1 + t zeta(z2),  f2 = P' f1 + 2t P^2,  f3 = P f1 + (t/2) P'
    Gm:  f1 = sigma^3(z2 - w) exp(3 zeta(w) z2 + z1) / (sigma^3(z2) sigma^3(w)),
         f2 = P'(z2 - w) f1,  f3 = P(z2 - w) f1

Its kernel is generated by (-t eta(lam), lam) resp.
(-3 (zeta(w) lam - eta(lam) w), lam); kernel_generators returns whichever
matches the chosen normalization.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal, Sequence

from .arith import PrecisionContext
from .errors import DomainError, PoleError
from .weierstrass import Lattice, _frame, invariants, sigma_w, wp_all, zeta_w

Kind = Literal["ga", "gm"]
Normalization = Literal["lemma", "printed"]


@dataclass(frozen=True)
class ExtensionSpec:
    kind: Kind
    param: Any  # t for Ga, omega for Gm (exact or numeric)
    base: Lattice
    normalization: Normalization = "lemma"

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in ("ga", "gm"):
            raise DomainError(f"unknown extension kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.normalization not in ("lemma", "printed"):
            raise DomainError(f"unknown normalization {self.normalization!r}")


@dataclass(frozen=True)
class ProjectivePoint5:
    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]


def _omega(spec: ExtensionSpec, ctx: PrecisionContext):
    w = ctx.big(spec.param)
    fr = _frame(spec.base, ctx)
    w0, _, _ = fr.reduce(w)
    try:
        fr.check_pole(w0, "omega")
    except PoleError:
        raise PoleError("omega lies in the lattice (within pole tolerance)", coordinate="omega") from None
    return w


def exp_ext(spec: ExtensionSpec, z1, z2, ctx: PrecisionContext) -> ProjectivePoint5:
    mp = ctx.mp
    z1, z2 = ctx.big(z1), ctx.big(z2)
    L = spec.base
    try:
        p, pp, zt = wp_all(z2, L, ctx)
    except PoleError:
        raise PoleError("z2 lies in the lattice: P(z2) has a pole", coordinate="z2") from None
    if spec.kind == "ga":
        t = ctx.big(spec.param)
        if spec.normalization == "printed":
            f1 = z1 + t * zt
            f2 = pp * f1 + 2 * t * p ** 2
            f3 = p * f1 + (t / 2) * pp
        else:
            f1 = z1 - t * zt
            f2 = pp * f1 - 2 * t * p ** 2
            f3 = p * f1 - (t / 2) * pp
    else:
        w = _omega(spec, ctx)
        shift = -w if spec.normalization == "printed" else w
        try:
            ps, pps, _ = wp_all(z2 + shift, L, ctx)
        except PoleError:
            raise PoleError("z2 is congruent to the extension point: f-coordinates have a pole",
                            coordinate="f1") from None
        zw = zeta_w(w, L, ctx)
        s_num = sigma_w(z2 + shift, L, ctx)
        s_den = sigma_w(z2, L, ctx) * sigma_w(w, L, ctx)
        if spec.normalization == "printed":
            f1 = (s_num / s_den) ** 3 * mp.exp(3 * zw * z2 + z1)
        else:
            f1 = s_num / s_den * mp.exp(z1 - zw * z2)
        f2 = pps * f1
        f3 = ps * f1
    coords = tuple(ctx.check_finite(c) for c in (p, pp, mp.mpc(1), f3, f2, f1))
    return ProjectivePoint5(coords)


def kernel_generator(spec: ExtensionSpec, lam, eta_lam, ctx: PrecisionContext):
    """Kernel element over the lattice vector lam with quasi-period eta_lam."""
    lam = ctx.big(lam)
    if spec.kind == "ga":
        first = ctx.big(spec.param) * eta_lam
        if spec.normalization == "printed":
            first = -first
    else:
        w = _omega(spec, ctx)
        first = zeta_w(w, spec.base, ctx) * lam - eta_lam * w
        if spec.normalization == "printed":
            first = -3 * first
    return (first, lam)


def kernel_generators(spec: ExtensionSpec, ctx: PrecisionContext | None = None):
    """Generators of the kernel of exp_ext over the basis (lambda1, lambda2) as given."""
    ctx = ctx or PrecisionContext(50)
    inv = invariants(spec.base, ctx)
    l1, l2 = spec.base.numeric_basis(ctx)
    return [kernel_generator(spec, l1, inv.eta1, ctx), kernel_generator(spec, l2, inv.eta2, ctx)]


def kernel_element(spec: ExtensionSpec, m: int, n: int, ctx: PrecisionContext):
    g1, g2 = kernel_generators(spec, ctx)
    return (m * g1[0] + n * g2[0], m * g1[1] + n * g2[1])


def projective_distance(P: ProjectivePoint5, Q: ProjectivePoint5, ctx: PrecisionContext):
    """Normalize both by P's largest coordinate; max abs difference of the other five."""
    mp = ctx.mp
    k = max(range(6), key=lambda i: abs(P[i]))
    if abs(Q[k]) == 0:
        return mp.inf
    a = [c / P[k] for c in P]
    b = [c / Q[k] for c in Q]
    return max(abs(a[i] - b[i]) for i in range(6) if i != k)


def periodicity_residual(spec: ExtensionSpec, z: Sequence, ctx: PrecisionContext,
                         generators=None):
    """max over generators g of dist(exp(z), exp(z + g))."""
    z1, z2 = ctx.big(z[0]), ctx.big(z[1])
    gens = generators if generators is not None else kernel_generators(spec, ctx)
    base = exp_ext(spec, z1, z2, ctx)
    worst = ctx.mp.mpf(0)
    for g in gens:
        shifted = exp_ext(spec, z1 + ctx.big(g[0]), z2 + ctx.big(g[1]), ctx)
        worst = max(worst, projective_distance(base, shifted, ctx))
    return worst
