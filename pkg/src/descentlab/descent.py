"""Decision procedures for descending tori and elliptic curves to the reals.

Everything here is exact: inputs are ExactComplex values and all decisions
are made by rational linear algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence, Union

from . import linalg
from .arith import (ExactComplex, RealAlgebraic, is_quadratic_irrational, is_rational_square)
from .errors import DegenerateHomomorphismError, DomainError
from .weierstrass import Lattice

# tori


@dataclass(frozen=True)
class TorusSpec:
    exponents: tuple

    def __post_init__(self):
        exps = tuple(ExactComplex.unify(*self.exponents)) if self.exponents else ()
        if not exps:
            raise DomainError("a torus spec needs at least one exponent")
        object.__setattr__(self, "exponents", exps)


@dataclass(frozen=True)
class TorusVerdict:
    r_real: int
    r_imag: int
    s: int
    n: int
    verdict: str  # "Descends" | "WeakOnly" | "None"
    target: tuple = ()
    isogeny_class_only: bool = True

    def to_json(self) -> dict:
        return {
            "verdict": {"Descends": "descends", "WeakOnly": "weak", "None": "none"}[self.verdict],
            "r_real": self.r_real,
            "r_imag": self.r_imag,
            "s": self.s,
            "n": self.n,
            "target": list(self.target) if self.verdict != "None" else None,
            "witness": {"rank_zspan": self.n, "rank_real_parts": self.r_real,
                        "rank_imag_parts": self.r_imag,
                        "isogeny_class_only": self.isogeny_class_only},
        }


def _coords(x: RealAlgebraic) -> tuple:
    return x.coords


def torus_verdict(spec: Union[TorusSpec, Sequence]) -> TorusVerdict:
    if not isinstance(spec, TorusSpec):
        spec = TorusSpec(tuple(spec))
    bs = spec.exponents
    if any(b.is_zero() for b in bs):
        raise DegenerateHomomorphismError("zero exponent: the homomorphism has a trivial factor")
    n = linalg.rank([_coords(b.re) + _coords(b.im) for b in bs])
    r_real = linalg.rank([_coords(b.re) for b in bs])
    r_imag = linalg.rank([_coords(b.im) for b in bs])
    s = r_real + r_imag
    if s == n:
        verdict = "Descends"
    elif s == 2 * n:
        verdict = "None"
    else:
        verdict = "WeakOnly"
    target = ("Gm",) * r_real + ("S",) * r_imag if verdict != "None" else ()
    return TorusVerdict(r_real, r_imag, s, n, verdict, target)


# elliptic curves


@dataclass(frozen=True)
class RationalRealPart:
    value: Fraction

    def to_json(self):
        return {"type": "RationalRealPart", "value": str(self.value)}


@dataclass(frozen=True)
class NormWitness:
    d1: int
    d2: int
    abs_value: Fraction  # |d1*tau + d2|

    def to_json(self):
        return {"type": "NormWitness", "d1": self.d1, "d2": self.d2, "abs": str(self.abs_value)}


@dataclass(frozen=True)
class CM:
    discriminant: int

    def to_json(self):
        return {"type": "CM", "discriminant": self.discriminant}


@dataclass(frozen=True)
class NoWitness:
    def to_json(self):
        return {"type": "NoWitness"}


@dataclass(frozen=True)
class EllipticVerdict:
    definable: bool
    witness: object
    also: tuple = ()

    def to_json(self) -> dict:
        return {
            "definable": self.definable,
            "verdict": "descends" if self.definable else "none",
            "witness": self.witness.to_json(),
            "also": [w.to_json() for w in self.also],
        }


def normalize_tau(tau) -> ExactComplex:
    """tau or -tau, whichever lies in the upper half plane."""
    tau = ExactComplex.coerce(tau)
    if tau.im.is_zero():
        raise DomainError("tau is real: not a lattice")
    return -tau if tau.im.sign() < 0 else tau


def _rational_roots(a: Fraction, b: Fraction, c: Fraction):
    """Rational solutions r of a + b r + c r^2 = 0; None means every r."""
    if c == 0:
        if b == 0:
            return None if a == 0 else set()
        return {-a / b}
    disc = b * b - 4 * a * c
    root = is_rational_square(disc)
    if root is None:
        return set()
    return {(-b + root) / (2 * c), (-b - root) / (2 * c)}


def _witness_from_ratio(r: Fraction, tau: ExactComplex) -> NormWitness | None:
    d1, d2 = r.denominator, r.numerator
    val = is_rational_square((tau * d1 + d2).abs_squared())
    return NormWitness(d1, d2, val) if val is not None else None


def norm_witness(tau) -> NormWitness | None:
    """Integers d1 != 0, d2 with |d1 tau + d2| rational, by exact quadratic forms.

    |d1 tau + d2|^2 = A d1^2 + 2 B d1 d2 + d2^2 with A = |tau|^2, B = Re tau.
    Every irrational basis coordinate must vanish, which pins r = d2/d1 down to
    a finite set unless A and B are both rational; then the rational
    coordinate must be a rational square, a conic with rational points.
    """
    tau = normalize_tau(tau)
    A = tau.abs_squared()
    B = tau.re
    A, B = RealAlgebraic.unify(A, B)
    candidates = None  # None: unconstrained
    for k in range(1, A.field.degree):
        roots = _rational_roots(A.coords[k], 2 * B.coords[k], Fraction(0))
        if roots is None:
            continue
        candidates = roots if candidates is None else candidates & roots
        if not candidates:
            return None
    if candidates is not None:
        found = [w for w in (_witness_from_ratio(r, tau) for r in candidates) if w is not None]
        return min(found, key=lambda w: (abs(w.d1), abs(w.d2))) if found else None
    # conic (r + B0)^2 + D = s^2, D = (Im tau)^2 > 0 rational: always solvable
    B0, A0 = B.coords[0], A.coords[0]
    D = A0 - B0 * B0
    best = None
    sols = [-B0] if is_rational_square(D) is not None else []
    for num in range(1, 41):
        for den in range(1, 41):
            if math.gcd(num, den) != 1:
                continue
            t = Fraction(num, den)
            sols.append((D / t - t) / 2 - B0)
    for r in sols:
        w = _witness_from_ratio(r, tau)
        if w is not None and (best is None or max(abs(w.d1), abs(w.d2)) < max(abs(best.d1), abs(best.d2))):
            best = w
    return best


def elliptic_real_model(tau) -> EllipticVerdict:
    """Is E_tau isogenous to a curve with a real model?"""
    tau = normalize_tau(tau)
    found = []
    if tau.re.is_rational():
        found.append(RationalRealPart(tau.re.rational_value()))
    disc = is_quadratic_irrational(tau)
    if disc is not None:
        found.append(CM(disc))
    nw = norm_witness(tau)
    if nw is not None:
        found.append(nw)
    if not found:
        return EllipticVerdict(False, NoWitness())
    return EllipticVerdict(True, found[0], tuple(found[1:]))


# isogenies


@dataclass(frozen=True)
class IsogenyModule:
    rank: int
    generators: tuple  # ((a, b), (c, d)) with tau2 = (a tau + b)/(c tau + d)
    min_degree: int | None

    def to_json(self):
        return {"rank": self.rank, "generators": [[list(r) for r in g] for g in self.generators],
                "min_degree": self.min_degree}


def _det(M) -> int:
    (a, b), (c, d) = M
    return a * d - b * c


def apply_matrix(M, tau) -> ExactComplex:
    (a, b), (c, d) = M
    tau = ExactComplex.coerce(tau)
    return (tau * a + b) / (tau * c + d)


def hom_module(tau, tau2, degree_bound: int = 32) -> IsogenyModule:
    """Integer matrices M with tau2 = M.tau; each is an isogeny E_tau -> E_tau2
    of degree det M (multiplication by c tau + d maps Z+tau Z into Z+tau2 Z
    after inversion)."""
    tau, tau2 = normalize_tau(tau), normalize_tau(tau2)
    cols = ExactComplex.unify(tau, ExactComplex(1), -(tau2 * tau), -tau2)
    deg = cols[0].field.degree
    rows = [[z.re.coords[k] for z in cols] for k in range(deg)]
    rows += [[z.im.coords[k] for z in cols] for k in range(deg)]
    ker = linalg.integer_kernel(rows, 4)
    gens = tuple(((v[0], v[1]), (v[2], v[3])) for v in ker)
    if not gens:
        return IsogenyModule(0, (), None)
    if len(gens) == 1:
        return IsogenyModule(1, gens, abs(_det(gens[0])))
    A, B = gens
    best = None
    for x, y in product(range(-degree_bound, degree_bound + 1), repeat=2):
        if x == 0 and y == 0:
            continue
        M = tuple(tuple(x * A[i][j] + y * B[i][j] for j in range(2)) for i in range(2))
        d = abs(_det(M))
        if d and (best is None or d < best):
            best = d
    return IsogenyModule(len(gens), gens, best)


def conjugate_tau(tau) -> ExactComplex:
    """tau' with E_tau' the complex conjugate curve: -conj(tau)."""
    return -normalize_tau(tau).conjugate()


@dataclass(frozen=True)
class WeilSplitting:
    splits: bool
    description: str

    def __str__(self):
        return f"Splits({self.description})" if self.splits else "Simple"

    def to_json(self):
        return {"splits": self.splits, "result": "Splits" if self.splits else "Simple",
                "description": self.description}


def weil_restriction_simple(tau) -> WeilSplitting:
    """Does the Weil restriction of E_tau from C to R split?

    CM curves always split.  Otherwise End = Z and the criterion is an
    isogeny E -> E^h of square degree (all isogenies then qualify or none do).
    """
    tau = normalize_tau(tau)
    disc = is_quadratic_irrational(tau)
    if disc is not None:
        return WeilSplitting(True, f"CM discriminant {disc}: isogenous to E' x E'")
    H = hom_module(tau, conjugate_tau(tau))
    if H.rank == 0:
        return WeilSplitting(False, "Hom(E, E^h) = 0")
    d = H.min_degree
    if math.isqrt(d) ** 2 == d:
        return WeilSplitting(True, f"isogeny to the conjugate of degree {d} = {math.isqrt(d)}^2")
    return WeilSplitting(False, f"generator of Hom(E, E^h) has non-square degree {d}")


# complex twins


def _exact_coordinates(lam: ExactComplex, l1: ExactComplex, l2: ExactComplex):
    """Rational (m, n) with lam = m l1 + n l2, or None if lam is outside the Q-span."""
    cols = ExactComplex.unify(l1, l2, lam)
    deg = cols[0].field.degree
    rows = [[z.re.coords[k] for z in cols] for k in range(deg)]
    rows += [[z.im.coords[k] for z in cols] for k in range(deg)]
    ker = linalg.nullspace(rows, 3)
    v = next((v for v in ker if v[2] != 0), None)
    if v is None:
        return None
    return -v[0] / v[2], -v[1] / v[2]


def _axis_generator(L: Lattice, part: str) -> ExactComplex:
    """Generator of L intersected with R (part='im' vanishes) or iR (part='re')."""
    l1, l2 = ExactComplex.unify(L.lambda1, L.lambda2)
    a, b = getattr(l1, part), getattr(l2, part)
    ker = linalg.integer_kernel([[x, y] for x, y in zip(a.coords, b.coords)], 2)
    if len(ker) != 1:
        raise DomainError("lattice is not stable under complex conjugation")
    m, n = ker[0]
    g = l1 * m + l2 * n
    # positive real / positive imaginary representative
    sgn = g.re.sign() if part == "im" else g.im.sign()
    return -g if sgn < 0 else g


def is_conjugation_stable(L: Lattice) -> bool:
    if not L.is_exact:
        raise DomainError("conjugation stability needs an exact basis")
    for lam in (L.lambda1, L.lambda2):
        mn = _exact_coordinates(lam.conjugate(), L.lambda1, L.lambda2)
        if mn is None:
            return False
        m, n = mn
        if m.denominator != 1 or n.denominator != 1:
            return False
    return True


def complex_twin(L: Lattice) -> Lattice:
    """The twin i(L cap R) + i(L cap iR), oriented."""
    if not is_conjugation_stable(L):
        raise DomainError("lattice is not stable under complex conjugation")
    real_gen = _axis_generator(L, "im")
    imag_gen = _axis_generator(L, "re")
    i = ExactComplex(0, 1)
    return Lattice.from_basis(imag_gen * i * -1, real_gen * i)


# Weil restriction profiles


@dataclass(frozen=True)
class WeilProfile:
    factor: str
    simple: bool
    structure: str
    endomorphisms: str

    def to_json(self):
        return {"factor": self.factor, "simple": self.simple, "structure": self.structure,
                "endomorphisms": self.endomorphisms}


def weil_restriction_profile(factor) -> WeilProfile:
    """Structure of the restriction of scalars from C to R of a simple factor.

    `factor` needs `kind` in {"Ga", "Gm", "S", "E"} and `tau` for "E".
    """
    kind = factor.kind
    if kind == "Ga":
        return WeilProfile("Ga", False, "Ga x Ga", "Mat2(R)")
    if kind in ("Gm", "S"):
        # S complexifies to Gm
        return WeilProfile(kind, False, "Gm x S", "Z x Z")
    if kind != "E":
        raise DomainError(f"unknown factor kind {kind!r}")
    tau = normalize_tau(factor.tau)
    name = f"E(tau={tau})"
    disc = is_quadratic_irrational(tau)
    split = weil_restriction_simple(tau)
    if disc is not None:
        return WeilProfile(name, False, "E' x E'", "Mat2(Z)")
    if split.splits:
        return WeilProfile(name, False, "E' x E'_[i]", "Z x Z")
    H = hom_module(tau, conjugate_tau(tau))
    endo = f"Z[sqrt{H.min_degree}]" if H.rank else "Z"
    return WeilProfile(name, True, "Simple", endo)
