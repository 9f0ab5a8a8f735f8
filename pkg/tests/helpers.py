"""Shared generators and brute-force oracles for the test-suite.

The oracles here deliberately avoid the package's decision logic: they
enumerate small integer data and test it with plain exact arithmetic.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product

import numpy as np
from hypothesis import strategies as st

from descentlab.arith import ExactComplex, RealAlgebraic, RealField, is_rational_square

FIELDS = [(), (2,), (3,), (5,), (2, 3), (2, 5)]


def rand_frac(rng: random.Random, lo=-4, hi=4, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def rand_real(rng: random.Random, gens=None, density=0.7) -> RealAlgebraic:
    gens = rng.choice(FIELDS) if gens is None else gens
    fld = RealField(gens)
    return RealAlgebraic(fld, [rand_frac(rng) if rng.random() < density else 0 for _ in range(fld.degree)])


def rand_exact(rng: random.Random, gens=None) -> ExactComplex:
    gens = rng.choice(FIELDS) if gens is None else gens
    return ExactComplex(rand_real(rng, gens), rand_real(rng, gens))


_NORM_SEEDS = [(2, 1, 1), (2, 1, 7), (5, 1, 2), (5, 2, 1), (13, 2, 3), (13, 3, 2), (3, 0, 0)]


def rand_tau(rng: random.Random, family: str | None = None) -> ExactComplex:
    """A random exact tau in the upper half plane from a mix of families."""
    family = family or rng.choice(["generic", "rational_re", "cm", "norm", "scaled_unit", "modular"])
    if family == "generic":
        while True:
            t = rand_exact(rng)
            if not t.im.is_zero():
                return t if t.im.sign() > 0 else -t
    if family == "rational_re":
        im = rand_real(rng, rng.choice([(2,), (3,), (2, 3), (5,)]))
        im = im + RealAlgebraic.sqrt(2) if im.is_rational() else im
        if im.sign() <= 0:
            im = -im
        if im.is_zero():
            im = RealAlgebraic.sqrt(3)
        return ExactComplex(rand_frac(rng), im)
    if family == "cm":
        p = rng.choice([1, 2, 3, 5, 6, 7])
        s = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        return ExactComplex(rand_frac(rng), RealAlgebraic.sqrt(p) * s)
    if family == "norm":
        p, a, b = rng.choice(_NORM_SEEDS[:-1])
        w = ExactComplex(RealAlgebraic.sqrt(p) * a, RealAlgebraic.sqrt(p) * b)
        d1 = rng.randint(1, 4) * rng.choice([1, -1])
        d2 = rng.randint(-5, 5)
        t = (w - d2) / d1
        return t if t.im.sign() > 0 else -t
    if family == "scaled_unit":
        p = rng.choice([2, 3, 5, 6])
        a, b = rng.randint(-3, 3), rng.randint(1, 3)
        t = ExactComplex(RealAlgebraic.sqrt(p) * a, RealAlgebraic.sqrt(p) * b) + rng.randint(-2, 2)
        return t
    if family == "modular":
        t = rand_tau(rng, rng.choice(["generic", "norm", "scaled_unit"]))
        return -1 / t
    raise ValueError(family)


@st.composite
def exact_taus(draw, family=None):
    seed = draw(st.integers(0, 2**32 - 1))
    return rand_tau(random.Random(seed), family)


@st.composite
def exact_numbers(draw, gens=None, nonzero=False):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    while True:
        z = rand_exact(rng, gens)
        if not (nonzero and z.is_zero()):
            return z


# oracles


def _scaled_ints(*qs):
    den = 1
    for q in qs:
        den = math.lcm(den, q.denominator)
    ints = [int(q * den) for q in qs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints] if g else ints, den


def brute_norm_witness(tau: ExactComplex, bound: int = 1000):
    """Smallest (d1, |d2|), 0 < d1 <= bound, |d2| <= bound, with |d1 tau + d2| rational.

    |d1 tau + d2|^2 = d1^2 A + 2 d1 d2 B + d2^2 with A = |tau|^2, B = Re tau:
    every irrational coordinate must vanish and the rational one must be a
    rational square.  Plain enumeration over the whole box, vectorized.
    """
    A, B = RealAlgebraic.unify(tau.abs_squared(), tau.re)
    d1 = np.arange(1, bound + 1, dtype=np.int64)[:, None]
    d2 = np.arange(-bound, bound + 1, dtype=np.int64)[None, :]
    mask = np.ones((bound, 2 * bound + 1), dtype=bool)
    for k in range(1, A.field.degree):
        # d1 * (d1 A_k + 2 d2 B_k) = 0 and d1 != 0
        (a, b), _ = _scaled_ints(A.coords[k], 2 * B.coords[k])
        if a == 0 and b == 0:
            continue
        if max(abs(a), abs(b)) * bound < 2**60:
            mask &= (d1 * a + d2 * b) == 0
        else:
            mask &= (d1.astype(object) * a + d2.astype(object) * b) == 0
    (a0, b0, c0), den = _scaled_ints(A.coords[0], 2 * B.coords[0], Fraction(1))
    # value = N / den with N = a0 d1^2 + b0 d1 d2 + c0 d2^2; rational square iff N * den is a square
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    if max(abs(a0), abs(b0), abs(c0)) * den * 4 * bound * bound < 2**62:
        V = (a0 * d1 * d1 + b0 * d1 * d2 + c0 * d2 * d2) * den
        V = np.where(mask, V, -1)
        r = np.rint(np.sqrt(np.maximum(V, 0).astype(np.float64))).astype(np.int64)
        ok = np.zeros_like(mask)
        for delta in (-1, 0, 1):
            rr = r + delta
            ok |= (V >= 0) & (rr >= 0) & (rr * rr == V)
        found = [(int(i) + 1, abs(int(j) - bound)) for i, j in np.argwhere(ok)]
    else:
        found = []
        for i, j in hits:
            x, y = int(i) + 1, int(j) - bound
            N = a0 * x * x + b0 * x * y + c0 * y * y
            if is_rational_square(Fraction(N, den)) is not None:
                found.append((x, abs(y)))
    return min(found) if found else None


def brute_hom(tau: ExactComplex, tau2: ExactComplex, bound: int = 5):
    """All nonzero integer matrices with entries <= bound and tau2 = M.tau."""
    out = []
    for a, b, c, d in product(range(-bound, bound + 1), repeat=4):
        if (a, b, c, d) == (0, 0, 0, 0):
            continue
        if (tau * a + b - tau2 * tau * c - tau2 * d).is_zero():
            out.append(((a, b), (c, d)))
    return out


def brute_relation(values, bound: int = 10):
    """Some nonzero integer vector with |c_i| <= bound and sum c_i v_i == 0 exactly."""
    for cs in product(range(-bound, bound + 1), repeat=len(values)):
        if any(cs):
            total = sum((c * v for c, v in zip(cs, values)), RealAlgebraic.rational(0))
            if total.is_zero():
                return cs
    return None
