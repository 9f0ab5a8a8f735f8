import random
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from descentlab.arith import ExactComplex, PrecisionContext, RealAlgebraic
from descentlab.errors import DegenerateLatticeError, DomainError, PoleError
from descentlab.weierstrass import (
    Lattice, conjugate_lattice, eta, invariants, lattice_coordinates, legendre_residual,
    normalize_g2, reduce_basis, same_lattice, sigma_w, wp, wp_all, wp_prime, zeta_w,
)

from helpers import exact_taus

CTX = PrecisionContext(50)
MP = CTX.mp
I = ExactComplex(0, 1)
s2, s3 = RealAlgebraic.sqrt(2), RealAlgebraic.sqrt(3)


def random_lattice(rng: random.Random) -> Lattice:
    """A numeric lattice with random scale, rotation and shape."""
    x = rng.uniform(-0.5, 0.5)
    y = rng.uniform(0.9, 3.0)
    r = rng.uniform(0.3, 3.0)
    th = rng.uniform(0, 6.283)
    l1 = MP.mpc(r * mpmath.cos(th), r * mpmath.sin(th))
    return Lattice(l1, l1 * MP.mpc(x, y))


def random_point(rng: random.Random, L: Lattice):
    l1, l2 = L.numeric_basis(CTX)
    return rng.uniform(0.05, 0.95) * l1 + rng.uniform(0.05, 0.95) * l2 + rng.randint(-3, 3) * l1


def eisenstein_direct(L: Lattice, N=60):
    """Truncated lattice sums at double precision (independent of the q-series)."""
    l1 = complex(CTX.big(L.lambda1))
    l2 = complex(CTX.big(L.lambda2))
    s4 = s6 = 0
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            if m or n:
                w = m * l1 + n * l2
                s4 += w ** -4
                s6 += w ** -6
    return 60 * s4, 140 * s6


class TestLattice:
    def test_from_tau_orients(self):
        L = Lattice.from_tau(-I)
        assert L.lambda2 == I and L.oriented

    def test_degenerate(self):
        with pytest.raises(DegenerateLatticeError):
            Lattice.from_tau(s2)
        with pytest.raises(DegenerateLatticeError):
            Lattice(1, 2)

    def test_from_basis(self):
        assert Lattice.from_basis(1, -I).oriented
        assert not Lattice.from_basis(1, -I, orient=False).oriented


class TestReduction:
    @pytest.mark.parametrize("basis,expected", [
        ((1, 1 + I), (1, I)),
        ((2, 2 * I), (2, 2 * I)),
        ((1, 100 + I), (1, I)),
    ])
    def test_examples(self, basis, expected):
        R = reduce_basis(Lattice(*basis))
        assert R.is_exact
        assert (R.lambda1, R.lambda2) == tuple(ExactComplex.coerce(e) for e in expected)

    @given(exact_taus())
    @settings(max_examples=25, deadline=None)
    def test_reduced_and_same(self, tau):
        L = Lattice.from_tau(tau)
        R = reduce_basis(L)
        assert same_lattice(L, R)
        assert R.oriented
        l1, l2 = R.numeric_basis(CTX)
        # Gauss-reduced: |l1| <= |l2| and |Re(l2/l1)| <= 1/2
        assert abs(l1) <= abs(l2) * (1 + MP.mpf(10) ** -30)
        assert abs((l2 / l1).real) <= 0.5 + 1e-30

    def test_shortest_vector_oracle(self):
        rng = random.Random(3)
        for _ in range(15):
            L = random_lattice(rng)
            a, b = rng.randint(-7, 7), rng.randint(-7, 7)
            # unimodular scrambling
            l1, l2 = L.numeric_basis(CTX)
            S = Lattice(l1 + a * l2, l2 + b * (l1 + a * l2))
            R = reduce_basis(S, CTX)
            shortest = min(abs(m * l1 + n * l2) for m, n in product(range(-20, 21), repeat=2) if m or n)
            assert abs(abs(CTX.big(R.lambda1)) - shortest) < 1e-30


class TestInvariants:
    def test_square(self):
        inv = invariants(Lattice.from_tau(I), CTX)
        assert abs(inv.g3) < MP.mpf(10) ** -40
        assert abs(inv.j - 1728) < MP.mpf(10) ** -35

    def test_hexagonal(self):
        rho = ExactComplex(RealAlgebraic.rational(-1) / 2, s3 / 2)
        inv = invariants(Lattice.from_tau(rho), CTX)
        assert abs(inv.g2) < MP.mpf(10) ** -40
        assert abs(inv.j) < MP.mpf(10) ** -35

    @given(exact_taus())
    @settings(max_examples=20, deadline=None)
    def test_j_matches_kleinj(self, tau):
        tau_n = CTX.big(tau)
        if tau_n.imag < 0:
            tau_n = -tau_n
        inv = invariants(Lattice.from_tau(tau), CTX)
        with mpmath.workdps(60):
            ref = 1728 * mpmath.kleinj(tau_n)
        assert abs(inv.j - ref) <= MP.mpf(10) ** -30 * (1 + abs(ref))

    def test_direct_summation(self):
        rng = random.Random(11)
        for _ in range(3):
            L = random_lattice(rng)
            inv = invariants(L, CTX)
            g2, g3 = eisenstein_direct(L)
            assert abs(complex(inv.g2) - g2) < 1e-4 * (1 + abs(g2))
            assert abs(complex(inv.g3) - g3) < 1e-4 * (1 + abs(g3))

    def test_homogeneity(self):
        L = random_lattice(random.Random(5))
        c = MP.mpc("0.7", "1.3")
        a, b = invariants(L, CTX), invariants(L.scaled(c), CTX)
        assert abs(b.g2 - a.g2 * c ** -4) < MP.mpf(10) ** -40 * abs(a.g2 * c ** -4)
        assert abs(b.g3 - a.g3 * c ** -6) < MP.mpf(10) ** -40 * abs(a.g3 * c ** -6)
        assert abs(b.j - a.j) < MP.mpf(10) ** -35 * (1 + abs(a.j))


class TestFunctions:
    def test_differential_equation(self):
        rng = random.Random(1)
        for _ in range(5):
            L = random_lattice(rng)
            inv = invariants(L, CTX)
            for _ in range(5):
                z = random_point(rng, L)
                p, pp = wp(z, L, CTX), wp_prime(z, L, CTX)
                assert abs(pp ** 2 - 4 * p ** 3 + inv.g2 * p + inv.g3) < MP.mpf(10) ** -40 * (1 + abs(p) ** 3)

    def test_laurent_near_zero(self):
        L = random_lattice(random.Random(2))
        inv = invariants(L, CTX)
        z = MP.mpc("0.003", "0.002")
        series = 1 / z ** 2 + inv.g2 * z ** 2 / 20 + inv.g3 * z ** 4 / 28 + inv.g2 ** 2 * z ** 6 / 1200
        assert abs(wp(z, L, CTX) - series) < 1e-12
        zs = 1 / z - inv.g2 * z ** 3 / 60 - inv.g3 * z ** 5 / 140 - inv.g2 ** 2 * z ** 7 / 8400
        assert abs(zeta_w(z, L, CTX) - zs) < 1e-14

    def test_derivatives(self):
        rng = random.Random(4)
        L = random_lattice(rng)
        z = random_point(rng, L)
        dz = MP.diff(lambda w: zeta_w(w, L, CTX), z)
        dp = MP.diff(lambda w: wp(w, L, CTX), z)
        dsig = MP.diff(lambda w: sigma_w(w, L, CTX), z)
        assert abs(dz + wp(z, L, CTX)) < 1e-25
        assert abs(dp - wp_prime(z, L, CTX)) < 1e-25
        assert abs(dsig / sigma_w(z, L, CTX) - zeta_w(z, L, CTX)) < 1e-25

    def test_periodicity_and_quasi_periodicity(self):
        rng = random.Random(6)
        L = random_lattice(rng)
        inv = invariants(L, CTX)
        l1, l2 = L.numeric_basis(CTX)
        z = random_point(rng, L)
        for lam, e in ((l1, inv.eta1), (l2, inv.eta2), (3 * l1 - 2 * l2, 3 * inv.eta1 - 2 * inv.eta2)):
            assert abs(wp(z + lam, L, CTX) - wp(z, L, CTX)) < MP.mpf(10) ** -40 * (1 + abs(wp(z, L, CTX)))
            assert abs(zeta_w(z + lam, L, CTX) - zeta_w(z, L, CTX) - e) < MP.mpf(10) ** -40
            assert abs(eta(lam, L, CTX) - e) < MP.mpf(10) ** -40

    def test_sigma_law(self):
        rng = random.Random(7)
        L = random_lattice(rng)
        inv = invariants(L, CTX)
        l1, l2 = L.numeric_basis(CTX)
        z = random_point(rng, L)
        for lam, e, eps in ((l1, inv.eta1, -1), (l2, inv.eta2, -1), (l1 + l2, inv.eta1 + inv.eta2, -1),
                            (2 * l1, 2 * inv.eta1, 1), (5 * l2, 5 * inv.eta2, -1)):
            lhs = sigma_w(z + lam, L, CTX)
            rhs = eps * MP.exp(e * (z + lam / 2)) * sigma_w(z, L, CTX)
            assert abs(lhs - rhs) < MP.mpf(10) ** -38 * abs(rhs)

    def test_odd_even(self):
        L = random_lattice(random.Random(8))
        z = MP.mpc("0.31", "0.17")
        assert abs(wp(-z, L, CTX) - wp(z, L, CTX)) < MP.mpf(10) ** -40 * abs(wp(z, L, CTX))
        assert abs(zeta_w(-z, L, CTX) + zeta_w(z, L, CTX)) < MP.mpf(10) ** -40
        assert abs(sigma_w(-z, L, CTX) + sigma_w(z, L, CTX)) < MP.mpf(10) ** -40

    def test_pole(self):
        L = Lattice.from_tau(I)
        with pytest.raises(PoleError):
            wp(0, L, CTX)
        with pytest.raises(PoleError):
            zeta_w(1 + I, L, CTX)
        assert sigma_w(0, L, CTX) == 0 or abs(sigma_w(0, L, CTX)) < MP.mpf(10) ** -50

    def test_wp_all_consistent(self):
        L = random_lattice(random.Random(9))
        z = MP.mpc("1.1", "-0.4")
        p, pp, zt = wp_all(z, L, CTX)
        assert abs(p - wp(z, L, CTX)) == 0 and abs(zt - zeta_w(z, L, CTX)) == 0


class TestLegendre:
    def test_square(self):
        assert legendre_residual(Lattice.from_tau(I), CTX) < MP.mpf(10) ** -40

    def test_random(self):
        rng = random.Random(10)
        for _ in range(5):
            assert legendre_residual(random_lattice(rng), CTX) < MP.mpf(10) ** -40

    def test_swapped_basis_control(self):
        r = legendre_residual(Lattice(I, 1), CTX)
        assert abs(r - 4 * MP.pi) < MP.mpf(10) ** -40

    @given(exact_taus())
    @settings(max_examples=15, deadline=None)
    def test_exact_lattices(self, tau):
        assert legendre_residual(Lattice.from_tau(tau), CTX) < MP.mpf(10) ** -40


class TestConjugate:
    def test_examples(self):
        sq = Lattice.from_tau(I)
        assert same_lattice(conjugate_lattice(sq), sq)
        L = Lattice.from_tau(s3 * (1 + I))
        C = conjugate_lattice(L)
        assert C.source_tau == s3 * (-1 + I)
        assert same_lattice(C, Lattice.from_tau(s3 * (-1 + I)))
        R = Lattice.from_tau(s2 * I)
        assert same_lattice(conjugate_lattice(R), R)
        assert conjugate_lattice(L).oriented

    def test_invariants_conjugate(self):
        L = random_lattice(random.Random(12))
        a, b = invariants(L, CTX), invariants(conjugate_lattice(L), CTX)
        assert abs(b.g2 - MP.conj(a.g2)) < MP.mpf(10) ** -40 * abs(a.g2)
        assert abs(b.j - MP.conj(a.j)) < MP.mpf(10) ** -35 * (1 + abs(a.j))


class TestHelpers:
    def test_lattice_coordinates(self):
        L = Lattice.from_tau(s3 * (1 + I))
        l1, l2 = L.numeric_basis(CTX)
        assert lattice_coordinates(L, 3 * l1 - 5 * l2, CTX) == (3, -5)
        with pytest.raises(DomainError):
            lattice_coordinates(L, l1 / 2, CTX)

    def test_normalize_g2(self):
        L = normalize_g2(Lattice.from_tau(s3 * (1 + I)), 4, CTX)
        assert abs(invariants(L, CTX).g2 - 4) < MP.mpf(10) ** -40
