import random

import pytest
from hypothesis import given, settings, strategies as st

from descentlab import linalg
from descentlab.arith import ExactComplex, PrecisionContext, RealAlgebraic
from descentlab.errors import DomainError, InsufficientPrecisionError
from descentlab.relations import (
    Found, NoneUpTo, RelationQuery, find_integer_relation, find_integer_relations, masser_probe,
    verify_relation,
)
from descentlab.weierstrass import Lattice, invariants

CTX = PrecisionContext(50)
MP = CTX.mp
I = ExactComplex(0, 1)


def legendre_values(ctx):
    L = Lattice.from_tau(RealAlgebraic.sqrt(3) * (1 + I))
    inv = invariants(L, ctx)
    l1, l2 = L.numeric_basis(ctx)
    return [inv.eta1 * l2 - inv.eta2 * l1, 2j * ctx.mp.pi]


class TestFind:
    def test_logs(self):
        r = find_integer_relation(RelationQuery(lambda c: [c.mp.log(2), c.mp.log(4)], 10, CTX))
        assert isinstance(r, Found) and r.coefficients == (2, -1)
        assert r.verified_residual < MP.mpf(10) ** -80

    def test_sqrt2(self):
        r = find_integer_relation(RelationQuery(lambda c: [1, c.mp.sqrt(2), 1 + c.mp.sqrt(2)], 10, CTX))
        assert r.coefficients == (1, 1, -1)

    def test_legendre(self):
        r = find_integer_relation(RelationQuery(legendre_values, 10, CTX))
        assert r.coefficients == (1, -1)

    def test_none(self):
        r = find_integer_relation(RelationQuery(lambda c: [c.mp.pi, c.mp.e, c.mp.euler], 100, PrecisionContext(60)))
        assert r == NoneUpTo(100, 60)
        assert r.to_json() == {"status": "NoneUpTo", "max_coeff": 100, "decimal_digits": 60}

    def test_relation_beyond_bound(self):
        # 37 pi - 41 e has coefficients above H = 30
        r = find_integer_relation(RelationQuery(lambda c: [c.mp.pi, c.mp.e, 37 * c.mp.pi - 41 * c.mp.e], 30, CTX))
        assert isinstance(r, NoneUpTo)
        r = find_integer_relation(RelationQuery(lambda c: [c.mp.pi, c.mp.e, 37 * c.mp.pi - 41 * c.mp.e], 50, CTX))
        assert r.coefficients == (37, -41, -1)

    def test_near_miss_demoted(self):
        # agrees with 2 log 2 to 55 digits only: passes at 50 digits, fails at 100
        def vals(c):
            return [c.mp.log(2), c.mp.log(4) + c.mp.mpf(10) ** -55]
        assert isinstance(find_integer_relation(RelationQuery(vals, 10, CTX)), NoneUpTo)

    def test_complex_values(self):
        r = find_integer_relation(RelationQuery(lambda c: [c.mp.mpc(1, 2), c.mp.mpc(3, 6)], 10, CTX))
        assert r.coefficients == (3, -1)

    def test_zero_value(self):
        rs = find_integer_relations(RelationQuery(lambda c: [c.mp.pi, 0, c.mp.e], 10, CTX))
        assert [f.coefficients for f in rs] == [(0, 1, 0)]

    def test_scale_robust(self):
        rng = random.Random(1)
        for _ in range(5):
            a, b = rng.randint(-9, 9) or 1, rng.randint(-9, 9) or 2
            num, den = rng.choice([(3, 7), (-1000, 1), (1, 10 ** 8)])

            def vals(c, a=a, b=b, num=num, den=den):
                s = c.mp.mpf(num) / den
                return [s * c.mp.pi, s * c.mp.log(3), s * (a * c.mp.pi + b * c.mp.log(3))]
            r = find_integer_relation(RelationQuery(vals, 20, CTX))
            assert list(r.coefficients) == linalg.primitive([a, b, -1])

    def test_monotone(self):
        q = lambda c: [c.mp.log(2), c.mp.log(3), c.mp.log(12)]
        base = find_integer_relation(RelationQuery(q, 5, CTX))
        assert base.coefficients == (2, 1, -1)
        for H, d in ((10, 50), (20, 80), (100, 120)):
            assert find_integer_relation(RelationQuery(q, H, PrecisionContext(d))).coefficients == base.coefficients

    @given(st.lists(st.integers(-6, 6), min_size=3, max_size=5))
    @settings(max_examples=20, deadline=None)
    def test_planted(self, cs):
        if not any(cs[:-1]):
            return
        basis = [lambda c: c.mp.pi, lambda c: c.mp.log(2), lambda c: c.mp.sqrt(3), lambda c: c.mp.zeta(3)]
        n = len(cs) - 1

        def vals(c):
            xs = [basis[k](c) for k in range(n)]
            return xs + [sum(k * x for k, x in zip(cs, xs))]
        r = find_integer_relation(RelationQuery(vals, 10, CTX))
        assert isinstance(r, Found)
        planted = linalg.primitive(list(cs[:-1]) + [-1])
        assert list(r.coefficients) == planted


class TestErrors:
    def test_precision(self):
        with pytest.raises(InsufficientPrecisionError):
            find_integer_relation(RelationQuery(lambda c: [c.mp.pi] * 10, 10 ** 6, PrecisionContext(30)))

    def test_domain(self):
        with pytest.raises(DomainError):
            RelationQuery([1, 2], 0, CTX)
        with pytest.raises(DomainError):
            find_integer_relation(RelationQuery([1], 5, CTX))
        with pytest.raises(DomainError):
            verify_relation([1, 2], [1], CTX)


class TestVerify:
    def test_examples(self):
        assert verify_relation([1, 1], [1, -1], CTX) == 0
        v = legendre_values(CTX)
        assert verify_relation(v, [1, -1], CTX) < MP.mpf(10) ** -40
        assert abs(verify_relation(v, [1, 1], CTX) - 4 * MP.pi) < MP.mpf(10) ** -40


class TestMasser:
    def test_rectangular(self):
        rep = masser_probe(Lattice.from_tau(RealAlgebraic.sqrt(2) * I), CTX, H=20)
        rels = {f.coefficients for f in rep.relations_periods}
        assert (0, 1, 0, 0) in rels and (0, 0, 1, 0) in rels
        assert rep.dim_periods == 2

    def test_json(self):
        rep = masser_probe(Lattice.from_tau(RealAlgebraic.sqrt(2) * I), CTX, H=20)
        j = rep.to_json()
        assert j["dim_periods"] == 2 and j["status_periods"] == "Found"
        assert j["max_coeff"] == 20 and j["decimal_digits"] == 50
