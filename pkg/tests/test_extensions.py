import random

import pytest

from descentlab.arith import ExactComplex, PrecisionContext, RealAlgebraic
from descentlab.errors import DomainError, PoleError
from descentlab.extensions import (
    ExtensionSpec, exp_ext, kernel_element, kernel_generators, periodicity_residual,
    projective_distance,
)
from descentlab.weierstrass import Lattice, invariants, wp, wp_prime, zeta_w

CTX = PrecisionContext(50)
MP = CTX.mp
I = ExactComplex(0, 1)
SQ = Lattice.from_tau(I)
SHEAR = Lattice.from_tau(RealAlgebraic.sqrt(3) * (1 + I))
TIGHT = MP.mpf(10) ** -30


def rz(rng):
    return (MP.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)), MP.mpc(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)))


def specs(normalization="lemma"):
    yield ExtensionSpec("ga", 1, SQ, normalization)
    yield ExtensionSpec("ga", MP.mpc("0.3", "-1.7"), SHEAR, normalization)
    yield ExtensionSpec("gm", MP.mpc("0.37", "0.21"), SQ, normalization)
    yield ExtensionSpec("gm", MP.mpc("0.5", "0.9"), SHEAR, normalization)


class TestExp:
    def test_projects_to_curve(self):
        rng = random.Random(1)
        for spec in specs():
            z1, z2 = rz(rng)
            P = exp_ext(spec, z1, z2, CTX)
            Q = exp_ext(spec, z1 + MP.mpc(2, 1), z2, CTX)
            assert P[0] == wp(z2, spec.base, CTX) and P[1] == wp_prime(z2, spec.base, CTX)
            assert P[2] == 1
            assert Q[0] == P[0] and Q[1] == P[1]

    def test_ga_t_zero_is_product(self):
        spec = ExtensionSpec("ga", 0, SQ)
        P = exp_ext(spec, MP.mpc(2, 3), MP.mpc("0.3", "0.4"), CTX)
        assert P[5] == MP.mpc(2, 3)

    def test_fiber_action(self):
        rng = random.Random(2)
        c = MP.mpc("0.4", "-0.25")
        for spec in specs():
            z1, z2 = rz(rng)
            P, Q = exp_ext(spec, z1, z2, CTX), exp_ext(spec, z1 + c, z2, CTX)
            if spec.kind == "ga":
                assert abs(Q[5] - P[5] - c) < TIGHT
                assert abs(Q[4] - P[4] - c * P[1]) < TIGHT * 10 ** 3
                assert abs(Q[3] - P[3] - c * P[0]) < TIGHT * 10 ** 3
            else:
                for k in (3, 4, 5):
                    assert abs(Q[k] - MP.exp(c) * P[k]) < TIGHT * (1 + abs(Q[k]))

    def test_gm_z1_period(self):
        spec = ExtensionSpec("gm", MP.mpc("0.37", "0.21"), SQ)
        z1, z2 = MP.mpc("0.2", "0.1"), MP.mpc("0.3", "0.6")
        P, Q = exp_ext(spec, z1, z2, CTX), exp_ext(spec, z1 + 2j * MP.pi, z2, CTX)
        assert projective_distance(P, Q, CTX) < TIGHT

    def test_poles(self):
        with pytest.raises(PoleError) as e:
            exp_ext(ExtensionSpec("ga", 1, SQ), 0, 1 + I, CTX)
        assert e.value.coordinate == "z2"
        w = MP.mpc("0.37", "0.21")
        with pytest.raises(PoleError) as e:
            exp_ext(ExtensionSpec("gm", w, SQ), 0, -w, CTX)
        assert e.value.coordinate == "f1"
        with pytest.raises(PoleError) as e:
            exp_ext(ExtensionSpec("gm", 1 + I, SQ), 0, MP.mpc("0.3", "0.2"), CTX)
        assert e.value.coordinate == "omega"

    def test_bad_spec(self):
        with pytest.raises(DomainError):
            ExtensionSpec("gx", 1, SQ)
        with pytest.raises(DomainError):
            ExtensionSpec("ga", 1, SQ, "other")


class TestKernel:
    def test_generators_closed_form(self):
        inv = invariants(SHEAR, CTX)
        l1, l2 = SHEAR.numeric_basis(CTX)
        g = kernel_generators(ExtensionSpec("ga", 1, SHEAR), CTX)
        assert g[0] == (inv.eta1, l1) and g[1] == (inv.eta2, l2)
        assert kernel_generators(ExtensionSpec("ga", 0, SHEAR), CTX)[0] == (0, l1)
        w = MP.mpc("0.5", "0.9")
        g = kernel_generators(ExtensionSpec("gm", w, SHEAR), CTX)
        assert abs(g[0][0] - (zeta_w(w, SHEAR, CTX) * l1 - inv.eta1 * w)) < TIGHT

    def test_periodicity(self):
        rng = random.Random(3)
        for norm in ("lemma", "printed"):
            for spec in specs(norm):
                for _ in range(2):
                    assert periodicity_residual(spec, rz(rng), CTX) < TIGHT

    def test_lattice_closure(self):
        rng = random.Random(4)
        for spec in specs():
            z1, z2 = rz(rng)
            base = exp_ext(spec, z1, z2, CTX)
            for m in range(-3, 4):
                for n in range(-3, 4):
                    a, b = kernel_element(spec, m, n, CTX)
                    assert projective_distance(base, exp_ext(spec, z1 + a, z2 + b, CTX), CTX) < 10 * TIGHT

    def test_perturbed_generator_control(self):
        rng = random.Random(5)
        for spec in specs():
            g1, g2 = kernel_generators(spec, CTX)
            bad = [(g1[0], g1[1] * MP.mpf("1.01")), g2]
            assert periodicity_residual(spec, rz(rng), CTX, generators=bad) > 1e-3

    def test_normalizations_do_not_mix(self):
        # each uniformization is periodic only for its own generators
        rng = random.Random(6)
        for lemma, printed in zip(specs("lemma"), specs("printed")):
            z = rz(rng)
            assert periodicity_residual(printed, z, CTX, generators=kernel_generators(lemma, CTX)) > 1e-3
            assert periodicity_residual(lemma, z, CTX, generators=kernel_generators(printed, CTX)) > 1e-3

    def test_precision_scales(self):
        spec = ExtensionSpec("gm", MP.mpc("0.37", "0.21"), SHEAR)
        z = (MP.mpc("0.2", "0.1"), MP.mpc("0.3", "0.6"))
        hi = PrecisionContext(80)
        assert periodicity_residual(spec, z, hi) < hi.mp.mpf(10) ** -60
