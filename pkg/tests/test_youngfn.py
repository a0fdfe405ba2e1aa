import math

import numpy as np
import pytest
from scipy.integrate import quad

from issverify import youngfn as yf

LN2 = math.log(2.0)


@pytest.fixture(scope="module")
def catalog():
    return {
        "p15": yf.power(1.5),
        "p2": yf.power(2.0),
        "p3": yf.power(3.0),
        "ll": yf.log_linear(1.0, 1.0),
        "lp": yf.log_power(math.e, 1.0, 2.0),
    }


class TestConstruction:
    def test_power_exponents_exact(self):
        Y = yf.power(3.0)
        assert Y.delta0 == Y.delta1 == 2.0
        assert yf.power(1.5).delta0 == 0.5

    def test_log_linear_exponents(self):
        Y = yf.log_linear(1.0, 1.0)
        assert 0.0 < Y.delta0 < 1.0
        assert Y.delta1 <= 1.011  # sup of the ratio is 1, plus the 1% margin

    def test_log_power_exponents(self):
        Y = yf.log_power(math.e, 1.0, 2.0)
        assert Y.delta0 < 1.0 <= Y.delta1  # ratio is 1 + s/((s+e) ln(s+e)) >= 1

    @pytest.mark.parametrize("ctor,args", [
        (yf.power, (1.0,)),
        (yf.log_linear, (0.0, 1.0)),
        (yf.log_linear, (1.0, -1.0)),
        (yf.log_power, (1.0, 1.0, 2.0)),   # c1 < e
        (yf.log_power, (math.e, 1.0, 1.0)),
    ])
    def test_invalid_parameters(self, ctor, args):
        with pytest.raises(ValueError):
            ctor(*args)

    def test_dict_round_trip(self, catalog):
        for Y in catalog.values():
            Z = yf.YoungFunction.from_dict(Y.to_dict())
            assert Z == Y


class TestPhi:
    def test_power_values(self, catalog):
        assert yf.phi(catalog["p2"], 3.0) == 3.0
        assert yf.phi(catalog["p3"], 2.0) == 4.0

    def test_log_linear_value(self, catalog):
        assert yf.phi(catalog["ll"], 1.0) == pytest.approx(LN2 + 1.0, rel=1e-15)

    def test_zero_and_monotone(self, catalog):
        s = np.linspace(0.0, 50.0, 400)
        for Y in catalog.values():
            vals = yf.phi(Y, s)
            assert vals[0] == 0.0
            assert np.all(np.diff(vals) > 0)

    def test_negative_rejected(self, catalog):
        with pytest.raises(ValueError):
            yf.phi(catalog["p2"], -1.0)

    def test_phi_prime_matches_fd(self, catalog):
        s = np.logspace(-2, 2, 40)
        eps = 1e-6
        for Y in catalog.values():
            fd = (yf.phi(Y, s * (1 + eps)) - yf.phi(Y, s * (1 - eps))) / (2 * s * eps)
            assert np.allclose(yf.phi_prime(Y, s), fd, rtol=1e-7)


class TestPhiInv:
    def test_power_closed_form(self, catalog):
        assert yf.phi_inv(catalog["p3"], 4.0) == pytest.approx(2.0, rel=1e-14)

    def test_zero(self, catalog):
        for Y in catalog.values():
            assert yf.phi_inv(Y, 0.0) == 0.0

    def test_log_linear_inverts_example(self, catalog):
        assert yf.phi_inv(catalog["ll"], LN2 + 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_round_trip_identity(self, catalog):
        s = np.logspace(-3, 3, 60)
        for Y in catalog.values():
            back = yf.phi_inv(Y, yf.phi(Y, s))
            assert np.allclose(back, s, rtol=1e-9)

    def test_negative_rejected(self, catalog):
        with pytest.raises(ValueError):
            yf.phi_inv(catalog["ll"], -0.5)


class TestBigPhi:
    def test_power_closed_forms(self, catalog):
        assert yf.big_phi(catalog["p2"], 2.0) == pytest.approx(2.0, rel=1e-14)
        assert yf.big_phi_tilde(catalog["p2"], 1.0) == pytest.approx(0.5, rel=1e-14)
        assert yf.big_phi_tilde(catalog["p3"], 1.0) == pytest.approx(2.0 / 3.0,
                                                                     rel=1e-14)

    def test_zero(self, catalog):
        for Y in catalog.values():
            assert yf.big_phi(Y, 0.0) == 0.0
            assert yf.big_phi_tilde(Y, 0.0) == 0.0

    def test_log_linear_antiderivative(self, catalog):
        # int_0^s (ln(1+t) + t) dt = (1+s) ln(1+s) - s + s^2/2
        s = np.array([0.25, 1.0, 3.0, 40.0])
        exact = (1 + s) * np.log(1 + s) - s + 0.5 * s * s
        assert np.allclose(yf.big_phi(catalog["ll"], s), exact, rtol=1e-10)
        assert yf.big_phi(catalog["ll"], 1.0) == pytest.approx(2 * LN2 - 0.5,
                                                               rel=1e-10)

    @pytest.mark.parametrize("key", ["ll", "lp"])
    def test_quadrature_against_scipy(self, catalog, key):
        Y = catalog[key]
        for s in (0.3, 1.7, 12.0):
            ref = quad(lambda t: yf.phi(Y, t), 0.0, s, limit=200)[0]
            assert yf.big_phi(Y, s) == pytest.approx(ref, rel=1e-9)
            ref_t = quad(lambda t: yf.phi_inv(Y, t), 0.0, s, limit=200)[0]
            assert yf.big_phi_tilde(Y, s) == pytest.approx(ref_t, rel=1e-8)

    def test_power_quadrature_route_agrees(self):
        # force the quadrature machinery onto a power generator by scipy
        Y = yf.power(2.5)
        s = np.array([0.5, 2.0, 7.0])
        ref = np.array([quad(lambda t: yf.phi(Y, t), 0, v)[0] for v in s])
        assert np.allclose(yf.big_phi(Y, s), ref, rtol=1e-8)

    def test_convexity_sampled(self, catalog):
        rng = np.random.default_rng(5)
        s1 = rng.uniform(0.01, 20.0, 200)
        s2 = rng.uniform(0.01, 20.0, 200)
        th = rng.uniform(0.0, 1.0, 200)
        for Y in catalog.values():
            mid = yf.big_phi(Y, th * s1 + (1 - th) * s2)
            chord = th * yf.big_phi(Y, s1) + (1 - th) * yf.big_phi(Y, s2)
            assert np.all(mid <= chord + 1e-10 * np.maximum(chord, 1.0))


class TestTolksdorf:
    def test_power_constant_ratio(self):
        lo, hi = yf.tolksdorf_bounds(yf.power(3.0), 1e-3, 1e3, 100)
        assert lo == pytest.approx(2.0, abs=1e-12)
        assert hi == pytest.approx(2.0, abs=1e-12)
        lo, hi = yf.tolksdorf_bounds(yf.power(1.5), 1e-2, 1e2, 50)
        assert (lo, hi) == (pytest.approx(0.5, abs=1e-12),) * 2

    def test_log_linear_range(self):
        lo, hi = yf.tolksdorf_bounds(yf.log_linear(1.0, 1.0), 1e-4, 1e4, 400)
        assert 0.0 < lo <= hi <= 1.0

    def test_invalid_range(self):
        with pytest.raises(ValueError):
            yf.tolksdorf_bounds(yf.power(2.0), 1.0, 0.5, 10)
        with pytest.raises(ValueError):
            yf.tolksdorf_bounds(yf.power(2.0), 0.1, 1.0, 1)

    def test_stored_exponents_bound_ratio(self, catalog):
        for Y in catalog.values():
            lo, hi = yf.tolksdorf_bounds(Y, 1e-6, Y.s_max, 800)
            assert Y.delta0 <= lo + 1e-12
            assert hi <= Y.delta1 + 1e-12


class TestEpsYoung:
    def test_classical_reduction(self):
        assert yf.eps_young_constant(1.0, 1.0, 0.5) == pytest.approx(2.0, rel=1e-14)
        assert yf.eps_young_constant(1.0, 1.0, 0.1) == pytest.approx(10.0, rel=1e-14)

    def test_two_exponent_formula_value(self):
        # (2*2/3) * ((2/3)*0.5)^(-2/3), frozen from a 30-digit mpmath check
        val = yf.eps_young_constant(1.0, 2.0, 0.5)
        assert val == pytest.approx(2.77344509740253881937, rel=1e-13)

    def test_window(self):
        with pytest.raises(ValueError):
            yf.eps_young_constant(1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            yf.eps_young_constant(1.0, 1.0, 1.5)
        # inclusive upper endpoint: classical Young inequality
        assert yf.eps_young_constant(1.0, 1.0, 1.0) == pytest.approx(1.0)

    def test_lemma_level_op_window(self, catalog):
        with pytest.raises(ValueError):
            yf.young_eps_constant(catalog["p2"], 1.0)
        assert yf.young_eps_constant(catalog["p2"], 0.5) == pytest.approx(2.0)

    @pytest.mark.parametrize("q", [1.5, 2.0, 3.0])
    def test_split_inequality_sampled_power(self, q):
        # a*b <= eps*Phi(a) + C(eps)*PhiTilde(b) over a 100x100 grid
        Y = yf.power(q)
        a = np.logspace(-2, 2, 100)
        b = np.logspace(-2, 2, 100)
        for eps in (0.1, 0.5, 0.9):
            c = yf.eps_young_constant(Y.delta0, Y.delta1, eps)
            lhs = a[:, None] * b[None, :]
            rhs = eps * yf.big_phi(Y, a)[:, None] + c * yf.big_phi_tilde(Y, b)[None, :]
            assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)


class TestLemmaSuites:
    def test_power_equalities(self, catalog):
        rep = yf.check_lemma_phi(catalog["p2"], 400, 3)
        assert rep.passed
        # scaling and pinch collapse to equalities for the power family
        for item in ("phi_scaling", "phi_primitive_pinch", "big_phi_scaling"):
            assert abs(rep.item(item).worst_slack) <= 1e-12

    def test_log_families_pass(self, catalog):
        for key in ("ll", "lp"):
            rep = yf.check_lemma_phi(catalog[key], 500, 11)
            assert rep.passed, rep.summary()
            rep = yf.check_lemma_inv(catalog[key], 500, 12)
            assert rep.passed, rep.summary()

    def test_conjugacy_closed_form(self, catalog):
        # PhiTilde(phi(1)) = 1*phi(1) - Phi(1) = 2/3 for the cubic generator
        Y = catalog["p3"]
        assert yf.big_phi_tilde(Y, yf.phi(Y, 1.0)) == pytest.approx(2.0 / 3.0,
                                                                    rel=1e-12)
        assert 1.0 * yf.phi(Y, 1.0) - yf.big_phi(Y, 1.0) == pytest.approx(
            2.0 / 3.0, rel=1e-12)

    def test_scaling_identity_at_k_equals_one(self, catalog):
        for Y in catalog.values():
            s = np.array([0.3, 2.0, 9.0])
            assert np.allclose(yf.phi(Y, 1.0 * s), yf.phi(Y, s))

    def test_sample_count_validation(self, catalog):
        with pytest.raises(ValueError):
            yf.check_lemma_phi(catalog["p2"], 0, 1)
