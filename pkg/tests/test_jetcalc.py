import math

import numpy as np
import pytest
import sympy as sp

from imjet.errors import CapabilityError, InputError
from imjet.jetcalc import (
    Jet,
    SymMultiForm,
    binomial_expand,
    compat_residual,
    compat_residual_components,
    compose_truncate,
    converse_taylor_check,
    eval_polynomial,
    extract_components,
    monomial_exponents,
    polarize,
)


def random_jet(rng, order, dim_in, dim_out):
    comps = []
    for k in range(order + 1):
        n_mono = len(monomial_exponents(dim_in, k))
        comps.append(SymMultiForm(k, dim_in, dim_out, rng.standard_normal((dim_out, n_mono))))
    return Jet(order, tuple(comps))


def eval_jet_oracle(J, xi):
    """Independent evaluation: loop over every monomial with plain Python math."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(J.dim_out)
    for k, P in enumerate(J.components):
        w = 1.0 / math.factorial(k)
        for j, alpha in enumerate(monomial_exponents(J.dim_in, k)):
            term = w * float(np.prod([x**a for x, a in zip(xi, alpha)]))
            out += P.coeffs[:, j] * term
    return out


def jet_to_sympy(J, xs):
    exprs = [sp.Integer(0)] * J.dim_out
    for k, P in enumerate(J.components):
        w = sp.Rational(1, math.factorial(k))
        for j, alpha in enumerate(monomial_exponents(J.dim_in, k)):
            mono = sp.prod([x**a for x, a in zip(xs, alpha)])
            for row in range(J.dim_out):
                exprs[row] += w * sp.Float(P.coeffs[row, j], 30) * mono
    return exprs


class TestEvalPolynomial:
    def test_affine_case(self):
        J = Jet.from_components(
            [
                SymMultiForm(0, 1, 1, np.array([[1.0]])),
                SymMultiForm(1, 1, 1, np.array([[2.0]])),
            ]
        )
        assert eval_polynomial(J, np.array([3.0])) == pytest.approx(7.0, abs=1e-14)

    def test_zero_argument_returns_p0(self):
        rng = np.random.default_rng(1)
        J = random_jet(rng, 3, 2, 2)
        out = eval_polynomial(J, np.zeros(2))
        np.testing.assert_allclose(out, J.components[0].coeffs[:, 0], atol=1e-15)

    def test_against_monomial_oracle(self):
        rng = np.random.default_rng(2)
        J = random_jet(rng, 3, 2, 2)
        for _ in range(20):
            xi = rng.standard_normal(2)
            got = eval_polynomial(J, xi)
            want = eval_jet_oracle(J, xi)
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_dimension_mismatch(self):
        J = Jet.zero(2, 3, 1)
        with pytest.raises(InputError):
            eval_polynomial(J, np.zeros(2))


class TestPolarize:
    def test_product_form_hand_oracle(self):
        # P(xi) = xi_1 xi_2 on dim 2; the 4-term signed sum gives 1/2 at (e1, e2)
        P = SymMultiForm.from_monomials(2, 2, 1, {(1, 1): [1.0]})
        e1, e2 = np.eye(2)
        val = polarize(P, [e1, e2])
        assert val[0] == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_diagonal_recovers_power(self, k):
        P = SymMultiForm.from_monomials(k, 1, 1, {(k,): [1.0]})
        val = polarize(P, [np.array([1.0])] * k)
        assert val[0] == pytest.approx(1.0, abs=1e-12)

    def test_permutation_symmetry_and_tensor_agreement(self):
        rng = np.random.default_rng(3)
        n_mono = len(monomial_exponents(2, 3))
        P = SymMultiForm(3, 2, 2, rng.standard_normal((2, n_mono)))
        args = [rng.standard_normal(2) for _ in range(3)]
        base = polarize(P, args)
        np.testing.assert_allclose(polarize(P, args[::-1]), base, atol=1e-12)
        np.testing.assert_allclose(
            polarize(P, [args[1], args[0], args[2]]), base, atol=1e-12
        )
        np.testing.assert_allclose(P.apply(args), base, atol=1e-12)

    def test_diagonal_identity_property(self):
        rng = np.random.default_rng(4)
        for dim, k in [(1, 2), (2, 3), (3, 2)]:
            n_mono = len(monomial_exponents(dim, k))
            P = SymMultiForm(k, dim, 1, rng.standard_normal((1, n_mono)))
            xi = rng.standard_normal(dim)
            np.testing.assert_allclose(polarize(P, [xi] * k), P(xi), atol=1e-12, rtol=1e-12)

    def test_argument_count_mismatch(self):
        P = SymMultiForm.zero(2, 2, 1)
        with pytest.raises(InputError):
            polarize(P, [np.zeros(2)])


class TestExtractComponents:
    def test_quadratic_hand_case(self):
        # P(x) = 1 + 2x + 3x^2 -> P0=1, P1=2x, P2=6x^2 (so (1/2!)P2 = 3x^2)
        comps = extract_components(lambda x: np.array([1 + 2 * x[0] + 3 * x[0] ** 2]), 2, 1, 1)
        assert comps[0].coeffs[0, 0] == pytest.approx(1.0, abs=1e-10)
        assert comps[1].coeffs[0, 0] == pytest.approx(2.0, abs=1e-10)
        assert comps[2].coeffs[0, 0] == pytest.approx(6.0, abs=1e-10)

    def test_homogeneous_input_kills_other_degrees(self):
        rng = np.random.default_rng(5)
        n_mono = len(monomial_exponents(3, 3))
        P = SymMultiForm(3, 3, 1, rng.standard_normal((1, n_mono)))
        comps = extract_components(lambda x: P(x), 3, 3, 1)
        for k in (0, 1, 2):
            assert np.abs(comps[k].coeffs).max() < 1e-12
        # raw component carries the k! of the 1/k!-at-eval convention
        np.testing.assert_allclose(comps[3].coeffs, math.factorial(3) * P.coeffs, atol=1e-11)

    def test_round_trip_degree4_dim3(self):
        rng = np.random.default_rng(6)
        J = random_jet(rng, 4, 3, 2)
        comps = extract_components(lambda x: eval_polynomial(J, x), 4, 3, 2)
        J2 = Jet.from_components(comps)
        pts = rng.standard_normal((100, 3))
        got = eval_polynomial(J2, pts)
        want = eval_polynomial(J, pts)
        scale = np.abs(want).max()
        assert np.abs(got - want).max() <= 1e-10 * max(scale, 1.0)

    def test_order_cap(self):
        with pytest.raises(CapabilityError):
            extract_components(lambda x: x, 7, 1, 1)


class TestBinomialExpand:
    def test_scalar_cubic_coefficients(self):
        P = SymMultiForm.from_monomials(3, 1, 1, {(3,): [1.0]})
        xi, eta = np.array([1.0]), np.array([1.0])
        # P(xi+eta) = sum_j C(3,j) P({xi}^j, {eta}^{3-j}) with parts 1,3,3,1
        parts = [binomial_expand(P, j)(xi, eta)[0] for j in range(4)]
        np.testing.assert_allclose(parts, [1.0, 1.0, 1.0, 1.0], atol=1e-14)
        total = sum(math.comb(3, j) * p for j, p in enumerate(parts))
        assert total == pytest.approx(8.0, abs=1e-12)

    def test_full_slots_ignore_eta(self):
        rng = np.random.default_rng(7)
        n_mono = len(monomial_exponents(2, 2))
        P = SymMultiForm(2, 2, 1, rng.standard_normal((1, n_mono)))
        f = binomial_expand(P, 2)
        xi = rng.standard_normal(2)
        v1 = f(xi, rng.standard_normal(2))
        v2 = f(xi, rng.standard_normal(2))
        np.testing.assert_allclose(v1, v2, atol=1e-14)
        np.testing.assert_allclose(v1, P(xi), atol=1e-12)

    def test_binomial_identity_random_pairs(self):
        rng = np.random.default_rng(8)
        n_mono = len(monomial_exponents(2, 2))
        P = SymMultiForm(2, 2, 1, rng.standard_normal((1, n_mono)))
        evs = [binomial_expand(P, j) for j in range(3)]
        for _ in range(50):
            xi, eta = rng.standard_normal(2), rng.standard_normal(2)
            total = sum(math.comb(2, j) * evs[j](xi, eta) for j in range(3))
            np.testing.assert_allclose(total, P(xi + eta), atol=1e-12, rtol=1e-12)

    def test_out_of_range(self):
        P = SymMultiForm.zero(2, 2, 1)
        with pytest.raises(InputError):
            binomial_expand(P, 3)


class TestComposeTruncate:
    def test_identity_inner_is_noop(self):
        rng = np.random.default_rng(9)
        J = random_jet(rng, 3, 2, 1)
        out = compose_truncate(J, [Jet.identity(2, order=3)], 3)
        pts = rng.standard_normal((30, 2))
        np.testing.assert_allclose(
            eval_polynomial(out, pts), eval_polynomial(J, pts), atol=1e-12
        )

    def test_quadratic_of_xi_plus_xi2(self):
        # outer Q(y) = y^2, inner j(xi) = xi + xi^2, order 2:
        # (xi + xi^2)^2 = xi^2 + 2 xi^3 + xi^4 -> keep only xi^2
        outer = Jet.from_components(
            [
                SymMultiForm.zero(0, 1, 1),
                SymMultiForm.zero(1, 1, 1),
                SymMultiForm.from_monomials(2, 1, 1, {(2,): [2.0]}),  # (1/2!)*2 = 1
            ]
        )
        inner = Jet.from_components(
            [
                SymMultiForm.zero(0, 1, 1),
                SymMultiForm.from_monomials(1, 1, 1, {(1,): [1.0]}),
                SymMultiForm.from_monomials(2, 1, 1, {(2,): [2.0]}),
            ]
        )
        out = compose_truncate(outer, [inner], 2)
        # degree-2 raw component must be 2*xi^2 (so eval gives xi^2); degree 3,4 dropped
        assert out.order == 2
        assert out.components[2].coeffs[0, 0] == pytest.approx(2.0, abs=1e-12)
        for k in (0, 1):
            assert np.abs(out.components[k].coeffs).max() < 1e-14

    @pytest.mark.parametrize("dim,order", [(1, 3), (2, 3), (3, 2)])
    def test_against_sympy_expansion(self, dim, order):
        rng = np.random.default_rng(10 + dim + order)
        inner = random_jet(rng, order, dim, 2)
        outer = random_jet(rng, order, 2, 1)
        out = compose_truncate(outer, [inner], order)

        xs = sp.symbols(f"x0:{dim}")
        inner_exprs = jet_to_sympy(inner, xs)
        outer_y = sp.symbols("y0:2")
        outer_exprs = jet_to_sympy(outer, outer_y)
        composed = outer_exprs[0].subs(
            [(outer_y[0], inner_exprs[0]), (outer_y[1], inner_exprs[1])], simultaneous=True
        )
        composed = sp.expand(composed)
        truncated = sp.Integer(0)
        poly = sp.Poly(composed, *xs)
        for mono, coeff in zip(poly.monoms(), poly.coeffs()):
            if sum(mono) <= order:
                truncated += coeff * sp.prod([x**m for x, m in zip(xs, mono)])
        f_oracle = sp.lambdify(xs, truncated, "numpy")

        for _ in range(10):
            xi = rng.standard_normal(dim)
            got = eval_polynomial(out, xi)[0]
            want = float(f_oracle(*xi))
            assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_stacked_inners(self):
        # outer acts on (y0, y1) stacked from two scalar inners
        rng = np.random.default_rng(15)
        in1 = random_jet(rng, 2, 2, 1)
        in2 = random_jet(rng, 2, 2, 1)
        outer = random_jet(rng, 2, 2, 1)
        out = compose_truncate(outer, [in1, in2], 2)
        assert out.dim_in == 2

    def test_dim_mismatch(self):
        with pytest.raises(InputError):
            compose_truncate(Jet.zero(2, 3, 1), [Jet.zero(2, 2, 2)], 2)


def taylor_jet_of_callable(f, derivs, u, order, dim_out=1):
    """Build the exact 1D Taylor jet from supplied derivative callables."""
    comps = [SymMultiForm(k, 1, dim_out, np.array([[derivs[k](u)]])) for k in range(order + 1)]
    return Jet.from_components(comps)


class TestCompatResidual:
    def _poly_jets(self, rng, order=3, dim=2):
        """Jets of one global polynomial at two base points, via exact shift."""
        G = random_jet(rng, order, dim, 2)
        p = rng.standard_normal(dim)
        p1 = p + 0.3 * rng.standard_normal(dim)

        def jet_at(base):
            comps = extract_components(
                lambda x: eval_polynomial(G, base + x), order, dim, 2
            )
            return Jet.from_components(comps)

        return jet_at(p), jet_at(p1), p1 - p

    def test_global_polynomial_vanishes(self):
        rng = np.random.default_rng(16)
        Jp, Jp1, delta = self._poly_jets(rng)
        for _ in range(10):
            xi = 0.5 * rng.standard_normal(2)
            assert compat_residual(Jp1, Jp, delta, xi) < 1e-10

    def test_zero_offsets(self):
        rng = np.random.default_rng(17)
        J = random_jet(rng, 2, 2, 1)
        assert compat_residual(J, J, np.zeros(2), np.zeros(2)) == 0.0

    def test_sin_jet_bound(self):
        # jets of sin at p=0 and p1=0.1, order 2; remainder bounded via |f'''|<=1
        derivs = [np.sin, np.cos, lambda x: -np.sin(x)]
        J0 = taylor_jet_of_callable(np.sin, derivs, 0.0, 2)
        J1 = taylor_jet_of_callable(np.sin, derivs, 0.1, 2)
        r = compat_residual(J1, J0, np.array([0.1]), np.array([0.05]))
        assert r <= 2.0 * 0.15**3

    def test_component_form_vanishes_for_polynomial(self):
        rng = np.random.default_rng(18)
        Jp, Jp1, delta = self._poly_jets(rng)
        xi = rng.standard_normal((5, 2))
        for l in range(4):
            assert compat_residual_components(Jp1, Jp, delta, l, xi) < 1e-9

    def test_top_component_reduces_to_difference(self):
        rng = np.random.default_rng(19)
        J0 = random_jet(rng, 2, 2, 1)
        J1 = random_jet(rng, 2, 2, 1)
        delta = rng.standard_normal(2)
        xi = rng.standard_normal(2)
        got = compat_residual_components(J1, J0, delta, 2, xi[None, :])
        want = np.linalg.norm(
            J1.components[2].apply([xi, xi]) - J0.components[2].apply([xi, xi])
        ) / np.linalg.norm(xi) ** 2
        assert got == pytest.approx(want, rel=1e-10)

    def test_components_consistent_with_extraction(self):
        # extracting homogeneous parts of xi -> J_p(xi+delta) - J_p1(xi) matches
        # the direct per-component defects
        rng = np.random.default_rng(20)
        J0 = random_jet(rng, 3, 2, 1)
        J1 = random_jet(rng, 3, 2, 1)
        delta = 0.1 * rng.standard_normal(2)

        def defect(xi):
            return eval_polynomial(J0, xi + delta) - eval_polynomial(J1, xi)

        comps = extract_components(defect, 3, 2, 1)
        xi = rng.standard_normal(2)
        xi /= np.linalg.norm(xi)
        for l in range(4):
            direct = compat_residual_components(J1, J0, delta, l, xi[None, :])
            via_extract = np.linalg.norm(comps[l].apply([xi] * l)) if l else np.linalg.norm(
                comps[0].coeffs[:, 0]
            )
            assert direct == pytest.approx(via_extract, rel=1e-8, abs=1e-10)


class TestConverseTaylor:
    RADII = np.geomspace(1e-3, 1e-1, 9)

    def test_exact_polynomial_gives_sentinel(self):
        rng = np.random.default_rng(21)
        J = random_jet(rng, 3, 2, 1)
        fit = converse_taylor_check(
            lambda x: eval_polynomial(J, x - 0.0), np.zeros(2), J, self.RADII
        )
        assert fit.degenerate and fit.slope == math.inf

    def test_exp_slope_is_three(self):
        derivs = [np.exp, np.exp, np.exp]
        J = taylor_jet_of_callable(np.exp, derivs, 0.0, 2)
        fit = converse_taylor_check(
            lambda x: np.array([math.exp(x[0])]),
            np.zeros(1),
            J,
            self.RADII,
            directions=np.array([[1.0]]),
        )
        assert fit.slope == pytest.approx(3.0, abs=0.1)

    def test_fractional_holder_slope(self):
        J = Jet.zero(2, 1, 1)
        fit = converse_taylor_check(
            lambda x: np.array([abs(x[0]) ** 2.5]),
            np.zeros(1),
            J,
            self.RADII,
            directions=np.array([[1.0], [-1.0]]),
        )
        assert fit.slope == pytest.approx(2.5, abs=0.05)


class TestSerialization:
    def test_json_round_trip(self):
        rng = np.random.default_rng(22)
        J = random_jet(rng, 3, 2, 2)
        J2 = Jet.from_json(J.to_json())
        assert J2.order == J.order
        for a, b in zip(J.components, J2.components):
            np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_truncation_matches_dropping(self):
        rng = np.random.default_rng(23)
        J = random_jet(rng, 3, 2, 1)
        Jt = J.truncate(2)
        xi = rng.standard_normal(2)
        manual = sum(
            J.components[k](xi) / math.factorial(k) for k in range(3)
        )
        np.testing.assert_allclose(eval_polynomial(Jt, xi), manual, atol=1e-14)
