"""Density-matrix oracle: operator solves, traces, brute-force minima."""

import numpy as np
import pytest

from holevo2q.bloch import BlochModelPoint
from holevo2q.bounds import (
    WeightMatrix,
    bound_z,
    holevo_bound,
    holevo_bound_three_param,
    quadratic_abs_min,
)
from holevo2q.errors import FeasibilityError, PureStateError
from holevo2q.fisher import fisher_bundle, invert_2x2
from holevo2q.oracle import (
    PAULI,
    HermitianPair,
    bloch_coefficients,
    commutation_operator,
    density_point,
    dual_operators,
    grid_min_quadratic_abs,
    holevo_function,
    minimize_holevo_2d,
    minimize_holevo_6d,
    operator_fisher,
    pair_from_bloch_vectors,
    rld_inner,
    rld_operators,
    sld_inner,
    sld_operators,
)
from holevo2q.sampling import (
    random_d_invariant_point,
    random_generic_pair,
    random_model_point,
    random_model_point_3,
    random_planar_point,
    random_weight,
)

XHAT = np.array([1.0, 0.0, 0.0])
YHAT = np.array([0.0, 1.0, 0.0])


def point(s, d1=XHAT, d2=YHAT):
    return BlochModelPoint(s=s, d1s=d1, d2s=d2)


class TestDensityPoint:
    def test_reconstruction(self):
        rng = np.random.default_rng(70)
        for _ in range(50):
            m = random_model_point(rng)
            dp = density_point(m)
            _, s_half = bloch_coefficients(dp.rho)
            assert np.abs(2.0 * s_half.real - m.s).max() <= 1e-14
            assert abs(np.trace(dp.rho) - 1.0) <= 1e-14
            assert np.linalg.eigvalsh(dp.rho).min() > 0.0

    def test_pure_state_rejected(self):
        with pytest.raises(PureStateError):
            density_point(point([0, 0, 1.0]))


class TestSldOperators:
    def test_sigma_x_case(self):
        dp = density_point(point([0, 0, 0.5]))
        l1, l2 = sld_operators(dp)
        assert np.abs(l1 - PAULI[0]).max() <= 1e-14
        assert np.abs(l2 - PAULI[1]).max() <= 1e-14

    def test_maximally_mixed_doubles_derivative(self):
        dp = density_point(point([0, 0, 0]))
        l1, _ = sld_operators(dp)
        assert np.abs(l1 - 2.0 * dp.drho1).max() <= 1e-14

    def test_defining_equation_residuals(self):
        rng = np.random.default_rng(71)
        for _ in range(500):
            dp = density_point(random_model_point(rng))
            ls = sld_operators(dp)
            for drho, l_op in zip(dp.derivatives(), ls):
                r = drho - 0.5 * (dp.rho @ l_op + l_op @ dp.rho)
                assert np.abs(r).max() <= 1e-12

    def test_bloch_vector_cross_check(self):
        # sigma coefficients of L equal the SLD Bloch vector; the trace
        # carries twice the radial component.
        from holevo2q.bloch import sld_bloch_vectors

        rng = np.random.default_rng(72)
        for _ in range(100):
            m = random_model_point(rng)
            dp = density_point(m)
            ls = sld_operators(dp)
            vecs = sld_bloch_vectors(m)
            gammas = fisher_bundle(m).gamma
            for l_op, vec, g in zip(ls, vecs, gammas):
                _, coeff = bloch_coefficients(l_op)
                assert np.abs(coeff.real - vec).max() <= 1e-11
                assert abs(np.trace(l_op).real + 2.0 * g) <= 1e-11


class TestRldOperators:
    def test_maximally_mixed(self):
        dp = density_point(point([0, 0, 0]))
        lt1, _ = rld_operators(dp)
        assert np.abs(lt1 - 2.0 * dp.drho1).max() <= 1e-14

    def test_defining_equation_and_trace(self):
        rng = np.random.default_rng(73)
        for _ in range(500):
            dp = density_point(random_model_point(rng))
            lts = rld_operators(dp)
            for drho, lt in zip(dp.derivatives(), lts):
                assert np.abs(drho - dp.rho @ lt).max() <= 1e-12
                assert abs(np.trace(dp.rho @ lt)) <= 1e-12


class TestOperatorFisher:
    def test_cross_path_equality(self):
        # Entrywise agreement, relative to the matrix scale once entries
        # exceed O(1) (near the sampling edge Z entries reach ~1e2).
        rng = np.random.default_rng(74)
        for _ in range(500):
            m = random_model_point(rng)
            fb = fisher_bundle(m)
            g, gt, z = operator_fisher(density_point(m))
            assert np.abs(g - fb.g).max() <= 1e-10 * max(1.0, np.abs(fb.g).max())
            assert np.abs(gt - fb.g_tilde).max() <= 1e-10 * max(
                1.0, np.abs(fb.g_tilde).max()
            )
            assert np.abs(z - fb.z).max() <= 1e-10 * max(1.0, np.abs(fb.z).max())


class TestCommutationOperator:
    def test_identity_maps_to_zero(self):
        dp = density_point(point([0.2, 0.1, 0.4]))
        assert np.abs(commutation_operator(dp, np.eye(2))).max() <= 1e-14

    def test_reconstruction_relation(self):
        rng = np.random.default_rng(75)
        for _ in range(200):
            dp = density_point(random_model_point(rng))
            ls = sld_operators(dp)
            lts = rld_operators(dp)
            for l_op, lt in zip(ls, lts):
                recon = lt + 1j * commutation_operator(dp, lt)
                assert np.abs(recon - l_op).max() <= 1e-10

    def test_pairing_relations(self):
        rng = np.random.default_rng(76)
        for _ in range(200):
            dp = density_point(random_model_point(rng))
            duals = dual_operators(dp)
            g, gt, z = operator_fisher(dp)
            g_inv, gt_inv = invert_2x2(g), invert_2x2(gt)
            lts = rld_operators(dp)
            rduals = (
                gt_inv[0, 0] * lts[0] + gt_inv[1, 0] * lts[1],
                gt_inv[0, 1] * lts[0] + gt_inv[1, 1] * lts[1],
            )
            for j in range(2):
                d_dual = commutation_operator(dp, duals[j])
                for i in range(2):
                    lhs = sld_inner(dp.rho, duals[i], d_dual)
                    assert abs(lhs - z[i, j].imag) <= 1e-10
                    mixed = sld_inner(dp.rho, rduals[i], d_dual)
                    target = -1j * (gt_inv[i, j] - g_inv[i, j])
                    assert abs(mixed - target) <= 1e-10

    def test_d_invariant_span(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            dp = density_point(random_d_invariant_point(rng))
            ls = sld_operators(dp)
            duals = dual_operators(dp)
            _, _, z = operator_fisher(dp)
            for i in range(2):
                image = commutation_operator(dp, duals[i])
                recon = z.imag[0, i] * ls[0] + z.imag[1, i] * ls[1]
                assert np.abs(image - recon).max() <= 1e-9

    def test_d_invariant_dual_operators_coincide(self):
        # On D-invariant points Z = G~^-1 and the RLD dual operators equal
        # the SLD dual operators.
        rng = np.random.default_rng(90)
        for _ in range(100):
            m = random_d_invariant_point(rng)
            fb = fisher_bundle(m)
            assert np.abs(fb.z - fb.g_tilde_inv).max() <= 1e-10 * max(
                1.0, np.abs(fb.z).max()
            )
            dp = density_point(m)
            duals = dual_operators(dp)
            _, gt, _ = operator_fisher(dp)
            gt_inv = invert_2x2(gt)
            lts = rld_operators(dp)
            rduals = (
                gt_inv[0, 0] * lts[0] + gt_inv[1, 0] * lts[1],
                gt_inv[0, 1] * lts[0] + gt_inv[1, 1] * lts[1],
            )
            scale = max(1.0, max(np.abs(d).max() for d in duals))
            for d_op, r_op in zip(duals, rduals):
                assert np.abs(d_op - r_op).max() <= 1e-10 * scale

    def test_generic_residual_positive(self):
        rng = np.random.default_rng(78)
        positives = 0
        for _ in range(50):
            m = random_model_point(rng)
            dp = density_point(m)
            ls = sld_operators(dp)
            duals = dual_operators(dp)
            image = commutation_operator(dp, duals[0])
            gram = np.array(
                [[sld_inner(dp.rho, a, b).real for b in ls] for a in ls]
            )
            rhs = np.array([sld_inner(dp.rho, a, image).real for a in ls])
            coeff = np.linalg.solve(gram, rhs)
            resid = image - coeff[0] * ls[0] - coeff[1] * ls[1]
            norm = np.sqrt(sld_inner(dp.rho, resid, resid).real)
            if norm > 1e-6:
                positives += 1
        assert positives > 40  # generic points essentially never D-invariant


class TestHolevoFunction:
    def test_duals_reach_z_bound(self):
        rng = np.random.default_rng(79)
        for _ in range(100):
            m = random_model_point(rng)
            fb = fisher_bundle(m)
            w = random_weight(rng)
            pair = pair_from_bloch_vectors(m, fb.dual1, fb.dual2)
            value = holevo_function(density_point(m), pair, w)
            assert value == pytest.approx(bound_z(fb, w), rel=1e-10)

    def test_d_invariant_duals_reach_rld_bound(self):
        rng = np.random.default_rng(80)
        for _ in range(50):
            m = random_d_invariant_point(rng)
            fb = fisher_bundle(m)
            w = random_weight(rng)
            pair = pair_from_bloch_vectors(m, fb.dual1, fb.dual2)
            value = holevo_function(density_point(m), pair, w)
            rep = holevo_bound(fb, w)
            assert value == pytest.approx(rep.c_r, rel=1e-10)
            assert value == pytest.approx(rep.c_h, rel=1e-10)

    def test_weight_scaling(self):
        m = point([0.2, 0.1, 0.3])
        fb = fisher_bundle(m)
        pair = pair_from_bloch_vectors(m, fb.dual1, fb.dual2)
        dp = density_point(m)
        w = WeightMatrix(1.0, 0.2, 0.8)
        assert holevo_function(dp, pair, w.scaled(2.5)) == pytest.approx(
            2.5 * holevo_function(dp, pair, w), rel=1e-12
        )

    def test_infeasible_pair_rejected(self):
        dp = density_point(point([0.2, 0.1, 0.3]))
        bad = HermitianPair(x1=PAULI[0], x2=PAULI[1])
        with pytest.raises(FeasibilityError):
            holevo_function(dp, bad, WeightMatrix.identity())

    def test_optimal_pair_attains_bound(self):
        # Observables built from the optimal offset reproduce the bound.
        rng = np.random.default_rng(81)
        for _ in range(50):
            m, w = random_generic_pair(rng)
            fb = fisher_bundle(m)
            rep = holevo_bound(fb, w)
            perp = np.cross(m.d1s, m.d2s)
            x1 = fb.dual1 + rep.xi_star[0] * perp
            x2 = fb.dual2 + rep.xi_star[1] * perp
            pair = pair_from_bloch_vectors(m, x1, x2)
            value = holevo_function(density_point(m), pair, w)
            assert value == pytest.approx(rep.c_h, rel=1e-9)


class TestMinimizers:
    def test_2d_d_invariant(self):
        m = point([0, 0, 0.5])
        value, xi = minimize_holevo_2d(m, WeightMatrix.identity())
        assert value == pytest.approx(3.0, rel=1e-10)
        assert np.abs(xi).max() <= 1e-5

    def test_2d_matches_closed_form(self):
        rng = np.random.default_rng(82)
        for _ in range(60):
            m, w = random_generic_pair(rng)
            rep = holevo_bound(fisher_bundle(m), w)
            value, _ = minimize_holevo_2d(m, w)
            assert value == pytest.approx(rep.c_h, rel=1e-8)

    def test_2d_planar_matches_sld(self):
        rng = np.random.default_rng(83)
        for _ in range(30):
            m = random_planar_point(rng)
            w = random_weight(rng)
            rep = holevo_bound(fisher_bundle(m), w)
            value, _ = minimize_holevo_2d(m, w)
            assert value == pytest.approx(rep.c_s, rel=1e-8)

    def test_6d_matches_closed_form(self):
        rng = np.random.default_rng(84)
        for _ in range(40):
            m, w = random_generic_pair(rng)
            rep = holevo_bound(fisher_bundle(m), w)
            value = minimize_holevo_6d(density_point(m), w)
            assert value == pytest.approx(rep.c_h, rel=1e-8)

    def test_6d_d_invariant(self):
        value = minimize_holevo_6d(
            density_point(point([0, 0, 0.5])), WeightMatrix.identity()
        )
        assert value == pytest.approx(3.0, rel=1e-8)


class TestGridQuadraticOracle:
    def test_named_cases(self):
        assert grid_min_quadratic_abs(np.eye(2), np.zeros(2), 5.0) == pytest.approx(
            10.0, abs=1e-6
        )
        assert grid_min_quadratic_abs(
            np.eye(2), np.array([1.0, 0.0]), 2.0
        ) == pytest.approx(3.0, abs=1e-6)
        assert grid_min_quadratic_abs(
            2.0 * np.eye(2), np.array([0.0, 1.0]), 0.25
        ) == pytest.approx(0.125, abs=1e-6)

    def test_random_against_closed_form(self):
        rng = np.random.default_rng(85)
        for _ in range(30):
            mat = rng.standard_normal((2, 2))
            a = mat.T @ mat + 0.3 * np.eye(2)
            b = rng.standard_normal(2)
            c = float(2.0 * rng.standard_normal())
            closed, _ = quadratic_abs_min(a, b, c)
            assert grid_min_quadratic_abs(a, b, c) == pytest.approx(closed, abs=1e-6)

    def test_boundary_cases(self):
        rng = np.random.default_rng(86)
        for _ in range(10):
            mat = rng.standard_normal((2, 2))
            a = mat.T @ mat + 0.3 * np.eye(2)
            b = rng.standard_normal(2)
            alpha = float(b @ np.linalg.inv(a) @ b)
            for c in (alpha, alpha * (1 + 1e-9), alpha * (1 - 1e-9)):
                closed, _ = quadratic_abs_min(a, b, c)
                assert grid_min_quadratic_abs(a, b, c) == pytest.approx(
                    closed, abs=1e-6
                )

    def test_convexity_midpoint(self):
        rng = np.random.default_rng(87)
        mat = rng.standard_normal((2, 2))
        a = mat.T @ mat + 0.2 * np.eye(2)
        b = rng.standard_normal(2)
        c = 0.7

        def f(xi):
            return float(xi @ a @ xi) + 2.0 * abs(float(b @ xi) + c)

        for _ in range(100):
            x, y = rng.standard_normal(2), rng.standard_normal(2)
            mid = f(0.5 * (x + y))
            assert mid <= 0.5 * (f(x) + f(y)) + 1e-12


class TestThreeParamOracle:
    def test_matrix_level_agreement(self):
        # The three-parameter bound from the Bloch route must match the
        # density-matrix RLD Fisher computation.
        rng = np.random.default_rng(88)
        for _ in range(50):
            m3 = random_model_point_3(rng)
            w3 = rng.standard_normal((3, 3))
            w3 = w3.T @ w3 + 0.3 * np.eye(3)
            value = holevo_bound_three_param(m3, w3)

            rho = 0.5 * (np.eye(2) + sum(m3.s[k] * PAULI[k] for k in range(3)))
            rho_inv = np.linalg.inv(rho)
            lts = [
                rho_inv @ (0.5 * sum(d[k] * PAULI[k] for k in range(3)))
                for d in (m3.d1s, m3.d2s, m3.d3s)
            ]
            gt = np.array(
                [[rld_inner(rho, a, b) for b in lts] for a in lts]
            )
            gt_inv = np.linalg.inv(gt)
            im = 0.5 * (gt_inv.imag - gt_inv.imag.T)
            evals, evecs = np.linalg.eigh(w3)
            w_half = (evecs * np.sqrt(evals)) @ evecs.T
            expected = float(
                np.trace(w3 @ gt_inv.real)
                + np.sum(np.abs(np.linalg.eigvals(w_half @ im @ w_half)))
            )
            assert value == pytest.approx(expected, rel=1e-10)

    def test_simple_point(self):
        from holevo2q.bloch import BlochModelPoint3

        m3 = BlochModelPoint3(
            s=[0, 0, 0.5], d1s=[1, 0, 0], d2s=[0, 1, 0], d3s=[0, 0, 1]
        )
        value = holevo_bound_three_param(m3, np.eye(3))
        # Direct density-matrix computation gives the same number.
        rho = np.diag([0.75, 0.25]).astype(complex)
        rho_inv = np.linalg.inv(rho)
        lts = [rho_inv @ (0.5 * PAULI[k]) for k in range(3)]
        gt = np.array([[rld_inner(rho, a, b) for b in lts] for a in lts])
        gt_inv = np.linalg.inv(gt)
        im = 0.5 * (gt_inv.imag - gt_inv.imag.T)
        expected = float(
            np.trace(gt_inv.real) + np.sum(np.abs(np.linalg.eigvals(im)))
        )
        assert value == pytest.approx(expected, rel=1e-12)
