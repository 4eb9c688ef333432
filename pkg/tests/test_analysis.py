import math

import numpy as np
import pytest

from stablepot import halfspace, sphere
from stablepot.analysis import (HALFSPACE, SPHERE, BoundaryFunction,
                                DiscreteMeasure, HarmonicRepresentation,
                                default_schedule, fatou_probe,
                                fractional_laplacian, hardy_norm,
                                hyperplane_quadrature, majorant,
                                omega_integral_probe, poisson_integral_halfspace,
                                poisson_integral_sphere, prob_hardy_norm,
                                representation_value, sphere_quadrature)
from stablepot.core import StableParams, basis_last
from stablepot.errors import (DomainError, IntegrabilityError,
                              RepresentationError)

P2 = StableParams(2, 1.5)
P3 = StableParams(3, 1.5)


class TestSphereQuadrature:
    @pytest.mark.parametrize("p,res", [(P2, 128), (P3, 32)])
    def test_weights_normalized(self, p, res):
        g = sphere_quadrature(p, res)
        assert float(np.sum(g.weights)) == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(np.linalg.norm(g.nodes, axis=1), 1.0, atol=1e-14)

    def test_odd_moment_vanishes(self):
        for p, res in ((P2, 128), (P3, 32)):
            g = sphere_quadrature(p, res)
            assert abs(g.integrate(g.nodes[:, 0])) < 1e-14

    def test_reproduces_hitting_probability(self):
        g = sphere_quadrature(P2, 256)
        x = np.array([0.5, 0.0])
        val = g.integrate(sphere.poisson_kernel(P2, x, g.nodes))
        assert val == pytest.approx(sphere.hitting_probability(P2, x), abs=1e-6)

    def test_unsupported_dimension(self):
        with pytest.raises(DomainError):
            sphere_quadrature(StableParams(4, 1.5), 32)
        with pytest.raises(DomainError):
            sphere_quadrature(P2, 4)


class TestHyperplaneQuadrature:
    @pytest.mark.parametrize("p,alpha", [(2, 1.2), (2, 1.5), (3, 1.5), (3, 1.8)])
    def test_omega_mass(self, p, alpha):
        par = StableParams(p, alpha)
        g = hyperplane_quadrature(par, 241 if p == 2 else 181, p + alpha - 2.0)
        mass = g.integrate(halfspace.omega_alpha_density(par, g.nodes))
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_odd_integrand_vanishes(self):
        g = hyperplane_quadrature(P2, 201, 3.0)
        vals = g.nodes[:, 0] / (1.0 + g.nodes[:, 0] ** 4)
        assert abs(g.integrate(vals)) < 1e-12

    def test_decay_guard(self):
        with pytest.raises(DomainError):
            hyperplane_quadrature(P2, 101, 0.9)

    def test_tail_bound_reported(self):
        g = hyperplane_quadrature(P2, 101, 2.5)
        assert 0.0 <= g.tail_bound < math.inf
        assert np.all(np.isfinite(g.nodes)) and np.all(np.isfinite(g.weights))


class TestPoissonIntegralSphere:
    def test_constant_density_gives_phi(self):
        rep = HarmonicRepresentation(SPHERE, density=BoundaryFunction(
            lambda pts: np.ones(len(pts))))
        for x in ([0.5, 0.0], [0.0, 1.7]):
            got = poisson_integral_sphere(P2, rep, x)
            assert got == pytest.approx(sphere.hitting_probability(P2, x), abs=1e-9)

    def test_constant_part_gives_complement(self):
        rep = HarmonicRepresentation(SPHERE, constant=1.0)
        x = np.array([0.3, 0.1])
        want = sphere.phi_complement(P2, float(np.linalg.norm(x)))
        assert poisson_integral_sphere(P2, rep, x) == pytest.approx(want, rel=1e-14)

    def test_atoms_sum_exactly(self):
        mu = DiscreteMeasure(np.array([[1.0, 0.0], [0.0, 1.0]]), [0.7, -0.2])
        rep = HarmonicRepresentation(SPHERE, measure=mu)
        x = np.array([0.4, -0.2])
        want = 0.7 * sphere.poisson_kernel(P2, x, np.array([1.0, 0.0])) \
            - 0.2 * sphere.poisson_kernel(P2, x, np.array([0.0, 1.0]))
        assert poisson_integral_sphere(P2, rep, x) == pytest.approx(want, rel=1e-14)

    def test_uniform_convergence_to_continuous_density(self):
        # the image of a continuous boundary function converges uniformly
        # as the slice radius tends to 1, from either side
        f = BoundaryFunction(lambda pts: pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f)
        angles = 2.0 * math.pi * np.arange(16) / 16
        boundary = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        sup_errs = []
        for k in (2, 5, 8, 11, 14):
            worst = 0.0
            for sgn in (1.0, -1.0):
                r = 1.0 + sgn * 2.0 ** -k
                for b in boundary:
                    val = representation_value(P2, rep, r * b, adapted=True)
                    worst = max(worst, abs(val - b[0]))
            sup_errs.append(worst)
        # the uniform deviation decays like (1-r)^(alpha-1), slowly
        assert all(b < a for a, b in zip(sup_errs, sup_errs[1:]))
        assert sup_errs[-1] < 1e-2

    def test_on_sphere_rejected(self):
        rep = HarmonicRepresentation(SPHERE, constant=1.0)
        with pytest.raises(DomainError):
            poisson_integral_sphere(P2, rep, [1.0, 0.0])


class TestPoissonIntegralHalfspace:
    def test_constant_density_gives_one(self):
        rep = HarmonicRepresentation(HALFSPACE, density=BoundaryFunction(
            lambda pts: np.ones(len(pts))))
        for x in ([3.0, 0.25], [0.0, -1.4]):
            assert poisson_integral_halfspace(P2, rep, x) == pytest.approx(
                1.0, abs=1e-6)

    def test_martin_atom_at_basis(self):
        mu = DiscreteMeasure(np.zeros((1, 1)), [1.0])
        rep = HarmonicRepresentation(HALFSPACE, measure=mu, flavor="martin")
        assert poisson_integral_halfspace(P2, rep, basis_last(2)) == \
            pytest.approx(1.0, rel=1e-15)

    def test_lp_convergence_for_compact_density(self):
        f = BoundaryFunction(lambda pts: np.maximum(1.0 - pts[:, 0] ** 2, 0.0))
        rep = HarmonicRepresentation(HALFSPACE, density=f)
        grid = hyperplane_quadrature(P2, 201, P2.alpha)
        fvals = f(grid.nodes)
        errs = []
        for k in (1, 3, 5, 7, 9, 11):
            t = 2.0 ** -k
            uvals = np.array([representation_value(
                P2, rep, np.array([y[0], t]), adapted=True)
                for y in grid.nodes])
            errs.append(grid.integrate(np.abs(uvals - fvals)))
        # t^(alpha-1) decay toward the boundary datum
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 8e-2

    def test_integrability_guard(self):
        # a density growing like the inverse of the reference measure has a
        # divergent image and must be refused
        bad = BoundaryFunction(lambda pts: (1.0 + np.sum(pts ** 2, axis=1))
                               ** (P2.alpha / 2.0))
        rep = HarmonicRepresentation(HALFSPACE, density=bad)
        with pytest.raises(IntegrabilityError):
            poisson_integral_halfspace(P2, rep, [0.0, 1.0])


class TestOmegaProbe:
    def test_convergent(self):
        val, div, _ = omega_integral_probe(P2, lambda pts: np.ones(len(pts)))
        assert not div
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_divergent_at_infinity(self):
        _, div, _ = omega_integral_probe(P2, lambda pts: np.abs(pts[:, 0]))
        assert div

    def test_divergent_at_interior_point(self):
        with np.errstate(all="ignore"):
            _, div, _ = omega_integral_probe(
                P2, lambda pts: np.abs(pts[:, 0]) ** (P2.alpha - 3.0))
        assert div


class TestHardyNorm:
    def test_atomic_slice_contraction_sphere(self):
        # slice L1 norms of an atomic Poisson integral never exceed the
        # total variation of the measure
        mu = DiscreteMeasure(np.array([[1.0, 0.0], [0.0, -1.0]]), [0.9, -0.6])
        rep = HarmonicRepresentation(SPHERE, measure=mu)
        grid = sphere_quadrature(P2, 512)
        for r in (0.3, 0.9, 0.999, 1.001, 1.5, 8.0):
            pts = r * grid.nodes
            kern = sphere.poisson_kernel(P2, pts[:, None, :],
                                         mu.atoms[None, :, :])
            vals = kern @ mu.weights
            norm1 = grid.integrate(np.abs(vals))
            assert norm1 <= mu.total_variation * (1.0 + 1e-9)

    def test_hitting_probability_norms(self):
        grid = sphere_quadrature(P2, 64)
        phi_fun = lambda pts: np.array(
            [sphere.phi(P2, float(np.linalg.norm(q))) for q in np.atleast_2d(pts)])
        for pexp in (1.0, 2.0, math.inf):
            est = hardy_norm(P2, SPHERE, phi_fun, pexp, grid=grid)
            assert est.value == pytest.approx(1.0, abs=1e-3)
            assert not est.diverges

    def test_atomic_halfspace_mass(self):
        mu = DiscreteMeasure(np.zeros((1, 1)), [1.0])
        rep = HarmonicRepresentation(HALFSPACE, measure=mu, flavor="poisson")
        est = hardy_norm(P2, HALFSPACE, rep, 1.0,
                         schedule=default_schedule(HALFSPACE, 16))
        assert est.value == pytest.approx(1.0, abs=1e-3)

    def test_linear_coordinate_diverges(self):
        lin = lambda pts: np.atleast_2d(pts)[:, 0]
        est = hardy_norm(P2, HALFSPACE, lin, 1.0,
                         schedule=default_schedule(HALFSPACE, 10))
        assert est.diverges

    def test_shifted_kelvin_image_diverges(self):
        e2 = basis_last(2)
        a = P2.alpha
        kt = lambda pts: (2.0 ** ((4.0 - a) / 2.0) * np.atleast_2d(pts)[:, 0]
                          * np.sum((np.atleast_2d(pts) + e2) ** 2, axis=1)
                          ** ((a - 4.0) / 2.0))
        grid = sphere_quadrature(P2, 65536)
        est = hardy_norm(P2, SPHERE, kt, 1.0, grid=grid,
                         schedule=default_schedule(SPHERE, 12))
        assert est.diverges and est.increasing_at_boundary

    def test_exponent_guard(self):
        with pytest.raises(DomainError):
            hardy_norm(P2, SPHERE, lambda pts: np.ones(len(pts)), 0.5)


class TestProbHardyNorm:
    def test_sphere_atomic(self):
        kc = sphere.constants(P2)
        mu = DiscreteMeasure(np.array([[1.0, 0.0], [-1.0, 0.0]]), [1.5, -0.5])
        rep = HarmonicRepresentation(SPHERE, measure=mu, constant=-0.25)
        want = kc.phi_at_origin * 2.0 + 0.25 * (1.0 - kc.phi_at_origin)
        assert prob_hardy_norm(P2, rep, 1.0) == pytest.approx(want, rel=1e-14)

    def test_halfspace_atomic(self):
        mu = DiscreteMeasure(np.zeros((1, 1)), [1.0])
        rep = HarmonicRepresentation(HALFSPACE, measure=mu, constant=3.0,
                                     flavor="martin")
        assert prob_hardy_norm(P2, rep, 1.0) == pytest.approx(4.0, rel=1e-15)

    def test_sphere_density_p2(self):
        kc = sphere.constants(P2)
        f = BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f, constant=0.5)
        norm2 = 1.0 + 0.125   # mean of (1 + z1/2)^2 over the circle
        want = math.sqrt(kc.phi_at_origin * norm2
                         + 0.25 * (1.0 - kc.phi_at_origin))
        assert prob_hardy_norm(P2, rep, 2.0) == pytest.approx(want, rel=1e-6)

    def test_atomic_p2_rejected(self):
        mu = DiscreteMeasure(np.array([[1.0, 0.0]]), [1.0])
        rep = HarmonicRepresentation(SPHERE, measure=mu)
        with pytest.raises(RepresentationError):
            prob_hardy_norm(P2, rep, 2.0)

    def test_halfspace_constant_not_in_lp(self):
        rep = HarmonicRepresentation(HALFSPACE, density=BoundaryFunction(
            lambda pts: np.exp(-pts[:, 0] ** 2)), constant=1.0)
        assert prob_hardy_norm(P2, rep, 2.0) == math.inf

    def test_kelvin_gallery_diverges(self):
        a = P2.alpha
        trace = BoundaryFunction(
            lambda pts: np.abs(pts[:, 0])
            * np.abs(pts[:, 0]) ** (a - 4.0))
        rep = HarmonicRepresentation(HALFSPACE, density=trace, flavor="poisson")
        with np.errstate(all="ignore"):
            assert prob_hardy_norm(P2, rep, 1.0) == math.inf


class TestMajorant:
    def test_nonnegative_rep_is_fixed_point(self):
        f = BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f, constant=0.5)
        x = np.array([0.4, 0.1])
        u = poisson_integral_sphere(P2, rep, x)
        assert majorant(P2, rep, 1.0, x) == pytest.approx(u, rel=1e-12)

    def test_jensen_domination(self):
        f = BoundaryFunction(lambda pts: pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f)
        rng = np.random.default_rng(11)
        count = 0
        while count < 100:
            x = rng.uniform(-1.5, 1.5, 2)
            if abs(np.linalg.norm(x) - 1.0) < 0.05:
                continue
            count += 1
            u = poisson_integral_sphere(P2, rep, x)
            bound = majorant(P2, rep, 2.0, x)
            assert u * u <= bound * (1.0 + 1e-9) + 1e-12

    def test_base_point_matches_prob_norm(self):
        f = BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f, constant=0.5)
        for pexp in (1.0, 2.0):
            closed = prob_hardy_norm(P2, rep, pexp)
            base = majorant(P2, rep, pexp, np.zeros(2)) ** (1.0 / pexp)
            assert base == pytest.approx(closed, abs=1e-6)
        mu = DiscreteMeasure(np.zeros((1, 1)), [0.7])
        rep_h = HarmonicRepresentation(HALFSPACE, measure=mu, constant=0.3,
                                       flavor="martin")
        base = majorant(P2, rep_h, 1.0, basis_last(2))
        assert base == pytest.approx(prob_hardy_norm(P2, rep_h, 1.0), rel=1e-12)

    def test_majorant_is_harmonic(self):
        # spot check: the density part of a majorant annihilates the
        # principal-value operator at an interior point; the tolerance is
        # set by the (distance)^(alpha-1) crease every function harmonic
        # off the circle carries at the circle, which slows the angular rule
        f = BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        grid = sphere_quadrature(P2, 128)
        fw = grid.weights * np.abs(f(grid.nodes))

        def maj(pts):
            pts = np.atleast_2d(pts)
            out = np.empty(len(pts))
            block = 16384
            for i in range(0, len(pts), block):
                chunk = pts[i:i + block]
                kern = sphere.poisson_kernel(P2, chunk[:, None, :],
                                             grid.nodes[None, :, :])
                out[i:i + block] = kern @ fw
            return out

        res = fractional_laplacian(P2, maj, np.array([0.3, 0.2]),
                                   growth_exponent=0.0,
                                   n_angle=512, n_radial=256)
        assert abs(res.value) < 5e-3 * res.local_scale


class TestFractionalLaplacian:
    def test_linear_coordinate(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            x = rng.uniform(-0.8, 0.8, 2)
            res = fractional_laplacian(P2, lambda pts: pts[:, 0], x,
                                       growth_exponent=1.0)
            assert abs(res.value) < 1e-3 * res.local_scale

    def test_martin_infinity_profile(self):
        rng = np.random.default_rng(13)
        a = P2.alpha
        for _ in range(5):
            x = rng.uniform(0.3, 1.0, 2)
            res = fractional_laplacian(
                P2, lambda pts: np.abs(pts[:, 1]) ** (a - 1.0), x,
                growth_exponent=a - 1.0)
            assert abs(res.value) < 1e-3 * res.local_scale

    def test_gaussian_is_negative_with_closed_form(self):
        res = fractional_laplacian(
            P2, lambda pts: np.exp(-np.sum(pts ** 2, axis=1)), np.zeros(2),
            growth_exponent=0.0)
        kc = sphere.constants(P2)
        want = kc.a_d_neg_alpha * math.pi * math.gamma(-P2.alpha / 2.0)
        assert res.value < 0.0
        assert res.value == pytest.approx(want, rel=1e-6)

    def test_growth_guard(self):
        with pytest.raises(IntegrabilityError):
            fractional_laplacian(P2, lambda pts: pts[:, 0], np.zeros(2),
                                 growth_exponent=1.6)

    def test_dimension_guard(self):
        with pytest.raises(DomainError):
            fractional_laplacian(P3, lambda pts: pts[:, 0], np.zeros(3),
                                 growth_exponent=1.0)


class TestFatouProbe:
    def test_smooth_density_sphere(self):
        f = BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        rep = HarmonicRepresentation(SPHERE, density=f, constant=0.5)
        rng = np.random.default_rng(14)
        probe = fatou_probe(P2, rep, np.array([0.6, 0.8]), beta=0.5, depth=20,
                            rng=rng)
        tail = probe.running_max_tail
        assert tail[-1] < 1e-2
        assert probe.target == pytest.approx(1.3)

    def test_off_atom_limit_is_zero(self):
        mu = DiscreteMeasure(np.array([[0.0, 1.0]]), [1.0])
        rep = HarmonicRepresentation(SPHERE, measure=mu)
        probe = fatou_probe(P2, rep, np.array([1.0, 0.0]), beta=1.0, depth=20,
                            rng=np.random.default_rng(15))
        assert probe.target == 0.0
        assert probe.running_max_tail[-1] < 1e-2

    def test_martin_flavor_targets_reference_density(self):
        g = BoundaryFunction(lambda pts: np.exp(-pts[:, 0] ** 2))
        rep = HarmonicRepresentation(HALFSPACE, density=g, flavor="martin")
        ybar = np.array([0.3])
        probe = fatou_probe(P2, rep, ybar, beta=4.0, depth=18,
                            rng=np.random.default_rng(16))
        want = math.exp(-0.09) / float(halfspace.omega_alpha_density(P2, ybar))
        assert probe.target == pytest.approx(want, rel=1e-12)
        assert probe.running_max_tail[-1] < 1e-2

    def test_cone_guard(self):
        rep = HarmonicRepresentation(SPHERE, constant=1.0)
        with pytest.raises(DomainError):
            fatou_probe(P2, rep, np.array([1.0, 0.0]), beta=0.0, depth=3)


class TestRepresentationValidation:
    def test_measure_or_density(self):
        mu = DiscreteMeasure(np.array([[1.0, 0.0]]), [1.0])
        with pytest.raises(RepresentationError):
            HarmonicRepresentation(SPHERE, measure=mu,
                                   density=BoundaryFunction(lambda pts: pts[:, 0]))

    def test_atoms_distinct(self):
        with pytest.raises(DomainError):
            DiscreteMeasure(np.array([[1.0, 0.0], [1.0, 0.0]]), [1.0, 2.0])

    def test_total_variation_and_absolute(self):
        mu = DiscreteMeasure(np.array([[1.0, 0.0], [0.0, 1.0]]), [1.5, -0.5])
        assert mu.total_variation == 2.0
        assert np.all(mu.absolute().weights >= 0.0)

    def test_sphere_has_no_martin_flavor(self):
        with pytest.raises(RepresentationError):
            HarmonicRepresentation(SPHERE, constant=1.0, flavor="martin")

    def test_space_mismatch_rejected(self):
        rep_s = HarmonicRepresentation(SPHERE, constant=1.0)
        rep_h = HarmonicRepresentation(HALFSPACE, constant=1.0)
        with pytest.raises(RepresentationError):
            poisson_integral_sphere(P2, rep_h, [0.5, 0.0])
        with pytest.raises(RepresentationError):
            poisson_integral_halfspace(P2, rep_s, [0.5, 1.0])

    def test_hyperplane_center_validation(self):
        with pytest.raises(DomainError):
            hyperplane_quadrature(P2, 64, 3.0, center=np.zeros(2))
        with pytest.raises(DomainError):
            hyperplane_quadrature(P2, 64, 3.0, scale=-1.0)
