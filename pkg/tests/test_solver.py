"""Boundary data containers, loads, and the assembled solution operator."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biharmonic_disk import solver
from biharmonic_disk.errors import (
    DegenerateDataError,
    DomainError,
    ResolutionPolicyError,
)
from biharmonic_disk.solver import BoundaryData, SourceTerm, case_fingerprint


# ---------------------------------------------------------------------------
# BoundaryData


def test_fourier_construction_is_exact():
    data = BoundaryData.from_fourier([(2, 1.0 + 0.5j), (-1, 2.0)], n_samples=16)
    th = np.array([0.0, 0.3, 1.7])
    expected = (1.0 + 0.5j) * np.exp(2j * th) + 2.0 * np.exp(-1j * th)
    assert np.allclose(data.eval_at(th), expected, atol=1e-13)


def test_resample_is_lossless_for_bandlimited_data():
    modes = [(3, 2.0 - 1.0j), (-2, 0.5)]
    coarse = BoundaryData.from_fourier(modes, n_samples=16)
    fine = BoundaryData.from_fourier(modes, n_samples=64)
    assert np.allclose(coarse.resample(64), fine.samples, atol=1e-13)


def test_resample_same_size_returns_samples():
    data = BoundaryData.constant(2.0, 8)
    assert data.resample(8) is data.samples


def test_constant_and_zero_constructors():
    assert np.all(BoundaryData.constant(3j, 8).samples == 3j)
    assert np.all(BoundaryData.zero(8).samples == 0)
    assert BoundaryData.zero().n == 512


def test_from_function():
    data = BoundaryData.from_function(np.cos, n_samples=32)
    assert data.samples[0] == pytest.approx(1.0)
    assert data.eval_at(np.pi / 3)[0] == pytest.approx(0.5, abs=1e-13)


def test_sup_norm():
    assert BoundaryData.from_fourier([(1, 1.0)]).sup_norm() == pytest.approx(1.0)
    spiked = BoundaryData.from_fourier([(0, 3.0), (2, 1.0)])
    assert spiked.sup_norm() == pytest.approx(4.0)
    assert BoundaryData.zero(16).sup_norm() == 0.0


def test_scalar_and_additive_arithmetic():
    a = BoundaryData.from_fourier([(1, 1.0)], 16)
    b = BoundaryData.from_fourier([(1, 2.0)], 64)
    assert np.allclose((3 * a).samples, 3 * a.samples)
    total = b + a  # mixed sample counts resample to the left operand
    assert total.n == 64
    expected = BoundaryData.from_fourier([(1, 3.0)], 64)
    assert np.allclose(total.samples, expected.samples, atol=1e-13)


@pytest.mark.parametrize(
    "samples",
    [np.ones(3), np.ones(7), np.ones(2), [1.0, np.inf, 0.0, 0.0]],
)
def test_boundary_data_rejects_bad_samples(samples):
    with pytest.raises(DegenerateDataError):
        BoundaryData(samples)


def test_unresolvable_mode_is_rejected():
    with pytest.raises(DegenerateDataError):
        BoundaryData.from_fourier([(256, 1.0)], n_samples=512)
    with pytest.raises(DegenerateDataError):
        BoundaryData.from_fourier([(-8, 1.0)], n_samples=16)


def test_samples_are_read_only():
    data = BoundaryData.zero(8)
    with pytest.raises(ValueError):
        data.samples[0] = 1.0


# ---------------------------------------------------------------------------
# SourceTerm


def test_source_term_merges_and_drops_zeros():
    g = SourceTerm([(1, 1, 2.0), (1, 1, -1.0), (0, 0, 0.0)])
    assert g.terms == ((1, 1, 1.0),)


def test_source_term_classification():
    assert SourceTerm.zero().is_zero
    assert SourceTerm.constant(4.0).is_constant
    assert SourceTerm.constant(4.0).constant_value() == 4.0
    assert not SourceTerm.monomial(1, 1).is_constant


def test_source_term_evaluate():
    g = SourceTerm([(2, 1, 1.0)])
    z = 0.5 + 0.5j
    assert g(z) == pytest.approx(z**2 * np.conj(z))
    grid = np.array([[0.1, 0.2j], [0.3, 0.4]])
    assert g(grid).shape == (2, 2)


@pytest.mark.parametrize(
    "terms,expected",
    [
        (((2, 2, 1.0),), ((0, 0, 4.0),)),
        (((3, 3, 1.0),), ((1, 1, 36.0),)),
        (((0, 0, 1.0), (1, 1, -2.0), (2, 2, 1.0)), ((0, 0, 4.0),)),
        (((1, 0, 5.0),), ()),
    ],
)
def test_bilaplacian(terms, expected):
    assert SourceTerm(terms).bilaplacian().terms == expected


def test_sup_norm_bound_and_estimate():
    g = SourceTerm([(1, 1, 3.0), (0, 0, -1.0)])
    assert g.sup_norm_bound() == pytest.approx(4.0)
    # |3 |z|^2 - 1| peaks at 2 on the closed disk
    assert g.sup_norm_estimate() == pytest.approx(2.0, abs=1e-3)
    assert g.sup_norm_estimate() <= g.sup_norm_bound() + 1e-12
    assert SourceTerm.zero().sup_norm_estimate() == 0.0


def test_source_term_exponent_validation():
    with pytest.raises(DomainError):
        SourceTerm([(-1, 0, 1.0)])
    with pytest.raises(DomainError):
        SourceTerm([(0, solver.MAX_EXPONENT + 1, 1.0)])


def test_source_term_algebra():
    g = SourceTerm.monomial(1, 1, 2.0).scaled(3.0) + SourceTerm.constant(1.0)
    assert g.terms == ((0, 0, 1.0), (1, 1, 6.0))


# ---------------------------------------------------------------------------
# fingerprints


def test_fingerprint_depends_only_on_case_data():
    f = BoundaryData.from_fourier([(1, 1.0)], 16)
    h = BoundaryData.zero(16)
    g = SourceTerm.constant(4.0)
    again = case_fingerprint(
        BoundaryData.from_fourier([(1, 1.0)], 16), BoundaryData.zero(16),
        SourceTerm.constant(4.0),
    )
    assert case_fingerprint(f, h, g) == again


def test_fingerprint_sensitivity():
    f = BoundaryData.zero(16)
    h = BoundaryData.zero(16)
    base = case_fingerprint(f, h, SourceTerm.constant(4.0))
    assert case_fingerprint(f, h, SourceTerm.constant(5.0)) != base
    assert case_fingerprint(BoundaryData.constant(1e-9, 16), h, SourceTerm.constant(4.0)) != base


# ---------------------------------------------------------------------------
# point solves


def test_constant_trace_reproduces_constant():
    f = BoundaryData.constant(1.0)
    h = BoundaryData.zero()
    g = SourceTerm.zero()
    for z in (0j, 0.5, 0.8j, -0.3 + 0.4j):
        assert solver.solve_point(f, h, g, z) == pytest.approx(1.0, abs=1e-12)


def test_constant_normal_derivative_field():
    # (f, h, g) = (0, 1, 0) solves to (1 - |z|^2) / 2.
    f = BoundaryData.zero()
    h = BoundaryData.constant(1.0)
    g = SourceTerm.zero()
    for r in (0.0, 0.3, 0.7, 0.95):
        expected = 0.5 * (1.0 - r**2)
        assert solver.solve_point(f, h, g, r) == pytest.approx(expected, abs=1e-10)


def test_pure_load_field():
    # (f, h, g) = (0, 0, 4) solves to (1 - |z|^2)^2.
    f = BoundaryData.zero()
    h = BoundaryData.zero()
    g = SourceTerm.constant(4.0)
    for z in (0j, 0.5, 0.3 + 0.4j):
        expected = (1.0 - abs(z) ** 2) ** 2
        assert solver.solve_point(f, h, g, z) == pytest.approx(expected, abs=1e-10)


def test_quartic_case_needs_all_three_channels():
    # |z|^4 has trace 1, inward normal derivative -4, load 4.
    f = BoundaryData.constant(1.0)
    h = BoundaryData.constant(-4.0)
    g = SourceTerm.constant(4.0)
    for z in (0.2, 0.6j, -0.5 + 0.5j):
        assert solver.solve_point(f, h, g, z) == pytest.approx(abs(z) ** 4, abs=1e-8)


def test_solution_is_linear_in_the_data():
    z = 0.4 + 0.1j
    f1, h1, g1 = BoundaryData.from_fourier([(1, 1.0)]), BoundaryData.zero(), SourceTerm.zero()
    f2, h2, g2 = BoundaryData.zero(), BoundaryData.constant(1.0), SourceTerm.constant(4.0)
    separate = solver.solve_point(f1, h1, g1, z) + solver.solve_point(f2, h2, g2, z)
    joint = solver.solve_point(f1 + f2, h1 + h2, g1 + g2, z)
    assert joint == pytest.approx(separate, abs=1e-9)


@given(c=st.floats(min_value=-3.0, max_value=3.0))
def test_boundary_solve_scales_linearly(c):
    f = BoundaryData.from_fourier([(1, 1.0), (0, 0.5)], 64)
    h = BoundaryData.zero(64)
    g = SourceTerm.zero()
    z = 0.3 + 0.2j
    base = solver.solve_point(f, h, g, z)
    scaled = solver.solve_point(f * c, h, g, z)
    assert scaled == pytest.approx(c * base, abs=1e-12)


def test_trace_recovery_near_boundary():
    f = BoundaryData.from_function(lambda th: np.exp(np.cos(th)))
    h = BoundaryData.zero()
    g = SourceTerm.zero()
    theta0 = 1.0
    z = 0.995 * np.exp(1j * theta0)
    target = np.exp(np.cos(theta0))
    assert abs(solver.solve_point(f, h, g, z) - target) <= 0.05


def test_point_refinement_keeps_radial_profile_accurate():
    # At r = 0.995 the base 512-node rule underresolves; refinement kicks in.
    f = BoundaryData.zero()
    h = BoundaryData.constant(1.0)
    g = SourceTerm.zero()
    r = 0.995
    assert solver.solve_point(f, h, g, r) == pytest.approx(0.5 * (1 - r**2), abs=1e-8)


def test_point_too_close_to_circle_is_refused():
    f = BoundaryData.constant(1.0)
    with pytest.raises(ResolutionPolicyError):
        solver.solve_point(f, BoundaryData.zero(), SourceTerm.zero(), 1.0 - 1e-14)


def test_solve_points_matches_individual_solves():
    f = BoundaryData.from_fourier([(1, 0.5)])
    h = BoundaryData.constant(1.0)
    g = SourceTerm.monomial(1, 1, 2.0)
    zs = np.array([0.1, 0.5j, -0.4 + 0.2j])
    batch = solver.solve_points(f, h, g, zs)
    single = [solver.solve_point(f, h, g, z) for z in zs]
    assert np.allclose(batch, single, atol=1e-13)


# ---------------------------------------------------------------------------
# gradients


def test_gradient_of_pure_load_field():
    # Phi = (1 - |z|^2)^2 has Phi_z = -2 conj(z) (1 - |z|^2).
    g = SourceTerm.constant(4.0)
    zero = BoundaryData.zero()
    for z in (0.3 + 0.2j, -0.5j, 0.7):
        pair = solver.gradient_point(zero, zero, g, z)
        expected = -2.0 * np.conj(z) * (1.0 - abs(z) ** 2)
        assert pair.d_z == pytest.approx(expected, abs=1e-9)
        assert pair.d_zbar == pytest.approx(np.conj(expected), abs=1e-9)


def test_gradient_of_normal_derivative_field():
    # Phi = (1 - |z|^2)/2 has Phi_z = -conj(z)/2.
    h = BoundaryData.constant(1.0)
    zero = BoundaryData.zero()
    pair = solver.gradient_point(zero, h, SourceTerm.zero(), 0.5)
    assert pair.d_z == pytest.approx(-0.25, abs=1e-10)


def test_gradient_matches_difference_quotient():
    f = BoundaryData.from_fourier([(1, 1.0), (2, 0.5j)])
    h = BoundaryData.constant(-1.0)
    g = SourceTerm.constant(2.0)
    z = 0.35 - 0.15j
    step = 1e-5
    fx = (solver.solve_point(f, h, g, z + step) - solver.solve_point(f, h, g, z - step)) / (2 * step)
    fy = (solver.solve_point(f, h, g, z + 1j * step) - solver.solve_point(f, h, g, z - 1j * step)) / (2 * step)
    pair = solver.gradient_point(f, h, g, z)
    assert pair.d_z == pytest.approx(0.5 * (fx - 1j * fy), abs=1e-7)
    assert pair.d_zbar == pytest.approx(0.5 * (fx + 1j * fy), abs=1e-7)


def test_gradient_splits_into_boundary_and_green_parts():
    f = BoundaryData.constant(1.0)
    h = BoundaryData.constant(-4.0)
    g = SourceTerm.constant(4.0)
    zs = np.array([0.2 + 0.1j, -0.6j])
    pair0 = solver.gradient_point(f, h, g, zs[0])
    bz, bzb = solver.boundary_gradient(f, h, zs)
    gz, gzb = solver.green_gradient(g, zs)
    assert bz[0] + gz[0] == pytest.approx(pair0.d_z, abs=1e-14)
    assert bzb[0] + gzb[0] == pytest.approx(pair0.d_zbar, abs=1e-14)


# ---------------------------------------------------------------------------
# grid solves


def test_grid_constant_case(reference_cases):
    case = reference_cases["constant"]
    field = solver.solve_grid(case.f, case.h, case.g, 8, 8)
    assert field.values.shape == (8, 8)
    assert np.allclose(field.values, 1.0, atol=1e-10)
    assert field.failures == []
    assert field.d_z is None


def test_grid_radial_profile():
    f = BoundaryData.zero()
    h = BoundaryData.constant(1.0)
    field = solver.solve_grid(f, h, SourceTerm.zero(), 8, 4)
    expected = 0.5 * (1.0 - field.radii**2)
    assert np.allclose(field.values, expected[:, None], atol=1e-10)


def test_grid_geometry():
    field = solver.solve_grid(
        BoundaryData.zero(), BoundaryData.zero(), SourceTerm.zero(), 4, 8, r_max=0.8
    )
    assert np.allclose(field.radii, 0.8 * np.arange(4) / 4)
    assert np.allclose(field.thetas, 2 * np.pi * np.arange(8) / 8)
    assert field.n_r == 4 and field.n_theta == 8
    assert field.points.shape == (4, 8)
    assert np.all(field.values == 0.0)


def test_grid_fingerprint_matches_case(reference_cases, reference_fields):
    case = reference_cases["bump"]
    field = reference_fields["bump"]
    assert field.fingerprint == case_fingerprint(case.f, case.h, case.g)


def test_reference_fields_match_exact_solutions(reference_cases, reference_fields):
    for name, case in reference_cases.items():
        field = reference_fields[name]
        exact = case.phi_star(field.points)
        err = np.max(np.abs(field.values - exact))
        assert err < 1e-8, f"{name}: {err}"


def test_grid_refuses_unresolvable_outer_radius():
    zero = BoundaryData.zero()
    with pytest.raises(ResolutionPolicyError):
        solver.solve_grid(zero, zero, SourceTerm.zero(), 100, 4)


def test_grid_near_boundary_override():
    f = BoundaryData.constant(1.0)
    zero = BoundaryData.zero()
    field = solver.solve_grid(
        f, zero, SourceTerm.zero(), 100, 4, allow_near_boundary=True
    )
    assert np.allclose(field.values, 1.0, atol=1e-10)


def test_grid_hard_radius_cap_cannot_be_overridden():
    zero = BoundaryData.zero()
    with pytest.raises(ResolutionPolicyError):
        solver.solve_grid(
            zero, zero, SourceTerm.zero(), 2000, 4, allow_near_boundary=True
        )


def test_grid_argument_validation():
    zero = BoundaryData.zero()
    with pytest.raises(DegenerateDataError):
        solver.solve_grid(zero, zero, SourceTerm.zero(), 0, 4)
    with pytest.raises(DomainError):
        solver.solve_grid(zero, zero, SourceTerm.zero(), 4, 4, r_max=0.0)
    with pytest.raises(DomainError):
        solver.solve_grid(zero, zero, SourceTerm.zero(), 4, 4, r_max=1.5)


def test_grid_isolates_failing_nodes(monkeypatch):
    original = solver._green_potential_batch
    target = 0.4j

    def sabotaged(g, zs, rules=solver.DEFAULT_RULES):
        if np.any(np.abs(zs - target) < 1e-12):
            raise DomainError("injected failure")
        return original(g, zs, rules)

    monkeypatch.setattr(solver, "_green_potential_batch", sabotaged)
    zero = BoundaryData.zero(8)
    field = solver.solve_grid(zero, zero, SourceTerm.constant(4.0), 4, 4, r_max=0.8)
    assert len(field.failures) == 1
    i, j, message = field.failures[0]
    assert (i, j) == (2, 1)
    assert "injected failure" in message
    assert np.isnan(field.values[2, 1].real)
    good = ~np.isnan(field.values.real)
    assert good.sum() == 15
    expected = (1.0 - np.abs(field.points) ** 2) ** 2
    assert np.allclose(field.values[good], expected[good], atol=1e-9)


def test_grid_gradient_matches_closed_form(reference_fields):
    field = reference_fields["bump"]
    z = field.points
    expected = -2.0 * np.conj(z) * (1.0 - np.abs(z) ** 2)
    assert np.max(np.abs(field.d_z - expected)) < 1e-8
    assert np.max(np.abs(field.d_zbar - np.conj(expected))) < 1e-8
