"""Shared fixtures: the manufactured reference cases and their solved fields.

The expensive grid solves are session-scoped so the solver, distortion,
and acceptance tests all reuse the same fields.
"""

import numpy as np
import pytest
from hypothesis import settings

from biharmonic_disk import solver, verify

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

GRID = (32, 64, 0.9)


def _case(*terms):
    return verify.manufactured_case(solver.SourceTerm(terms))


@pytest.fixture(scope="session")
def reference_cases():
    """Polynomial solutions exercising all three data channels."""
    return {
        "constant": _case((0, 0, 1.0)),
        "bump": _case((0, 0, 1.0), (1, 1, -2.0), (2, 2, 1.0)),  # (1-|z|^2)^2
        "flat": _case((0, 0, 1.0), (2, 2, -1.0)),  # 1-|z|^4
        "quartic": _case((2, 2, 1.0)),  # |z|^4
    }


@pytest.fixture(scope="session")
def reference_fields(reference_cases):
    """Each reference case solved with gradients on a 32 x 64 grid, r <= 0.9."""
    n_r, n_theta, r_max = GRID
    return {
        name: solver.solve_grid(
            case.f, case.h, case.g, n_r, n_theta,
            r_max=r_max, with_gradient=True,
        )
        for name, case in reference_cases.items()
    }


@pytest.fixture(scope="session")
def dense_radial_field():
    """(0, 0, g = 4) on a grid fine enough to localize the quotient maximum."""
    f = solver.BoundaryData.zero()
    h = solver.BoundaryData.zero()
    g = solver.SourceTerm.constant(4.0)
    return solver.solve_grid(f, h, g, 64, 128, r_max=0.95)


@pytest.fixture(scope="session")
def boundary_only_cases():
    """Cases with no load: pure trace and pure normal-derivative data."""
    zero_b = solver.BoundaryData.zero()
    zero_g = solver.SourceTerm.zero()
    return {
        "rotation": solver.Case(
            solver.BoundaryData.from_fourier([(1, 1.0)]), zero_b, zero_g),
        "radial-h": solver.Case(zero_b, solver.BoundaryData.constant(1.0), zero_g),
    }


@pytest.fixture(scope="session")
def boundary_only_fields(boundary_only_cases):
    n_r, n_theta, r_max = GRID
    return {
        name: solver.solve_grid(
            case.f, case.h, case.g, n_r, n_theta,
            r_max=r_max, with_gradient=True,
        )
        for name, case in boundary_only_cases.items()
    }


@pytest.fixture()
def interior_points():
    return np.array([0j, 0.25 + 0j, 0.5 * np.exp(1j * np.pi / 4), 0.75 + 0j, 0.9 + 0j])
