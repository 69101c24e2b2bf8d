"""End-to-end acceptance gate.

Each test reproduces one advertised guarantee of the package at its stated
tolerance and emits a single PASS/FAIL line (visible under pytest -s), so a
plain ``pytest tests/test_acceptance.py -v -s`` doubles as the release
checklist.
"""

import numpy as np

from biharmonic_disk import kernels, lipschitz, solver, verify
from biharmonic_disk.quadrature import DEFAULT_RULES, CircleRule, circle_integrate, disk_integrate_centered
from biharmonic_disk.solver import BoundaryData, SourceTerm
from biharmonic_disk.verify import SAMPLE_POINTS, SAMPLE_RADII, manufactured_case


def _report(label: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'}: {label} ({detail})")
    assert ok, f"{label}: {detail}"


def test_01_trace_kernel_mean_is_one():
    rule = CircleRule(512)
    worst = 0.0
    for z in SAMPLE_POINTS:
        mean = circle_integrate(rule, lambda th: kernels.f0_eval(z * np.exp(-1j * th)))
        worst = max(worst, abs(mean - 1.0))
    _report("trace kernel circle mean equals 1", worst <= 1e-10,
            f"max deviation {worst:.3e} at 5 points, tol 1e-10")


def test_02_moment_routes_mutually_agree():
    rule = CircleRule(512)
    worst = 0.0
    for beta in (1, 2):
        for r in SAMPLE_RADII:
            closed = kernels.kernel_moment(beta, r)
            series = kernels.kernel_moment_series(beta, r)
            quad = circle_integrate(
                rule, lambda th: np.abs(1.0 - r * np.exp(-1j * th)) ** (-2 * beta)
            ).real
            spread = max(closed, series, quad) - min(closed, series, quad)
            worst = max(worst, spread)
    _report("kernel moments: series, closed form, quadrature agree",
            worst <= 1e-10, f"max spread {worst:.3e}, tol 1e-10")


def test_03_log_kernel_integral_identities():
    worst = 0.0
    for z in SAMPLE_POINTS:
        def log_ratio(zeta, z=z):
            return np.log(np.abs((1.0 - np.conj(zeta) * z) / (z - zeta)) ** 2)

        mass = disk_integrate_centered(DEFAULT_RULES.disk, log_ratio, center=z).real
        worst = max(worst, abs(mass - (1.0 - abs(z) ** 2)))
        weighted = disk_integrate_centered(
            DEFAULT_RULES.disk,
            lambda zeta: np.abs(z - zeta) ** 2 * log_ratio(zeta),
            center=z,
        ).real
        worst = max(worst, abs(weighted - (1.0 - abs(z) ** 4) / 4.0))
    _report("log-kernel mass and weighted mass identities",
            worst <= 1e-8, f"max deviation {worst:.3e}, tol 1e-8")


def test_04_manufactured_solutions_recovered(reference_cases, reference_fields):
    worst = 0.0
    for name, case in reference_cases.items():
        field = reference_fields[name]
        err = float(np.max(np.abs(field.values - case.phi_star(field.points))))
        worst = max(worst, err)
    _report("manufactured solutions reproduced on 32x64 grid, r <= 0.9",
            worst <= 1e-8, f"worst sup error {worst:.3e} over 4 cases, tol 1e-8")


def test_05a_fd_bilaplacian_residual_on_quartics(reference_cases):
    worst = 0.0
    for name in ("bump", "quartic"):
        res = verify.fd_bilaplacian_residual(reference_cases[name], 0.02, extent=0.8)
        worst = max(worst, res.computed.real)
    _report("finite-difference bilaplacian matches the load on quartic cases",
            worst <= 1e-6, f"worst residual {worst:.3e} at spacing 0.02, tol 1e-6")


def test_05b_fd_residual_second_order_on_sextic():
    case = manufactured_case(SourceTerm.monomial(3, 3))
    coarse = verify.fd_bilaplacian_residual(case, 0.04, extent=0.5, tolerance=1.0)
    fine = verify.fd_bilaplacian_residual(case, 0.02, extent=0.5, tolerance=1.0)
    order = float(np.log2(coarse.computed.real / fine.computed.real))
    _report("residual converges at second order on a degree-6 solution",
            order >= 1.8,
            f"observed order {order:.3f} from residuals {coarse.computed.real:.3e} -> "
            f"{fine.computed.real:.3e}")


def test_06_green_kernel_mass_bounds():
    wanted = ("green-abs-mass", "green-grad-abs-mass", "j1", "j2", "j3")
    checks = [c for c in verify.bound_suite()
              if c.name.split("[")[0] in wanted]
    assert len(checks) == 25
    ok = all(c.passed for c in checks)
    min_margin = min(c.margin for c in checks)
    _report("Green function and gradient mass bounds (3/4, 23/6, 1/2, 17/6, 1/2)",
            ok and min_margin > 0.0,
            f"25 bounds, smallest margin {min_margin:.3e}")


def test_07_quotient_below_certified_bound(reference_cases, reference_fields,
                                            boundary_only_cases, boundary_only_fields):
    cases = {**reference_cases, **boundary_only_cases}
    fields = {**reference_fields, **boundary_only_fields}
    rs = np.array([0.0, 0.3, 0.6, 0.85])
    zs = (rs[:, None] * np.exp(1j * 2 * np.pi * np.arange(8) / 8)[None, :]).ravel()
    worst_slack = np.inf
    for name, case in cases.items():
        l_est = lipschitz.estimate_boundary_lipschitz(case.f)
        h_sup = case.h.sup_norm()
        g_sup = case.g.sup_norm_bound()
        p = lipschitz.p_bound(l_est, h_sup, g_sup)
        q = lipschitz.empirical_quotient(fields[name])
        assert q <= p + 1e-9, f"{name}: quotient {q} exceeds bound {p}"

        bz, bzb = solver.boundary_gradient(case.f, case.h, zs)
        b_cap = (220.0 / 3.0) * l_est + 4.0 * h_sup
        assert float(np.max(np.abs(bz) + np.abs(bzb))) <= b_cap + 1e-9, name

        gz, gzb = solver.green_gradient(case.g, zs)
        g_cap = (23.0 / 3.0) * g_sup
        assert float(np.max(np.abs(gz) + np.abs(gzb))) <= g_cap + 1e-9, name

        worst_slack = min(worst_slack, p - q)
    _report("difference quotients and gradient parts below certified bounds",
            worst_slack >= -1e-9,
            f"6 cases, 1e5 seeded pairs each, smallest P - quotient = {worst_slack:.3e}")


def test_08_origin_invariants_identified():
    # route agreement on a case where every data channel contributes
    f = BoundaryData.from_fourier([(1, 0.3), (-1, 0.1j)])
    h = BoundaryData.from_fourier([(1, -0.2)])
    g = SourceTerm([(1, 0, 1.0), (0, 1, 0.5)])
    ab = lipschitz.compute_ab(f, h, g)
    step = 1e-5
    fx = (solver.solve_point(f, h, g, step) - solver.solve_point(f, h, g, -step)) / (2 * step)
    fy = (solver.solve_point(f, h, g, 1j * step) - solver.solve_point(f, h, g, -1j * step)) / (2 * step)
    a_fd = abs(0.5 * (fx - 1j * fy)) ** 2
    b_fd = abs(0.5 * (fx + 1j * fy)) ** 2
    gap = max(abs(ab.a_value - a_fd), abs(ab.b_value - b_fd),
              abs(ab.a_value - ab.a_integral), abs(ab.b_value - ab.b_integral))
    ok_routes = gap <= 1e-6

    # frozen value for the rotation trace
    rot = lipschitz.compute_ab(BoundaryData.from_fourier([(1, 1.0)]),
                               BoundaryData.zero(), SourceTerm.zero())
    rot_err = abs(rot.a_value - 2.25)
    _report("origin invariants A, B agree across routes; rotation A = 9/4",
            ok_routes and rot_err <= 1e-9,
            f"route gap {gap:.3e} (tol 1e-6), |A - 2.25| = {rot_err:.3e} (tol 1e-9)")


def test_09a_perturbed_kernel_fails_mean_identity():
    checks = verify.identity_suite(
        trace_kernel=lambda z: kernels.f0_eval(z) + 0.01)
    mean_checks = [c for c in checks if c.name.startswith("trace-kernel-mean")]
    all_fail = all(not c.passed for c in mean_checks)
    _report("control: +0.01 kernel perturbation breaks the mean identity",
            all_fail, f"{sum(not c.passed for c in mean_checks)}/5 perturbed checks fail")


def test_09b_wrong_green_sign_fails_manufactured_case():
    zero = BoundaryData.zero()
    g = SourceTerm.constant(4.0)
    zs = np.array(SAMPLE_POINTS)
    wrong = np.array([
        solver.f0_transform(zero, z) + solver.h0_transform(zero, z)
        + solver.green_potential(g, z)
        for z in zs
    ])
    target = (1.0 - np.abs(zs) ** 2) ** 2
    sign_flipped = float(np.max(np.abs(wrong + target)))  # lands on -(1-|z|^2)^2
    broken = float(np.max(np.abs(wrong - target)))
    _report("control: flipped Green-term sign produces -(1-|z|^2)^2",
            sign_flipped <= 1e-8 and broken > 1.0,
            f"distance to wrong branch {sign_flipped:.3e}, "
            f"distance to true solution {broken:.3e}")
