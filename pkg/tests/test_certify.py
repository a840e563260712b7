import math

import numpy as np
import pytest

from radii import (CapReached, CertificationFailure, FamilySpec, Normalization, RadiusKind, RadiusProblem,
                   boundary_max, brute_force_radius, certify, domain_cap, solve_radius)
from radii.certify import lhs_values, sample_circle

LEG2 = FamilySpec.legendre(2)
I = Normalization.INTRINSIC
LEM_STAR_LEG = RadiusProblem(LEG2, I, RadiusKind.lem_star())
R_LEM_STAR_LEG = (math.sqrt(2) - 1) * math.sqrt(3 / 5)


def _legendre_phi(z):
    # z P_3'(z) / P_3(z) for P_3 proportional to z - 5 z^3 / 3
    return (1 - 5 * z * z) / (1 - 5 * z * z / 3)


def _dense_lemniscate_max(rho, n=20001):
    z = rho * np.exp(1j * np.linspace(0, np.pi, n))
    return np.max(np.abs(_legendre_phi(z) ** 2 - 1))


def _dense_lemniscate_radius(step=1e-5):
    rho = step
    while _dense_lemniscate_max(rho, 4001) < 1:
        rho += step
    return rho - step


def test_boundary_max_small_circle():
    assert boundary_max(LEM_STAR_LEG, 1e-6, 64) < 1e-10


def test_boundary_max_matches_closed_form_oracle():
    got = boundary_max(LEM_STAR_LEG, R_LEM_STAR_LEG, 256)
    assert got == pytest.approx(_dense_lemniscate_max(R_LEM_STAR_LEG), abs=1e-4)
    vals, _ = sample_circle(LEM_STAR_LEG, R_LEM_STAR_LEG, 256)
    # on the real axis phi = 2 - sqrt 2, so |phi^2 - 1| = 4 sqrt 2 - 5
    assert vals[0] == pytest.approx(4 * math.sqrt(2) - 5, abs=1e-10)
    # the disk radius is not where the lemniscate is first touched: the maximum lies off the axis
    assert got > vals[0] + 0.04 and got < 1


def test_janowski_inside_radius():
    problem = RadiusProblem(LEG2, I, RadiusKind.jan_star(1, -1))
    assert boundary_max(problem, 0.40, 256) < 1


@pytest.mark.parametrize("kind, expected", [
    (RadiusKind.jan_convex(1, -1), 1 / math.sqrt(15)),
    (RadiusKind.jan_star(1, -1), 1 / math.sqrt(5)),
    (RadiusKind.jan_star(0.5, 0), math.sqrt(0.12)),
], ids=str)
def test_brute_force_janowski_legendre(kind, expected):
    got = brute_force_radius(RadiusProblem(LEG2, I, kind), 1e-4, 256)
    assert abs(got - expected) <= 2e-4


def test_brute_force_lemniscate_legendre_matches_dense_oracle():
    got = brute_force_radius(LEM_STAR_LEG, 1e-4, 256)
    assert abs(got - _dense_lemniscate_radius()) <= 2e-4
    assert got > R_LEM_STAR_LEG + 0.05


@pytest.mark.parametrize("norm", [Normalization.F, Normalization.G, Normalization.H])
def test_brute_force_agrees_with_solver_for_janowski(norm):
    problem = RadiusProblem(FamilySpec.bessel(1.0), norm, RadiusKind.jan_convex(1, -1))
    r = solve_radius(problem).radius
    assert abs(brute_force_radius(problem, 1e-4, 256) - r) <= 2e-4


def test_brute_force_exhaustive_scan_agrees():
    problem = RadiusProblem(FamilySpec.lommel(0.25), Normalization.G, RadiusKind.jan_star(0.5, 0))
    step = 1e-3
    fast = brute_force_radius(problem, step, 64)
    grid = step * np.arange(1, int(domain_cap(problem) / step))
    maxima = [boundary_max(problem, rho, 64) for rho in grid]
    first = next(i for i, m in enumerate(maxima) if m >= 1)
    assert fast == pytest.approx(grid[first] - step, abs=1e-12)


def test_brute_force_cap_reached():
    problem = RadiusProblem(LEG2, I, RadiusKind.jan_star(1, -1))
    with pytest.raises(CapReached):
        brute_force_radius(problem, 1e-4, 64, cap=0.2)


def test_brute_force_step_guard():
    with pytest.raises(ValueError):
        brute_force_radius(LEM_STAR_LEG, 0.01, 64)


def test_certificate_for_bessel_janowski():
    problem = RadiusProblem(FamilySpec.bessel(1.0), Normalization.G, RadiusKind.jan_star(1, 0))
    cert = certify(problem)
    assert cert.inner_margin > 0 and cert.outer_violation > 0
    assert abs(cert.oracle_delta) <= 2 * cert.oracle_step
    assert cert.real_extremal and cert.outer_check == "real-point"
    assert (cert.epsilon, cert.n_angles) == (1e-3, 256)


def test_lemniscate_certificate_fails_outer_face():
    with pytest.raises(CertificationFailure) as info:
        certify(LEM_STAR_LEG)
    err = info.value
    assert err.face == "outer"
    cert = err.certificate
    assert cert.inner_margin > 0
    assert not cert.real_extremal and cert.outer_check == "full-circle"
    assert cert.oracle_delta > 0.05


def test_wrong_radius_fails_inner_face():
    problem = RadiusProblem(LEG2, I, RadiusKind.jan_star(1, -1))
    cap = domain_cap(problem)
    with pytest.raises(CertificationFailure) as info:
        certify(problem, radius=cap * 0.999999)
    assert info.value.face == "inner"


def test_outer_face_skipped_beyond_cap():
    problem = RadiusProblem(LEG2, I, RadiusKind.jan_convex(1, -1))
    cap = domain_cap(problem)
    with pytest.raises(CertificationFailure) as info:
        certify(problem, radius=cap * (1 - 1e-4))
    assert info.value.certificate.outer_check == "skipped"


@pytest.mark.parametrize("problem", [
    RadiusProblem(FamilySpec.bessel(1.5), Normalization.H, RadiusKind.jan_star(1, -1)),
    RadiusProblem(FamilySpec.hahn_exton(0.5, 0.7), Normalization.F, RadiusKind.lem_convex()),
    RadiusProblem(FamilySpec.lommel(0.75), Normalization.G, RadiusKind.jan_convex(0.5, 0)),
    LEM_STAR_LEG,
], ids=str)
def test_conjugate_symmetry(problem):
    rng = np.random.default_rng(7)
    cap = domain_cap(problem)
    for _ in range(10):
        rho, theta = rng.uniform(0.05, 0.9) * cap, rng.uniform(0, np.pi)
        z = rho * np.exp(1j * theta)
        up, _ = lhs_values(problem, np.array([z]))
        down, _ = lhs_values(problem, np.array([np.conj(z)]))
        assert abs(up[0] - down[0]) <= 1e-12 * max(1.0, abs(up[0]))


def test_isolated_pole_sample_is_skipped():
    problem = RadiusProblem(FamilySpec.bessel(0.5), Normalization.G, RadiusKind.jan_star(1, -1))
    vals, skipped = sample_circle(problem, math.pi, 256)
    # z = pi and z = -pi are both zeros of the even series part
    assert skipped == 2 and np.isnan(vals[0]) and np.isnan(vals[-1])
    assert np.all(np.isfinite(vals[1:-1]))


@pytest.mark.parametrize("norm", [Normalization.F, Normalization.G, Normalization.H])
@pytest.mark.parametrize("kind", [RadiusKind.jan_star(1, -1), RadiusKind.jan_convex(0.5, 0)], ids=str)
def test_janowski_maxima_on_real_axis(norm, kind):
    problem = RadiusProblem(FamilySpec.jackson(1.5, 0.7), norm, kind)
    r = solve_radius(problem).radius
    for rho in (0.3 * r, 0.7 * r, 0.999 * r):
        vals, _ = sample_circle(problem, rho, 256)
        assert np.nanmax(vals) - vals[0] <= 1e-9
