import cmath
import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from casegrid import SPECS, norms_for
from radii import (FamilySpec, InvalidSpec, NonConvergence, Normalization, PoleAtZero, SeriesConfig,
                   ZeroTarget, convex_ratio, eval_family, first_positive_zero, phi_ratio, q_pochhammer)
from radii.series import gamma, log_q_pochhammer_inf, prefactor


# -- q-Pochhammer and gamma goldens -----------------------------------------------------

@pytest.mark.parametrize("a, q, n, expected", [
    (0.3, 0.5, 0, 1.0),
    (0.0, 0.5, math.inf, 1.0),
    (0.5, 0.5, 2, 0.375),
])
def test_q_pochhammer_examples(a, q, n, expected):
    assert q_pochhammer(a, q, n) == expected


@pytest.mark.parametrize("a, q, n", [(0.3, 0.5, 5), (0.9, 0.3, 12), (0.5, 0.5, math.inf),
                                     (0.7 ** 2.5, 0.7, math.inf), (0.3, 0.3, math.inf)])
def test_q_pochhammer_against_mpmath(a, q, n):
    ref = float(oracles.qpoch(a, q, None if n == math.inf else n))
    assert q_pochhammer(a, q, n) == pytest.approx(ref, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_q_pochhammer_rejects_q(q):
    with pytest.raises(ValueError):
        q_pochhammer(0.5, q, 3)


def test_log_q_pochhammer_survives_near_one():
    # the product itself underflows for q close to 1
    val = log_q_pochhammer_inf(0.999, 0.999)
    assert math.isfinite(val) and val < -600


@pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 2.5, 3.75, 7.0])
def test_gamma_goldens(x):
    ref = float(oracles.mp.gamma(x))
    assert abs(gamma(x) - ref) <= 1e-13 * ref


# -- evaluation -------------------------------------------------------------------------

def test_legendre_p3_example():
    assert eval_family(FamilySpec.legendre(2), 0.5).value == pytest.approx(-0.4375, abs=1e-15)


def test_half_order_bessel_vanishes_at_pi():
    res = eval_family(FamilySpec.bessel(0.5), math.pi)
    assert abs(res.value) <= res.truncation_bound
    assert res.truncation_bound < 1e-13


def test_bessel_zero_order_at_origin():
    res = eval_family(FamilySpec.bessel(0.0), 0.0)
    assert res.value == 1.0 and res.terms_used >= 1


@pytest.mark.parametrize("spec", SPECS, ids=str)
@pytest.mark.parametrize("z", [0.3, 1.1, 0.8 + 0.6j, -0.4 + 1.2j])
@pytest.mark.parametrize("order", [0, 1, 2])
def test_eval_matches_reference(spec, z, order):
    got = eval_family(spec, z, order)
    ref = oracles.reference(spec, z, order)
    assert abs(got.value - ref) <= 1e-12 * max(abs(ref), 1e-300) + got.truncation_bound


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
def test_bessel_against_scipy(nu):
    spec = FamilySpec.bessel(nu)
    for z in np.linspace(0.1, 8.0, 17):
        for order, ref in ((0, sp.jv(nu, z)), (1, sp.jvp(nu, z))):
            got = eval_family(spec, z, order)
            # cancellation near zeros is covered by the reported bound
            assert abs(got.value.real - ref) <= 1e-12 * abs(ref) + 2 * got.truncation_bound


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.05, 4.0), theta=st.floats(-math.pi + 1e-9, math.pi - 1e-9))
def test_half_order_closed_form(r, theta):
    z = r * cmath.exp(1j * theta)
    res = eval_family(FamilySpec.bessel(0.5), z)
    exact = cmath.sqrt(2 / (math.pi * z)) * cmath.sin(z)
    assert abs(res.value - exact) <= 10 * res.truncation_bound


def _fd_points(spec):
    cap = first_positive_zero(ZeroTarget.derivative(spec)).location
    return np.linspace(0.1 * cap, 1.6 * cap, 20)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@pytest.mark.parametrize("order", [1, 2])
def test_derivatives_match_central_differences(spec, order):
    h = 1e-6
    for x in _fd_points(spec):
        lower = lambda t: eval_family(spec, t, order - 1).value.real
        fd = (lower(x + h) - lower(x - h)) / (2 * h)
        exact = eval_family(spec, x, order).value.real
        scale = abs(exact) + abs(lower(x)) / x
        assert abs(fd - exact) <= 1e-6 * scale, (x, fd, exact)


@pytest.mark.parametrize("nu", [0.5, 1.5])
@pytest.mark.parametrize("z", [0.5, 1.0])
def test_q_limit_jackson(nu, z):
    errs = [abs(eval_family(FamilySpec.jackson(nu, q), (1 - q) * z).value - sp.jv(nu, z))
            for q in (0.9, 0.99, 0.999)]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("nu", [0.5, 1.5])
@pytest.mark.parametrize("z", [0.5, 1.0])
def test_q_limit_hahn_exton(nu, z):
    errs = [abs(eval_family(FamilySpec.hahn_exton(nu, q), (1 - q) * z).value - sp.jv(nu, 2 * z))
            for q in (0.9, 0.99, 0.999)]
    assert errs[0] > errs[1] > errs[2]


def test_hadamard_product_partial_products_converge():
    # zeros from scipy serve as an external oracle
    r, nu = 1.0, 1
    zeros = sp.jn_zeros(nu, 200)
    lhs = eval_family(FamilySpec.bessel(nu), r).value.real * 2 ** nu * math.gamma(nu + 1) / r ** nu
    errs = [abs(lhs - np.prod(1 - r * r / zeros[:k] ** 2)) for k in (10, 50, 200)]
    assert errs[0] > errs[1] > errs[2]


def _mittag_leffler_tail(nu, z, n_zeros):
    """Tail of sum 2 z^2 / (j_n^2 - z^2) past ``n_zeros`` from McMahon's expansion."""
    c = nu / 2 - 0.25
    m = 4 * nu * nu
    zeta2 = float(oracles.mp.zeta(2, n_zeros + 1 + c))
    zeta4 = float(oracles.mp.zeta(4, n_zeros + 1 + c))
    return 2 * z * z * (zeta2 / math.pi ** 2 + ((m - 1) / 4 + z * z) * zeta4 / math.pi ** 4)


def test_phi_g_mittag_leffler():
    zeros = sp.jn_zeros(1, 200)
    series = np.sum(2.0 / (zeros ** 2 - 1.0)) + _mittag_leffler_tail(1.0, 1.0, 200)
    got = phi_ratio(FamilySpec.bessel(1.0), Normalization.G, 1.0)
    assert abs(got - (1.0 - series)) < 1e-10


def test_convex_f_against_derivative_zeros():
    z = 0.5
    n = 400
    zeros = sp.jnp_zeros(1, n)
    # derivative zeros grow like pi (k + nu/2 - 3/4)
    tail = 2 * z * z * float(oracles.mp.zeta(2, n + 1 - 0.25)) / math.pi ** 2
    series = np.sum(2 * z * z / (zeros ** 2 - z * z)) + tail
    got = convex_ratio(FamilySpec.bessel(1.0), Normalization.F, z)
    assert abs(got - (1.0 - series)) < 1e-9


def test_phi_legendre_example():
    assert phi_ratio(FamilySpec.legendre(2), Normalization.INTRINSIC, 0.5).real == pytest.approx(-0.25 / (1 - 5 / 12), rel=1e-14)


def test_convex_legendre_example():
    assert convex_ratio(FamilySpec.legendre(2), Normalization.INTRINSIC, 0.2).real == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_ratios_tend_to_one_at_origin(spec):
    for norm in norms_for(spec):
        assert abs(phi_ratio(spec, norm, 1e-8) - 1) < 1e-6
        assert abs(convex_ratio(spec, norm, 1e-8) - 1) < 1e-6
        assert phi_ratio(spec, norm, 0.0) == 1


def test_ratios_are_conjugate_symmetric():
    spec = FamilySpec.jackson(1.5, 0.7)
    z = 0.4 + 0.3j
    for norm in (Normalization.F, Normalization.G, Normalization.H):
        assert phi_ratio(spec, norm, z.conjugate()) == pytest.approx(phi_ratio(spec, norm, z).conjugate(), abs=1e-14)


def test_pole_detected_at_zero_of_function():
    spec = FamilySpec.bessel(0.5)
    with pytest.raises(PoleAtZero):
        phi_ratio(spec, Normalization.G, math.pi)


def test_non_convergence_reported():
    with pytest.raises(NonConvergence):
        eval_family(FamilySpec.bessel(1.0), 30.0, cfg=SeriesConfig(max_terms=10, min_terms=8))


def test_prefactor_stays_finite_near_q_one():
    assert math.isfinite(prefactor(FamilySpec.hahn_exton(1.5, 0.999)))


@pytest.mark.parametrize("build", [
    lambda: FamilySpec.bessel(-1.0),
    lambda: FamilySpec.jackson(0.5, 1.0),
    lambda: FamilySpec.hahn_exton(0.5, 0.0),
    lambda: FamilySpec.lommel(0.0),
    lambda: FamilySpec.lommel(-0.5),
    lambda: FamilySpec.lommel(1.0),
    lambda: FamilySpec.legendre(0),
])
def test_invalid_specs_rejected(build):
    with pytest.raises(InvalidSpec):
        build()


@pytest.mark.parametrize("spec, norm", [
    (FamilySpec.bessel(0.0), Normalization.F),
    (FamilySpec.bessel(-0.5), Normalization.F),
    (FamilySpec.bessel(1.0), Normalization.INTRINSIC),
    (FamilySpec.legendre(2), Normalization.G),
])
def test_invalid_normalizations_rejected(spec, norm):
    with pytest.raises(InvalidSpec):
        phi_ratio(spec, norm, 0.1)


@settings(max_examples=100, deadline=None)
@given(r=st.floats(0.01, 10.0), da=st.floats(1e-3, 10.0), db=st.floats(0.0, 10.0),
       lam=st.floats(0.0, 0.999), frac=st.floats(0.0, 1.0), theta=st.floats(-math.pi, math.pi))
def test_triangle_relation(r, da, db, lam, frac, theta):
    a = r + da
    b = a + db + 1e-3
    z = frac * r * cmath.exp(1j * theta)
    lhs = abs(z / (a - z) - lam * z / (b - z))
    rhs = r / (a - r) - lam * r / (b - r)
    assert lhs <= rhs * (1 + 1e-12) + 1e-15
