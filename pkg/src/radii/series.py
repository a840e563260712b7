"""Series evaluation of the special-function families and their log-derivative ratios.

Every series family is written as ``p(z) = C * z**a * E(z)`` where ``E`` is an even
entire series with ``E(0) = 1``:

==========  ==========  =====================================================
family      a           E(z)
==========  ==========  =====================================================
bessel      nu          sum (-z^2/4)^n / (n! (nu+1)_n)
qbessel2    nu          sum (-z^2/4)^n q^(n(n+nu)) / ((q^(nu+1);q)_n (q;q)_n)
qbessel3    nu          sum (-z^2)^n q^(n(n+1)/2) / ((q^(nu+1);q)_n (q;q)_n)
lommel      mu + 1/2    1F2(1; (mu+2)/2, (mu+3)/2; -z^2/4)
==========  ==========  =====================================================

The ratios consumed by the radius equations only need the prefactor-free
quantities ``j0 = E``, ``j1 = z^(1-a) p'/C`` and ``j2 = z^(2-a) p''/C``, so no
fractional power is ever formed there.  Odd Legendre polynomials are handled
by the three-term recurrence instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, NonConvergence, PoleAtZero

EPS = np.finfo(float).eps

gamma = math.gamma


class Family(str, enum.Enum):
    BESSEL = "bessel"
    JACKSON = "qbessel2"
    HAHN_EXTON = "qbessel3"
    LOMMEL = "lommel"
    LEGENDRE = "legendre"


class Normalization(str, enum.Enum):
    F = "f"
    G = "g"
    H = "h"
    INTRINSIC = "intrinsic"


@dataclass(frozen=True)
class FamilySpec:
    """A special function together with its parameters.

    Use the named constructors (:meth:`bessel`, :meth:`jackson`, ...) rather than
    filling the fields by hand; validation runs either way.
    """

    family: Family
    nu: float | None = None
    q: float | None = None
    mu: float | None = None
    m: int | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in (Family.BESSEL, Family.JACKSON, Family.HAHN_EXTON):
            if self.nu is None or not math.isfinite(self.nu) or self.nu <= -1:
                raise InvalidSpec(f"{fam.value}: nu must be a real number > -1, got {self.nu}")
            if fam is Family.BESSEL:
                if self.q is not None:
                    raise InvalidSpec("bessel takes no q parameter")
            elif self.q is None or not 0 < self.q < 1:
                raise InvalidSpec(f"{fam.value}: q must lie in (0, 1), got {self.q}")
        elif fam is Family.LOMMEL:
            mu = self.mu
            if mu is None or not -1 < mu < 1:
                raise InvalidSpec(f"lommel: mu must lie in (-1, 1), got {mu}")
            if mu == 0:
                raise InvalidSpec("lommel: mu must differ from 0")
            if mu == -0.5:
                raise InvalidSpec("lommel: mu must differ from -1/2 (mu != -1/2)")
        else:
            if self.m is None or int(self.m) != self.m or self.m < 1:
                raise InvalidSpec(f"legendre: m must be a positive integer, got {self.m}")
            object.__setattr__(self, "m", int(self.m))

    @classmethod
    def bessel(cls, nu):
        return cls(Family.BESSEL, nu=float(nu))

    @classmethod
    def jackson(cls, nu, q):
        return cls(Family.JACKSON, nu=float(nu), q=float(q))

    @classmethod
    def hahn_exton(cls, nu, q):
        return cls(Family.HAHN_EXTON, nu=float(nu), q=float(q))

    @classmethod
    def lommel(cls, mu):
        return cls(Family.LOMMEL, mu=float(mu))

    @classmethod
    def legendre(cls, m):
        return cls(Family.LEGENDRE, m=m)

    @property
    def exponent(self) -> float:
        """Power ``a`` of the leading ``z**a`` factor."""
        if self.family is Family.LOMMEL:
            return self.mu + 0.5
        if self.family is Family.LEGENDRE:
            return 1.0
        return self.nu

    @property
    def is_series(self) -> bool:
        return self.family is not Family.LEGENDRE

    @property
    def degree(self) -> int:
        return 2 * self.m - 1

    def params(self) -> dict:
        keys = {"nu": self.nu, "q": self.q, "mu": self.mu, "m": self.m}
        return {k: v for k, v in keys.items() if v is not None}

    def __str__(self):
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params().items())
        return f"{self.family.value}({inner})"


def check_normalization(spec: FamilySpec, norm: Normalization) -> Normalization:
    """Return ``norm`` as a :class:`Normalization`, raising if it does not apply to ``spec``."""
    norm = Normalization(norm)
    if spec.family is Family.LEGENDRE:
        if norm is not Normalization.INTRINSIC:
            raise InvalidSpec("legendre polynomials only admit the intrinsic normalization")
        return norm
    if norm is Normalization.INTRINSIC:
        raise InvalidSpec(f"{spec.family.value} requires normalization f, g or h")
    if norm is Normalization.F:
        if spec.family is Family.LOMMEL:
            if spec.mu == -0.5:
                raise InvalidSpec("lommel f normalization requires mu != -1/2")
        elif spec.nu <= 0:
            raise InvalidSpec(f"normalization f requires nu > 0 (nu != 0), got nu={spec.nu}")
    return norm


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-17
    max_terms: int = 500
    min_terms: int = 8

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_terms <= self.min_terms:
            raise ValueError("max_terms must exceed min_terms")


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class EvalResult:
    """Value of a function evaluation.

    ``truncation_bound`` bounds the absolute error from the dropped tail plus the
    floating-point summation error of the retained terms.
    """

    value: complex
    terms_used: int
    truncation_bound: float


def q_pochhammer(a: float, q: float, n, rel_tol: float = 1e-17) -> float:
    """Return ``(a; q)_n = prod_{k=1..n} (1 - a q^(k-1))``; ``n`` may be ``math.inf``."""
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if n == 0:
        return 1.0
    if n != math.inf and (n < 0 or int(n) != n):
        raise ValueError(f"n must be a non-negative integer or inf, got {n}")
    prod = 1.0
    factor = a
    k = 0
    while n == math.inf or k < n:
        if n == math.inf and abs(factor) < rel_tol:
            break
        prod *= 1.0 - factor
        factor *= q
        k += 1
    return prod


def log_q_pochhammer_inf(a: float, q: float, rel_tol: float = 1e-17) -> float:
    """``log((a; q)_inf)`` for ``0 <= a < 1``; stays finite where the product underflows."""
    total = 0.0
    factor = a
    while abs(factor) >= rel_tol:
        total += math.log1p(-factor)
        factor *= q
    return total


def prefactor(spec: FamilySpec) -> float:
    """Constant ``C`` in ``p(z) = C z^a E(z)``."""
    fam = spec.family
    if fam is Family.BESSEL:
        return 2.0 ** -spec.nu / gamma(spec.nu + 1.0)
    if fam in (Family.JACKSON, Family.HAHN_EXTON):
        q = spec.q
        # 1 / c_nu(q) = (q^(nu+1); q)_inf / (q; q)_inf
        inv_c = math.exp(log_q_pochhammer_inf(q ** (spec.nu + 1.0), q) - log_q_pochhammer_inf(q, q))
        return inv_c * (2.0 ** -spec.nu if fam is Family.JACKSON else 1.0)
    if fam is Family.LOMMEL:
        return 1.0 / (spec.mu * (spec.mu + 1.0))
    raise InvalidSpec("legendre polynomials have no series prefactor")


def _term_ratio(spec: FamilySpec, n: int, x):
    """Multiplier ``t_{n+1} / t_n`` as a function of ``x = z**2``."""
    fam = spec.family
    if fam is Family.BESSEL:
        return -x / (4.0 * (n + 1) * (n + 1 + spec.nu))
    if fam is Family.JACKSON:
        q, nu = spec.q, spec.nu
        return -0.25 * x * q ** (2 * n + 1 + nu) / ((1.0 - q ** (n + 1 + nu)) * (1.0 - q ** (n + 1)))
    if fam is Family.HAHN_EXTON:
        q, nu = spec.q, spec.nu
        return -x * q ** (n + 1) / ((1.0 - q ** (n + 1 + nu)) * (1.0 - q ** (n + 1)))
    mu = spec.mu
    return -0.25 * x / ((n + 0.5 * mu + 1.0) * (n + 0.5 * mu + 1.5))


def _weights(n: int, a: float):
    k = 2 * n + a
    return (1.0, k, k * (k - 1.0))


@dataclass
class _Moments:
    """Prefactor-free sums ``j0, j1, j2`` with absolute sums and tail bounds."""

    j: tuple
    abs_sum: tuple
    tail: tuple
    terms: int


def series_moments(spec: FamilySpec, z, cfg: SeriesConfig = DEFAULT_CONFIG) -> _Moments:
    """Sum ``sum t_n z^(2n) * w_k(n)`` for ``w = 1, (2n+a), (2n+a)(2n+a-1)``.

    Works elementwise on arrays of complex ``z``.
    """
    z = np.asarray(z, dtype=complex)
    x = z * z
    a = spec.exponent
    term = np.ones_like(x)
    sums = [np.zeros_like(x) for _ in range(3)]
    abs_sums = [np.zeros(x.shape) for _ in range(3)]
    tiny = EPS * EPS
    for n in range(cfg.max_terms):
        w = _weights(n, a)
        for k in range(3):
            sums[k] += term * w[k]
            abs_sums[k] += np.abs(term) * abs(w[k])
        nxt = term * _term_ratio(spec, n, x)
        if n + 1 >= cfg.min_terms:
            w_next = _weights(n + 1, a)
            done = True
            for k in range(3):
                mag = np.abs(nxt) * abs(w_next[k])
                ok = (mag <= cfg.rel_tol * np.abs(sums[k])) | (mag <= tiny * abs_sums[k])
                if not np.all(ok):
                    done = False
                    break
            if done:
                rho = np.abs(_term_ratio(spec, n + 1, x))
                tails = []
                for k in range(3):
                    w0, w1 = abs(w_next[k]), abs(_weights(n + 2, a)[k])
                    growth = w1 / w0 if w0 > 0 else 1.0
                    r = rho * growth
                    mag = np.abs(nxt) * w0
                    tails.append(np.where(r < 1, mag / np.maximum(1.0 - r, 1e-300), np.inf))
                return _Moments(tuple(sums), tuple(abs_sums), tuple(tails), n + 1)
        term = nxt
    raise NonConvergence(f"{spec}: series did not converge within {cfg.max_terms} terms")


def _legendre_triplet(degree: int, z, magnitude: bool = False):
    """``(P, P', P'')`` of the given degree by the three-term recurrence.

    With ``magnitude=True`` the recurrence runs on ``|z|`` with every subtraction
    turned into an addition, which bounds the magnitude of intermediate terms.
    """
    z = np.asarray(z, dtype=complex)
    if magnitude:
        z = np.abs(z).astype(complex)
    sgn = 1.0 if magnitude else -1.0
    p_prev, p = np.ones_like(z), z.copy()
    d_prev, d = np.zeros_like(z), np.ones_like(z)
    s_prev, s = np.zeros_like(z), np.zeros_like(z)
    if degree == 0:
        return p_prev, d_prev, s_prev
    for k in range(1, degree):
        c1, c2 = (2 * k + 1) / (k + 1), k / (k + 1)
        p_new = c1 * z * p + sgn * c2 * p_prev
        d_new = c1 * (p + z * d) + sgn * c2 * d_prev
        s_new = c1 * (2.0 * d + z * s) + sgn * c2 * s_prev
        p_prev, p = p, p_new
        d_prev, d = d, d_new
        s_prev, s = s, s_new
    return p, d, s


def legendre_slope_at_zero(m: int) -> float:
    """``P'_{2m-1}(0)``, the normalizing constant of the intrinsic normalization."""
    return float(_legendre_triplet(2 * m - 1, 0.0)[1].real)


def eval_family(spec: FamilySpec, z, order: int = 0, cfg: SeriesConfig = DEFAULT_CONFIG) -> EvalResult:
    """Evaluate the un-normalized function or its ``order``-th derivative at ``z``.

    Non-integer powers ``z**(a - order)`` use the principal branch.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    z = complex(z)
    if spec.family is Family.LEGENDRE:
        vals = _legendre_triplet(spec.degree, z)
        mags = _legendre_triplet(spec.degree, z, magnitude=True)
        bound = 2.0 * (spec.degree + 1) * EPS * float(abs(mags[order]))
        return EvalResult(complex(vals[order]), spec.degree + 1, bound)

    mom = series_moments(spec, z, cfg)
    a = spec.exponent
    c = prefactor(spec)
    power = a - order
    if z == 0:
        # only a term with vanishing total exponent survives at the origin
        if power > 0:
            scale = 0.0
        elif power == 0:
            scale = 1.0
        else:
            if abs(complex(mom.j[order])) == 0:
                return EvalResult(0j, mom.terms, 0.0)
            raise PoleAtZero(f"{spec}: derivative of order {order} is singular at z = 0")
        val = c * scale * complex(mom.j[order])
        return EvalResult(val, mom.terms, 0.0)
    zp = np.power(z, power)
    val = c * zp * complex(mom.j[order])
    err = float(mom.tail[order]) + (mom.terms + 2) * EPS * float(mom.abs_sum[order])
    bound = abs(c * zp) * err + 2 * EPS * abs(val)
    return EvalResult(complex(val), mom.terms, float(bound))


# -- normalized log-derivative ratios -------------------------------------------------

_POLE_RTOL = 1e-13


def _scaled(spec, z, cfg):
    """Return ``(j0, j1, j2, scale0, scale1)`` at ``z`` for either kind of family."""
    if spec.family is Family.LEGENDRE:
        p, d, s = _legendre_triplet(spec.degree, z)
        mp, md, _ = _legendre_triplet(spec.degree, z, magnitude=True)
        z = np.asarray(z, dtype=complex)
        return p, z * d, z * z * s, np.abs(mp), np.abs(z * md)
    mom = series_moments(spec, z, cfg)
    j0, j1, j2 = mom.j
    return j0, j1, j2, mom.abs_sum[0], mom.abs_sum[1]


def _divide(num, den, scale):
    pole = np.abs(den) <= _POLE_RTOL * scale
    safe = np.where(pole, 1.0, den)
    return num / safe, pole


def _eval_point(norm, z):
    """Map a z-plane point to the plane in which the series is summed (w = sqrt z for H)."""
    z = np.asarray(z, dtype=complex)
    if norm is Normalization.H:
        return np.sqrt(z)
    return z


def phi_values(spec: FamilySpec, norm: Normalization, z, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Vectorized ``z u'(z) / u(z)``; returns ``(values, pole_mask)``."""
    norm = check_normalization(spec, norm)
    z = np.asarray(z, dtype=complex)
    w = _eval_point(norm, z)
    j0, j1, _, s0, _ = _scaled(spec, w, cfg)
    lg, pole = _divide(j1, j0, s0)  # w p'(w) / p(w), the leading a included
    if norm is Normalization.INTRINSIC:
        val = lg
    else:
        a = spec.exponent
        if norm is Normalization.F:
            val = lg / a
        elif norm is Normalization.G:
            val = 1.0 - a + lg
        else:
            val = 1.0 - a / 2.0 + 0.5 * lg
    origin = z == 0
    val = np.where(origin, 1.0 + 0j, val)
    return val, pole & ~origin


def convex_values(spec: FamilySpec, norm: Normalization, z, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Vectorized ``1 + z u''(z) / u'(z)``; returns ``(values, pole_mask)``."""
    norm = check_normalization(spec, norm)
    z = np.asarray(z, dtype=complex)
    w = _eval_point(norm, z)
    j0, j1, j2, s0, s1 = _scaled(spec, w, cfg)
    if norm is Normalization.INTRINSIC:
        val, pole = _divide(j2, j1, s1)
        val = 1.0 + val
    else:
        a = spec.exponent
        if norm is Normalization.F:
            r2, p2 = _divide(j2, j1, s1)
            r1, p1 = _divide(j1, j0, s0)
            val = 1.0 + r2 + (1.0 / a - 1.0) * r1
            pole = p1 | p2
        elif norm is Normalization.G:
            num = j2 + 2.0 * (1.0 - a) * j1 + a * (a - 1.0) * j0
            den = j1 + (1.0 - a) * j0
            val, pole = _divide(num, den, s1 + abs(1.0 - a) * s0)
            val = 1.0 + val
        else:
            num = j2 + (3.0 - 2.0 * a) * j1 + a * (a - 2.0) * j0
            den = 2.0 * (j1 + (2.0 - a) * j0)
            val, pole = _divide(num, den, 2.0 * (s1 + abs(2.0 - a) * s0))
            val = 1.0 + val
    origin = z == 0
    val = np.where(origin, 1.0 + 0j, val)
    return val, pole & ~origin


def _scalar(values, pole, what, spec, z):
    if np.any(pole):
        raise PoleAtZero(f"{spec}: {what} denominator vanishes at z={z}")
    if np.ndim(values) == 0:
        return complex(values)
    return values


def phi_ratio(spec: FamilySpec, norm: Normalization, z, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Starlikeness ratio ``z u'(z)/u(z)`` of the normalized function ``u``.

    Raises:
        PoleAtZero: if ``z`` is numerically a zero of the underlying function.
    """
    vals, pole = phi_values(spec, norm, z, cfg)
    return _scalar(vals, pole, "phi", spec, z)


def convex_ratio(spec: FamilySpec, norm: Normalization, z, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Convexity ratio ``1 + z u''(z)/u'(z)`` of the normalized function ``u``.

    Raises:
        PoleAtZero: if ``z`` is numerically a zero of a denominator.
    """
    vals, pole = convex_values(spec, norm, z, cfg)
    return _scalar(vals, pole, "convex", spec, z)
