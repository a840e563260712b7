"""Radii of lemniscate and Janowski starlikeness/convexity as roots of monotone equations.

Every radius reduces to one of two master equations on ``(0, cap)``:

* starlike kinds: ``phi(r) = c`` with ``phi = r u'(r)/u(r)``;
* convex kinds:   ``y(r) = c``   with ``y = r u''(r)/u'(r)``.

``c`` is ``2 - sqrt 2`` (lemniscate starlike), ``1 - sqrt 2`` (lemniscate convex),
``1 - T`` and ``-T`` (Janowski, ``T = (A - B)/(1 + |B|)``).  The one exception is the
Lommel ``f`` normalization with ``mu < -1/2``, whose ``phi`` increases towards
``sqrt 2``.  Each family's displayed per-case equation is kept as an independent
residual check (:func:`paper_equation`).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailure, InvalidProblem, InvalidSpec, RadiiError
from .series import (DEFAULT_CONFIG, Family, FamilySpec, Normalization, SeriesConfig,
                     check_normalization, convex_values, eval_family, phi_values)
from .zeros import ZeroTarget, first_positive_zero

SQRT2 = math.sqrt(2.0)


class KindName(str, enum.Enum):
    LEM_STAR = "lem-star"
    LEM_CONVEX = "lem-convex"
    JAN_STAR = "jan-star"
    JAN_CONVEX = "jan-convex"


@dataclass(frozen=True)
class RadiusKind:
    name: KindName
    A: float | None = None
    B: float | None = None

    def __post_init__(self):
        name = KindName(self.name)
        object.__setattr__(self, "name", name)
        if name in (KindName.JAN_STAR, KindName.JAN_CONVEX):
            if self.A is None or self.B is None:
                raise InvalidProblem(f"{name.value} requires both A and B")
            if not -1 <= self.B < self.A <= 1:
                raise InvalidProblem(f"Janowski parameters need -1 <= B < A <= 1, got A={self.A}, B={self.B}")
        elif self.A is not None or self.B is not None:
            raise InvalidProblem(f"{name.value} takes no A, B parameters")

    @classmethod
    def lem_star(cls):
        return cls(KindName.LEM_STAR)

    @classmethod
    def lem_convex(cls):
        return cls(KindName.LEM_CONVEX)

    @classmethod
    def jan_star(cls, A, B):
        return cls(KindName.JAN_STAR, float(A), float(B))

    @classmethod
    def jan_convex(cls, A, B):
        return cls(KindName.JAN_CONVEX, float(A), float(B))

    @property
    def convex(self) -> bool:
        return self.name in (KindName.LEM_CONVEX, KindName.JAN_CONVEX)

    @property
    def janowski(self) -> bool:
        return self.name in (KindName.JAN_STAR, KindName.JAN_CONVEX)

    @property
    def shift(self) -> float:
        """``(A - B) / (1 + |B|)`` for the Janowski kinds."""
        return (self.A - self.B) / (1.0 + abs(self.B))

    def __str__(self):
        if self.janowski:
            return f"{self.name.value}(A={self.A:g}, B={self.B:g})"
        return self.name.value


@dataclass(frozen=True)
class RadiusProblem:
    spec: FamilySpec
    norm: Normalization
    kind: RadiusKind

    def __post_init__(self):
        try:
            norm = check_normalization(self.spec, self.norm)
        except InvalidSpec as exc:
            raise InvalidProblem(str(exc)) from None
        object.__setattr__(self, "norm", norm)
        spec = self.spec
        if spec.family is Family.LOMMEL and norm is Normalization.F:
            if self.kind.name is not KindName.LEM_STAR and spec.mu <= -0.5:
                raise InvalidProblem(f"lommel f {self.kind.name.value} requires mu in (-1/2, 1), got mu={spec.mu}")

    def __str__(self):
        return f"{self.spec} {self.norm.value} {self.kind}"


@dataclass(frozen=True)
class Target:
    selector: str  # "phi" or "y"
    value: float
    direction: str  # "decreasing" or "increasing"


@dataclass(frozen=True)
class RadiusResult:
    problem: RadiusProblem
    radius: float
    domain_cap: float
    target: float
    residual_master: float
    residual_paper: float
    paper_scale: float
    iterations: int


@dataclass(frozen=True)
class TableError:
    problem: RadiusProblem | None
    error: str
    message: str


def _lommel_increasing(problem: RadiusProblem) -> bool:
    spec = problem.spec
    return (spec.family is Family.LOMMEL and problem.norm is Normalization.F
            and problem.kind.name is KindName.LEM_STAR and spec.mu < -0.5)


def target_value(problem: RadiusProblem) -> Target:
    """Ratio selector, target constant and expected monotonicity for ``problem``."""
    kind = problem.kind
    if kind.name is KindName.LEM_STAR:
        if _lommel_increasing(problem):
            return Target("phi", SQRT2, "increasing")
        return Target("phi", 2.0 - SQRT2, "decreasing")
    if kind.name is KindName.LEM_CONVEX:
        return Target("y", 1.0 - SQRT2, "decreasing")
    if kind.name is KindName.JAN_STAR:
        return Target("phi", 1.0 - kind.shift, "decreasing")
    return Target("y", -kind.shift, "decreasing")


def cap_target(problem: RadiusProblem) -> tuple[ZeroTarget, bool]:
    """Zero whose location bounds the search, and whether it lives in the square-root plane."""
    spec, norm = problem.spec, problem.norm
    if not problem.kind.convex:
        return ZeroTarget.function(spec), norm is Normalization.H
    if norm in (Normalization.F, Normalization.INTRINSIC):
        return ZeroTarget.derivative(spec), False
    a = spec.exponent
    if norm is Normalization.G:
        return ZeroTarget.combination(spec, 1.0 - a), False
    return ZeroTarget.combination(spec, 2.0 - a), True


def domain_cap(problem: RadiusProblem, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """First positive zero bounding the interval on which the radius equation is solved."""
    zt, squared = cap_target(problem)
    loc = first_positive_zero(zt, cfg=cfg).location
    return loc * loc if squared else loc


def master_values(problem: RadiusProblem, r, cfg: SeriesConfig = DEFAULT_CONFIG):
    """``ratio(r) - target`` on real ``r``; NaN where a denominator vanishes."""
    tgt = target_value(problem)
    r = np.asarray(r, dtype=float)
    if tgt.selector == "phi":
        vals, pole = phi_values(problem.spec, problem.norm, r, cfg)
    else:
        vals, pole = convex_values(problem.spec, problem.norm, r, cfg)
        vals = vals - 1.0
    out = vals.real - tgt.value
    return np.where(pole, np.nan, out)


def search_interval(cap: float) -> tuple[float, float]:
    eps = 1e-9
    return eps * cap, cap * (1.0 - eps)


def solve_radius(problem: RadiusProblem, tol: float = 1e-12, cfg: SeriesConfig = DEFAULT_CONFIG) -> RadiusResult:
    """Solve the master equation of ``problem`` by bisection on ``(eps, cap (1 - eps))``.

    Raises:
        InvalidProblem: when the target is already met at the origin.
        BracketFailure: when the endpoint signs agree.
    """
    if tol < 1e-13:
        raise ValueError("tol must be at least 1e-13")
    cap = domain_cap(problem, cfg)
    lo, hi = search_interval(cap)
    flo = float(master_values(problem, lo, cfg))
    fhi = float(master_values(problem, hi, cfg))
    if not (np.isfinite(flo) and np.isfinite(fhi)) or not flo * fhi < 0:
        if np.isfinite(flo) and abs(flo) < 1e-12:
            raise InvalidProblem(f"{problem}: target met at the origin, radius would be 0")
        raise BracketFailure(f"{problem}: ratio - target has signs {flo:+.3g}, {fhi:+.3g} at the ends of (0, {cap:.6g})")
    it = 0
    while hi - lo > tol and it < 200:
        mid = 0.5 * (lo + hi)
        fm = float(master_values(problem, mid, cfg))
        it += 1
        if fm == 0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    radius = 0.5 * (lo + hi)
    res_master = float(master_values(problem, radius, cfg))
    value, scale = paper_equation(problem, radius, cfg)
    return RadiusResult(problem, radius, cap, target_value(problem).value, res_master, value, scale, it)


def sign_changes(problem: RadiusProblem, n: int = 64, cap: float | None = None,
                 cfg: SeriesConfig = DEFAULT_CONFIG) -> int:
    """Number of sign changes of ``ratio - target`` on an ``n``-point grid of the search interval."""
    cap = domain_cap(problem, cfg) if cap is None else cap
    lo, hi = search_interval(cap)
    vals = master_values(problem, np.linspace(lo, hi, n), cfg)
    s = np.sign(vals[np.isfinite(vals)])
    s = s[s != 0]
    return int(np.count_nonzero(s[:-1] != s[1:]))


def _solve_one(args):
    item, tol, cfg = args
    problem = item if isinstance(item, RadiusProblem) else None
    try:
        if problem is None:
            problem = RadiusProblem(*item)
        return solve_radius(problem, tol, cfg)
    except RadiiError as exc:
        return TableError(problem, type(exc).__name__, str(exc))


def radius_table(problems, tol: float = 1e-12, cfg: SeriesConfig = DEFAULT_CONFIG, workers: int = 1):
    """Solve each problem; failures become :class:`TableError` entries in place.

    Items may be :class:`RadiusProblem` instances or ``(spec, norm, kind)`` tuples;
    the latter are validated inside the batch so that a bad entry yields an error
    record instead of aborting.  Output order matches input order for any ``workers``.
    """
    jobs = [(p, tol, cfg) for p in problems]
    if workers <= 1 or len(jobs) <= 1:
        return [_solve_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_one, jobs))


# -- literal per-family equations -------------------------------------------------------

def _vals(spec, t, cfg):
    return [eval_family(spec, t, k, cfg).value.real for k in range(3)]


def _sum(terms):
    return float(sum(terms)), float(sum(abs(x) for x in terms))


def _quadratic_lem_convex(y):
    return [y * y, -2.0 * y, -1.0]


def paper_equation(problem: RadiusProblem, r: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Left side of the displayed radius equation at ``r`` and a local scale (sum of |terms|).

    The square-root normalizations evaluate the function at ``t = sqrt r`` and read
    ``sqrt r dJ(sqrt r)/dr`` as ``t J'(t)``.
    """
    spec, norm, kind = problem.spec, problem.norm, problem.kind
    name = kind.name
    T = kind.shift if kind.janowski else 0.0

    if spec.family is Family.LEGENDRE:
        P, D, S = _vals(spec, r, cfg)
        X, Y = r * D / P, r * S / D
        if name is KindName.LEM_STAR:
            return _sum([X * X, -4.0 * X, 2.0])
        if name is KindName.LEM_CONVEX:
            return _sum(_quadratic_lem_convex(Y))
        if name is KindName.JAN_STAR:
            return _sum([X, -1.0, T])
        return _sum([Y, T])

    t = math.sqrt(r) if norm is Normalization.H else r
    J, D, S = _vals(spec, t, cfg)

    if spec.family is Family.LOMMEL:
        return _lommel_equation(problem, t, J, D, S, T)

    nu = spec.nu
    if name is KindName.LEM_STAR:
        if norm is Normalization.F:
            return _sum([r * r * D * D, -4.0 * r * nu * J * D, 2.0 * nu * nu * J * J])
        K = t * D - nu * J
        if norm is Normalization.G:
            return _sum([K * K, -2.0 * K * J, -J * J])
        return _sum([K * K, -4.0 * K * J, -4.0 * J * J])

    if norm is Normalization.F:
        y_terms = [t * S / D, (1.0 / nu - 1.0) * t * D / J]
    elif norm is Normalization.G:
        y_terms = [(t * t * S + 2 * (1 - nu) * t * D + nu * (nu - 1) * J) / (t * D + (1 - nu) * J)]
    else:
        y_terms = [(t * t * S + (3 - 2 * nu) * t * D + nu * (nu - 2) * J) / (2 * (t * D + (2 - nu) * J))]

    if name is KindName.LEM_CONVEX:
        return _sum(_quadratic_lem_convex(sum(y_terms)))
    if name is KindName.JAN_CONVEX:
        return _sum(y_terms + [T])
    # Janowski starlike
    X = t * D / J
    weight = {Normalization.F: nu, Normalization.G: 1.0, Normalization.H: 2.0}[norm]
    return _sum([X, -nu, weight * T])


def _lommel_equation(problem, t, s0, s1, s2, T):
    mu = problem.spec.mu
    a = mu + 0.5
    norm, name = problem.norm, problem.kind.name
    X = t * s1 / s0
    if name is KindName.LEM_STAR:
        if norm is Normalization.F:
            if mu < -0.5:
                return _sum([X * X / (a * a), -2.0])
            return _sum([X * X / (a * a), -4.0 * X / a, 2.0])
        if norm is Normalization.G:
            return _sum([X * X, -(2 * mu + 3) * X, mu * mu + 3 * mu + 0.25])
        return _sum([4 * X * X, -4 * (5 + 2 * mu) * X, 4 * mu * mu + 20 * mu - 7])
    if name is KindName.LEM_CONVEX:
        if norm is Normalization.F:
            Y = t * s2 / s1 + (1.0 / a - 1.0) * X
        elif norm is Normalization.G:
            Y = (t * t * s2 + (1 - 2 * mu) * t * s1 + (mu * mu - 0.25) * s0) / (t * s1 + (0.5 - mu) * s0)
        else:
            Y = ((t * t * s2 + 2 * (1 - mu) * t * s1 + (2 * mu - 3) * (2 * mu + 1) / 4 * s0)
                 / (2 * ((1.5 - mu) * s0 + t * s1)))
        return _sum(_quadratic_lem_convex(Y))
    if name is KindName.JAN_STAR:
        weight = {Normalization.F: a, Normalization.G: 1.0, Normalization.H: 2.0}[norm]
        return _sum([X, -a, weight * T])
    if norm is Normalization.F:
        return _sum([t * s2 / s1, -((mu - 0.5) / (mu + 0.5)) * X, T])
    if norm is Normalization.G:
        return _sum([((1.5 - mu) * t * s1 + t * t * s2) / ((0.5 - mu) * s0 + t * s1), -a, T])
    return _sum([((2.5 - mu) * t * s1 + t * t * s2) / ((1.5 - mu) * s0 + t * s1), -a, 2.0 * T])
