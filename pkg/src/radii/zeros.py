"""Positive real zeros of a family function, its derivative, and ``z p'(z) + c p(z)``."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSignChange
from .series import DEFAULT_CONFIG, Family, FamilySpec, SeriesConfig, _legendre_triplet, series_moments


class Combo(str, enum.Enum):
    FUNCTION = "fn"
    DERIVATIVE = "dfn"
    COMBINATION = "combo"


@dataclass(frozen=True)
class ZeroTarget:
    """Which real function to find zeros of.

    ``Combination(c)`` stands for ``z p'(z) + c p(z)``: ``c = 1 - nu`` gives the
    zeros of ``g'`` and ``c = 2 - nu`` those of ``h'`` in the square-root plane.
    """

    spec: FamilySpec
    combo: Combo = Combo.FUNCTION
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "combo", Combo(self.combo))

    @classmethod
    def function(cls, spec):
        return cls(spec, Combo.FUNCTION)

    @classmethod
    def derivative(cls, spec):
        return cls(spec, Combo.DERIVATIVE)

    @classmethod
    def combination(cls, spec, c):
        return cls(spec, Combo.COMBINATION, float(c))

    def __str__(self):
        if self.combo is Combo.COMBINATION:
            return f"{self.spec} z p' + {self.c:g} p"
        return f"{self.spec} {self.combo.value}"


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float


@dataclass(frozen=True)
class ZeroResult:
    location: float
    bracket: Bracket
    residual: float
    scan_step: float


def combination_values(target: ZeroTarget, r, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Real values on ``r > 0`` sharing signs and zeros with the target function.

    For series families the positive factor ``C r^a`` is dropped, so the values
    are those of the prefactor-free sums; Legendre values are exact polynomial values.
    """
    r = np.asarray(r, dtype=float)
    spec = target.spec
    if spec.family is Family.LEGENDRE:
        p, d, _ = _legendre_triplet(spec.degree, r)
        if target.combo is Combo.FUNCTION:
            return p.real
        if target.combo is Combo.DERIVATIVE:
            return d.real
        return (r * d + target.c * p).real
    j0, j1, _ = series_moments(spec, r, cfg).j
    if target.combo is Combo.FUNCTION:
        return j0.real
    if target.combo is Combo.DERIVATIVE:
        return j1.real
    return (j1 + target.c * j0).real


def default_scan(spec: FamilySpec):
    """``(start, step, max_span)`` used when the caller does not choose."""
    if spec.family is Family.LEGENDRE:
        return 1e-3, min(0.05, 0.25 / spec.degree), 1.0
    scale = abs(spec.mu) if spec.family is Family.LOMMEL else max(spec.nu, 0.0)
    return 1e-3, 0.05 * (1.0 + scale), 60.0


_CHUNK = 64


def bracket_scan(target: ZeroTarget, start: float, step: float, max_span: float,
                 cfg: SeriesConfig = DEFAULT_CONFIG, refinements: int = 6) -> Bracket:
    """First interval of width at most ``step`` after ``start`` where the target changes sign.

    The step is halved and the scan repeated when nothing is found, which catches
    pairs of zeros closer together than the original step.

    Raises:
        NoSignChange: if no sign change is found below ``max_span``.
    """
    if start < 0 or step <= 0:
        raise ValueError("need start >= 0 and step > 0")
    h = step
    for _ in range(refinements + 1):
        lo = start
        while lo < max_span:
            grid = lo + h * np.arange(_CHUNK + 1)
            grid = grid[grid <= max_span + h]
            signs = np.sign(combination_values(target, grid, cfg))
            change = np.nonzero(signs[:-1] * signs[1:] <= 0)[0]
            if change.size:
                i = int(change[0])
                if signs[i] == 0:
                    # exact zero on a grid node: widen so the node is interior
                    left = grid[i] - 0.5 * h if i == 0 else grid[i - 1]
                    return Bracket(float(max(left, start)), float(grid[i] + 0.5 * h))
                return Bracket(float(grid[i]), float(grid[i + 1]))
            lo = float(grid[-1])
        h *= 0.5
    raise NoSignChange(f"{target}: no sign change in ({start:g}, {max_span:g})")


def _bisect(target, lo, hi, tol, cfg):
    flo = float(combination_values(target, lo, cfg))
    if flo == 0:
        return lo, lo, hi
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(combination_values(target, mid, cfg))
        if fm == 0:
            return mid, lo, hi
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), lo, hi


def _refine(target, bracket, tol, step, cfg):
    loc, _, _ = _bisect(target, bracket.lo, bracket.hi, tol, cfg)
    if not bracket.lo < loc < bracket.hi:
        loc = min(max(loc, math.nextafter(bracket.lo, math.inf)), math.nextafter(bracket.hi, -math.inf))
    residual = abs(float(combination_values(target, loc, cfg)))
    return ZeroResult(float(loc), bracket, residual, step)


def first_positive_zero(target: ZeroTarget, tol: float = 1e-14, start: float | None = None,
                        step: float | None = None, max_span: float | None = None,
                        cfg: SeriesConfig = DEFAULT_CONFIG) -> ZeroResult:
    """Bisect the first positive sign change of the target to absolute width ``tol``.

    The scan starts strictly right of the origin, which is a trivial zero of
    several combinations.
    """
    if tol < 1e-14:
        raise ValueError("tol must be at least 1e-14")
    d_start, d_step, d_span = default_scan(target.spec)
    start = d_start if start is None else start
    step = d_step if step is None else step
    max_span = d_span if max_span is None else max_span
    bracket = bracket_scan(target, start, step, max_span, cfg)
    return _refine(target, bracket, tol, step, cfg)


def zero_ladder(target: ZeroTarget, count: int, tol: float = 1e-14, step: float | None = None,
                max_span: float | None = None, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[ZeroResult]:
    """The first ``count`` positive zeros in increasing order, with disjoint brackets."""
    if count < 1:
        raise ValueError("count must be at least 1")
    d_start, d_step, d_span = default_scan(target.spec)
    step = d_step if step is None else step
    max_span = d_span if max_span is None else max_span
    out: list[ZeroResult] = []
    start = d_start
    for _ in range(count):
        bracket = bracket_scan(target, start, step, max_span, cfg)
        res = _refine(target, bracket, tol, step, cfg)
        out.append(res)
        start = math.nextafter(bracket.hi, math.inf)
    return out
