"""Independent checks of a computed radius on sampled circles.

The defining inequality of each kind is evaluated on ``z = rho e^{i theta}``,
``theta`` in ``[0, pi]`` (real coefficients make the lower half a mirror image):

* lemniscate starlike ``|phi^2 - 1| < 1`` and convex ``|psi^2 - 1| < 1``;
* Janowski starlike ``|(phi - 1)/(A - B phi)| < 1`` and convex with ``psi``.

Each left side is the modulus of a function analytic in the disk up to the
domain cap, so its circle maximum grows with ``rho``.  The brute-force oracle
relies on that to refine a coarse scan hierarchically.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapReached, CertificationFailure, PoleAtZero
from .series import DEFAULT_CONFIG, SeriesConfig, convex_values, phi_values
from .solver import KindName, RadiusProblem, domain_cap, solve_radius

EXTREMAL_TOL = 1e-9
MAX_SKIPPED_FRACTION = 0.01


@dataclass(frozen=True)
class Certificate:
    problem: RadiusProblem
    radius: float
    domain_cap: float
    inner_margin: float
    outer_violation: float | None
    oracle_radius: float
    oracle_delta: float
    oracle_step: float
    n_angles: int
    epsilon: float
    real_extremal: bool
    outer_check: str  # "real-point", "full-circle" or "skipped" (outer radius beyond the cap)
    skipped_samples: int

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "problem"}


def angles(n_angles: int) -> np.ndarray:
    """``theta_k = pi k / n`` for ``k = 0..n``."""
    return np.pi * np.arange(n_angles + 1) / n_angles


def lhs_values(problem: RadiusProblem, z, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Left side of the defining inequality at ``z``; returns ``(values, pole_mask)``."""
    kind = problem.kind
    if kind.convex:
        ratio, pole = convex_values(problem.spec, problem.norm, z, cfg)
    else:
        ratio, pole = phi_values(problem.spec, problem.norm, z, cfg)
    if kind.name in (KindName.LEM_STAR, KindName.LEM_CONVEX):
        vals = np.abs(ratio * ratio - 1.0)
    else:
        den = kind.A - kind.B * ratio
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.abs((ratio - 1.0) / den)
        pole = pole | (den == 0)
    return np.where(pole, np.nan, vals), pole


def _circle(rho, n_angles):
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    return rho[:, None] * np.exp(1j * angles(n_angles))[None, :]


def _check_rho(rho, n_angles):
    if n_angles < 8:
        raise ValueError("n_angles must be at least 8")
    if rho <= 0:
        raise ValueError("rho must be positive")


def sample_circle(problem: RadiusProblem, rho: float, n_angles: int = 256,
                  cfg: SeriesConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, int]:
    """LHS on the sampled upper half circle and the number of skipped (pole) samples.

    Raises:
        PoleAtZero: if more than 1% of the samples hit a vanishing denominator.
    """
    _check_rho(rho, n_angles)
    vals, pole = lhs_values(problem, _circle(rho, n_angles)[0], cfg)
    skipped = int(np.count_nonzero(pole))
    if skipped > MAX_SKIPPED_FRACTION * vals.size:
        raise PoleAtZero(f"{problem}: {skipped} of {vals.size} samples on |z| = {rho:g} hit a pole")
    return vals, skipped


def boundary_max(problem: RadiusProblem, rho: float, n_angles: int = 256,
                 cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Largest sampled LHS on ``|z| = rho``."""
    vals, _ = sample_circle(problem, rho, n_angles, cfg)
    return float(np.nanmax(vals))


def _circle_maxima(problem, rhos, n_angles, cfg):
    vals, _ = lhs_values(problem, _circle(rhos, n_angles), cfg)
    # a pole counts as a violation here: the inequality cannot hold through it
    vals = np.where(np.isfinite(vals), vals, np.inf)
    return vals.max(axis=1)


def brute_force_radius(problem: RadiusProblem, rho_step: float = 1e-4, n_angles: int = 256,
                       cap: float | None = None, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Grid radius ``k rho_step`` just below the first grid circle whose sampled maximum reaches 1.

    The grid is scanned through two coarser levels before the final step, which
    finds the same first index as an exhaustive scan because circle maxima are
    nondecreasing in ``rho``.

    Raises:
        CapReached: if no grid circle below the domain cap violates the inequality.
    """
    cap = domain_cap(problem, cfg) if cap is None else cap
    if rho_step > 1e-3 * cap:
        raise ValueError(f"rho_step {rho_step:g} exceeds 1e-3 * domain cap {cap:.6g}")
    n_max = int(math.floor(cap * (1.0 - 1e-12) / rho_step))
    lo, hi = 1, n_max
    while True:
        count = hi - lo + 1
        stride = max(1, -(-count // 128))
        idx = np.arange(lo, hi + 1, stride)
        if idx[-1] != hi:
            idx = np.append(idx, hi)
        maxima = _circle_maxima(problem, idx * rho_step, n_angles, cfg)
        hit = np.nonzero(maxima >= 1.0)[0]
        if hit.size == 0:
            raise CapReached(f"{problem}: inequality holds on every grid circle below the cap {cap:.6g}")
        first = int(hit[0])
        if stride == 1:
            return float((idx[first] - 1) * rho_step)
        lo = int(idx[first - 1]) + 1 if first > 0 else lo
        hi = int(idx[first])


def certify(problem: RadiusProblem, radius: float | None = None, epsilon: float = 1e-3,
            n_angles: int = 256, oracle_step: float = 1e-4,
            cfg: SeriesConfig = DEFAULT_CONFIG) -> Certificate:
    """Two-sided check of ``radius`` plus agreement with the brute-force oracle.

    The inner face samples the whole circle at ``radius (1 - epsilon)``.  The outer
    face evaluates the real point at ``radius (1 + epsilon)`` when the inner samples
    peak on the real axis; otherwise it falls back to the whole circle.

    Raises:
        CertificationFailure: naming the failing face (``inner``, ``outer`` or ``oracle``);
            the assembled certificate is attached.
    """
    cap = domain_cap(problem, cfg)
    if radius is None:
        radius = solve_radius(problem, cfg=cfg).radius

    inner_vals, skipped = sample_circle(problem, radius * (1.0 - epsilon), n_angles, cfg)
    inner_max = float(np.nanmax(inner_vals))
    inner_margin = 1.0 - inner_max
    real_extremal = bool(np.isfinite(inner_vals[0]) and inner_max - inner_vals[0] <= EXTREMAL_TOL)

    outer_rho = radius * (1.0 + epsilon)
    if outer_rho >= cap:
        outer_violation, outer_check = None, "skipped"
    elif real_extremal:
        vals, _ = lhs_values(problem, np.array([outer_rho + 0j]), cfg)
        outer_violation, outer_check = float(vals[0]) - 1.0, "real-point"
    else:
        vals, extra = sample_circle(problem, outer_rho, n_angles, cfg)
        skipped += extra
        outer_violation, outer_check = float(np.nanmax(vals)) - 1.0, "full-circle"

    try:
        oracle = brute_force_radius(problem, oracle_step, n_angles, cap, cfg)
    except CapReached:
        oracle = math.inf
    cert = Certificate(problem, float(radius), cap, inner_margin, outer_violation, oracle,
                       oracle - radius, oracle_step, n_angles, epsilon, real_extremal,
                       outer_check, skipped)
    if not inner_margin > 0:
        raise CertificationFailure("inner", f"{problem}: inequality fails inside r = {radius:.12g} "
                                             f"(max {inner_max:.6g})", cert)
    if outer_violation is not None and not outer_violation > 0:
        raise CertificationFailure("outer", f"{problem}: inequality still holds outside r = {radius:.12g} "
                                             f"({outer_check}, max {outer_violation + 1:.6g})", cert)
    if not abs(cert.oracle_delta) <= 2.0 * oracle_step:
        raise CertificationFailure("oracle", f"{problem}: brute-force radius {oracle:.8g} differs from "
                                              f"{radius:.8g} by more than 2 grid steps", cert)
    return cert
