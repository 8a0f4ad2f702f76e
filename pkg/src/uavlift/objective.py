"""The placement objective: total lifetime scaled by the system constant.

With the station at (X, Y) and altitude z, each user contributes
E_i / ((X - x_i)^2 + (Y - y_i)^2 + z^2) in J/m^2; dividing a term by K
gives that user's lifetime in seconds. The gradient and Hessian are
analytic, and the whole sum is concave over the deployment box whenever
z exceeds sqrt(3) times the maximum 2D distance in the area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import SystemConstant
from .errors import ValidationError
from .rng import SplitMix64
from .scenario import AreaBounds, UserDevice

# Scale-free NSD tolerance: an eigenvalue counts as positive only beyond
# 1e-12 times the trace magnitude, so scaling all energies cannot flip it.
NSD_EIGENVALUE_RTOL = 1e-12


def user_arrays(users: Sequence[UserDevice]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions and energies as flat arrays (xs, ys, energies)."""
    xs = np.array([u.x for u in users], dtype=float)
    ys = np.array([u.y for u in users], dtype=float)
    es = np.array([u.energy for u in users], dtype=float)
    return xs, ys, es


def _check_z(z_min: float) -> None:
    if not z_min > 0:
        raise ValidationError(f"z_min must be positive, got {z_min}")


def value(users: Sequence[UserDevice], z_min: float, point: tuple[float, float]) -> float:
    """Sum of E_i / ((X-x_i)^2 + (Y-y_i)^2 + z_min^2) in J/m^2."""
    _check_z(z_min)
    xs, ys, es = user_arrays(users)
    d2 = (point[0] - xs) ** 2 + (point[1] - ys) ** 2 + z_min**2
    return float(np.sum(es / d2))


def gradient(
    users: Sequence[UserDevice], z_min: float, point: tuple[float, float]
) -> tuple[float, float]:
    """Analytic gradient in J/m^3: each user contributes -2*E*offset/denominator^2."""
    _check_z(z_min)
    xs, ys, es = user_arrays(users)
    dx = point[0] - xs
    dy = point[1] - ys
    d2 = dx**2 + dy**2 + z_min**2
    w = es / d2**2
    return (float(np.sum(-2.0 * dx * w)), float(np.sum(-2.0 * dy * w)))


def hessian(
    users: Sequence[UserDevice], z_min: float, point: tuple[float, float]
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Analytic 2x2 Hessian in J/m^4, symmetric by construction.

    Per user, with a = (X-x)^2, b = (Y-y)^2, D = a + b + z^2:
        d2/dX2  = (6a - 2b - 2z^2) / D^3
        d2/dY2  = (6b - 2a - 2z^2) / D^3
        d2/dXdY = 8*(X-x)*(Y-y) / D^3
    """
    _check_z(z_min)
    xs, ys, es = user_arrays(users)
    dx = point[0] - xs
    dy = point[1] - ys
    z2 = z_min**2
    d3 = (dx**2 + dy**2 + z2) ** 3
    fxx = float(np.sum(es * (6.0 * dx**2 - 2.0 * dy**2 - 2.0 * z2) / d3))
    fyy = float(np.sum(es * (6.0 * dy**2 - 2.0 * dx**2 - 2.0 * z2) / d3))
    fxy = float(np.sum(es * 8.0 * dx * dy / d3))
    return ((fxx, fxy), (fxy, fyy))


@dataclass(frozen=True)
class ObjectiveEval:
    """Objective value with per-user lifetimes and derivatives at one point."""

    value: float
    per_user_tau: tuple[float, ...]
    gradient: tuple[float, float]
    hessian: tuple[tuple[float, float], tuple[float, float]]


def evaluate(
    users: Sequence[UserDevice],
    z_min: float,
    point: tuple[float, float],
    k: SystemConstant,
) -> ObjectiveEval:
    """Value, per-user lifetimes (seconds), gradient and Hessian in one call."""
    _check_z(z_min)
    xs, ys, es = user_arrays(users)
    d2 = (point[0] - xs) ** 2 + (point[1] - ys) ** 2 + z_min**2
    terms = es / d2
    return ObjectiveEval(
        value=float(np.sum(terms)),
        per_user_tau=tuple(float(t) for t in terms / k.k),
        gradient=gradient(users, z_min, point),
        hessian=hessian(users, z_min, point),
    )


@dataclass(frozen=True)
class ConcavityCertificate:
    """Sufficient condition for concavity over the whole box.

    d_max is the box diagonal, the largest 2D distance any placement can
    have from any user in the area; the objective is concave everywhere on
    the box when z_min > sqrt(3) * d_max. `marginal` flags z_min within
    numerical noise of the threshold, where the strict test is meaningless.
    """

    z_min: float
    d_max: float
    threshold: float
    holds: bool
    marginal: bool = False


def concavity_certificate(bounds: AreaBounds) -> ConcavityCertificate:
    d_max = math.hypot(bounds.x_max - bounds.x_min, bounds.y_max - bounds.y_min)
    threshold = math.sqrt(3.0) * d_max
    z = bounds.z_min
    return ConcavityCertificate(
        z_min=z,
        d_max=d_max,
        threshold=threshold,
        holds=z > threshold,
        marginal=abs(z - threshold) <= 1e-9 * max(1.0, threshold),
    )


def per_user_nsd_conditions(
    users: Sequence[UserDevice], z_min: float, point: tuple[float, float]
) -> np.ndarray:
    """Diagnostic (n, 3) bool array of the per-user sufficient conditions:

    column 0: z^2 > 3*(X-x)^2 - (Y-y)^2   (own-curvature in X non-positive)
    column 1: z^2 > 3*(Y-y)^2 - (X-x)^2   (own-curvature in Y non-positive)
    column 2: z^2 > 3*(X-x)^2 + 3*(Y-y)^2 (determinant non-negative; implies both)
    """
    _check_z(z_min)
    xs, ys, _ = user_arrays(users)
    a = (point[0] - xs) ** 2
    b = (point[1] - ys) ** 2
    z2 = z_min**2
    return np.column_stack((z2 > 3 * a - b, z2 > 3 * b - a, z2 > 3 * (a + b)))


class NsdScan(NamedTuple):
    all_nsd: bool
    worst_eigenvalue: float
    witness: tuple[float, float]


def nsd_scan(
    users: Sequence[UserDevice],
    z_min: float,
    bounds: AreaBounds,
    samples: int = 1000,
    seed: int = 0,
) -> NsdScan:
    """Sample the Hessian at seeded-random points in the box and report
    whether it was negative semidefinite everywhere (within the scale-free
    tolerance), plus the largest eigenvalue seen and where it occurred."""
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    _check_z(z_min)
    gen = SplitMix64(seed)
    pts = np.array(
        [
            (gen.uniform(bounds.x_min, bounds.x_max), gen.uniform(bounds.y_min, bounds.y_max))
            for _ in range(samples)
        ]
    )
    xs, ys, es = user_arrays(users)
    dx = pts[:, 0, None] - xs
    dy = pts[:, 1, None] - ys
    z2 = z_min**2
    d3 = (dx**2 + dy**2 + z2) ** 3
    fxx = np.sum(es * (6.0 * dx**2 - 2.0 * dy**2 - 2.0 * z2) / d3, axis=1)
    fyy = np.sum(es * (6.0 * dy**2 - 2.0 * dx**2 - 2.0 * z2) / d3, axis=1)
    fxy = np.sum(es * 8.0 * dx * dy / d3, axis=1)
    # Largest eigenvalue of each 2x2 symmetric matrix, in closed form.
    lam_max = 0.5 * (fxx + fyy) + np.sqrt((0.5 * (fxx - fyy)) ** 2 + fxy**2)
    scale = np.abs(fxx + fyy)
    nsd = lam_max <= NSD_EIGENVALUE_RTOL * scale
    i_worst = int(np.argmax(lam_max - NSD_EIGENVALUE_RTOL * scale))
    return NsdScan(
        all_nsd=bool(np.all(nsd)),
        worst_eigenvalue=float(lam_max[i_worst]),
        witness=(float(pts[i_worst, 0]), float(pts[i_worst, 1])),
    )
