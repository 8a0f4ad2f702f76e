"""The feasible placement set: per-user range limits reduced to 2D disks.

Serving user i at all requires the station within distance
sqrt(p_max/K) (power limit) and sqrt(E_i/(tau_th*K)) (energy limit).
At the fixed operating altitude z these 3D range balls become 2D disks
of radius sqrt(d_limit^2 - z^2) around each user, and the feasible set is
the intersection of all disks with the x/y box. The intersection is
convex, so membership, emptiness and exact Euclidean projection are all
well posed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from .channel import SPEED_OF_LIGHT, SystemConstant, system_constant
from .errors import EmptyRegionError, ValidationError
from .scenario import AreaBounds, Scenario

MEMBERSHIP_TOL = 1e-9   # meters, boundary slack for `contains`
PROJECTION_TOL = 1e-8   # meters, accuracy target of `project`
_DYKSTRA_MOVE_TOL = 1e-10
_DYKSTRA_MAX_SWEEPS = 10_000
EMPTINESS_TOL = 1e-6    # meters, decision threshold of `check_empty`


class Disk(NamedTuple):
    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class UserRangeLimit:
    """Range limits for one user: the power-limited and energy-limited maximum
    station distances, and their minimum which is what actually constrains
    the placement."""

    user_index: int
    d_power: float
    d_energy: float
    d_limit: float

    def __post_init__(self):
        if not (self.d_power > 0 and self.d_energy > 0):
            raise ValidationError("range limits must be positive")
        if self.d_limit != min(self.d_power, self.d_energy):
            raise ValidationError("d_limit must be min(d_power, d_energy)")

    @property
    def binding(self) -> str:
        return "power" if self.d_power <= self.d_energy else "energy"


class EmptinessCheck(NamedTuple):
    empty: bool
    witness: tuple[float, float] | None  # a feasible point when non-empty
    shortfall: float                     # best max-violation found, meters
    cause: str | None                    # human-readable reason when empty


@dataclass(frozen=True)
class FeasibleRegion:
    """Disks-and-box description of the feasible placements at one altitude."""

    altitude: float
    disks: tuple[Disk, ...]
    box: AreaBounds
    empty: bool
    empty_reason: str | None = None
    limits: tuple[UserRangeLimit, ...] = ()

    @classmethod
    def from_disks(
        cls, disks: Sequence[Disk], box: AreaBounds, altitude: float | None = None
    ) -> "FeasibleRegion":
        """Build a region directly from disks, running the emptiness check."""
        disks = tuple(Disk(*d) for d in disks)
        check = check_empty(disks, box)
        return cls(
            altitude=box.z_min if altitude is None else altitude,
            disks=disks,
            box=box,
            empty=check.empty,
            empty_reason=check.cause,
        )


def max_range_power(p_max: float, k: SystemConstant) -> float:
    """Largest distance at which the rate is sustainable within the power budget."""
    if not p_max > 0:
        raise ValidationError(f"p_max must be positive, got {p_max}")
    return math.sqrt(p_max / k.k)


def max_range_energy(energy: float, tau_th: float, k: SystemConstant) -> float:
    """Largest distance at which a device can transmit for at least tau_th seconds."""
    if not energy > 0:
        raise ValidationError(f"energy must be positive, got {energy}")
    if not tau_th > 0:
        raise ValidationError(f"tau_th must be positive, got {tau_th}")
    return math.sqrt(energy / (tau_th * k.k))


def build(scenario: Scenario, c: float = SPEED_OF_LIGHT) -> FeasibleRegion:
    """Compute per-user range limits, reduce them to disks at altitude z_min,
    intersect with the box and decide emptiness.

    Emptiness is a result, not an error; `empty_reason` names the user and
    the binding constraint so an infeasible setup is actionable.
    """
    k = system_constant(scenario.rf, len(scenario.users), c)
    z = scenario.bounds.z_min
    d_power = max_range_power(scenario.rf.p_max, k)
    limits = []
    for i, u in enumerate(scenario.users):
        d_energy = max_range_energy(u.energy, scenario.rf.tau_th, k)
        limits.append(
            UserRangeLimit(
                user_index=i,
                d_power=d_power,
                d_energy=d_energy,
                d_limit=min(d_power, d_energy),
            )
        )
    limits = tuple(limits)

    failing = [lim for lim in limits if lim.d_limit <= z]
    if failing:
        worst = min(failing, key=lambda lim: lim.d_limit)
        scope = (
            "all users"
            if len(failing) == len(limits)
            else f"{len(failing)} of {len(limits)} users (worst: user {worst.user_index})"
        )
        reason = (
            f"{worst.binding} constraint unsatisfiable at altitude {z:g} m: "
            f"d_limit = {worst.d_limit:.2f} m <= z_min = {z:g} m for {scope}"
        )
        return FeasibleRegion(
            altitude=z, disks=(), box=scenario.bounds, empty=True,
            empty_reason=reason, limits=limits,
        )

    disks = tuple(
        Disk(u.x, u.y, math.sqrt(lim.d_limit**2 - z**2))
        for u, lim in zip(scenario.users, limits)
    )
    check = check_empty(disks, scenario.bounds)
    return FeasibleRegion(
        altitude=z, disks=disks, box=scenario.bounds, empty=check.empty,
        empty_reason=check.cause, limits=limits,
    )


def contains(
    region: FeasibleRegion, point: tuple[float, float], tol: float = MEMBERSHIP_TOL
) -> bool:
    """Closed-set membership with `tol` meters of boundary slack."""
    if region.empty:
        raise EmptyRegionError(region.empty_reason or "region is empty")
    x, y = point
    box = region.box
    if x < box.x_min - tol or x > box.x_max + tol:
        return False
    if y < box.y_min - tol or y > box.y_max + tol:
        return False
    for d in region.disks:
        if math.hypot(x - d.x, y - d.y) > d.radius + tol:
            return False
    return True


def project(region: FeasibleRegion, point: tuple[float, float]) -> tuple[float, float]:
    """Exact Euclidean projection onto the region, accurate to ~1e-8 m.

    Uses Dykstra's alternating projections over the box and every disk.
    Unlike plain alternating projection, Dykstra's correction terms make the
    limit the *nearest* feasible point, not just a feasible one. Points
    already in the region come back unchanged.
    """
    out = project_many(region, np.asarray([point], dtype=float))
    return (float(out[0, 0]), float(out[0, 1]))


def project_many(region: FeasibleRegion, points: np.ndarray) -> np.ndarray:
    """Vectorized `project` for an (N, 2) array of query points."""
    if region.empty:
        raise EmptyRegionError(region.empty_reason or "region is empty")
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValidationError(f"points must have shape (N, 2), got {pts.shape}")

    box = region.box
    cx = np.array([d.x for d in region.disks])
    cy = np.array([d.y for d in region.disks])
    cr = np.array([d.radius for d in region.disks])
    n_sets = 1 + len(region.disks)

    x = pts.copy()
    corrections = np.zeros((n_sets, len(pts), 2))
    for _sweep in range(_DYKSTRA_MAX_SWEEPS):
        x_prev = x.copy()
        corr_prev = corrections.copy()
        for m in range(n_sets):
            y = x + corrections[m]
            proj = _project_box(y, box) if m == 0 else _project_disk(y, cx[m - 1], cy[m - 1], cr[m - 1])
            corrections[m] = y - proj
            x = proj
        moved = np.max(np.hypot(x[:, 0] - x_prev[:, 0], x[:, 1] - x_prev[:, 1]))
        # The iterate alone can stall for sweeps while a correction term
        # drifts (a saturated box clamp replays the same corner); only a
        # standstill of iterate AND corrections means convergence.
        corr_moved = np.max(np.abs(corrections - corr_prev)) if n_sets else 0.0
        if max(moved, corr_moved) < _DYKSTRA_MOVE_TOL:
            break

    # Dykstra's limit is exact but a finite sweep count can leave iterates a
    # hair outside some set; a few plain cyclic projections restore strict
    # membership while moving points far less than the accuracy target.
    for _sweep in range(100):
        if _max_violation(x, cx, cy, cr, box) <= _DYKSTRA_MOVE_TOL:
            break
        x = _project_box(x, box)
        for j in range(len(cr)):
            x = _project_disk(x, cx[j], cy[j], cr[j])
    return x


def _project_box(pts: np.ndarray, box: AreaBounds) -> np.ndarray:
    out = pts.copy()
    np.clip(out[:, 0], box.x_min, box.x_max, out=out[:, 0])
    np.clip(out[:, 1], box.y_min, box.y_max, out=out[:, 1])
    return out


def _project_disk(pts: np.ndarray, cx: float, cy: float, r: float) -> np.ndarray:
    dx = pts[:, 0] - cx
    dy = pts[:, 1] - cy
    dist = np.hypot(dx, dy)
    scale = np.ones_like(dist)
    outside = dist > r
    scale[outside] = r / dist[outside]
    return np.column_stack((cx + dx * scale, cy + dy * scale))


def _max_violation(pts, cx, cy, cr, box) -> float:
    viol = np.maximum(box.x_min - pts[:, 0], pts[:, 0] - box.x_max)
    viol = np.maximum(viol, np.maximum(box.y_min - pts[:, 1], pts[:, 1] - box.y_max))
    if len(cr):
        dist = np.hypot(pts[:, 0, None] - cx, pts[:, 1, None] - cy)
        viol = np.maximum(viol, np.max(dist - cr, axis=1))
    return float(np.max(viol))


# ---------------------------------------------------------------------------
# Emptiness test. g(p) = max(disk shortfalls, box violations) is convex and
# 1-Lipschitz; the region is non-empty iff min g <= 0. We locate the
# minimizer by projected subgradient descent with diminishing steps plus a
# Nelder-Mead polish, and certify emptiness with a grid lower bound that
# exploits the Lipschitz constant.
# ---------------------------------------------------------------------------


def _violation_at(px, py, cx, cy, cr, box):
    """g evaluated at one point or elementwise over arrays of points."""
    g = np.maximum(box.x_min - px, px - box.x_max)
    g = np.maximum(g, np.maximum(box.y_min - py, py - box.y_max))
    if len(cr):
        dist = np.hypot(np.subtract.outer(px, cx), np.subtract.outer(py, cy))
        g = np.maximum(g, np.max(dist - cr, axis=-1))
    return g


def check_empty(
    disks: Sequence[Disk], box: AreaBounds, tol: float = EMPTINESS_TOL
) -> EmptinessCheck:
    """Decide whether the disks/box intersection is empty.

    Non-empty verdicts carry a witness point with max violation <= tol.
    Empty verdicts are certified: a grid scan over the only rectangle that
    could contain a near-feasible point proves min g > tol using the
    1-Lipschitz bound, or the candidate rectangle is itself empty.
    """
    disks = tuple(Disk(*d) for d in disks)
    cx = np.array([d.x for d in disks])
    cy = np.array([d.y for d in disks])
    cr = np.array([d.radius for d in disks])

    def g(px, py):
        return _violation_at(px, py, cx, cy, cr, box)

    px = 0.5 * (box.x_min + box.x_max)
    py = 0.5 * (box.y_min + box.y_max)
    best = (px, py, float(g(px, py)))
    if not disks:
        return EmptinessCheck(False, (px, py), best[2], None)

    # Projected subgradient descent from the box center. Each active disk
    # term has unit subgradient (p - c)/|p - c|.
    diag = math.hypot(box.x_max - box.x_min, box.y_max - box.y_min)
    for t in range(600):
        if best[2] <= 0.0:
            break
        dist = np.hypot(px - cx, py - cy)
        j = int(np.argmax(dist - cr))
        if dist[j] == 0.0:
            break  # at a disk center yet infeasible: radius 0, grid phase decides
        step = diag / math.sqrt(t + 1.0)
        ux, uy = (px - cx[j]) / dist[j], (py - cy[j]) / dist[j]
        px = min(max(px - step * ux, box.x_min), box.x_max)
        py = min(max(py - step * uy, box.y_min), box.y_max)
        value = float(g(px, py))
        if value < best[2]:
            best = (px, py, value)

    if best[2] > 0.0:
        # Nelder-Mead handles the nonsmooth max well in 2D and supplies the
        # final few orders of magnitude the subgradient steps cannot.
        res = minimize(
            lambda q: float(g(q[0], q[1])),
            np.array(best[:2]),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 2000, "maxfev": 4000},
        )
        if float(res.fun) < best[2]:
            best = (float(res.x[0]), float(res.x[1]), float(res.fun))

    if best[2] <= tol:
        return EmptinessCheck(False, (best[0], best[1]), best[2], None)

    # Certification. Any p with g(p) <= tol must lie in the box and in every
    # axis-aligned bounding square of the tol-inflated disks.
    lo_x = max(box.x_min, float(np.max(cx - cr - tol)))
    hi_x = min(box.x_max, float(np.min(cx + cr + tol)))
    lo_y = max(box.y_min, float(np.max(cy - cr - tol)))
    hi_y = min(box.y_max, float(np.min(cy + cr + tol)))
    cause = (
        f"disk intersection is empty: best placement still misses some disk "
        f"by {best[2]:.6g} m"
    )
    if lo_x > hi_x or lo_y > hi_y:
        return EmptinessCheck(True, None, best[2], cause)

    spacing = max(hi_x - lo_x, hi_y - lo_y, tol) / 16.0
    for _refine in range(12):
        nx = int((hi_x - lo_x) / spacing) + 2
        ny = int((hi_y - lo_y) / spacing) + 2
        if nx * ny > 4_000_000:
            break
        gx, gy = np.meshgrid(
            np.linspace(lo_x, hi_x, nx), np.linspace(lo_y, hi_y, ny), indexing="ij"
        )
        values = g(gx.ravel(), gy.ravel())
        i_min = int(np.argmin(values))
        g_min = float(values[i_min])
        if g_min <= tol:
            # The descent phase missed this point; accept it as a witness.
            return EmptinessCheck(
                False, (float(gx.ravel()[i_min]), float(gy.ravel()[i_min])), g_min, None
            )
        cell = max((hi_x - lo_x) / max(nx - 1, 1), (hi_y - lo_y) / max(ny - 1, 1))
        if g_min - cell * 0.7072 > tol:  # covering radius of the grid, rounded up
            return EmptinessCheck(True, None, min(best[2], g_min), cause)
        spacing /= 4.0
    # Unreachable for sane geometry; report the strongest evidence we have.
    return EmptinessCheck(True, None, best[2], cause + " (grid certificate budget exhausted)")
