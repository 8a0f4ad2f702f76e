"""Independent verification: exhaustive grid search and finite differences.

These are the reference answers the optimizer and the analytic derivatives
are tested against; nothing here shares code with the paths it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import region as region_mod
from .channel import SPEED_OF_LIGHT
from .errors import EmptyRegionError, ValidationError
from .objective import user_arrays, value
from .scenario import AreaBounds, Scenario, UserDevice


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over the x/y box, inclusive of all four edges."""

    spacing: float
    bounds: AreaBounds

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValidationError(f"grid spacing must be positive, got {self.spacing}")

    def axis(self, lo: float, hi: float) -> np.ndarray:
        n = int(math.floor((hi - lo) / self.spacing + 1e-9))
        values = lo + self.spacing * np.arange(n + 1)
        if values[-1] < hi - 1e-9 * max(1.0, abs(hi)):
            values = np.append(values, hi)
        return values

    def xs(self) -> np.ndarray:
        return self.axis(self.bounds.x_min, self.bounds.x_max)

    def ys(self) -> np.ndarray:
        return self.axis(self.bounds.y_min, self.bounds.y_max)


class GridSearchResult(NamedTuple):
    point: tuple[float, float]
    value: float
    evaluated: int


def grid_search(
    scenario: Scenario,
    grid: GridSpec,
    mode: str = "box",
    c: float = SPEED_OF_LIGHT,
) -> GridSearchResult:
    """Exhaustively evaluate the objective at feasible grid nodes.

    Ties break deterministically toward the smallest x, then smallest y,
    which the column-major scan below guarantees for free.
    """
    if mode not in ("box", "region"):
        raise ValidationError(f"mode must be 'box' or 'region', got {mode!r}")
    feas = None
    if mode == "region":
        feas = region_mod.build(scenario, c)
        if feas.empty:
            raise EmptyRegionError(feas.empty_reason or "feasible region is empty")

    xs_u, ys_u, es = user_arrays(scenario.users)
    z2 = scenario.bounds.z_min ** 2
    grid_xs = grid.xs()
    grid_ys = grid.ys()

    best_x = best_y = None
    best_value = -math.inf
    evaluated = 0
    for gx in grid_xs:
        column = np.full(len(grid_ys), True)
        if feas is not None:
            for d in feas.disks:
                column &= (gx - d.x) ** 2 + (grid_ys - d.y) ** 2 <= (
                    d.radius + region_mod.MEMBERSHIP_TOL
                ) ** 2
            if not column.any():
                continue
        ys_here = grid_ys[column]
        totals = np.zeros(len(ys_here))
        for ux, uy, ue in zip(xs_u, ys_u, es):
            totals += ue / ((gx - ux) ** 2 + (ys_here - uy) ** 2 + z2)
        evaluated += len(ys_here)
        j = int(np.argmax(totals))  # first occurrence: smallest y in the column
        if totals[j] > best_value:
            best_value = float(totals[j])
            best_x, best_y = float(gx), float(ys_here[j])
    if best_x is None:
        raise ValidationError("no grid node is feasible; refine the spacing")
    return GridSearchResult((best_x, best_y), best_value, evaluated)


def fd_gradient(
    users: Sequence[UserDevice],
    z_min: float,
    point: tuple[float, float],
    h: float = 1e-4,
) -> tuple[float, float]:
    """Central-difference gradient (F(p+h) - F(p-h)) / 2h, one axis at a time."""
    if not h > 0:
        raise ValidationError(f"step h must be positive, got {h}")
    x, y = point
    gx = (value(users, z_min, (x + h, y)) - value(users, z_min, (x - h, y))) / (2.0 * h)
    gy = (value(users, z_min, (x, y + h)) - value(users, z_min, (x, y - h))) / (2.0 * h)
    return (gx, gy)


def fd_hessian(
    users: Sequence[UserDevice],
    z_min: float,
    point: tuple[float, float],
    h: float = 1e-2,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Second-order central-difference Hessian; the mixed entry is computed
    once from the four-corner stencil, so the result is symmetric by
    construction."""
    if not h > 0:
        raise ValidationError(f"step h must be positive, got {h}")
    x, y = point

    def f(px, py):
        return value(users, z_min, (px, py))

    f0 = f(x, y)
    fxx = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / h**2
    fyy = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / h**2
    fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h**2)
    return ((fxx, fxy), (fxy, fyy))
