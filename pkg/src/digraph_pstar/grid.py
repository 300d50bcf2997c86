"""Rectangular surface grids of the entropy and free-energy densities."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .curve import CURVE_XTOL, _check_p, critical_point
from .entropy import REGION_TOL, RegionES, classify_es, entropy
from .errors import DomainError
from .formatting import to_csv, to_json
from .free_energy import (RegionU, classify_beta1_s, classify_e_beta2, free_energy_e,
                          free_energy_e_slope, free_energy_s, free_energy_s_slope)

MIN_RESOLUTION = 8
MAX_RESOLUTION = 2048


class Quantity(str, enum.Enum):
    PSI_ES = "psi_es"
    DPSI_DE = "dpsi_de"
    DPSI_DS = "dpsi_ds"
    PSI_E_BETA2 = "psi_e_beta2"
    PSI_BETA1_S = "psi_beta1_s"
    REGION_TAG = "region_tag"


class Plane(str, enum.Enum):
    ES = "es"
    E_BETA2 = "e_beta2"
    BETA1_S = "beta1_s"


_PLANE_OF = {
    Quantity.PSI_ES: Plane.ES,
    Quantity.DPSI_DE: Plane.E_BETA2,
    Quantity.PSI_E_BETA2: Plane.E_BETA2,
    Quantity.DPSI_DS: Plane.BETA1_S,
    Quantity.PSI_BETA1_S: Plane.BETA1_S,
}

_AXIS_NAMES = {Plane.ES: ("e", "s"), Plane.E_BETA2: ("e", "beta2"),
               Plane.BETA1_S: ("beta1", "s")}

ES_CODES = {RegionES.OUTSIDE: 0, RegionES.INTERIOR: 1, RegionES.LOWER_BOUNDARY: 2,
            RegionES.UPPER_BOUNDARY: 3, RegionES.CORNER: 4}
U_CODES = {RegionU.UNIFORM: 0, RegionU.BIPODAL: 1, RegionU.BOUNDARY: 2, RegionU.CRITICAL: 3}


@dataclass(frozen=True)
class SurfaceGrid:
    """``values[i][j]`` is the quantity at ``(axis1[i], axis2[j])``."""

    quantity: Quantity
    p: int
    axis1_name: str
    axis1: np.ndarray
    axis2_name: str
    axis2: np.ndarray
    values: np.ndarray
    plane: Plane

    def __post_init__(self):
        if self.values.shape != (len(self.axis1), len(self.axis2)):
            raise ValueError("grid values do not match the axis lengths")
        for ax in (self.axis1, self.axis2):
            if len(ax) > 1 and not np.all(np.diff(ax) > 0):
                raise ValueError("grid axes must be strictly increasing")

    def value_at(self, a1: float, a2: float) -> float:
        """Value at the grid node nearest to (a1, a2)."""
        i = int(np.argmin(np.abs(self.axis1 - a1)))
        j = int(np.argmin(np.abs(self.axis2 - a2)))
        return float(self.values[i, j])

    def interpolate(self, a1: float, a2: float) -> float:
        """Bilinear interpolation; ``nan`` when a neighbouring node is non-finite."""
        with np.errstate(invalid="ignore"):
            f = RegularGridInterpolator((self.axis1, self.axis2), self.values)
            return float(f([[a1, a2]])[0])

    def region_codes(self) -> dict[str, int] | None:
        if self.quantity is not Quantity.REGION_TAG:
            return None
        codes = ES_CODES if self.plane is Plane.ES else U_CODES
        return {k.value: v for k, v in codes.items()}

    def to_csv(self) -> str:
        rows = ((a, b, float(self.values[i, j]))
                for i, a in enumerate(self.axis1.tolist())
                for j, b in enumerate(self.axis2.tolist()))
        return to_csv([self.axis1_name, self.axis2_name, self.quantity.value], rows)

    def to_json(self) -> str:
        doc = {
            "quantity": self.quantity.value,
            "p": self.p,
            "plane": self.plane.value,
            "axis1": {"name": self.axis1_name, "values": self.axis1.tolist()},
            "axis2": {"name": self.axis2_name, "values": self.axis2.tolist()},
            "values": self.values.tolist(),
        }
        codes = self.region_codes()
        if codes is not None:
            doc["codes"] = codes
        return to_json(doc)


def default_ranges(p: int, plane: Plane) -> tuple[tuple[float, float], tuple[float, float]]:
    """Axis ranges framing the critical point of the plane."""
    cp = critical_point(p)
    if plane is Plane.ES:
        return (0.0, 1.0), (0.0, 1.0)
    if plane is Plane.E_BETA2:
        return (0.0, 1.0), (cp.beta2_c - 2.0, cp.beta2_c + 4.0)
    return (cp.beta1_c - 4.0, cp.beta1_c + 2.0), (0.0, 1.0)


def _cell(quantity: Quantity, plane: Plane, p: int, tol: float, xtol: float,
          a: float, b: float) -> float:
    if quantity is Quantity.PSI_ES:
        return entropy(p, a, b, tol=tol, xtol=xtol)
    if quantity is Quantity.PSI_E_BETA2:
        return free_energy_e(p, a, b, tol=tol, xtol=xtol)
    if quantity is Quantity.DPSI_DE:
        return free_energy_e_slope(p, a, b, tol=tol, xtol=xtol)
    if quantity is Quantity.PSI_BETA1_S:
        return free_energy_s(p, a, b, tol=tol, xtol=xtol)
    if quantity is Quantity.DPSI_DS:
        return free_energy_s_slope(p, a, b, tol=tol, xtol=xtol)
    if plane is Plane.ES:
        return float(ES_CODES[classify_es(p, a, b, tol)])
    if plane is Plane.E_BETA2:
        return float(U_CODES[classify_e_beta2(p, a, b, tol, xtol=xtol)])
    return float(U_CODES[classify_beta1_s(p, a, b, tol, xtol=xtol)])


def _row(quantity, plane, p, tol, xtol, axis2, a) -> list[float]:
    return [_cell(quantity, plane, p, tol, xtol, a, b) for b in axis2]


def surface_grid(p: int, quantity: Quantity | str, resolution: int = 64,
                 plane: Plane | str | None = None,
                 range1: tuple[float, float] | None = None,
                 range2: tuple[float, float] | None = None,
                 tol: float = REGION_TOL, xtol: float = CURVE_XTOL,
                 workers: int = 1) -> SurfaceGrid:
    """Evaluate ``quantity`` on a ``resolution`` x ``resolution`` grid.

    ``plane`` selects the parameter plane for ``region_tag`` and must match the
    quantity otherwise.  Output is independent of ``workers``.
    """
    p = _check_p(p)
    quantity = Quantity(quantity)
    if isinstance(resolution, bool) or int(resolution) != resolution or not (
            MIN_RESOLUTION <= resolution <= MAX_RESOLUTION):
        raise DomainError(
            f"resolution must be an integer in [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")
    resolution = int(resolution)
    if quantity is Quantity.REGION_TAG:
        plane = Plane(plane) if plane is not None else Plane.E_BETA2
    else:
        implied = _PLANE_OF[quantity]
        if plane is not None and Plane(plane) is not implied:
            raise DomainError(f"{quantity.value} lives on the {implied.value} plane")
        plane = implied
    r1, r2 = default_ranges(p, plane)
    r1 = r1 if range1 is None else tuple(map(float, range1))
    r2 = r2 if range2 is None else tuple(map(float, range2))
    for lo, hi in (r1, r2):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"axis range ({lo}, {hi}) must be finite and increasing")
    axis1 = np.linspace(r1[0], r1[1], resolution)
    axis2 = np.linspace(r2[0], r2[1], resolution)
    row = partial(_row, quantity, plane, p, tol, xtol, axis2.tolist())
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, axis1.tolist(), chunksize=max(1, resolution // workers)))
    else:
        rows = [row(a) for a in axis1.tolist()]
    name1, name2 = _AXIS_NAMES[plane]
    return SurfaceGrid(quantity=quantity, p=p, axis1_name=name1, axis1=axis1,
                       axis2_name=name2, axis2=axis2, values=np.array(rows, dtype=float),
                       plane=plane)
