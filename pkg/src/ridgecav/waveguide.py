"""Scalar mode solver for the etched ridge structure.

The cross-section is a mesa of width `ridge_width_um` and height
`ridge_height_um` standing on a lower-index cladding slab of thickness
`cladding_thickness_um`.  Inside the mesa the bottom `core_thickness_um` is
core material and the remainder (if any) is cladding; outside the mesa
everything above the slab is the exterior medium, as is everything below
the slab (the substrate is outside the model, and the mode has decayed to
~1e-3 at the default slab depth).  y = 0 at the slab/mesa interface; the
grid window is centered on the core center (y = core_thickness/2).

The fundamental mode is the largest-eigenvalue pair of the transverse scalar
Helmholtz operator d2/dx2 + d2/dy2 + k0^2 n(x,y)^2, found by a sparse
shift-and-invert eigensolve targeted at k0^2 n_core^2.  Cell permittivities
are area-averaged over the material rectangles, which restores second-order
grid convergence at the index steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import GridTooSmall, InsufficientSamples, NoGuidedMode, ZeroField
from .fields import GridSpec, SampledField

BOUNDARY_DECAY_LIMIT = 1e-3
MARGIN_UM = 4.0


@dataclass(frozen=True)
class WaveguideGeometry:
    """Ridge cross-section, layer indices and the operating wavelength."""

    ridge_width_um: float = 4.0
    ridge_height_um: float = 4.0
    core_thickness_um: float = 4.0
    cladding_thickness_um: float = 4.0
    n_core: float = 3.155
    n_clad: float = 3.145
    n_exterior: float = 1.0
    wavelength_nm: float = 780.0

    def __post_init__(self):
        for name in (
            "ridge_width_um",
            "ridge_height_um",
            "core_thickness_um",
            "cladding_thickness_um",
            "wavelength_nm",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.core_thickness_um > self.ridge_height_um:
            raise ValueError("core_thickness_um cannot exceed ridge_height_um")
        # n_core == n_clad (zero contrast) is constructible; the solver then
        # reports NoGuidedMode instead of rejecting the geometry up front.
        if not (self.n_core >= self.n_clad >= self.n_exterior >= 1.0):
            raise ValueError("indices must satisfy n_core >= n_clad >= n_exterior >= 1")

    @property
    def k0_per_um(self) -> float:
        return 2.0 * np.pi / (self.wavelength_nm * 1e-3)


@dataclass(frozen=True)
class ModeSolution:
    """Solved fundamental mode: unit-power profile, n_eff and mode area."""

    field: SampledField
    n_eff: float
    mode_area_um2: float
    geometry: WaveguideGeometry = field(repr=False, default=None)


def _coverage(low, high, a, b):
    """Per-cell fraction of the interval [low, high] covered by [a, b]."""
    return np.clip(
        (np.minimum(high, b) - np.maximum(low, a)) / (high - low), 0.0, 1.0
    )


def permittivity_map(geometry: WaveguideGeometry, grid: GridSpec) -> np.ndarray:
    """Area-averaged n^2 on the grid, window centered on the core center."""
    g = geometry
    x = grid.x_coords_um()
    y = grid.y_coords_um() + g.core_thickness_um / 2.0
    dx, dy = grid.dx_um, grid.dy_um
    xl, xh = x - dx / 2, x + dx / 2
    yl, yh = y - dy / 2, y + dy / 2
    half_w = g.ridge_width_um / 2.0

    fx_mesa = _coverage(xl, xh, -half_w, half_w)[:, None]
    fy_core = _coverage(yl, yh, 0.0, g.core_thickness_um)[None, :]
    fy_cap = _coverage(yl, yh, g.core_thickness_um, g.ridge_height_um)[None, :]
    fy_slab = _coverage(yl, yh, -g.cladding_thickness_um, 0.0)[None, :]
    fy_outside = 1.0 - fy_slab - fy_core - fy_cap

    eps = (
        g.n_clad**2 * fy_slab
        + fx_mesa * (g.n_core**2 * fy_core + g.n_clad**2 * fy_cap)
        + (1.0 - fx_mesa) * g.n_exterior**2 * (fy_core + fy_cap)
        + g.n_exterior**2 * fy_outside
    )
    return np.broadcast_to(eps, (grid.nx, grid.ny)).copy()


def _check_margins(geometry: WaveguideGeometry, grid: GridSpec) -> None:
    g = geometry
    if grid.window_x_um < g.ridge_width_um + 2 * MARGIN_UM:
        raise GridTooSmall(
            f"window_x_um={grid.window_x_um:g} leaves less than {MARGIN_UM:g} um "
            f"beside the {g.ridge_width_um:g} um ridge"
        )
    y_top = grid.window_y_um / 2.0 + g.core_thickness_um / 2.0
    y_bot = -grid.window_y_um / 2.0 + g.core_thickness_um / 2.0
    if y_top < g.ridge_height_um + MARGIN_UM or y_bot > -MARGIN_UM:
        raise GridTooSmall(
            f"window_y_um={grid.window_y_um:g} leaves less than {MARGIN_UM:g} um "
            "above or below the ridge"
        )


def _helmholtz_matrix(eps: np.ndarray, dx: float, dy: float, k0: float):
    nx, ny = eps.shape
    n = nx * ny
    main = -2.0 / dx**2 - 2.0 / dy**2 + k0**2 * eps.ravel()
    off_x = np.full(n - ny, 1.0 / dx**2)
    off_y = np.full(n, 1.0 / dy**2)
    off_y[ny - 1 :: ny] = 0.0  # no coupling across x-rows
    return sp.diags(
        [main, off_x, off_x, off_y[: n - 1], off_y[: n - 1]],
        [0, ny, -ny, 1, -1],
        format="csc",
    )


def solve_fundamental_mode(geometry: WaveguideGeometry, grid: GridSpec) -> ModeSolution:
    """Largest-n_eff eigenmode of the scalar Helmholtz operator.

    Raises NoGuidedMode when the top of the spectrum is at or below the
    cladding light line, and GridTooSmall when the window clips the ridge
    or the solved mode has not decayed at the window edge.
    """
    _check_margins(geometry, grid)
    k0 = geometry.k0_per_um
    eps = permittivity_map(geometry, grid)
    A = _helmholtz_matrix(eps, grid.dx_um, grid.dy_um, k0)
    sigma = (k0 * geometry.n_core) ** 2
    # fixed start vector keeps the solve deterministic run to run
    v0 = np.ones(grid.nx * grid.ny)
    vals, vecs = spla.eigsh(A, k=1, sigma=sigma, which="LM", v0=v0)
    beta_sq = float(vals[0])
    if beta_sq <= 0:
        raise NoGuidedMode("no propagating solution found")
    n_eff = float(np.sqrt(beta_sq) / k0)
    if n_eff <= geometry.n_clad:
        raise NoGuidedMode(
            f"largest n_eff {n_eff:.6f} is not above the cladding index "
            f"{geometry.n_clad:g}"
        )

    amps = vecs[:, 0].reshape(grid.nx, grid.ny).astype(complex)
    # deterministic phase: largest-|E| sample real and positive
    peak = amps.flat[np.argmax(np.abs(amps))]
    amps = amps * (np.conj(peak) / abs(peak))
    profile = SampledField(
        amplitudes=amps,
        dx_um=grid.dx_um,
        dy_um=grid.dy_um,
        wavelength_nm=geometry.wavelength_nm,
        medium_index=1.0,  # profile is reused as the free-space input of the gap
    ).normalized()

    edge = max(
        np.abs(profile.amplitudes[0, :]).max(),
        np.abs(profile.amplitudes[-1, :]).max(),
        np.abs(profile.amplitudes[:, 0]).max(),
        np.abs(profile.amplitudes[:, -1]).max(),
    )
    if edge > BOUNDARY_DECAY_LIMIT * np.abs(profile.amplitudes).max():
        raise GridTooSmall(
            f"mode amplitude at the window edge is {edge:.2e} of the peak; "
            f"limit is {BOUNDARY_DECAY_LIMIT:g}"
        )

    return ModeSolution(
        field=profile,
        n_eff=n_eff,
        mode_area_um2=mode_area(profile),
        geometry=geometry,
    )


def mode_area(mode) -> float:
    """Effective area (integral I)^2 / integral I^2 with I = |E|^2 (um^2)."""
    f = mode.field if hasattr(mode, "field") else mode
    intensity = np.abs(f.amplitudes) ** 2
    total = intensity.sum() * f.cell_area_um2
    if total == 0.0:
        raise ZeroField("mode area of a zero field is undefined")
    return float(total**2 / ((intensity**2).sum() * f.cell_area_um2))


def group_index(n_eff_samples) -> float:
    """n_g = n_eff - lambda * dn_eff/dlambda at the middle sample.

    Input: iterable of (wavelength_nm, n_eff) pairs at distinct wavelengths.
    Three or more samples use a central difference at the middle wavelength;
    exactly two use the secant evaluated at the midpoint.
    """
    samples = sorted((float(w), float(n)) for w, n in n_eff_samples)
    if len(samples) < 2:
        raise InsufficientSamples("need at least 2 (wavelength, n_eff) samples")
    wl = np.array([s[0] for s in samples])
    ne = np.array([s[1] for s in samples])
    if np.any(np.diff(wl) == 0):
        raise InsufficientSamples("wavelengths must be distinct")
    if len(samples) == 2 or len(samples) % 2 == 0:
        m = len(samples) // 2
        lam = 0.5 * (wl[m - 1] + wl[m])
        n_mid = 0.5 * (ne[m - 1] + ne[m])
        slope = (ne[m] - ne[m - 1]) / (wl[m] - wl[m - 1])
    else:
        m = len(samples) // 2
        lam = wl[m]
        n_mid = ne[m]
        slope = (ne[m + 1] - ne[m - 1]) / (wl[m + 1] - wl[m - 1])
    return float(n_mid - lam * slope)
