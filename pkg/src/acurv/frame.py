"""Frequency-domain construction of the alpha-curvelet tight frame.

The frame is built on the centered integer frequency grid
``{-M/2, ..., M/2-1}^2`` of an M x M periodic image.  Scale ``j`` occupies the
radial band ``|xi| in [2^(j-1), 2^(j+1)]`` and carries ``L_j = 2^floor(j(1-a))``
orientations; each scale-angle pair owns an antipodal pair of polar wedges.
A coarse isotropic block covers ``|xi| <= 2^j_min`` and a residual isotropic
block closes the tiling out to the Nyquist corners, so the squared windows sum
to exactly one at every grid point.  All construction is pure; the resulting
tables are immutable and safe to share across threads.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

__all__ = [
    "FrameParams",
    "WedgeIndex",
    "BlockGeometry",
    "WedgeGeometry",
    "FrameGeometry",
    "WindowTables",
    "Frame",
    "CalderonError",
    "smooth_step",
    "radial_window",
    "residual_window",
    "angular_window",
    "build_geometry",
    "build_windows",
    "build_frame",
]

# Tolerated deviation of the squared-window partition of unity from 1.
CALDERON_TOL = 1e-12

# Cell-area budget per wedge, in units of 2^(j(1+alpha)).  The antipodal wedge
# pair alone has area ~18-35 in these units (depending on how much the floor in
# L_j loses), so the minimal injective cell lands around 25-55.
CELL_BUDGET = 64.0

_FLOOR_NUDGE = 1e-9


class CalderonError(RuntimeError):
    """The discrete squared-window partition of unity failed to close."""


def _int_floor(x: float) -> int:
    return int(math.floor(x + _FLOOR_NUDGE))


def _int_ceil(x: float) -> int:
    return int(math.ceil(x - _FLOOR_NUDGE))


def smooth_step(t, sharpness: float = 1.0):
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.

    Uses the standard bump-quotient s(t) = e(t) / (e(t) + e(1-t)) with
    e(t) = exp(-sharpness/t), so s(t) + s(1-t) = 1 and s(1/2) = 1/2.
    Accepts scalars or arrays.
    """
    if sharpness <= 0:
        raise ValueError("sharpness must be positive")
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    e0 = np.exp(-sharpness / tm)
    e1 = np.exp(-sharpness / (1.0 - tm))
    out[mid] = e0 / (e0 + e1)
    return out if out.ndim else float(out)


def radial_window(j: int, r, j_min: int = 1, sharpness: float = 1.0):
    """Radial window of scale j on the integer-frequency axis.

    j = 0 is the coarse window: 1 on [0, 3/4 * 2^j_min], supported in
    [0, 2^j_min].  j >= 1 is the band window supported in [2^(j-1), 2^(j+1)]
    and equal to 1 on [3/4 * 2^j, 3/2 * 2^j]; adjacent bands overlap only
    inside each other's plateaus.
    """
    r = np.asarray(r, dtype=float)
    if j == 0:
        cut = float(2**j_min)
        # falls from 1 at 3/4*cut to 0 at cut
        out = smooth_step((cut - r) / (0.25 * cut), sharpness)
    elif j >= 1:
        s = r / float(2**j)
        rise = smooth_step((s - 0.5) / 0.25, sharpness)
        fall = smooth_step((2.0 - s) / 0.5, sharpness)
        out = np.minimum(rise, fall)
    else:
        raise ValueError("scale index must be >= 0")
    return out if np.ndim(out) else float(out)


def residual_window(r, j_max: int, sharpness: float = 1.0):
    """Isotropic window closing the tiling above the top band.

    Rises exactly like the band at scale j_max + 1 would, then stays 1 out to
    the Nyquist corners.
    """
    r = np.asarray(r, dtype=float)
    s = r / float(2 ** (j_max + 1))
    out = smooth_step((s - 0.5) / 0.25, sharpness)
    return out if np.ndim(out) else float(out)


def _wrap_angle(t):
    """Wrap angles into [-pi, pi)."""
    return (np.asarray(t, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


def _angular_profile(t, sharpness: float):
    """The paper-style profile V: 1 on [-pi/2, pi/2], 0 outside [-3pi/4, 3pi/4]."""
    return smooth_step((0.75 * np.pi - np.abs(t)) / (0.25 * np.pi), sharpness)


@dataclass(frozen=True)
class FrameParams:
    """Parameters that fully determine a discrete alpha-curvelet frame."""

    alpha: float
    grid_size: int
    j_min: int = 1
    j_max: int | None = None
    transition_sharpness: float = 1.0

    def __post_init__(self):
        M = self.grid_size
        if M < 16 or M & (M - 1):
            raise ValueError("grid_size must be a power of two >= 16")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.transition_sharpness <= 0:
            raise ValueError("transition_sharpness must be positive")
        if self.j_max is None:
            object.__setattr__(self, "j_max", int(math.log2(M)) - 2)
        if not 1 <= self.j_min <= self.j_max:
            raise ValueError("need 1 <= j_min <= j_max")
        if 2 ** (self.j_max + 1) > M // 2:
            raise ValueError("top band must satisfy 2^(j_max+1) <= grid_size/2")

    def angular_splits(self, j: int) -> int:
        """2^floor(j(1-alpha)), the number of angular splits at scale j."""
        return 2 ** _int_floor(j * (1.0 - self.alpha))

    def orientations(self, j: int) -> int:
        return self.angular_splits(j)

    def characteristic_angle(self, j: int) -> float:
        return math.pi / self.angular_splits(j)

    @property
    def scales(self) -> range:
        return range(self.j_min, self.j_max + 1)


@dataclass(frozen=True)
class WedgeIndex:
    """Scale-angle pair (j, ell) with 0 <= ell < L_j."""

    j: int
    ell: int

    def validate(self, params: FrameParams) -> None:
        if not (params.j_min <= self.j <= params.j_max):
            raise ValueError(f"scale {self.j} outside [{params.j_min}, {params.j_max}]")
        if not 0 <= self.ell < params.orientations(self.j):
            raise ValueError(f"orientation {self.ell} outside [0, L_{self.j})")


def angular_window(params: FrameParams, j: int, ell: int, theta):
    """Angular window of wedge (j, ell), evaluated at polar angle theta.

    The base profile is scaled by 2^floor(j(1-alpha)) and symmetrized over
    antipodes; wedge ell is the base window composed with the rotation by
    ell * omega_j, so its support is centered on the angle -ell * omega_j
    modulo pi.  The result is 2pi-periodic and even under theta -> theta + pi.
    """
    WedgeIndex(j, ell).validate(params)
    nfold = params.angular_splits(j)
    t = _wrap_angle(np.asarray(theta, dtype=float) + math.pi * ell / nfold)
    sh = params.transition_sharpness
    out = _angular_profile(nfold * t, sh) + _angular_profile(nfold * _wrap_angle(t + np.pi), sh)
    return out if np.ndim(out) else float(out)


@dataclass
class BlockGeometry:
    """Geometry of one isotropic block (coarse or residual)."""

    name: str
    shape: tuple[int, int]
    support: np.ndarray  # flat indices into the centered M x M grid
    cell_pos: np.ndarray  # flat indices into the cell, aligned with support


@dataclass
class WedgeGeometry:
    """Geometry of one antipodal wedge pair."""

    j: int
    ell: int
    omega: float  # orientation angle ell * omega_j
    omega_j: float
    nfold: int
    rotation: np.ndarray  # 2x2 rotation by omega
    kind: str  # "h": sheared along xi1, "v": along xi2, "iso": no shear
    slope: float  # tan (h) or cot (v) of the wedge orientation
    shear: int  # integer shear actually applied; keeps cell phases exactly linear
    shape: tuple[int, int]
    support: np.ndarray
    cell_pos: np.ndarray

    @property
    def index(self) -> WedgeIndex:
        return WedgeIndex(self.j, self.ell)

    def ell_geom(self, alpha: float) -> float:
        """Angular distance measure 1 + 2^((1-alpha)j) |sin omega|."""
        return 1.0 + 2.0 ** ((1.0 - alpha) * self.j) * abs(math.sin(self.omega))


@dataclass
class FrameGeometry:
    """All scale/angle bookkeeping of a frame: angles, rotations, cells."""

    params: FrameParams
    coarse: BlockGeometry
    residual: BlockGeometry
    wedges: list[WedgeGeometry]

    def wedge(self, j: int, ell: int) -> WedgeGeometry:
        for w in self.wedges:
            if w.j == j and w.ell == ell:
                return w
        raise KeyError(f"no wedge ({j}, {ell})")

    def wedges_at_scale(self, j: int) -> list[WedgeGeometry]:
        return [w for w in self.wedges if w.j == j]

    def block_table(self) -> list[dict]:
        rows = [
            {"name": "coarse", "j": None, "ell": None, "shape": list(self.coarse.shape)},
            {"name": "residual", "j": None, "ell": None, "shape": list(self.residual.shape)},
        ]
        for w in self.wedges:
            rows.append({"name": "wedge", "j": w.j, "ell": w.ell, "shape": list(w.shape)})
        return rows

    def digest(self) -> str:
        p = self.params
        doc = {
            "alpha": p.alpha,
            "grid_size": p.grid_size,
            "j_min": p.j_min,
            "j_max": p.j_max,
            "transition_sharpness": p.transition_sharpness,
            "blocks": [
                [b["name"], b["j"], b["ell"], b["shape"][0], b["shape"][1], int(n)]
                for b, n in zip(
                    self.block_table(),
                    [self.coarse.support.size, self.residual.support.size]
                    + [w.support.size for w in self.wedges],
                )
            ],
        }
        blob = json.dumps(doc, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_json_dict(self) -> dict:
        p = self.params
        scales = []
        for j in p.scales:
            scales.append(
                {
                    "j": j,
                    "orientations": p.orientations(j),
                    "characteristic_angle": p.characteristic_angle(j),
                }
            )
        wedges = [
            {
                "j": w.j,
                "ell": w.ell,
                "omega": w.omega,
                "kind": w.kind,
                "shape": list(w.shape),
                "support_size": int(w.support.size),
            }
            for w in self.wedges
        ]
        return {
            "alpha": p.alpha,
            "grid_size": p.grid_size,
            "j_min": p.j_min,
            "j_max": p.j_max,
            "transition_sharpness": p.transition_sharpness,
            "digest": self.digest(),
            "scales": scales,
            "coarse_shape": list(self.coarse.shape),
            "residual_shape": list(self.residual.shape),
            "wedges": wedges,
        }


def _freq_axes(M: int):
    """Centered integer frequencies along one axis."""
    return np.arange(-(M // 2), M // 2)


def _polar_grids(M: int):
    xi1 = _freq_axes(M)[:, None].astype(float)
    xi2 = _freq_axes(M)[None, :].astype(float)
    return np.hypot(xi1, xi2), np.arctan2(xi2, xi1)


def _column_thickness(a: np.ndarray, b: np.ndarray) -> int:
    order = np.lexsort((b, a))
    a_s, b_s = a[order], b[order]
    starts = np.flatnonzero(np.r_[True, a_s[1:] != a_s[:-1]])
    ends = np.r_[starts[1:], a_s.size]
    return int(np.max(b_s[ends - 1] - b_s[starts]) + 1)


def _injective(a: np.ndarray, b: np.ndarray, p1: int, p2: int) -> bool:
    key = (a % p1).astype(np.int64) * np.int64(p2) + (b % p2)
    return np.unique(key).size == key.size


def _search_cell(a: np.ndarray, b: np.ndarray, j: int, alpha: float, M: int):
    """Smallest-area (P1, P2) on the candidate grid that injects the wedge."""
    p2_floor = 2 ** (_int_ceil(alpha * j) + 2)
    thick = _column_thickness(a, b)
    best = None
    for p1 in sorted({min(2 ** (j + 1), M), min(2 ** (j + 2), M)}):
        p2 = sfft.next_fast_len(max(p2_floor, 8))
        cap = min(M, max(4 * thick, p2_floor))
        while p2 <= cap:
            if _injective(a, b, p1, p2):
                if best is None or p1 * p2 < best[0] * best[1]:
                    best = (p1, p2)
                break
            p2 = sfft.next_fast_len(p2 + max(1, p2 // 16))
    if best is None:
        # always injective: full fundamental domain
        best = (M, M)
        if not _injective(a, b, M, M):
            raise RuntimeError("wedge support does not inject even at full cell")
    return best


def build_geometry(params: FrameParams) -> FrameGeometry:
    """Angles, rotations, wedge supports, and injective coefficient cells.

    Wedge supports are determined analytically (radial band times angular
    reach); the per-wedge cell is the smallest candidate for which the sheared
    support injects modulo the cell, verified point-by-point at build time.
    """
    p = params
    M = p.grid_size
    r, theta = _polar_grids(M)
    xi1 = np.broadcast_to(_freq_axes(M)[:, None], (M, M))
    xi2 = np.broadcast_to(_freq_axes(M)[None, :], (M, M))

    # coarse block: everything strictly inside radius 2^j_min
    sup0 = np.flatnonzero((r < 2.0**p.j_min).ravel())
    p0 = 2 ** (p.j_min + 1)
    c0 = (xi1.ravel()[sup0] % p0) * p0 + (xi2.ravel()[sup0] % p0)
    coarse = BlockGeometry("coarse", (p0, p0), sup0, c0.astype(np.int64))

    # residual block: everything strictly outside radius 2^j_max, full cell
    supr = np.flatnonzero((r > 2.0**p.j_max).ravel())
    cr = (xi1.ravel()[supr] % M) * M + (xi2.ravel()[supr] % M)
    residual = BlockGeometry("residual", (M, M), supr, cr.astype(np.int64))

    wedges: list[WedgeGeometry] = []
    flat_x1 = xi1.ravel()
    flat_x2 = xi2.ravel()
    for j in p.scales:
        band = (r > 2.0 ** (j - 1)) & (r < 2.0 ** (j + 1))
        band_idx = np.flatnonzero(band.ravel())
        th_band = theta.ravel()[band_idx]
        nfold = p.angular_splits(j)
        omega_j = math.pi / nfold
        reach = 0.75 * omega_j
        for ell in range(nfold):
            omega = ell * omega_j
            # the wedge rotated by omega is centered on the angle -omega mod pi
            center = -omega
            if nfold == 1:
                sup = band_idx
                kind, slope = "iso", 0.0
            else:
                # angular distance to the wedge axis, modulo pi
                d = np.abs(_wrap_angle((th_band - center) * 2.0) / 2.0)
                sup = band_idx[d < reach]
                # orient the shear along the axis closest to the wedge
                ang = _wrap_angle(center)
                ang = ang + math.pi if ang < -math.pi / 2 else ang
                ang = ang - math.pi if ang > math.pi / 2 else ang
                if abs(ang) <= math.pi / 4:
                    kind, slope = "h", math.tan(ang)
                else:
                    kind, slope = "v", 1.0 / math.tan(ang)
            x1s = flat_x1[sup].astype(np.int64)
            x2s = flat_x2[sup].astype(np.int64)
            # the shear must be an integer: a fractional per-column shift is not
            # a linear phase on the cell and would scatter the frame elements
            shear = int(round(slope))
            if kind == "v":
                a = x2s
                b = x1s - shear * x2s
            else:
                a = x1s
                b = x2s - shear * x1s
            if kind == "iso":
                p1 = p2 = min(2 ** (j + 2), M)
                if not _injective(a, b, p1, p2):
                    raise RuntimeError("isotropic cell failed to inject")
            else:
                p1, p2 = _search_cell(a, b, j, p.alpha, M)
            budget = CELL_BUDGET * 2.0 ** (j * (1.0 + p.alpha))
            if p1 * p2 > budget:
                raise RuntimeError(
                    f"cell {p1}x{p2} for wedge ({j},{ell}) exceeds redundancy budget"
                )
            cell = (a % p1) * np.int64(p2) + (b % p2)
            c, s = math.cos(omega), math.sin(omega)
            rot = np.array([[c, -s], [s, c]])
            wedges.append(
                WedgeGeometry(
                    j=j,
                    ell=ell,
                    omega=omega,
                    omega_j=omega_j,
                    nfold=nfold,
                    rotation=rot,
                    kind=kind,
                    slope=slope,
                    shear=shear,
                    shape=(int(p1), int(p2)),
                    support=sup,
                    cell_pos=cell.astype(np.int64),
                )
            )
    return FrameGeometry(params=p, coarse=coarse, residual=residual, wedges=wedges)


@dataclass
class WindowTables:
    """Tabulated windows: dense chi_0 and Psi, sparse chi per wedge/residual."""

    chi0: np.ndarray  # dense M x M
    psi: np.ndarray  # dense M x M
    chi0_sparse: np.ndarray  # values over coarse support
    chi_res: np.ndarray  # values over residual support
    chi: list[np.ndarray]  # values over each wedge support
    calderon_deviation: float


def build_windows(params: FrameParams, geometry: FrameGeometry) -> WindowTables:
    """Tabulate Psi, chi_0, chi_res and every chi_J on the frequency grid.

    Raises CalderonError if the squared windows fail to sum to 1 within
    1e-12 anywhere on the grid (that would be a construction bug, not data).
    """
    p = params
    M = p.grid_size
    r, theta = _polar_grids(M)
    r_flat = r.ravel()
    th_flat = theta.ravel()
    sh = p.transition_sharpness

    w0 = radial_window(0, r_flat[geometry.coarse.support], p.j_min, sh)
    wr = residual_window(r_flat[geometry.residual.support], p.j_max, sh)

    # support indices are unique within each block, so fancy += accumulates exactly
    raw: list[np.ndarray] = []
    psi = np.zeros(M * M)
    psi[geometry.coarse.support] += w0**2
    psi[geometry.residual.support] += wr**2
    for w in geometry.wedges:
        rad = radial_window(w.j, r_flat[w.support], p.j_min, sh)
        t = _wrap_angle(th_flat[w.support] - w.omega)
        ang = _angular_profile(w.nfold * t, sh) + _angular_profile(
            w.nfold * _wrap_angle(t + np.pi), sh
        )
        vals = rad * ang
        raw.append(vals)
        psi[w.support] += vals**2

    if psi.min() <= 0.0:
        raise CalderonError("frequency grid not fully covered (Psi has zeros)")
    sq = np.sqrt(psi)

    chi0_sparse = w0 / sq[geometry.coarse.support]
    chi_res = wr / sq[geometry.residual.support]
    chi = [v / sq[w.support] for v, w in zip(raw, geometry.wedges)]

    total = np.zeros(M * M)
    total[geometry.coarse.support] += chi0_sparse**2
    total[geometry.residual.support] += chi_res**2
    for w, v in zip(geometry.wedges, chi):
        total[w.support] += v**2
    dev = float(np.max(np.abs(total - 1.0)))
    if dev > CALDERON_TOL:
        raise CalderonError(f"Calderon deviation {dev:.3e} exceeds {CALDERON_TOL}")

    chi0 = np.zeros(M * M)
    chi0[geometry.coarse.support] = chi0_sparse
    return WindowTables(
        chi0=chi0.reshape(M, M),
        psi=psi.reshape(M, M),
        chi0_sparse=chi0_sparse,
        chi_res=chi_res,
        chi=chi,
        calderon_deviation=dev,
    )


@dataclass
class Frame:
    """A fully built frame: parameters, geometry, and window tables."""

    params: FrameParams
    geometry: FrameGeometry
    windows: WindowTables

    @property
    def grid_size(self) -> int:
        return self.params.grid_size

    def digest(self) -> str:
        return self.geometry.digest()


def build_frame(params: FrameParams) -> Frame:
    geometry = build_geometry(params)
    windows = build_windows(params, geometry)
    return Frame(params=params, geometry=geometry, windows=windows)
