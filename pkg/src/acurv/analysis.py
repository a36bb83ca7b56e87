"""Numerical checks of the frame's decay laws beyond the N-term pipeline.

Covers per-wedge angular energy decay for edge images, radial Fourier-slice
decay via exact nonuniform DFT sums, the scale-uniform l1 bound of the frame
elements, and the embedded orthogonal hypercube families that force the
benchmark approximation exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .cartoon import holder_seminorm
from .frame import Frame, smooth_step
from .transform import atom, forward_spectrum

__all__ = [
    "WedgeEnergyTable",
    "HypercubeFamily",
    "Ell0CopyVerdict",
    "wedge_energy_table",
    "smooth_cyclic",
    "energy_decay_fit",
    "radial_slice_energy",
    "apriori_bound_check",
    "hypercube_family",
    "copy_of_lp_check",
    "straight_edge_image",
]


@dataclass
class WedgeEnergyTable:
    """Per-wedge windowed spectrum energies at one scale."""

    j: int
    ells: np.ndarray
    omegas: np.ndarray
    ell_geom: np.ndarray  # 1 + 2^((1-alpha)j) |sin omega|
    energies: np.ndarray

    def rows(self):
        return [
            (self.j, int(l), float(o), float(g), float(e))
            for l, o, g, e in zip(self.ells, self.omegas, self.ell_geom, self.energies)
        ]


def wedge_energy_table(f: np.ndarray, frame: Frame, j: int) -> WedgeEnergyTable:
    """Exact discrete energies ||f_hat chi_J||^2 for every wedge at scale j."""
    params = frame.params
    if not params.j_min <= j <= params.j_max:
        raise ValueError(f"scale {j} outside frame range")
    F = forward_spectrum(f).ravel()
    ells, omegas, geoms, energies = [], [], [], []
    for w, chi in zip(frame.geometry.wedges, frame.windows.chi):
        if w.j != j:
            continue
        ells.append(w.ell)
        omegas.append(w.omega)
        geoms.append(w.ell_geom(params.alpha))
        energies.append(float(np.sum(np.abs(F[w.support] * chi) ** 2)))
    return WedgeEnergyTable(
        j=j,
        ells=np.array(ells),
        omegas=np.array(omegas),
        ell_geom=np.array(geoms),
        energies=np.array(energies),
    )


def smooth_cyclic(values, window: int = 3) -> np.ndarray:
    """Cyclic moving average over the orientation index."""
    v = np.asarray(values, dtype=float)
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd and positive")
    if v.size < window:
        return v.copy()
    half = window // 2
    out = np.zeros_like(v)
    for s in range(-half, half + 1):
        out += np.roll(v, s)
    return out / window


def energy_decay_fit(table: WedgeEnergyTable, exclude_nearest: int = 2, window: int = 3):
    """Fitted log-log exponent of smoothed energy against the angular measure.

    Smooths over adjacent orientations (the raw energies oscillate with the
    window overlap pattern), sorts by ell_geom, drops the `exclude_nearest`
    wedges closest to the edge normal, and fits log e against log ell_geom.
    Returns (exponent, smoothed_sorted_energies, sorted_ell_geom).
    """
    sm = smooth_cyclic(table.energies, window)
    order = np.argsort(table.ell_geom, kind="stable")
    lg = table.ell_geom[order][exclude_nearest:]
    es = sm[order][exclude_nearest:]
    if lg.size < 3:
        raise ValueError("too few wedges to fit a decay exponent")
    if np.any(es <= 0):
        raise ValueError("nonpositive smoothed energies in fit")
    slope = np.polyfit(np.log2(lg), np.log2(es), 1)[0]
    return float(slope), sm[order], table.ell_geom[order]


def radial_slice_energy(f: np.ndarray, eta: float, j: int, samples_per_unit: float = 2.0) -> float:
    """Spectrum energy along the ray (cos eta, sin eta) over radii [2^(j-1), 2^(j+1)].

    Uses a direct nonuniform DFT sum over the spatial grid (exact at off-grid
    frequencies, O(M^2) per radial sample) and the trapezoid rule in radius.
    The continuum normalization f_hat(nu) = M^-2 sum f(x) exp(-2 pi i x.nu/M)
    makes the result grid-size independent.
    """
    f = np.asarray(f)
    M = f.shape[0]
    if f.shape != (M, M):
        raise ValueError("grid must be square")
    if not -np.pi / 2 < eta <= np.pi / 2 + 1e-12:
        raise ValueError("eta must lie in (-pi/2, pi/2]")
    r1, r2 = 2.0 ** (j - 1), 2.0 ** (j + 1)
    n = max(8, int(round((r2 - r1) * samples_per_unit)) + 1)
    lam = np.linspace(r1, r2, n)
    x = np.arange(M) / M
    t = (x[:, None] * math.cos(eta) + x[None, :] * math.sin(eta)).ravel()
    fv = f.ravel().astype(complex)
    vals = np.empty(n, dtype=complex)
    chunk = max(1, (1 << 21) // (M * M))
    for s in range(0, n, chunk):
        lam_c = lam[s : s + chunk]
        vals[s : s + chunk] = np.exp(-2j * np.pi * np.outer(lam_c, t)) @ fv
    vals /= M * M
    return float(trapezoid(np.abs(vals) ** 2, lam))


def apriori_bound_check(frame: Frame, j: int, n_positions: int = 3) -> float:
    """Measured B_j = ||psi||_1 * 2^((1+alpha)j/2) for L2-normalized atoms.

    Evaluates a few translates of the (j, 0) frame element on the grid; the
    L1 norm uses the Riemann surrogate sum/M^2.  Uniformity of B_j across
    scales is the discrete form of the a-priori coefficient bound.
    """
    params = frame.params
    if not params.j_min <= j <= params.j_max:
        raise ValueError(f"scale {j} outside frame range")
    w = frame.geometry.wedge(j, 0)
    M = frame.grid_size
    p1, p2 = w.shape
    ks = [(p1 // 2, p2 // 2), (p1 // 3, p2 // 3), (0, 0)][: max(1, n_positions)]
    best = 0.0
    for k in ks:
        a = atom(frame, (j, 0), k)
        l1 = float(np.abs(a).sum()) / (M * M)
        l2 = float(np.sqrt(np.sum(np.abs(a) ** 2))) / M
        best = max(best, l1 / l2 * 2.0 ** ((1.0 + params.alpha) * j / 2.0))
    return best


def _phi(t):
    """C-infinity bump on (0, 1), vanishing to all orders at the endpoints."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (ti * (1.0 - ti)))
    return out


def _phi_prime(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    u = ti * (1.0 - ti)
    out[inside] = np.exp(-1.0 / u) * (1.0 - 2.0 * ti) / u**2
    return out


@dataclass
class HypercubeFamily:
    """k^2 disjoint bumps psi_i(t) = k^-beta s phi(k t1 - i1) phi(k t2 - i2)."""

    beta: float
    k: int
    nu: float
    scale: float  # rescale factor keeping the C^beta norm within nu
    psi_l2: float  # L2 norm of the rescaled base bump
    m: int = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        self.m = self.k**2
        self.delta = self.k ** (-self.beta - 1.0) * self.psi_l2

    def sample_member(self, i: tuple[int, int], n: int) -> np.ndarray:
        """psi_i on the midpoint grid ((u+1/2)/n, (v+1/2)/n) of [0,1]^2."""
        if not (0 <= i[0] < self.k and 0 <= i[1] < self.k):
            raise IndexError(f"member index {i} outside {self.k}x{self.k}")
        t = (np.arange(n) + 0.5) / n
        g1 = _phi(self.k * t - i[0])
        g2 = _phi(self.k * t - i[1])
        return self.k ** (-self.beta) * self.scale * np.outer(g1, g2)

    def member_l2(self, i: tuple[int, int], n: int) -> float:
        """Midpoint-quadrature L2 norm of member i at resolution n."""
        v = self.sample_member(i, n)
        return float(np.sqrt(np.mean(v**2)))


def _phi_l2(n: int = 1 << 16) -> float:
    t = (np.arange(n) + 0.5) / n
    return float(np.mean(_phi(t) ** 2))


def hypercube_family(beta: float, k: int, nu: float = 1.0) -> HypercubeFamily:
    """Orthogonal hypercube family of dimension k^2 with C^beta budget nu.

    beta = 1 is accepted as the limiting case used by the l0_p fit.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 1.0 <= beta <= 2.0:
        raise ValueError("beta must lie in [1, 2]")
    n = 1 << 10
    t = (np.arange(n) + 0.5) / n
    p0 = _phi(t)
    p1 = _phi_prime(t)
    sup = float(p0.max() ** 2)
    grad = float(np.abs(p1).max() * p0.max())
    if beta > 1.0:
        hol = holder_seminorm(np.abs(np.outer(p1, p0)), beta - 1.0, 1.0 / n)
    else:
        hol = 0.0
    raw_norm = sup + 2 * grad + hol
    scale = nu / (1.2 * raw_norm)
    return HypercubeFamily(beta=beta, k=k, nu=nu, scale=scale, psi_l2=scale * _phi_l2())


@dataclass
class Ell0CopyVerdict:
    ok: bool
    p_fitted: float | None
    p_reference: float | None
    reason: str


def copy_of_lp_check(ms, deltas, beta: float | None = None) -> Ell0CopyVerdict:
    """Fit the embedding exponent p from hypercube dimensions and sidelengths.

    Requires delta_k strictly decreasing to zero; fits log m against
    log(1/delta) and reports the slope next to the reference 2/(beta+1).
    """
    m = np.asarray(ms, dtype=float)
    d = np.asarray(deltas, dtype=float)
    if m.size != d.size or m.size < 3:
        raise ValueError("need at least 3 (m, delta) pairs")
    ref = 2.0 / (beta + 1.0) if beta is not None else None
    if np.any(d <= 0) or np.any(np.diff(d) >= 0):
        return Ell0CopyVerdict(False, None, ref, "sidelengths are not strictly decreasing")
    slope = float(np.polyfit(np.log(1.0 / d), np.log(m), 1)[0])
    return Ell0CopyVerdict(True, slope, ref, "ok")


def straight_edge_image(M: int, sharpness: float = 1.0) -> np.ndarray:
    """Vertical straight edge through the center under a C-infinity radial bump.

    The discontinuity is the segment x1 = 1/2; the window removes the wrap-
    around edge of the periodic domain.
    """
    x = np.arange(M) / M
    d = np.hypot(x[:, None] - 0.5, x[None, :] - 0.5)
    window = 1.0 - smooth_step((d - 0.30) / 0.15, sharpness)
    return (x[:, None] >= 0.5) * window
