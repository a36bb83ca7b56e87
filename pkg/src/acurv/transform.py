"""Exact discrete analysis and synthesis for the alpha-curvelet frame.

The pipeline per block is: unitary centered 2D DFT, multiply by the block's
frequency window, re-index the windowed samples into the block's fundamental
cell (a shear-and-wrap permutation, verified injective at build time), and a
unitary inverse DFT of the cell.  Every step is an isometry on its block, so
the whole map is Parseval: coefficient energy equals image energy to float
roundoff, and synthesis is the exact adjoint.  All operations are pure and
deterministic; per-wedge work is independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

from .frame import Frame, WedgeIndex

__all__ = [
    "CoefficientSet",
    "forward_spectrum",
    "inverse_spectrum",
    "wedge_extract",
    "wedge_to_coeffs",
    "coeffs_to_wedge",
    "analyze",
    "synthesize",
    "atom",
    "coarse_atom_direct",
]

NORM_CONVENTION = "unitary-dft"


def forward_spectrum(g: np.ndarray) -> np.ndarray:
    """Unitary 2D DFT with centered frequency indexing."""
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("grid must be square")
    return sfft.fftshift(sfft.fft2(g, norm="ortho"))


def inverse_spectrum(F: np.ndarray) -> np.ndarray:
    return sfft.ifft2(sfft.ifftshift(F), norm="ortho")


@dataclass
class CoefficientSet:
    """All curvelet coefficients of one image, stored in a single buffer.

    The buffer concatenates the coarse block, the residual block, and one
    block per wedge in (j, ell) order, each row-major.  This fixed order is
    the deterministic total order used to break thresholding ties.
    """

    frame: Frame
    data: np.ndarray
    norm_convention: str = NORM_CONVENTION
    source_kind: str = "complex"

    @classmethod
    def zeros(cls, frame: Frame, source_kind: str = "complex") -> "CoefficientSet":
        n = frame.geometry.coarse.shape[0] * frame.geometry.coarse.shape[1]
        n += frame.geometry.residual.shape[0] * frame.geometry.residual.shape[1]
        for w in frame.geometry.wedges:
            n += w.shape[0] * w.shape[1]
        return cls(frame=frame, data=np.zeros(n, dtype=complex), source_kind=source_kind)

    def _offsets(self):
        geo = self.frame.geometry
        off = 0
        for key, shape in [("coarse", geo.coarse.shape), ("residual", geo.residual.shape)] + [
            ((w.j, w.ell), w.shape) for w in geo.wedges
        ]:
            size = shape[0] * shape[1]
            yield key, shape, off
            off += size

    def block(self, key) -> np.ndarray:
        """View of one block as a (P1, P2) array; key is "coarse",
        "residual", or a (j, ell) pair."""
        for k, shape, off in self._offsets():
            if k == key:
                return self.data[off : off + shape[0] * shape[1]].reshape(shape)
        raise KeyError(key)

    def blocks(self):
        """Yield (key, view) over all blocks in buffer order."""
        for k, shape, off in self._offsets():
            yield k, self.data[off : off + shape[0] * shape[1]].reshape(shape)

    def scale_of_entries(self) -> np.ndarray:
        """Scale label per buffer entry: 0 coarse, j_max+1 residual, else j."""
        geo = self.frame.geometry
        labels = np.empty(self.data.size, dtype=np.int32)
        off = 0
        for key, shape, o in self._offsets():
            size = shape[0] * shape[1]
            if key == "coarse":
                labels[o : o + size] = 0
            elif key == "residual":
                labels[o : o + size] = geo.params.j_max + 1
            else:
                labels[o : o + size] = key[0]
            off = o + size
        return labels

    def scale_moduli(self, j: int) -> np.ndarray:
        """Moduli of all wedge coefficients at scale j."""
        parts = [np.abs(self.block((w.j, w.ell))).ravel() for w in self.frame.geometry.wedges if w.j == j]
        if not parts:
            return np.zeros(0)
        return np.concatenate(parts)

    def total_energy(self) -> float:
        return float(np.vdot(self.data, self.data).real)

    def copy(self) -> "CoefficientSet":
        return CoefficientSet(
            frame=self.frame,
            data=self.data.copy(),
            norm_convention=self.norm_convention,
            source_kind=self.source_kind,
        )


def wedge_extract(spectrum: np.ndarray, index: WedgeIndex | tuple, frame: Frame) -> np.ndarray:
    """Windowed spectrum samples over the support of wedge (j, ell)."""
    j, ell = (index.j, index.ell) if isinstance(index, WedgeIndex) else index
    geo = frame.geometry
    for w, chi in zip(geo.wedges, frame.windows.chi):
        if w.j == j and w.ell == ell:
            return spectrum.ravel()[w.support] * chi
    raise KeyError((j, ell))


def _scatter(values: np.ndarray, cell_pos: np.ndarray, shape) -> np.ndarray:
    cell = np.zeros(shape[0] * shape[1], dtype=complex)
    cell[cell_pos] = values
    return cell.reshape(shape)


def wedge_to_coeffs(values: np.ndarray, index: WedgeIndex | tuple, frame: Frame) -> np.ndarray:
    """Linear isometry from wedge-supported data to the dense (P1, P2) cell.

    Scatters the sheared-and-wrapped samples into the fundamental cell and
    applies a unitary inverse 2D DFT.  Norm-preserving because the wrap map
    is injective on the support.
    """
    j, ell = (index.j, index.ell) if isinstance(index, WedgeIndex) else index
    w = frame.geometry.wedge(j, ell)
    if values.shape != w.support.shape:
        raise ValueError("values not aligned with wedge support")
    return sfft.ifft2(_scatter(values, w.cell_pos, w.shape), norm="ortho")


def coeffs_to_wedge(coeffs: np.ndarray, index: WedgeIndex | tuple, frame: Frame) -> np.ndarray:
    """Inverse of wedge_to_coeffs on the wedge support (its adjoint)."""
    j, ell = (index.j, index.ell) if isinstance(index, WedgeIndex) else index
    w = frame.geometry.wedge(j, ell)
    if coeffs.shape != w.shape:
        raise ValueError(f"expected shape {w.shape}")
    cell_hat = sfft.fft2(coeffs, norm="ortho")
    return cell_hat.ravel()[w.cell_pos]


def analyze(f: np.ndarray, frame: Frame) -> CoefficientSet:
    """All curvelet coefficients of a sampled image.

    The coefficient energy equals the image energy (tight frame); see the
    CoefficientSet buffer order for the deterministic coefficient layout.
    """
    f = np.asarray(f)
    M = frame.grid_size
    if f.shape != (M, M):
        raise ValueError(f"grid shape {f.shape} does not match frame size {M}")
    kind = "real" if not np.iscomplexobj(f) else "complex"
    F = forward_spectrum(f).ravel()
    geo = frame.geometry
    win = frame.windows
    out = CoefficientSet.zeros(frame, source_kind=kind)

    blk = out.block("coarse")
    blk[:] = sfft.ifft2(
        _scatter(F[geo.coarse.support] * win.chi0_sparse, geo.coarse.cell_pos, geo.coarse.shape),
        norm="ortho",
    )
    blk = out.block("residual")
    blk[:] = sfft.ifft2(
        _scatter(F[geo.residual.support] * win.chi_res, geo.residual.cell_pos, geo.residual.shape),
        norm="ortho",
    )
    for w, chi in zip(geo.wedges, win.chi):
        blk = out.block((w.j, w.ell))
        blk[:] = sfft.ifft2(_scatter(F[w.support] * chi, w.cell_pos, w.shape), norm="ortho")
    return out


def synthesize(coeffs: CoefficientSet, frame: Frame | None = None) -> np.ndarray:
    """Exact adjoint of analyze; inverts it for this Parseval frame."""
    frame = frame or coeffs.frame
    if frame.digest() != coeffs.frame.digest():
        raise ValueError("coefficient set belongs to a different frame")
    M = frame.grid_size
    geo = frame.geometry
    win = frame.windows
    F = np.zeros(M * M, dtype=complex)

    def gather(block, geom, chi):
        if not block.any():
            return
        cell_hat = sfft.fft2(block, norm="ortho")
        # support indices are unique within a block, so fancy += is exact
        F[geom.support] += cell_hat.ravel()[geom.cell_pos] * chi

    gather(coeffs.block("coarse"), geo.coarse, win.chi0_sparse)
    gather(coeffs.block("residual"), geo.residual, win.chi_res)
    for w, chi in zip(geo.wedges, win.chi):
        gather(coeffs.block((w.j, w.ell)), w, chi)
    return inverse_spectrum(F.reshape(M, M))


def atom(frame: Frame, key, k: tuple[int, int]) -> np.ndarray:
    """Single frame element: synthesis of a unit coefficient at (key, k).

    key is "coarse", "residual", or a (j, ell) pair; k indexes the block.
    """
    c = CoefficientSet.zeros(frame)
    blk = c.block(key)
    if not (0 <= k[0] < blk.shape[0] and 0 <= k[1] < blk.shape[1]):
        raise IndexError(f"position {k} outside block {blk.shape}")
    blk[k] = 1.0
    return synthesize(c, frame)


def coarse_atom_direct(frame: Frame, k: tuple[int, int]) -> np.ndarray:
    """Coarse frame element by brute-force summation (no FFT anywhere).

    Independent oracle for small grids: evaluates the band-limited translate
    directly from its frequency samples,
    psi_{0,k}(x) = (P0 M)^{-1} sum_xi chi_0(xi) exp(2 pi i xi . (x/M - k/P0)).
    """
    M = frame.grid_size
    geo = frame.geometry
    p0 = geo.coarse.shape[0]
    xi1 = geo.coarse.support // M - M // 2
    xi2 = geo.coarse.support % M - M // 2
    chi = frame.windows.chi0_sparse
    x = np.arange(M) / M
    out = np.empty((M, M), dtype=complex)
    for i1 in range(M):
        ph1 = xi1 * (x[i1] - k[0] / p0)
        ph2 = np.outer(x - k[1] / p0, xi2)
        out[i1] = np.exp(2j * np.pi * (ph1 + ph2)) @ chi
    return out / (p0 * M)
