"""N-term thresholding, weak-lp sparsity measures, and rate fitting.

Errors are reported in the discrete L2 surrogate ||.||_2 / M (recorded in the
curve metadata), so err2(0) equals the squared function norm of the image.
Thresholding ties are broken by the fixed buffer order of CoefficientSet
(coarse, residual, then wedges by (j, ell), row-major within a block), which
makes every curve reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frame import Frame
from .transform import CoefficientSet, analyze, synthesize

__all__ = [
    "ErrorCurve",
    "RateReport",
    "threshold_top_n",
    "nterm_error_curve",
    "weak_lp_norm",
    "rate_fit",
    "per_scale_weak_norms",
    "count_above",
]


@dataclass
class ErrorCurve:
    """(N, squared error) pairs for N-term thresholding approximation."""

    ns: np.ndarray
    err2: np.ndarray
    tail2: np.ndarray  # Parseval tail energies, cross-checked against err2
    meta: dict = field(default_factory=dict)

    def rows(self):
        return list(zip(self.ns.tolist(), self.err2.tolist()))


@dataclass
class RateReport:
    """Least-squares exponent of log2 err2 against log2 N."""

    slope: float
    intercept: float
    n_lo: int
    n_hi: int
    max_residual: float
    n_points: int
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "fit_range": [self.n_lo, self.n_hi],
            "max_residual": self.max_residual,
            "n_points": self.n_points,
            **self.meta,
        }


def _descending_order(data: np.ndarray) -> np.ndarray:
    # stable sort on -|.|: ties fall back to buffer position
    return np.argsort(-np.abs(data), kind="stable")


def threshold_top_n(coeffs: CoefficientSet, n: int) -> CoefficientSet:
    """Keep the min(n, #nonzero) largest-modulus coefficients, zero the rest."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = coeffs.copy()
    if n >= out.data.size:
        return out
    order = _descending_order(out.data)
    mask = np.zeros(out.data.size, dtype=bool)
    mask[order[:n]] = True
    out.data[~mask] = 0.0
    return out


def nterm_error_curve(
    f: np.ndarray,
    frame: Frame,
    ns,
    coeffs: CoefficientSet | None = None,
    meta: dict | None = None,
) -> ErrorCurve:
    """Squared N-term errors for each N, via full synthesis of the kept terms.

    The coefficient tail energy (sum of the squared dropped moduli) is
    computed alongside as tail2.  For a redundant Parseval frame the
    synthesized error satisfies err2 <= tail2 (synthesis contracts vectors
    outside the analysis range); equality would require an orthonormal basis.
    The inequality is checked here and a violation raises, since it would
    mean the frame is not tight.
    """
    ns = np.asarray(sorted(int(n) for n in ns), dtype=int)
    if ns.size and ns[0] < 0:
        raise ValueError("term counts must be >= 0")
    M = frame.grid_size
    scale = 1.0 / (M * M)
    c = coeffs if coeffs is not None else analyze(f, frame)
    order = _descending_order(c.data)
    sq = np.abs(c.data[order]) ** 2
    total = float(sq.sum())
    # summing from the small end keeps deep tails exact (no cancellation)
    tail_from = np.concatenate((np.cumsum(sq[::-1])[::-1], [0.0]))

    err2 = np.empty(ns.size)
    tail2 = np.empty(ns.size)
    kept = c.copy()
    for i, n in enumerate(ns):
        n_eff = min(int(n), c.data.size)
        tail2[i] = tail_from[n_eff] * scale
        kept.data[:] = 0.0
        sel = order[:n_eff]
        kept.data[sel] = c.data[sel]
        rec = synthesize(kept, frame)
        err2[i] = float(np.sum(np.abs(f - rec) ** 2)) * scale
        if err2[i] > tail2[i] * (1.0 + 1e-9) + 1e-12 * total * scale:
            raise RuntimeError(
                f"synthesized error {err2[i]:.3e} exceeds tail energy {tail2[i]:.3e}"
            )
    base = {"M": M, "alpha": frame.params.alpha, "norm": "l2/M"}
    base.update(meta or {})
    return ErrorCurve(ns=ns, err2=err2, tail2=tail2, meta=base)


def weak_lp_norm(seq, p: float) -> float:
    """sup_n n^(1/p) |c*_n| over the nonincreasing rearrangement."""
    if p <= 0:
        raise ValueError("p must be positive")
    c = np.abs(np.asarray(seq, dtype=complex).ravel()).astype(float)
    if c.size == 0:
        return 0.0
    c[::-1].sort()
    ranks = np.arange(1, c.size + 1, dtype=float)
    return float(np.max(ranks ** (1.0 / p) * c))


def rate_fit(curve: ErrorCurve, n_lo: int, n_hi: int) -> RateReport:
    """OLS fit of log2 err2 against log2 N on n_lo <= N <= n_hi."""
    sel = (curve.ns >= n_lo) & (curve.ns <= n_hi) & (curve.ns > 0)
    if sel.sum() < 4:
        raise ValueError("need at least 4 curve points in the fit range")
    e = curve.err2[sel]
    if np.any(e <= 0):
        raise ValueError("fit range contains nonpositive errors")
    x = np.log2(curve.ns[sel].astype(float))
    y = np.log2(e)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return RateReport(
        slope=float(slope),
        intercept=float(intercept),
        n_lo=int(n_lo),
        n_hi=int(n_hi),
        max_residual=resid,
        n_points=int(sel.sum()),
        meta=dict(curve.meta),
    )


def per_scale_weak_norms(coeffs: CoefficientSet, beta: float) -> dict[int, float]:
    """Weak-l(2/(1+beta)) norm of the wedge coefficients at each scale."""
    if not 1.0 < beta <= 2.0:
        raise ValueError("beta must lie in (1, 2]")
    p = 2.0 / (1.0 + beta)
    params = coeffs.frame.params
    return {j: weak_lp_norm(coeffs.scale_moduli(j), p) for j in params.scales}


def count_above(coeffs: CoefficientSet, eps: float, j: int) -> int:
    """Number of scale-j wedge coefficients with modulus above eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return int((coeffs.scale_moduli(j) > eps).sum())
