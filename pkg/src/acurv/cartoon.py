"""Cartoon-like test images: star-shaped Hoelder domains with smooth parts.

A cartoon is f0 + f1 * indicator(B), where B is a star-shaped set whose polar
radius is a finite trigonometric sum with a (gamma-1)-Hoelder derivative, and
the smooth parts are finite trigonometric sums with controlled C^beta norms.
Class membership is verified, not assumed: generators over-provision their
smoothness budgets and every spec re-checks its own invariants.  Generation
and rasterization are pure; the seeded generator (Philox) is consumed in a
fixed order, so identical seeds give identical cartoons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StarDomain",
    "SmoothField",
    "CartoonSpec",
    "holder_seminorm",
    "random_star_domain",
    "random_smooth_field",
    "binary_disk",
    "random_cartoon",
    "rasterize",
    "boundary_points",
]

_VALIDATION_SAMPLES = 4096


def holder_seminorm(values, order: float, spacing: float, periodic: bool = False) -> float:
    """Hoelder seminorm estimate sup |g(x)-g(y)| / |x-y|^order from samples.

    Scans dyadic separations on the sampling grid, so the result is a lower
    bound of the true seminorm.  2-D sample arrays are scanned along both
    axes (same spacing assumed).
    """
    if not 0.0 < order <= 1.0:
        raise ValueError("order must lie in (0, 1]")
    g = np.asarray(values, dtype=float)
    if g.size < 64:
        raise ValueError("need at least 64 samples")
    best = 0.0
    for axis in range(g.ndim):
        n = g.shape[axis]
        h = 1
        while h <= n // 2:
            if periodic:
                diff = np.abs(np.roll(g, -h, axis=axis) - g)
            else:
                lead = np.take(g, np.arange(h, n), axis=axis)
                diff = np.abs(lead - np.take(g, np.arange(n - h), axis=axis))
            if diff.size:
                best = max(best, float(diff.max()) / (h * spacing) ** order)
            h *= 2
    return best


@dataclass
class StarDomain:
    """Star-shaped set: polar radius rho(eta) about a center point.

    rho(eta) = rho_base + sum_n a_n cos(n eta) + b_n sin(n eta).
    """

    center: tuple[float, float]
    rho_base: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    gamma: float
    nu: float
    rho0: float

    def __post_init__(self):
        self.cos_coeffs = np.asarray(self.cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(self.sin_coeffs, dtype=float)
        if self.cos_coeffs.shape != self.sin_coeffs.shape:
            raise ValueError("coefficient lists must have equal length")

    def _harmonics(self):
        return np.arange(1, self.cos_coeffs.size + 1)

    def rho(self, eta):
        eta = np.asarray(eta, dtype=float)
        n = self._harmonics()
        arg = np.multiply.outer(eta, n)
        out = self.rho_base + np.cos(arg) @ self.cos_coeffs + np.sin(arg) @ self.sin_coeffs
        return out if out.ndim else float(out)

    def rho_prime(self, eta):
        eta = np.asarray(eta, dtype=float)
        n = self._harmonics()
        arg = np.multiply.outer(eta, n)
        out = -np.sin(arg) @ (n * self.cos_coeffs) + np.cos(arg) @ (n * self.sin_coeffs)
        return out if out.ndim else float(out)

    def rho_second(self, eta):
        eta = np.asarray(eta, dtype=float)
        n = self._harmonics()
        arg = np.multiply.outer(eta, n)
        out = -np.cos(arg) @ (n**2 * self.cos_coeffs) - np.sin(arg) @ (n**2 * self.sin_coeffs)
        return out if out.ndim else float(out)

    def edge_holder(self, samples: int = _VALIDATION_SAMPLES) -> float:
        """Estimated Hoel(rho', gamma-1) on the torus (a lower bound)."""
        eta = np.arange(samples) * (2 * np.pi / samples)
        return holder_seminorm(
            self.rho_prime(eta), self.gamma - 1.0, 2 * np.pi / samples, periodic=True
        )

    def validate(self) -> None:
        eta = np.arange(_VALIDATION_SAMPLES) * (2 * np.pi / _VALIDATION_SAMPLES)
        r = self.rho(eta)
        if r.min() <= 0:
            raise ValueError("radius function must stay positive")
        if not r.max() <= self.rho0 < 1.0:
            raise ValueError("radius must stay below rho0 < 1")
        if self.edge_holder() > self.nu:
            raise ValueError("edge smoothness budget exceeded")
        cx, cy = self.center
        rmax = r.max()
        if not (rmax <= cx <= 1 - rmax and rmax <= cy <= 1 - rmax):
            raise ValueError("translated set must fit inside the unit square")

    def to_json_dict(self) -> dict:
        return {
            "center": list(self.center),
            "rho_base": self.rho_base,
            "cos_coeffs": self.cos_coeffs.tolist(),
            "sin_coeffs": self.sin_coeffs.tolist(),
            "gamma": self.gamma,
            "nu": self.nu,
            "rho0": self.rho0,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "StarDomain":
        return cls(
            center=tuple(d["center"]),
            rho_base=d["rho_base"],
            cos_coeffs=np.asarray(d["cos_coeffs"]),
            sin_coeffs=np.asarray(d["sin_coeffs"]),
            gamma=d["gamma"],
            nu=d["nu"],
            rho0=d["rho0"],
        )


@dataclass
class SmoothField:
    """Finite trigonometric sum sum_k amp_k cos(2 pi (m_k x1 + n_k x2) + phase_k)."""

    freqs: np.ndarray  # (K, 2) integer frequency pairs
    amps: np.ndarray
    phases: np.ndarray
    beta: float
    nu: float

    def __post_init__(self):
        self.freqs = np.atleast_2d(np.asarray(self.freqs, dtype=float))
        self.amps = np.atleast_1d(np.asarray(self.amps, dtype=float))
        self.phases = np.atleast_1d(np.asarray(self.phases, dtype=float))

    def value(self, x1, x2):
        x1, x2 = np.asarray(x1, float), np.asarray(x2, float)
        out = np.zeros(np.broadcast_shapes(x1.shape, x2.shape))
        for (m, n), a, ph in zip(self.freqs, self.amps, self.phases):
            out += a * np.cos(2 * np.pi * (m * x1 + n * x2) + ph)
        return out

    def partial(self, i: int, x1, x2):
        x1, x2 = np.asarray(x1, float), np.asarray(x2, float)
        out = np.zeros(np.broadcast_shapes(x1.shape, x2.shape))
        for (m, n), a, ph in zip(self.freqs, self.amps, self.phases):
            out -= a * 2 * np.pi * (m, n)[i] * np.sin(2 * np.pi * (m * x1 + n * x2) + ph)
        return out

    def cbeta_norm_bound(self) -> float:
        """Upper bound on ||f||_inf + sum_i ||d_i f||_inf + max_i Hoel(d_i f, beta-1)."""
        a = np.abs(self.amps)
        m = np.abs(self.freqs)
        sup = float(a.sum())
        grads = [float((2 * np.pi * m[:, i] * a).sum()) for i in (0, 1)]
        hol = 0.0
        for i in (0, 1):
            # |d_i f(x) - d_i f(y)| <= min(2 R1, R2 |x-y|) with R2 = sup |grad d_i f|
            r1 = grads[i]
            r2 = float(((2 * np.pi) ** 2 * m[:, i] * np.hypot(m[:, 0], m[:, 1]) * a).sum())
            if r1 > 0 and r2 > 0:
                hol = max(hol, r2 ** (self.beta - 1.0) * (2 * r1) ** (2.0 - self.beta))
        return sup + sum(grads) + hol

    def validate(self) -> None:
        if self.cbeta_norm_bound() > self.nu:
            raise ValueError("smooth-part C^beta budget exceeded")

    def to_json_dict(self) -> dict:
        return {
            "freqs": self.freqs.tolist(),
            "amps": self.amps.tolist(),
            "phases": self.phases.tolist(),
            "beta": self.beta,
            "nu": self.nu,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SmoothField":
        return cls(
            freqs=np.asarray(d["freqs"]),
            amps=np.asarray(d["amps"]),
            phases=np.asarray(d["phases"]),
            beta=d["beta"],
            nu=d["nu"],
        )


@dataclass
class CartoonSpec:
    """Symbolic cartoon: f = f0 + f1 * indicator(B), or the binary special case."""

    domain: StarDomain
    f0: SmoothField | None = None
    f1: SmoothField | None = None
    binary: bool = False
    seed: int | None = None

    def validate(self) -> None:
        self.domain.validate()
        if not self.binary:
            for f in (self.f0, self.f1):
                if f is not None:
                    f.validate()

    def to_json_dict(self) -> dict:
        return {
            "domain": self.domain.to_json_dict(),
            "f0": self.f0.to_json_dict() if self.f0 else None,
            "f1": self.f1.to_json_dict() if self.f1 else None,
            "binary": self.binary,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CartoonSpec":
        return cls(
            domain=StarDomain.from_json_dict(d["domain"]),
            f0=SmoothField.from_json_dict(d["f0"]) if d.get("f0") else None,
            f1=SmoothField.from_json_dict(d["f1"]) if d.get("f1") else None,
            binary=d["binary"],
            seed=d.get("seed"),
        )


def _rng(seed: int) -> np.random.Generator:
    # Philox: counter-based, so streams are reproducible across platforms
    return np.random.Generator(np.random.Philox(seed))


def random_star_domain(
    gamma: float,
    nu: float,
    seed: int,
    center: tuple[float, float] = (0.5, 0.5),
    n_harmonics: int = 8,
    max_attempts: int = 40,
) -> StarDomain:
    """Seeded random star domain with Hoel(rho', gamma-1) <= nu, with margin.

    Coefficients decay like n^(-gamma-1.5); the whole coefficient vector is
    shrunk until the smoothness target nu/2 and the radius bounds hold.  If
    nu admits no nonconstant boundary the disk is returned.
    """
    if not 1.0 < gamma <= 2.0:
        raise ValueError("gamma must lie in (1, 2]")
    if nu <= 0:
        raise ValueError("nu must be positive")
    rng = _rng(seed)
    rho_base = 0.22 + 0.06 * rng.uniform()
    n = np.arange(1, n_harmonics + 1)
    sigma = n ** (-gamma - 1.5)
    cos_c = rng.normal(size=n_harmonics) * sigma * 0.2
    sin_c = rng.normal(size=n_harmonics) * sigma * 0.2

    eta = np.arange(_VALIDATION_SAMPLES) * (2 * np.pi / _VALIDATION_SAMPLES)
    for _ in range(max_attempts):
        d = StarDomain(
            center=center,
            rho_base=rho_base,
            cos_coeffs=cos_c,
            sin_coeffs=sin_c,
            gamma=gamma,
            nu=nu,
            rho0=min(0.999, rho_base + float(np.abs(cos_c).sum() + np.abs(sin_c).sum()) + 1e-9),
        )
        r = d.rho(eta)
        r1 = float(np.abs(d.rho_prime(eta)).max())
        r2 = float(np.abs(d.rho_second(eta)).max())
        if r2 > 0:
            hol_bound = 1.01 * r2 ** (gamma - 1.0) * max(2 * r1, 1e-300) ** (2.0 - gamma)
        else:
            hol_bound = 0.0
        if hol_bound <= nu / 2 and r.min() > 0.05 and d.rho0 < 0.45:
            d.validate()
            return d
        cos_c = cos_c * 0.7
        sin_c = sin_c * 0.7
    disk = StarDomain(
        center=center,
        rho_base=rho_base,
        cos_coeffs=np.zeros(0),
        sin_coeffs=np.zeros(0),
        gamma=gamma,
        nu=nu,
        rho0=rho_base + 1e-9,
    )
    disk.validate()
    return disk


def random_smooth_field(beta: float, nu: float, rng: np.random.Generator) -> SmoothField:
    freqs = np.array([[m, n] for m in range(0, 3) for n in range(0, 3) if m + n > 0])
    amps = rng.normal(size=len(freqs)) / (1.0 + np.hypot(freqs[:, 0], freqs[:, 1]) ** 2)
    phases = rng.uniform(0, 2 * np.pi, size=len(freqs))
    f = SmoothField(freqs=freqs, amps=amps, phases=phases, beta=beta, nu=nu)
    bound = f.cbeta_norm_bound()
    if bound > 0:
        f.amps = f.amps * (nu / 2 / bound)
    f.validate()
    return f


def binary_disk(radius: float = 0.25, center=(0.5, 0.5), gamma: float = 2.0, nu: float = 1.0) -> CartoonSpec:
    """The canonical binary-disk cartoon (gamma-smooth trivially, Hoelder 0)."""
    dom = StarDomain(
        center=center,
        rho_base=radius,
        cos_coeffs=np.zeros(0),
        sin_coeffs=np.zeros(0),
        gamma=gamma,
        nu=nu,
        rho0=radius + 1e-9,
    )
    return CartoonSpec(domain=dom, binary=True)


def random_cartoon(beta: float, gamma: float, nu: float, seed: int, binary: bool = False) -> CartoonSpec:
    """Seeded random member of the cartoon class (binary or two smooth parts)."""
    dom = random_star_domain(gamma, nu, seed)
    if binary:
        spec = CartoonSpec(domain=dom, binary=True, seed=seed)
    else:
        rng = _rng(seed ^ 0x5EED5EED)
        spec = CartoonSpec(
            domain=dom,
            f0=random_smooth_field(beta, nu, rng),
            f1=random_smooth_field(beta, nu, rng),
            binary=False,
            seed=seed,
        )
    spec.validate()
    return spec


def rasterize(spec: CartoonSpec, M: int, supersample: int = 1) -> np.ndarray:
    """Sample the cartoon on the M x M grid x = i/M.

    Membership in B is decided by |x - center| <= rho(eta(x)).  With
    supersample = s, each pixel averages s*s point samples at offsets
    u/(s*M), matching a rasterization at s*M followed by block averaging.
    """
    if M < 2 or M & (M - 1):
        raise ValueError("M must be a power of two")
    if supersample < 1:
        raise ValueError("supersample must be >= 1")
    s = supersample
    cx, cy = spec.domain.center
    out = np.zeros((M, M))
    base = np.arange(M) / M
    for u in range(s):
        x1 = base + u / (s * M)
        dx = x1 - cx
        for v in range(s):
            x2 = base + v / (s * M)
            dy = x2 - cy
            d2 = dx[:, None] ** 2 + dy[None, :] ** 2
            eta = np.arctan2(dy[None, :], dx[:, None])
            inside = d2 <= spec.domain.rho(eta) ** 2
            if spec.binary:
                out += inside
            else:
                vals = np.zeros((M, M))
                if spec.f0 is not None:
                    vals += spec.f0.value(x1[:, None], x2[None, :])
                if spec.f1 is not None:
                    vals += spec.f1.value(x1[:, None], x2[None, :]) * inside
                out += vals
    return out / (s * s)


def boundary_points(domain: StarDomain, n: int) -> np.ndarray:
    """n samples of the boundary curve, equispaced in the polar angle."""
    if n < 3:
        raise ValueError("need at least 3 boundary points")
    eta = np.arange(n) * (2 * np.pi / n)
    r = domain.rho(eta)
    return np.stack([domain.center[0] + r * np.cos(eta), domain.center[1] + r * np.sin(eta)], axis=1)
