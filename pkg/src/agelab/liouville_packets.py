"""Energy-space wave packets, Liouvillian kernels and the age representation.

Pure states are sampled profiles ``f(omega)`` on ``[0, omega_max]``. Density
kernels live on Riesz coordinates ``nu = omega - omega'``,
``sigma = (omega + omega') / 2`` restricted to the wedge ``|nu| / 2 <= sigma``;
``sigma`` is only a slice label and every spectral operation acts along
``nu``. The age representation uses the transform

    rho_hat(a) = (2 pi)^(-1/2) * integral rho(nu) exp(-i nu a) d nu,

under which ``exp(-i L t)`` (multiplication by ``exp(-i nu t)``) becomes the
left shift ``rho_hat(a) -> rho_hat(a + t)``. With this sign the age operator
``i d/d nu`` acts as multiplication by ``-a``, so the age of a packet
centred at ``a = -t`` is ``t``.

The ``nu`` grid has ``N`` (a power of two) points ``nu_j = (j - N/2) dnu``
with ``dnu = 2 nu_max / N``; the dual grid is ``a_k = (k - N/2) da`` with
``da = 2 pi / (N dnu)``. Both are symmetric about 0 as periodic grids.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DecayViolation, DomainError, GridMismatch, WindowOverflow, ZeroState

__all__ = [
    "DEFAULT_DECAY_THRESHOLD",
    "CONVENTION_TAG",
    "EnergyGrid",
    "GaussianMonomial",
    "WavePacket",
    "NuSigmaGrid",
    "DensityKernel",
    "AgeRepresentation",
    "simpson_weights",
    "make_packet",
    "hamiltonian_apply",
    "inner_product",
    "riesz_forward",
    "riesz_inverse",
    "bandlimited_interpolate",
    "build_kernel",
    "gaussian_reference_kernel",
    "liouvillian_apply",
    "age_apply_continuous",
    "commutator_residual",
    "to_age",
    "from_age",
    "evolve_nu",
    "evolve_age",
    "wrap_fraction",
    "pointwise_sup_after",
    "write_csv",
    "read_csv",
    "random_gaussian_kernel",
]

DEFAULT_DECAY_THRESHOLD = 1e-10
CONVENTION_TAG = "kernel=e^{-i nu a}"
TAIL_FRACTION = 0.1


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _fsum_abs2(values: np.ndarray, weights: np.ndarray | float = 1.0) -> float:
    # order-independent: math.fsum is correctly rounded
    terms = (np.abs(values) ** 2) * weights
    return math.fsum(np.ravel(terms).tolist())


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights on ``n`` uniform points.

    With an odd number of intervals the last cell falls back to the
    trapezoid rule. One point gets weight ``h``.
    """
    if n < 1:
        raise ValueError("need at least one point")
    w = np.zeros(n)
    if n == 1:
        w[0] = h
        return w
    if n == 2:
        w[:] = h / 2
        return w
    m = n if n % 2 == 1 else n - 1
    w[:m:2] = 2.0
    w[1:m:2] = 4.0
    w[0] = w[m - 1] = 1.0
    w[:m] *= h / 3.0
    if m < n:
        w[n - 2] += h / 2
        w[n - 1] += h / 2
    return w


# --------------------------------------------------------------------------
# pure states


@dataclass(frozen=True)
class EnergyGrid:
    omega_max: float
    n_omega: int
    channel_count: int = 1

    def __post_init__(self):
        if not self.omega_max > 0:
            raise ValueError("omega_max must be positive")
        if not _is_pow2(self.n_omega) or self.n_omega < 16:
            raise ValueError("n_omega must be a power of two >= 16")
        if self.channel_count < 1:
            raise ValueError("channel_count must be positive")

    @property
    def omega(self) -> np.ndarray:
        return np.linspace(0.0, self.omega_max, self.n_omega)

    @property
    def domega(self) -> float:
        return self.omega_max / (self.n_omega - 1)

    @property
    def weights(self) -> np.ndarray:
        return simpson_weights(self.n_omega, self.domega)


@dataclass(frozen=True)
class GaussianMonomial:
    """``amplitude * omega**power * exp(-(omega - omega0)**2 / (2 width**2))``."""

    omega0: float
    width: float
    power: int = 0
    amplitude: complex = 1.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be positive")
        if self.power < 0:
            raise ValueError("power must be nonnegative")

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.amplitude * omega**self.power * np.exp(-((omega - self.omega0) ** 2) / (2 * self.width**2))


@dataclass(frozen=True, eq=False)
class WavePacket:
    grid: EnergyGrid
    channel: int
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n_omega,):
            raise GridMismatch(f"expected {self.grid.n_omega} samples, got {s.shape}")
        if not 0 <= self.channel < self.grid.channel_count:
            raise GridMismatch(f"channel {self.channel} outside 0..{self.grid.channel_count - 1}")
        object.__setattr__(self, "samples", s)

    def tail_ratio(self) -> float:
        peak = np.max(np.abs(self.samples))
        if peak == 0:
            return 0.0
        start = int(math.floor((1 - TAIL_FRACTION) * self.grid.n_omega))
        return float(np.max(np.abs(self.samples[start:])) / peak)

    def check_decay(self, threshold: float = DEFAULT_DECAY_THRESHOLD) -> None:
        """Raise DecayViolation if the last 10% of the grid is not negligible."""
        ratio = self.tail_ratio()
        if ratio > threshold:
            raise DecayViolation(f"packet tail/peak = {ratio:.3g} exceeds {threshold:.3g}")

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)

    def normalized(self) -> WavePacket:
        n = self.norm()
        if n == 0:
            raise ZeroState("cannot normalize the zero packet")
        return WavePacket(self.grid, self.channel, self.samples / n)


def make_packet(
    profile: GaussianMonomial | Sequence[GaussianMonomial],
    grid: EnergyGrid,
    channel: int = 0,
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD,
) -> WavePacket:
    """Sample a profile (or a superposition of profiles) on the energy grid."""
    parts = [profile] if isinstance(profile, GaussianMonomial) else list(profile)
    omega = grid.omega
    samples = np.zeros(grid.n_omega, dtype=complex)
    for p in parts:
        samples += p(omega)
    packet = WavePacket(grid, channel, samples)
    packet.check_decay(decay_threshold)
    return packet


def hamiltonian_apply(psi: WavePacket) -> WavePacket:
    return WavePacket(psi.grid, psi.channel, psi.grid.omega * psi.samples)


def _as_collection(x) -> list[WavePacket]:
    return [x] if isinstance(x, WavePacket) else list(x)


def inner_product(phi, psi) -> complex:
    """Sum over channels of the Simpson integral of ``conj(phi) psi``."""
    left, right = _as_collection(phi), _as_collection(psi)
    if not left or not right:
        return 0j
    grid = left[0].grid
    if any(p.grid != grid for p in left + right):
        raise GridMismatch("packets live on different energy grids")
    w = grid.weights
    re, im = [], []
    for a in left:
        for b in right:
            if a.channel != b.channel:
                continue
            prod = np.conj(a.samples) * b.samples * w
            re.extend(prod.real.tolist())
            im.extend(prod.imag.tolist())
    return complex(math.fsum(re), math.fsum(im))


def riesz_forward(omega: float, omega_p: float) -> tuple[float, float]:
    if omega < 0 or omega_p < 0:
        raise DomainError("energies must be nonnegative")
    return omega - omega_p, 0.5 * (omega + omega_p)


def riesz_inverse(nu: float, sigma: float) -> tuple[float, float]:
    if abs(nu) / 2 > sigma:
        raise DomainError(f"(nu={nu}, sigma={sigma}) lies outside the wedge |nu|/2 <= sigma")
    return sigma + nu / 2, sigma - nu / 2


def bandlimited_interpolate(packet: WavePacket, x) -> np.ndarray:
    """Whittaker-Shannon interpolation of the packet samples at points ``x``.

    The samples are extended by zero outside ``[0, omega_max]``.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel() / packet.grid.domega
    idx = np.arange(packet.grid.n_omega)
    # sinc(u - i) = (-1)^i sin(pi u) / (pi (u - i)); alternate signs folded into the samples
    signed = packet.samples * np.where(idx % 2 == 0, 1.0, -1.0)
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, (1 << 22) // packet.grid.n_omega)
    for lo in range(0, flat.size, chunk):
        u = flat[lo:lo + chunk]
        diff = u[:, None] - idx[None, :]
        nearest = np.rint(u)
        on_node = np.abs(u - nearest) < 1e-12
        safe = np.where(diff == 0, 1.0, diff)
        # sin(pi u) with the argument reduced first; a plain sin(pi u) loses
        # about eps * pi * u absolutely, which dominates near the nodes
        parity = np.where(np.mod(nearest, 2) == 0, 1.0, -1.0)
        sin_pu = parity * np.sin(np.pi * (u - nearest))
        vals = (sin_pu / np.pi) * ((signed[None, :] / safe).sum(axis=1))
        node_idx = nearest.astype(int)
        inside = on_node & (node_idx >= 0) & (node_idx < packet.grid.n_omega)
        vals[on_node] = 0.0
        vals[inside] = packet.samples[node_idx[inside]]
        out[lo:lo + chunk] = vals
    return out.reshape(x.shape)


# --------------------------------------------------------------------------
# density kernels


@dataclass(frozen=True)
class NuSigmaGrid:
    nu_max: float
    n_nu: int
    sigma_min: float
    sigma_max: float
    n_sigma: int = 1
    channel_count: int = 1

    def __post_init__(self):
        if not self.nu_max > 0:
            raise ValueError("nu_max must be positive")
        if not _is_pow2(self.n_nu) or self.n_nu < 16:
            raise ValueError("n_nu must be a power of two >= 16")
        if self.sigma_min < 0 or self.sigma_max < self.sigma_min:
            raise ValueError("need 0 <= sigma_min <= sigma_max")
        if self.n_sigma < 1:
            raise ValueError("n_sigma must be positive")
        if self.n_sigma == 1 and self.sigma_min != self.sigma_max:
            raise ValueError("a single sigma slice needs sigma_min == sigma_max")
        if self.channel_count < 1:
            raise ValueError("channel_count must be positive")

    @classmethod
    def single_slice(cls, nu_max: float, n_nu: int, sigma: float | None = None) -> NuSigmaGrid:
        """One sigma slice placed so the wedge keeps the whole nu line."""
        s = nu_max / 2 if sigma is None else sigma
        return cls(nu_max, n_nu, s, s, 1)

    @property
    def dnu(self) -> float:
        return 2.0 * self.nu_max / self.n_nu

    @property
    def nu(self) -> np.ndarray:
        return (np.arange(self.n_nu) - self.n_nu // 2) * self.dnu

    @property
    def da(self) -> float:
        return 2.0 * math.pi / (self.n_nu * self.dnu)

    @property
    def a(self) -> np.ndarray:
        return (np.arange(self.n_nu) - self.n_nu // 2) * self.da

    @property
    def a_zero_index(self) -> int:
        return self.n_nu // 2

    @property
    def sigma(self) -> np.ndarray:
        return np.linspace(self.sigma_min, self.sigma_max, self.n_sigma)

    @property
    def dsigma(self) -> float:
        if self.n_sigma == 1:
            return 1.0
        return (self.sigma_max - self.sigma_min) / (self.n_sigma - 1)

    @property
    def sigma_weights(self) -> np.ndarray:
        """Quadrature weights over sigma; a single slice has weight 1."""
        if self.n_sigma == 1:
            return np.ones(1)
        return simpson_weights(self.n_sigma, self.dsigma)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        c = self.channel_count
        return (c, c, self.n_sigma, self.n_nu)

    @property
    def wedge(self) -> np.ndarray:
        """Boolean (n_sigma, n_nu) mask of ``|nu| / 2 <= sigma``."""
        return np.abs(self.nu)[None, :] / 2 <= self.sigma[:, None]

    def mass_weights(self, step: float) -> np.ndarray:
        """Weights broadcastable to ``shape`` for ``sum |x|^2 dsigma dstep``."""
        return (self.sigma_weights * step)[None, None, :, None]


def _reflect(samples: np.ndarray) -> np.ndarray:
    # index j -> (N - j) mod N on the last axis
    return np.roll(samples[..., ::-1], 1, axis=-1)


@dataclass(frozen=True, eq=False)
class DensityKernel:
    """Samples ``rho(nu, sigma, n, n')`` with shape ``(c, c, n_sigma, n_nu)``.

    Samples outside the wedge are set to zero on construction.
    """

    grid: NuSigmaGrid
    samples: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.ndim == 1 and self.grid.shape[:3] == (1, 1, 1):
            s = s.reshape(self.grid.shape)
        if s.shape != self.grid.shape:
            raise GridMismatch(f"samples shape {s.shape} does not match grid {self.grid.shape}")
        s[..., ~self.grid.wedge] = 0.0
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def mass(self) -> float:
        """``sum |rho|^2`` with Simpson over sigma and ``dnu`` over nu."""
        return _fsum_abs2(self.samples, self.grid.mass_weights(self.grid.dnu))

    def norm(self) -> float:
        return math.sqrt(self.mass())

    def normalized(self) -> DensityKernel:
        m = self.norm()
        if m == 0:
            raise ZeroState("cannot normalize the zero kernel")
        return DensityKernel(self.grid, self.samples / m, self.hermitian)

    def tail_ratio(self) -> float:
        peak = np.max(np.abs(self.samples))
        if peak == 0:
            return 0.0
        tail = np.abs(self.grid.nu) >= (1 - TAIL_FRACTION) * self.grid.nu_max
        return float(np.max(np.abs(self.samples[..., tail])) / peak)

    def check_decay(self, threshold: float | None = DEFAULT_DECAY_THRESHOLD) -> None:
        if threshold is None:
            return
        ratio = self.tail_ratio()
        if ratio > threshold:
            raise DecayViolation(f"nu-tail/peak = {ratio:.3g} exceeds {threshold:.3g}")

    def adjoint_samples(self) -> np.ndarray:
        """``conj(rho(-nu, sigma, n', n))`` laid out like ``samples``."""
        return np.conj(_reflect(np.swapaxes(self.samples, 0, 1)))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.samples - self.adjoint_samples()), initial=0.0))

    def diagonal(self) -> np.ndarray:
        """``rho(0, sigma, n, n')`` with shape ``(c, c, n_sigma)``."""
        return self.samples[..., self.grid.a_zero_index]

    def trace(self) -> complex:
        """``sum_n integral rho(0, sigma, n, n) d sigma`` (Simpson)."""
        d = np.einsum("nns->s", self.diagonal())
        w = self.grid.sigma_weights
        return complex(math.fsum((d.real * w).tolist()), math.fsum((d.imag * w).tolist()))


def build_kernel(
    components: Iterable[tuple[float, WavePacket, WavePacket]],
    grid: NuSigmaGrid,
) -> DensityKernel:
    """``rho = sum_k w_k f_k(sigma + nu/2) conj(g_k(sigma - nu/2))``."""
    components = list(components)
    samples = np.zeros(grid.shape, dtype=complex)
    if not components:
        return DensityKernel(grid, samples, hermitian=True)
    energy = components[0][1].grid
    nu, sigma = grid.nu, grid.sigma
    upper = sigma[:, None] + nu[None, :] / 2
    lower = sigma[:, None] - nu[None, :] / 2
    hermitian = True
    cache: dict[tuple[int, float], np.ndarray] = {}

    def interp(packet: WavePacket, pts: np.ndarray, key: float) -> np.ndarray:
        k = (id(packet), key)
        if k not in cache:
            cache[k] = bandlimited_interpolate(packet, pts)
        return cache[k]

    for weight, f, g in components:
        if weight < 0:
            raise DomainError("component weights must be nonnegative")
        if f.grid != energy or g.grid != energy:
            raise GridMismatch("all packets must share one energy grid")
        if max(f.channel, g.channel) >= grid.channel_count:
            raise GridMismatch("packet channel outside the kernel grid")
        F = interp(f, upper, +1.0)
        G = interp(g, lower, -1.0)
        samples[f.channel, g.channel] += weight * F * np.conj(G)
        if g is not f and not (g.channel == f.channel and np.array_equal(g.samples, f.samples)):
            hermitian = False
    return DensityKernel(grid, samples, hermitian=hermitian)


def gaussian_reference_kernel(
    grid: NuSigmaGrid,
    energy: EnergyGrid,
    omega0: float,
    width: float = 1 / math.sqrt(2),
) -> DensityKernel:
    """Pure state ``|f><f|`` of a gaussian packet, normalized to unit mass.

    With the default width every sigma slice is proportional to
    ``exp(-nu^2 / 2)``, whose age representation is ``exp(-a^2 / 2)``.
    """
    f = make_packet(GaussianMonomial(omega0, width), energy).normalized()
    return build_kernel([(1.0, f, f)], grid).normalized()


def liouvillian_apply(rho: DensityKernel) -> DensityKernel:
    """Multiplication by ``nu``; the result is anti-hermitian."""
    return DensityKernel(rho.grid, rho.samples * rho.grid.nu, hermitian=False)


# --------------------------------------------------------------------------
# transforms between nu and age


def _forward(samples: np.ndarray, grid: NuSigmaGrid) -> np.ndarray:
    scale = math.sqrt(grid.dnu / grid.da)
    spec = np.fft.fft(np.fft.ifftshift(samples, axes=-1), axis=-1, norm="ortho")
    return scale * np.fft.fftshift(spec, axes=-1)


def _backward(samples: np.ndarray, grid: NuSigmaGrid) -> np.ndarray:
    scale = math.sqrt(grid.da / grid.dnu)
    vals = np.fft.ifft(np.fft.ifftshift(samples, axes=-1), axis=-1, norm="ortho")
    return scale * np.fft.fftshift(vals, axes=-1)


@dataclass(frozen=True, eq=False)
class AgeRepresentation:
    """``rho_hat(a, sigma, n, n')`` on the dual grid, same layout as the kernel."""

    grid: NuSigmaGrid
    samples: np.ndarray
    hermitian: bool = False
    convention: str = field(default=CONVENTION_TAG)

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.ndim == 1 and self.grid.shape[:3] == (1, 1, 1):
            s = s.reshape(self.grid.shape)
        if s.shape != self.grid.shape:
            raise GridMismatch(f"samples shape {s.shape} does not match grid {self.grid.shape}")
        if self.convention != CONVENTION_TAG:
            raise ValueError(f"unsupported transform convention {self.convention!r}")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def a(self) -> np.ndarray:
        return self.grid.a

    def mass(self) -> float:
        return _fsum_abs2(self.samples, self.grid.mass_weights(self.grid.da))

    def norm(self) -> float:
        return math.sqrt(self.mass())

    def nu_samples(self) -> np.ndarray:
        """Inverse transform without the wedge mask."""
        return _backward(self.samples, self.grid)


def to_age(rho: DensityKernel, decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD) -> AgeRepresentation:
    rho.check_decay(decay_threshold)
    return AgeRepresentation(rho.grid, _forward(rho.samples, rho.grid), rho.hermitian)


def from_age(rep: AgeRepresentation) -> DensityKernel:
    return DensityKernel(rep.grid, _backward(rep.samples, rep.grid), rep.hermitian)


def _nu_derivative(samples: np.ndarray, grid: NuSigmaGrid) -> np.ndarray:
    spec = _forward(samples, grid)
    mult = 1j * grid.a
    mult[0] = 0.0  # Nyquist bin carries no odd derivative
    return _backward(spec * mult, grid)


def age_apply_continuous(
    rho: DensityKernel, decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD
) -> DensityKernel:
    """``i d rho / d nu`` at fixed sigma and channels, by spectral differentiation."""
    rho.check_decay(decay_threshold)
    return DensityKernel(rho.grid, 1j * _nu_derivative(rho.samples, rho.grid), rho.hermitian)


def commutator_residual(
    rho: DensityKernel, decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD
) -> float:
    """Relative norm of ``(A L - L A) rho - i rho``."""
    norm = rho.norm()
    if norm == 0:
        raise ZeroState("commutator residual is relative to ||rho||, which is zero")
    rho.check_decay(decay_threshold)
    al = age_apply_continuous(liouvillian_apply(rho), decay_threshold=None)
    la = liouvillian_apply(age_apply_continuous(rho, decay_threshold=None))
    diff = DensityKernel(rho.grid, al.samples - la.samples - 1j * rho.samples)
    return diff.norm() / norm


def evolve_nu(rho: DensityKernel, t: float) -> DensityKernel:
    """``exp(-i L t) rho``: multiplication by ``exp(-i nu t)``."""
    phase = np.exp(-1j * rho.grid.nu * t)
    return DensityKernel(rho.grid, rho.samples * phase, rho.hermitian)


def wrap_fraction(rep: AgeRepresentation, t: float) -> float:
    """Fraction of the mass that a shift by ``t`` pushes across the window edge."""
    total = rep.mass()
    if total == 0 or t == 0:
        return 0.0
    a = rep.grid.a
    lo = a[0]
    hi = lo + rep.grid.n_nu * rep.grid.da
    eps = 1e-9 * rep.grid.da  # keeps grid-aligned shifts from counting the boundary bin
    region = a < lo + t - eps if t > 0 else a >= hi + t + eps
    part = _fsum_abs2(rep.samples[..., region], rep.grid.mass_weights(rep.grid.da))
    return part / total


def _check_window(rep: AgeRepresentation, t: float, tol: float) -> None:
    frac = wrap_fraction(rep, t)
    if frac > tol:
        raise WindowOverflow(
            f"shift t={t:g} wraps a mass fraction {frac:.3g} around the age window (tolerance {tol:g})",
            t=t,
        )


def evolve_age(rep: AgeRepresentation, t: float, window_tol: float = 1e-12) -> AgeRepresentation:
    """``rho_hat(a) -> rho_hat(a + t)``.

    Integer multiples of ``da`` are exact index shifts; other times go
    through the phase multiplier on the nu side.
    """
    _check_window(rep, t, window_tol)
    steps = t / rep.grid.da
    m = round(steps)
    if abs(steps - m) <= 1e-12 * max(1.0, abs(steps)):
        shifted = np.roll(rep.samples, -m, axis=-1)
    else:
        phase = np.exp(-1j * rep.grid.nu * t)
        shifted = _forward(_backward(rep.samples, rep.grid) * phase, rep.grid)
    return AgeRepresentation(rep.grid, shifted, rep.hermitian)


def pointwise_sup_after(
    rep: AgeRepresentation,
    t: float,
    window: tuple[float, float] = (-1.0, 1.0),
    window_tol: float = 1e-12,
) -> float:
    """``max |rho_hat(a + t)|`` over grid points ``a`` in ``window``."""
    a = rep.grid.a
    lo, hi = window
    if lo > hi or lo < a[0] or hi > a[-1]:
        raise ValueError(f"window {window} is not inside the age grid [{a[0]:g}, {a[-1]:g}]")
    evolved = evolve_age(rep, t, window_tol)
    sel = (a >= lo) & (a <= hi)
    return float(np.max(np.abs(evolved.samples[..., sel]), initial=0.0))


# --------------------------------------------------------------------------
# serialization


def write_csv(path, obj: DensityKernel | AgeRepresentation) -> Path:
    """Self-describing CSV: ``#`` header lines, then row-major ``re,im`` rows."""
    path = Path(path)
    g = obj.grid
    kind = "nu" if isinstance(obj, DensityKernel) else "age"
    header = {
        "format": "agelab-samples-v1",
        "convention": CONVENTION_TAG,
        "representation": kind,
        "nu_max": repr(g.nu_max),
        "n_nu": g.n_nu,
        "sigma_min": repr(g.sigma_min),
        "sigma_max": repr(g.sigma_max),
        "n_sigma": g.n_sigma,
        "channels": g.channel_count,
        "hermitian": int(obj.hermitian),
        "shape": "x".join(map(str, g.shape)),
    }
    with path.open("w", newline="") as fh:
        for k, v in header.items():
            fh.write(f"# {k}={v}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im"])
        for z in obj.samples.ravel():
            w.writerow([f"{z.real:.17g}", f"{z.imag:.17g}"])
    return path


def read_csv(path) -> DensityKernel | AgeRepresentation:
    header: dict[str, str] = {}
    rows: list[complex] = []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                header[k] = v
                continue
            if line.strip() == "re,im" or not line.strip():
                continue
            re_, im_ = line.split(",")
            rows.append(complex(float(re_), float(im_)))
    if header.get("convention") != CONVENTION_TAG:
        raise ValueError(f"missing or unknown convention tag: {header.get('convention')!r}")
    grid = NuSigmaGrid(
        float(header["nu_max"]),
        int(header["n_nu"]),
        float(header["sigma_min"]),
        float(header["sigma_max"]),
        int(header["n_sigma"]),
        int(header["channels"]),
    )
    samples = np.array(rows, dtype=complex)
    if samples.size != int(np.prod(grid.shape)):
        raise GridMismatch(f"expected {int(np.prod(grid.shape))} samples, found {samples.size}")
    samples = samples.reshape(grid.shape)
    herm = header.get("hermitian") == "1"
    if header.get("representation") == "age":
        return AgeRepresentation(grid, samples, herm)
    return DensityKernel(grid, samples, herm)


def random_gaussian_kernel(
    rng: np.random.Generator,
    grid: NuSigmaGrid,
    components: int = 3,
) -> DensityKernel:
    """Sum of modulated gaussians in nu with random centres, widths and phases.

    Centres stay within ``nu_max / 5`` of 0 and widths below ``nu_max / 12``
    so every slice decays well inside the grid.
    """
    nu = grid.nu
    samples = np.zeros(grid.shape, dtype=complex)
    c_lim, w_hi = grid.nu_max / 5, grid.nu_max / 12
    for _ in range(components):
        c = rng.uniform(-c_lim, c_lim)
        w = rng.uniform(0.4 * w_hi, w_hi)
        a0 = rng.uniform(-5.0, 5.0)
        amp = rng.normal(size=grid.shape[:3]) + 1j * rng.normal(size=grid.shape[:3])
        profile = np.exp(-((nu - c) ** 2) / (2 * w * w) - 1j * nu * a0)
        samples += amp[..., None] * profile
    return DensityKernel(grid, samples)
