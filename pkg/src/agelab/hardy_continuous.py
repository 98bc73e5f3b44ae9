"""Psi+/Psi- decomposition in the age variable and the convergence sweep.

Two notions of "mass on a half-line" are used:

* sample mass: ``sum |rho_hat(a_k)|^2 da`` over grid points on one side
  (the a = 0 bin counts as Psi-). This is the grid-resolution
  Paley-Wiener test behind :func:`psi_split`, :func:`hardy_residual` and
  :func:`analytic_signal_check`.
* band-limited mass: the exact integral of ``|rho_hat(a)|^2`` over a
  half-period, where ``rho_hat`` is the trigonometric interpolant fixed by
  the nu samples. Computed from the nu samples with a discrete
  Hilbert-type convolution (:func:`bandlimited_half_masses`). It has no
  bin ambiguity and obeys the shift identity for every real ``t``; it is
  what :func:`plus_mass` reports.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.signal import fftconvolve

from .errors import WindowOverflow, ZeroState
from .liouville_packets import (
    DEFAULT_DECAY_THRESHOLD,
    AgeRepresentation,
    DensityKernel,
    NuSigmaGrid,
    _backward,
    _fsum_abs2,
    evolve_nu,
    to_age,
    wrap_fraction,
)

__all__ = [
    "DEFAULT_CERTIFICATION_THRESHOLD",
    "PsiSplit",
    "psi_split",
    "bandlimited_half_masses",
    "plus_mass",
    "minus_mass",
    "tail_mass_quadrature",
    "hardy_residual",
    "analytic_signal_check",
    "time_reverse",
    "time_reverse_kernel",
    "max_in_window_t",
    "SweepRow",
    "SweepResult",
    "theorem_sweep",
]

DEFAULT_CERTIFICATION_THRESHOLD = 1e-8
DEFAULT_WINDOW_TOL = 1e-12


@dataclass(frozen=True)
class PsiSplit:
    plus: AgeRepresentation
    minus: AgeRepresentation

    @property
    def plus_mass(self) -> float:
        return self.plus.mass()

    @property
    def minus_mass(self) -> float:
        return self.minus.mass()

    def reconstruct(self) -> AgeRepresentation:
        return AgeRepresentation(self.plus.grid, self.plus.samples + self.minus.samples, self.plus.hermitian)


def _plus_mask(grid: NuSigmaGrid) -> np.ndarray:
    return np.arange(grid.n_nu) > grid.a_zero_index


def psi_split(rep: AgeRepresentation) -> PsiSplit:
    """Restrict the samples to ``a > 0`` (plus) and ``a <= 0`` (minus)."""
    mask = _plus_mask(rep.grid)
    plus = np.where(mask, rep.samples, 0)
    minus = np.where(mask, 0, rep.samples)
    return PsiSplit(
        AgeRepresentation(rep.grid, plus, rep.hermitian),
        AgeRepresentation(rep.grid, minus, rep.hermitian),
    )


def _odd_reciprocal_kernel(n: int) -> np.ndarray:
    m = np.arange(-(n - 1), n)
    ker = np.zeros(m.size)
    odd = m % 2 != 0
    ker[odd] = 1.0 / m[odd]
    return ker


def bandlimited_half_masses(nu_samples: np.ndarray, grid: NuSigmaGrid) -> tuple[float, float, float]:
    """``(plus, minus, total)`` band-limited masses from nu samples.

    For ``rho_hat(a) = dnu / sqrt(2 pi) * sum_j r_j exp(-i nu_j a)``,
    integrating ``|rho_hat|^2`` over ``[0, pi / dnu)`` gives

        total / 2 + (dnu / pi) * Im sum_j r_j conj(h_j),
        h_j = sum_{l : j - l odd} r_l / (j - l).
    """
    n = grid.n_nu
    r = np.asarray(nu_samples, dtype=complex)
    ker = _odd_reciprocal_kernel(n).reshape((1,) * (r.ndim - 1) + (-1,))
    h = fftconvolve(r, ker, mode="full", axes=-1)[..., n - 1:2 * n - 1]
    cross = np.imag(np.sum(r * np.conj(h), axis=-1))
    w = grid.sigma_weights[None, None, :]
    total = _fsum_abs2(r, grid.mass_weights(grid.dnu))
    plus = 0.5 * total + (grid.dnu / math.pi) * math.fsum(np.ravel(cross * w).tolist())
    plus = min(max(plus, 0.0), total)
    return plus, total - plus, total


def _evolved_nu(rho: DensityKernel, t: float, window_tol: float) -> np.ndarray:
    rep0 = to_age(rho, decay_threshold=None)
    frac = wrap_fraction(rep0, t)
    if frac > window_tol:
        raise WindowOverflow(
            f"t={t:g} pushes a mass fraction {frac:.3g} across the age window", t=t
        )
    return evolve_nu(rho, t).samples


def plus_mass(rho: DensityKernel, t: float = 0.0, window_tol: float = DEFAULT_WINDOW_TOL) -> float:
    """Band-limited mass of the Psi+ component of ``exp(-i L t) rho``."""
    return bandlimited_half_masses(_evolved_nu(rho, t, window_tol), rho.grid)[0]


def minus_mass(rho: DensityKernel, t: float = 0.0, window_tol: float = DEFAULT_WINDOW_TOL) -> float:
    return bandlimited_half_masses(_evolved_nu(rho, t, window_tol), rho.grid)[1]


def _dtft(nu_samples: np.ndarray, grid: NuSigmaGrid, a: np.ndarray) -> np.ndarray:
    # rho_hat at arbitrary points, shape (..., len(a))
    phase = np.exp(-1j * np.outer(grid.nu, a))
    return (grid.dnu / math.sqrt(2 * math.pi)) * (nu_samples @ phase)


def tail_mass_quadrature(
    rep: AgeRepresentation,
    t: float,
    nodes: int = 12,
    floor: float = 1e-24,
) -> float:
    """``integral_t^(pi/dnu) |rho_hat(a)|^2 da`` by Gauss-Legendre quadrature.

    ``rho_hat`` is evaluated by direct summation at each node. Cells of
    width ``da`` whose neighbourhood samples are below ``floor`` times the
    peak are skipped.
    """
    grid = rep.grid
    r = rep.nu_samples()
    da = grid.da
    a = grid.a
    upper = a[0] + grid.n_nu * da
    if t >= upper:
        return 0.0
    dens = np.tensordot(np.abs(rep.samples) ** 2, grid.sigma_weights, axes=([2], [0])).sum(axis=(0, 1))
    peak = dens.max()
    if peak == 0:
        return 0.0
    # neighbourhood envelope over +-8 bins, periodic
    env = np.max([np.roll(dens, s) for s in range(-8, 9)], axis=0)
    k0 = int(math.floor((t - a[0]) / da))
    x, wq = np.polynomial.legendre.leggauss(nodes)
    total = []
    cells = []
    for k in range(max(k0, 0), grid.n_nu):
        lo, hi = max(a[0] + k * da, t), a[0] + (k + 1) * da
        if hi <= lo:
            continue
        if env[k] < floor * peak and env[(k + 1) % grid.n_nu] < floor * peak:
            continue
        cells.append((lo, hi))
    if not cells:
        return 0.0
    lo = np.array([c[0] for c in cells])
    hi = np.array([c[1] for c in cells])
    pts = (0.5 * (hi - lo)[:, None] * x[None, :] + 0.5 * (hi + lo)[:, None]).ravel()
    wts = (0.5 * (hi - lo)[:, None] * wq[None, :]).ravel()
    for start in range(0, pts.size, 2048):
        sl = slice(start, start + 2048)
        vals = np.abs(_dtft(r, grid, pts[sl])) ** 2
        dens_pts = np.tensordot(vals, grid.sigma_weights, axes=([2], [0])).sum(axis=(0, 1))
        total.extend((dens_pts * wts[sl]).tolist())
    return math.fsum(total)


def hardy_residual(
    rho: DensityKernel,
    side: str = "below",
    decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD,
) -> float:
    """Sample mass fraction on the half-line forbidden for ``side``.

    ``below`` forbids ``a > 0`` (Psi-), ``above`` forbids ``a < 0`` (Psi+).
    """
    rep = to_age(rho, decay_threshold)
    total = rep.mass()
    if total == 0:
        raise ZeroState("hardy residual of the zero state")
    k = np.arange(rep.grid.n_nu)
    if side == "below":
        forbidden = k > rep.grid.a_zero_index
    elif side == "above":
        forbidden = k < rep.grid.a_zero_index
    else:
        raise ValueError(f"side must be 'above' or 'below', got {side!r}")
    part = _fsum_abs2(rep.samples[..., forbidden], rep.grid.mass_weights(rep.grid.da))
    return part / total


def analytic_signal_check(
    rho: DensityKernel, decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD
) -> float:
    """``||rho - P_minus rho|| / ||rho||`` with ``P_minus`` rebuilt in nu.

    ``P_minus rho`` is the nu function obtained by inverse-transforming only
    the ``a <= 0`` samples of the age representation.
    """
    total = rho.mass()
    if total == 0:
        raise ZeroState("analytic signal check of the zero state")
    rep = to_age(rho, decay_threshold)
    projected = _backward(psi_split(rep).minus.samples, rho.grid)
    diff = rho.samples - projected
    return math.sqrt(_fsum_abs2(diff, rho.grid.mass_weights(rho.grid.dnu)) / total)


def time_reverse(rep: AgeRepresentation) -> AgeRepresentation:
    """``K rho_hat(a) = conj(rho_hat(-a))`` on the periodic age grid."""
    reflected = np.roll(rep.samples[..., ::-1], 1, axis=-1)
    return AgeRepresentation(rep.grid, np.conj(reflected), rep.hermitian)


def time_reverse_kernel(rho: DensityKernel) -> DensityKernel:
    """The same map seen on the nu side: pointwise complex conjugation."""
    return DensityKernel(rho.grid, np.conj(rho.samples), rho.hermitian)


def max_in_window_t(rep: AgeRepresentation, tol: float = DEFAULT_WINDOW_TOL) -> float:
    """Largest grid-aligned ``t >= 0`` whose left shift wraps at most ``tol`` of the mass.

    Sample ``k`` stands for the cell ``[a_k - da/2, a_k + da/2]``, so a shift
    by ``m`` bins wraps the continuous mass below ``a_m + da/2``. The bin at
    the cut is therefore counted as wrapped.
    """
    total = rep.mass()
    if total == 0:
        return 0.0
    dens = np.tensordot(np.abs(rep.samples) ** 2, rep.grid.sigma_weights, axes=([2], [0])).sum(axis=(0, 1))
    dens = dens * rep.grid.da / total
    ok = np.nonzero(np.cumsum(dens) <= tol)[0]
    if ok.size == 0:
        return 0.0
    return float(ok[-1] * rep.grid.da)


@dataclass(frozen=True)
class SweepRow:
    t: float
    plus_mass: float
    minus_mass: float
    hardy_residual: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    initial_mass: float
    threshold: float

    @property
    def t_star(self) -> float:
        return self.rows[-1].t

    @property
    def monotone(self) -> bool:
        p = [r.plus_mass for r in self.rows]
        return all(b <= a + 1e-12 for a, b in zip(p, p[1:]))

    @property
    def conservation_error(self) -> float:
        return max(abs(r.plus_mass + r.minus_mass - self.initial_mass) for r in self.rows)

    @property
    def certified(self) -> bool:
        last = self.rows[-1]
        return (
            last.hardy_residual < self.threshold
            and last.plus_mass < self.threshold * self.initial_mass
        )

    def write_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "plus_mass", "minus_mass", "hardy_residual"])
            for r in self.rows:
                w.writerow([f"{v:.17g}" for v in (r.t, r.plus_mass, r.minus_mass, r.hardy_residual)])
        return path

    def summary(self, seed: int = 0) -> dict:
        return {
            "certified": bool(self.certified),
            "seed": int(seed),
            "t_star": self.t_star,
            "threshold": self.threshold,
        }

    def write_json(self, path, seed: int = 0) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.summary(seed), sort_keys=True, indent=2) + "\n")
        return path


def theorem_sweep(
    rho: DensityKernel,
    t_schedule: Sequence[float],
    threshold: float = DEFAULT_CERTIFICATION_THRESHOLD,
    window_tol: float = DEFAULT_WINDOW_TOL,
    decay_threshold: float | None = DEFAULT_DECAY_THRESHOLD,
    max_workers: int | None = None,
) -> SweepResult:
    """Evolve ``rho`` along ``t_schedule`` and tabulate the Psi+/Psi- masses."""
    ts = [float(t) for t in t_schedule]
    if not ts:
        raise ValueError("empty t schedule")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t schedule must be strictly increasing")
    rep0 = to_age(rho, decay_threshold)
    for t in ts:
        frac = wrap_fraction(rep0, t)
        if frac > window_tol:
            raise WindowOverflow(
                f"first offending time t={t:g}: mass fraction {frac:.3g} would wrap around the age window",
                t=t,
            )
    initial = bandlimited_half_masses(rho.samples, rho.grid)[2]
    if initial == 0:
        raise ZeroState("theorem sweep of the zero state")

    def one(t: float) -> SweepRow:
        evolved = evolve_nu(rho, t)
        p, m, _ = bandlimited_half_masses(evolved.samples, rho.grid)
        res = hardy_residual(evolved, "below", decay_threshold=None)
        return SweepRow(t, p, m, res)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = tuple(pool.map(one, ts))
    else:
        rows = tuple(one(t) for t in ts)
    return SweepResult(rows, initial, threshold)
