"""Displacement profiles from initial data.

With initial displacement ``u0`` and velocity ``v0`` the solution is

    u(., t) = K(., t) *_x u0 + S(., t) *_x v0,

where ``S`` is the time integral of ``K`` (``S~ = K~ / s``). The time part of
the space-time convolution is exact; only the spatial convolution is
discretised (trapezoid rule on the data grid, kernel evaluated at exact
offsets).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .admissibility import classify
from .errors import DomainError, GridMismatch
from .kernel import (
    DEFAULT_SETTINGS,
    PointStatus,
    _contour_value,
    evaluate_map,
    is_degenerate,
    kernel_point,
)
from .material import slowness

__all__ = [
    "DiracAt",
    "Sampled",
    "Zero",
    "ZERO",
    "InitialData",
    "Profile",
    "s_kernel_point",
    "PeakSummary",
    "kernel_peak",
    "kernel_width",
    "solve_profile",
]


@dataclass(frozen=True)
class DiracAt:
    """Unit point mass at ``x0`` (allowed for the displacement only)."""

    x0: float = 0.0


@dataclass(frozen=True, eq=False)
class Sampled:
    """Samples of an initial field on a sorted grid."""

    x_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise DomainError("sampled data need matching 1-d grid and values of length >= 2")
        if np.any(np.diff(x) <= 0.0):
            raise DomainError("sampled grid must be strictly increasing")
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "values", v)

    @property
    def spacing(self):
        return float(np.max(np.diff(self.x_grid)))


@dataclass(frozen=True)
class Zero:
    """Identically vanishing initial field."""


ZERO = Zero()


@dataclass(frozen=True)
class InitialData:
    u0: object = ZERO
    v0: object = ZERO

    def __post_init__(self):
        if not isinstance(self.u0, (DiracAt, Sampled, Zero)):
            raise DomainError(f"unsupported u0 {self.u0!r}")
        if not isinstance(self.v0, (Sampled, Zero)):
            raise DomainError("v0 must be Sampled or Zero")


_STATUS_RANK = {
    PointStatus.OUTSIDE_CONE: 0,
    PointStatus.INTERIOR: 1,
    PointStatus.FRONT_REGION: 2,
    PointStatus.NOT_CONVERGED: 3,
}


@dataclass(frozen=True, eq=False)
class Profile:
    """``u(x, t)`` on ``x_grid`` with propagated error estimates.

    ``statuses[i]`` is the worst kernel status that contributed to
    ``values[i]``.
    """

    x_grid: np.ndarray
    t: float
    values: np.ndarray
    error_estimates: np.ndarray
    statuses: np.ndarray = field(repr=False)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self):
        return self.values.size

    def rows(self):
        for x, v, s, e in zip(self.x_grid, self.values, self.statuses, self.error_estimates):
            yield float(x), float(self.t), float(v), str(s), float(e)


def s_kernel_point(model, x, t, settings=None, *, backend=None):
    """Time-integrated fundamental solution ``S(x, t)``.

    The contour is a small arc of radius ``min(1, 1/t)`` around the origin
    joined to the same pair of rays used for ``K``; the arc avoids the
    ``1/s`` pole and any singular small-``s`` behaviour of ``W``. Cone and
    status semantics are those of :func:`kernel_point`.
    """
    return _contour_value(model, x, t, settings, "S", backend)


@dataclass(frozen=True)
class PeakSummary:
    """Location, height and full width at half maximum of ``K(., t)`` on ``x >= 0``."""

    x_peak: float
    height: float
    fwhm: float


def _bisect_half(func, lo, hi, half, iters=40):
    # func(lo) >= half > func(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if func(mid) >= half:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kernel_peak(model, t, settings=None, n=97, *, backend=None, threads=None, zoom=2):
    """Peak of the Dirac response ``K(., t)`` and its half-maximum width.

    The peak is bracketed on an ``n``-point grid over the support (or
    ``[0, 4t]`` without a finite speed), refined by ``zoom`` rounds of local
    resampling, and the half-maximum crossings are located by bisection.
    ``K`` is even, so a peak at the origin has its width mirrored.
    """
    settings = DEFAULT_SETTINGS if settings is None else settings
    k = slowness(model)
    reach = (t / k) * (1.0 - 2.0 * settings.cone_margin) if k > 0 else 4.0 * t

    def f(x):
        return kernel_point(model, x, t, settings, backend=backend).value

    def sample(xs):
        return np.array([p.value for p in evaluate_map(
            lambda x: kernel_point(model, x, t, settings, backend=backend), xs, threads)])

    xs = np.linspace(0.0, reach, n)
    vals = sample(xs)
    i = int(np.nanargmax(vals))
    x_peak, height = float(xs[i]), float(vals[i])
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    for _ in range(zoom):
        fine = np.linspace(lo, hi, 33)
        fv = sample(fine)
        j = int(np.nanargmax(fv))
        if fv[j] > height:
            x_peak, height = float(fine[j]), float(fv[j])
        lo, hi = fine[max(j - 1, 0)], fine[min(j + 1, fine.size - 1)]
    half = 0.5 * height

    right_idx = next((j for j in range(i, n) if vals[j] < half), None)
    if right_idx is None:
        x_right = reach
    else:
        x_right = _bisect_half(f, max(x_peak, xs[right_idx - 1]), xs[right_idx], half)
    left_idx = next((j for j in range(i, -1, -1) if vals[j] < half), None)
    if left_idx is None:
        x_left = -x_right
    else:
        x_left = -_bisect_half(lambda x: f(-x), -min(x_peak, xs[left_idx + 1]),
                               -xs[left_idx], half)
    return PeakSummary(x_peak, height, float(x_right - x_left))


def kernel_width(model, t, settings=None, n=97, *, backend=None, threads=None):
    """Full width at half maximum of ``K(., t)``; see :func:`kernel_peak`."""
    return kernel_peak(model, t, settings, n, backend=backend, threads=threads, zoom=0).fwhm


def _lattice_offsets(x_out, y):
    """Offsets ``x_out[i] - y[j]``, built from integers when both grids share a lattice."""
    h = np.diff(y)
    step = float(np.mean(h))
    if np.all(np.abs(h - step) <= 1e-9 * step):
        pos = (x_out - y[0]) / step
        idx = np.rint(pos)
        if np.all(np.abs(pos - idx) <= 1e-9):
            d = idx[:, None] - np.arange(y.size)[None, :]
            return d * step
    return x_out[:, None] - y[None, :]


def _trapezoid_weights(y):
    h = np.diff(y)
    w = np.zeros_like(y)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def _convolve(kernel_func, data, x_out, threads):
    offsets = _lattice_offsets(x_out, data.x_grid)
    # one kernel evaluation per distinct |offset|
    keys = np.unique(np.abs(offsets))
    points = evaluate_map(kernel_func, keys, threads)
    kv = np.array([p.value for p in points])
    ke = np.array([p.error_estimate for p in points])
    kr = np.array([_STATUS_RANK[p.status] for p in points])
    idx = np.searchsorted(keys, np.abs(offsets))
    w = _trapezoid_weights(data.x_grid) * data.values
    values = kv[idx] @ w
    errors = ke[idx] @ np.abs(w)
    active = np.abs(w)[None, :] > 0.0
    rank = np.max(np.where(active, kr[idx], 0), axis=1)
    return values, errors, rank


def solve_profile(model, initial, x_grid, t, settings=None, *, backend=None, threads=None,
                  check_grid=True):
    """Displacement ``u(x, t)`` for the initial data ``initial``.

    Parameters
    ----------
    model : ConstitutiveModel
        Admissible, non-degenerate model.
    initial : InitialData
    x_grid : array_like
        Sorted output positions.
    t : float
        Time, ``t > 0``.
    check_grid : bool
        Raise :class:`GridMismatch` when sampled data are coarser than a
        quarter of the kernel's half-maximum width.

    Returns
    -------
    Profile
    """
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    classify(model)
    if is_degenerate(model):
        raise DomainError("degenerate (elastic) model: the kernel is a pair of Dirac "
                          "measures and cannot be convolved as a function")
    if not isinstance(initial, InitialData):
        raise DomainError("initial must be an InitialData instance")
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size == 0 or np.any(np.diff(x) < 0.0):
        raise DomainError("x_grid must be a sorted nonempty 1-d array")
    settings = DEFAULT_SETTINGS if settings is None else settings

    sampled = [d for d in (initial.u0, initial.v0) if isinstance(d, Sampled)]
    if check_grid and sampled:
        width = kernel_width(model, t, settings, backend=backend, threads=threads)
        for d in sampled:
            if d.spacing > 0.25 * width:
                raise GridMismatch(
                    f"initial-data spacing {d.spacing:.3g} exceeds a quarter of the "
                    f"kernel half-maximum width {width:.3g} at t={t:g}")

    values = np.zeros(x.size)
    errors = np.zeros(x.size)
    rank = np.zeros(x.size, dtype=int)

    def k_at(offset):
        return kernel_point(model, offset, t, settings, backend=backend)

    def s_at(offset):
        return s_kernel_point(model, offset, t, settings, backend=backend)

    u0 = initial.u0
    if isinstance(u0, DiracAt):
        offsets = x - float(u0.x0)
        uniq, inverse = np.unique(np.abs(offsets), return_inverse=True)
        pts = evaluate_map(k_at, uniq, threads)
        values += np.array([p.value for p in pts])[inverse]
        errors += np.array([p.error_estimate for p in pts])[inverse]
        rank = np.maximum(rank, np.array([_STATUS_RANK[p.status] for p in pts])[inverse])
    elif isinstance(u0, Sampled):
        v, e, r = _convolve(k_at, u0, x, threads)
        values += v
        errors += e
        rank = np.maximum(rank, r)
    if isinstance(initial.v0, Sampled):
        v, e, r = _convolve(s_at, initial.v0, x, threads)
        values += v
        errors += e
        rank = np.maximum(rank, r)

    by_rank = {r: s for s, r in _STATUS_RANK.items()}
    statuses = np.array([by_rank[int(r)].value for r in rank], dtype=object)
    return Profile(x, t, values, errors, statuses)
