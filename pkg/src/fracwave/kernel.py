"""Fundamental solution ``K(x, t)`` by contour quadrature.

The Laplace image ``K~(x, s) = W e^{-|x| s W} / 2`` with
``W = sqrt(Phi_sigma / Phi_eps)`` is multiform with its only cut on the
negative real axis. Closing the Bromwich line onto a pair of conjugate rays
``s = q e^{+-i theta}`` gives the real form

    K(x, t) = 1/(2 pi) Int_0^inf Im[ W e^{s (t - |x| W)} e^{i theta} ] dq,
              s = q e^{i theta}.

``theta = pi`` is the classical branch-cut integral. For models without a
finite wave speed, and far from the origin, the integrand on the cut grows
like ``e^{q |x| Re W}`` before it decays, which overflows or cancels
catastrophically. The ray is then rotated into the left half-plane to the
angle that minimises the peak growth exponent; Cauchy's theorem makes the
value independent of the angle. The substitution ``q = u**2`` removes the
``q**(-1/2)``-type endpoint behaviour at the origin.

Outside the cone of a finite-speed model the same representation holds for
rays in the right half-plane only. Those are used when the exact-zero
shortcut is disabled, to demonstrate the support property numerically.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import mpmath as mp
import numpy as np

from . import _backend
from .admissibility import classify
from .constitutive import DiscreteModel, PowerTypeModel, model_params, ratio_polar
from .errors import DomainError
from .inversion import stehfest_mp, talbot_mp
from .material import slowness

__all__ = [
    "PointStatus",
    "QuadratureSettings",
    "KernelPoint",
    "KernelGrid",
    "MassReport",
    "A5A6Report",
    "kernel_point",
    "kernel_grid",
    "kernel_mass",
    "oracle_invert",
    "check_a5_a6",
    "is_degenerate",
]


class PointStatus(str, enum.Enum):
    INTERIOR = "interior"
    OUTSIDE_CONE = "outside_cone"
    FRONT_REGION = "front_region"
    NOT_CONVERGED = "not_converged"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and limits for the contour quadrature.

    ``cone_margin`` is measured in units of ``t``: points with
    ``t - k|x| < cone_margin * t`` are reported as ``front_region``.
    ``cone_shortcut=False`` disables the exact zero outside the cone; it
    exists for diagnostics only.
    """

    rel_tolerance: float = 1e-8
    abs_tolerance: float = 1e-12
    q_max_cap: float = 1e6
    max_subdivisions: int = 2000
    cone_margin: float = 1e-3
    cone_shortcut: bool = True

    def __post_init__(self):
        for name in ("rel_tolerance", "abs_tolerance", "q_max_cap", "cone_margin"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if not self.rel_tolerance < 1.0:
            raise DomainError("rel_tolerance must be < 1")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be a positive integer")

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class KernelPoint:
    """One evaluated kernel value.

    ``contour_angle`` is the ray angle used (``pi`` for the branch cut) and
    ``q_max`` the truncation point; both are ``nan`` when no quadrature ran.
    """

    value: float
    error_estimate: float
    status: PointStatus
    contour_angle: float = math.nan
    q_max: float = math.nan
    neval: int = 0


# ---------------------------------------------------------------------------
# contour machinery shared with the S kernel

# peak growth exponent tolerated on the branch cut before rotating the ray
GROWTH_LIMIT = 1.0
INSIDE_ANGLES = math.pi * np.linspace(1.0, 0.52, 25)
OUTSIDE_ANGLES = math.pi * np.linspace(0.48, 0.04, 23)
PROBE_POINTS = 481
PROBE_QMIN = 1e-8
INITIAL_PANELS = 8


def is_degenerate(model):
    """True when ``Phi_sigma / Phi_eps`` is constant (elastic-like models).

    Their fundamental solution is a pair of Dirac measures on the cone
    boundary and vanishes as a function everywhere else.
    """
    if not isinstance(model, DiscreteModel):
        return False
    return (len(model.stress) == 1 and len(model.strain) == 1
            and model.stress[0].order == model.strain[0].order)


def _probe_grid(cap):
    return np.logspace(math.log10(PROBE_QMIN), math.log10(cap), PROBE_POINTS)


def _choose_angle(be, params, absx, t, inside, qgrid):
    def peak(theta):
        with np.errstate(all="ignore"):
            g, _ = be.ray_envelope(params, absx, t, float(theta), qgrid)
        g = np.where(np.isfinite(g), g, np.inf)
        return float(np.max(g))

    if inside:
        if peak(math.pi) <= GROWTH_LIMIT:
            return math.pi
        candidates = INSIDE_ANGLES
    else:
        candidates = OUTSIDE_ANGLES
    peaks = [peak(th) for th in candidates]
    return float(candidates[int(np.argmin(peaks))])


def _truncation(be, params, absx, t, theta, qgrid, abs_tol, extra_log):
    """Truncation point ``Q`` and an estimate of the neglected tail.

    ``extra_log(q)`` adds the log of any power-of-``q`` factor of the
    integrand beyond ``W e^{...}``.
    """
    with np.errstate(all="ignore"):
        g, lw = be.ray_envelope(params, absx, t, theta, qgrid)
    env = g + lw + extra_log(qgrid)
    # an integrand decade around q contributes about q * |f(q)|
    weight = env + np.log(qgrid)
    above = np.nonzero(~(weight <= math.log(abs_tol)))[0]
    cap = qgrid[-1]
    if above.size == 0:
        q_hi = 2.0 * qgrid[int(np.nanargmax(env))]
        return min(q_hi, cap), 0.0
    last = int(above[-1])
    if last < qgrid.size - 1:
        return min(2.0 * qgrid[last], cap), 0.0
    # still above tolerance at the cap: exponential tail estimate
    rate = -(g[-1] - g[-2]) / (qgrid[-1] - qgrid[-2])
    if not (rate > 0.0 and math.isfinite(env[-1])):
        return cap, math.inf
    return cap, math.exp(env[-1]) / rate


def _contour_value(model, x, t, settings, kind, be):
    """Shared driver for the K (``kind="K"``) and S (``kind="S"``) kernels."""
    x, t = float(x), float(t)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be positive, got {t!r}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    settings = DEFAULT_SETTINGS if settings is None else settings
    be = _backend.backend if be is None else be
    classify(model)
    k = slowness(model)
    absx = abs(x)
    outside = k > 0.0 and k * absx >= t
    if outside and settings.cone_shortcut:
        return KernelPoint(0.0, 0.0, PointStatus.OUTSIDE_CONE)
    front = k > 0.0 and (t - k * absx) < settings.cone_margin * t
    if is_degenerate(model) and not front:
        # only the (Dirac) front carries mass; the function part vanishes,
        # except for S where the front has already passed
        value = 0.0
        if kind == "S" and not outside:
            value = 0.5 * math.sqrt(ratio_polar(model, 1.0, 0.0).real)
        status = PointStatus.OUTSIDE_CONE if outside else PointStatus.INTERIOR
        return KernelPoint(value, 0.0, status)

    params = model_params(model)
    qgrid = _probe_grid(settings.q_max_cap)
    theta = _choose_angle(be, params, absx, t, not outside, qgrid)
    abs_tol, rel_tol = settings.abs_tolerance, settings.rel_tolerance
    limit = int(settings.max_subdivisions)

    if kind == "K":
        q_max, tail = _truncation(be, params, absx, t, theta, qgrid, abs_tol,
                                  lambda q: 0.0)
        res, err, neval, ier = be.integrate(
            params, be.MODE_K_RAY, absx, t, theta, 0.0, 0.0, math.sqrt(q_max),
            abs_tol * 2.0 * math.pi, rel_tol, limit, INITIAL_PANELS)
        value = float(res) / (2.0 * math.pi)
        err = float(err) / (2.0 * math.pi)
    else:
        eta = min(1.0, 1.0 / t)
        q_max, tail = _truncation(be, params, absx, t, theta, qgrid, abs_tol,
                                  lambda q: -np.log(q))
        arc, arc_err, n_arc, ier_arc = be.integrate(
            params, be.MODE_S_ARC, absx, t, theta, eta, 0.0, theta,
            abs_tol * math.pi, rel_tol, limit, INITIAL_PANELS)
        if q_max > eta:
            ray, ray_err, n_ray, ier_ray = be.integrate(
                params, be.MODE_S_RAY, absx, t, theta, eta, math.sqrt(eta),
                math.sqrt(q_max), abs_tol * math.pi, rel_tol, limit, INITIAL_PANELS)
        else:
            ray, ray_err, n_ray, ier_ray = 0.0, 0.0, 0, 0
        value = (float(arc) + float(ray)) / (2.0 * math.pi)
        err = (float(arc_err) + float(ray_err)) / (2.0 * math.pi)
        neval = n_arc + n_ray
        ier = max(ier_arc, ier_ray)

    err += tail / (2.0 * math.pi)
    if ier == 2 or not math.isfinite(value):
        return KernelPoint(math.nan, math.inf, PointStatus.NOT_CONVERGED, theta, float(q_max),
                           int(neval))
    tail_big = tail / (2.0 * math.pi) > max(abs_tol, rel_tol * abs(value))
    if ier != 0:
        status = PointStatus.NOT_CONVERGED
    elif front or tail_big:
        # front includes points beyond the cone evaluated with the shortcut off
        status = PointStatus.FRONT_REGION
    else:
        status = PointStatus.INTERIOR
    return KernelPoint(value, err, status, theta, float(q_max), int(neval))


def kernel_point(model, x, t, settings=None, *, backend=None):
    """Fundamental solution ``K(x, t)`` with an error estimate and status.

    Parameters
    ----------
    model : ConstitutiveModel
        Admissible model; classification errors propagate as ``NotAdmissible``.
    x, t : float
        Position and time, ``t > 0``.
    settings : QuadratureSettings, optional
    backend : module, optional
        Quadrature core; defaults to the one selected at import.

    Returns
    -------
    KernelPoint
        ``status`` is ``outside_cone`` (value exactly 0) when ``k|x| >= t``
        for a finite-speed model, ``front_region`` within ``cone_margin`` of
        the wavefront or when the truncation tail is not negligible,
        ``not_converged`` when the subdivision budget ran out.
    """
    return _contour_value(model, x, t, settings, "K", backend)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class KernelGrid:
    """Kernel values on ``t_list x x_grid``; arrays are indexed ``[i_t, i_x]``."""

    x_grid: np.ndarray
    t_list: np.ndarray
    values: np.ndarray
    error_estimates: np.ndarray
    statuses: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def point(self, i_t, i_x):
        return KernelPoint(float(self.values[i_t, i_x]),
                           float(self.error_estimates[i_t, i_x]),
                           PointStatus(self.statuses[i_t, i_x]))

    def rows(self):
        """Yield ``(x, t, value, status, error_estimate)`` in t-major order."""
        for i, t in enumerate(self.t_list):
            for j, x in enumerate(self.x_grid):
                yield (float(x), float(t), float(self.values[i, j]),
                       str(self.statuses[i, j]), float(self.error_estimates[i, j]))


def thread_count(threads=None):
    """Worker count from ``threads`` or ``FRACWAVE_THREADS`` (default: CPU count)."""
    if threads is None:
        env = os.environ.get("FRACWAVE_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _check_sorted(name, values, positive=False):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a nonempty 1-d sequence")
    if np.any(np.diff(arr) < 0.0):
        raise DomainError(f"{name} must be sorted")
    if positive and np.any(~(arr > 0.0)):
        raise DomainError(f"{name} must be positive")
    return arr


def evaluate_map(func, items, threads=None):
    """Ordered parallel map over ``items``; results do not depend on scheduling."""
    items = list(items)
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(func, items))


def kernel_grid(model, x_grid, t_list, settings=None, *, threads=None, backend=None):
    """:func:`kernel_point` over the product of ``t_list`` and ``x_grid``.

    Points are evaluated on a thread pool of ``FRACWAVE_THREADS`` workers;
    each point is independent, so the result is the same for any worker
    count.
    """
    xs = _check_sorted("x_grid", x_grid)
    ts = _check_sorted("t_list", t_list, positive=True)
    classify(model)
    pairs = [(t, x) for t in ts for x in xs]
    points = evaluate_map(lambda p: kernel_point(model, p[1], p[0], settings,
                                                 backend=backend), pairs, threads)
    shape = (ts.size, xs.size)
    values = np.array([p.value for p in points]).reshape(shape)
    errors = np.array([p.error_estimate for p in points]).reshape(shape)
    statuses = np.array([p.status.value for p in points], dtype=object).reshape(shape)
    return KernelGrid(xs, ts, values, errors, statuses)


# ---------------------------------------------------------------------------
# mass


@dataclass(frozen=True)
class MassReport:
    """Spatial integral of ``K(., t)``.

    ``error_estimate`` combines the rule-comparison error and the pointwise
    quadrature errors; ``front_contribution`` is the part of the mass that
    came from ``front_region`` points.
    """

    mass: float
    error_estimate: float
    front_contribution: float
    window: float
    skipped: bool = False
    reason: str = ""
    n_points: int = 0

    def __float__(self):
        return float(self.mass)


GL_NODES = 12
GL_CHECK_NODES = 8
FRONT_LEVELS = 16
# infinite-speed window: panels [0, h], [h, 2h], [2h, 4h], ... with h = t / 2
WINDOW_SUBPANELS = 4
WINDOW_MAX_DOUBLINGS = 12
WINDOW_TAIL_TOL = 1e-7


def _gl_panel(func, a, b, n):
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    return nodes, 0.5 * (b - a) * w


def _panel_mass(model, t, settings, a, b, backend, threads):
    nodes, weights = _gl_panel(None, a, b, GL_NODES)
    cnodes, cweights = _gl_panel(None, a, b, GL_CHECK_NODES)
    allx = np.concatenate([nodes, cnodes])
    pts = evaluate_map(lambda x: kernel_point(model, x, t, settings, backend=backend),
                       allx, threads)
    vals = np.array([p.value for p in pts])
    errs = np.array([p.error_estimate for p in pts])
    front = np.array([p.status is PointStatus.FRONT_REGION for p in pts])
    n = nodes.size
    fine = float(weights @ vals[:n])
    coarse = float(cweights @ vals[n:])
    err = abs(fine - coarse) + float(weights @ errs[:n])
    front_part = float(weights @ np.where(front[:n], vals[:n], 0.0))
    return fine, err, front_part, float(np.max(np.abs(vals[:n]))), allx.size


def kernel_mass(model, t, settings=None, *, backend=None, threads=None):
    """``Int K(x, t) dx`` over the real line; the exact value is 1.

    Finite-speed models are integrated over the cone with panels halving
    toward the wavefront. Models without a finite speed are integrated over
    a doubling window until a panel contributes less than ``1e-7``.
    Degenerate models (constant symbol ratio) are skipped because their
    kernel is not a function.
    """
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    classify(model)
    if is_degenerate(model):
        return MassReport(math.nan, math.nan, 0.0, math.nan, True,
                          "kernel is a pair of Dirac measures; mass test inapplicable")
    settings = DEFAULT_SETTINGS if settings is None else settings
    k = slowness(model)
    total = err = front = 0.0
    npts = 0
    if k > 0.0:
        front_x = t / k
        edges = [front_x * (1.0 - 0.5 ** j) for j in range(FRONT_LEVELS + 1)] + [front_x]
        for a, b in zip(edges[:-1], edges[1:]):
            m, e, f, _, n = _panel_mass(model, t, settings, a, b, backend, threads)
            total, err, front, npts = total + m, err + e, front + f, npts + n
        window = front_x
    else:
        h = 0.5 * t
        edges = [0.0, h]
        while len(edges) < WINDOW_MAX_DOUBLINGS + 2:
            a, b = edges[-2], edges[-1]
            sub = np.linspace(a, b, WINDOW_SUBPANELS + 1)
            pm = pe = pmax = 0.0
            for lo, hi in zip(sub[:-1], sub[1:]):
                m, e, f, vmax, n = _panel_mass(model, t, settings, lo, hi, backend, threads)
                pm, pe, pmax = pm + m, pe + e, max(pmax, vmax)
                front += f
                npts += n
            total, err = total + pm, err + pe
            if abs(pm) < WINDOW_TAIL_TOL and b > 2.0 * h:
                break
            edges.append(2.0 * b)
        window = edges[-1]
    # K is even in x
    return MassReport(2.0 * total, 2.0 * err, 2.0 * front, window, n_points=npts)


# ---------------------------------------------------------------------------
# independent oracles


def _mp_ratio(model):
    if isinstance(model, PowerTypeModel):
        tau = mp.mpf(model.tau)

        def lograt(u):
            eps = u - 1
            if abs(eps) < mp.mpf(10) ** (-mp.mp.dps // 2):
                return 1 + eps / 2 - eps * eps / 12
            return eps / mp.log(u)

        return lambda s: lograt(tau * s) / lograt(s)
    stress = [(mp.mpf(t.coefficient), mp.mpf(t.order)) for t in model.stress]
    strain = [(mp.mpf(t.coefficient), mp.mpf(t.order)) for t in model.strain]

    def ratio(s):
        num = mp.fsum(c * mp.power(s, o) for c, o in stress)
        den = mp.fsum(c * mp.power(s, o) for c, o in strain)
        return num / den

    return ratio


def kernel_transform_mp(model, x):
    """``s -> K~(x, s)`` in ``mpmath`` arithmetic."""
    ratio = _mp_ratio(model)
    absx = mp.mpf(abs(float(x)))

    def func(s):
        w = mp.sqrt(ratio(s))
        return w * mp.exp(-absx * s * w) / 2

    return func


STEHFEST_ORDER = 192
STEHFEST_CHECK_ORDER = 224
TALBOT_ORDER = 64
TALBOT_CHECK_ORDER = 80
TALBOT_DPS = 50


def oracle_invert(model, x, t, method="gaver_stehfest", *, rtol=1e-4, atol=1e-10,
                  order=None, check=True):
    """Independent high-precision Laplace inversion of ``K~(x, s)`` at ``(x, t)``.

    ``method`` is ``"gaver_stehfest"`` (real-axis samples, ``mpmath`` precision
    scaled with the order) or ``"talbot"`` (fixed Talbot contour around the
    negative real axis). With ``check=True`` the inversion is repeated at a
    higher order and a ``NumericalError`` is raised when the two differ by
    more than ``5 (rtol |f| + atol)``.
    """
    from .errors import NumericalError

    x, t = float(x), float(t)
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    k = slowness(model)
    margin = DEFAULT_SETTINGS.cone_margin
    if k > 0.0 and t - k * abs(x) <= margin * t:
        raise DomainError("oracle comparison requires a point strictly inside the cone")
    if is_degenerate(model):
        # the inverse of a pure exponential is a Dirac measure on the front
        return 0.0
    func = kernel_transform_mp(model, x)
    if method == "gaver_stehfest":
        n = STEHFEST_ORDER if order is None else int(order)
        n_alt = n + (STEHFEST_CHECK_ORDER - STEHFEST_ORDER)

        def run(order_):
            return float(stehfest_mp(func, t, order_))
    elif method == "talbot":
        n = TALBOT_ORDER if order is None else int(order)
        n_alt = n + (TALBOT_CHECK_ORDER - TALBOT_ORDER)

        def run(order_):
            return float(talbot_mp(func, t, order_, TALBOT_DPS))
    else:
        raise DomainError(f"unknown oracle method {method!r}")
    value = run(n)
    if check:
        alt = run(n_alt)
        if not abs(value - alt) <= 5.0 * (rtol * abs(alt) + atol):
            raise NumericalError(
                f"{method} self-check failed at x={x}, t={t}: {value!r} vs {alt!r}",
                details={"value": value, "check": alt, "orders": (n, n_alt)},
            )
        value = alt
    return value


# ---------------------------------------------------------------------------
# large/small |s| behaviour


@dataclass(frozen=True)
class A5A6Report:
    """Samples of ``|W(R e^{i phi})|`` for large ``R`` and ``|eta W(eta e^{i phi})|``.

    ``large[i, j]`` belongs to ``phi_list[i]``, ``R_list[j]``; likewise
    ``small[i, j]`` for ``eta_list[j]``.
    """

    slowness: float
    R_list: tuple
    eta_list: tuple
    phi_list: tuple
    large: np.ndarray
    small: np.ndarray
    a5_pass: bool
    a6_pass: bool
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.a5_pass and self.a6_pass


def check_a5_a6(model, R_list, eta_list, phi_list, *, a6_tolerance=1e-4):
    """Check the large- and small-``|s|`` behaviour of ``W = sqrt(Phi_sigma/Phi_eps)``.

    The large-``R`` check passes when ``| |W| - k |`` is nonincreasing along
    ``R_list`` for every angle. The small-``eta`` check passes when
    ``|eta W|`` is nonincreasing along ``eta_list`` and below
    ``a6_tolerance`` at its last entry.
    """
    R = np.asarray(R_list, dtype=float)
    eta = np.asarray(eta_list, dtype=float)
    phi = np.asarray(phi_list, dtype=float)
    if np.any(np.diff(R) <= 0.0) or np.any(R <= 0.0):
        raise DomainError("R_list must be positive and increasing")
    if np.any(np.diff(eta) >= 0.0) or np.any(eta <= 0.0):
        raise DomainError("eta_list must be positive and decreasing")
    if np.any(np.abs(phi) >= math.pi):
        raise DomainError("phi_list must lie in (-pi, pi)")
    k = slowness(model)
    large = np.abs(np.sqrt(ratio_polar(model, R[None, :], phi[:, None])))
    small = eta[None, :] * np.abs(np.sqrt(ratio_polar(model, eta[None, :], phi[:, None])))
    dev = np.abs(large - k)
    # allow for rounding at the level of the limit itself
    slack = 1e-12 * max(k, 1.0)
    a5 = bool(np.all(np.diff(dev, axis=1) <= slack))
    a6 = bool(np.all(np.diff(small, axis=1) <= 1e-300))
    a6 = a6 and bool(np.all(small[:, -1] < a6_tolerance))
    return A5A6Report(k, tuple(R), tuple(eta), tuple(phi), large, small, a5, a6,
                      {"final_deviation": dev[:, -1].tolist(),
                       "final_small": small[:, -1].tolist()})
