"""Pure-Python (numpy) implementation of the contour-quadrature hot loop.

This module mirrors ``_ckernel.pyx`` function for function; it is used when
the compiled extension is unavailable or ``FRACWAVE_PURE=1`` is set.

Integrand modes (``s = q exp(i theta)`` on the upper ray, ``q = u**2``)::

    MODE_K_RAY   Im[W exp(s (t - |x| W)) exp(i theta)] * 2u         over u
    MODE_S_RAY   Im[W exp(s (t - |x| W))] * 2 / u                   over u
    MODE_S_ARC   Re[W exp(s (t - |x| W))],  s = eta exp(i phi)      over phi

where ``W = sqrt(Phi_sigma / Phi_epsilon)`` on the principal branch.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

MODE_K_RAY = 0
MODE_S_RAY = 1
MODE_S_ARC = 2

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout: x = [-xgk[0..6], 0, xgk[6..0]]
NODES = np.concatenate([-XGK[:7], [0.0], XGK[6::-1]])
KWEIGHTS = np.concatenate([WGK[:7], [WGK[7]], WGK[6::-1]])
GWEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes xgk[1], xgk[3], xgk[5] and 0.
for _i, _w in zip((1, 3, 5), WG[:3]):
    GWEIGHTS[_i] = _w
    GWEIGHTS[14 - _i] = _w
GWEIGHTS[7] = WG[3]

EPMACH = np.finfo(float).eps
UFLOW = np.finfo(float).tiny

COMPILED = False


def gk15(f, a, b):
    """One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic.

    Returns ``(result, abserr, resabs)``; ``f`` maps an array of nodes to an
    array of values.
    """
    centr = 0.5 * (a + b)
    hlgth = 0.5 * (b - a)
    fv = np.asarray(f(centr + hlgth * NODES), dtype=float)
    resk = float(KWEIGHTS @ fv)
    resg = float(GWEIGHTS @ fv)
    reskh = 0.5 * resk
    resabs = float(KWEIGHTS @ np.abs(fv)) * abs(hlgth)
    resasc = float(KWEIGHTS @ np.abs(fv - reskh)) * abs(hlgth)
    result = resk * hlgth
    abserr = abs((resk - resg) * hlgth)
    if resasc != 0.0 and abserr != 0.0:
        abserr = resasc * min(1.0, (200.0 * abserr / resasc) ** 1.5)
    if resabs > UFLOW / (50.0 * EPMACH):
        abserr = max(EPMACH * 50.0 * resabs, abserr)
    if not math.isfinite(result):
        abserr = math.inf
    return result, abserr, resabs


def adaptive_gk(f, a, b, epsabs=1e-12, epsrel=1e-8, limit=2000, initial_panels=1):
    """Globally adaptive Gauss-Kronrod quadrature of a vectorised ``f``.

    The panel with the largest error estimate is bisected until the summed
    estimate meets ``max(epsabs, epsrel * |I|)`` or ``limit`` panels exist.

    Returns ``(result, abserr, neval, ier)`` with ``ier = 0`` on convergence,
    ``1`` when the panel budget ran out, ``2`` for a non-finite integrand.
    """
    heap = []
    total = 0.0
    err = 0.0
    edges = np.linspace(a, b, max(1, int(initial_panels)) + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        r, e, _ = gk15(f, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, r))
        total += r
        err += e
    neval = 15 * len(heap)
    while len(heap) < limit:
        if not math.isfinite(total):
            return total, math.inf, neval, 2
        if err <= max(epsabs, epsrel * abs(total)):
            return total, err, neval, 0
        neg_e, lo, hi, r = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            # cannot split further; keep the estimate and stop
            heapq.heappush(heap, (neg_e, lo, hi, r))
            break
        r1, e1, _ = gk15(f, lo, mid)
        r2, e2, _ = gk15(f, mid, hi)
        neval += 30
        heapq.heappush(heap, (-e1, lo, mid, r1))
        heapq.heappush(heap, (-e2, mid, hi, r2))
        total += r1 + r2 - r
        err += e1 + e2 + neg_e
    # recompute sums to shed accumulated rounding from the running updates
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    if not math.isfinite(total):
        return total, math.inf, neval, 2
    ier = 0 if err <= max(epsabs, epsrel * abs(total)) else 1
    return total, err, neval, ier


# ---------------------------------------------------------------------------
# symbol evaluation from packed parameters


def _log_ratio(log_u):
    eps = np.expm1(log_u)
    near = np.abs(eps) < 1e-8
    safe = np.where(near, 1.0, log_u)
    e = np.where(near, eps, 0.0)
    return np.where(near, 1.0 + e / 2.0 - e * e / 12.0, eps / safe)


def ratio(params, r, theta):
    """``Phi_sigma / Phi_epsilon`` at ``r exp(i theta)`` (arrays allowed)."""
    r = np.asarray(r, dtype=float)
    lr = np.log(r)
    if params.kind == 0:
        ps = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        pe = np.zeros_like(ps)
        for c, o in zip(params.stress_coef, params.stress_order):
            ps = ps + c * np.exp(o * lr + 1j * o * theta)
        for c, o in zip(params.strain_coef, params.strain_order):
            pe = pe + c * np.exp(o * lr + 1j * o * theta)
        return ps / pe
    ls = lr + 1j * np.asarray(theta, dtype=float)
    return _log_ratio(math.log(params.tau) + ls) / _log_ratio(ls)


def sqrt_ratio(params, r, theta):
    return np.sqrt(ratio(params, r, theta))


def ray_envelope(params, absx, t, theta, qgrid):
    """Exponent ``q Re[e^{i theta}(t - |x| W)]`` and ``ln|W|`` along a ray."""
    q = np.asarray(qgrid, dtype=float)
    w = sqrt_ratio(params, q, theta)
    g = q * (np.exp(1j * theta) * (t - absx * w)).real
    return g, np.log(np.abs(w))


def _integrand(params, mode, absx, t, theta, eta):
    rot = complex(math.cos(theta), math.sin(theta))

    def k_ray(u):
        q = u * u
        w = sqrt_ratio(params, q, theta)
        val = (w * np.exp(q * rot * (t - absx * w)) * rot).imag
        return np.where(u > 0.0, val * 2.0 * u, 0.0)

    def s_ray(u):
        q = u * u
        w = sqrt_ratio(params, q, theta)
        return (w * np.exp(q * rot * (t - absx * w))).imag * 2.0 / u

    def s_arc(phi):
        w = sqrt_ratio(params, eta, phi)
        s = eta * np.exp(1j * phi)
        return (w * np.exp(s * (t - absx * w))).real

    return {MODE_K_RAY: k_ray, MODE_S_RAY: s_ray, MODE_S_ARC: s_arc}[mode]


def integrate(params, mode, absx, t, theta, eta, a, b, epsabs, epsrel, limit,
              initial_panels=8):
    """Adaptive quadrature of one integrand mode over ``[a, b]``.

    Returns ``(result, abserr, neval, ier)``.
    """
    f = _integrand(params, mode, float(absx), float(t), float(theta), float(eta))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return adaptive_gk(f, float(a), float(b), epsabs, epsrel, int(limit),
                           initial_panels)
