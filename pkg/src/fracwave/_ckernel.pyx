# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled contour-quadrature hot loop.

Same interface and integrand modes as ``_pykernel``; the adaptive
Gauss-Kronrod loop and the symbol evaluation run without the GIL so that
``kernel_grid`` can use threads.
"""
import numpy as np

from libc.math cimport (cos, exp, expm1, fabs, hypot, log, sin, sqrt, copysign,
                        isfinite, pow, INFINITY)
from libc.stdlib cimport malloc, free

COMPILED = True

MODE_K_RAY = 0
MODE_S_RAY = 1
MODE_S_ARC = 2

cdef double EPMACH = 2.220446049250313e-16
cdef double UFLOW = 2.2250738585072014e-308

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
          0.207784955007898467600689403773245, 0.0]
WGK[:] = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
          0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
WG[:] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
         0.381830050505118944950369775488975, 0.417959183673469387755102040816327]


cdef struct Params:
    int kind
    int ns
    int ne
    double *cs
    double *os
    double *ce
    double *oe
    double logtau


cdef struct Integrand:
    Params *p
    int mode
    double absx
    double t
    double theta
    double eta
    double rot_re
    double rot_im


cdef inline double complex cexp_(double complex z) noexcept nogil:
    cdef double m = exp(z.real)
    return m * cos(z.imag) + 1j * (m * sin(z.imag))


cdef inline double complex csqrt_(double complex z) noexcept nogil:
    cdef double x = z.real, y = z.imag, r, u, v
    if x == 0.0 and y == 0.0:
        return 0.0
    r = hypot(x, y)
    if x >= 0.0:
        u = sqrt(0.5 * (r + x))
        v = y / (2.0 * u)
    else:
        v = copysign(sqrt(0.5 * (r - x)), y)
        u = y / (2.0 * v)
    return u + 1j * v


cdef inline double complex log_ratio(double lr, double theta) noexcept nogil:
    # (u - 1) / ln u with ln u = lr + i theta
    cdef double ea = expm1(lr)
    cdef double s2 = sin(0.5 * theta)
    cdef double complex eps = (ea * cos(theta) - 2.0 * s2 * s2) + 1j * ((ea + 1.0) * sin(theta))
    cdef double complex lu = lr + 1j * theta
    if hypot(eps.real, eps.imag) < 1e-8:
        return 1.0 + eps / 2.0 - eps * eps / 12.0
    return eps / lu


cdef inline double complex ratio_c(Params *p, double r, double theta) noexcept nogil:
    cdef double lr = log(r), m
    cdef double complex ps = 0.0, pe = 0.0
    cdef int i
    if p.kind == 0:
        for i in range(p.ns):
            m = p.cs[i] * exp(p.os[i] * lr)
            ps = ps + (m * cos(p.os[i] * theta) + 1j * (m * sin(p.os[i] * theta)))
        for i in range(p.ne):
            m = p.ce[i] * exp(p.oe[i] * lr)
            pe = pe + (m * cos(p.oe[i] * theta) + 1j * (m * sin(p.oe[i] * theta)))
        return ps / pe
    return log_ratio(p.logtau + lr, theta) / log_ratio(lr, theta)


cdef inline double eval_integrand(Integrand *f, double v) noexcept nogil:
    cdef double q
    cdef double complex w, s, rot, z
    if f.mode == 2:
        w = csqrt_(ratio_c(f.p, f.eta, v))
        s = f.eta * cos(v) + 1j * (f.eta * sin(v))
        z = w * cexp_(s * (f.t - f.absx * w))
        return z.real
    if v <= 0.0:
        return 0.0
    q = v * v
    rot = f.rot_re + 1j * f.rot_im
    w = csqrt_(ratio_c(f.p, q, f.theta))
    z = w * cexp_(q * rot * (f.t - f.absx * w))
    if f.mode == 0:
        return (z * rot).imag * 2.0 * v
    return z.imag * 2.0 / v


cdef void gk15(Integrand *f, double a, double b, double *result, double *abserr) noexcept nogil:
    cdef double centr = 0.5 * (a + b)
    cdef double hlgth = 0.5 * (b - a)
    cdef double dhlgth = fabs(hlgth)
    cdef double fc = eval_integrand(f, centr)
    cdef double resg = fc * WG[3]
    cdef double resk = fc * WGK[7]
    cdef double resabs = fabs(resk)
    cdef double fv1[7]
    cdef double fv2[7]
    cdef double absc, f1, f2, reskh, resasc
    cdef int j
    for j in range(7):
        absc = hlgth * XGK[j]
        f1 = eval_integrand(f, centr - absc)
        f2 = eval_integrand(f, centr + absc)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (fabs(f1) + fabs(f2))
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    reskh = resk * 0.5
    resasc = WGK[7] * fabs(fc - reskh)
    for j in range(7):
        resasc += WGK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh))
    result[0] = resk * hlgth
    resabs *= dhlgth
    resasc *= dhlgth
    abserr[0] = fabs((resk - resg) * hlgth)
    if resasc != 0.0 and abserr[0] != 0.0:
        abserr[0] = resasc * min(1.0, pow(200.0 * abserr[0] / resasc, 1.5))
    if resabs > UFLOW / (50.0 * EPMACH):
        abserr[0] = max(EPMACH * 50.0 * resabs, abserr[0])
    if not isfinite(result[0]):
        abserr[0] = INFINITY


cdef int adaptive(Integrand *f, double a, double b, double epsabs, double epsrel,
                  int limit, int ninit, double *res, double *err, int *neval) noexcept nogil:
    cdef double *al
    cdef double *bl
    cdef double *rl
    cdef double *el
    cdef int n, i, imax, ier = 0
    cdef double h, total, etot, mid, r1, e1, r2, e2
    if ninit < 1:
        ninit = 1
    if limit < ninit:
        limit = ninit
    al = <double *> malloc(limit * sizeof(double))
    bl = <double *> malloc(limit * sizeof(double))
    rl = <double *> malloc(limit * sizeof(double))
    el = <double *> malloc(limit * sizeof(double))
    h = (b - a) / ninit
    for i in range(ninit):
        al[i] = a + i * h
        bl[i] = b if i == ninit - 1 else a + (i + 1) * h
        gk15(f, al[i], bl[i], &rl[i], &el[i])
    n = ninit
    neval[0] = 15 * n
    while True:
        total = 0.0
        etot = 0.0
        imax = 0
        for i in range(n):
            total += rl[i]
            etot += el[i]
            if el[i] > el[imax]:
                imax = i
        if not isfinite(total):
            ier = 2
            etot = INFINITY
            break
        if etot <= max(epsabs, epsrel * fabs(total)):
            ier = 0
            break
        if n >= limit:
            ier = 1
            break
        mid = 0.5 * (al[imax] + bl[imax])
        if not (al[imax] < mid and mid < bl[imax]):
            ier = 1
            break
        gk15(f, al[imax], mid, &r1, &e1)
        gk15(f, mid, bl[imax], &r2, &e2)
        neval[0] += 30
        al[n] = mid
        bl[n] = bl[imax]
        rl[n] = r2
        el[n] = e2
        bl[imax] = mid
        rl[imax] = r1
        el[imax] = e1
        n += 1
    res[0] = total
    err[0] = etot
    free(al)
    free(bl)
    free(rl)
    free(el)
    return ier


cdef void fill_params(Params *p, params, double[::1] cs, double[::1] os,
                      double[::1] ce, double[::1] oe):
    p.kind = params.kind
    p.ns = cs.shape[0]
    p.ne = ce.shape[0]
    p.cs = &cs[0] if p.ns > 0 else NULL
    p.os = &os[0] if p.ns > 0 else NULL
    p.ce = &ce[0] if p.ne > 0 else NULL
    p.oe = &oe[0] if p.ne > 0 else NULL
    p.logtau = log(params.tau)


def _arrays(params):
    return (np.ascontiguousarray(params.stress_coef, dtype=np.float64),
            np.ascontiguousarray(params.stress_order, dtype=np.float64),
            np.ascontiguousarray(params.strain_coef, dtype=np.float64),
            np.ascontiguousarray(params.strain_order, dtype=np.float64))


def integrate(params, int mode, double absx, double t, double theta, double eta,
              double a, double b, double epsabs, double epsrel, int limit,
              int initial_panels=8):
    """Adaptive quadrature of one integrand mode; returns (result, abserr, neval, ier)."""
    cdef Params p
    cdef Integrand f
    cdef double res = 0.0, err = 0.0
    cdef int neval = 0, ier
    cs, os_, ce, oe = _arrays(params)
    fill_params(&p, params, cs, os_, ce, oe)
    f.p = &p
    f.mode = mode
    f.absx = absx
    f.t = t
    f.theta = theta
    f.eta = eta
    f.rot_re = cos(theta)
    f.rot_im = sin(theta)
    with nogil:
        ier = adaptive(&f, a, b, epsabs, epsrel, limit, initial_panels, &res, &err, &neval)
    return res, err, neval, ier


def ratio(params, r, theta):
    """Ratio of symbols at ``r exp(i theta)``; scalar or 1-d array ``r``."""
    cdef Params p
    cs, os_, ce, oe = _arrays(params)
    fill_params(&p, params, cs, os_, ce, oe)
    rr = np.atleast_1d(np.asarray(r, dtype=np.float64))
    th = np.broadcast_to(np.asarray(theta, dtype=np.float64), rr.shape).copy()
    out = np.empty(rr.shape[0], dtype=np.complex128)
    cdef double[::1] rv = rr
    cdef double[::1] tv = th
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(rv.shape[0]):
            ov[i] = ratio_c(&p, rv[i], tv[i])
    if np.ndim(r) == 0 and np.ndim(theta) == 0:
        return complex(out[0])
    return out


def sqrt_ratio(params, r, theta):
    return np.sqrt(ratio(params, r, theta))


def ray_envelope(params, double absx, double t, double theta, qgrid):
    """Exponent ``q Re[e^{i theta}(t - |x| W)]`` and ``ln|W|`` along a ray."""
    cdef Params p
    cs, os_, ce, oe = _arrays(params)
    fill_params(&p, params, cs, os_, ce, oe)
    q = np.ascontiguousarray(qgrid, dtype=np.float64)
    g = np.empty_like(q)
    lw = np.empty_like(q)
    cdef double[::1] qv = q
    cdef double[::1] gv = g
    cdef double[::1] lv = lw
    cdef double complex w, rot = cos(theta) + 1j * sin(theta)
    cdef Py_ssize_t i
    with nogil:
        for i in range(qv.shape[0]):
            w = csqrt_(ratio_c(&p, qv[i], theta))
            gv[i] = qv[i] * (rot * (t - absx * w)).real
            lv[i] = log(hypot(w.real, w.imag))
    return g, lw
