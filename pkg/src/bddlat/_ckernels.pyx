# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_kernels_py`` exactly."""
from libc.math cimport exp, log, sqrt, ceil, floor, fabs
from libc.stdlib cimport malloc, free

cdef double _INVPHI = 0.6180339887498949


cpdef double theta_sum(double p, double tau, double rel_tol):
    cdef double total = 1.0
    cdef double logtau = log(tau)
    cdef double e, term
    cdef long z = 1
    while True:
        e = logtau + p * log(<double>z)
        if e > 6.7:
            return total
        term = exp(-exp(e))
        if term < rel_tol * total:
            return total
        total += 2.0 * term
        z += 1


cpdef double log_objective(double u, double p, double slope, double rel_tol):
    cdef double tau = exp(u)
    return slope * tau + log(theta_sum(p, tau, rel_tol))


def golden_min(double p, double slope, double rel_tol, double xtol):
    cdef double step = log(2.0)
    cdef double a = -step, b = 0.0, c, tmp
    cdef double fa = log_objective(a, p, slope, rel_tol)
    cdef double fb = log_objective(b, p, slope, rel_tol)
    cdef double fc, lo, hi, x1, x2, f1, f2
    if fa < fb:
        tmp = a; a = b; b = tmp
        tmp = fa; fa = fb; fb = tmp
        step = -step
    c = b + step
    fc = log_objective(c, p, slope, rel_tol)
    while fc < fb:
        if fabs(c) > 200.0:
            break
        step *= 2.0
        a = b; fa = fb
        b = c; fb = fc
        c = b + step
        fc = log_objective(c, p, slope, rel_tol)
    if a < c:
        lo = a; hi = c
    else:
        lo = c; hi = a

    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = log_objective(x1, p, slope, rel_tol)
    f2 = log_objective(x2, p, slope, rel_tol)
    while hi - lo > xtol:
        if f1 <= f2:
            hi = x2; x2 = x1; f2 = f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = log_objective(x1, p, slope, rel_tol)
        else:
            lo = x1; x1 = x2; f1 = f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = log_objective(x2, p, slope, rel_tol)
    if f1 <= f2:
        return exp(x1), f1
    return exp(x2), f2


def fp_enumerate(mu, bstar_sq, center, double radius_sq):
    cdef int n = len(bstar_sq)
    out = []
    if radius_sq < 0.0 or n == 0:
        return out
    cdef double *cmu = <double *> malloc(n * n * sizeof(double))
    cdef double *cb = <double *> malloc(n * sizeof(double))
    cdef double *cy = <double *> malloc(n * sizeof(double))
    cdef double *cc = <double *> malloc(n * sizeof(double))
    cdef double *part = <double *> malloc((n + 1) * sizeof(double))
    cdef long *x = <long *> malloc(n * sizeof(long))
    cdef long *up = <long *> malloc(n * sizeof(long))
    cdef int i, j, k
    cdef double cen, rem, w, d
    cdef bint descend
    try:
        for i in range(n):
            cb[i] = bstar_sq[i]
            cy[i] = center[i]
            x[i] = 0
            part[i] = 0.0
            row = mu[i]
            for j in range(n):
                cmu[i * n + j] = row[j]
        part[n] = 0.0

        k = n - 1
        descend = True
        while True:
            if descend:
                cen = cy[k]
                for j in range(k + 1, n):
                    cen -= cmu[k * n + j] * (x[j] - cy[j])
                cc[k] = cen
                rem = radius_sq - part[k + 1]
                if rem < 0.0:
                    if k == n - 1:
                        return out
                    k += 1
                    x[k] += 1
                    descend = False
                    continue
                w = sqrt(rem / cb[k])
                x[k] = <long> ceil(cen - w)
                up[k] = <long> floor(cen + w)
                descend = False
            if x[k] > up[k]:
                k += 1
                if k == n:
                    return out
                x[k] += 1
                continue
            d = x[k] - cc[k]
            part[k] = part[k + 1] + cb[k] * d * d
            if part[k] > radius_sq:
                x[k] += 1
                continue
            if k == 0:
                out.append(tuple([x[i] for i in range(n)]))
                x[0] += 1
                continue
            k -= 1
            descend = True
    finally:
        free(cmu); free(cb); free(cy); free(cc); free(part); free(x); free(up)
