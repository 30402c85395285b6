"""Pure-Python versions of the hot loops.

Same algorithms and signatures as the compiled ``_ckernels`` module; used
when the extension is not built or when ``BDDLAT_PURE=1`` is set.
"""
import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
# exp(-x) underflows to zero below this
_EXP_CUTOFF = 745.0


def theta_sum(p, tau, rel_tol):
    total = 1.0
    logtau = math.log(tau)
    z = 1
    while True:
        e = logtau + p * math.log(z)
        if e > 6.7:  # tau * z**p > 812
            return total
        term = math.exp(-math.exp(e))
        if term < rel_tol * total:
            return total
        total += 2.0 * term
        z += 1


def log_objective(u, p, slope, rel_tol):
    """ln of exp(slope * tau) * theta_p(tau) at tau = exp(u)."""
    tau = math.exp(u)
    return slope * tau + math.log(theta_sum(p, tau, rel_tol))


def golden_min(p, slope, rel_tol, xtol):
    """Minimize ``log_objective`` over u = ln(tau).

    Returns ``(tau_min, log_min)``. The objective is convex in tau, hence
    unimodal in ln(tau), so a bracket found by expansion from u = 0 holds the
    global minimum.
    """
    step = math.log(2.0)
    a, b = -step, 0.0
    fa = log_objective(a, p, slope, rel_tol)
    fb = log_objective(b, p, slope, rel_tol)
    if fa < fb:
        a, b, fa, fb = b, a, fb, fa
        step = -step
    c = b + step
    fc = log_objective(c, p, slope, rel_tol)
    while fc < fb:
        if abs(c) > 200.0:
            break
        step *= 2.0
        a, fa = b, fb
        b, fb = c, fc
        c = b + step
        fc = log_objective(c, p, slope, rel_tol)
    lo, hi = (a, c) if a < c else (c, a)

    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = log_objective(x1, p, slope, rel_tol)
    f2 = log_objective(x2, p, slope, rel_tol)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = log_objective(x1, p, slope, rel_tol)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = log_objective(x2, p, slope, rel_tol)
    if f1 <= f2:
        return math.exp(x1), f1
    return math.exp(x2), f2


def fp_enumerate(mu, bstar_sq, center, radius_sq):
    """Fincke-Pohst enumeration of integer x with
    sum_k bstar_sq[k] * (x_k - c_k(x_{>k}))**2 <= radius_sq.

    ``mu[k][j]`` (j > k) are the Gram-Schmidt coefficients of the upper
    triangular factor and ``center`` is the target in coefficient space.
    Returns a list of integer tuples.
    """
    n = len(bstar_sq)
    out = []
    if radius_sq < 0.0 or n == 0:
        return out
    x = [0] * n
    centers = [0.0] * n
    partial = [0.0] * (n + 1)
    upper = [0] * n

    def bounds(k):
        c = center[k]
        row = mu[k]
        for j in range(k + 1, n):
            c -= row[j] * (x[j] - center[j])
        centers[k] = c
        rem = radius_sq - partial[k + 1]
        if rem < 0.0:
            return None
        w = math.sqrt(rem / bstar_sq[k])
        return math.ceil(c - w), math.floor(c + w)

    k = n - 1
    bd = bounds(k)
    if bd is None or bd[0] > bd[1]:
        return out
    x[k], upper[k] = bd
    while True:
        if x[k] > upper[k]:
            k += 1
            if k == n:
                return out
            x[k] += 1
            continue
        d = x[k] - centers[k]
        partial[k] = partial[k + 1] + bstar_sq[k] * d * d
        if partial[k] > radius_sq:
            x[k] += 1
            continue
        if k == 0:
            out.append(tuple(x))
            x[0] += 1
            continue
        k -= 1
        bd = bounds(k)
        if bd is None:
            k += 1
            x[k] += 1
            continue
        x[k], upper[k] = bd
