"""Cyclic Jacobi sweeps for complex hermitian matrices.

Two interchangeable kernels with the same signature live here:

* ``jacobi_numba``  -- scalar loops compiled with ``numba.njit``
* ``jacobi_numpy``  -- the same rotations with numpy row/column slicing

``select_kernel`` hands out the compiled kernel unless numba is missing or
the environment variable ``SPINSPEC_DISABLE_JIT`` is set to a truthy value.
Both kernels work in place on ``a`` (overwritten, ends up nearly diagonal)
and ``v`` (accumulated unitary), and return ``(sweeps, off_norm)``.
"""
import os

import numpy as np

_FALSY = ("", "0", "false", "no", "off")


def _jit_requested():
    return os.environ.get("SPINSPEC_DISABLE_JIT", "").strip().lower() in _FALSY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _off_norm_numpy(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


def _rotation(app, aqq, apq):
    # (c, s, e) for the unitary [[c, s*e], [-s*conj(e), c]] that zeroes apq
    mag = abs(apq)
    e = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    if abs(theta) > 1e150:
        return 1.0, 0.5 / theta, e
    if theta >= 0.0:
        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c, e


def jacobi_numpy(a, v, tol, max_sweeps):
    n = a.shape[0]
    off = _off_norm_numpy(a)
    sweeps = 0
    while off > tol and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                c, s, e = _rotation(a[p, p].real, a[q, q].real, apq)
                se = s * e
                sec = s * np.conj(e)
                # columns: A <- A U
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - sec * colq
                a[:, q] = se * colp + c * colq
                # rows: A <- U^H A
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - se * rowq
                a[q, :] = sec * rowp + c * rowq
                new_pp = a[p, p].real
                new_qq = a[q, q].real
                a[p, p] = new_pp
                a[q, q] = new_qq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - sec * vq
                v[:, q] = se * vp + c * vq
        sweeps += 1
        off = _off_norm_numpy(a)
    return sweeps, off


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _off_norm_jit(a):
        n = a.shape[0]
        acc = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    acc += a[i, j].real ** 2 + a[i, j].imag ** 2
        return np.sqrt(acc)

    @numba.njit(cache=True)
    def jacobi_numba(a, v, tol, max_sweeps):
        n = a.shape[0]
        off = _off_norm_jit(a)
        sweeps = 0
        while off > tol and sweeps < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    mag = abs(apq)
                    if mag == 0.0:
                        continue
                    e = apq / mag
                    app = a[p, p].real
                    aqq = a[q, q].real
                    theta = (aqq - app) / (2.0 * mag)
                    if abs(theta) > 1e150:
                        t = 0.5 / theta
                    elif theta >= 0.0:
                        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    se = s * e
                    sec = s * np.conj(e)
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - sec * akq
                        a[k, q] = se * akp + c * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - se * aqk
                        a[q, k] = sec * apk + c * aqk
                    a[p, p] = a[p, p].real + 0j
                    a[q, q] = a[q, q].real + 0j
                    a[p, q] = 0j
                    a[q, p] = 0j
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - sec * vkq
                        v[k, q] = se * vkp + c * vkq
            sweeps += 1
            off = _off_norm_jit(a)
        return sweeps, off

else:  # pragma: no cover
    jacobi_numba = None


def select_kernel():
    """Return ``(name, kernel)`` for the active Jacobi implementation."""
    if HAVE_NUMBA and _jit_requested():
        return "numba", jacobi_numba
    return "numpy", jacobi_numpy
