"""Hot inner loop: the frequency-convolution integrand evaluated on node
batches.

Two interchangeable implementations are provided: a numba @njit kernel
(looped small-matrix algebra, nogil so frequency grids can thread) and a
vectorized pure-numpy twin.  The numpy path is selected automatically when
numba is unavailable, or explicitly by setting the environment variable
DOTGAIN_DISABLE_NUMBA=1 before import.  benchmarks/kernel_speed.py compares
the two.

Each batch call returns, per node w' and for external frequency w (with
w_pm = w' +- w/2), the four trace combinations

  [0] Tr[g G^k(w+) g (G^r+G^a)(w-)] + Tr[g G^k(w-) g (G^r+G^a)(w+)]
  [1] Tr[g G^k(w+) g (G^r-G^a)(w-)] - Tr[g G^k(w-) g (G^r-G^a)(w+)]
  [2] Tr[g G^<(w+) g G^>(w-)]
  [3] Tr[g G^>(w+) g G^<(w-)]

without prefactors; the susceptibility module applies those.
"""

import os

import numpy as np

ENV_DISABLE = "DOTGAIN_DISABLE_NUMBA"


def _numba_disabled_by_env():
    return os.environ.get(ENV_DISABLE, "").strip().lower() in (
        "1", "true", "yes", "on")


def _fermi_scalar(x):
    # x = beta*(w - mu); clamp beyond +-700 to avoid exp overflow
    if x > 700.0:
        return 0.0
    if x < -700.0:
        return 1.0
    return 1.0 / (1.0 + np.exp(x))


def _inv_small(a):
    # Gauss-Jordan with partial pivoting; fine for the M <= ~16 matrices
    # seen here and much cheaper than a LAPACK round-trip per node.
    m = a.shape[0]
    aug = np.zeros((m, 2 * m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            aug[i, j] = a[i, j]
        aug[i, m + i] = 1.0
    for col in range(m):
        piv = col
        best = abs(aug[col, col])
        for r in range(col + 1, m):
            mag = abs(aug[r, col])
            if mag > best:
                best = mag
                piv = r
        if best == 0.0:
            raise ArithmeticError("singular matrix in Green's function kernel")
        if piv != col:
            for j in range(2 * m):
                tmp = aug[col, j]
                aug[col, j] = aug[piv, j]
                aug[piv, j] = tmp
        inv_p = 1.0 / aug[col, col]
        for j in range(2 * m):
            aug[col, j] *= inv_p
        for r in range(m):
            if r == col:
                continue
            factor = aug[r, col]
            if factor != 0.0:
                for j in range(col, 2 * m):
                    aug[r, j] -= factor * aug[col, j]
    return aug[:, m:].copy()


def _greens_at(w, ham, gamma_l, gamma_r, left_site, right_site,
               mu_l, mu_r, beta):
    # G^r by inversion, then G^{<,>} = G^r Sigma^{<,>} G^a with diagonal
    # Sigma; returns (G^r, G^<, G^>).
    m = ham.shape[0]
    a = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            a[i, j] = -ham[i, j]
        a[i, i] += w
    a[left_site, left_site] += 0.5j * gamma_l
    a[right_site, right_site] += 0.5j * gamma_r
    gr = _inv_small(a)
    fl = _fermi_scalar(beta * (w - mu_l))
    fr = _fermi_scalar(beta * (w - mu_r))
    sig_l = np.zeros(m, dtype=np.complex128)
    sig_g = np.zeros(m, dtype=np.complex128)
    sig_l[left_site] += 1j * fl * gamma_l
    sig_g[left_site] += -1j * (1.0 - fl) * gamma_l
    sig_l[right_site] += 1j * fr * gamma_r
    sig_g[right_site] += -1j * (1.0 - fr) * gamma_r
    gl = np.empty((m, m), dtype=np.complex128)
    gg = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            acc_l = 0.0 + 0.0j
            acc_g = 0.0 + 0.0j
            for s in range(m):
                w_is = gr[i, s] * np.conj(gr[j, s])
                acc_l += w_is * sig_l[s]
                acc_g += w_is * sig_g[s]
            gl[i, j] = acc_l
            gg[i, j] = acc_g
    return gr, gl, gg


def _trace_pair(coupling, x, y):
    # Tr[g X g Y] with diagonal g: sum_ab g_a g_b X_ab Y_ba
    m = coupling.shape[0]
    acc = 0.0 + 0.0j
    for a in range(m):
        for b in range(m):
            acc += coupling[a] * coupling[b] * x[a, b] * y[b, a]
    return acc


def _integrand_core(nodes, omega, ham, coupling, gamma_l, gamma_r,
                    left_site, right_site, mu_l, mu_r, beta):
    n = nodes.shape[0]
    m = ham.shape[0]
    out = np.empty((n, 4), dtype=np.complex128)
    for k in range(n):
        wp = nodes[k] + 0.5 * omega
        wm = nodes[k] - 0.5 * omega
        grp, glp, ggp = _greens_at(wp, ham, gamma_l, gamma_r,
                                   left_site, right_site, mu_l, mu_r, beta)
        grm, glm, ggm = _greens_at(wm, ham, gamma_l, gamma_r,
                                   left_site, right_site, mu_l, mu_r, beta)
        gap = grp.conj().T
        gam = grm.conj().T
        gkp = glp + ggp
        gkm = glm + ggm
        out[k, 0] = (_trace_pair(coupling, gkp, grm + gam)
                     + _trace_pair(coupling, gkm, grp + gap))
        out[k, 1] = (_trace_pair(coupling, gkp, grm - gam)
                     - _trace_pair(coupling, gkm, grp - gap))
        out[k, 2] = _trace_pair(coupling, glp, ggm)
        out[k, 3] = _trace_pair(coupling, ggp, glm)
    return out


def _fermi_array(x):
    out = 1.0 / (1.0 + np.exp(np.clip(x, -700.0, 700.0)))
    out = np.where(x > 700.0, 0.0, out)
    return np.where(x < -700.0, 1.0, out)


def integrand_batch_numpy(nodes, omega, ham, coupling, gamma_l, gamma_r,
                          left_site, right_site, mu_l, mu_r, beta):
    """Vectorized twin of the numba kernel (batched LAPACK inversion)."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.shape[0]
    m = ham.shape[0]
    w = np.concatenate([nodes + 0.5 * omega, nodes - 0.5 * omega])
    a = w[:, None, None] * np.eye(m) - ham[None, :, :].astype(complex)
    a[:, left_site, left_site] += 0.5j * gamma_l
    a[:, right_site, right_site] += 0.5j * gamma_r
    gr = np.linalg.inv(a)
    fl = _fermi_array(beta * (w - mu_l))
    fr = _fermi_array(beta * (w - mu_r))
    sig_l = np.zeros((2 * n, m), dtype=complex)
    sig_g = np.zeros((2 * n, m), dtype=complex)
    sig_l[:, left_site] += 1j * fl * gamma_l
    sig_g[:, left_site] += -1j * (1.0 - fl) * gamma_l
    sig_l[:, right_site] += 1j * fr * gamma_r
    sig_g[:, right_site] += -1j * (1.0 - fr) * gamma_r
    grc = gr.conj()
    gl = np.einsum("was,ws,wbs->wab", gr, sig_l, grc)
    gg = np.einsum("was,ws,wbs->wab", gr, sig_g, grc)
    ga = grc.swapaxes(1, 2)
    gk = gl + gg

    def tp(x, y):
        return np.einsum("a,b,wab,wba->w", coupling, coupling, x, y)

    p = slice(0, n)
    q = slice(n, 2 * n)
    out = np.empty((n, 4), dtype=np.complex128)
    out[:, 0] = (tp(gk[p], gr[q] + ga[q]) + tp(gk[q], gr[p] + ga[p]))
    out[:, 1] = (tp(gk[p], gr[q] - ga[q]) - tp(gk[q], gr[p] - ga[p]))
    out[:, 2] = tp(gl[p], gg[q])
    out[:, 3] = tp(gg[p], gl[q])
    return out


NUMBA_ENABLED = False
integrand_batch_numba = None

if not _numba_disabled_by_env():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        _fermi_scalar = njit(cache=True, nogil=True)(_fermi_scalar)
        _inv_small = njit(cache=True, nogil=True)(_inv_small)
        _greens_at = njit(cache=True, nogil=True)(_greens_at)
        _trace_pair = njit(cache=True, nogil=True)(_trace_pair)
        integrand_batch_numba = njit(cache=True, nogil=True)(_integrand_core)
        NUMBA_ENABLED = True

integrand_batch = integrand_batch_numba if NUMBA_ENABLED else integrand_batch_numpy


def active_path():
    """Name of the integrand implementation in use ('numba' or 'numpy')."""
    return "numba" if NUMBA_ENABLED else "numpy"
