"""Dense complex linear algebra for small matrices (dim <= 16).

Everything here operates on plain numpy arrays: a "matrix" is a square
complex ndarray, a "vector" a 1-d complex ndarray.  The eigensolver is a
cyclic Jacobi iteration, which for these dimensions is robust and produces
orthonormal eigenvectors by construction; `eigh_stack` is the vectorized
LAPACK path used on long trajectories and is cross-checked against the
Jacobi solver in the test suite.
"""

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, Overflow

MAX_DIM = 16

# Degenerate-gap floor shared with the spectral layer.
EPS_GAP = 1e-8


def as_matrix(a):
    """Coerce to a square complex matrix, checking shape and finiteness."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(a.view(float))):
        raise Overflow("matrix has non-finite entries")
    return a


def adjoint(a):
    return np.conj(np.swapaxes(np.asarray(a, dtype=complex), -1, -2))


def frobenius_norm(a):
    return float(np.linalg.norm(np.asarray(a)))


def hermiticity_defect(a):
    """max_jk |A_jk - conj(A_kj)|."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a - adjoint(a))))


def is_hermitian(a, rtol=1e-12):
    a = as_matrix(a)
    return hermiticity_defect(a) <= rtol * max(frobenius_norm(a), 1.0)


def matmul(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] != b.shape[-2 if b.ndim > 1 else 0]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def matvec(a, v):
    a = np.asarray(a, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if a.shape[-1] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply shape {a.shape} to vector of length {v.shape[0]}")
    return a @ v


def inner(v, w):
    """<v|w>, conjugate-linear in the first argument."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.shape != w.shape:
        raise DimensionMismatch(f"inner product of shapes {v.shape} and {w.shape}")
    return complex(np.vdot(v, w))


def _jacobi_rotation(dim, p, q, app, aqq, apq):
    """Unitary that annihilates the (p, q) entry of a Hermitian matrix.

    The phase similarity diag(1, conj(apq)/|apq|) makes the 2x2 pivot block
    real symmetric; a Givens rotation then zeroes the off-diagonal entry.
    """
    absz = abs(apq)
    phase = apq / absz
    tau = (aqq - app) / (2.0 * absz)
    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    g = np.eye(dim, dtype=complex)
    g[p, p] = c
    g[p, q] = s
    g[q, p] = -s * np.conj(phase)
    g[q, q] = c * np.conj(phase)
    return g


def hermitian_eig(a, rtol=1e-13, max_sweeps=60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues, eigenvectors): eigenvalues ascending, eigenvectors
    as the columns of a unitary matrix.
    """
    a = as_matrix(a)
    norm = frobenius_norm(a)
    if hermiticity_defect(a) > 1e-12 * max(norm, 1.0):
        raise NotHermitian(f"Hermiticity defect {hermiticity_defect(a):.3e} exceeds tolerance")
    n = a.shape[0]
    w = a.copy()
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([w[0, 0].real]), v
    thresh = max(rtol * norm, 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(w - np.diag(np.diag(w))) ** 2))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(w[p, q]) <= thresh / (n * n):
                    continue
                g = _jacobi_rotation(n, p, q, w[p, p].real, w[q, q].real, w[p, q])
                w = adjoint(g) @ w @ g
                v = v @ g
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    vals = np.diag(w).real
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def eigh_stack(h_stack):
    """Ascending eigendecomposition of a stack of Hermitian matrices.

    LAPACK-backed fast path for trajectory sweeps; agrees with
    `hermitian_eig` (see tests) but does not re-check Hermiticity per point.
    """
    return np.linalg.eigh(h_stack)


_EXP_NORM_LIMIT = 100.0


def matrix_exp(a):
    """exp(A) by scaling and squaring with a truncated-series core."""
    a = as_matrix(a)
    norm = frobenius_norm(a)
    if norm > _EXP_NORM_LIMIT:
        raise Overflow(f"norm {norm:.3e} exceeds the accuracy contract limit {_EXP_NORM_LIMIT}")
    n = a.shape[0]
    k = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    b = a / (2 ** k)
    # degree-16 Taylor: remainder < 0.5**17/17! ~ 2e-20 at the scaled norm
    term = np.eye(n, dtype=complex)
    result = np.eye(n, dtype=complex)
    for j in range(1, 17):
        term = term @ b / j
        result = result + term
    for _ in range(k):
        result = result @ result
    return result


def cumulative_simpson(y, dx):
    """Cumulative integral of uniformly sampled y, 4th-order accurate.

    y may be real or complex with shape (n, ...); integration runs along the
    first axis.  Returns an array of the same shape with result[0] = 0.
    """
    y = np.asarray(y)
    n = y.shape[0]
    out = np.zeros_like(y, dtype=np.result_type(y.dtype, float))
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * dx * (y[0] + y[1])
        return out
    # quadratic through the first three points for the first subinterval
    out[1] = dx / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2])
    pair = dx / 3.0 * (y[:-2] + 4.0 * y[1:-1] + y[2:])  # Simpson over [i, i+2]
    out[2::2] = np.cumsum(pair[0::2], axis=0)
    if n > 3:
        out[3::2] = out[1] + np.cumsum(pair[1::2], axis=0)
    return out


def loglog_slope(x, y):
    """Least-squares slope of log(y) vs log(x) with its standard error."""
    x = np.asarray(x, dtype=float)
    y = np.maximum(np.asarray(y, dtype=float), 1e-300)
    lx, ly = np.log(x), np.log(y)
    n = len(x)
    a = np.vstack([lx, np.ones(n)]).T
    coef, res, _, _ = np.linalg.lstsq(a, ly, rcond=None)
    slope = float(coef[0])
    if n > 2 and res.size:
        var = float(res[0]) / (n - 2)
        stderr = np.sqrt(var / np.sum((lx - lx.mean()) ** 2))
    else:
        stderr = 0.0
    return slope, float(stderr)
