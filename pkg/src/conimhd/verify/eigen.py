"""Small dense eigensolvers used as the numerical oracle.

Two interchangeable back ends compute ordinary eigenvalues:

* ``"lapack"`` -- numpy's ``eigvals`` (balancing, Hessenberg reduction and
  shifted QR inside LAPACK ``dgeev``);
* ``"qr"`` -- the same algorithm written out here (Parlett-Reinsch
  balancing, Householder reduction, Francis double-shift QR), slower but
  fully inspectable.

The generalized problem det(A - lambda B) = 0 is reduced to an ordinary one,
either through B^{-1} A or, when B is ill conditioned, through a real shift
sigma and the spectrum of (A - sigma B)^{-1} B, whose zero eigenvalues
correspond to infinite lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConvergenceError, SingularPencilError

_EPS = float(np.finfo(float).eps)

__all__ = ["EigenResult", "dense_eigen", "generalized_eigen", "balance", "hessenberg", "hqr"]

MAX_DIM = 16
COND_LIMIT = 1e8
INF_TOL = 1e-7
SINGULAR_COND = 1e13
_SHIFTS = (0.6180339887498949, -1.3247179572447460, 2.4142135623730950,
           -0.7548776662466927, 3.7320508075688772, -2.2055694304005903)


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray                      # complex; +inf where infinite
    infinite: np.ndarray = field(default=None)
    converged: bool = True
    iterations: int = 0
    method: str = "lapack"
    shift: float | None = None

    def __post_init__(self):
        if self.infinite is None:
            object.__setattr__(self, "infinite", np.zeros(self.values.shape, dtype=bool))

    @property
    def finite(self):
        return self.values[~self.infinite]

    @property
    def n_infinite(self):
        return int(np.count_nonzero(self.infinite))


def balance(a, radix=2.0):
    """Parlett-Reinsch diagonal similarity scaling (returns a new array)."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            c = np.sum(np.abs(a[:, i])) - abs(a[i, i])
            r = np.sum(np.abs(a[i, :])) - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def hessenberg(a):
    """Upper Hessenberg form by Householder similarity transforms."""
    h = np.array(a, dtype=float)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        u = x
        u[0] -= alpha
        un = np.linalg.norm(u)
        if un == 0.0:
            continue
        u /= un
        h[k + 1:, k:] -= 2.0 * np.outer(u, u @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ u, u)
        h[k + 2:, k] = 0.0
    return h


def hqr(h, max_its=60):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Returns ``(eigenvalues, total_iterations)``.  Raises ConvergenceError if
    any eigenvalue needs more than ``max_its`` sweeps.
    """
    n = h.shape[0]
    # 1-based working copy keeps the index bookkeeping close to the
    # classical formulation
    a = [[0.0] * (n + 1)] + [[0.0] + [float(x) for x in row] for row in h]
    wr = [0.0] * (n + 1)
    wi = [0.0] * (n + 1)
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i][j])
    floor = _EPS * _EPS * anorm
    nn = n
    t = 0.0
    total = 0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1][ll - 1]) + abs(a[ll][ll])
                if s == 0.0:
                    s = anorm
                # second test deflates blocks lying far below the matrix
                # norm, where the relative test stalls on underflow
                if abs(a[ll][ll - 1]) + s == s or abs(a[ll][ll - 1]) <= floor:
                    a[ll][ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn][nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
            else:
                y = a[nn - 1][nn - 1]
                w = a[nn][nn - 1] * a[nn - 1][nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + w
                    z = np.sqrt(abs(q))
                    x += t
                    if q >= 0.0:
                        z = p + (z if p >= 0 else -z)
                        wr[nn - 1] = wr[nn] = x + z
                        if z != 0.0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = wi[nn] = 0.0
                    else:
                        wr[nn - 1] = wr[nn] = x + p
                        wi[nn] = z
                        wi[nn - 1] = -z
                    nn -= 2
                else:
                    if its == max_its:
                        raise ConvergenceError(f"QR iteration did not converge after {max_its} sweeps")
                    if its and its % 10 == 0:
                        # exceptional shift breaks cycles near defective clusters
                        t += x
                        for i in range(1, nn + 1):
                            a[i][i] -= x
                        s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                        y = x = 0.75 * s
                        w = -0.4375 * s * s
                    its += 1
                    total += 1
                    m = nn - 2
                    while True:
                        z = a[m][m]
                        r = x - z
                        s = y - z
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                        q = a[m + 1][m + 1] - z - r - s
                        r = a[m + 2][m + 1]
                        s = abs(p) + abs(q) + abs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                        v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                        if u + v == v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i][i - 2] = 0.0
                        if i != m + 2:
                            a[i][i - 3] = 0.0
                    for k in range(m, nn):
                        if k != m:
                            p = a[k][k - 1]
                            q = a[k + 1][k - 1]
                            r = a[k + 2][k - 1] if k != nn - 1 else 0.0
                            x = abs(p) + abs(q) + abs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = np.sqrt(p * p + q * q + r * r)
                        if p < 0:
                            s = -s
                        if s != 0.0:
                            if k == m:
                                if l != m:
                                    a[k][k - 1] = -a[k][k - 1]
                            else:
                                a[k][k - 1] = -s * x
                            p += s
                            x = p / s
                            y = q / s
                            z = r / s
                            q /= p
                            r /= p
                            for j in range(k, nn + 1):
                                p = a[k][j] + q * a[k + 1][j]
                                if k != nn - 1:
                                    p += r * a[k + 2][j]
                                    a[k + 2][j] -= p * z
                                a[k + 1][j] -= p * y
                                a[k][j] -= p * x
                            mmin = nn if nn < k + 3 else k + 3
                            for i in range(l, mmin + 1):
                                p = x * a[i][k] + y * a[i][k + 1]
                                if k != nn - 1:
                                    p += z * a[i][k + 2]
                                    a[i][k + 2] -= p * r
                                a[i][k + 1] -= p * q
                                a[i][k] -= p
            if not l < nn - 1:
                break
    return np.array(wr[1:]) + 1j * np.array(wi[1:]), total


def dense_eigen(A, method="lapack"):
    """Eigenvalues of a small real square matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_DIM:
        raise ValueError(f"matrix larger than {MAX_DIM}x{MAX_DIM}")
    if not np.all(np.isfinite(A)):
        raise ConvergenceError("matrix has non-finite entries")
    if method == "lapack":
        try:
            vals = np.linalg.eigvals(A)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
        return EigenResult(values=vals.astype(complex), method="lapack")
    if method == "qr":
        if A.shape[0] == 1:
            return EigenResult(values=A[0].astype(complex), method="qr")
        # unit scaling keeps the reflector norms clear of under/overflow
        s = float(np.max(np.abs(A)))
        if s == 0.0:
            return EigenResult(values=np.zeros(A.shape[0], complex), method="qr")
        vals, its = hqr(hessenberg(balance(A / s)))
        return EigenResult(values=vals * s, iterations=its, method="qr")
    raise ValueError(f"unknown method {method!r}")


def generalized_eigen(A, B, method="lapack", cond_limit=COND_LIMIT, inf_tol=INF_TOL):
    """Eigenvalues of the pencil det(A - lambda B) = 0.

    Infinite eigenvalues (B singular) are returned as ``inf`` and flagged in
    ``EigenResult.infinite``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError("pencil matrices must have the same shape")
    n = A.shape[0]
    if np.linalg.cond(B) < cond_limit:
        res = dense_eigen(np.linalg.solve(B, A), method)
        return EigenResult(values=res.values, iterations=res.iterations, method=res.method)

    na = np.linalg.norm(A, 1)
    nb = np.linalg.norm(B, 1)
    scale = na / nb if nb > 0 else 1.0
    best = None
    for c in _SHIFTS:
        sigma = c * scale
        S = A - sigma * B
        k = np.linalg.cond(S)
        if best is None or k < best[0]:
            best = (k, sigma, S)
        if k < 1e6:
            break
    k, sigma, S = best
    if not np.isfinite(k) or k > SINGULAR_COND:
        raise SingularPencilError(f"det(A - lambda B) vanishes for all trial shifts (cond {k:.3g})")
    res = dense_eigen(np.linalg.solve(S, B), method)
    mu = res.values
    mmax = np.max(np.abs(mu)) if n else 0.0
    infinite = np.abs(mu) <= inf_tol * mmax if mmax > 0 else np.ones(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(infinite, np.inf + 0j, sigma + 1.0 / np.where(infinite, 1.0, mu))
    return EigenResult(values=lam, infinite=infinite, iterations=res.iterations,
                       method=res.method, shift=float(sigma))
