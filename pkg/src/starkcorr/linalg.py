"""Small dense Hermitian kernels (dimension <= 4).

Eigenvalues come from cyclic complex Jacobi rotations written in plain
Python; for 4x4 matrices this beats per-call numpy overhead and keeps the
oracles free of LAPACK.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10

_MAX_SWEEPS = 60


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


def as_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``h`` as a complex array after checking it is Hermitian."""
    a = np.asarray(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
    if not 1 <= a.shape[0] <= 4:
        raise NotHermitianError(f"dimension {a.shape[0]} outside 1..4")
    if not np.all(np.isfinite(a)):
        raise NotHermitianError("matrix has non-finite entries")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol:
        raise NotHermitianError("matrix is not Hermitian")
    if np.max(np.abs(a.diagonal().imag), initial=0.0) > tol:
        raise NotHermitianError("diagonal is not real")
    return a


def _jacobi(a: np.ndarray, want_vectors: bool):
    n = a.shape[0]
    # symmetrise so round-off in the input cannot leak into the rotations
    m = (0.5 * (a + a.conj().T)).tolist()
    for i in range(n):
        m[i][i] = complex(m[i][i].real, 0.0)
    v = np.eye(n, dtype=complex).tolist() if want_vectors else None

    scale = math.sqrt(sum(abs(x) ** 2 for row in m for x in row))
    for _ in range(_MAX_SWEEPS):
        off = sum(abs(m[p][q]) ** 2 for p in range(n) for q in range(p + 1, n))
        if off <= (1e-32 * scale * scale) or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                app = m[p][p].real
                aqq = m[q][q].real
                phase = apq / mag
                zeta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(zeta) + math.sqrt(zeta * zeta + 1.0))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # U restricted to (p, q): [[c, s], [-s*conj(e), c*conj(e)]]
                u_qp = -s * phase.conjugate()
                u_qq = c * phase.conjugate()
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = m[k][p]
                    akq = m[k][q]
                    new_kp = akp * c + akq * u_qp
                    new_kq = akp * s + akq * u_qq
                    m[k][p] = new_kp
                    m[k][q] = new_kq
                    m[p][k] = new_kp.conjugate()
                    m[q][k] = new_kq.conjugate()
                m[p][p] = complex(app - t * mag, 0.0)
                m[q][q] = complex(aqq + t * mag, 0.0)
                m[p][q] = 0j
                m[q][p] = 0j
                if v is not None:
                    for k in range(n):
                        vkp = v[k][p]
                        vkq = v[k][q]
                        v[k][p] = vkp * c + vkq * u_qp
                        v[k][q] = vkp * s + vkq * u_qq
    values = [m[i][i].real for i in range(n)]
    return values, v


def hermitian_eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small Hermitian matrix.

    Returns eigenvalues sorted descending and the matching eigenvectors as
    columns. Ties keep the order in which the rotations left them.
    """
    a = as_hermitian(h)
    values, vectors = _jacobi(a, want_vectors=True)
    order = sorted(range(len(values)), key=lambda i: -values[i])
    vals = np.array([values[i] for i in order])
    vecs = np.array(vectors, dtype=complex)[:, order]
    return vals, vecs


def hermitian_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    a = as_hermitian(h)
    values, _ = _jacobi(a, want_vectors=False)
    return np.array(sorted(values, reverse=True))


def psd_sqrt(rho) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues of magnitude at most 1e-10 are treated as round-off and set
    to zero, so rank-deficient states keep an exactly rank-deficient root.
    Anything below -1e-10 raises :class:`NotPSDError`.
    """
    vals, vecs = hermitian_eigh(rho)
    if vals[-1] < -PSD_CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {vals[-1]:.3e} < -{PSD_CLAMP}")
    vals = np.where(np.abs(vals) <= PSD_CLAMP, 0.0, vals)
    roots = np.sqrt(vals)
    s = (vecs * roots) @ vecs.conj().T
    return 0.5 * (s + s.conj().T)


def trace_norm(h) -> float:
    """Schatten-1 norm of a Hermitian matrix (sum of |eigenvalues|)."""
    return float(np.sum(np.abs(hermitian_eigenvalues(h))))


def singular_values(a) -> np.ndarray:
    """Singular values of a small square matrix, descending.

    One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
    orthogonal, then their norms are read off. Zero singular values come out
    at the round-off level of ``a`` itself rather than its square root, which
    is the point of not going through ``a^H a``.
    """
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] > 4:
        raise ValueError(f"expected a square matrix of size <= 4, got {m.shape}")
    n = m.shape[1]
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp, cq = m[:, p], m[:, q]
                alpha = float(np.vdot(cp, cp).real)
                beta = float(np.vdot(cq, cq).real)
                gamma = complex(np.vdot(cp, cq))
                mag = abs(gamma)
                if mag == 0.0 or mag <= 1e-15 * math.sqrt(alpha * beta):
                    continue
                rotated = True
                phase = gamma / mag
                zeta = (beta - alpha) / (2.0 * mag)
                t = 1.0 / (abs(zeta) + math.sqrt(zeta * zeta + 1.0))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                new_p = c * cp - s * phase.conjugate() * cq
                new_q = s * cp + c * phase.conjugate() * cq
                m[:, p] = new_p
                m[:, q] = new_q
        if not rotated:
            break
    return np.sort(np.linalg.norm(m, axis=0))[::-1]
