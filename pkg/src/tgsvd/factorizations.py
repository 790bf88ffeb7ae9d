"""Facewise factorizations in the Fourier domain: t-QR, t-LU, t-SVD, pseudoinverse, inverse."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, RankOutOfRangeError, SingularTensorError
from .tensor_core import (
    as_tensor3,
    facewise,
    from_half_spectrum,
    half_count,
    half_spectrum,
    tprod,
    ttranspose,
)

EPS = np.finfo(np.float64).eps
PIVOT_TOL = 1e-14
INV_TOL = 1e-12


def normalize_phases(q):
    """Rotate each column so its largest-magnitude entry is real and nonnegative.

    Returns the rotated matrix and the unit phases ``phi`` with
    ``q == rotated * phi``.
    """
    q = np.asarray(q)
    if q.size == 0:
        return q, np.ones(q.shape[1], dtype=q.dtype)
    idx = np.argmax(np.abs(q), axis=0)
    lead = q[idx, np.arange(q.shape[1])]
    mag = np.abs(lead)
    phi = np.where(mag > 0, lead / np.where(mag > 0, mag, 1), 1).astype(q.dtype)
    return q * np.conj(phi), phi


@dataclass(frozen=True)
class TQrFactors:
    Q: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class TLuFactors:
    """``P_k @ Lhat_k == Lhat_k @ Uhat_k`` per Fourier slice, ``perms[k]`` giving the row order."""

    L: np.ndarray
    U: np.ndarray
    perms: tuple
    singular_slices: tuple = ()

    @property
    def singular(self):
        return bool(self.singular_slices)


@dataclass(frozen=True)
class TSvdFactors:
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    rank: int

    def reconstruct(self):
        return tprod(self.U, tprod(self.S, ttranspose(self.V)))


def _qr_slice(a):
    q, r = np.linalg.qr(a, mode="reduced")
    q, phi = normalize_phases(q)
    return q, phi[:, None] * r


def tqr(x):
    """Economy t-QR: ``x = Q * R`` with ``Q^T * Q = I``."""
    x = as_tensor3(x)
    n3 = x.shape[2]
    qh, rh = facewise(_qr_slice, half_spectrum(x), n3=n3)
    return TQrFactors(from_half_spectrum(qh, n3), from_half_spectrum(rh, n3))


def orthonormal_basis(x):
    """``Q`` factor of :func:`tqr` only."""
    x = as_tensor3(x)
    n3 = x.shape[2]
    (qh,) = facewise(lambda a: (_qr_slice(a)[0],), half_spectrum(x), n3=n3)
    return from_half_spectrum(qh, n3)


def tlu(x):
    """t-LU with partial (row) pivoting in every Fourier slice.

    Slices whose smallest pivot is below ``1e-14 * ||slice||`` are listed in
    ``singular_slices`` (full-spectrum indices); the factorization still returns.
    """
    x = as_tensor3(x)
    n1, n2, n3 = x.shape
    if n1 != n2:
        raise DimensionMismatchError(f"t-LU needs square frontal slices, got {x.shape}")
    h = half_count(n3)
    perms = []
    flagged = []

    def lu_slice(a):
        p, lower, upper = scipy.linalg.lu(a)
        perms.append(np.argmax(p, axis=0))
        pivots = np.abs(np.diag(upper))
        flagged.append(bool(pivots.min() < PIVOT_TOL * np.linalg.norm(a)))
        return lower, upper

    lh, uh = facewise(lu_slice, half_spectrum(x), n3=n3)
    full_perms = perms + [perms[n3 - k] for k in range(h, n3)]
    full_flags = flagged + [flagged[n3 - k] for k in range(h, n3)]
    return TLuFactors(
        from_half_spectrum(lh, n3),
        from_half_spectrum(uh, n3),
        tuple(full_perms),
        tuple(k for k, bad in enumerate(full_flags) if bad),
    )


def tsvd(x, rank):
    """Truncated t-SVD ``x ~ U * S * V^T`` of tubal rank ``rank``.

    Each Fourier slice is truncated to its leading ``rank`` singular triplets,
    giving the best tubal-rank-``rank`` approximation in the Frobenius norm.
    """
    x = as_tensor3(x)
    n1, n2, n3 = x.shape
    if not 1 <= rank <= min(n1, n2):
        raise RankOutOfRangeError(f"rank {rank} outside [1, {min(n1, n2)}]")

    def svd_slice(a):
        u, s, vh = np.linalg.svd(a, full_matrices=False)
        u, phi = normalize_phases(u[:, :rank])
        v = vh[:rank].conj().T * np.conj(phi)
        return u, np.diag(s[:rank]), v

    uh, sh, vh = facewise(svd_slice, half_spectrum(x), n3=n3)
    # singular values are real, so the mirrored S slices need no conjugation
    return TSvdFactors(
        from_half_spectrum(uh, n3), from_half_spectrum(sh, n3), from_half_spectrum(vh, n3), rank
    )


def tpinv(x):
    """Moore-Penrose pseudoinverse, facewise ``pinv`` with cutoff ``max(I1, I2) * eps * sigma_1``."""
    x = as_tensor3(x)
    n1, n2, n3 = x.shape
    rcond = max(n1, n2) * EPS
    (ph,) = facewise(lambda a: (np.linalg.pinv(a, rcond=rcond),), half_spectrum(x), n3=n3)
    return from_half_spectrum(ph, n3)


def tinv(x):
    """Inverse of a square tensor; raises :class:`SingularTensorError` naming the bad slice."""
    x = as_tensor3(x)
    n1, n2, n3 = x.shape
    if n1 != n2:
        raise DimensionMismatchError(f"inverse needs square frontal slices, got {x.shape}")
    xh = half_spectrum(x)
    for k in range(len(xh)):
        s = np.linalg.svd(xh[k], compute_uv=False)
        if s[0] == 0 or s[-1] <= INV_TOL * s[0]:
            raise SingularTensorError(k)
    (ih,) = facewise(lambda a: (np.linalg.inv(a),), xh, n3=n3)
    return from_half_spectrum(ih, n3)


def tubal_rank(x, tol=None):
    """Largest numerical rank over the Fourier slices.

    A singular value counts when it exceeds ``tol * sigma_max`` of its slice;
    ``tol`` defaults to ``max(I1, I2) * eps``.
    """
    x = as_tensor3(x)
    n1, n2, _ = x.shape
    if tol is None:
        tol = max(n1, n2) * EPS
    best = 0
    for a in half_spectrum(x):
        s = np.linalg.svd(a, compute_uv=False)
        if s[0] > 0:
            best = max(best, int(np.sum(s > tol * s[0])))
    return best
