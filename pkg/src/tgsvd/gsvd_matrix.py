"""Generalized SVD of a matrix pair in Paige-Saunders form.

For ``X`` (I1 x n) and ``Y`` (I3 x n) the factorization is::

    X = U @ C @ Z,    Y = V @ S @ Z

with ``U``, ``V`` unitary, ``Z`` nonsingular, ``C = [Sigma_X, 0]`` and
``S = [Sigma_Y, 0]``.  If ``k`` is the numerical rank of ``[X; Y]``, the
``k`` cosines ``alphas`` sit at ``Sigma_X[i, i]`` and the sines ``betas`` at
``Sigma_Y[I3 - k + i, i]``, with ``alphas`` nonincreasing, ``betas``
nondecreasing and ``alphas**2 + betas**2 == 1``.

Complex input is supported throughout; every transpose is a conjugate
transpose.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    NotOrthonormalError,
    RankOutOfRangeError,
)
from .sketch import SketchConfig, gaussian

EPS = np.finfo(np.float64).eps
SQRT_HALF = np.sqrt(0.5)
ORTHONORMAL_TOL = 1e-10


def _as_matrix(a, name):
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64, copy=False)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return a


def _conj_t(a):
    return a.conj().T


def complement(q, n):
    """Orthonormal basis of the orthogonal complement of the columns of ``q`` in ``C^n``."""
    r = q.shape[1]
    if r == 0:
        return np.eye(n, dtype=q.dtype)
    if r >= n:
        return np.zeros((n, 0), dtype=q.dtype)
    full, _ = np.linalg.qr(q, mode="complete")
    return full[:, r:]


def sigma_x(alphas, rows):
    """``rows x k`` block with ``alphas[i]`` at ``(i, i)``."""
    k = len(alphas)
    out = np.zeros((rows, k))
    m = min(rows, k)
    out[np.arange(m), np.arange(m)] = alphas[:m]
    return out


def sigma_y(betas, rows):
    """``rows x k`` block with ``betas[i]`` at ``(rows - k + i, i)``."""
    k = len(betas)
    out = np.zeros((rows, k))
    cols = np.arange(max(0, k - rows), k)
    out[rows - k + cols, cols] = betas[cols]
    return out


@dataclass(frozen=True)
class CsPair:
    """``E11 = U @ Sigma_X @ W^H`` and ``E21 = V @ Sigma_Y @ W^H``."""

    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    c: int
    d: int

    @property
    def k(self):
        return len(self.alphas)


@dataclass(frozen=True)
class GsvdFactors:
    U: np.ndarray
    V: np.ndarray
    Z: np.ndarray
    C: np.ndarray
    S: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    c: int
    d: int
    k: int
    cond_Z: float

    def generalized_singular_values(self):
        """``alphas / betas``, ``inf`` where the sine vanishes."""
        with np.errstate(divide="ignore"):
            return np.where(self.betas > 0, self.alphas / np.where(self.betas > 0, self.betas, 1), np.inf)


@dataclass(frozen=True)
class GsvdPartition:
    """Row blocks of ``Z`` split at the target ranks ``r1`` (for X) and ``r2`` (for Y)."""

    Z1: np.ndarray
    Z2: np.ndarray
    Z3: np.ndarray
    Zhat1: np.ndarray
    Zhat2: np.ndarray
    r1: int
    r2: int


def _cs_core(a, b):
    """CS decomposition driven by an SVD of ``a``.

    Returns ``(ua, ub, w, av, bv)`` with ``a = ua @ sigma_x(av) @ w^H`` and
    ``b = ub @ sigma_y(bv) @ w^H``.  Directions with cosine above 1/sqrt(2)
    have small sines that a plain normalization of ``b @ w`` would get
    wrong, so their sines come from a second SVD on the complement of the
    well-determined ``b`` directions.
    """
    m, k = a.shape
    p = b.shape[0]
    ua, s, wh = np.linalg.svd(a, full_matrices=True)
    w = _conj_t(wh)
    av = np.zeros(k)
    av[: len(s)] = np.minimum(s, 1.0)
    bv = np.empty(k)
    j0 = int(np.sum(av > SQRT_HALF))

    t = b @ w
    big = t[:, j0:]
    vb = big / np.linalg.norm(big, axis=0)
    bv[j0:] = np.sqrt(1.0 - av[j0:] ** 2)

    vs = np.zeros((p, 0), dtype=vb.dtype)
    if j0:
        vc = complement(vb, p)
        small = _conj_t(vc) @ t[:, :j0]
        bs = np.zeros(j0)
        if small.shape[0]:
            up, sp, wph = np.linalg.svd(small, full_matrices=True)
            nsv = len(sp)
            bs[j0 - nsv:] = np.minimum(sp[::-1], 1.0)
            wp = _conj_t(wph)[:, ::-1]
            vs = vc @ up[:, :nsv][:, ::-1]
            w = w.astype(np.result_type(w, wp), copy=True)
            w[:, :j0] = w[:, :j0] @ wp
        rotated = a @ w[:, :j0]
        ua = ua.astype(np.result_type(ua, rotated), copy=True)
        ua[:, :j0] = rotated / np.linalg.norm(rotated, axis=0)
        av[:j0] = np.sqrt(1.0 - bs**2)
        bv[:j0] = bs

    dirs = np.hstack([vs, vb]) if vs.size or vb.size else np.zeros((p, 0), dtype=t.dtype)
    ub = np.hstack([complement(dirs, p), dirs])
    return ua, ub, w, av, bv


def _echelon_rotation(w):
    """Unitary ``g`` making ``w @ g`` lower trapezoidal with a positive leading entry per column."""
    g, r = np.linalg.qr(_conj_t(w), mode="complete")
    d = np.diagonal(r)
    phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    return g * np.conj(phase)


def _canonical_ties(w, ua, ub, av, bv, p):
    """Fix the free rotation inside exactly unit CS blocks.

    Directions with ``alpha == 1`` exactly (or ``beta == 1`` exactly) can be
    rotated together with their ``U`` (or ``V``) columns without changing
    either product.  Rotating them onto an echelon basis makes e.g. the
    ``E11 = I, E21 = 0`` case return ``U = W = I``.
    """
    k = len(av)
    unit_x = np.flatnonzero((av == 1.0) & (bv == 0.0))
    unit_y = np.flatnonzero((bv == 1.0) & (av == 0.0))
    if len(unit_x) > 1 or len(unit_y) > 1:
        w = w.copy()
        ua, ub = ua.copy(), ub.copy()
    if len(unit_x) > 1:
        g = _echelon_rotation(w[:, unit_x])
        w[:, unit_x] = w[:, unit_x] @ g
        ua = ua.astype(np.result_type(ua, g), copy=False)
        ua[:, unit_x] = ua[:, unit_x] @ g
    if len(unit_y) > 1 and np.all(unit_y >= k - p):
        g = _echelon_rotation(w[:, unit_y])
        w[:, unit_y] = w[:, unit_y] @ g
        cols = p - k + unit_y
        ub = ub.astype(np.result_type(ub, g), copy=False)
        ub[:, cols] = ub[:, cols] @ g
    return w, ua, ub


def cs_decomposition(e11, e21):
    """Joint cosine-sine decomposition of the two row blocks of a column-orthonormal matrix.

    The block with fewer rows is the one factored by SVD.  Block sizes use
    the threshold ``k * sqrt(eps)``: ``c`` counts unit cosines, ``d`` the
    strictly interior ones.
    """
    e11 = _as_matrix(e11, "E11")
    e21 = _as_matrix(e21, "E21")
    m, k = e11.shape
    p, k2 = e21.shape
    if k != k2:
        raise DimensionMismatchError(f"CS blocks have {k} and {k2} columns")
    stacked = np.vstack([e11, e21])
    gram_err = np.linalg.norm(_conj_t(stacked) @ stacked - np.eye(k))
    if gram_err > ORTHONORMAL_TOL * max(1.0, np.sqrt(k)):
        raise NotOrthonormalError(f"stacked CS blocks deviate from orthonormal by {gram_err:.3e}")

    if k == 0:
        dtype = stacked.dtype
        return CsPair(np.eye(m, dtype=dtype), np.eye(p, dtype=dtype), np.eye(0, dtype=dtype),
                      np.zeros(0), np.zeros(0), 0, 0)
    if p < m:
        ub, ua, w, bv, av = _cs_core(e21, e11)
        ua, ub, w = ua[:, ::-1], ub[:, ::-1], w[:, ::-1]
        av, bv = av[::-1].copy(), bv[::-1].copy()
    else:
        ua, ub, w, av, bv = _cs_core(e11, e21)

    w, ua, ub = _canonical_ties(w, ua, ub, av, bv, p)
    thresh = max(k, 1) * np.sqrt(EPS)
    c = int(np.sum(bv <= thresh))
    zero = int(np.sum(av <= thresh))
    return CsPair(ua, ub, w, av, bv, c, k - c - zero)


def stacked_svd(a):
    """Rank-truncated SVD ``a = e[:, :k] @ diag(gamma[:k]) @ vh[:k]`` with ``vh`` a full unitary ``n x n``.

    A column-pivoted QR of ``a^H`` first reveals the numerical rank, so the
    SVD only runs on the ``m x r`` compressed factor; the trailing columns
    of the QR's ``Q`` complete ``vh`` for free.  ``k`` counts singular
    values above ``max(m, n) * eps * gamma_1``.
    """
    m, n = a.shape
    tol = max(m, n) * EPS
    q, r, piv = scipy.linalg.qr(_conj_t(a), mode="full", pivoting=True, check_finite=False)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > tol * diag[0])) if diag.size and diag[0] > 0 else 0
    inv = np.empty_like(piv)
    inv[piv] = np.arange(len(piv))
    e, gamma, gh = np.linalg.svd(_conj_t(r[:rank])[inv], full_matrices=False)
    k = int(np.sum(gamma > tol * gamma[0])) if rank else 0
    vh = np.vstack([gh @ _conj_t(q[:, :rank]), _conj_t(q[:, rank:])])
    return e, gamma, vh, k


def gsvd(x, y):
    """Generalized SVD of ``(x, y)`` via an SVD of ``[x; y]`` and a CS decomposition.

    With ``[x; y] = E @ diag(gamma) @ Vh`` truncated to numerical rank ``k``
    (see :func:`stacked_svd`) and CS blocks ``E[:I1, :k] =
    U Sigma_X W^H``, ``E[I1:, :k] = V Sigma_Y W^H``, the right factor is
    ``Z = [W^H diag(gamma) Vh[:k]; Vh[k:]]``.  Its singular values are
    ``gamma`` and ones, so ``cond_Z`` needs no extra factorization.

    Examples
    --------
    >>> f = gsvd(np.eye(2), np.eye(2))
    >>> np.allclose(f.alphas, np.sqrt(0.5)) and np.allclose(f.betas, np.sqrt(0.5))
    True
    """
    x = _as_matrix(x, "X")
    y = _as_matrix(y, "Y")
    n1, n = x.shape
    n3, ny = y.shape
    if n != ny:
        raise DimensionMismatchError(f"X has {n} columns but Y has {ny}")
    e, gamma, vh, k = stacked_svd(np.vstack([x, y]))
    cs = cs_decomposition(e[:n1, :k], e[n1:, :k])
    z = np.vstack([(_conj_t(cs.W) * gamma[:k]) @ vh[:k], vh[k:]])

    c_mat = np.zeros((n1, n))
    c_mat[:, :k] = sigma_x(cs.alphas, n1)
    s_mat = np.zeros((n3, n))
    s_mat[:, :k] = sigma_y(cs.betas, n3)

    zsv = np.concatenate([gamma[:k], np.ones(n - k)])
    cond = float(zsv.max() / zsv.min()) if zsv.size and zsv.min() > 0 else np.inf
    return GsvdFactors(cs.U, cs.V, z, c_mat, s_mat, cs.alphas, cs.betas, cs.c, cs.d, k, cond)


def gsvd_reconstruct(f):
    return f.U @ f.C @ f.Z, f.V @ f.S @ f.Z


def power_sketch(a, omega, q=0):
    """``(a a^H)^q a omega`` up to a right factor, re-orthonormalizing after every product.

    The columns span the same space as the unstabilized product; for ``q == 0``
    the result is exactly ``a @ omega``.
    """
    w = a @ omega
    for _ in range(q):
        basis, _ = np.linalg.qr(w)
        g, _ = np.linalg.qr(_conj_t(a) @ basis)
        w = a @ g
    return w


def range_basis(a, omega, q=0):
    """Orthonormal basis for the range of :func:`power_sketch`."""
    basis, _ = np.linalg.qr(power_sketch(a, omega, q))
    return basis


def randomized_gsvd(x, y, cfg: SketchConfig, rng=None):
    """Sketched GSVD: project each matrix onto a Gaussian range estimate, then factor the small pair.

    ``Phi`` (n x (r1+p1)) and ``Psi`` (n x (r2+p2)) are drawn from ``rng``,
    or from the generator seeded by ``cfg.seed`` when ``rng`` is omitted.
    The returned ``U`` is ``I1 x (r1+p1)`` and ``V`` is ``I3 x (r2+p2)``; ``Z``
    is the full ``n x n`` right factor of the small problem, so
    ``U @ C @ Z = Q_X Q_X^H X``.
    """
    x = _as_matrix(x, "X")
    y = _as_matrix(y, "Y")
    n1, n = x.shape
    n3, ny = y.shape
    if n != ny:
        raise DimensionMismatchError(f"X has {n} columns but Y has {ny}")
    cfg.check(n1, n, n3)
    if rng is None:
        rng = cfg.rng()
    phi = gaussian(rng, n, cfg.width1)
    psi = gaussian(rng, n, cfg.width2)
    qx = range_basis(x, phi, cfg.q)
    qy = range_basis(y, psi, cfg.q)
    small = gsvd(_conj_t(qx) @ x, _conj_t(qy) @ y)
    return GsvdFactors(
        qx @ small.U,
        qy @ small.V,
        small.Z,
        small.C,
        small.S,
        small.alphas,
        small.betas,
        small.c,
        small.d,
        small.k,
        small.cond_Z,
    )


def partition_factors(f, r1, r2):
    if not 0 <= r1 <= f.k or not 0 <= r2 <= f.k:
        raise RankOutOfRangeError(f"r1 = {r1}, r2 = {r2} must lie in [0, k = {f.k}]")
    z, k = f.Z, f.k
    return GsvdPartition(z[:r1], z[r1:k], z[k:], z[: k - r2], z[k - r2:k], r1, r2)
