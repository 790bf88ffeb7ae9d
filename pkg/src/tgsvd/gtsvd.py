"""Generalized t-SVD of a tensor pair, deterministic and randomized.

All three algorithms return ``X = U * C * Z`` and ``Y = V * S * Z`` with one
shared ``Z``.  They run facewise on the first ``half_count(I3)`` Fourier
slices; the remaining slices follow by conjugate symmetry (C and S are real
in every slice, so their mirror is a plain copy).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .factorizations import _qr_slice
from .gsvd_matrix import gsvd, power_sketch, randomized_gsvd
from .sketch import SketchConfig, gaussian
from .tensor_core import (
    as_tensor3,
    facewise,
    frobenius_norm,
    from_half_spectrum,
    half_count,
    half_spectrum,
)


@dataclass(frozen=True)
class GtsvdFactors:
    U: np.ndarray
    C: np.ndarray
    Z: np.ndarray
    V: np.ndarray
    S: np.ndarray
    alphas: tuple = ()
    betas: tuple = ()

    def reconstruct(self):
        """``(U * C * Z, V * S * Z)``."""
        n3 = self.Z.shape[2]
        zh = half_spectrum(self.Z)
        x = half_spectrum(self.U) @ (half_spectrum(self.C) @ zh)
        y = half_spectrum(self.V) @ (half_spectrum(self.S) @ zh)
        return from_half_spectrum(x, n3), from_half_spectrum(y, n3)


def _check_pair(x, y):
    x = as_tensor3(x, "X")
    y = as_tensor3(y, "Y")
    if x.shape[1] != y.shape[1] or x.shape[2] != y.shape[2]:
        raise DimensionMismatchError(f"X {x.shape} and Y {y.shape} must share modes 2 and 3")
    return x, y


def _assemble(outputs, n3, spectra):
    uh, vh, zh, ch, sh = outputs
    return GtsvdFactors(
        U=from_half_spectrum(uh, n3),
        C=from_half_spectrum(ch, n3),
        Z=from_half_spectrum(zh, n3),
        V=from_half_spectrum(vh, n3),
        S=from_half_spectrum(sh, n3),
        alphas=tuple(a for a, _ in spectra),
        betas=tuple(b for _, b in spectra),
    )


def _facewise_gsvd(xh, yh, n3, factor):
    spectra = []

    def kernel(*mats):
        f = factor(*mats)
        spectra.append((f.alphas, f.betas))
        return f.U, f.V, f.Z, f.C, f.S

    return _assemble(facewise(kernel, xh, yh, n3=n3), n3, spectra)


def gtsvd(x, y):
    """Deterministic GTSVD: a full GSVD of every factored Fourier slice pair.

    ``U`` is ``I1 x I1 x I3``, ``V`` is ``I4 x I4 x I3`` and ``Z`` is
    ``I2 x I2 x I3``.
    """
    x, y = _check_pair(x, y)
    return _facewise_gsvd(half_spectrum(x), half_spectrum(y), x.shape[2], gsvd)


def rgtsvd_slicewise(x, y, cfg: SketchConfig):
    """Randomized GTSVD I: a sketched GSVD of every factored Fourier slice pair.

    Slice ``k`` draws its Gaussian test matrices from the child stream
    ``(cfg.seed, k)``; mirrored slices reuse the conjugate factors.
    """
    x, y = _check_pair(x, y)
    n1, n2, n3 = x.shape
    cfg.check(n1, n2, y.shape[0])
    rngs = iter([cfg.rng(k) for k in range(half_count(n3))])
    return _facewise_gsvd(
        half_spectrum(x), half_spectrum(y), n3, lambda a, b: randomized_gsvd(a, b, cfg, rng=next(rngs))
    )


def draw_test_tensors(cfg, n2, n3):
    """Standard Gaussian tensors ``Omega1`` (n2 x (r1+p1) x n3) and ``Omega2``, drawn in the spatial domain."""
    rng = cfg.rng()
    return gaussian(rng, n2, cfg.width1, n3), gaussian(rng, n2, cfg.width2, n3)


def rgtsvd_projection(x, y, cfg: SketchConfig, omegas=None):
    """Randomized GTSVD II: project both tensors onto t-orthonormal sketch bases, then factor the pair.

    With ``W1 = X * Omega1`` (or its power-iterated version), ``Q1`` the
    t-QR basis of ``W1`` and likewise for Y, the small pair
    ``(Q1^T * X, Q2^T * Y)`` gets one joint GTSVD, and ``U = Q1 * Uhat``,
    ``V = Q2 * Vhat``.  Every step is a facewise product or factorization,
    so the whole pipeline is evaluated slice by slice in the Fourier domain
    with a single transform of each input.

    ``omegas`` overrides the seeded Gaussian test tensors.
    """
    x, y = _check_pair(x, y)
    n1, n2, n3 = x.shape
    cfg.check(n1, n2, y.shape[0])
    om1, om2 = omegas if omegas is not None else draw_test_tensors(cfg, n2, n3)
    om1 = as_tensor3(om1, "Omega1")
    om2 = as_tensor3(om2, "Omega2")
    if om1.shape[0] != n2 or om2.shape[0] != n2 or om1.shape[2] != n3 or om2.shape[2] != n3:
        raise DimensionMismatchError(f"test tensors {om1.shape}, {om2.shape} do not fit I2={n2}, I3={n3}")

    spectra = []

    def kernel(a, b, o1, o2):
        q1 = _qr_slice(power_sketch(a, o1, cfg.q))[0]
        q2 = _qr_slice(power_sketch(b, o2, cfg.q))[0]
        f = gsvd(q1.conj().T @ a, q2.conj().T @ b)
        spectra.append((f.alphas, f.betas))
        return q1 @ f.U, q2 @ f.V, f.Z, f.C, f.S

    outputs = facewise(
        kernel, half_spectrum(x), half_spectrum(y), half_spectrum(om1), half_spectrum(om2), n3=n3
    )
    return _assemble(outputs, n3, spectra)


def power_iterate_sketch(a, omega, q=0):
    """``(A * A^T)^q * A * Omega``, re-orthonormalized by t-QR after every t-product.

    The result has the same t-range as the unstabilized product; ``q == 0``
    gives exactly ``A * Omega``.
    """
    a = as_tensor3(a, "A")
    omega = as_tensor3(omega, "Omega")
    if a.shape[1] != omega.shape[0] or a.shape[2] != omega.shape[2]:
        raise DimensionMismatchError(f"cannot sketch {a.shape} with {omega.shape}")
    if q < 0:
        raise ValueError("q must be nonnegative")
    n3 = a.shape[2]
    (wh,) = facewise(lambda m, o: (power_sketch(m, o, q),), half_spectrum(a), half_spectrum(omega), n3=n3)
    return from_half_spectrum(wh, n3)


def relative_error(x, y, f):
    """``(||X - U*C*Z|| + ||Y - V*S*Z||) / (||X|| + ||Y||)`` in the Frobenius norm."""
    x, y = _check_pair(x, y)
    xr, yr = f.reconstruct()
    return (frobenius_norm(x - xr) + frobenius_norm(y - yr)) / (frobenius_norm(x) + frobenius_norm(y))


ALGORITHMS = {
    "det": lambda x, y, cfg: gtsvd(x, y),
    "rand1": rgtsvd_slicewise,
    "rand2": rgtsvd_projection,
}
