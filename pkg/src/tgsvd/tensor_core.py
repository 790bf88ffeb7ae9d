"""Third-order tensors under the tubal product.

A tensor is a real ``numpy`` array of shape ``(I1, I2, I3)``; frontal slice
``k`` is ``x[:, :, k]``.  In Fortran order this is the frontal-slice-major,
column-major-within-slice layout used by the T3F file format.

Frequency-domain stacks are kept slice-first, shape ``(I3, I1, I2)``, so that
``stack[k]`` is the ``k``-th Fourier slice and batched ``@`` works facewise.
All facewise algorithms factor only the first ``half_count(I3)`` slices and
recover the rest by conjugate mirroring.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonFiniteError, SymmetryViolationError

SYMMETRY_TOL = 1e-8
IMAG_RESIDUE_TOL = 1e-10
DEFAULT_TOL = 1e-10


def as_tensor3(x, name="x"):
    """Validate ``x`` as a finite real third-order tensor and return it as float64."""
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        raise TypeError(f"{name} must be real, got dtype {arr.dtype}")
    arr = arr.astype(np.float64, copy=False)
    if arr.ndim != 3:
        raise DimensionMismatchError(f"{name} must be third order, got shape {arr.shape}")
    if 0 in arr.shape:
        raise DimensionMismatchError(f"{name} has an empty mode: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def half_count(n3):
    """Number of Fourier slices that are actually factored, ``ceil((I3 + 1) / 2)``."""
    return (n3 + 2) // 2


def is_self_conjugate(k, n3):
    """True for the DC slice and, for even ``I3``, the Nyquist slice (0-based ``k``)."""
    return k == 0 or (n3 % 2 == 0 and k == n3 // 2)


@dataclass(frozen=True)
class FourierTensor3:
    """Mode-3 DFT of a tensor, stored as ``I3`` complex ``I1 x I2`` slices."""

    slices: np.ndarray
    origin_is_real: bool = True

    @property
    def dims(self):
        n3, n1, n2 = self.slices.shape
        return n1, n2, n3

    def symmetry_residual(self):
        """Frobenius norm of ``slice(k) - conj(slice(-k mod I3))`` over all ``k``."""
        n3 = self.slices.shape[0]
        rev = (-np.arange(n3)) % n3
        return float(np.linalg.norm(self.slices - np.conj(self.slices[rev])))


def dft_mode3(x):
    """Unnormalized DFT of every tube ``x[i, j, :]``."""
    x = as_tensor3(x)
    return FourierTensor3(np.ascontiguousarray(np.moveaxis(np.fft.fft(x, axis=2), 2, 0)), True)


def idft_mode3(xh):
    """Inverse of :func:`dft_mode3` (``1/I3`` normalization), returning a real tensor.

    Raises :class:`SymmetryViolationError` when a stack flagged as coming from
    a real tensor is not conjugate symmetric, or when the inverse carries an
    imaginary part above ``1e-10`` relative.
    """
    s = np.asarray(xh.slices)
    total = float(np.linalg.norm(s))
    if xh.origin_is_real:
        resid = xh.symmetry_residual()
        if resid > SYMMETRY_TOL * total:
            raise SymmetryViolationError(
                f"conjugate-symmetry residual {resid:.3e} exceeds {SYMMETRY_TOL:g} * {total:.3e}"
            )
    full = np.moveaxis(np.fft.ifft(s, axis=0), 0, 2)
    _check_imag(np.linalg.norm(full.imag), np.linalg.norm(full.real))
    return np.ascontiguousarray(full.real)


def _check_imag(imag_norm, real_norm):
    if imag_norm > IMAG_RESIDUE_TOL * real_norm:
        raise SymmetryViolationError(
            f"imaginary residue {imag_norm:.3e} after inverse DFT exceeds "
            f"{IMAG_RESIDUE_TOL:g} * {real_norm:.3e}"
        )


def half_spectrum(x):
    """First ``half_count(I3)`` Fourier slices of a real tensor, shape ``(h, I1, I2)``."""
    return np.ascontiguousarray(np.moveaxis(np.fft.rfft(x, axis=2), 2, 0))


def mirror_spectrum(half, n3, conjugate=True):
    """Complete a half spectrum to all ``I3`` slices: ``slice(k) = conj(slice(I3 - k))``."""
    half = np.asarray(half)
    h = half_count(n3)
    full = np.empty((n3,) + half.shape[1:], dtype=np.result_type(half.dtype, np.complex128))
    full[:h] = half[:h]
    for k in range(h, n3):
        full[k] = np.conj(full[n3 - k]) if conjugate else full[n3 - k]
    return full


def from_half_spectrum(half, n3):
    """Inverse DFT of a conjugate-symmetric spectrum given by its first half.

    The mirrored slices are implied (inverse real FFT).  The self-conjugate
    slices must be real; their imaginary part is the imaginary residue the
    full inverse would carry, and it is held to the same ``1e-10`` bound.
    """
    half = np.asarray(half)
    out = np.fft.irfft(np.moveaxis(half, 0, 2), n=n3, axis=2)
    imag = np.linalg.norm(half[0].imag) ** 2
    if n3 % 2 == 0 and n3 > 1:
        imag += np.linalg.norm(half[n3 // 2].imag) ** 2
    _check_imag(np.sqrt(imag / n3), np.linalg.norm(out))
    return np.ascontiguousarray(out)


def facewise(fn, *halves, n3):
    """Apply ``fn`` to each factored Fourier slice and stack its outputs.

    ``fn`` receives one matrix per input stack and returns a tuple of arrays
    with slice-independent shapes.  Self-conjugate slices are passed as real
    matrices so that their factors come out real.
    """
    h = half_count(n3)
    outputs = None
    for k in range(h):
        args = [s[k].real.copy() if is_self_conjugate(k, n3) else s[k] for s in halves]
        result = fn(*args)
        if outputs is None:
            outputs = tuple(np.empty((h,) + np.shape(r), dtype=np.complex128) for r in result)
        for out, r in zip(outputs, result):
            out[k] = r
    return outputs


def _check_tprod_dims(x, y):
    if x.shape[1] != y.shape[0] or x.shape[2] != y.shape[2]:
        raise DimensionMismatchError(f"cannot t-multiply {x.shape} by {y.shape}")


def tprod(x, y):
    """Tubal product ``x * y`` computed facewise in the Fourier domain."""
    x = as_tensor3(x, "x")
    y = as_tensor3(y, "y")
    _check_tprod_dims(x, y)
    return from_half_spectrum(half_spectrum(x) @ half_spectrum(y), x.shape[2])


def circ(x):
    """Block-circulant matrix of the frontal slices, ``(I1*I3) x (I2*I3)``."""
    n1, n2, n3 = x.shape
    out = np.empty((n1 * n3, n2 * n3), dtype=x.dtype)
    for a in range(n3):
        for b in range(n3):
            out[a * n1:(a + 1) * n1, b * n2:(b + 1) * n2] = x[:, :, (a - b) % n3]
    return out


def unfold(x):
    """Stack the frontal slices vertically, ``(I1*I3) x I2``."""
    return np.concatenate([x[:, :, k] for k in range(x.shape[2])], axis=0)


def fold(mat, n3):
    n1 = mat.shape[0] // n3
    return np.stack([mat[k * n1:(k + 1) * n1] for k in range(n3)], axis=2)


def tprod_circulant(x, y):
    """Reference t-product: ``fold(circ(x) @ unfold(y))``.  Slow; used as an oracle."""
    x = as_tensor3(x, "x")
    y = as_tensor3(y, "y")
    _check_tprod_dims(x, y)
    return fold(circ(x) @ unfold(y), x.shape[2])


def ttranspose(x):
    """Transpose every frontal slice and reverse the order of slices 2..I3."""
    x = np.asarray(x)
    order = [0] + list(range(x.shape[2] - 1, 0, -1))
    return np.ascontiguousarray(x[:, :, order].transpose(1, 0, 2))


def identity_tensor(n, n3):
    if n < 1 or n3 < 1:
        raise DimensionMismatchError(f"identity tensor needs positive sizes, got {n}, {n3}")
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def frobenius_norm(x):
    return float(np.linalg.norm(np.asarray(x).ravel()))


def is_f_diagonal(x, tol=DEFAULT_TOL):
    """True iff every off-diagonal entry of every frontal slice is at most ``tol * max(1, ||x||)``."""
    x = np.asarray(x)
    off = x.copy()
    m = min(x.shape[0], x.shape[1])
    idx = np.arange(m)
    off[idx, idx, :] = 0
    return bool(np.max(np.abs(off), initial=0.0) <= tol * max(1.0, frobenius_norm(x)))


def is_orthogonal(x, tol=DEFAULT_TOL):
    """True iff ``x^T * x`` and ``x * x^T`` are both the identity to ``tol * sqrt(n * I3)``."""
    x = as_tensor3(x)
    n, m, n3 = x.shape
    if n != m:
        raise DimensionMismatchError(f"orthogonality needs square frontal slices, got {x.shape}")
    eye = identity_tensor(n, n3)
    bound = tol * np.sqrt(n * n3)
    xt = ttranspose(x)
    return bool(
        frobenius_norm(tprod(xt, x) - eye) <= bound and frobenius_norm(tprod(x, xt) - eye) <= bound
    )


def has_orthonormal_columns(x, tol=DEFAULT_TOL):
    """True iff ``x^T * x`` is the identity, i.e. the lateral slices are t-orthonormal."""
    x = as_tensor3(x)
    n, m, n3 = x.shape
    return bool(frobenius_norm(tprod(ttranspose(x), x) - identity_tensor(m, n3)) <= tol * np.sqrt(m * n3))
