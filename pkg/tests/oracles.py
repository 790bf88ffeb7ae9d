"""Slow, independent reference implementations used to check the library."""

import numpy as np
import scipy.linalg


def naive_dft3(x):
    """Direct O(I3^2) DFT along mode 3, returned slice-first."""
    n1, n2, n3 = x.shape
    out = np.zeros((n3, n1, n2), dtype=complex)
    for k in range(n3):
        for t in range(n3):
            out[k] += x[:, :, t] * np.exp(-2j * np.pi * k * t / n3)
    return out


def circulant_tprod(x, y):
    """t-product by explicit block-circulant expansion."""
    n1, n2, n3 = x.shape
    n4 = y.shape[1]
    out = np.zeros((n1, n4, n3))
    for k in range(n3):
        for t in range(n3):
            out[:, :, k] += x[:, :, (k - t) % n3] @ y[:, :, t]
    return out


def full_spectrum_tprod(x, y):
    """t-product through all I3 Fourier slices with no symmetry shortcut."""
    xh = np.fft.fft(x, axis=2)
    yh = np.fft.fft(y, axis=2)
    zh = np.einsum("ijk,jlk->ilk", xh, yh)
    return np.fft.ifft(zh, axis=2).real


def pencil_eigenvalues(x, y):
    """Finite generalized eigenvalues of ``(X^H X, Y^H Y)``, sorted."""
    w = scipy.linalg.eigvals(x.conj().T @ x, y.conj().T @ y)
    w = np.real(w[np.isfinite(w)])
    return np.sort(w)


def slice_matrix(x, k):
    """Fourier slice ``k`` by direct summation."""
    return naive_dft3(x)[k]


def rand_tensor(rng, *shape):
    return rng.standard_normal(shape)


def low_rank_tensor(rng, n1, n2, n3, r):
    return circulant_tprod(rng.standard_normal((n1, r, n3)), rng.standard_normal((r, n2, n3)))


def complex_matrix(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def principal_angle_sines(a, b):
    """Sines of the principal angles between the column spaces of ``a`` and ``b``."""
    qa = scipy.linalg.orth(a)
    qb = scipy.linalg.orth(b)
    c = np.linalg.svd(qa.conj().T @ qb, compute_uv=False)
    return np.sqrt(np.clip(1 - c**2, 0, None))
