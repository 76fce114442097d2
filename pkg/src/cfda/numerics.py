"""Shared numeric kernels: Hermitian solves, Dirichlet kernel, FFT convolution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.fft import fft, ifft, next_fast_len

HERMITIAN_RTOL = 1e-12
SOLVE_RTOL = 1e-10


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Raised when a covariance cannot be factored even after loading."""


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense complex Hermitian matrix.

    Construction checks ``max|A - A^H| <= 1e-12 * max|A|`` and stores the
    exactly symmetrized matrix.
    """

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        scale = np.max(np.abs(a)) if a.size else 0.0
        asym = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
        if asym > HERMITIAN_RTOL * max(scale, np.finfo(float).tiny):
            raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e}, scale {scale:.3e})")
        object.__setattr__(self, "data", 0.5 * (a + a.conj().T))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def solve(self, b, loading: float = 0.0) -> np.ndarray:
        return hermitian_solve(self.data, b, loading)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.data)


def hermitian_solve(A, b, loading: float = 0.0) -> np.ndarray:
    """Solve ``(A + loading*I) x = b`` for Hermitian positive-definite ``A``.

    ``b`` may be a vector or a matrix of right-hand sides (one per column).
    Raises NotPositiveDefiniteError if the Cholesky factorization fails or
    the backward error ``|r| / (|A| |x| + |b|)`` exceeds 1e-10. For
    well-conditioned systems this also bounds ``|r| / |b|``.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = A.shape[0]
    Al = A + loading * np.eye(n) if loading else A
    try:
        factor = scipy.linalg.cho_factor(Al, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "matrix is not positive definite; add diagonal loading "
            "(e.g. 1e-6 * trace(R) / dim)"
        ) from exc
    x = scipy.linalg.cho_solve(factor, b, check_finite=False)
    # one refinement step; then judge the normwise backward error, which
    # is what double precision can actually deliver for cond(A) >> 1e6
    x = x + scipy.linalg.cho_solve(factor, b - Al @ x, check_finite=False)
    resid = backward_error(Al, x, b)
    if not np.isfinite(resid) or resid > SOLVE_RTOL:
        raise NotPositiveDefiniteError(
            f"solve backward error {resid:.2e} exceeds {SOLVE_RTOL:.0e}; the matrix is "
            "too ill-conditioned, increase diagonal loading"
        )
    return x


def backward_error(A, x, b) -> float:
    """Normwise backward error ``|b - A x| / (|A|_F |x| + |b|)``."""
    r = np.linalg.norm(b - A @ x)
    scale = np.linalg.norm(A) * np.linalg.norm(x) + np.linalg.norm(b)
    return float(r / max(scale, np.finfo(float).tiny))


def default_loading(A) -> float:
    """Conventional loading level 1e-6 * tr(A) / dim."""
    A = np.asarray(A)
    return 1e-6 * float(np.real(np.trace(A))) / A.shape[0]


def dirichlet(n: int, x):
    """Dirichlet kernel ``sin(n*pi*x) / sin(pi*x)``.

    At integer ``x`` the removable singularity is replaced by its limit
    ``n * (+-1)**(x*(n-1))``, so the kernel is 1-periodic for odd ``n`` and
    antiperiodic-in-sign for even ``n``; ``|dirichlet|`` is always 1-periodic.
    """
    x = np.asarray(x, dtype=float)
    # evaluate on the offset from the nearest integer; sin(pi*x) loses digits near integers
    k = np.rint(x)
    r = x - k
    sign = np.where(np.mod(k * (n - 1), 2) == 0, 1.0, -1.0)
    den = np.sin(np.pi * r)
    near = np.abs(r) < 1e-12
    safe = np.where(near, 1.0, den)
    out = sign * np.where(near, n, np.sin(n * np.pi * r) / safe)
    return out if out.ndim else float(out)


def fft_convolve(a, b, axis: int = -1) -> np.ndarray:
    """Full linear convolution of ``a`` and ``b`` along ``axis`` via FFT.

    Leading dimensions broadcast, so a stack of signals can be filtered by one
    kernel or by a matching stack of kernels in a single call.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na, nb = a.shape[axis], b.shape[axis]
    if na == 0 or nb == 0:
        raise ValueError("cannot convolve empty signals")
    n_out = na + nb - 1
    nfft = next_fast_len(n_out)
    out = ifft(fft(a, nfft, axis=axis) * fft(b, nfft, axis=axis), axis=axis)
    return np.take(out, np.arange(n_out), axis=axis)


def db10(x):
    """10*log10 with a floor at the smallest positive double."""
    return 10.0 * np.log10(np.maximum(np.asarray(x, dtype=float), np.finfo(float).tiny))
