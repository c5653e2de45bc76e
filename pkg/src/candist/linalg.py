"""Dense complex linear algebra for small multipartite operators.

Everything here works on plain ``numpy`` arrays of ``complex128``.  Operators
acting on a tensor-product space carry their subsystem structure as an
explicit ``dims`` argument (a tuple of local dimensions whose product is the
matrix size); the matrices involved are tiny (at most ~64x64), so all
routines are direct dense algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

HERM_ATOL = 1e-12
EIG_RESIDUAL_ATOL = 1e-10


def as_complex(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(a).T


def is_hermitian(a: np.ndarray, atol: float = HERM_ATOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a))) < atol


def require_hermitian(a: np.ndarray, atol: float = HERM_ATOL, what: str = "matrix") -> np.ndarray:
    a = as_complex(a)
    if not is_hermitian(a, atol):
        dev = np.max(np.abs(a - dagger(a))) if a.ndim == 2 and a.shape[0] == a.shape[1] else np.inf
        raise ValueError(f"{what} is not Hermitian (max deviation {dev:.3g}, tolerance {atol:g})")
    return a


def check_dims(dims: Sequence[int], dim: int) -> tuple[int, ...]:
    """Validate that subsystem dimensions multiply up to the matrix size."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != dim:
        raise ValueError(f"subsystem dimensions {dims} do not factor dimension {dim}")
    return dims


def kron(*ops: np.ndarray) -> np.ndarray:
    """Tensor product of one or more operators, in the given order."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    out = as_complex(ops[0])
    for op in ops[1:]:
        out = np.kron(out, as_complex(op))
    return out


@dataclass(frozen=True)
class Spectrum:
    """Full eigensystem of a Hermitian matrix.

    ``values`` are real and ascending; ``vectors`` holds the corresponding
    orthonormal eigenvectors as columns, so ``vectors @ diag(values) @
    vectors.conj().T`` reconstructs the input.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def lo(self) -> float:
        return float(self.values[0])

    @property
    def hi(self) -> float:
        return float(self.values[-1])


def hermitian_eig(a: np.ndarray) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``ValueError`` for non-Hermitian input.  The reconstruction
    residual is guaranteed below ``EIG_RESIDUAL_ATOL`` for the matrix sizes
    used here; a defensive check enforces it.
    """
    a = require_hermitian(a)
    values, vectors = np.linalg.eigh(a)
    residual = np.max(np.abs(vectors @ np.diag(values) @ dagger(vectors) - a))
    if residual > EIG_RESIDUAL_ATOL * max(1.0, np.max(np.abs(a))):
        raise ArithmeticError(f"eigendecomposition residual {residual:.3g} too large")
    return Spectrum(values=values, vectors=vectors)


def partial_transpose(mat: np.ndarray, sys: int | Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Transpose the given tensor factor(s) of an operator.

    Parameters
    ----------
    mat : square operator on the tensor-product space
    sys : index (or indices) of the subsystem(s) to transpose, 0-based
    dims : local dimensions of the tensor factors
    """
    mat = as_complex(mat)
    dims = check_dims(dims, mat.shape[0])
    n = len(dims)
    systems = (sys,) if isinstance(sys, (int, np.integer)) else tuple(sys)
    for s in systems:
        if not 0 <= s < n:
            raise ValueError(f"subsystem index {s} out of range for dims {dims}")
    t = mat.reshape(dims + dims)
    axes = list(range(2 * n))
    for s in systems:
        axes[s], axes[n + s] = axes[n + s], axes[s]
    return t.transpose(axes).reshape(mat.shape)


def partial_trace(mat: np.ndarray, keep: Iterable[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out all subsystems not in ``keep``; kept order is preserved."""
    mat = as_complex(mat)
    dims = check_dims(dims, mat.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for dims {dims}")
    t = mat.reshape(dims + dims)
    # contract row/column axis pairs of the traced subsystems
    row = list(range(n))
    col = list(range(n, 2 * n))
    for s in range(n):
        if s not in keep:
            col[s] = row[s]
    out_axes = [row[k] for k in keep] + [col[k] for k in keep]
    t = np.einsum(t, row + col, out_axes)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed unitary on ``C^d``.

    Complex Ginibre matrix, QR orthonormalization, and a diagonal phase fix
    so that the resulting distribution is exactly Haar.
    """
    return haar_unitaries(d, 1, rng)[0]


def haar_unitaries(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of ``n`` independent Haar unitaries, shape ``(n, d, d)``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    q, r = np.linalg.qr(z)
    diag = np.einsum("nii->ni", r)
    q *= (diag / np.abs(diag))[:, None, :]
    return q


def spectral_function(a: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real function to a Hermitian matrix through its eigenbasis."""
    spec = hermitian_eig(a)
    fvals = np.asarray(f(spec.values), dtype=np.float64)
    return (spec.vectors * fvals) @ dagger(spec.vectors)
