"""State constructors and seeded samplers.

Pure states are stored as amplitude vectors, mixed states as density
matrices; both carry their subsystem dimensions.  Samplers draw from Haar
measure (pure states), the induced measure at fixed rank (mixed states), or
coefficient measures for the three-qubit entanglement classes.  Batched
sampling paths return raw arrays and are the backbone of the Monte Carlo
estimators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamiltonians import SIGMA_X, SIGMA_Y, SIGMA_Z, ModelSpec, build
from .linalg import check_dims, kron, spectral_function

TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
#: threshold below which a Schmidt coefficient counts as zero
RANK_ATOL = 1e-12


@dataclass(frozen=True)
class QuantumState:
    """A pure amplitude vector or a density matrix with subsystem dims."""

    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.complex128)
        dims = check_dims(self.dims, data.shape[0])
        if data.ndim == 1:
            norm = float(np.linalg.norm(data))
            if abs(norm - 1.0) > TRACE_ATOL:
                raise ValueError(f"pure state norm {norm!r} is not 1")
        elif data.ndim == 2 and data.shape[0] == data.shape[1]:
            tr = complex(np.trace(data))
            if abs(tr - 1.0) > TRACE_ATOL:
                raise ValueError(f"density matrix trace {tr!r} is not 1")
            if np.max(np.abs(data - data.conj().T)) > 1e-12:
                raise ValueError("density matrix is not Hermitian")
            w_min = float(np.linalg.eigvalsh(data)[0])
            if w_min < -PSD_ATOL:
                raise ValueError(f"density matrix has negative eigenvalue {w_min:.3g}")
        else:
            raise ValueError(f"state data has invalid shape {data.shape}")
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def density(self) -> np.ndarray:
        """Density-matrix form, regardless of representation."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return np.asarray(self.data)


def target_state(name: str, d: int = 2) -> QuantumState:
    """Named distillation targets: psi_minus, phi (d-level), ghz3, w3."""
    if name == "psi_minus":
        vec = np.zeros(4, dtype=np.complex128)
        vec[1], vec[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
        return QuantumState(vec, (2, 2))
    if name == "phi":
        vec = np.eye(d, dtype=np.complex128).ravel() / np.sqrt(d)
        return QuantumState(vec, (d, d))
    if name == "ghz3":
        vec = np.zeros(8, dtype=np.complex128)
        vec[0] = vec[7] = 1 / np.sqrt(2)
        return QuantumState(vec, (2, 2, 2))
    if name == "w3":
        vec = np.zeros(8, dtype=np.complex128)
        vec[1] = vec[2] = vec[4] = 1 / np.sqrt(3)
        return QuantumState(vec, (2, 2, 2))
    raise ValueError(f"unknown target state {name!r}")


def _ginibre(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure_batch(dims: Sequence[int], rng: np.random.Generator, n: int) -> np.ndarray:
    d = int(np.prod(dims))
    vec = _ginibre(rng, (n, d))
    vec /= np.linalg.norm(vec, axis=1)[:, None]
    return vec


def random_pure(dims: Sequence[int], rng: np.random.Generator) -> QuantumState:
    """Haar-distributed pure state on the given tensor-product space."""
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValueError("every local dimension must be at least 2")
    return QuantumState(random_pure_batch(dims, rng, 1)[0], dims)


def random_mixed_batch(
    dims: Sequence[int], rank: int, rng: np.random.Generator, n: int
) -> np.ndarray:
    d = int(np.prod(dims))
    g = _ginibre(rng, (n, d, rank))
    rho = np.einsum("nir,njr->nij", g, g.conj())
    tr = np.einsum("nii->n", rho).real
    return rho / tr[:, None, None]


def random_mixed(dims: Sequence[int], rank: int, rng: np.random.Generator) -> QuantumState:
    """Induced-measure mixed state of the requested rank.

    Equivalent to drawing a Haar pure state on system x rank-dimensional
    ancilla and tracing the ancilla out; the result almost surely has the
    requested rank.
    """
    dims = tuple(int(d) for d in dims)
    d = int(np.prod(dims))
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    return QuantumState(random_mixed_batch(dims, rank, rng, 1)[0], dims)


def bell_basis_eigenvalues(cxx: float, cyy: float, czz: float) -> np.ndarray:
    """Eigenvalues of the correlation-diagonal two-qubit state, Bell basis."""
    return np.array(
        [
            (1 + cxx - cyy + czz) / 4,
            (1 - cxx + cyy + czz) / 4,
            (1 + cxx + cyy - czz) / 4,
            (1 - cxx - cyy - czz) / 4,
        ]
    )


def bell_diagonal(cxx: float, cyy: float, czz: float) -> QuantumState:
    """Two-qubit state with correlation matrix diag(cxx, cyy, czz).

    Rejects correlator triples outside the physical tetrahedron, reporting
    the offending eigenvalue.
    """
    for name, c in (("cxx", cxx), ("cyy", cyy), ("czz", czz)):
        if abs(c) > 1:
            raise ValueError(f"|{name}| must be at most 1, got {c}")
    w = bell_basis_eigenvalues(cxx, cyy, czz)
    if w.min() < -1e-14:
        raise ValueError(
            f"correlators ({cxx}, {cyy}, {czz}) give a negative eigenvalue {w.min():.6g}"
        )
    rho = (
        np.eye(4, dtype=np.complex128)
        + cxx * kron(SIGMA_X, SIGMA_X)
        + cyy * kron(SIGMA_Y, SIGMA_Y)
        + czz * kron(SIGMA_Z, SIGMA_Z)
    ) / 4
    return QuantumState(rho, (2, 2))


def magnetized_matrix(
    cxx: float, cyy: float, czz: float, m1: float, m2: float
) -> np.ndarray:
    """Raw (possibly unphysical) correlation + z-magnetization matrix."""
    eye = np.eye(2, dtype=np.complex128)
    return (
        np.eye(4, dtype=np.complex128)
        + cxx * kron(SIGMA_X, SIGMA_X)
        + cyy * kron(SIGMA_Y, SIGMA_Y)
        + czz * kron(SIGMA_Z, SIGMA_Z)
        + m1 * kron(SIGMA_Z, eye)
        + m2 * kron(eye, SIGMA_Z)
    ) / 4


def magnetized_state(cxx: float, cyy: float, czz: float, m1: float, m2: float) -> QuantumState:
    """Correlation-diagonal two-qubit state with local z-magnetizations."""
    for name, v in (("cxx", cxx), ("cyy", cyy), ("czz", czz), ("m1", m1), ("m2", m2)):
        if abs(v) > 1:
            raise ValueError(f"|{name}| must be at most 1, got {v}")
    rho = magnetized_matrix(cxx, cyy, czz, m1, m2)
    w_min = float(np.linalg.eigvalsh(rho)[0])
    if w_min < -1e-12:
        raise ValueError(
            f"parameters ({cxx}, {cyy}, {czz}, {m1}, {m2}) give a negative "
            f"eigenvalue {w_min:.6g}"
        )
    return QuantumState(rho, (2, 2))


def thermal_state(spec: ModelSpec, beta: float) -> QuantumState:
    """Gibbs state exp(-beta * H) / Z of the model, beta in units of 1/J."""
    if not (np.isfinite(beta) and beta >= 0):
        raise ValueError(f"beta must be finite and nonnegative, got {beta}")
    h = build(spec)
    # shift by the ground energy so the exponentials never overflow
    shift = float(np.linalg.eigvalsh(h)[0])
    boltz = spectral_function(h, lambda w: np.exp(-beta * (w - shift)))
    rho = boltz / np.trace(boltz).real
    return QuantumState(rho, spec.dims)


_E000 = np.zeros(8, dtype=np.complex128)
_E000[0] = 1.0


def ghz_class_batch(rng: np.random.Generator, n: int) -> np.ndarray:
    """Batched GHZ-class samples: a1|000> + a2|phi1 phi2 phi3>, normalized.

    Coefficients are complex Gaussian and each single-qubit factor is an
    independent Haar state.  Degenerate draws with vanishing norm are
    redrawn.
    """
    out = np.empty((n, 8), dtype=np.complex128)
    todo = np.arange(n)
    while todo.size:
        m = todo.size
        a = _ginibre(rng, (m, 2))
        phi = _ginibre(rng, (m, 3, 2))
        phi /= np.linalg.norm(phi, axis=2)[:, :, None]
        prod = np.einsum("na,nb,nc->nabc", phi[:, 0], phi[:, 1], phi[:, 2]).reshape(m, 8)
        vec = a[:, 0, None] * _E000[None, :] + a[:, 1, None] * prod
        norm = np.linalg.norm(vec, axis=1)
        ok = norm > 1e-8
        out[todo[ok]] = vec[ok] / norm[ok, None]
        todo = todo[~ok]
    return out


def ghz_class_sample(rng: np.random.Generator) -> QuantumState:
    return QuantumState(ghz_class_batch(rng, 1)[0], (2, 2, 2))


#: computational-basis slots of |001>, |010>, |100>, |000>
_W_SLOTS = (1, 2, 4, 0)


def w_class_batch(rng: np.random.Generator, n: int) -> np.ndarray:
    """Batched W-class samples: a|001> + b|010> + c|100> + d|000>."""
    coeff = _ginibre(rng, (n, 4))
    coeff /= np.linalg.norm(coeff, axis=1)[:, None]
    out = np.zeros((n, 8), dtype=np.complex128)
    out[:, list(_W_SLOTS)] = coeff
    return out


def w_class_sample(rng: np.random.Generator) -> QuantumState:
    return QuantumState(w_class_batch(rng, 1)[0], (2, 2, 2))


@dataclass(frozen=True)
class StateSampler:
    """A reproducible sampling family over quantum states.

    ``family`` is one of ``pure``, ``mixed`` (induced measure at ``rank``),
    ``ghz_class`` or ``w_class``.  The sampler itself is a value object;
    randomness always comes from the generator handed to ``sample`` /
    ``sample_batch``, so identical generator states reproduce identical
    streams.
    """

    family: str
    dims: tuple[int, ...] = (2, 2)
    rank: int | None = None

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if self.family in ("ghz_class", "w_class"):
            if dims == (2, 2):  # the bipartite default; these classes live on three qubits
                dims = (2, 2, 2)
            elif dims != (2, 2, 2):
                raise ValueError(f"{self.family} sampler is defined on three qubits")
        object.__setattr__(self, "dims", dims)
        if self.family not in ("pure", "mixed", "ghz_class", "w_class"):
            raise ValueError(f"unknown sampler family {self.family!r}")
        if self.family == "mixed":
            d = int(np.prod(dims))
            if self.rank is None or not 1 <= self.rank <= d:
                raise ValueError(f"mixed sampler needs a rank in [1, {d}]")

    @property
    def yields_pure(self) -> bool:
        return self.family != "mixed"

    def sample_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Array of n samples: (n, d) amplitudes or (n, d, d) densities."""
        if self.family == "pure":
            return random_pure_batch(self.dims, rng, n)
        if self.family == "mixed":
            assert self.rank is not None
            return random_mixed_batch(self.dims, self.rank, rng, n)
        if self.family == "ghz_class":
            return ghz_class_batch(rng, n)
        return w_class_batch(rng, n)

    def sample(self, rng: np.random.Generator) -> QuantumState:
        return QuantumState(self.sample_batch(rng, 1)[0], self.dims)

    def to_dict(self) -> dict:
        return {"family": self.family, "dims": list(self.dims), "rank": self.rank}

    @classmethod
    def from_dict(cls, data: dict) -> "StateSampler":
        return cls(
            family=data["family"],
            dims=tuple(data.get("dims", (2, 2))),
            rank=data.get("rank"),
        )
