"""Spin-model Hamiltonians with an interaction + field decomposition.

Each model is built already divided by its coupling constant, so every matrix
returned here is dimensionless and decomposes as ``H = H_int + g * H_loc``
with ``g`` the field-to-coupling ratio.  Closed-form spectral bounds are
provided where the models admit them and are cross-checked against dense
eigensolves on construction.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .linalg import hermitian_eig, kron

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

FAMILIES = (
    "non_interacting",
    "minimal_interaction",
    "transverse_xy",
    "longitudinal_xy",
    "xxz",
    "bilinear_biquadratic",
    "ring_xy",
)

UNIT_NORM_ATOL = 1e-12
CROSS_CHECK_ATOL = 1e-10

Vec3 = tuple[float, float, float]


def spin_matrices(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators (Sx, Sy, Sz) for a spin-(d-1)/2 particle.

    For d = 2 these are the Pauli matrices over two, for d = 3 exactly the
    conventional spin-1 matrices (Sz = diag(1, 0, -1), Sx with entries
    1/sqrt(2) on the super/sub diagonal).
    """
    if d < 2:
        raise ValueError("local dimension must be at least 2")
    j = (d - 1) / 2
    m = j - np.arange(d)
    sz = np.diag(m).astype(np.complex128)
    raise_amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    sp = np.zeros((d, d), dtype=np.complex128)
    sp[np.arange(d - 1), np.arange(1, d)] = raise_amp
    sm = sp.conj().T
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    return sx, sy, sz


def _unit(v: Any, name: str) -> Vec3:
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a real 3-vector, got shape {arr.shape}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > UNIT_NORM_ATOL:
        raise ValueError(f"{name} must be a unit vector (norm {norm!r})")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class EnergyRange:
    """Closed interval of dimensionless energies."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("energy bounds must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty energy range [{self.lo}, {self.hi}]")

    def contains(self, e: float, atol: float = 0.0) -> bool:
        return self.lo - atol <= e <= self.hi + atol

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class ModelSpec:
    """Parameters selecting one Hamiltonian family and its couplings.

    ``g`` is the field-to-coupling ratio multiplying the local part.  Unused
    parameters are ignored by the family constructors; vectors must be unit
    length.  Serializes to a flat JSON-compatible dict.
    """

    family: str
    gamma: float = 1.0
    g: float = 1.0
    delta: float = 1.0
    theta: float = 0.0
    n_sites: int = 2
    local_dim: int = 2
    alpha: Vec3 = (0.0, 0.0, 1.0)
    beta: Vec3 = (0.0, 0.0, 1.0)
    n1: Vec3 = (0.0, 0.0, 1.0)
    n2: Vec3 = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in ("gamma", "g", "delta", "theta"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.n_sites < 2:
            raise ValueError("n_sites must be at least 2")
        if self.local_dim < 2:
            raise ValueError("local_dim must be at least 2")
        for name in ("alpha", "beta", "n1", "n2"):
            object.__setattr__(self, name, _unit(getattr(self, name), name))
        if self.family in ("transverse_xy", "longitudinal_xy", "xxz") and self.local_dim != 2:
            raise ValueError(f"{self.family} is a two-qubit model (local_dim 2)")
        if self.family == "bilinear_biquadratic":
            if self.local_dim == 2:  # the all-purpose default; this family is spin-1
                object.__setattr__(self, "local_dim", 3)
            elif self.local_dim != 3:
                raise ValueError("bilinear_biquadratic is a two-qutrit model (local_dim 3)")
        if self.family == "ring_xy" and self.local_dim != 2:
            raise ValueError("ring_xy is a qubit chain (local_dim 2)")

    @property
    def dims(self) -> tuple[int, ...]:
        if self.family == "ring_xy":
            return (2,) * self.n_sites
        return (self.local_dim, self.local_dim)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def replace(self, **kwargs: Any) -> "ModelSpec":
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for name in ("alpha", "beta", "n1", "n2"):
            d[name] = list(d[name])
        return d

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown ModelSpec keys: {sorted(unknown)}")
        if "family" not in data:
            raise ValueError("ModelSpec requires a 'family' entry")
        kwargs = dict(data)
        for name in ("alpha", "beta", "n1", "n2"):
            if name in kwargs:
                kwargs[name] = tuple(kwargs[name])
        return cls(**kwargs)


def _site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    d = op.shape[0]
    ops = [np.eye(d, dtype=np.complex128)] * n_sites
    ops[site] = op
    return kron(*ops)


def _dotted_spin(vec: Vec3, d: int) -> np.ndarray:
    sx, sy, sz = spin_matrices(d)
    return vec[0] * sx + vec[1] * sy + vec[2] * sz


def local_part(spec: ModelSpec) -> np.ndarray:
    """The field term multiplying ``g`` in ``H = H_int + g * H_loc``."""
    fam = spec.family
    if fam in ("non_interacting", "minimal_interaction"):
        d = spec.local_dim
        a = _dotted_spin(spec.alpha, d)
        b = _dotted_spin(spec.beta, d)
        eye = np.eye(d, dtype=np.complex128)
        return kron(a, eye) + kron(eye, b)
    if fam in ("transverse_xy", "xxz"):
        return kron(SIGMA_Z, np.eye(2)) + kron(np.eye(2), SIGMA_Z)
    if fam == "longitudinal_xy":
        return kron(SIGMA_X, np.eye(2)) + kron(np.eye(2), SIGMA_X)
    if fam == "bilinear_biquadratic":
        _, _, sz = spin_matrices(3)
        eye = np.eye(3, dtype=np.complex128)
        return kron(sz, eye) + kron(eye, sz)
    if fam == "ring_xy":
        n = spec.n_sites
        return sum(_site_operator(SIGMA_Z, i, n) for i in range(n))
    raise AssertionError(fam)


def interaction_part(spec: ModelSpec) -> np.ndarray:
    """The field-independent term of ``H = H_int + g * H_loc``."""
    fam = spec.family
    if fam == "non_interacting":
        return np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    if fam == "minimal_interaction":
        d = spec.local_dim
        return kron(_dotted_spin(spec.n1, d), _dotted_spin(spec.n2, d))
    if fam in ("transverse_xy", "longitudinal_xy"):
        gm = spec.gamma
        return (1 + gm) / 2 * kron(SIGMA_X, SIGMA_X) + (1 - gm) / 2 * kron(SIGMA_Y, SIGMA_Y)
    if fam == "xxz":
        return 0.5 * (
            kron(SIGMA_X, SIGMA_X)
            + kron(SIGMA_Y, SIGMA_Y)
            + spec.delta * kron(SIGMA_Z, SIGMA_Z)
        )
    if fam == "bilinear_biquadratic":
        sx, sy, sz = spin_matrices(3)
        sdots = kron(sx, sx) + kron(sy, sy) + kron(sz, sz)
        return np.cos(spec.theta) * sdots + np.sin(spec.theta) * (sdots @ sdots)
    if fam == "ring_xy":
        n = spec.n_sites
        gm = spec.gamma
        h = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
        for i in range(n):
            nxt = (i + 1) % n
            h += (1 + gm) / 2 * _site_operator(SIGMA_X, i, n) @ _site_operator(SIGMA_X, nxt, n)
            h += (1 - gm) / 2 * _site_operator(SIGMA_Y, i, n) @ _site_operator(SIGMA_Y, nxt, n)
        return h
    raise AssertionError(fam)


def build(spec: ModelSpec) -> np.ndarray:
    """Full dimensionless Hamiltonian ``H_int + g * H_loc``."""
    return interaction_part(spec) + spec.g * local_part(spec)


def _closed_form_eigenvalues(spec: ModelSpec) -> np.ndarray | None:
    """Known exact spectra, ascending; None when the family has none."""
    g = spec.g
    if spec.family == "transverse_xy":
        e = np.hypot(2 * g, spec.gamma)
        return np.sort(np.array([-e, -1.0, 1.0, e]))
    if spec.family == "xxz":
        d = spec.delta
        return np.sort(np.array([-1 - d / 2, 1 - d / 2, -2 * g + d / 2, 2 * g + d / 2]))
    if spec.family == "longitudinal_xy" and spec.gamma == 1.0:
        return np.sort(np.array([1 + 2 * g, -1.0, -1.0, 1 - 2 * g]))
    if spec.family == "bilinear_biquadratic":
        c, s = np.cos(spec.theta), np.sin(spec.theta)
        quintet = [c + s + m * g for m in range(-2, 3)]
        triplet = [s - c + m * g for m in range(-1, 2)]
        return np.sort(np.array(quintet + triplet + [4 * s - 2 * c]))
    if spec.family == "non_interacting":
        j = (spec.local_dim - 1) / 2
        m = j - np.arange(spec.local_dim)
        return np.sort(g * np.add.outer(m, m).ravel())
    return None


def state_energy_bounds(spec: ModelSpec) -> EnergyRange:
    """Extremal eigenvalues of the full Hamiltonian.

    Uses the closed-form spectrum when one exists, cross-checked against the
    dense eigensolve; otherwise the numeric extremes.
    """
    numeric = hermitian_eig(build(spec))
    closed = _closed_form_eigenvalues(spec)
    if closed is not None:
        scale = max(1.0, float(np.max(np.abs(closed))))
        mismatch = np.max(np.abs(closed - numeric.values))
        if mismatch > CROSS_CHECK_ATOL * scale:
            raise ArithmeticError(
                f"closed-form spectrum disagrees with eigensolve by {mismatch:.3g} for {spec}"
            )
        return EnergyRange(float(closed[0]), float(closed[-1]))
    return EnergyRange(numeric.lo, numeric.hi)


#: targets whose single-site marginals are maximally mixed, killing any local
#: field contribution under arbitrary local-unitary dressing
_ZERO_FIELD_TARGETS = ("psi_minus", "phi", "ghz3")


def target_energy_bounds_analytic(spec: ModelSpec, target: str) -> EnergyRange | None:
    """Closed-form reachable interval of the dressed target's mean energy.

    Returns None when no closed form is known for the (family, target) pair;
    callers then fall back to the numerical range optimizer.
    """
    fam = spec.family
    two_qubit_bell = target in ("psi_minus", "phi") and spec.dims == (2, 2)
    if fam == "non_interacting" and target in _ZERO_FIELD_TARGETS:
        return EnergyRange(0.0, 0.0)
    if fam in ("transverse_xy", "longitudinal_xy") and two_qubit_bell:
        eps = max(1.0, abs(spec.gamma))
        return EnergyRange(-eps, eps)
    if fam == "xxz" and two_qubit_bell:
        d = spec.delta
        hi = 1 - d / 2 if d < 1 else d / 2
        return EnergyRange(-(1 + d / 2), hi)
    if fam == "ring_xy" and target == "ghz3" and spec.n_sites == 3 and spec.gamma == 1.0:
        return EnergyRange(-1.0, 3.0)
    if fam == "minimal_interaction" and target in ("psi_minus", "phi"):
        if target == "psi_minus" and spec.local_dim != 2:
            return None
        j = (spec.local_dim - 1) / 2
        eps = j * (j + 1) / 3
        return EnergyRange(-eps, eps)
    return None
