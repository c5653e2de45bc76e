"""Reachable energy intervals of a target state under local unitaries.

The right-hand side of the weak canonical energy constraint is the mean
energy of the target state dressed by arbitrary per-site unitaries.  This
module parametrizes those unitaries (three angles per qubit, a Hermitian
generator per qudit), evaluates the dressed energy, and locates its extremes
with a seeded multi-start Nelder-Mead search.

For maximally entangled bipartite targets the two-sided search collapses to
a single unitary on the first site, since (U1 x U2)|Phi> = (U1 U2^T x I)|Phi>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .hamiltonians import EnergyRange, ModelSpec, build
from .linalg import kron, partial_trace
from .states import QuantumState

UNITARY_ATOL = 1e-10
CONTAINMENT_ATOL = 1e-8
#: best restarts must agree this closely for a side to count as converged
AGREEMENT_ATOL = 1e-6


def qubit_unitary(theta: float, phi1: float, phi2: float) -> np.ndarray:
    """General single-qubit unitary up to a global phase (three angles)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [c * np.exp(1j * phi1), s * np.exp(1j * phi2)],
            [-s * np.exp(-1j * phi2), c * np.exp(-1j * phi1)],
        ]
    )


def qudit_unitary(params: np.ndarray, d: int) -> np.ndarray:
    """Unitary exp(iG) from the d^2 real parameters of a Hermitian G."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (d * d,):
        raise ValueError(f"need {d * d} parameters for a {d}-level unitary")
    gen = np.zeros((d, d), dtype=np.complex128)
    gen[np.diag_indices(d)] = params[:d]
    iu = np.triu_indices(d, 1)
    k = iu[0].size
    gen[iu] = params[d : d + k] + 1j * params[d + k :]
    gen += np.triu(gen, 1).conj().T
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(1j * w)) @ v.conj().T


def params_per_site(d: int) -> int:
    return 3 if d == 2 else d * d


def site_unitary(params: np.ndarray, d: int) -> np.ndarray:
    if d == 2:
        return qubit_unitary(*params)
    return qudit_unitary(params, d)


def unitary_to_params(u: np.ndarray) -> np.ndarray:
    """Generator parameters reproducing a given unitary (d > 2 sites)."""
    d = u.shape[0]
    t, q = scipy.linalg.schur(u, output="complex")
    gen = (q * np.angle(np.diagonal(t))) @ q.conj().T
    iu = np.triu_indices(d, 1)
    return np.concatenate([np.real(np.diagonal(gen)), gen[iu].real, gen[iu].imag])


def random_site_params(d: int, rng: np.random.Generator) -> np.ndarray:
    """Parameters of a Haar-random site unitary (restart seeds)."""
    if d == 2:
        theta = np.arcsin(np.sqrt(rng.random()))
        return np.array([theta, *rng.uniform(0.0, 2 * np.pi, size=2)])
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return unitary_to_params(q)


@dataclass(frozen=True)
class LocalUnitaries:
    """One parametrized unitary per site."""

    site_dims: tuple[int, ...]
    params: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.site_dims) != len(self.params):
            raise ValueError("one parameter block per site required")
        blocks = []
        for d, p in zip(self.site_dims, self.params):
            p = np.array(p, dtype=np.float64)
            if p.shape != (params_per_site(d),):
                raise ValueError(
                    f"site of dimension {d} needs {params_per_site(d)} parameters, got {p.shape}"
                )
            p.flags.writeable = False
            blocks.append(p)
        object.__setattr__(self, "params", tuple(blocks))
        object.__setattr__(self, "site_dims", tuple(int(d) for d in self.site_dims))

    @classmethod
    def identity(cls, site_dims: tuple[int, ...]) -> "LocalUnitaries":
        return cls(site_dims, tuple(np.zeros(params_per_site(d)) for d in site_dims))

    @classmethod
    def from_flat(cls, x: np.ndarray, site_dims: tuple[int, ...]) -> "LocalUnitaries":
        x = np.asarray(x, dtype=np.float64)
        blocks, at = [], 0
        for d in site_dims:
            k = params_per_site(d)
            blocks.append(x[at : at + k])
            at += k
        if at != x.size:
            raise ValueError(f"expected {at} parameters, got {x.size}")
        return cls(tuple(site_dims), tuple(blocks))

    def flat(self) -> np.ndarray:
        return np.concatenate(self.params)

    def matrices(self) -> list[np.ndarray]:
        return [site_unitary(p, d) for d, p in zip(self.site_dims, self.params)]

    def full(self) -> np.ndarray:
        return kron(*self.matrices())


def _require_pure(target: QuantumState) -> np.ndarray:
    if not target.is_pure:
        raise ValueError("target state must be pure")
    return np.asarray(target.data)


def target_energy(spec: ModelSpec | np.ndarray, target: QuantumState, us: LocalUnitaries) -> float:
    """Mean energy of the dressed target: <psi| (xU)^dag H (xU) |psi>."""
    h = build(spec) if isinstance(spec, ModelSpec) else np.asarray(spec)
    psi = _require_pure(target)
    if us.site_dims != target.dims:
        raise ValueError(f"unitary dims {us.site_dims} do not match target dims {target.dims}")
    if h.shape[0] != psi.size:
        raise ValueError("Hamiltonian dimension does not match target")
    v = us.full() @ psi
    e = np.vdot(v, h @ v)
    if abs(e.imag) > 1e-10 * max(1.0, abs(e.real)):
        raise ArithmeticError(f"dressed energy has imaginary part {e.imag:.3g}")
    return float(e.real)


@dataclass(frozen=True)
class RangeResult:
    """Outcome of the reachable-interval search."""

    range: EnergyRange
    argmin: LocalUnitaries
    argmax: LocalUnitaries
    restarts_used: int
    converged: bool


def is_maximally_entangled(target: QuantumState, atol: float = 1e-12) -> bool:
    """True for bipartite pure targets with maximally mixed marginals."""
    if not target.is_pure or len(target.dims) != 2 or target.dims[0] != target.dims[1]:
        return False
    rho = target.density()
    d = target.dims[0]
    marg = partial_trace(rho, [0], target.dims)
    return bool(np.max(np.abs(marg - np.eye(d) / d)) < atol)


def _minimize_side(
    fun,
    site_dims: tuple[int, ...],
    restarts: int,
    seed: int,
    tag: int,
    maxiter: int,
) -> tuple[float, np.ndarray, bool]:
    """Multi-start Nelder-Mead; returns (best value, best x, side converged)."""
    finals = []
    for k in range(restarts):
        rng = np.random.default_rng([seed, tag, k])
        x0 = np.concatenate([random_site_params(d, rng) for d in site_dims])
        res = scipy.optimize.minimize(
            fun,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": maxiter, "maxfev": 2 * maxiter},
        )
        # re-running from the found point re-expands a collapsed simplex
        res = scipy.optimize.minimize(
            fun,
            res.x,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": maxiter, "maxfev": 2 * maxiter},
        )
        finals.append((float(res.fun), res.x))
    finals.sort(key=lambda t: t[0])
    best_val, best_x = finals[0]
    top = [v for v, _ in finals[:3]]
    converged = len(top) >= 3 and (top[-1] - top[0]) < AGREEMENT_ATOL
    return best_val, best_x, converged


def energy_range(
    h: np.ndarray,
    site_dims: tuple[int, ...],
    target: QuantumState,
    *,
    restarts: int = 32,
    maxiter: int = 5000,
    seed: int = 0,
    one_sided: bool | None = None,
) -> RangeResult:
    """Extremes of the dressed-target energy over all local unitaries.

    ``one_sided`` collapses the search to the first site for maximally
    entangled bipartite targets (None = auto-detect).  Non-convergence is
    reported through ``RangeResult.converged``, never raised.
    """
    psi = _require_pure(target)
    h = np.asarray(h, dtype=np.complex128)
    if one_sided is None:
        one_sided = is_maximally_entangled(target)
    elif one_sided and not is_maximally_entangled(target):
        raise ValueError("one-sided search requires a maximally entangled bipartite target")

    if one_sided:
        d = target.dims[0]
        eye = np.eye(d, dtype=np.complex128)
        k = params_per_site(d)

        def value(x: np.ndarray) -> float:
            v = kron(site_unitary(x[:k], d), eye) @ psi
            return np.vdot(v, h @ v).real

        opt_dims: tuple[int, ...] = (d,)

        def lift(x: np.ndarray) -> LocalUnitaries:
            return LocalUnitaries(
                target.dims, (x[:k].copy(), np.zeros(params_per_site(target.dims[1])))
            )

    else:
        opt_dims = target.dims

        def value(x: np.ndarray) -> float:
            v = LocalUnitaries.from_flat(x, target.dims).full() @ psi
            return np.vdot(v, h @ v).real

        def lift(x: np.ndarray) -> LocalUnitaries:
            return LocalUnitaries.from_flat(x, target.dims)

    lo, x_lo, conv_lo = _minimize_side(value, opt_dims, restarts, seed, 0, maxiter)
    neg_hi, x_hi, conv_hi = _minimize_side(
        lambda x: -value(x), opt_dims, restarts, seed, 1, maxiter
    )
    hi = -neg_hi

    spectrum = np.linalg.eigvalsh(h)
    if lo < spectrum[0] - CONTAINMENT_ATOL or hi > spectrum[-1] + CONTAINMENT_ATOL:
        raise ArithmeticError(
            f"reachable interval [{lo}, {hi}] escapes the spectral bounds "
            f"[{spectrum[0]}, {spectrum[-1]}]"
        )
    return RangeResult(
        range=EnergyRange(min(lo, hi), max(lo, hi)),
        argmin=lift(x_lo),
        argmax=lift(x_hi),
        restarts_used=restarts,
        converged=conv_lo and conv_hi,
    )


def target_energy_range(
    spec: ModelSpec,
    target: QuantumState,
    *,
    restarts: int = 32,
    maxiter: int = 5000,
    seed: int = 0,
    one_sided: bool | None = None,
) -> RangeResult:
    """Reachable interval of the dressed target's mean energy for a model."""
    if spec.dims != target.dims:
        raise ValueError(f"model dims {spec.dims} do not match target dims {target.dims}")
    return energy_range(
        build(spec), spec.dims, target, restarts=restarts, maxiter=maxiter, seed=seed,
        one_sided=one_sided,
    )


def w_class_target_range(
    spec: ModelSpec,
    g_grid: np.ndarray,
    target: QuantumState | None = None,
    *,
    restarts: int = 32,
    maxiter: int = 5000,
    seed: int = 0,
) -> list[tuple[float, RangeResult]]:
    """Per-field reachable intervals for the three-qubit W target.

    The W state has magnetized marginals, so the field term survives the
    dressing and the interval genuinely depends on g.  Each interval is
    checked to be a subset of the spectral bounds, strict on at least one
    side.
    """
    from .hamiltonians import state_energy_bounds
    from .states import target_state

    if spec.family != "ring_xy":
        raise ValueError("W-class ranges are defined for the ring model")
    if target is None:
        target = target_state("w3")
    out = []
    for g in np.asarray(g_grid, dtype=np.float64):
        spec_g = spec.replace(g=float(g))
        res = target_energy_range(
            spec_g, target, restarts=restarts, maxiter=maxiter, seed=seed
        )
        bounds = state_energy_bounds(spec_g)
        strict = (res.range.lo > bounds.lo + 1e-6) or (res.range.hi < bounds.hi - 1e-6)
        if not strict:
            raise ArithmeticError(
                f"W-target interval {res.range} is not a strict subset of {bounds} at g={g}"
            )
        out.append((float(g), res))
    return out
