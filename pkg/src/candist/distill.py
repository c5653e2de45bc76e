"""Distillability and energy-constraint decision procedures and estimators.

A state is "SCD" for a model when it is distillable in the usual sense and
its mean energy lies in the reachable interval of the dressed target state
(the weak canonical energy constraint, WCEC).  Distillability itself is
decided exactly where a criterion exists: Schmidt rank across every cut for
pure states, the partial-transpose test for mixed 2xd states; anything else
is reported as unknown rather than guessed.

Monte Carlo estimators fan the sample budget out over fixed-size chunks with
chunk-indexed RNG streams, so results depend on the master seed only, never
on the worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .hamiltonians import EnergyRange, ModelSpec, build, state_energy_bounds
from .linalg import partial_transpose
from .states import QuantumState, StateSampler, magnetized_matrix, thermal_state

DISTILLABLE = "distillable"
UNDISTILLABLE = "undistillable"
UNKNOWN = "unknown"
SCD = "scd"
NOT_SCD = "not_scd"

#: a partial transpose counts as non-positive below this
NPPT_ATOL = 1e-10
#: a Schmidt coefficient counts as nonzero above this
SCHMIDT_ATOL = 1e-12
#: slack on energy-interval membership
WCEC_ATOL = 1e-9

CHUNK_SIZE = 20_000


@dataclass(frozen=True)
class DistillabilityVerdict:
    status: str
    witness: float | int | None = None

    def __bool__(self) -> bool:
        return self.status == DISTILLABLE


@dataclass(frozen=True)
class MonteCarloReport:
    """Outcome of a seeded Monte Carlo estimate.

    ``estimate`` is a proportion in [0, 1] or a mean energy depending on the
    estimator; ``bin_edges``/``counts`` hold the raw energy histogram when
    one was accumulated (counts sum to ``n_samples``).
    """

    n_samples: int
    estimate: float
    std_error: float
    seed: int
    elapsed: float
    bin_edges: np.ndarray | None = None
    counts: np.ndarray | None = None

    def density(self) -> np.ndarray:
        """Histogram normalized to unit mass (not unit integral)."""
        if self.counts is None:
            raise ValueError("report carries no histogram")
        return self.counts / self.counts.sum()

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n_samples": self.n_samples,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "seed": self.seed,
            "elapsed": self.elapsed,
        }
        if self.counts is not None and self.bin_edges is not None:
            out["bin_edges"] = [float(x) for x in self.bin_edges]
            out["counts"] = [int(c) for c in self.counts]
        return out


def average_energy(state: QuantumState, spec: ModelSpec | np.ndarray) -> float:
    """tr(H rho) in the model's dimensionless units."""
    h = build(spec) if isinstance(spec, ModelSpec) else np.asarray(spec)
    if h.shape[0] != state.dim:
        raise ValueError(f"state dimension {state.dim} does not match Hamiltonian {h.shape}")
    if state.is_pure:
        e = np.vdot(state.data, h @ state.data)
    else:
        e = np.trace(h @ state.data)
    if abs(e.imag) > 1e-10 * max(1.0, abs(e.real)):
        raise ArithmeticError(f"energy has imaginary part {e.imag:.3g}")
    return float(e.real)


def wcec_satisfied(
    state: QuantumState,
    spec: ModelSpec | np.ndarray,
    target_range: EnergyRange,
    atol: float = WCEC_ATOL,
) -> bool:
    """Whether the state's mean energy is reachable by the dressed target."""
    return target_range.contains(average_energy(state, spec), atol=atol)


def _cut_matrix(psi: np.ndarray, dims: tuple[int, ...], site: int) -> np.ndarray:
    """Amplitudes reshaped as (site) x (rest) for a single-site cut."""
    t = psi.reshape(dims)
    t = np.moveaxis(t, site, 0)
    return t.reshape(dims[site], -1)


def schmidt_rank(psi: np.ndarray, dims: tuple[int, ...], site: int = 0) -> int:
    sv = np.linalg.svd(_cut_matrix(psi, dims, site), compute_uv=False)
    return int(np.count_nonzero(sv > SCHMIDT_ATOL))


def is_distillable(state: QuantumState) -> DistillabilityVerdict:
    """Decide distillability where an exact criterion exists.

    Pure states: distillable iff entangled across every single-site cut
    (for bipartite states this is Schmidt rank >= 2); witness is the smallest
    cut rank.  Mixed 2xd states: distillable iff the partial transpose is
    non-positive; witness is its minimum eigenvalue.  Other mixed states:
    unknown.
    """
    dims = state.dims
    if state.is_pure:
        ranks = [schmidt_rank(np.asarray(state.data), dims, s) for s in range(len(dims))]
        worst = min(ranks)
        status = DISTILLABLE if worst >= 2 else UNDISTILLABLE
        return DistillabilityVerdict(status, witness=worst)
    if len(dims) == 2 and min(dims) == 2:
        pt = partial_transpose(state.data, 0, dims)
        w_min = float(np.linalg.eigvalsh(pt)[0])
        status = DISTILLABLE if w_min < -NPPT_ATOL else UNDISTILLABLE
        return DistillabilityVerdict(status, witness=w_min)
    return DistillabilityVerdict(UNKNOWN)


def is_scd(
    state: QuantumState, spec: ModelSpec | np.ndarray, target_range: EnergyRange
) -> str:
    """SCD iff distillable and the WCEC can be met; unknown propagates."""
    verdict = is_distillable(state)
    if verdict.status == UNDISTILLABLE:
        return NOT_SCD
    if not wcec_satisfied(state, spec, target_range):
        return NOT_SCD
    if verdict.status == UNKNOWN:
        return UNKNOWN
    return SCD


_SY_SY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)


def concurrence(state: QuantumState) -> float:
    """Wootters concurrence of a two-qubit state."""
    if state.dims != (2, 2):
        raise ValueError(f"concurrence is defined for two qubits, got dims {state.dims}")
    rho = state.density()
    rho_tilde = _SY_SY @ rho.conj() @ _SY_SY
    w = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sort(np.sqrt(np.clip(w.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# ---------------------------------------------------------------------------
# batched Monte Carlo kernels


def _batch_energies(h: np.ndarray, batch: np.ndarray) -> np.ndarray:
    if batch.ndim == 2:  # amplitude vectors
        return np.einsum("ni,ij,nj->n", batch.conj(), h, batch).real
    return np.einsum("nij,ji->n", batch, h).real


def _batch_pure_distillable(batch: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    n = batch.shape[0]
    ok = np.ones(n, dtype=bool)
    for site in range(len(dims)):
        t = np.moveaxis(batch.reshape((n,) + dims), 1 + site, 1)
        m = t.reshape(n, dims[site], -1)
        sv = np.linalg.svd(m, compute_uv=False)
        ok &= sv[:, 1] > SCHMIDT_ATOL
    return ok


def _batch_mixed_distillable(batch: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    n = batch.shape[0]
    d1, d2 = dims
    pt = batch.reshape(n, d1, d2, d1, d2).transpose(0, 3, 2, 1, 4).reshape(n, d1 * d2, d1 * d2)
    w = np.linalg.eigvalsh(pt)
    return w[:, 0] < -NPPT_ATOL


def _batch_distillable(sampler: StateSampler, batch: np.ndarray) -> np.ndarray:
    if sampler.yields_pure:
        return _batch_pure_distillable(batch, sampler.dims)
    return _batch_mixed_distillable(batch, sampler.dims)


def _check_decidable(sampler: StateSampler) -> None:
    if sampler.yields_pure:
        return
    if len(sampler.dims) == 2 and min(sampler.dims) == 2:
        return
    raise ValueError(
        f"distillability is undecidable for mixed states on dims {sampler.dims}; "
        "refusing to estimate"
    )


@dataclass(frozen=True)
class ScanResult:
    """Pooled per-sample statistics of one Monte Carlo scan."""

    n: int
    n_distillable: int
    n_scd: int
    energy_sum: float
    energy_sq_sum: float
    bin_edges: np.ndarray | None
    counts: np.ndarray | None
    dist_counts: np.ndarray | None
    seed: int
    elapsed: float


def _chunk_sizes(n: int) -> list[int]:
    full, rest = divmod(n, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def mc_scan(
    sampler: StateSampler,
    spec: ModelSpec | None,
    n: int,
    seed: int,
    *,
    workers: int = 1,
    target_range: EnergyRange | None = None,
    bin_edges: np.ndarray | None = None,
) -> ScanResult:
    """Sample n states and pool energies and distillability verdicts.

    The sample stream is split into fixed-size chunks; chunk i draws from a
    generator seeded by (seed, i), so the result is a pure function of the
    seed regardless of ``workers``.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    _check_decidable(sampler)
    h = build(spec) if spec is not None else None
    nbins = None if bin_edges is None else len(bin_edges) - 1

    def run_chunk(idx: int, size: int):
        rng = np.random.default_rng([seed, idx])
        batch = sampler.sample_batch(rng, size)
        dist = _batch_distillable(sampler, batch)
        if h is None:
            return dist.sum(), 0, 0.0, 0.0, None, None
        e = _batch_energies(h, batch)
        n_scd = 0
        if target_range is not None:
            inside = (e >= target_range.lo - WCEC_ATOL) & (e <= target_range.hi + WCEC_ATOL)
            n_scd = int((dist & inside).sum())
        counts = dist_counts = None
        if bin_edges is not None:
            clipped = np.clip(e, bin_edges[0], bin_edges[-1])
            counts, _ = np.histogram(clipped, bin_edges)
            dist_counts, _ = np.histogram(clipped[dist], bin_edges)
        return int(dist.sum()), n_scd, float(e.sum()), float((e * e).sum()), counts, dist_counts

    t0 = time.perf_counter()
    sizes = _chunk_sizes(n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(sizes)), sizes))
    else:
        parts = [run_chunk(i, s) for i, s in enumerate(sizes)]

    n_dist = sum(p[0] for p in parts)
    n_scd = sum(p[1] for p in parts)
    e_sum = sum(p[2] for p in parts)
    e2_sum = sum(p[3] for p in parts)
    counts = dist_counts = None
    if nbins is not None:
        counts = np.sum([p[4] for p in parts], axis=0)
        dist_counts = np.sum([p[5] for p in parts], axis=0)
    return ScanResult(
        n=n,
        n_distillable=int(n_dist),
        n_scd=int(n_scd),
        energy_sum=e_sum,
        energy_sq_sum=e2_sum,
        bin_edges=bin_edges,
        counts=counts,
        dist_counts=dist_counts,
        seed=seed,
        elapsed=time.perf_counter() - t0,
    )


def _proportion_report(hits: int, scan: ScanResult) -> MonteCarloReport:
    p = hits / scan.n
    return MonteCarloReport(
        n_samples=scan.n,
        estimate=p,
        std_error=float(np.sqrt(p * (1 - p) / scan.n)),
        seed=scan.seed,
        elapsed=scan.elapsed,
        bin_edges=scan.bin_edges,
        counts=scan.counts,
    )


def estimate_df(
    rank: int,
    n: int,
    seed: int = 0,
    *,
    dims: tuple[int, ...] = (2, 2),
    workers: int = 1,
) -> MonteCarloReport:
    """Distillable fraction of induced-measure states at the given rank."""
    sampler = StateSampler("mixed", dims=dims, rank=rank)
    scan = mc_scan(sampler, None, n, seed, workers=workers)
    return _proportion_report(scan.n_distillable, scan)


def default_bin_edges(spec: ModelSpec, bins: int) -> np.ndarray:
    bounds = state_energy_bounds(spec)
    return np.linspace(bounds.lo, bounds.hi, bins + 1)


def energy_histogram(
    sampler: StateSampler,
    spec: ModelSpec,
    bins: int,
    n: int,
    seed: int = 0,
    *,
    workers: int = 1,
) -> MonteCarloReport:
    """Histogram of sampled mean energies over the spectral range.

    ``estimate`` is the sample mean energy; ``std_error`` the standard error
    of that mean.
    """
    if bins < 10:
        raise ValueError("at least 10 bins required")
    edges = default_bin_edges(spec, bins)
    scan = mc_scan(sampler, spec, n, seed, workers=workers, bin_edges=edges)
    mean = scan.energy_sum / n
    var = max(0.0, scan.energy_sq_sum / n - mean * mean)
    return MonteCarloReport(
        n_samples=n,
        estimate=mean,
        std_error=float(np.sqrt(var / n)),
        seed=seed,
        elapsed=scan.elapsed,
        bin_edges=edges,
        counts=scan.counts,
    )


def estimate_p(
    sampler: StateSampler,
    spec: ModelSpec,
    target_range: EnergyRange,
    n: int,
    seed: int = 0,
    *,
    workers: int = 1,
) -> MonteCarloReport:
    """Probability that a sampled state is SCD (direct counting).

    No independence assumption: each sample is tested for distillability and
    for energy membership individually.
    """
    scan = mc_scan(sampler, spec, n, seed, workers=workers, target_range=target_range)
    return _proportion_report(scan.n_scd, scan)


def interval_bin_overlap(edges: np.ndarray, rng: EnergyRange) -> np.ndarray:
    """Fraction of each bin covered by the interval (linear within bins)."""
    lo = np.maximum(edges[:-1], rng.lo)
    hi = np.minimum(edges[1:], rng.hi)
    width = np.diff(edges)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(width > 0, np.clip(hi - lo, 0.0, None) / width, 0.0)
    return frac


def p_via_independence(
    eta: float, hist: MonteCarloReport, target_range: EnergyRange
) -> float:
    """SCD probability from a distillability factor times the energy mass.

    Multiplies the (energy-independent) distillable fraction ``eta`` by the
    histogram mass inside the target interval, interpolating linearly in the
    edge bins.
    """
    if hist.counts is None or hist.bin_edges is None:
        raise ValueError("histogram report required")
    mass = hist.density()
    frac = interval_bin_overlap(np.asarray(hist.bin_edges), target_range)
    return float(eta * np.sum(mass * frac))


@dataclass(frozen=True)
class IndependenceReport:
    """Per-energy-bin distillable fractions against the pooled fraction."""

    bin_edges: np.ndarray
    counts: np.ndarray
    dist_counts: np.ndarray
    eta_global: float
    min_bin_count: int

    @property
    def fractions(self) -> np.ndarray:
        """Per-bin distillable fraction; NaN marks unpopulated bins."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.counts > 0, self.dist_counts / np.maximum(self.counts, 1), np.nan)

    @property
    def well_populated(self) -> np.ndarray:
        return self.counts >= self.min_bin_count

    @property
    def max_abs_deviation(self) -> float:
        """Largest |per-bin fraction - pooled fraction| over populated bins."""
        mask = self.well_populated
        if not mask.any():
            return float("nan")
        return float(np.max(np.abs(self.fractions[mask] - self.eta_global)))


def independence_check(
    rank: int,
    spec: ModelSpec,
    n: int,
    bins: int,
    seed: int = 0,
    *,
    workers: int = 1,
    min_bin_count: int = 10_000,
) -> IndependenceReport:
    """Test whether the distillable fraction depends on the mean energy."""
    sampler = StateSampler("mixed", dims=spec.dims, rank=rank)
    edges = default_bin_edges(spec, bins)
    scan = mc_scan(sampler, spec, n, seed, workers=workers, bin_edges=edges)
    assert scan.counts is not None and scan.dist_counts is not None
    return IndependenceReport(
        bin_edges=edges,
        counts=scan.counts,
        dist_counts=scan.dist_counts,
        eta_global=scan.n_distillable / n,
        min_bin_count=min_bin_count,
    )


# ---------------------------------------------------------------------------
# thermal states


def thermal_energy_curve(spec: ModelSpec) -> "ThermalCurve":
    return ThermalCurve(np.linalg.eigvalsh(build(spec)))


@dataclass(frozen=True)
class ThermalCurve:
    """Mean thermal energy as a function of inverse temperature."""

    eigenvalues: np.ndarray

    def energy(self, beta: float) -> float:
        w = self.eigenvalues
        weights = np.exp(-beta * (w - w[0]))
        return float(np.sum(w * weights) / np.sum(weights))


def thermal_boundary(
    spec: ModelSpec,
    g_grid: Sequence[float],
    target_range: EnergyRange | None = None,
    *,
    energy_tol: float = 1e-6,
) -> list[tuple[float, float | None]]:
    """Inverse temperature where the thermal state leaves the WCEC window.

    Thermal energies start at zero (traceless models) and decrease with
    beta, so only the lower edge of the target interval can bind.  For each
    field value, returns the crossing beta, or None when the ground energy
    never drops below the lower edge.
    """
    if spec.family not in ("transverse_xy", "xxz"):
        raise ValueError("thermal boundaries are computed for the transverse XY and XXZ models")
    if target_range is None:
        from .hamiltonians import target_energy_bounds_analytic

        target_range = target_energy_bounds_analytic(spec, "psi_minus")
        if target_range is None:
            raise ValueError("no analytic target interval; pass target_range explicitly")

    out: list[tuple[float, float | None]] = []
    for g in g_grid:
        curve = thermal_energy_curve(spec.replace(g=float(g)))
        e0 = curve.energy(0.0)
        if not target_range.contains(e0, atol=WCEC_ATOL):
            raise ArithmeticError(
                f"infinite-temperature energy {e0} outside target interval {target_range}"
            )
        ground = float(curve.eigenvalues[0])
        if ground >= target_range.lo - energy_tol:
            out.append((float(g), None))
            continue
        lo_beta, hi_beta = 0.0, 1.0
        while curve.energy(hi_beta) > target_range.lo:
            lo_beta, hi_beta = hi_beta, 2 * hi_beta
            if hi_beta > 1e9:  # pragma: no cover - guards pathological inputs
                raise ArithmeticError("no crossing found below beta = 1e9")
        while True:
            mid = 0.5 * (lo_beta + hi_beta)
            e_mid = curve.energy(mid)
            if abs(e_mid - target_range.lo) < energy_tol:
                out.append((float(g), mid))
                break
            if e_mid > target_range.lo:
                lo_beta = mid
            else:
                hi_beta = mid
    return out


def thermal_concurrence_grid(
    spec: ModelSpec,
    g_grid: Sequence[float],
    beta_grid: Sequence[float],
    target_range: EnergyRange,
) -> list[tuple[float, float, float, float, bool]]:
    """Rows of (g, beta, energy, concurrence, wcec) over a parameter grid."""
    rows = []
    for g in g_grid:
        spec_g = spec.replace(g=float(g))
        curve = thermal_energy_curve(spec_g)
        for beta in beta_grid:
            rho = thermal_state(spec_g, float(beta))
            e = curve.energy(float(beta))
            rows.append(
                (
                    float(g),
                    float(beta),
                    e,
                    concurrence(rho),
                    target_range.contains(e, atol=WCEC_ATOL),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# magnetized two-qubit family

LABEL_INVALID = "invalid-state"
LABEL_UNDISTILLABLE = "undistillable"
LABEL_DISTILLABLE = "distillable-not-scd"
LABEL_SCD = "scd"

_MAG_PARAM_NAMES = ("cxx", "cyy", "czz", "m1", "m2")


def _magnetized_batch(params: np.ndarray) -> np.ndarray:
    """Stack of raw magnetized-family matrices from (n, 5) parameters."""
    basis = np.stack(
        [
            np.eye(4, dtype=np.complex128),
            magnetized_matrix(1, 0, 0, 0, 0) * 4 - np.eye(4),
            magnetized_matrix(0, 1, 0, 0, 0) * 4 - np.eye(4),
            magnetized_matrix(0, 0, 1, 0, 0) * 4 - np.eye(4),
            magnetized_matrix(0, 0, 0, 1, 0) * 4 - np.eye(4),
            magnetized_matrix(0, 0, 0, 0, 1) * 4 - np.eye(4),
        ]
    )
    coeff = np.concatenate([np.ones((params.shape[0], 1)), params], axis=1)
    return np.einsum("nk,kij->nij", coeff, basis) / 4


def classify_magnetized(
    params: np.ndarray, spec: ModelSpec, target_range: EnergyRange
) -> np.ndarray:
    """Label magnetized-family parameter tuples for one model.

    ``params`` is (n, 5) with columns (cxx, cyy, czz, m1, m2); labels are
    invalid-state / undistillable / distillable-not-scd / scd.
    """
    params = np.atleast_2d(np.asarray(params, dtype=np.float64))
    rho = _magnetized_batch(params)
    w = np.linalg.eigvalsh(rho)
    valid = w[:, 0] >= -NPPT_ATOL
    dist = _batch_mixed_distillable(rho, (2, 2))
    e = _batch_energies(build(spec), rho)
    inside = (e >= target_range.lo - WCEC_ATOL) & (e <= target_range.hi + WCEC_ATOL)
    labels = np.full(params.shape[0], LABEL_UNDISTILLABLE, dtype=object)
    labels[dist] = LABEL_DISTILLABLE
    labels[dist & inside] = LABEL_SCD
    labels[~valid] = LABEL_INVALID
    return labels


@dataclass(frozen=True)
class MixtureWitness:
    """Two distillable non-SCD states whose mixture is SCD."""

    params_low: tuple[float, ...]
    params_high: tuple[float, ...]
    weight_low: float
    energy_low: float
    energy_high: float
    mixture_energy: float
    mixture_min_pt_eigenvalue: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "params_low": dict(zip(_MAG_PARAM_NAMES, self.params_low)),
            "params_high": dict(zip(_MAG_PARAM_NAMES, self.params_high)),
            "weight_low": self.weight_low,
            "energy_low": self.energy_low,
            "energy_high": self.energy_high,
            "mixture_energy": self.mixture_energy,
            "mixture_min_pt_eigenvalue": self.mixture_min_pt_eigenvalue,
        }


def find_nonconvexity_witness(
    spec: ModelSpec,
    target_range: EnergyRange,
    n: int = 100_000,
    seed: int = 0,
    max_pairs: int = 200,
) -> MixtureWitness | None:
    """Search the magnetized family for a non-convexity witness.

    Samples parameter tuples uniformly, keeps distillable states whose
    energies fall on either side of the target interval, and mixes low/high
    pairs with the weight that lands the mixture energy mid-interval.  The
    first mixture that stays distillable is returned.
    """
    rng = np.random.default_rng(seed)
    h = build(spec)
    mid = 0.5 * (target_range.lo + target_range.hi)
    lows: list[int] = []
    highs: list[int] = []
    all_params = []
    drawn = 0
    while drawn < n and (len(lows) < max_pairs or len(highs) < max_pairs):
        m = min(CHUNK_SIZE, n - drawn)
        params = rng.uniform(-1.0, 1.0, size=(m, 5))
        rho = _magnetized_batch(params)
        w = np.linalg.eigvalsh(rho)
        valid = w[:, 0] >= -NPPT_ATOL
        dist = _batch_mixed_distillable(rho, (2, 2)) & valid
        e = _batch_energies(h, rho)
        all_params.append(params)
        lows.extend((drawn + np.flatnonzero(dist & (e < target_range.lo - WCEC_ATOL))).tolist())
        highs.extend((drawn + np.flatnonzero(dist & (e > target_range.hi + WCEC_ATOL))).tolist())
        drawn += m
    if not lows or not highs:
        return None
    params = np.concatenate(all_params, axis=0)

    for i in lows[:max_pairs]:
        rho_i = _magnetized_batch(params[i : i + 1])[0]
        e_i = float(_batch_energies(h, rho_i[None])[0])
        for j in highs[:max_pairs]:
            rho_j = _magnetized_batch(params[j : j + 1])[0]
            e_j = float(_batch_energies(h, rho_j[None])[0])
            t = (e_j - mid) / (e_j - e_i)
            if not 0.0 < t < 1.0:
                continue
            mix = t * rho_i + (1 - t) * rho_j
            pt_min = float(
                np.linalg.eigvalsh(mix.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4))[0]
            )
            if pt_min < -NPPT_ATOL:
                return MixtureWitness(
                    params_low=tuple(params[i]),
                    params_high=tuple(params[j]),
                    weight_low=float(t),
                    energy_low=e_i,
                    energy_high=e_j,
                    mixture_energy=float(t * e_i + (1 - t) * e_j),
                    mixture_min_pt_eigenvalue=pt_min,
                )
    return None


def delta_p(
    gamma: float,
    g: float,
    n: int,
    seed: int = 0,
    *,
    workers: int = 1,
) -> float:
    """p(transverse field) - p(longitudinal field) at matched couplings.

    Uses common random numbers (the identical Haar sample stream) for both
    models, so the difference is free of sampler noise between the arms.
    """
    from .hamiltonians import target_energy_bounds_analytic

    sampler = StateSampler("pure", dims=(2, 2))
    out = []
    for family in ("transverse_xy", "longitudinal_xy"):
        spec = ModelSpec(family=family, gamma=gamma, g=g)
        rng = target_energy_bounds_analytic(spec, "psi_minus")
        assert rng is not None
        out.append(estimate_p(sampler, spec, rng, n, seed, workers=workers).estimate)
    return out[0] - out[1]
