"""Ensemble experiment harness: sampling, trials, sweeps, and band exports.

A trial samples source/target/validation data, builds both likelihoods on the
affine frame of the box encompassing the source and target domains, optimizes
the tempering exponent, and scores the tempered posterior against no transfer
(beta = 0) and full transfer (beta = 1) on held-out validation data.  Sweeps
repeat trials across a sequence of domain or task shifts and aggregate.

Determinism: every random draw derives from a stable 64-bit hash of
(master seed, trial index, role tag), so records are a pure function of the
configuration and any subset of trials can be recomputed independently.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .basis import BasisSpec, DomainBox, n_pce
from .errors import CalibrationError, NumericError
from .gaussian import CalibrationTask, likelihood
from .models import GenerativeModel
from .predict import lpfp, pushforward, rmse
from .transfer import TransferProblem, optimize_beta, tempered_posterior

SAMPLERS = ("uniform", "latin-hypercube")

TRIAL_CSV_COLUMNS = (
    "trial", "shift", "beta_star",
    "lpfp_b0", "lpfp_bstar", "lpfp_b1",
    "rmse_b0", "rmse_bstar", "rmse_b1",
    "status",
)

AGGREGATE_CSV_COLUMNS = (
    "shift", "n_trials", "n_failed",
    "beta_star_mean", "beta_star_sd",
    "dlpfp_vs_b0_mean", "dlpfp_vs_b0_sd",
    "dlpfp_vs_b1_mean", "dlpfp_vs_b1_sd",
    "rmse_b0_mean", "rmse_b0_sd",
    "rmse_bstar_mean", "rmse_bstar_sd",
    "rmse_b1_mean", "rmse_b1_sd",
)

BAND_CSV_COLUMNS = ("x", "mean", "lo", "hi", "beta_mode")


def derive_seed(master_seed: int, trial: int, role: str) -> int:
    """Stable 64-bit mix of (master seed, trial index, role tag)."""
    digest = hashlib.blake2b(
        f"{master_seed}|{trial}|{role}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def sample(box: DomainBox, n: int, sampler: str, seed: int) -> np.ndarray:
    """Draw n points inside the box, shape (n, dim), reproducibly from seed.

    latin-hypercube: per dimension, one point per equal-width stratum,
    uniformly placed within it and permuted across dimensions.
    uniform: i.i.d. uniform over the box.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}; choose from {SAMPLERS}")
    rng = np.random.default_rng(seed)
    dim = box.dimension
    if sampler == "uniform":
        unit = rng.uniform(size=(n, dim))
    else:
        unit = np.empty((n, dim))
        for j in range(dim):
            strata = rng.permutation(n)
            unit[:, j] = (strata + rng.uniform(size=n)) / n
    return box.lower + unit * box.width


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a sweep, including how shifts apply.

    shift_mode "target-box" translates the target box along shift_axis by the
    shift value (domain adaptation); "model-param" offsets one parameter of
    the generative model for the target task only (task adaptation).
    """

    model: GenerativeModel
    source_box: DomainBox
    target_box: DomainBox
    degrees: tuple[int, ...]
    n_source: int
    n_target: int
    n_val: int
    n_trials: int
    noise_sd: float
    sampler: str
    objective: str
    seed: int
    shift_mode: str = "target-box"
    shift_axis: int = 0
    shift_param: str = "theta"
    shift: float = 0.0
    lpfp_noise_var: float = 0.0
    likelihood_noise_sd: float | None = None

    def __post_init__(self):
        for name in ("n_source", "n_target", "n_val", "n_trials"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        if self.likelihood_noise_sd is not None and self.likelihood_noise_sd <= 0:
            raise ValueError("likelihood_noise_sd must be positive when given")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.shift_mode not in ("target-box", "model-param"):
            raise ValueError(f"unknown shift_mode {self.shift_mode!r}")
        if not self.degrees:
            raise ValueError("at least one surrogate degree is required")
        dim = self.model.dimension
        for d in self.degrees:
            if self.n_target < n_pce(dim, d):
                raise ValueError(
                    f"n_target={self.n_target} is under-determined for degree {d} "
                    f"({n_pce(dim, d)} coefficients)"
                )

    def with_shift(self, shift: float) -> "ExperimentConfig":
        """Resolve one sweep point: move the target box or the target task."""
        if self.shift_mode == "target-box":
            return replace(
                self, shift=float(shift),
                target_box=self.target_box.translate(float(shift), axis=self.shift_axis),
            )
        return replace(self, shift=float(shift))

    def target_model(self) -> GenerativeModel:
        if self.shift_mode == "model-param":
            base = float(self.model.parameters.get(self.shift_param, 0.0))
            return self.model.with_parameters(**{self.shift_param: base + self.shift})
        return self.model

    def reference_box(self) -> DomainBox:
        return self.source_box.encompass(self.target_box)

    def noise_var(self) -> float | None:
        """Observation-noise variance assumed by the likelihood algebra.

        likelihood_noise_sd decouples the assumed noise scale from the
        injected one: it acts as a per-task trust level on the fitted
        coefficients and may deliberately dominate the injected noise.
        Falls back to noise_sd; None with noise_sd = 0 means estimate from
        residuals per task.
        """
        sd = self.likelihood_noise_sd if self.likelihood_noise_sd is not None else self.noise_sd
        return sd**2 if sd > 0 else None

    def to_dict(self) -> dict:
        return {
            "model": self.model.name,
            "model_parameters": dict(self.model.parameters),
            "source_box": {"lower": self.source_box.lower.tolist(),
                           "upper": self.source_box.upper.tolist()},
            "target_box": {"lower": self.target_box.lower.tolist(),
                           "upper": self.target_box.upper.tolist()},
            "degrees": list(self.degrees),
            "n_source": self.n_source,
            "n_target": self.n_target,
            "n_val": self.n_val,
            "n_trials": self.n_trials,
            "noise_sd": self.noise_sd,
            "sampler": self.sampler,
            "objective": self.objective,
            "seed": self.seed,
            "shift_mode": self.shift_mode,
            "shift_axis": self.shift_axis,
            "shift_param": self.shift_param,
            "shift": self.shift,
            "lpfp_noise_var": self.lpfp_noise_var,
            "likelihood_noise_sd": self.likelihood_noise_sd,
        }


@dataclass(frozen=True)
class TrialRecord:
    """Scores of one ensemble realization at beta in {0, beta*, 1}."""

    trial: int
    shift: float
    beta_star: float
    lpfp_b0: float
    lpfp_bstar: float
    lpfp_b1: float
    rmse_b0: float
    rmse_bstar: float
    rmse_b1: float
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def as_csv_row(self) -> list:
        return [getattr(self, c) for c in TRIAL_CSV_COLUMNS]


@dataclass(frozen=True)
class TrialData:
    """The sampled datasets of one trial, shared across surrogate degrees."""

    X_source: np.ndarray
    y_source: np.ndarray
    X_target: np.ndarray
    y_target: np.ndarray
    X_val: np.ndarray
    y_val: np.ndarray


def trial_data(cfg: ExperimentConfig, trial: int) -> TrialData:
    """Sample and evaluate all datasets for one trial.

    Training outputs carry injected Gaussian noise of sd cfg.noise_sd;
    validation outputs are noise-free truth.
    """
    seed = cfg.seed
    X_s = sample(cfg.source_box, cfg.n_source, cfg.sampler,
                 derive_seed(seed, trial, "source-points"))
    X_t = sample(cfg.target_box, cfg.n_target, cfg.sampler,
                 derive_seed(seed, trial, "target-points"))
    X_v = sample(cfg.target_box, cfg.n_val, cfg.sampler,
                 derive_seed(seed, trial, "validation-points"))
    target_model = cfg.target_model()
    y_s = cfg.model.evaluate(X_s)
    y_t = target_model.evaluate(X_t)
    y_v = target_model.evaluate(X_v)
    if cfg.noise_sd > 0:
        rng_s = np.random.default_rng(derive_seed(seed, trial, "source-noise"))
        rng_t = np.random.default_rng(derive_seed(seed, trial, "target-noise"))
        y_s = y_s + cfg.noise_sd * rng_s.standard_normal(cfg.n_source)
        y_t = y_t + cfg.noise_sd * rng_t.standard_normal(cfg.n_target)
    return TrialData(X_s, y_s, X_t, y_t, X_v, y_v)


def _failed_record(trial: int, shift: float, reason: str) -> TrialRecord:
    nan = float("nan")
    return TrialRecord(trial, shift, nan, nan, nan, nan, nan, nan, nan,
                       status=f"failed: {reason}")


def run_trial(cfg: ExperimentConfig, trial: int) -> dict[int, TrialRecord]:
    """One ensemble realization for every configured degree.

    Calibration failures (ill-conditioned designs) become failed records
    rather than aborting the sweep.
    """
    data = trial_data(cfg, trial)
    ref_box = cfg.reference_box()
    noise_var = cfg.noise_var()
    records: dict[int, TrialRecord] = {}
    for degree in cfg.degrees:
        spec = BasisSpec.total_order(ref_box, degree)
        try:
            source_lik = likelihood(
                CalibrationTask(spec, data.X_source, data.y_source, noise_var)
            )
            target_lik = likelihood(
                CalibrationTask(spec, data.X_target, data.y_target, noise_var)
            )
            prob = TransferProblem(source_lik, target_lik, cfg.objective)
            result = optimize_beta(prob)
            posteriors = {
                "b0": tempered_posterior(prob, 0.0),
                "bstar": result.tempered_posterior,
                "b1": tempered_posterior(prob, 1.0),
            }
            scores = {}
            for tag, post in posteriors.items():
                pred = pushforward(post, spec, data.X_val,
                                   noise_var=cfg.lpfp_noise_var)
                scores[f"lpfp_{tag}"] = lpfp(pred, data.y_val)
                scores[f"rmse_{tag}"] = rmse(post.mean, spec, data.X_val, data.y_val)
            records[degree] = TrialRecord(
                trial=trial, shift=cfg.shift, beta_star=result.beta_star,
                status="ok", **scores,
            )
        except (CalibrationError, NumericError) as exc:
            records[degree] = _failed_record(trial, cfg.shift, str(exc))
    return records


def run_shift(cfg_template: ExperimentConfig, shift: float,
              workers: int = 1) -> dict[int, list[TrialRecord]]:
    """All trials at one shift, keyed by degree and ordered by trial index."""
    cfg = cfg_template.with_shift(shift)
    trials = range(cfg.n_trials)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(run_trial, [cfg] * cfg.n_trials, trials))
    else:
        per_trial = [run_trial(cfg, t) for t in trials]
    return {d: [per_trial[t][d] for t in trials] for d in cfg.degrees}


def aggregate_records(shift: float, records: list[TrialRecord]) -> dict:
    """Mean/sd summary of one shift's trials; failed trials are excluded."""
    ok = [r for r in records if r.ok]
    row = {"shift": shift, "n_trials": len(records), "n_failed": len(records) - len(ok)}

    def stats(values):
        if not ok:
            return float("nan"), float("nan")
        arr = np.asarray(values, dtype=float)
        return float(arr.mean()), float(arr.std())

    row["beta_star_mean"], row["beta_star_sd"] = stats([r.beta_star for r in ok])
    row["dlpfp_vs_b0_mean"], row["dlpfp_vs_b0_sd"] = stats(
        [r.lpfp_bstar - r.lpfp_b0 for r in ok]
    )
    row["dlpfp_vs_b1_mean"], row["dlpfp_vs_b1_sd"] = stats(
        [r.lpfp_bstar - r.lpfp_b1 for r in ok]
    )
    for tag in ("b0", "bstar", "b1"):
        row[f"rmse_{tag}_mean"], row[f"rmse_{tag}_sd"] = stats(
            [getattr(r, f"rmse_{tag}") for r in ok]
        )
    return row


@dataclass(frozen=True)
class SweepTable:
    """Per-degree sweep output: every trial record plus per-shift aggregates."""

    degree: int
    trials: list[TrialRecord]
    aggregates: list[dict]


def sweep(cfg_template: ExperimentConfig, shifts,
          workers: int = 1) -> list[SweepTable]:
    """Run every shift and aggregate, one table per configured degree."""
    shifts = list(shifts)
    if not shifts:
        raise ValueError("shift list must not be empty")
    trials_by_degree = {d: [] for d in cfg_template.degrees}
    aggregates_by_degree = {d: [] for d in cfg_template.degrees}
    for shift in shifts:
        by_degree = run_shift(cfg_template, shift, workers=workers)
        for d, records in by_degree.items():
            trials_by_degree[d].extend(records)
            aggregates_by_degree[d].append(aggregate_records(shift, records))
    return [
        SweepTable(degree=d, trials=trials_by_degree[d],
                   aggregates=aggregates_by_degree[d])
        for d in cfg_template.degrees
    ]


def pfp_bands(cfg_template: ExperimentConfig, shift: float, trial: int = 0,
              n_grid: int = 121) -> dict[int, list[tuple]]:
    """Plot-ready mean +/- 2 sd bands over the encompassing interval.

    One representative trial per shift; rows are (x, mean, lo, hi, beta_mode)
    with beta_mode in {b0, bstar, b1}.  One-dimensional scenarios only.
    """
    cfg = cfg_template.with_shift(shift)
    if cfg.model.dimension != 1:
        raise ValueError("band export is defined for one-dimensional inputs")
    data = trial_data(cfg, trial)
    ref_box = cfg.reference_box()
    grid = np.linspace(ref_box.lower[0], ref_box.upper[0], n_grid).reshape(-1, 1)
    noise_var = cfg.noise_var()
    out: dict[int, list[tuple]] = {}
    for degree in cfg.degrees:
        spec = BasisSpec.total_order(ref_box, degree)
        source_lik = likelihood(CalibrationTask(spec, data.X_source, data.y_source, noise_var))
        target_lik = likelihood(CalibrationTask(spec, data.X_target, data.y_target, noise_var))
        prob = TransferProblem(source_lik, target_lik, cfg.objective)
        result = optimize_beta(prob)
        posteriors = {
            "b0": tempered_posterior(prob, 0.0),
            "bstar": result.tempered_posterior,
            "b1": tempered_posterior(prob, 1.0),
        }
        rows = []
        for tag, post in posteriors.items():
            pred = pushforward(post, spec, grid, noise_var=cfg.lpfp_noise_var)
            sd = np.sqrt(np.maximum(pred.marginal_var, 0.0))
            for x, m, s in zip(grid[:, 0], pred.mean, sd):
                rows.append((float(x), float(m), float(m - 2 * s), float(m + 2 * s), tag))
        out[degree] = rows
    return out
