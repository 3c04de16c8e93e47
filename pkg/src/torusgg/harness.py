"""Replicated experiments, estimators and hypothesis tests for the limit theory.

Every statistic is a pure function of an ExperimentConfig: replication r draws
its cloud from an avalanche-mixed seed, so reports are deterministic and
replications are independent tasks.  Significance level is 0.01 throughout.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc

from . import functionals as fn
from .asymptotics import predicted_cov, predicted_mean
from .gilbert import ComponentCapExceeded, build_filtration
from .rng import mix_seed
from .torus import PointCapExceeded, WindowSpec, sample_poisson_cloud

ALPHA = 0.01
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation experiment: window, functional, grid, replication plan."""

    window: WindowSpec
    functional_spec: str
    t_grid: tuple
    replications: int
    master_seed: int
    convention: str = "poisson_consistent"
    intervals: tuple = ()               # (lo, hi) grid pairs for increment diagnostics
    max_component_size: int = 32
    max_points: int = 10_000_000

    def __post_init__(self):
        grid = tuple(float(t) for t in self.t_grid)
        if not grid or list(grid) != sorted(grid) or any(
                not (0.0 < t <= 1.0) for t in grid):
            raise ValueError("t_grid must be ascending within (0, 1]")
        object.__setattr__(self, "t_grid", grid)
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        for lo, hi in self.intervals:
            if lo >= hi or lo not in grid or hi not in grid:
                raise ValueError("intervals must be (lo, hi) pairs of grid points")

    def functional(self):
        return fn.parse_functional(self.functional_spec)


@dataclass(frozen=True)
class ReplicationResult:
    """values[r, c]: functional value of surviving replication r at grid point c."""

    values: np.ndarray
    failures: tuple            # (replication index, message) pairs
    requested: int
    indices: tuple = ()        # original replication index per surviving row


def run_replications(config: ExperimentConfig) -> ReplicationResult:
    """Independent seeded replications; aborts when more than 1% of them fail."""
    functional = config.functional()
    is_multi = isinstance(functional, fn.MultiFunctional)
    if is_multi and len(config.t_grid) != functional.arity:
        raise ValueError("t_grid length must equal the functional arity")
    rows = []
    indices = []
    failures = []
    max_failures = max(int(0.01 * config.replications), 0)
    for r in range(config.replications):
        seed_r = mix_seed(config.master_seed, r)
        try:
            cloud = sample_poisson_cloud(config.window, seed_r, config.max_points)
            filt = build_filtration(cloud)
            if is_multi:
                row = [fn.evaluate_multi(functional, filt, config.t_grid,
                                         config.max_component_size)]
            else:
                row = [fn.evaluate_additive(functional, filt, t,
                                            config.max_component_size)
                       for t in config.t_grid]
        except (ComponentCapExceeded, PointCapExceeded) as exc:
            failures.append((r, str(exc)))
            if len(failures) > max_failures:
                raise RuntimeError(
                    f"{len(failures)} of {r + 1} replications failed "
                    f"(> 1% of {config.replications}); last error: {exc}") from exc
            continue
        rows.append(row)
        indices.append(r)
    values = np.array(rows, dtype=float) if rows else np.zeros((0, len(config.t_grid)))
    return ReplicationResult(values=values, failures=tuple(failures),
                             requested=config.replications, indices=tuple(indices))


# ---------------------------------------------------------------------------
# estimators

def summarize(result: ReplicationResult, config: ExperimentConfig,
              profile=None, rho_value=None) -> dict:
    """Moment section: means/variances with 99% CIs, prediction ratios under
    both covariance conventions, and per-interval increment statistics."""
    values = result.values
    n = values.shape[0]
    if n < 30:
        raise ValueError("need at least 30 surviving replications for CIs")
    grid = config.t_grid
    means = values.mean(axis=0)
    variances = values.var(axis=0, ddof=1)
    se_mean = np.sqrt(variances / n)
    cov = np.cov(values.T) if len(grid) > 1 else np.array([[variances[0]]])
    per_threshold = []
    for c, t in enumerate(grid):
        entry = {
            "t": t,
            "mean": float(means[c]),
            "mean_ci_halfwidth": float(_Z99 * se_mean[c]),
            "var": float(variances[c]),
            "var_ci_halfwidth": float(_Z99 * variances[c] * math.sqrt(2.0 / max(n - 1, 1))),
            "degenerate": bool(variances[c] == 0.0),
        }
        if profile is not None and rho_value is not None:
            pm = predicted_mean(profile, rho_value, t)
            entry["predicted_mean"] = pm
            entry["mean_ratio"] = float(means[c] / pm) if pm != 0 else None
            for convention in ("poisson_consistent", "as_printed"):
                pv = predicted_cov(profile, rho_value, t, t, convention)
                entry[f"var_ratio_{convention}"] = (
                    float(variances[c] / pv) if pv != 0 else None)
        per_threshold.append(entry)

    section = {
        "replications": int(n),
        "failed": len(result.failures),
        "alpha": ALPHA,
        "per_threshold": per_threshold,
        "covariance": cov.tolist(),
    }
    if profile is not None and len(grid) > 1:
        t_last = grid[-1]
        var_last = variances[-1]
        section["cov_ratio_vs_time_change"] = [
            {"t": t, "cov_ratio": float(cov[c, -1] / var_last) if var_last else None,
             "time_change": t ** profile.k0 / t_last ** profile.k0}
            for c, t in enumerate(grid)]
    if config.intervals and rho_value:
        incs = []
        for lo, hi in config.intervals:
            a = values[:, grid.index(lo)]
            b = values[:, grid.index(hi)]
            inc = b - a
            scale = rho_value * (hi - lo)
            incs.append({"interval": [lo, hi],
                         "c_inc_mean": float(inc.mean() / scale),
                         "c_inc_var": float(inc.var(ddof=1) / scale)})
        section["increments"] = incs
    return section


def _normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def kolmogorov_sf(lam: float) -> float:
    """Asymptotic Kolmogorov survival function Q(lam) = 2 sum (-1)^(j-1) e^(-2 j^2 lam^2)."""
    if lam <= 0:
        return 1.0
    total = 0.0
    for j in range(1, 101):
        term = math.exp(-2.0 * j * j * lam * lam)
        total += -term if j % 2 == 0 else term
        if term < 1e-16:
            break
    return max(min(2.0 * total, 1.0), 0.0)


def ks_normal_test(sample) -> tuple:
    """One-sample KS statistic and p-value of a standardized sample vs N(0, 1)."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n < 100:
        raise ValueError(f"KS test needs a sample of >= 100, got {n}")
    cdf = np.array([_normal_cdf(v) for v in x])
    up = np.arange(1, n + 1) / n
    low = np.arange(0, n) / n
    stat = float(max(np.max(up - cdf), np.max(cdf - low)))
    return stat, kolmogorov_sf(math.sqrt(n) * stat)


def standardized(col) -> np.ndarray:
    col = np.asarray(col, dtype=float)
    sd = col.std(ddof=1)
    if sd == 0:
        raise ValueError("cannot standardize a degenerate sample")
    return (col - col.mean()) / sd


@dataclass(frozen=True)
class PoissonGof:
    dispersion_index: float
    chi_square_p: float
    degenerate: bool
    detail: dict = field(default_factory=dict)


def _chi_square_cells(cells):
    """Merge (expected, observed) cells left to right so expected >= 5 per bin."""
    bins = []
    acc_e = acc_o = 0.0
    for e, o in cells:
        acc_e += e
        acc_o += o
        if acc_e >= 5.0:
            bins.append((acc_e, acc_o))
            acc_e = acc_o = 0.0
    if acc_e > 0 or acc_o > 0:
        if bins:
            e0, o0 = bins.pop()
            bins.append((e0 + acc_e, o0 + acc_o))
        else:
            bins.append((acc_e, acc_o))
    return bins


def _counts_gof(counts, pmf, dispersion) -> PoissonGof:
    n = counts.size
    kmax = int(counts.max())
    observed = np.bincount(counts, minlength=kmax + 1).astype(float)
    tail = max(1.0 - float(np.sum(pmf[:kmax + 1])), 0.0)
    cells = [(pmf[k] * n, observed[k]) for k in range(kmax + 1)]
    cells.append((tail * n, 0.0))
    bins = _chi_square_cells(cells)
    if len(bins) < 2:
        return PoissonGof(dispersion_index=dispersion, chi_square_p=float("nan"),
                          degenerate=True,
                          detail={"reason": "fewer than 2 bins with expected >= 5"})
    stat = sum((o - e) ** 2 / e for e, o in bins)
    dof = len(bins) - 1
    p = float(gammaincc(dof / 2.0, stat / 2.0))
    return PoissonGof(dispersion_index=dispersion, chi_square_p=p, degenerate=False,
                      detail={"bins": len(bins), "statistic": float(stat), "dof": dof})


def _integer_counts(counts):
    counts = np.asarray(counts)
    if counts.size == 0 or np.any(counts < 0) or not np.all(
            counts == np.floor(counts)):
        raise ValueError("counts must be nonnegative integers")
    return counts.astype(np.int64)


def poisson_gof(counts, mean_hypothesis: float) -> PoissonGof:
    """Dispersion index and chi-square GOF against Poisson(mean_hypothesis).

    Bins are merged so every expected count is >= 5; the upper tail is one bin.
    """
    counts = _integer_counts(counts)
    if mean_hypothesis <= 0:
        raise ValueError("mean_hypothesis must be positive")
    mean = counts.mean()
    if counts.max() == counts.min() and mean == 0:
        return PoissonGof(dispersion_index=float("nan"), chi_square_p=float("nan"),
                          degenerate=True, detail={"reason": "all counts zero"})
    dispersion = float(counts.var(ddof=1) / mean)
    mu = mean_hypothesis
    log_mu = math.log(mu)
    pmf = np.array([math.exp(-mu + k * log_mu - math.lgamma(k + 1))
                    for k in range(int(counts.max()) + 1)])
    return _counts_gof(counts, pmf, dispersion)


def compound_gof(counts, pmf) -> PoissonGof:
    """Chi-square GOF of integer counts against an explicit pmf over 0..cap."""
    counts = _integer_counts(counts)
    pmf = np.asarray(pmf, dtype=float)
    if pmf.size < int(counts.max()) + 1:
        raise ValueError("pmf must cover the observed range")
    mean = counts.mean()
    dispersion = float(counts.var(ddof=1) / mean) if mean > 0 else float("nan")
    return _counts_gof(counts, pmf, dispersion)


def fclt_check(result: ReplicationResult, config: ExperimentConfig, profile) -> dict:
    """Marginal normality per threshold, variance curve vs t^k0, increment correlations."""
    values = result.values
    grid = config.t_grid
    if len(grid) < 3:
        raise ValueError("fclt_check needs a grid of >= 3 thresholds")
    if values.shape[1] != len(grid):
        raise ValueError("fclt_check needs per-threshold columns (additive runs)")
    ks_rows = []
    for c, t in enumerate(grid):
        col = values[:, c]
        if col.std(ddof=1) == 0:
            ks_rows.append({"t": t, "degenerate": True})
            continue
        if col.size < 100:
            ks_rows.append({"t": t, "degenerate": False,
                            "skipped": "needs >= 100 replications"})
            continue
        stat, p = ks_normal_test(standardized(col))
        ks_rows.append({"t": t, "statistic": stat, "p": p,
                        "pass": bool(p > ALPHA), "degenerate": False})
    var_last = values[:, -1].var(ddof=1)
    t_last = grid[-1]
    curve = []
    max_dev = 0.0
    for c, t in enumerate(grid):
        ratio = values[:, c].var(ddof=1) / var_last if var_last else float("nan")
        target = (t / t_last) ** profile.k0
        curve.append({"t": t, "var_ratio": float(ratio), "target": target})
        if not math.isnan(ratio):
            max_dev = max(max_dev, abs(ratio - target))
    incr_corr = []
    for c in range(len(grid) - 1):
        a = values[:, c]
        inc = values[:, c + 1] - a
        if a.std(ddof=1) == 0 or inc.std(ddof=1) == 0:
            incr_corr.append({"t": grid[c], "t_next": grid[c + 1], "degenerate": True})
            continue
        corr = float(np.corrcoef(a, inc)[0, 1])
        incr_corr.append({"t": grid[c], "t_next": grid[c + 1], "corr": corr})
    monotone = None
    functional = config.functional()
    if isinstance(functional, fn.AdditiveFunctional) and functional.increasing:
        monotone = bool(np.all(np.diff(values, axis=1) >= 0))
    return {"ks": ks_rows, "variance_curve": curve,
            "variance_curve_max_dev": float(max_dev),
            "increment_correlations": incr_corr,
            "monotone_paths": monotone}


def chentsov_diagnostic(result: ReplicationResult, config: ExperimentConfig,
                        rho_value: float, intervals=None) -> list:
    """Fourth-moment ratio per interval: E[(centered increment)^4]/(rho^2 |E|^{3/2}).

    Intervals shorter than rho^(-2/3) are marked excluded (not d-big).
    """
    values = result.values
    grid = config.t_grid
    intervals = list(intervals or config.intervals
                     or zip(grid, grid[1:]))  # default: consecutive grid pairs
    cutoff = rho_value ** (-2.0 / 3.0)
    rows = []
    for lo, hi in intervals:
        inc = values[:, grid.index(hi)] - values[:, grid.index(lo)]
        centered = inc - inc.mean()
        length = hi - lo
        ratio = float((centered ** 4).mean() / (rho_value ** 2 * length ** 1.5))
        rows.append({"interval": [lo, hi], "length": length, "ratio": ratio,
                     "excluded": bool(length < cutoff)})
    return rows


def multiadditive_check(configs, rho_values, band_c: float = 10.0) -> dict:
    """Order-of-rho verdicts for a multi functional across a d-schedule.

    For each schedule point: empirical mean/rho and var/rho must land in
    [1/band_c, band_c].
    """
    if band_c <= 1:
        raise ValueError("band_c must exceed 1")
    rows = []
    all_pass = True
    for config, rho_value in zip(configs, rho_values):
        result = run_replications(config)
        col = result.values[:, 0]
        mean_ratio = float(col.mean() / rho_value)
        var_ratio = float(col.var(ddof=1) / rho_value)
        ok = (1.0 / band_c <= mean_ratio <= band_c
              and 1.0 / band_c <= var_ratio <= band_c)
        all_pass = all_pass and ok
        rows.append({"d": config.window.d, "lambda": config.window.lam,
                     "b": config.window.b, "replications": int(col.size),
                     "mean_over_rho": mean_ratio, "var_over_rho": var_ratio,
                     "pass": ok})
    return {"band": [1.0 / band_c, band_c], "schedule": rows,
            "pass": bool(all_pass)}
