"""Maximum-likelihood identification of reciprocal AR models.

The circular sample covariances of the data are sufficient statistics
for the banded exponential family, so identification reduces to the
maximum-entropy band extension of the sample band: the estimated model
is the banded inverse of that extension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockcirc import CovBand, is_strictly_positive, logdet
from .errors import DegenerateDataError, DimensionError
from .maxent import ExtensionResult, SolveDiagnostics, SolverConfig, solve
from .reciprocal import Dataset, ReciprocalModel


@dataclass(frozen=True)
class SufficientStats:
    """Circular sample covariances S_hat_0..S_hat_n."""

    m: int
    n: int
    sigma_hat: np.ndarray  # (n+1, m, m)

    def as_band(self) -> CovBand:
        return CovBand(self.m, self.n, self.sigma_hat)


@dataclass(frozen=True)
class IdentifyResult:
    model: ReciprocalModel
    sigma_opt: "object"        # BlockCirculant
    diagnostics: SolveDiagnostics
    stats: SufficientStats
    log_likelihood: float

    def __iter__(self):
        return iter((self.model, self.sigma_opt, self.diagnostics))


def sufficient_statistics(data: Dataset, n: int) -> SufficientStats:
    """Circular sample covariances up to lag n.

    S_hat_k = (1/(N*T)) sum_t sum_s y_t((s+k) mod N) y_t(s)^T, the lag-0
    estimate symmetrized.  Realizations are accumulated in a fixed order.
    """
    if 2 * n >= data.N:
        raise DimensionError(f"lag order {n} is not below N/2 for N={data.N}")
    Y = np.asarray(data.realizations)
    scale = 1.0 / (data.N * data.T)
    out = np.empty((n + 1, data.m, data.m))
    for k in range(n + 1):
        acc = np.einsum("tsi,tsj->ij", np.roll(Y, -k, axis=1), Y)
        out[k] = scale * acc
    out[0] = 0.5 * (out[0] + out[0].T)
    return SufficientStats(data.m, n, out)


def log_likelihood(model: ReciprocalModel, stats: SufficientStats, T: int) -> float:
    """Average per-sample Gaussian log-likelihood, constants dropped.

    L = log det(M_N) - N Tr(M_0 S_hat_0) - 2N sum_k Tr(M_k^T S_hat_k),
    which is log det(M_N) - Tr(M_N times the dense sample covariance).
    Only differences and the argmax are meaningful.
    """
    if model.m != stats.m:
        raise DimensionError("block sizes differ")
    if model.n > stats.n:
        raise DimensionError("model bandwidth exceeds available statistics")
    if T < 1:
        raise DimensionError("need T >= 1")
    M = model.assembled()
    ld = logdet(M)
    N = model.N
    pair = N * float(np.trace(model.M_blocks[0] @ stats.sigma_hat[0]))
    for k in range(1, model.n + 1):
        pair += 2.0 * N * float(np.sum(model.M_blocks[k] * stats.sigma_hat[k]))
    return ld - pair


def identify(data: Dataset, n: int, cfg: SolverConfig | None = None,
             ridge: float = 0.0, extend_N: int | None = None) -> IdentifyResult:
    """Estimate the order-n reciprocal model of the data.

    Composes sufficient_statistics, the maximum-entropy extension of the
    sample band at N (the data period unless extend_N overrides it), and
    the banded-inverse readout.  A positive ridge adds ridge*I to the
    lag-0 sample covariance before solving.
    """
    stats = sufficient_statistics(data, n)
    sigma = np.asarray(stats.sigma_hat)
    if ridge > 0.0:
        sigma = sigma.copy()
        sigma[0] = sigma[0] + ridge * np.eye(data.m)
    band = CovBand(data.m, n, sigma)
    if not is_strictly_positive(band):
        raise DegenerateDataError(
            "insufficient or degenerate data: sample Toeplitz matrix not PD")
    N = data.N if extend_N is None else int(extend_N)
    result: ExtensionResult = solve(band, N, cfg)
    L = log_likelihood(result.model, stats, data.T)
    return IdentifyResult(result.model, result.sigma_opt, result.diagnostics,
                          stats, L)
