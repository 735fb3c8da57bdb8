"""Maximum-entropy band extension over symmetric block circulants.

Among all positive definite block-circulant completions of a covariance
band, the entropy maximizer is the unique one whose inverse is banded of
the same bandwidth.  The solver exploits that structure: instead of
completing the covariance it minimizes the strictly convex dual

    f(M) = <M, C(band)> - log det M

directly over symmetric positive definite banded circulants M, where
C(band) is any circulant completion of the data (the pairing touches
only the given lags because M is banded).  At the minimum the band of
M^{-1} reproduces the data, so Sigma_opt = M^{-1} solves the extension
problem and M itself is the reciprocal model of the data.

The iteration is a damped Newton method in the band coordinates with a
positivity-guarded Armijo backtracking line search; the Hessian
Tr(M^{-1} E_a M^{-1} E_b) is assembled frequency-wise.  Above a band
dimension of HESSIAN_DIM_LIMIT the method falls back to gradient
descent with the same line search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blockcirc import (BlockCirculant, CovBand, assemble_banded,
                        is_strictly_positive, logdet, pd_tolerance,
                        spectral_bounds, unique_frequencies)
from .errors import (ConvergenceError, DimensionError, HorizonExhaustedError,
                     InfeasibleBandError, InfeasibleExtensionError,
                     NotPositiveDefiniteError)
from .feasibility import (ar_extend, block_levinson, feasibility_certificate,
                          wrap_sequence)

HESSIAN_DIM_LIMIT = 2000
COLLAPSE_STEP = 1e-14
DEFAULT_PD_GUARD = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-10
    max_iter: int = 200
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    pd_guard: float = 1e-10

    def __post_init__(self):
        if min(self.grad_tol, self.max_iter, self.armijo_c, self.pd_guard) <= 0:
            raise DimensionError("solver parameters must be positive")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise DimensionError("backtrack_factor must lie in (0, 1)")


@dataclass(frozen=True)
class DualState:
    """Snapshot of the dual iteration."""

    M: "object"          # ReciprocalModel
    objective: float
    grad_norm: float
    iteration: int


@dataclass(frozen=True)
class SolveDiagnostics:
    iterations: int
    objective_trace: list
    grad_norm: float
    band_match: float
    converged: bool
    final_state: DualState | None = field(default=None, repr=False)

    def to_json_dict(self) -> dict:
        return {"iterations": self.iterations,
                "objective_trace": list(self.objective_trace),
                "grad_norm": self.grad_norm,
                "band_match": self.band_match,
                "converged": self.converged}


@dataclass(frozen=True)
class ExtensionResult:
    sigma_opt: BlockCirculant
    model: "object"      # ReciprocalModel
    diagnostics: SolveDiagnostics

    def __iter__(self):
        return iter((self.sigma_opt, self.model, self.diagnostics))


class _BandCoords:
    """Coordinates on symmetric banded circulants of bandwidth n on Z_N.

    Layout: M_0 diagonal entries, M_0 upper off-diagonal pairs, then the
    full blocks M_1..M_n row-major.  ``W[a, u]`` is the frequency response
    of coordinate direction a at the u-th unique frequency.
    """

    def __init__(self, m: int, n: int, N: int):
        self.m, self.n, self.N = m, n, N
        self.dim = m * (m + 1) // 2 + n * m * m
        freqs = unique_frequencies(N)
        self.freq_idx = np.array([l for l, _ in freqs])
        self.mult = np.array([mu for _, mu in freqs], dtype=float)
        W = np.zeros((self.dim, len(freqs), m, m), dtype=complex)
        a = 0
        for i in range(m):
            W[a, :, i, i] = 1.0
            a += 1
        for i in range(m):
            for j in range(i + 1, m):
                W[a, :, i, j] = 1.0
                W[a, :, j, i] = 1.0
                a += 1
        for k in range(1, n + 1):
            phase = np.exp(2j * np.pi * self.freq_idx * k / N)
            for i in range(m):
                for j in range(m):
                    W[a, :, i, j] += phase
                    W[a, :, j, i] += phase.conj()
                    a += 1
        self.W = W

    def blocks_of(self, x: np.ndarray) -> np.ndarray:
        m, n = self.m, self.n
        B = np.zeros((n + 1, m, m))
        a = 0
        for i in range(m):
            B[0, i, i] = x[a]
            a += 1
        for i in range(m):
            for j in range(i + 1, m):
                B[0, i, j] = B[0, j, i] = x[a]
                a += 1
        for k in range(1, n + 1):
            B[k] = x[a:a + m * m].reshape(m, m)
            a += m * m
        return B

    def vec_of(self, blocks: np.ndarray) -> np.ndarray:
        m, n = self.m, self.n
        x = np.empty(self.dim)
        a = 0
        for i in range(m):
            x[a] = blocks[0, i, i]
            a += 1
        for i in range(m):
            for j in range(i + 1, m):
                x[a] = 0.5 * (blocks[0, i, j] + blocks[0, j, i])
                a += 1
        for k in range(1, n + 1):
            x[a:a + m * m] = blocks[k].reshape(-1)
            a += m * m
        return x

    def pair_vec(self, blocks: np.ndarray) -> np.ndarray:
        """Euclidean gradient of x -> <M(x), circulant(blocks)>."""
        m, n, N = self.m, self.n, self.N
        g = np.empty(self.dim)
        a = 0
        for i in range(m):
            g[a] = N * blocks[0, i, i]
            a += 1
        for i in range(m):
            for j in range(i + 1, m):
                g[a] = 2.0 * N * blocks[0, i, j]
                a += 1
        for k in range(1, n + 1):
            g[a:a + m * m] = (2.0 * N) * blocks[k].reshape(-1)
            a += m * m
        return g

    def psi_of(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("a,alij->lij", x, self.W)

    def full_spectrum(self, psi_unique: np.ndarray) -> np.ndarray:
        full = np.empty((self.N, self.m, self.m), dtype=complex)
        for u, l in enumerate(self.freq_idx):
            full[l] = psi_unique[u]
            if self.mult[u] == 2.0:
                full[self.N - l] = psi_unique[u].conj()
        return full


def _eig_floor(psi_unique: np.ndarray, pd_guard: float):
    """Batch eigenvalues of Hermitian parts; (eigs, min, tolerance)."""
    H = 0.5 * (psi_unique + psi_unique.conj().swapaxes(-1, -2))
    w = np.linalg.eigvalsh(H)
    lo = float(w[:, 0].min())
    tol = pd_guard * (1.0 + float(np.abs(w).max()))
    return w, lo, tol


def _logdet_from_eigs(w: np.ndarray, mult: np.ndarray) -> float:
    return float((mult * np.log(w).sum(axis=1)).sum())


def _lag_blocks_of_inverse(coords: _BandCoords, psi_inv_unique: np.ndarray) -> np.ndarray:
    """Lag blocks 0..n of the inverse circulant from its unique spectrum."""
    col = np.fft.ifft(coords.full_spectrum(psi_inv_unique), axis=0).real
    n, N = coords.n, coords.N
    out = np.empty((n + 1, coords.m, coords.m))
    out[0] = 0.5 * (col[0] + col[0].T)
    for k in range(1, n + 1):
        out[k] = 0.5 * (col[(N - k) % N] + col[k].T)
    return out


def _block_norm(blocks: np.ndarray) -> float:
    sq = np.sum(blocks**2, axis=(1, 2))
    return float(np.sqrt(sq[0] + 2.0 * sq[1:].sum()))


def dual_objective(M, band: CovBand) -> float:
    """f(M) = <M, any circulant completion of the band> - log det M."""
    coords, x = _coords_and_vec(M, band)
    psi = coords.psi_of(x)
    w, lo, tol = _eig_floor(psi, DEFAULT_PD_GUARD)
    if lo <= tol:
        raise NotPositiveDefiniteError("dual variable is not positive definite")
    p = coords.pair_vec(_padded_band(band, coords.n))
    return float(p @ x) - _logdet_from_eigs(w, coords.mult)


def dual_gradient(M, band: CovBand) -> BlockCirculant:
    """Banded circulant with lag blocks (data lag k) - (lag k of M^{-1}).

    Pairing this circulant with a banded symmetric direction under the
    trace inner product gives the directional derivative of the dual
    objective (the circulant pairing carries the multiplicity weights).
    """
    coords, x = _coords_and_vec(M, band)
    psi = coords.psi_of(x)
    w, lo, tol = _eig_floor(psi, DEFAULT_PD_GUARD)
    if lo <= tol:
        raise NotPositiveDefiniteError("dual variable is not positive definite")
    G = _lag_blocks_of_inverse(coords, np.linalg.inv(psi))
    gamma = _padded_band(band, coords.n) - G
    return assemble_banded(coords.m, coords.N, gamma)


def _padded_band(band: CovBand, n: int) -> np.ndarray:
    if band.n == n:
        return np.asarray(band.sigma)
    out = np.zeros((n + 1, band.m, band.m))
    out[:band.n + 1] = band.sigma
    return out


def _coords_and_vec(M, band: CovBand):
    if M.m != band.m:
        raise DimensionError("block sizes differ")
    if M.n > band.n:
        raise DimensionError("dual variable bandwidth exceeds the data band")
    coords = _BandCoords(M.m, M.n, M.N)
    return coords, coords.vec_of(np.asarray(M.M_blocks))


def entropy(C: BlockCirculant) -> float:
    """Differential entropy of the zero-mean Gaussian with covariance C."""
    d = C.m * C.N
    return 0.5 * logdet(C) + 0.5 * d * (1.0 + math.log(2.0 * math.pi))


def _infeasibility_report(band: CovBand, N: int) -> dict:
    """Wrap test at this N plus the smallest feasible N within the horizon."""
    report: dict = {"N": N}
    try:
        lev = block_levinson(band)
        extended = np.concatenate(
            [band.sigma, ar_extend(lev, band, max(N // 2 + 1 - band.n, 0))], axis=0)
        wrap = wrap_sequence(band.m, N, extended)
        lo, hi = spectral_bounds(wrap)
        report["wrap_min_eig"] = lo
        report["wrap_feasible"] = bool(lo > pd_tolerance(hi))
    except InfeasibleBandError:
        report["wrap_feasible"] = False
    try:
        cert = feasibility_certificate(band, N_max=max(N, 16 * (2 * band.n + 1)))
        report["smallest_feasible_N"] = cert.N
        report["min_eig_trace"] = {str(k): v for k, v in cert.min_eig_trace.items()}
    except HorizonExhaustedError as exc:
        report["smallest_feasible_N"] = None
        report["min_eig_trace"] = {str(k): v for k, v in exc.min_eig_trace.items()}
    return report


def solve(band: CovBand, N: int, cfg: SolverConfig | None = None,
          init=None) -> ExtensionResult:
    """Maximum-entropy circulant band extension at circle size N.

    Returns the extension Sigma_opt (positive definite, band equal to the
    data, inverse banded of bandwidth n by construction), the reciprocal
    model M = Sigma_opt^{-1}, and the iteration diagnostics.
    """
    from .reciprocal import ReciprocalModel

    cfg = cfg or SolverConfig()
    m, n = band.m, band.n
    if N < 2 * n + 1:
        raise DimensionError(f"N={N} below 2n+1={2 * n + 1}")
    if not is_strictly_positive(band):
        raise InfeasibleBandError("infeasible band: T_n is not positive definite")

    # normalize to unit lag-0 scale; the problem is exactly scale-equivariant
    scale = float(np.linalg.eigvalsh(band.sigma[0]).max())
    wband = band.scaled(1.0 / scale)
    f_shift = m * N * math.log(scale)

    coords = _BandCoords(m, n, N)
    use_newton = coords.dim <= HESSIAN_DIM_LIMIT
    p = coords.pair_vec(np.asarray(wband.sigma))
    band_norm = wband.norm()

    if init is None:
        blocks0 = np.zeros((n + 1, m, m))
        blocks0[0] = 0.5 * np.linalg.inv(wband.sigma[0])
        blocks0[0] = 0.5 * (blocks0[0] + blocks0[0].T)
    else:
        if init.m != m or init.n != n or init.N != N:
            raise DimensionError("initial model dimensions differ")
        blocks0 = scale * np.asarray(init.M_blocks)
    x = coords.vec_of(blocks0)

    psi = coords.psi_of(x)
    w, lo, tol = _eig_floor(psi, cfg.pd_guard)
    if lo <= tol:
        raise NotPositiveDefiniteError("initial dual variable is not PD")
    f = float(p @ x) - _logdet_from_eigs(w, coords.mult)

    trace = [f + f_shift]
    grad_norm_rel = math.inf
    band_match = math.inf
    collapsed = False

    for it in range(1, cfg.max_iter + 1):
        psi_inv = np.linalg.inv(psi)
        G = _lag_blocks_of_inverse(coords, psi_inv)
        gamma = np.asarray(wband.sigma) - G
        g = coords.pair_vec(gamma)
        grad_norm_rel = _block_norm(gamma) / (1.0 + band_norm)
        band_match = max(
            float(np.linalg.norm(gamma[k]) / (1.0 + np.linalg.norm(wband.sigma[k])))
            for k in range(n + 1))
        if grad_norm_rel <= cfg.grad_tol and band_match <= 10.0 * cfg.grad_tol:
            model = ReciprocalModel(m, n, N, coords.blocks_of(x) / scale)
            sigma_opt = _sigma_from_spectrum(coords, psi_inv, scale)
            state = DualState(model, f + f_shift, grad_norm_rel, it - 1)
            diag = SolveDiagnostics(it - 1, trace, grad_norm_rel, band_match, True, state)
            return ExtensionResult(sigma_opt, model, diag)

        if use_newton:
            K = np.einsum("lij,aljk,lkn->alin", psi_inv, coords.W, psi_inv)
            H = np.einsum("alij,blji,l->ab", K, coords.W, coords.mult).real
            H = 0.5 * (H + H.T)
            try:
                s = np.linalg.solve(H, -g)
            except np.linalg.LinAlgError:
                s = -g
            if g @ s >= 0.0:
                s = -g
        else:
            s = -g

        s_psi = coords.psi_of(s)
        gs = float(g @ s)
        # below this, objective comparisons drown in rounding noise
        noise_floor = 1e-14 * (1.0 + abs(f))
        endgame = use_newton and -gs <= noise_floor
        t = 1.0
        while True:
            trial_psi = psi + t * s_psi
            w_t, lo_t, tol_t = _eig_floor(trial_psi, cfg.pd_guard)
            if lo_t > tol_t:
                f_t = float(p @ (x + t * s)) - _logdet_from_eigs(w_t, coords.mult)
                # quadratic endgame: sufficient-decrease test is meaningless
                # at machine precision, the PD guard alone gates the step
                if endgame and f_t <= f + noise_floor:
                    break
                if f_t <= f + cfg.armijo_c * t * gs:
                    break
            t *= cfg.backtrack_factor
            if t < COLLAPSE_STEP:
                collapsed = True
                break
        if not collapsed and not np.any(t * s):
            collapsed = True
        if collapsed:
            break
        x = x + t * s
        psi = psi + t * s_psi
        f = f_t
        trace.append(f + f_shift)

    state = DualState(None, f + f_shift, grad_norm_rel, len(trace) - 1)
    diag = SolveDiagnostics(len(trace) - 1, trace, grad_norm_rel, band_match, False, state)
    report = _infeasibility_report(band, N)
    if not report.get("wrap_feasible", False):
        raise InfeasibleExtensionError(
            f"infeasible: no positive completion found at N={N} "
            f"(wrap min eigenvalue {report.get('wrap_min_eig')})",
            certificate=report, diagnostics=diag)
    if collapsed:
        raise ConvergenceError(
            "no convergence: line search collapsed on a feasible instance",
            diagnostics=diag)
    raise ConvergenceError(
        f"no convergence within {cfg.max_iter} iterations "
        f"(relative gradient {grad_norm_rel:.3e})", diagnostics=diag)


def _sigma_from_spectrum(coords: _BandCoords, psi_inv_unique: np.ndarray,
                         scale: float = 1.0) -> BlockCirculant:
    inv_herm = 0.5 * (psi_inv_unique + psi_inv_unique.conj().swapaxes(-1, -2))
    col = np.fft.ifft(coords.full_spectrum(inv_herm), axis=0).real
    return BlockCirculant(coords.m, coords.N, scale * col)
