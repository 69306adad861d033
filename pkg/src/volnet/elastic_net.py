"""ElasticNet regression via cyclic coordinate descent, plus forward-chaining
time-series cross-validation for the penalty strength.

Objective, for an M x P design X and target y with no intercept:

    F(g) = (1/M) ||y - X g||^2 + lam * (alpha * ||g||_1 + (1-alpha)/2 * ||g||_2^2)

The residual sum of squares is divided by M (mean-squared-error form) so lam
is comparable across sample sizes; textbook displays of the same penalty often
omit the 1/M. Columns are scaled to unit sample variance internally (scaled,
not centered; there is no intercept to absorb centering) and coefficients are
mapped back to the original feature scale on return. The coordinate update is

    g_j <- soft_threshold((2/M) x_j' r_(-j), lam*alpha) / ((2/M) ||x_j||^2 + lam*(1-alpha))

where r_(-j) is the residual excluding feature j's contribution. The solver
works on precomputed Gram products, so a full sweep costs O(P^2) independent
of M after setup.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DidNotConvergeWarning, GridEmpty, NonFiniteInput, TooFewObservations

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 10_000
# alpha below this would send lambda_max to infinity; clamp for grid purposes
_MIN_ALPHA_FOR_GRID = 1e-3


@dataclass(frozen=True)
class PenaltySpec:
    lam: float
    alpha: float = 0.5

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class ElasticNetFit:
    coef: np.ndarray      # original feature scale
    n_sweeps: int
    converged: bool
    objective: float      # final value of F on the scaled problem


@dataclass(frozen=True)
class CvResult:
    lambda_grid: np.ndarray
    mean_val_mse: np.ndarray
    selected_lambda: float
    fold_boundaries: tuple[tuple[int, int], ...]


def soft_threshold(z: float, t: float) -> float:
    if z > t:
        return z - t
    if z < -t:
        return z + t
    return 0.0


def _column_scales(X: np.ndarray) -> np.ndarray:
    s = np.std(X, axis=0, ddof=1) if X.shape[0] > 1 else np.zeros(X.shape[1])
    return np.where(np.isfinite(s) & (s > 0), s, 1.0)


def fit_elastic_net(X: np.ndarray, y: np.ndarray, pen: PenaltySpec,
                    tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                    standardize: bool = True,
                    warm_start: np.ndarray | None = None) -> ElasticNetFit:
    """Minimize F by cyclic coordinate descent.

    Convergence: max absolute coefficient change (scaled problem) below tol.
    Hitting max_iter is a soft failure: a DidNotConvergeWarning is issued and
    the last iterate is returned with converged=False.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise NonFiniteInput("design or target contains non-finite values")
    M, P = X.shape
    if len(y) != M:
        raise ValueError(f"X has {M} rows but y has {len(y)}")
    if P == 0:
        return ElasticNetFit(np.empty(0), 0, True, float(y @ y) / M)

    scale = _column_scales(X) if standardize else np.ones(P)
    Xs = X / scale

    q = (2.0 / M) * (Xs.T @ y)
    G = (2.0 / M) * (Xs.T @ Xs)
    diag = G.diagonal().copy()
    den = diag + pen.lam * (1.0 - pen.alpha)
    thr = pen.lam * pen.alpha
    y_term = float(y @ y) / M

    gamma = np.zeros(P) if warm_start is None else np.asarray(warm_start, dtype=float) * scale

    def objective_value(g: np.ndarray, Gg: np.ndarray) -> float:
        return (y_term - q @ g + 0.5 * (g @ Gg)
                + pen.lam * (pen.alpha * np.abs(g).sum() + 0.5 * (1 - pen.alpha) * (g @ g)))

    Gg = G @ gamma
    prev_obj = objective_value(gamma, Gg)
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        max_delta = 0.0
        for j in range(P):
            gj = gamma[j]
            rho = q[j] - Gg[j] + diag[j] * gj
            new = soft_threshold(rho, thr) / den[j] if den[j] > 0 else 0.0
            if new != gj:
                gamma[j] = new
                Gg += G[:, j] * (new - gj)
                max_delta = max(max_delta, abs(new - gj))
        Gg = G @ gamma  # refresh: incremental updates accumulate rounding
        obj = objective_value(gamma, Gg)
        assert obj <= prev_obj + 1e-9 * (1.0 + abs(prev_obj)), \
            f"objective rose from {prev_obj!r} to {obj!r} on sweep {sweeps}"
        prev_obj = obj
        if max_delta < tol:
            converged = True
            break
    if not converged:
        warnings.warn(f"coordinate descent did not converge in {max_iter} sweeps "
                      f"(last max change {max_delta:.3e})", DidNotConvergeWarning,
                      stacklevel=2)
    return ElasticNetFit(gamma / scale, sweeps, converged, prev_obj)


def objective(X: np.ndarray, y: np.ndarray, coef: np.ndarray, pen: PenaltySpec,
              standardize: bool = True) -> float:
    """F evaluated at original-scale coefficients, on the scaled problem."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    M = X.shape[0]
    scale = _column_scales(X) if standardize else np.ones(X.shape[1])
    g = np.asarray(coef, dtype=float) * scale
    resid = y - (X / scale) @ g
    return (float(resid @ resid) / M
            + pen.lam * (pen.alpha * np.abs(g).sum() + 0.5 * (1 - pen.alpha) * float(g @ g)))


def kkt_violation(X: np.ndarray, y: np.ndarray, coef: np.ndarray, pen: PenaltySpec,
                  standardize: bool = True) -> float:
    """Largest stationarity violation at `coef`; 0 at an exact optimum.

    Zero coefficients need |(2/M) x_j' r| <= lam*alpha; active ones need
    equality against the penalty subgradient.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    M = X.shape[0]
    scale = _column_scales(X) if standardize else np.ones(X.shape[1])
    g = np.asarray(coef, dtype=float) * scale
    Xs = X / scale
    grad = (2.0 / M) * (Xs.T @ (y - Xs @ g))  # q - G g
    worst = 0.0
    for j in range(len(g)):
        if g[j] == 0.0:
            worst = max(worst, abs(grad[j]) - pen.lam * pen.alpha)
        else:
            target = pen.lam * pen.alpha * np.sign(g[j]) + pen.lam * (1 - pen.alpha) * g[j]
            worst = max(worst, abs(grad[j] - target))
    return max(worst, 0.0)


def lambda_max(X: np.ndarray, y: np.ndarray, alpha: float = 0.5,
               standardize: bool = True) -> float:
    """Smallest lam for which the all-zero solution is optimal."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    M = X.shape[0]
    scale = _column_scales(X) if standardize else np.ones(X.shape[1])
    q = (2.0 / M) * ((X / scale).T @ y)
    return float(np.max(np.abs(q))) / max(alpha, _MIN_ALPHA_FOR_GRID) if q.size else 0.0


def default_lambda_grid(X: np.ndarray, y: np.ndarray, alpha: float = 0.5,
                        size: int = 60, ratio: float = 1e-4,
                        standardize: bool = True) -> np.ndarray:
    """Log-spaced grid from lambda_max down to lambda_max * ratio, descending."""
    top = lambda_max(X, y, alpha, standardize)
    if top <= 0.0:
        return np.array([0.0])
    return np.geomspace(top, top * ratio, size)


def cross_validate_lambda(X: np.ndarray, y: np.ndarray, grid: np.ndarray,
                          alpha: float = 0.5, n_folds: int = 5,
                          tol: float = DEFAULT_TOL,
                          max_iter: int = DEFAULT_MAX_ITER) -> CvResult:
    """Forward-chaining CV: fold k validates on block k, trains on blocks < k.

    Selection applies the one-standard-error rule in the sparse direction:
    among lam whose mean validation MSE is within one SE of the minimum, the
    LARGEST lam wins. Column scaling inside each fit sees training rows only.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise GridEmpty("empty lambda grid")
    if n_folds < 2:
        raise ValueError(f"n_folds must be >= 2, got {n_folds}")
    M, P = X.shape
    if M < n_folds:
        raise TooFewObservations(f"{M} rows cannot form {n_folds} folds")
    if M < n_folds * (P + 5):
        warnings.warn(f"only {M} rows for {n_folds}-fold CV with {P} features; "
                      "validation MSE will be noisy", UserWarning, stacklevel=2)

    blocks = np.array_split(np.arange(M), n_folds)
    order = np.argsort(grid)[::-1]  # descending: warm starts shrink toward OLS
    fold_mse = np.empty((n_folds - 1, grid.size))
    for f, k in enumerate(range(1, n_folds)):
        train = np.arange(blocks[k][0])
        val = blocks[k]
        warm = None
        for gi in order:
            fit = fit_elastic_net(X[train], y[train], PenaltySpec(grid[gi], alpha),
                                  tol=tol, max_iter=max_iter, warm_start=warm)
            warm = fit.coef
            err = y[val] - X[val] @ fit.coef
            fold_mse[f, gi] = float(err @ err) / len(val)

    mean_mse = fold_mse.mean(axis=0)
    best = int(np.argmin(mean_mse))
    if fold_mse.shape[0] > 1:
        se = float(np.std(fold_mse[:, best], ddof=1)) / np.sqrt(fold_mse.shape[0])
    else:
        se = 0.0
    eligible = grid[mean_mse <= mean_mse[best] + se]
    selected = float(np.max(eligible))
    bounds = tuple((int(b[0]), int(b[-1]) + 1) for b in blocks)
    return CvResult(grid, mean_mse, selected, bounds)
