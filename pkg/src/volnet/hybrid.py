"""Two-step hybrid estimator: OLS own-lag dynamics plus sparse cross-market
spillovers.

Step 1 fits each asset's univariate HAR model by least squares. Step 2
regresses the step-1 residuals on the other assets' daily/weekly/monthly
features with an ElasticNet penalty, one target asset at a time, with the
penalty strength chosen by forward-chaining cross-validation (or supplied
fixed, as the bootstrap requires). The final residuals feed the covariance
matrix used to build correlated joint shocks.

Cross-feature ordering is fixed as (source asset in input order, skipping the
target itself) x (daily, weekly, monthly); serialized models carry a version
tag for this layout.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .elastic_net import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    PenaltySpec,
    cross_validate_lambda,
    default_lambda_grid,
    fit_elastic_net,
)
from .errors import HistoryTooShort
from .har import DEFAULT_LAGS, HarCoefficients, HarFeatures, fit_har_ols, lag_means
from .rv import RvPanel

FEATURE_ORDER_TAG = "source-major-dwm-v1"
HORIZON_LABELS = ("daily", "weekly", "monthly")


@dataclass(frozen=True)
class FitConfig:
    alpha: float = 0.5
    lambda_grid: tuple[float, ...] | None = None  # None: per-asset data-driven grid
    grid_size: int = 60
    grid_ratio: float = 1e-4
    cv_folds: int = 5
    lags: tuple[int, int, int] = DEFAULT_LAGS
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER


@dataclass(frozen=True)
class HybridModel:
    assets: tuple[str, ...]
    own: tuple[HarCoefficients, ...]
    cross: np.ndarray           # K x (K-1) x 3, target-major; no self entries
    selected_lambda: np.ndarray
    residual_cov: np.ndarray    # K x K, sample covariance of final residuals
    lags: tuple[int, int, int] = DEFAULT_LAGS
    alpha: float = 0.5
    sample_start: dt.date | None = None
    sample_end: dt.date | None = None
    n_obs: int = 0
    seed_tail: np.ndarray | None = None  # last max(lags) panel rows; default IRF seed

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    def sources(self, target: int) -> list[int]:
        return [j for j in range(self.n_assets) if j != target]

    @cached_property
    def dense_cross(self) -> np.ndarray:
        """K x K x 3 tensor with explicit zeros on the diagonal blocks."""
        K = self.n_assets
        dense = np.zeros((K, K, 3))
        for i in range(K):
            for s, j in enumerate(self.sources(i)):
                dense[i, j] = self.cross[i, s]
        return dense

    @cached_property
    def _own_beta(self) -> np.ndarray:
        return np.array([[c.beta_d, c.beta_w, c.beta_m] for c in self.own])

    @cached_property
    def _intercepts(self) -> np.ndarray:
        return np.array([c.intercept for c in self.own])

    def _features_now(self, tail: np.ndarray) -> np.ndarray:
        m = max(self.lags)
        return np.stack([tail[m - lag:].mean(axis=0) for lag in self.lags])  # 3 x K

    def predict_one_step(self, history: np.ndarray) -> np.ndarray:
        history = np.asarray(history, dtype=float)
        m = max(self.lags)
        if history.ndim != 2 or history.shape[0] < m or history.shape[1] != self.n_assets:
            raise HistoryTooShort(f"need >= {m} rows x {self.n_assets} assets")
        A = self._features_now(history[-m:])
        own = self._intercepts + np.einsum("ih,hi->i", self._own_beta, A)
        return own + np.einsum("ijh,hj->i", self.dense_cross, A)


def _panel_features(panel: RvPanel, lags: Sequence[int]) -> np.ndarray:
    """M x K x 3 trailing-average features, aligned to panel rows max(lags)..N-1."""
    return np.stack([lag_means(panel.values[:, i], lags) for i in range(panel.n_assets)],
                    axis=1)


def fit_hybrid(rv: RvPanel, cfg: FitConfig = FitConfig(),
               fixed_lambdas: Sequence[float] | None = None) -> HybridModel:
    """Fit the two-step model on a full panel.

    With fixed_lambdas given (one per asset) the cross-validation stage is
    skipped; the bootstrap relies on this to hold regularization constant
    across replicates.
    """
    K = rv.n_assets
    m = max(cfg.lags)
    feats = _panel_features(rv, cfg.lags)
    targets = rv.values[m:]
    M = targets.shape[0]

    own: list[HarCoefficients] = []
    cross = np.zeros((K, max(K - 1, 0), 3))
    lambdas = np.zeros(K)
    xi = np.empty((M, K))
    for i in range(K):
        har = HarFeatures(targets[:, i], feats[:, i, 0], feats[:, i, 1], feats[:, i, 2])
        coef, resid = fit_har_ols(har)
        own.append(coef)
        if K == 1:
            xi[:, i] = resid
            continue
        sources = [j for j in range(K) if j != i]
        X_cross = feats[:, sources, :].reshape(M, 3 * (K - 1))
        if fixed_lambdas is not None:
            lam = float(fixed_lambdas[i])
        else:
            grid = (np.asarray(cfg.lambda_grid, dtype=float) if cfg.lambda_grid is not None
                    else default_lambda_grid(X_cross, resid, cfg.alpha,
                                             cfg.grid_size, cfg.grid_ratio))
            cv = cross_validate_lambda(X_cross, resid, grid, cfg.alpha, cfg.cv_folds,
                                       cfg.tol, cfg.max_iter)
            lam = cv.selected_lambda
        lambdas[i] = lam
        fit = fit_elastic_net(X_cross, resid, PenaltySpec(lam, cfg.alpha),
                              tol=cfg.tol, max_iter=cfg.max_iter)
        cross[i] = fit.coef.reshape(K - 1, 3)
        xi[:, i] = resid - X_cross @ fit.coef

    cov = np.cov(xi, rowvar=False, ddof=1).reshape(K, K)
    cov = 0.5 * (cov + cov.T)
    return HybridModel(
        assets=rv.assets, own=tuple(own), cross=cross, selected_lambda=lambdas,
        residual_cov=cov, lags=tuple(cfg.lags), alpha=cfg.alpha,
        sample_start=rv.dates[0], sample_end=rv.dates[-1], n_obs=M,
        seed_tail=rv.values[-m:].copy(),
    )


def residual_covariance(model: HybridModel, rv: RvPanel) -> np.ndarray:
    """Sample covariance (M-1 denominator) of in-sample one-step residuals."""
    m = max(model.lags)
    feats = _panel_features(rv, model.lags)
    own = model._intercepts + np.einsum("ih,tih->ti", model._own_beta, feats)
    pred = own + np.einsum("ijh,tjh->ti", model.dense_cross, feats)
    resid = rv.values[m:] - pred
    cov = np.cov(resid, rowvar=False, ddof=1).reshape(model.n_assets, model.n_assets)
    return 0.5 * (cov + cov.T)


@dataclass(frozen=True)
class NetworkEdge:
    source: str
    target: str
    horizon: str
    coefficient: float


@dataclass(frozen=True)
class NetworkSummary:
    edges: tuple[NetworkEdge, ...]
    out_strength: dict[str, float]
    in_strength: dict[str, float]
    sparsity: float


def spillover_network(model: HybridModel) -> NetworkSummary:
    """Nonzero cross coefficients as a directed edge list.

    ElasticNet zeros are exact, so no threshold is involved; sparsity is the
    zero fraction of the 3K(K-1) cross slots.
    """
    edges = []
    out_s = {a: 0.0 for a in model.assets}
    in_s = {a: 0.0 for a in model.assets}
    n_zero = 0
    for i, target in enumerate(model.assets):
        for s, j in enumerate(model.sources(i)):
            for h, label in enumerate(HORIZON_LABELS):
                c = float(model.cross[i, s, h])
                if c == 0.0:
                    n_zero += 1
                    continue
                edges.append(NetworkEdge(model.assets[j], target, label, c))
                out_s[model.assets[j]] += abs(c)
                in_s[target] += abs(c)
    n_slots = 3 * model.n_assets * (model.n_assets - 1)
    sparsity = n_zero / n_slots if n_slots else 1.0
    return NetworkSummary(tuple(edges), out_s, in_s, sparsity)


def model_to_dict(model: HybridModel) -> dict:
    return {
        "schema": "volnet-model-v1",
        "feature_order": FEATURE_ORDER_TAG,
        "assets": list(model.assets),
        "lags": list(model.lags),
        "alpha": model.alpha,
        "own": [{"intercept": c.intercept, "beta_d": c.beta_d,
                 "beta_w": c.beta_w, "beta_m": c.beta_m} for c in model.own],
        "cross": model.dense_cross.tolist(),
        "selected_lambda": model.selected_lambda.tolist(),
        "residual_cov": model.residual_cov.tolist(),
        "sample_start": model.sample_start.isoformat() if model.sample_start else None,
        "sample_end": model.sample_end.isoformat() if model.sample_end else None,
        "n_obs": model.n_obs,
        "seed_tail": model.seed_tail.tolist() if model.seed_tail is not None else None,
    }


def model_from_dict(d: dict) -> HybridModel:
    if d.get("feature_order") != FEATURE_ORDER_TAG:
        raise ValueError(f"unsupported feature ordering {d.get('feature_order')!r}")
    assets = tuple(d["assets"])
    K = len(assets)
    dense = np.asarray(d["cross"], dtype=float).reshape(K, K, 3)
    cross = np.zeros((K, max(K - 1, 0), 3))
    for i in range(K):
        for s, j in enumerate(j for j in range(K) if j != i):
            cross[i, s] = dense[i, j]
    return HybridModel(
        assets=assets,
        own=tuple(HarCoefficients(o["intercept"], o["beta_d"], o["beta_w"], o["beta_m"])
                  for o in d["own"]),
        cross=cross,
        selected_lambda=np.asarray(d["selected_lambda"], dtype=float),
        residual_cov=np.asarray(d["residual_cov"], dtype=float).reshape(K, K),
        lags=tuple(d["lags"]),
        alpha=float(d["alpha"]),
        sample_start=dt.date.fromisoformat(d["sample_start"]) if d["sample_start"] else None,
        sample_end=dt.date.fromisoformat(d["sample_end"]) if d["sample_end"] else None,
        n_obs=int(d["n_obs"]),
        seed_tail=(np.asarray(d["seed_tail"], dtype=float)
                   if d.get("seed_tail") is not None else None),
    )
