"""Chronological train/test splitting and rolling one-step forecast scoring.

Forecasts for the test period use parameters frozen at their training-sample
estimates; each test-date forecast sees only observations up to the prior
day. Metrics are RMSE, MAE, and MAPE (in percent).
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplit, HistoryTooShort, LengthMismatch, ZeroActualForMape
from .rv import RvPanel


def split_train_test(panel: RvPanel, ratio: float) -> tuple[RvPanel, RvPanel]:
    """First floor(ratio*N) rows train, remainder test; no shuffling."""
    if not 0.0 < ratio < 1.0:
        raise DegenerateSplit(f"ratio must be in (0, 1), got {ratio}")
    n_train = math.floor(ratio * len(panel))
    if n_train == 0 or n_train == len(panel):
        raise DegenerateSplit(f"split {n_train}/{len(panel) - n_train} leaves one side empty")
    return (
        RvPanel(panel.dates[:n_train], panel.assets, panel.values[:n_train]),
        RvPanel(panel.dates[n_train:], panel.assets, panel.values[n_train:]),
    )


def rolling_forecast(model, panel: RvPanel, test_start: int) -> np.ndarray:
    """One-step forecasts for rows test_start..N-1 of the full panel.

    `model` is anything with predict_one_step(history) and lags, fitted on
    rows before test_start; parameters stay fixed while the history window
    rolls forward.
    """
    m = max(model.lags)
    if test_start < m:
        raise HistoryTooShort(f"test_start {test_start} < max lag {m}")
    if test_start >= len(panel):
        raise ValueError(f"test_start {test_start} beyond panel length {len(panel)}")
    out = np.empty((len(panel) - test_start, panel.n_assets))
    for i, t in enumerate(range(test_start, len(panel))):
        out[i] = model.predict_one_step(panel.values[t - m:t])
    return out


def forecast_metrics(actual: np.ndarray, forecast: np.ndarray) -> tuple[float, float, float]:
    """(rmse, mae, mape); mape in percent and undefined when any actual is 0."""
    actual = np.asarray(actual, dtype=float)
    forecast = np.asarray(forecast, dtype=float)
    if actual.shape != forecast.shape or actual.ndim != 1 or len(actual) < 1:
        raise LengthMismatch(f"shapes {actual.shape} vs {forecast.shape}")
    err = actual - forecast
    rmse = float(np.sqrt(np.mean(err ** 2)))
    mae = float(np.mean(np.abs(err)))
    if np.any(actual == 0.0):
        raise ZeroActualForMape("actual contains zeros; MAPE undefined")
    mape = float(100.0 * np.mean(np.abs(err / actual)))
    return rmse, mae, mape


@dataclass(frozen=True)
class AssetMetrics:
    rmse: float
    mae: float
    mape: float


@dataclass(frozen=True)
class ForecastReport:
    label: str
    assets: tuple[str, ...]
    metrics: tuple[AssetMetrics, ...]
    avg_rmse: float
    avg_mae: float
    avg_mape: float
    test_start: dt.date
    test_end: dt.date


def build_forecast_report(label: str, panel: RvPanel, forecast: np.ndarray,
                          test_start: int) -> ForecastReport:
    actual = panel.values[test_start:]
    if forecast.shape != actual.shape:
        raise LengthMismatch(f"forecast {forecast.shape} vs test block {actual.shape}")
    per_asset = []
    for i in range(panel.n_assets):
        rmse, mae, mape = forecast_metrics(actual[:, i], forecast[:, i])
        assert rmse >= mae - 1e-12 * (1.0 + mae), "RMSE below MAE: metric bug"
        per_asset.append(AssetMetrics(rmse, mae, mape))
    return ForecastReport(
        label=label, assets=panel.assets, metrics=tuple(per_asset),
        avg_rmse=float(np.mean([m.rmse for m in per_asset])),
        avg_mae=float(np.mean([m.mae for m in per_asset])),
        avg_mape=float(np.mean([m.mape for m in per_asset])),
        test_start=panel.dates[test_start], test_end=panel.dates[-1],
    )
