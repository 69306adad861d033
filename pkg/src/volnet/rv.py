"""Annualized Yang-Zhang realized volatility from OHLC bars.

The estimator combines three components over a trailing window of n days:
overnight variance Var(ln(O_t/C_{t-1})), open-to-close variance
Var(ln(C_t/O_t)), and the window mean of the daily Rogers-Satchell variance,
weighted by k = 0.34 / (1.34 + (n+1)/(n-1)). Window variances use the sample
(n-1) denominator. The value stamped at date t uses bars t-n+1..t plus the
close at t-n for the first overnight return, so the first `window` dates of a
series produce no output.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import SeriesTooShort, WindowTooSmall
from .ingest import OhlcBar, OhlcPanel, OhlcSeries


@dataclass(frozen=True)
class YzConfig:
    window: int = 30
    annualization: float = 252.0

    def __post_init__(self):
        if self.window < 2:
            raise WindowTooSmall(f"window {self.window} < 2")
        if self.annualization <= 0:
            raise ValueError("annualization must be positive")


@dataclass(frozen=True)
class RvSeries:
    asset: str
    dates: tuple[dt.date, ...]
    values: np.ndarray
    n_clamped: int = 0  # windows whose pre-sqrt sum was clamped at 0

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class RvPanel:
    dates: tuple[dt.date, ...]
    assets: tuple[str, ...]
    values: np.ndarray  # N x K, annualized volatility fractions

    def __post_init__(self):
        if self.values.shape != (len(self.dates), len(self.assets)):
            raise ValueError("values shape does not match dates/assets")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("RV values must be finite")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    def column(self, asset: str) -> np.ndarray:
        return self.values[:, self.assets.index(asset)]


def yz_weight(n: int) -> float:
    """Yang-Zhang weight k minimizing estimator variance for window n."""
    if n < 2:
        raise WindowTooSmall(f"window {n} < 2")
    return 0.34 / (1.34 + (n + 1) / (n - 1))


def rogers_satchell_var(bar: OhlcBar) -> float:
    """Daily Rogers-Satchell variance: ln(H/C)ln(H/O) + ln(L/C)ln(L/O)."""
    o, h, l, c = bar.open, bar.high, bar.low, bar.close
    return float(np.log(h / c) * np.log(h / o) + np.log(l / c) * np.log(l / o))


def _rs_daily(series: OhlcSeries) -> np.ndarray:
    return (np.log(series.high / series.close) * np.log(series.high / series.open)
            + np.log(series.low / series.close) * np.log(series.low / series.open))


def yang_zhang_rv(series: OhlcSeries, cfg: YzConfig = YzConfig()) -> RvSeries:
    n = cfg.window
    if len(series) <= n:
        raise SeriesTooShort(f"{series.asset}: {len(series)} bars, need > {n}")
    k = yz_weight(n)

    overnight = np.log(series.open[1:] / series.close[:-1])  # index t-1 holds ln(O_t/C_{t-1})
    open_close = np.log(series.close / series.open)
    rs = _rs_daily(series)

    # Window ending at bar t covers overnight[t-n..t-1] and open_close/rs[t-n+1..t].
    var_o = np.var(sliding_window_view(overnight, n), axis=1, ddof=1)
    var_oc = np.var(sliding_window_view(open_close[1:], n), axis=1, ddof=1)
    mean_rs = np.mean(sliding_window_view(rs[1:], n), axis=1)

    radicand = var_o + k * var_oc + (1.0 - k) * mean_rs
    n_clamped = int(np.sum(radicand < 0))
    values = np.sqrt(np.maximum(radicand, 0.0)) * np.sqrt(cfg.annualization)
    return RvSeries(series.asset, series.dates[n:], values, n_clamped)


def yang_zhang_panel(panel: OhlcPanel, cfg: YzConfig = YzConfig()) -> RvPanel:
    out = [yang_zhang_rv(s, cfg) for s in panel.series]
    dates = out[0].dates
    return RvPanel(dates, panel.assets, np.column_stack([r.values for r in out]))


def write_rv_csv(panel: RvPanel, path: str | Path,
                 header_comments: Sequence[str] = ()) -> None:
    lines = [f"# {c}" for c in header_comments]
    lines.append("date," + ",".join(panel.assets))
    for i, d in enumerate(panel.dates):
        lines.append(d.isoformat() + "," + ",".join(repr(float(v)) for v in panel.values[i]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_rv_csv(path: str | Path) -> RvPanel:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise SeriesTooShort("empty RV file")
    assets = tuple(rows[0][1:])
    dates = tuple(dt.date.fromisoformat(r[0]) for r in rows[1:])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]], dtype=float)
    return RvPanel(dates, assets, values)
