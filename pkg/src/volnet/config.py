"""JSON run configuration shared by the CLI subcommands.

Defaults follow the estimation settings used throughout the library: 30-day
volatility window annualized by 252, HAR lags (1, 5, 22), ElasticNet L1
share 0.5 with a 60-point log-spaced penalty grid, 5 forward-chaining CV
folds, 80/20 chronological split, horizon-20 impulse responses, and a
50-day-block bootstrap with 1000 replicates at a 95% band. Unknown keys are
rejected rather than ignored so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .bootstrap import BootstrapConfig
from .errors import InvalidConfig
from .hybrid import FitConfig
from .jirf import ShockGroup
from .rv import YzConfig

_TOP_KEYS = {
    "data_dir", "assets", "window", "annualization", "lags", "alpha",
    "lambda_grid", "cv_folds", "split_ratio", "jirf_horizon",
    "condition_complement", "shock_groups", "bootstrap", "seed",
}
_GRID_KEYS = {"size", "ratio"}
_BOOT_KEYS = {"block_length", "replications", "ci_level"}


@dataclass(frozen=True)
class RunConfig:
    data_dir: str | None = None
    assets: tuple[str, ...] | None = None
    window: int = 30
    annualization: float = 252.0
    lags: tuple[int, int, int] = (1, 5, 22)
    alpha: float = 0.5
    lambda_grid: tuple[float, ...] | None = None
    grid_size: int = 60
    grid_ratio: float = 1e-4
    cv_folds: int = 5
    split_ratio: float = 0.8
    jirf_horizon: int = 20
    condition_complement: bool = True
    shock_groups: tuple[ShockGroup, ...] = ()
    block_length: int = 50
    replications: int = 1000
    ci_level: float = 0.95
    seed: int = 0

    def yz_config(self) -> YzConfig:
        return YzConfig(self.window, self.annualization)

    def fit_config(self) -> FitConfig:
        return FitConfig(alpha=self.alpha, lambda_grid=self.lambda_grid,
                         grid_size=self.grid_size, grid_ratio=self.grid_ratio,
                         cv_folds=self.cv_folds, lags=self.lags)

    def bootstrap_config(self, n_jobs: int = 1) -> BootstrapConfig:
        return BootstrapConfig(block_length=self.block_length,
                               replications=self.replications,
                               ci_level=self.ci_level, seed=self.seed,
                               n_jobs=n_jobs)


def config_from_dict(d: dict) -> RunConfig:
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")

    kwargs: dict = {}
    if "data_dir" in d:
        kwargs["data_dir"] = d["data_dir"]
    if "assets" in d:
        kwargs["assets"] = tuple(d["assets"])
    for key in ("window", "cv_folds", "jirf_horizon", "seed"):
        if key in d:
            kwargs[key] = int(d[key])
    for key in ("annualization", "alpha", "split_ratio"):
        if key in d:
            kwargs[key] = float(d[key])
    if "condition_complement" in d:
        kwargs["condition_complement"] = bool(d["condition_complement"])
    if "lags" in d:
        lags = tuple(int(v) for v in d["lags"])
        if len(lags) != 3 or sorted(lags) != list(lags):
            raise InvalidConfig(f"lags must be three ascending integers, got {lags}")
        kwargs["lags"] = lags
    if "lambda_grid" in d:
        grid = d["lambda_grid"]
        if isinstance(grid, dict):
            unknown = set(grid) - _GRID_KEYS
            if unknown:
                raise InvalidConfig(f"unknown lambda_grid keys: {sorted(unknown)}")
            if "size" in grid:
                kwargs["grid_size"] = int(grid["size"])
            if "ratio" in grid:
                kwargs["grid_ratio"] = float(grid["ratio"])
        else:
            kwargs["lambda_grid"] = tuple(float(v) for v in grid)
    if "shock_groups" in d:
        groups = d["shock_groups"]
        if not isinstance(groups, dict):
            raise InvalidConfig("shock_groups must map group name -> asset list")
        kwargs["shock_groups"] = tuple(ShockGroup(name, tuple(members))
                                       for name, members in groups.items())
    if "bootstrap" in d:
        boot = d["bootstrap"]
        unknown = set(boot) - _BOOT_KEYS
        if unknown:
            raise InvalidConfig(f"unknown bootstrap keys: {sorted(unknown)}")
        if "block_length" in boot:
            kwargs["block_length"] = int(boot["block_length"])
        if "replications" in boot:
            kwargs["replications"] = int(boot["replications"])
        if "ci_level" in boot:
            kwargs["ci_level"] = float(boot["ci_level"])
    return RunConfig(**kwargs)


def load_config(path: str) -> RunConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidConfig("config root must be a JSON object")
    return config_from_dict(data)


def config_hash(params: dict) -> str:
    """Short digest of the effective parameters embedded in every output.

    File-system paths are deliberately left out by callers so the same inputs
    hash identically wherever the workspace lives.
    """
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
