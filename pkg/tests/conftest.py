import datetime as dt

import numpy as np
import pytest

from volnet.har import HarCoefficients
from volnet.ingest import OhlcSeries
from volnet.rv import RvPanel
from volnet.synthetic import PlantedEdge, SyntheticSpec, generate_synthetic_panel

from oracles import gbm_ohlc_arrays


def make_dates(n: int, start=dt.date(2015, 1, 5)) -> tuple[dt.date, ...]:
    return tuple(start + dt.timedelta(days=i) for i in range(n))


def gbm_series(asset: str, n_days: int, sigma: float, seed: int) -> OhlcSeries:
    o, h, l, c = gbm_ohlc_arrays(n_days, sigma, seed)
    return OhlcSeries(asset, make_dates(n_days), o, h, l, c)


@pytest.fixture(scope="session")
def two_asset_panel() -> RvPanel:
    """Small persistent panel with one strong planted edge (B -> A daily)."""
    spec = SyntheticSpec(
        assets=("A", "B"),
        length=2000,
        own=(HarCoefficients(0.010, 0.40, 0.30, 0.20),
             HarCoefficients(0.015, 0.35, 0.30, 0.25)),
        innovation_cov=np.array([[4e-4, 1e-4], [1e-4, 4e-4]]),
        cross=(PlantedEdge("B", "A", "daily", 0.35),),
        seed=11,
    )
    return generate_synthetic_panel(spec)


@pytest.fixture(scope="session")
def zero_cross_panel() -> RvPanel:
    """Three independent assets, diagonal innovation covariance."""
    spec = SyntheticSpec(
        assets=("A", "B", "C"),
        length=1200,
        own=(HarCoefficients(0.010, 0.40, 0.30, 0.20),
             HarCoefficients(0.020, 0.35, 0.30, 0.25),
             HarCoefficients(0.012, 0.30, 0.35, 0.25)),
        innovation_cov=np.diag([4e-4, 6e-4, 3e-4]),
        seed=29,
    )
    return generate_synthetic_panel(spec)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import acceptance_report
    if acceptance_report.lines():
        terminalreporter.section("acceptance checks")
        for line in acceptance_report.lines():
            terminalreporter.write_line(line)
