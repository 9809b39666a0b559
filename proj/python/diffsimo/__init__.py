"""Python interface to the diffsimo simulator."""

import json
from typing import Iterable, List, Optional, Sequence, Union

from ._diffsimo import (
    CSV_HEADER,
    ConfigError,
    DomainError,
    SymbolLookupError,
    UsageError,
    __version__,
    error_floor,
    estimate_sep,
    log_bessel_i,
    log_bessel_i_scaled,
    log_ncx2_pdf,
    q_function,
    qam_classes,
    qam_points,
    selftest,
    symbol_energy_for_snr,
    union_bound_sep,
)
from ._diffsimo import _run_sweep_json

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "DomainError",
    "SymbolLookupError",
    "UsageError",
    "__version__",
    "error_floor",
    "estimate_sep",
    "log_bessel_i",
    "log_bessel_i_scaled",
    "log_ncx2_pdf",
    "q_function",
    "qam_classes",
    "qam_points",
    "run_point",
    "run_sweep",
    "selftest",
    "symbol_energy_for_snr",
    "sweep_csv",
    "union_bound_sep",
]

Grid = Union[float, Sequence[float]]


def _axis(value, cast=float) -> List:
    if isinstance(value, Iterable) and not isinstance(value, (str, bytes)):
        return [cast(v) for v in value]
    return [cast(value)]


def _sweep(method="dif", osc="slo", antennas: Union[int, Sequence[int]] = 10, snr_db: Grid = 30.0,
           var_tx: Grid = 0.01, var_rx: Grid = 0.01, qam=16, symbols=10000, trials=100,
           pilot_period: Optional[int] = None, seed=1, hold_receive_snr=False, workers=0, simulate=True,
           noise=True, phase_average="centered", past_amplitude="energy"):
    return _run_sweep_json(method, osc, _axis(antennas, int), _axis(snr_db), _axis(var_tx), _axis(var_rx), qam,
                           symbols, trials, pilot_period, seed, hold_receive_snr, workers, simulate, noise,
                           phase_average, past_amplitude)


def run_sweep(**kwargs) -> List[dict]:
    """Run a grid; returns one dict per point (same fields as the CLI's JSON)."""
    return json.loads(_sweep(**kwargs)[0])


def sweep_csv(**kwargs) -> str:
    """Run a grid and return the CLI's CSV text, header included."""
    return CSV_HEADER + "\n" + _sweep(**kwargs)[1]


def run_point(**kwargs) -> dict:
    records = run_sweep(**kwargs)
    if len(records) != 1:
        raise UsageError("run_point takes scalar grid values; use run_sweep")
    return records[0]
