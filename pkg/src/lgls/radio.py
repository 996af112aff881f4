"""Radio parameters, path loss and the SINR feasibility oracle.

Everything in here works in linear units. dB/dBm values are converted once,
at ingestion, through :func:`db_to_linear` and :func:`dbm_to_mw`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

# Relative slack applied to every comparison against the SINR threshold.
SINR_RTOL = 1e-9

Point = Tuple[float, float]


class DegenerateGeometryError(ValueError):
    """Two points that must be apart sit at identical coordinates."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_mw(x_dbm: float) -> float:
    return 10.0 ** (x_dbm / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def mw_to_dbm(x_mw: float) -> float:
    return 10.0 * math.log10(x_mw)


@dataclass(frozen=True)
class RadioParams:
    """Uniform radio settings shared by every node (linear units).

    power_mw: transmit power in mW
    noise_mw: noise power in mW
    alpha: path-loss exponent
    gamma_lin: SINR threshold as a plain ratio
    """

    power_mw: float
    noise_mw: float
    alpha: float
    gamma_lin: float

    def __post_init__(self) -> None:
        for name in ("power_mw", "noise_mw", "alpha", "gamma_lin"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    @classmethod
    def from_db(
        cls, *, power_mw: float, noise_dbm: float, gamma_db: float, alpha: float
    ) -> "RadioParams":
        return cls(
            power_mw=float(power_mw),
            noise_mw=dbm_to_mw(noise_dbm),
            alpha=float(alpha),
            gamma_lin=db_to_linear(gamma_db),
        )

    def meets_threshold(self, sinr: float) -> bool:
        return sinr >= self.gamma_lin * (1.0 - SINR_RTOL)


# 802.11b-like defaults used throughout the simulation study.
DEFAULT_SIDE_M = 3000.0
DEFAULT_POWER_MW = 1000.0
DEFAULT_NOISE_DBM = -96.0
DEFAULT_GAMMA_DB = 7.0
DEFAULT_ALPHA = 4.5

DEFAULT_PARAMS = RadioParams.from_db(
    power_mw=DEFAULT_POWER_MW,
    noise_dbm=DEFAULT_NOISE_DBM,
    gamma_db=DEFAULT_GAMMA_DB,
    alpha=DEFAULT_ALPHA,
)


def received_power(params: RadioParams, d: float) -> float:
    if not d > 0:
        raise DegenerateGeometryError(f"distance must be > 0, got {d!r}")
    return params.power_mw / d**params.alpha


def communication_range(params: RadioParams) -> float:
    """Longest link that still meets the SINR threshold with noise alone."""
    return (params.power_mw / (params.noise_mw * params.gamma_lin)) ** (1.0 / params.alpha)


@dataclass(frozen=True)
class SinrReport:
    sinr: Tuple[float, ...]
    min_margin: float
    feasible: bool

    @property
    def strictly_feasible(self) -> bool:
        """Every receiver is strictly above the threshold (no slack)."""
        return self.feasible and self.min_margin > 0


def sinr_values(
    params: RadioParams, tx: np.ndarray, rx: np.ndarray, *, coincident_ok: bool = False
) -> np.ndarray:
    """Per-receiver SINR when every transmitter in ``tx`` is active at once.

    ``tx[i]`` and ``rx[i]`` are the endpoints of link ``i``; arrays are (k, 2).
    A transmitter sitting on another link's receiver raises, unless
    ``coincident_ok``, in which case that receiver's SINR is 0.
    """
    tx = np.asarray(tx, dtype=float).reshape(-1, 2)
    rx = np.asarray(rx, dtype=float).reshape(-1, 2)
    if tx.shape != rx.shape:
        raise ValueError("tx and rx must have the same shape")
    if not (np.all(np.isfinite(tx)) and np.all(np.isfinite(rx))):
        raise ValueError("positions must be finite")
    k = len(tx)
    if k == 0:
        return np.empty(0)
    # dist[j, i] = d(t_j, r_i)
    dist = np.hypot(tx[:, None, 0] - rx[None, :, 0], tx[:, None, 1] - rx[None, :, 1])
    zero = dist == 0.0
    if np.any(np.diagonal(zero)) or (np.any(zero) and not coincident_ok):
        j, i = np.argwhere(zero)[0]
        raise DegenerateGeometryError(
            f"transmitter of link {j} coincides with receiver of link {i}"
        )
    with np.errstate(divide="ignore"):
        rx_power = params.power_mw / dist**params.alpha
    signal = np.diagonal(rx_power).copy()
    np.fill_diagonal(rx_power, 0.0)
    interference = rx_power.sum(axis=0)
    return signal / (params.noise_mw + interference)


def sinr_feasible(
    params: RadioParams, links: Sequence[Tuple[Point, Point]], *, coincident_ok: bool = False
) -> SinrReport:
    """Check the SINR criterion for a set of simultaneously active links.

    ``links`` holds ``(tx_position, rx_position)`` pairs. Geometry only: the
    result never depends on any precomputed interference weights.
    ``coincident_ok`` is passed to :func:`sinr_values`.
    """
    links = list(links)
    if not links:
        return SinrReport(sinr=(), min_margin=math.inf, feasible=True)
    tx = np.array([link[0] for link in links], dtype=float)
    rx = np.array([link[1] for link in links], dtype=float)
    sinr = sinr_values(params, tx, rx, coincident_ok=coincident_ok)
    margin = float(np.min(sinr - params.gamma_lin))
    feasible = bool(np.all(sinr >= params.gamma_lin * (1.0 - SINR_RTOL)))
    return SinrReport(sinr=tuple(float(s) for s in sinr), min_margin=margin, feasible=feasible)
