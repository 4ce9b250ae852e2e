"""Sine-wave sea surface: buoy heave, wave-peak geometry, and LoS blocking.

The surface is one deterministic sine wave travelling from a distant source
point.  Buoys ride the surface vertically (heave only).  A direct link is
line-of-sight when neither side's nearest wave crest cuts the ray between
the two antennas.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

GRAVITY = 9.81  # m/s^2

# Far enough away that wave fronts are locally planar over a ~1 km site.
DEFAULT_WAVE_SOURCE = (-10_000.0, 0.0)

UPWARDS = "upwards"
DOWNWARDS = "downwards"


@dataclass(frozen=True)
class SeaState:
    """One row of the sea-state table (heights are crest-to-trough meters)."""

    level: int | str
    height_range: tuple[float, float]
    height_mean: float
    period_range: tuple[float, float] | None = None
    period_mean: float | None = None

    def __post_init__(self):
        lo, hi = self.height_range
        if not lo < hi:
            raise ValueError("height_range needs min < max")
        if not lo <= self.height_mean <= hi:
            raise ValueError("height_mean outside height_range")
        if self.period_range is not None:
            plo, phi = self.period_range
            if self.period_mean is None or not plo <= self.period_mean <= phi:
                raise ValueError("period_mean outside period_range")


# Standard sea-state code. Levels 0 and 1 share the calm row, which defines
# no wave period; integer levels above 8 fold into the ">8" row.
BUILTIN_SEA_STATES = (
    SeaState("0-1", (0.0, 0.1), 0.05, None, None),
    SeaState(2, (0.1, 0.5), 0.3, (3.0, 15.0), 7.0),
    SeaState(3, (0.5, 1.25), 0.875, (5.0, 15.5), 8.0),
    SeaState(4, (1.25, 2.5), 1.875, (6.0, 16.0), 9.0),
    SeaState(5, (2.5, 4.0), 3.25, (7.0, 16.5), 10.0),
    SeaState(6, (4.0, 6.0), 5.0, (9.0, 17.0), 12.0),
    SeaState(7, (6.0, 9.0), 7.5, (10.0, 18.0), 14.0),
    SeaState(8, (9.0, 14.0), 11.5, (13.0, 19.0), 17.0),
    SeaState(">8", (14.0, math.inf), 14.0, (18.0, 24.0), 20.0),
)


def sea_state(level, table=None) -> SeaState:
    """Look up a sea-state row by level (0..8, ">8", or any int above 8)."""
    rows = BUILTIN_SEA_STATES if table is None else table
    for row in rows:
        if row.level == level:
            return row
    if isinstance(level, (int, np.integer)) and level >= 0:
        folded = "0-1" if level <= 1 else ">8"
        for row in rows:
            if row.level == folded:
                return row
    raise KeyError(f"unknown sea state {level!r}")


_TABLE_KEYS = {"height_range_m", "height_mean_m", "period_range_s", "period_mean_s"}


def load_sea_state_table(path) -> tuple[SeaState, ...]:
    """Read a replacement sea-state table from an INI-style key=value file."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise OSError(f"cannot read sea-state table {path}")
    rows = []
    for section in parser.sections():
        if not section.startswith("state "):
            raise ValueError(f"{path}: unexpected section [{section}]")
        raw_level = section[len("state "):].strip()
        level: int | str = int(raw_level) if raw_level.lstrip("-").isdigit() else raw_level
        keys = set(parser[section])
        unknown = keys - _TABLE_KEYS
        if unknown:
            raise ValueError(f"{path}: unknown keys {sorted(unknown)} in [{section}]")
        get = parser[section].get

        def pair(text):
            lo, hi = (float(v) for v in text.split(","))
            return (lo, hi)

        rows.append(SeaState(
            level=level,
            height_range=pair(get("height_range_m")),
            height_mean=float(get("height_mean_m")),
            period_range=pair(get("period_range_s")) if get("period_range_s") else None,
            period_mean=float(get("period_mean_s")) if get("period_mean_s") else None,
        ))
    if not rows:
        raise ValueError(f"{path}: no [state ...] sections found")
    return tuple(rows)


@dataclass(frozen=True)
class WaveField:
    """Travelling sine wave: amplitude a, wavelength l, period T_wave."""

    a: float
    l: float
    T_wave: float
    source: tuple[float, float] = DEFAULT_WAVE_SOURCE

    def __post_init__(self):
        if self.a < 0 or self.l <= 0 or self.T_wave <= 0:
            raise ValueError("need a >= 0, l > 0, T_wave > 0")


@dataclass(frozen=True)
class FloatingNode:
    """A buoy-mounted antenna: 2-D anchor position plus mast height."""

    position: tuple[float, float]
    mast_height: float

    def __post_init__(self):
        if not self.mast_height > 0:
            raise ValueError("mast_height must be positive")


def wave_from_sea_state(state: SeaState, source=DEFAULT_WAVE_SOURCE) -> WaveField:
    """Sea-state row -> sine parameters; wavelength from deep-water dispersion."""
    if state.period_mean is None:
        raise ValueError(f"sea state {state.level} defines no wave period")
    T = float(state.period_mean)
    return WaveField(
        a=state.height_mean / 2.0,  # table heights are crest-to-trough
        l=GRAVITY * T * T / (2.0 * np.pi),
        T_wave=T,
        source=source,
    )


def _source_distance(node: FloatingNode, wave: WaveField) -> float:
    return math.dist(node.position, wave.source)


def _source_unit(node: FloatingNode, wave: WaveField) -> tuple[float, float]:
    d = _source_distance(node, wave)
    if d == 0:
        raise ValueError("node sits on the wave source")
    return ((node.position[0] - wave.source[0]) / d,
            (node.position[1] - wave.source[1]) / d)


def _wave_phase(node, wave, t, extra_dist=0.0):
    """Sine argument at the node; extra_dist offsets the travelled distance."""
    d_r = _source_distance(node, wave) + np.asarray(extra_dist, dtype=float)
    return (2.0 * np.pi * np.mod(d_r, wave.l) / wave.l
            + 2.0 * np.pi * np.mod(np.asarray(t, dtype=float), wave.T_wave) / wave.T_wave)


def _height(node, wave, phase):
    return wave.a * np.sin(phase) + node.mast_height


def antenna_height(node: FloatingNode, wave: WaveField, t):
    """Antenna height above the mean sea level at time t (seconds)."""
    out = _height(node, wave, _wave_phase(node, wave, t))
    return float(out) if np.ndim(out) == 0 else out


def heave_direction(node: FloatingNode, wave: WaveField, t) -> str:
    """"upwards" while the buoy rises (cos of the wave phase >= 0)."""
    return UPWARDS if np.cos(_wave_phase(node, wave, t)) >= 0.0 else DOWNWARDS


def _peak_shift(a, l, phase):
    # Rising buoy has the crest (a - delta)/(4a) wavelengths ahead of it,
    # falling buoy the complement; delta is the vertical displacement.
    delta = a * np.sin(phase)
    frac = (a - delta) / (4.0 * a)
    return np.where(np.cos(phase) >= 0.0, l * frac, l * (1.0 - frac))


def nearest_peak(node: FloatingNode, wave: WaveField, t):
    """Closest wave crest, displaced from the buoy along the travel direction."""
    if wave.a == 0:
        raise ValueError("flat sea has no peaks")
    shift = _peak_shift(wave.a, wave.l, _wave_phase(node, wave, t))
    ux, uy = _source_unit(node, wave)
    return np.stack([node.position[0] + shift * ux,
                     node.position[1] + shift * uy], axis=-1)


def elevation_angle(tx_h: float, rx_h: float, horizontal_dist: float) -> float:
    """Signed elevation from the Tx antenna towards the Rx antenna."""
    if horizontal_dist <= 0:
        raise ValueError("co-located nodes")
    return math.atan((rx_h - tx_h) / horizontal_dist)


def blocking_angle(peer_h: float, a: float, dist_peer_to_peak: float) -> float:
    """Elevation of the peer antenna seen from a wave crest of height a."""
    if dist_peer_to_peak <= 0:
        raise ValueError("peer sits on the wave peak")
    return math.atan((peer_h - a) / dist_peer_to_peak)


def _los_mask(tx, rx, wave, t, tx_extra_dist=0.0, rx_extra_dist=0.0):
    """Vectorized LoS test over time samples / per-buoy phase offsets."""
    d = math.dist(tx.position, rx.position)
    if d == 0:
        raise ValueError("co-located nodes")
    if wave.a == 0:
        return np.broadcast_to(True, np.shape(t))
    ph_t = _wave_phase(tx, wave, t, tx_extra_dist)
    ph_r = _wave_phase(rx, wave, t, rx_extra_dist)
    h_t = _height(tx, wave, ph_t)
    h_r = _height(rx, wave, ph_r)
    shift_t = _peak_shift(wave.a, wave.l, ph_t)
    shift_r = _peak_shift(wave.a, wave.l, ph_r)
    ut = _source_unit(tx, wave)
    ur = _source_unit(rx, wave)
    peak_t = np.stack([tx.position[0] + shift_t * ut[0],
                       tx.position[1] + shift_t * ut[1]], axis=-1)
    peak_r = np.stack([rx.position[0] + shift_r * ur[0],
                       rx.position[1] + shift_r * ur[1]], axis=-1)
    dist_t = np.linalg.norm(np.asarray(rx.position) - peak_t, axis=-1)
    dist_r = np.linalg.norm(np.asarray(tx.position) - peak_r, axis=-1)
    # arctan2 handles a crest exactly under the peer antenna (dist -> 0).
    phi_t = np.arctan2(h_r - h_t, d)
    psi_t = np.arctan2(h_r - wave.a, dist_t)
    psi_r = np.arctan2(h_t - wave.a, dist_r)
    return (phi_t <= psi_t) & (-phi_t <= psi_r)


def los_state(tx: FloatingNode, rx: FloatingNode, wave: WaveField, t) -> bool:
    """True when the direct Tx-Rx ray clears both nearest wave crests."""
    return bool(_los_mask(tx, rx, wave, t))


def los_probability(state: SeaState, tx: FloatingNode, rx: FloatingNode,
                    samples: int, seed, source=DEFAULT_WAVE_SOURCE) -> float:
    """Fraction of LoS instants over random times and buoy phase offsets."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    wave = wave_from_sea_state(state, source)
    if wave.a == 0:
        return 1.0
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, wave.T_wave, samples)
    off_t = rng.uniform(0.0, wave.l, samples)
    off_r = rng.uniform(0.0, wave.l, samples)
    return float(np.mean(_los_mask(tx, rx, wave, t, off_t, off_r)))
