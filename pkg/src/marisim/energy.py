"""Wave-energy harvesting chain: wave power, wave-to-wire, transmit budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WecParams:
    eta_pto: float = 0.5      # power take-off efficiency
    eta_conv: float = 0.9     # electronics conversion efficiency
    gamma_cwr: float = 0.082  # capture width ratio
    W: float = 2.0            # effective interaction width, m
    rho: float = 1025.0       # seawater density, kg/m^3
    g: float = 9.81           # m/s^2
    P_0: float = 5.0          # operational power draw, W
    P_max: float = 100.0      # transmit power cap, W (20 dBW)

    def __post_init__(self):
        for frac in (self.eta_pto, self.eta_conv, self.gamma_cwr):
            if not 0.0 < frac <= 1.0:
                raise ValueError("efficiencies must lie in (0, 1]")
        if self.W <= 0 or self.rho <= 0 or self.g <= 0:
            raise ValueError("W, rho, g must be positive")
        if self.P_0 < 0 or self.P_max <= 0:
            raise ValueError("need P_0 >= 0 and P_max > 0")


def wave_power_per_meter(a: float, T_wave: float, p: WecParams) -> float:
    """Incident wave power flux (W per meter of crest width)."""
    if a < 0 or T_wave <= 0:
        raise ValueError("need a >= 0 and T_wave > 0")
    return p.rho * p.g * p.g / (64.0 * np.pi) * a * a * T_wave


def harvested_power(a: float, T_wave: float, p: WecParams) -> float:
    """Electrical power out of the wave-to-wire chain (W)."""
    eta = p.eta_pto * p.eta_conv * p.gamma_cwr
    return eta * wave_power_per_meter(a, T_wave, p) * p.W


def available_tx_power(P_e: float, p: WecParams) -> float:
    """Transmit budget left after the operational draw, capped at P_max (W)."""
    return max(0.0, min(P_e - p.P_0, p.P_max))
