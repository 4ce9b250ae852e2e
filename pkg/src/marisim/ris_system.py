"""Frozen per-interval MU-MIMO model: combined channels and sum capacity.

Row-vector convention throughout: a direct channel h_d is a length-M row,
a reflection q is a length-N unit-modulus row, and a cascaded channel G is
N x M, so the combined channel is h_d + q @ G.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

UNIT_MODULUS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RisConfig:
    """RIS element layout (N 3-D positions, meters) and current phases."""

    element_positions: np.ndarray  # (N, 3)
    phases: np.ndarray             # (N,) in [0, 2pi)

    def __post_init__(self):
        pos = np.asarray(self.element_positions, dtype=float)
        ph = np.asarray(self.phases, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError("element_positions must be (N, 3) with N >= 1")
        if ph.shape != (pos.shape[0],):
            raise ValueError("phases must have one entry per element")
        if np.any(ph < 0) or np.any(ph >= 2.0 * np.pi):
            raise ValueError("phases must lie in [0, 2pi)")
        object.__setattr__(self, "element_positions", pos)
        object.__setattr__(self, "phases", ph)

    @property
    def N(self) -> int:
        return self.element_positions.shape[0]

    @property
    def center(self) -> np.ndarray:
        return self.element_positions.mean(axis=0)


def make_planar_ris(N: int, center, wavelength: float) -> RisConfig:
    """Half-wavelength planar grid centered at a 3-D point, lying in the y-z
    plane (broadside along x). Uses the most square factorization of N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rows = int(math.isqrt(N))
    while N % rows:
        rows -= 1
    cols = N // rows
    spacing = wavelength / 2.0
    iy = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    iz = (np.arange(rows) - (rows - 1) / 2.0) * spacing
    yy, zz = np.meshgrid(iy, iz)
    pos = np.column_stack([
        np.full(N, float(center[0])),
        float(center[1]) + yy.ravel(),
        float(center[2]) + zz.ravel(),
    ])
    return RisConfig(element_positions=pos, phases=np.zeros(N))


@dataclass(frozen=True, eq=False)
class NetworkSnapshot:
    """One coherence interval's channels, powers, and radio constants."""

    H_d: np.ndarray        # (M, I); column i is the conjugated direct row
    G: tuple               # I cascaded matrices, each (N, M)
    P_t: np.ndarray        # (I,) transmit powers, W
    sigma2: float
    beta: float

    def __post_init__(self):
        H_d = np.asarray(self.H_d, dtype=complex)
        G = tuple(np.asarray(g, dtype=complex) for g in self.G)
        P_t = np.asarray(self.P_t, dtype=float)
        if H_d.ndim != 2:
            raise ValueError("H_d must be M x I")
        M, I = H_d.shape
        if len(G) != I or P_t.shape != (I,):
            raise ValueError("need one cascaded matrix and one power per IoT")
        for g in G:
            if g.ndim != 2 or g.shape[1] != M or g.shape[0] != G[0].shape[0]:
                raise ValueError("each cascaded matrix must be N x M")
        if np.any(P_t < 0):
            raise ValueError("powers must be non-negative")
        if self.sigma2 <= 0 or self.beta <= 0:
            raise ValueError("sigma2 and beta must be positive")
        object.__setattr__(self, "H_d", H_d)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "P_t", P_t)

    @property
    def M(self) -> int:
        return self.H_d.shape[0]

    @property
    def I(self) -> int:
        return self.H_d.shape[1]

    @property
    def N(self) -> int:
        return self.G[0].shape[0] if self.G else 0

    def direct_row(self, i: int) -> np.ndarray:
        """The 1 x M direct channel row of IoT i."""
        return self.H_d[:, i].conj()


def _check_unit_modulus(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=complex)
    if q.ndim != 1:
        raise ValueError("reflection must be a length-N vector")
    if q.size and np.max(np.abs(np.abs(q) - 1.0)) > UNIT_MODULUS_TOL:
        raise ValueError("reflection entries must be unit modulus")
    return q


def combined_channel(h_d: np.ndarray, q: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Effective channel row h_d + q @ G."""
    q = _check_unit_modulus(q)
    h_d = np.asarray(h_d, dtype=complex)
    G = np.asarray(G, dtype=complex)
    if G.shape != (q.size, h_d.size):
        raise ValueError("G must be N x M")
    return h_d + q @ G


def received_signal(snap: NetworkSnapshot, q, s, z) -> np.ndarray:
    """Superimposed uplink symbols through the combined channels, plus noise."""
    s = np.asarray(s, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if s.shape != (snap.I,) or z.shape != (snap.M,):
        raise ValueError("need I symbols and an M-entry noise row")
    if np.any(np.abs(s) ** 2 > snap.P_t * (1.0 + 1e-9) + 1e-12):
        raise ValueError("symbol power exceeds the transmit budget")
    out = z.copy()
    for i in range(snap.I):
        out += combined_channel(snap.direct_row(i), q, snap.G[i]) * s[i]
    return out


def _combined_power(snap: NetworkSnapshot, q) -> float:
    total = 0.0
    for i in range(snap.I):
        c = combined_channel(snap.direct_row(i), q, snap.G[i])
        total += snap.P_t[i] * float(np.sum(np.abs(c) ** 2))
    return total


def sum_capacity(snap: NetworkSnapshot, q) -> float:
    """Uplink sum capacity (bit/s) under reflection q."""
    return snap.beta * math.log2(1.0 + _combined_power(snap, q) / snap.sigma2)


def direct_capacity(snap: NetworkSnapshot) -> float:
    """Sum capacity with the RIS term deleted (direct channels only)."""
    total = sum(snap.P_t[i] * float(np.sum(np.abs(snap.direct_row(i)) ** 2))
                for i in range(snap.I))
    return snap.beta * math.log2(1.0 + total / snap.sigma2)


def aligned_capacity_bound(snap: NetworkSnapshot) -> float:
    """Perfect-phase-alignment capacity; defined for M = 1 only."""
    if snap.M != 1:
        raise ValueError("bound defined for single-antenna receiver")
    total = 0.0
    for i in range(snap.I):
        h = snap.direct_row(i)[0]
        aligned = abs(h) + float(np.sum(np.abs(snap.G[i][:, 0])))
        total += snap.P_t[i] * aligned ** 2
    return snap.beta * math.log2(1.0 + total / snap.sigma2)


def _complex_to_pairs(a: np.ndarray):
    return {"re": np.real(a).tolist(), "im": np.imag(a).tolist()}


def _pairs_to_complex(d) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def save_snapshot(snap: NetworkSnapshot, path) -> None:
    """Write a snapshot as JSON with complex entries stored as re/im pairs."""
    doc = {
        "M": snap.M, "N": snap.N, "I": snap.I,
        "sigma2": snap.sigma2, "beta": snap.beta,
        "P_t": snap.P_t.tolist(),
        "H_d": _complex_to_pairs(snap.H_d),
        "G": [_complex_to_pairs(g) for g in snap.G],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_snapshot(path) -> NetworkSnapshot:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    snap = NetworkSnapshot(
        H_d=_pairs_to_complex(doc["H_d"]),
        G=tuple(_pairs_to_complex(g) for g in doc["G"]),
        P_t=np.asarray(doc["P_t"], dtype=float),
        sigma2=float(doc["sigma2"]),
        beta=float(doc["beta"]),
    )
    if [snap.M, snap.N, snap.I] != [doc["M"], doc["N"], doc["I"]]:
        raise ValueError(f"{path}: stored dimensions disagree with arrays")
    return snap
