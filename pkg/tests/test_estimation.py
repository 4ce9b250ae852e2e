"""Two-stage least-squares channel estimation from pilot sub-frames."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marisim.estimation import (
    PilotBook,
    ReflectionSchedule,
    estimate_cascaded,
    estimate_direct,
    make_orthogonal_pilots,
    make_reflection_schedule,
    pilot_overhead_symbols,
    simulate_pilot_rx,
)
from marisim.ris_system import NetworkSnapshot


def random_snapshot(rng, N, M, I, sigma2=1.0):
    Hd = rng.standard_normal((M, I)) + 1j * rng.standard_normal((M, I))
    G = tuple(rng.standard_normal((N, M)) + 1j * rng.standard_normal((N, M))
              for _ in range(I))
    P_t = rng.uniform(0.5, 2.0, I)
    return NetworkSnapshot(H_d=Hd, G=G, P_t=P_t, sigma2=sigma2, beta=1.0)


def run_pipeline(snap, B, T, noise_rng=None):
    pilots = make_orthogonal_pilots(snap.I, T, snap.P_t)
    sched = make_reflection_schedule(snap.N, B)
    Y0 = simulate_pilot_rx(snap, sched.q0, pilots, noise_rng)
    Y1 = simulate_pilot_rx(snap, sched.q1, pilots, noise_rng)
    Yb = [simulate_pilot_rx(snap, sched.scheduled_reflection(b), pilots,
                            noise_rng) for b in range(B)]
    Hd_hat = estimate_direct(Y0, Y1, pilots)
    G_hat = estimate_cascaded(Yb, pilots, Hd_hat, sched)
    return Hd_hat, G_hat


def test_pilot_book_orthogonality():
    powers = np.array([0.7, 1.3, 2.0])
    pilots = make_orthogonal_pilots(3, 5, powers)
    assert (pilots.T, pilots.I) == (5, 3)
    S = pilots.S
    gram = S.conj().T @ S
    assert gram == pytest.approx(np.diag(powers * 5), abs=1e-12)
    for i in range(3):
        assert pilots.pilot_row(i) == pytest.approx(S[:, i].conj())


def test_pilot_book_requires_enough_symbols():
    with pytest.raises(ValueError):
        make_orthogonal_pilots(4, 3, np.ones(4))
    make_orthogonal_pilots(4, 4, np.ones(4))   # square book is legal


def test_reflection_schedule_structure():
    sched = make_reflection_schedule(6, 9)
    assert (sched.N, sched.B) == (6, 9)
    assert sched.q1 == pytest.approx(-sched.q0)
    assert np.abs(sched.q0) == pytest.approx(np.ones(6))
    for b in range(9):
        q = sched.scheduled_reflection(b)
        assert np.abs(q) == pytest.approx(np.ones(6))
        assert q == pytest.approx(sched.Qtilde[:, b].conj())
    with pytest.raises(ValueError):
        make_reflection_schedule(6, 5)   # fewer sub-frames than elements


def test_schedule_rejects_non_unit_entries():
    with pytest.raises(ValueError):
        ReflectionSchedule(q0=np.array([1.0 + 0j, 0.5]),
                           Qtilde=np.ones((2, 2), dtype=complex))


@given(st.integers(0, 2 ** 32 - 1))
def test_noiseless_recovery_is_exact(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 9))
    M = int(rng.integers(1, 4))
    I = int(rng.integers(1, 4))
    snap = random_snapshot(rng, N, M, I)
    Hd_hat, G_hat = run_pipeline(snap, B=N, T=I)
    assert np.linalg.norm(Hd_hat - snap.H_d) <= 1e-9 * np.linalg.norm(snap.H_d)
    for i in range(I):
        assert (np.linalg.norm(G_hat[i] - snap.G[i])
                <= 1e-9 * np.linalg.norm(snap.G[i]))


def test_extra_subframes_do_not_break_recovery():
    rng = np.random.default_rng(10)
    snap = random_snapshot(rng, N=5, M=2, I=3)
    Hd_hat, G_hat = run_pipeline(snap, B=8, T=4)   # B > N, T > I
    assert Hd_hat == pytest.approx(snap.H_d, rel=1e-9)
    for i in range(3):
        assert G_hat[i] == pytest.approx(snap.G[i], rel=1e-9)


def test_noise_perturbs_but_tracks_the_truth():
    rng = np.random.default_rng(11)
    snap = random_snapshot(rng, N=4, M=2, I=2, sigma2=1e-8)
    Hd_hat, G_hat = run_pipeline(snap, B=4, T=2, noise_rng=rng)
    err = np.linalg.norm(Hd_hat - snap.H_d) / np.linalg.norm(snap.H_d)
    assert 0.0 < err < 1e-3   # tiny noise, tiny but nonzero error
    for i in range(2):
        rel = np.linalg.norm(G_hat[i] - snap.G[i]) / np.linalg.norm(snap.G[i])
        assert rel < 1e-2


def test_rank_deficient_schedule_is_reported():
    rng = np.random.default_rng(12)
    snap = random_snapshot(rng, N=3, M=2, I=2)
    pilots = make_orthogonal_pilots(2, 2, snap.P_t)
    degenerate = ReflectionSchedule(q0=np.ones(3, dtype=complex),
                                    Qtilde=np.ones((3, 4), dtype=complex))
    Yb = [simulate_pilot_rx(snap, degenerate.scheduled_reflection(b), pilots)
          for b in range(4)]
    Hd_hat = estimate_direct(
        simulate_pilot_rx(snap, degenerate.q0, pilots),
        simulate_pilot_rx(snap, degenerate.q1, pilots), pilots)
    with pytest.raises(np.linalg.LinAlgError):
        estimate_cascaded(Yb, pilots, Hd_hat, degenerate)


def test_pilot_rx_rejects_mismatched_book():
    rng = np.random.default_rng(13)
    snap = random_snapshot(rng, N=3, M=2, I=2)
    pilots = make_orthogonal_pilots(3, 3, np.ones(3))
    sched = make_reflection_schedule(3, 3)
    with pytest.raises(ValueError):
        simulate_pilot_rx(snap, sched.q0, pilots)


def test_overhead_symbol_count():
    assert pilot_overhead_symbols(360, 4) == 1448   # (B + 2) sub-frames of T
    assert pilot_overhead_symbols(1, 1) == 3
