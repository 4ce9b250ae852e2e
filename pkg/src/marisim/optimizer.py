"""RIS phase optimization: homogenized objective, SDP relaxation via ADMM
splitting, Gaussian randomization, and a brute-force oracle.

The quadratic uplink objective over a unit-modulus reflection row q is
homogenized with an auxiliary coordinate into v = [q, 1], giving the pure
form v D v^H with D Hermitian PSD.  The relaxation drops rank-1, leaving
max Tr(DV) over Hermitian V with unit diagonal and V PSD.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ris_system import NetworkSnapshot


@dataclass(frozen=True, eq=False)
class HomogenizedObjective:
    D: np.ndarray  # (N+1, N+1) Hermitian PSD

    def __post_init__(self):
        D = np.asarray(self.D, dtype=complex)
        if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] < 1:
            raise ValueError("D must be square of size N+1 >= 1")
        if np.max(np.abs(D - D.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(D))):
            raise ValueError("D must be Hermitian")
        object.__setattr__(self, "D", D)

    @property
    def N(self) -> int:
        return self.D.shape[0] - 1


@dataclass(frozen=True, eq=False)
class SdpSolution:
    V: np.ndarray
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool


@dataclass(frozen=True)
class OptimizerConfig:
    sdp_tol: float = 1e-6
    sdp_max_iter: int = 5000
    randomization_draws: int = 100
    debug_dump: str | None = None


def build_D(Hd: np.ndarray, G, P_t) -> HomogenizedObjective:
    """Block matrix of the homogenized objective from channels and powers."""
    Hd = np.asarray(Hd, dtype=complex)
    P_t = np.asarray(P_t, dtype=float)
    if Hd.ndim != 2:
        raise ValueError("Hd must be M x I")
    M, I = Hd.shape
    if len(G) != I or P_t.shape != (I,):
        raise ValueError("need one cascaded matrix and one power per IoT")
    if np.any(P_t < 0):
        raise ValueError("powers must be non-negative")
    N = np.asarray(G[0]).shape[0] if I else 0
    D = np.zeros((N + 1, N + 1), dtype=complex)
    for i in range(I):
        Gi = np.asarray(G[i], dtype=complex)
        if Gi.shape != (N, M):
            raise ValueError("each cascaded matrix must be N x M")
        # capacities pair the conjugated direct row with q G_i, so the
        # cross block takes the raw column: q G_i h_i + c.c.
        hi = Hd[:, i]
        D[:N, :N] += P_t[i] * (Gi @ Gi.conj().T)
        D[:N, N] += P_t[i] * (Gi @ hi)
        D[N, N] += P_t[i] * float(np.real(hi.conj() @ hi))
    D[N, :N] = D[:N, N].conj()
    D = 0.5 * (D + D.conj().T)
    return HomogenizedObjective(D=D)


def reflection_objective(obj: HomogenizedObjective, q) -> float:
    """Quadratic objective [q, 1] D [q, 1]^H (row-vector convention)."""
    v = np.concatenate([np.asarray(q, dtype=complex), [1.0 + 0.0j]])
    return float(np.real(v @ obj.D @ v.conj()))


def solve_sdp(obj: HomogenizedObjective, tol: float = 1e-6,
              max_iter: int = 5000) -> SdpSolution:
    """Maximize Tr(DV) s.t. diag(V) = 1, V PSD, by ADMM operator splitting.

    One iterate carries the affine (unit-diagonal) constraint, the other is
    projected onto the PSD cone by eigenvalue truncation; a scaled dual links
    them.  D is normalized so tol acts on O(1) iterates; the PSD-side iterate
    is returned, making the PSD invariant exact and the diagonal within the
    primal residual of 1.
    """
    n = obj.D.shape[0]
    scale = float(np.linalg.norm(obj.D)) / n
    if scale == 0.0:
        scale = 1.0
    Dn = obj.D / scale
    # Direct-dominated instances concentrate Dn in one corner entry of
    # magnitude up to n; starting rho at that magnitude keeps the first
    # V-update O(1), else the PSD projection overshoots and the dual can
    # pin W at zero for tens of iterations.
    rho = max(1.0, float(np.max(np.abs(Dn))))
    rho_min, rho_max = 1e-3 * rho, 1e6 * rho
    W = np.eye(n, dtype=complex)
    dual = np.zeros((n, n), dtype=complex)
    primal = dual_res = np.inf
    iterations = 0
    converged = False
    for k in range(1, max_iter + 1):
        iterations = k
        V = W - dual + Dn / rho
        V = 0.5 * (V + V.conj().T)
        np.fill_diagonal(V, 1.0)
        W_prev = W
        evals, evecs = np.linalg.eigh(V + dual)
        np.maximum(evals, 0.0, out=evals)
        W = (evecs * evals) @ evecs.conj().T
        W = 0.5 * (W + W.conj().T)
        dual += V - W
        primal = float(np.max(np.abs(V - W)))
        dual_res = float(rho * np.max(np.abs(W - W_prev)))
        if primal < tol and dual_res < tol:
            converged = True
            break
        if k % 10 == 0:  # residual balancing keeps rho useful across scales
            if primal > 10.0 * dual_res and rho < rho_max:
                rho *= 2.0
                dual /= 2.0
            elif dual_res > 10.0 * primal and rho > rho_min:
                rho /= 2.0
                dual *= 2.0
    objective = float(np.real(np.sum(obj.D * W.conj())))
    return SdpSolution(V=W, objective=objective, iterations=iterations,
                       primal_residual=primal, dual_residual=dual_res,
                       converged=converged)


def randomize(sol: SdpSolution, R: int, obj: HomogenizedObjective, rng) -> np.ndarray:
    """Best-of-R Gaussian rounding of the relaxed solution to unit modulus."""
    if R < 1:
        raise ValueError("need at least one draw")
    evals, evecs = np.linalg.eigh(sol.V)
    np.maximum(evals, 0.0, out=evals)  # solver tolerance can leave tiny < 0
    A = evecs * np.sqrt(evals)
    n = sol.V.shape[0]
    best_q = np.ones(n - 1, dtype=complex)
    best_val = reflection_objective(obj, best_q)
    # Rank-one case aside, the top eigenvector is a strong deterministic
    # candidate and keeps the rounding sane when the solver iterate is poor.
    v = evecs[:, -1]
    if abs(v[-1]) > 0.0:
        q = np.exp(1j * np.angle(v[:-1].conj() * v[-1]))
        val = reflection_objective(obj, q)
        if val > best_val:
            best_val = val
            best_q = q
    for _ in range(R):
        e = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
        v = A @ e
        if abs(v[-1]) == 0.0:
            continue
        # v samples the column convention E[v v^H] = V; the row-form phases
        # of [q, 1] follow from the conjugated ratio against the last entry.
        q = np.exp(1j * np.angle(v[:-1].conj() * v[-1]))
        val = reflection_objective(obj, q)
        if val > best_val:
            best_val = val
            best_q = q
    return best_q


def optimize_phases(snap: NetworkSnapshot, cfg: OptimizerConfig, rng,
                    return_solution: bool = False):
    """Full chain: build D, solve the SDP, randomize, and guard with the
    all-ones reflection and sign flips so the result never loses to them.

    With return_solution the relaxed SdpSolution is appended for diagnostics.
    """
    obj = build_D(snap.H_d, snap.G, snap.P_t)
    N = obj.N
    ones = np.ones(N, dtype=complex)
    if N == 0:
        capacity = snap.beta * float(np.log2(1.0 + obj.D[0, 0].real / snap.sigma2))
        return (ones, capacity, None) if return_solution else (ones, capacity)
    sol = solve_sdp(obj, cfg.sdp_tol, cfg.sdp_max_iter)
    if cfg.debug_dump:
        np.savez(cfg.debug_dump, D=obj.D, V=sol.V,
                 residuals=np.array([sol.primal_residual, sol.dual_residual]),
                 iterations=sol.iterations)
    q_rand = randomize(sol, cfg.randomization_draws, obj, rng)
    # The +/- pair of any candidate averages to at least the direct-only
    # power, so including sign flips certifies RIS-on >= RIS-off.
    best_q = None
    best_val = -np.inf
    for q in (q_rand, -q_rand, ones, -ones):
        val = reflection_objective(obj, q)
        if val > best_val:
            best_val = val
            best_q = q
    capacity = snap.beta * float(np.log2(1.0 + best_val / snap.sigma2))
    return (best_q, capacity, sol) if return_solution else (best_q, capacity)


_BRUTE_FORCE_GUARD = 10 ** 8
_BRUTE_FORCE_CHUNK = 1 << 17


def brute_force_phases(snap: NetworkSnapshot, levels: int):
    """Exhaustive search over levels^N quantized reflections (test oracle)."""
    N = snap.N
    if levels < 1:
        raise ValueError("levels must be >= 1")
    total = levels ** N
    if total > _BRUTE_FORCE_GUARD:
        raise ValueError("search space exceeds the enumeration guard")
    phases = np.exp(2j * np.pi * np.arange(levels) / levels)
    best_val = -np.inf
    best_idx = 0
    for start in range(0, total, _BRUTE_FORCE_CHUNK):
        idx = np.arange(start, min(start + _BRUTE_FORCE_CHUNK, total))
        digits = (idx[:, None] // levels ** np.arange(N)[None, :]) % levels
        Q = phases[digits]                      # (K, N)
        val = np.zeros(len(idx))
        for i in range(snap.I):
            rows = snap.direct_row(i)[None, :] + Q @ snap.G[i]
            val += snap.P_t[i] * np.sum(np.abs(rows) ** 2, axis=1)
        k = int(np.argmax(val))
        if val[k] > best_val:
            best_val = float(val[k])
            best_idx = int(idx[k])
    digits = (best_idx // levels ** np.arange(N)) % levels
    q = phases[digits]
    capacity = snap.beta * float(np.log2(1.0 + best_val / snap.sigma2))
    return q, capacity
