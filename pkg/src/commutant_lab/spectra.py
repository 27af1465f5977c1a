"""Commutator norms and joint diagonalization.

Commutation KL = LK means eigenspaces of K are invariant under L, so
eigenvectors of the (cheap, well-understood) differential operator L
serve as an approximate eigenbasis of K.  This module measures how well
the discretized pair commutes and demonstrates the joint diagonalization:
Rayleigh quotients of K against the small-|eigenvalue| L-modes reproduce
K's dominant spectrum, and the projected K is diagonal up to commutator-
sized off-diagonal energy.

Inner products are quadrature-weighted (discrete L^2(-1,1)), matching
where the operators live.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EigFailure, GridMismatchError
from .discretize import OperatorMatrix

_TINY = 1e-300
_POWER_SEED = 20240201


def spectral_norm(A: np.ndarray, iters: int = 50, tol: float = 1e-10) -> float:
    """2-norm by power iteration on the Gram form A^H A (deterministic start)."""
    n = A.shape[1]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(_POWER_SEED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    prev = 0.0
    sigma = 0.0
    for _ in range(iters):
        u = A @ v
        v = A.conj().T @ u
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return 0.0
        sigma = np.sqrt(norm)
        v /= norm
        if abs(sigma - prev) <= tol * max(sigma, 1.0):
            break
        prev = sigma
    return float(sigma)


def _interior_slice(M: OperatorMatrix) -> np.ndarray:
    mask = M.grid.interior()
    return M.entries[np.ix_(mask, mask)]


def commutator_norm(K: OperatorMatrix, L: OperatorMatrix, interior: bool = False) -> float:
    """Relative commutator norm ||KL - LK|| / (||K|| ||L|| + tiny).

    With ``interior`` the commutator and the normalizing factors are
    restricted to nodes strictly inside (-1, 1); pv discretizations use
    this because their endpoint rows follow a one-sided convention.
    """
    if not K.grid.same_as(L.grid):
        raise GridMismatchError("K and L must share a grid")
    C = K.entries @ L.entries - L.entries @ K.entries
    if interior:
        mask = K.grid.interior()
        C = C[np.ix_(mask, mask)]
        nK = spectral_norm(_interior_slice(K))
        nL = spectral_norm(_interior_slice(L))
    else:
        nK = spectral_norm(K.entries)
        nL = spectral_norm(L.entries)
    return spectral_norm(C) / (nK * nL + _TINY)


@dataclass(frozen=True)
class SpectralReport:
    L_eigenvalues: np.ndarray
    rayleigh: np.ndarray
    mode_residuals: np.ndarray
    offdiag_energy: float
    K_eigenvalues_direct: np.ndarray
    degenerate: bool = False
    degenerate_blocks: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "L_eigenvalues": [[v.real, v.imag] for v in self.L_eigenvalues],
            "rayleigh": [[v.real, v.imag] for v in self.rayleigh],
            "mode_residuals": list(self.mode_residuals),
            "offdiag_energy": self.offdiag_energy,
            "K_eigenvalues_direct": [[v.real, v.imag] for v in self.K_eigenvalues_direct],
            "degenerate": self.degenerate,
        }

    def rows(self) -> list[list]:
        out = []
        for i in range(len(self.L_eigenvalues)):
            le = self.L_eigenvalues[i]
            ra = self.rayleigh[i]
            out.append([i, le.real, le.imag, ra.real, ra.imag, float(self.mode_residuals[i])])
        return out


def joint_diagonalization(
    K: OperatorMatrix,
    L: OperatorMatrix,
    m: int,
    interior: bool = False,
    sort_by: str = "abs",
) -> SpectralReport:
    """Diagonalize L, project K onto the leading m L-modes, cross-check.

    Modes are the m smallest-|eigenvalue| L-eigenvectors (prolate-style
    ordering; ``sort_by='real'`` sorts by real part instead).  Rayleigh
    quotients, per-mode residuals and off-diagonal energy use quadrature-
    weighted inner products; ``interior`` restricts those inner products
    to interior nodes (pv convention).  L-eigenvalue clusters closer than
    1e-8 (relative) set the degeneracy flag and are treated as blocks in
    the off-diagonal measure.
    """
    if not K.grid.same_as(L.grid):
        raise GridMismatchError("K and L must share a grid")
    if m > K.grid.n:
        raise ValueError("m exceeds the grid size")
    try:
        lam, V = np.linalg.eig(L.entries)
        mu_all = np.linalg.eigvals(K.entries)
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc

    if sort_by == "real":
        order = np.argsort(lam.real)
    else:
        order = np.argsort(np.abs(lam))
    lam = lam[order][:m]
    V = V[:, order][:, :m]

    w = K.grid.weights
    mask = K.grid.interior() if interior else np.ones(K.grid.n, dtype=bool)
    wi = w[mask]

    Vm = V[mask, :]
    norms = np.sqrt(np.abs(np.einsum("i,ij->j", wi, np.abs(Vm) ** 2)))
    Vn = V / norms[None, :]
    Vni = Vn[mask, :]
    KV = (K.entries @ Vn)[mask, :]
    G = (Vni.conj().T * wi[None, :]) @ KV
    rayleigh = np.diag(G).copy()

    mode_residuals = np.empty(m)
    for j in range(m):
        r = KV[:, j] - rayleigh[j] * Vni[:, j]
        num = np.sqrt(np.sum(wi * np.abs(r) ** 2))
        den = np.sqrt(np.sum(wi * np.abs(KV[:, j]) ** 2))
        mode_residuals[j] = num / (den + _TINY)

    # degenerate clusters of L-eigenvalues (relative gap below 1e-8)
    scale = max(np.max(np.abs(lam)), _TINY)
    blocks: list[list[int]] = []
    for i in range(m):
        placed = False
        for blk in blocks:
            if any(abs(lam[i] - lam[j]) <= 1e-8 * scale for j in blk):
                blk.append(i)
                placed = True
                break
        if not placed:
            blocks.append([i])
    degenerate = any(len(b) > 1 for b in blocks)

    same_block = np.zeros((m, m), dtype=bool)
    for blk in blocks:
        for i in blk:
            for j in blk:
                same_block[i, j] = True
    offmask = ~same_block
    diag_max = np.max(np.abs(rayleigh)) + _TINY
    offdiag = float(np.max(np.abs(G[offmask])) / diag_max) if np.any(offmask) else 0.0

    mu_top = mu_all[np.argsort(-np.abs(mu_all))][:m]
    return SpectralReport(
        L_eigenvalues=lam,
        rayleigh=rayleigh,
        mode_residuals=mode_residuals,
        offdiag_energy=offdiag,
        K_eigenvalues_direct=mu_top,
        degenerate=degenerate,
        degenerate_blocks=tuple(tuple(b) for b in blocks if len(b) > 1),
    )
