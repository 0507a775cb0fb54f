"""Order counting for weakly coupled bipartite systems.

Dense-matrix embodiment of the claim that a coupling of strength eps
entangles only at second order: the peeled evolution
U'_t = e^{+i H_P t} e^{+i H_E t} e^{-i H t} isolates the coupling's effect,
the probe's purity deficit scales as eps^2, and a first-order effective
Hamiltonian reproduces the reduced state to the same order. hbar = 1 here;
these are dimensionless toy systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, logm

__all__ = [
    "BipartiteSystem",
    "random_system",
    "zassenhaus_terms",
    "peeled_evolution",
    "purity_deficit",
    "first_order_state",
    "reduced_probe_state",
]

_MAX_DIM = 200


def _check_hermitian(name: str, mat, dim: int) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(f"{name}: expected {dim}x{dim}, got {m.shape}")
    scale = float(np.max(np.abs(m))) or 1.0
    if np.max(np.abs(m - m.conj().T)) > 1e-12 * scale:
        raise ValueError(f"{name}: not Hermitian within 1e-12")
    return 0.5 * (m + m.conj().T)


def _normalized(name: str, vec, dim: int) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.shape != (dim,):
        raise ValueError(f"{name}: expected a length-{dim} vector, got {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError(f"{name}: zero vector")
    return v / norm


@dataclass(frozen=True)
class BipartiteSystem:
    """Probe x environment with H = H_P + H_E + eps*H_I and product start."""

    dP: int
    dE: int
    H_P: np.ndarray
    H_E: np.ndarray
    H_I: np.ndarray
    n0: np.ndarray
    e0: np.ndarray

    def __post_init__(self) -> None:
        if self.dP < 2 or self.dE < 2:
            raise ValueError("system: both dimensions must be at least 2")
        if self.dP * self.dE > _MAX_DIM:
            raise ValueError(f"system: dP*dE = {self.dP * self.dE} exceeds the dense limit {_MAX_DIM}")
        object.__setattr__(self, "H_P", _check_hermitian("H_P", self.H_P, self.dP))
        object.__setattr__(self, "H_E", _check_hermitian("H_E", self.H_E, self.dE))
        object.__setattr__(self, "H_I", _check_hermitian("H_I", self.H_I, self.dP * self.dE))
        object.__setattr__(self, "n0", _normalized("n0", self.n0, self.dP))
        object.__setattr__(self, "e0", _normalized("e0", self.e0, self.dE))

    @property
    def psi0(self) -> np.ndarray:
        return np.kron(self.n0, self.e0)

    def hamiltonian(self, eps: float) -> np.ndarray:
        iP = np.eye(self.dP)
        iE = np.eye(self.dE)
        return np.kron(self.H_P, iE) + np.kron(iP, self.H_E) + eps * self.H_I


def _unit_norm_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    return h / float(np.linalg.norm(h, 2))


def random_system(dP: int = 2, dE: int = 3, seed: int = 42) -> BipartiteSystem:
    """Seeded test system with unit-spectral-norm Hamiltonians.

    Normalizing each term keeps the eps sweep inside the perturbative window
    so the eps^2 scaling fits cleanly.
    """
    rng = np.random.default_rng(seed)
    hp = _unit_norm_hermitian(rng, dP)
    he = _unit_norm_hermitian(rng, dE)
    hi = _unit_norm_hermitian(rng, dP * dE)
    n0 = rng.standard_normal(dP) + 1j * rng.standard_normal(dP)
    e0 = rng.standard_normal(dE) + 1j * rng.standard_normal(dE)
    return BipartiteSystem(dP, dE, hp, he, hi, n0, e0)


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def zassenhaus_terms(a, b, order: int = 3) -> list:
    """Correction exponents of e^{A+B} = e^A e^B e^{C2} e^{C3} ...

    C2 = -[A,B]/2 and C3 = [B,[A,B]]/3 + [A,[A,B]]/6. Terms beyond order 3
    are out of scope.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"A: expected a square matrix, got shape {a.shape}")
    if a.shape != b.shape:
        raise ValueError(f"A and B dimensions differ: {a.shape} vs {b.shape}")
    if not 2 <= order <= 3:
        raise ValueError(f"order: supported range is 2..3, got {order!r}")
    ab = _comm(a, b)
    terms = [-0.5 * ab]
    if order >= 3:
        terms.append(_comm(b, ab) / 3.0 + _comm(a, ab) / 6.0)
    return terms


def peeled_evolution(sys: BipartiteSystem, eps: float, t: float) -> np.ndarray:
    """U'_t = e^{+i H_P t} e^{+i H_E t} e^{-i H t}; identity when eps = 0."""
    iP = np.eye(sys.dP)
    iE = np.eye(sys.dE)
    local = np.kron(expm(1j * sys.H_P * t), iE) @ np.kron(iP, expm(1j * sys.H_E * t))
    return local @ expm(-1j * sys.hamiltonian(eps) * t)


def _schmidt_values(sys: BipartiteSystem, psi: np.ndarray) -> np.ndarray:
    return np.linalg.svd(psi.reshape(sys.dP, sys.dE), compute_uv=False)


def purity_deficit(sys: BipartiteSystem, eps: float, t: float) -> float:
    """1 - Tr[rho_P(t)^2] after exact evolution under H(eps).

    Computed from Schmidt coefficients as 2*sum_{i<j} (s_i s_j)^2, which has
    no cancellation and stays accurate down to deficits ~1e-28; the naive
    1 - sum s^4 floors out at machine epsilon long before that.
    """
    psi = expm(-1j * sys.hamiltonian(eps) * t) @ sys.psi0
    s = _schmidt_values(sys, psi)
    lam = s * s
    lam = lam / lam.sum()
    cross = 0.0
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            cross += lam[i] * lam[j]
    return max(0.0, 2.0 * float(cross))


def first_order_state(sys: BipartiteSystem, eps: float, t: float, eps_ref: float = 1e-5) -> np.ndarray:
    """|N~_t> = normalized (I - i eps <E0| Heff t |E0>) |N0>.

    The effective coupling is extracted from the peeled evolution at a small
    reference coupling: U'(eps_ref) = e^{-i eps_ref Heff t + O(eps_ref^2)}, so
    i log U' / eps_ref recovers Heff*t up to O(eps_ref). Its environment
    expectation generates the probe's first-order drift.
    """
    if eps == 0.0:
        return sys.n0.copy()
    u = peeled_evolution(sys, eps_ref, t)
    heff_t = 1j * logm(u) / eps_ref
    heff4 = heff_t.reshape(sys.dP, sys.dE, sys.dP, sys.dE)
    m = np.einsum("e,aebf,f->ab", sys.e0.conj(), heff4, sys.e0)
    m = 0.5 * (m + m.conj().T)
    vec = (np.eye(sys.dP) - 1j * eps * m) @ sys.n0
    return vec / float(np.linalg.norm(vec))


def reduced_probe_state(sys: BipartiteSystem, eps: float, t: float, peeled: bool = True) -> np.ndarray:
    """rho_P after evolving |psi0>; in the peeled frame by default, matching
    the frame in which first_order_state is defined."""
    u = peeled_evolution(sys, eps, t) if peeled else expm(-1j * sys.hamiltonian(eps) * t)
    psi = u @ sys.psi0
    mat = psi.reshape(sys.dP, sys.dE)
    return mat @ mat.conj().T
