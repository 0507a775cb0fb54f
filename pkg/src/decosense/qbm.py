"""General ideal quantum-Brownian-motion generator on one mechanical mode.

The generator is parameterized by a Hamiltonian quadratic form H_ab, a
diffusion quadratic form D_ab and a friction scalar lambda, all obtained from
a list of Lindblad coefficient vectors L^(i)_a over phase space alpha = (x, p).
This module builds the parameterization, checks the positivity constraints
that make it a valid quantum channel generator, and diagonalizes the diffusion
form by a phase-space rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LindbladSpec",
    "QBMParams",
    "ValidityReport",
    "qbm_from_lindblad",
    "validate_qbm",
    "diagonalize_diffusion",
]

# Levi-Civita symbol on (x, p) with eps^{12} = +1; fixed module constant.
EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])

_SYM_TOL = 1e-12


def _as_symmetric(name: str, mat) -> np.ndarray:
    """Return a symmetrized copy of a 2x2 matrix, rejecting real asymmetry.

    Asymmetry below 1e-12 relative is treated as floating-point noise and
    averaged away; anything larger is a caller error.
    """
    a = np.asarray(mat, dtype=float)
    if a.shape != (2, 2):
        raise ValueError(f"{name}: expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name}: entries must be finite")
    scale = max(1.0, float(np.max(np.abs(a))))
    if abs(a[0, 1] - a[1, 0]) > _SYM_TOL * scale:
        raise ValueError(f"{name}: not symmetric (|a01 - a10| = {abs(a[0,1]-a[1,0]):.3e})")
    sym = 0.5 * (a + a.T)
    sym.setflags(write=False)
    return sym


@dataclass(frozen=True)
class LindbladSpec:
    """Hamiltonian quadratic form plus Lindblad coefficient vectors.

    hmat is the real symmetric 2x2 form H_ab; lvecs is any finite list of
    complex 2-vectors (L_x, L_p), one per Lindblad operator. The number of
    vectors is not bounded; two suffice mathematically.
    """

    hmat: np.ndarray
    lvecs: tuple = ()
    hbar: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "hmat", _as_symmetric("hmat", self.hmat))
        vecs = []
        for i, v in enumerate(self.lvecs):
            arr = np.asarray(v, dtype=complex)
            if arr.shape != (2,):
                raise ValueError(f"lvecs[{i}]: expected a complex 2-vector")
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"lvecs[{i}]: entries must be finite")
            arr.setflags(write=False)
            vecs.append(arr)
        object.__setattr__(self, "lvecs", tuple(vecs))
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar: must be positive, got {self.hbar!r}")


@dataclass(frozen=True)
class QBMParams:
    """Checked (D_ab, lambda, H_ab) parameter set of the QBM generator."""

    dmat: np.ndarray
    lam: float
    hmat: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "dmat", _as_symmetric("dmat", self.dmat))
        object.__setattr__(self, "hmat", _as_symmetric("hmat", self.hmat))
        if not math.isfinite(self.lam):
            raise ValueError("lambda: must be finite")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar: must be positive, got {self.hbar!r}")
        report = validate_qbm(self.dmat, self.lam)
        if not report.ok:
            raise ValueError(f"invalid QBM parameters: {'; '.join(report.violations)}")

    @property
    def fmat(self) -> np.ndarray:
        """Drift form F_ab = H_ab + eps_ab * lambda (eps_21 = +1)."""
        return self.hmat + EPS.T * self.lam

    @property
    def dmat_raised(self) -> np.ndarray:
        """Raised-index diffusion form D^{ab} = eps^{ac} eps^{bd} D_cd.

        For 2x2 this swaps the diagonal and negates the off-diagonal, so the
        determinant is unchanged: det(D^{ab}) = det(D_ab).
        """
        return EPS @ self.dmat @ EPS.T


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violations: tuple = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def qbm_from_lindblad(spec: LindbladSpec) -> QBMParams:
    """Change variables from Lindblad vectors to (D_ab, lambda).

    D_ab = Re sum_i (L_a)* L_b and lambda = Im sum_i (L_x)* L_p. The result
    always passes validate_qbm: D is PSD as a sum of rank-1 Gram terms, and
    det D >= lambda^2 is the Cauchy-Schwarz inequality on the same sums.
    """
    gram = np.zeros((2, 2), dtype=complex)
    for v in spec.lvecs:
        gram += np.outer(np.conj(v), v)
    dmat = gram.real.copy()
    dmat = 0.5 * (dmat + dmat.T)
    lam = float(gram[0, 1].imag)
    return QBMParams(dmat=dmat, lam=lam, hmat=spec.hmat, hbar=spec.hbar)


def validate_qbm(dmat, lam: float) -> ValidityReport:
    """Check the generator positivity constraints, naming any violation.

    Accepts iff dmat is symmetric PSD and det(dmat) >= lambda^2 (with slack
    1e-12*max(1, lambda^2) for the boundary case). Never raises on a failed
    condition; the report lists what failed.
    """
    d = _as_symmetric("dmat", dmat)
    violations = []
    eigs = np.linalg.eigvalsh(d)
    scale = max(1.0, float(np.max(np.abs(d))))
    if eigs[0] < -1e-12 * scale:
        violations.append(f"dmat not positive semidefinite (eigenvalue {eigs[0]:.6g})")
    det = float(np.linalg.det(d))
    if det < lam**2 - 1e-12 * max(1.0, lam**2):
        violations.append(f"det(D) = {det:.6g} < lambda^2 = {lam**2:.6g}")
    return ValidityReport(ok=not violations, violations=tuple(violations))


def diagonalize_diffusion(params: QBMParams) -> tuple[float, tuple[float, float]]:
    """Rotation angle and eigenvalues diagonalizing the raised diffusion form.

    Returns (theta_rot, (d1, d2)) with R(theta) D^{ab} R(theta)^T = diag(d1, d2),
    d1 >= d2 and theta_rot in (-pi/2, pi/2]. Degenerate spectra tie-break to
    theta_rot = 0.
    """
    d = params.dmat_raised
    eigvals, eigvecs = np.linalg.eigh(d)  # ascending
    d1, d2 = float(eigvals[1]), float(eigvals[0])
    scale = max(1.0, abs(d1), abs(d2))
    if abs(d1 - d2) <= 1e-12 * scale:
        return 0.0, (d1, d2)
    v = eigvecs[:, 1]  # axis of the larger eigenvalue
    theta = math.atan2(v[1], v[0])
    # The axis is direction-free: fold into (-pi/2, pi/2].
    if theta > math.pi / 2:
        theta -= math.pi
    elif theta <= -math.pi / 2:
        theta += math.pi
    # R(theta) rows are the principal axes; rotation by -theta aligns them.
    return float(theta), (d1, d2)


def rotation(theta: float) -> np.ndarray:
    """R(theta) = [[cos, sin], [-sin, cos]], the map used by diagonalize_diffusion."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])
