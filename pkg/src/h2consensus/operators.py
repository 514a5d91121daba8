"""Laplacian-type operators and the edge-coordinate state-space systems.

The tree-edge dynamics are written ``dx/dt = -A x + B w`` with ``A`` positive
stable, so the system matrix of the usual ``dx/dt = F x`` form is ``F = -A``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IllConditioned, SingularTreeGram, UnstablePair, ValidationError
from .graph import CutBasis, IncidenceDecomposition


class Mode(str, enum.Enum):
    """Output choice: all edge states (``SIGMA``) or tree states only (``SIGMA_HAT``)."""

    SIGMA = "sigma"
    SIGMA_HAT = "sigma_hat"


@dataclass(frozen=True)
class ScaleWeightPair:
    """Node time scales ``epsilon`` (diagonal of E) and edge weights (diagonal of W).

    ``weights`` follow the edge ordering used to build the incidence matrix.
    """

    epsilon: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.epsilon, dtype=float).reshape(-1)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if not np.all(np.isfinite(eps)) or np.any(eps <= 0):
            raise ValidationError(f"time scales must be finite and positive, got {eps.tolist()}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError(f"edge weights must be finite and positive, got {w.tolist()}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "weights", w)

    @property
    def E(self) -> np.ndarray:
        return np.diag(self.epsilon)

    @property
    def W(self) -> np.ndarray:
        return np.diag(self.weights)

    @property
    def eps_sum(self) -> float:
        return float(self.epsilon.sum())


@dataclass(frozen=True)
class NoiseModel:
    """Process and measurement noise factors.

    ``omega_factor``/``gamma_factor`` set to ``None`` select the separable
    choice ``sigma_omega * E^(1/2)`` / ``sigma_v * W^(1/2)``. Explicit factors
    are square; the covariance is ``F @ F.T``.
    """

    sigma_omega: float = 1.0
    sigma_v: float = 1.0
    omega_factor: np.ndarray | None = None
    gamma_factor: np.ndarray | None = None

    def __post_init__(self):
        for name in ("sigma_omega", "sigma_v"):
            val = float(getattr(self, name))
            if not np.isfinite(val) or val <= 0:
                raise ValidationError(f"{name} must be finite and positive, got {val}")
            object.__setattr__(self, name, val)
        for name in ("omega_factor", "gamma_factor"):
            mat = getattr(self, name)
            if mat is not None:
                mat = np.atleast_2d(np.asarray(mat, dtype=float))
                if mat.shape[0] != mat.shape[1]:
                    raise DimensionMismatch(f"{name} must be square, got shape {mat.shape}")
                if not np.all(np.isfinite(mat)):
                    raise ValidationError(f"{name} has non-finite entries")
                object.__setattr__(self, name, mat)

    @property
    def separable(self) -> bool:
        return self.omega_factor is None and self.gamma_factor is None

    def omega(self, sw: ScaleWeightPair) -> np.ndarray:
        if self.omega_factor is None:
            return self.sigma_omega * np.diag(np.sqrt(sw.epsilon))
        if self.omega_factor.shape[0] != sw.epsilon.size:
            raise DimensionMismatch(f"omega factor is {self.omega_factor.shape}, expected n={sw.epsilon.size}")
        return self.omega_factor

    def gamma(self, sw: ScaleWeightPair) -> np.ndarray:
        if self.gamma_factor is None:
            return self.sigma_v * np.diag(np.sqrt(sw.weights))
        if self.gamma_factor.shape[0] != sw.weights.size:
            raise DimensionMismatch(f"gamma factor is {self.gamma_factor.shape}, expected m={sw.weights.size}")
        return self.gamma_factor


def _check_dims(inc: IncidenceDecomposition, sw: ScaleWeightPair) -> None:
    n, m = inc.D.shape
    if sw.epsilon.size != n or sw.weights.size != m:
        raise DimensionMismatch(
            f"graph has n={n}, m={m} but got {sw.epsilon.size} time scales and {sw.weights.size} weights"
        )


def weighted_laplacian(inc: IncidenceDecomposition, sw: ScaleWeightPair) -> np.ndarray:
    """``L_w = D W D^T``."""
    _check_dims(inc, sw)
    D = inc.D
    return (D * sw.weights) @ D.T


def scaled_laplacian(inc: IncidenceDecomposition, sw: ScaleWeightPair) -> np.ndarray:
    """``E^-1 L_w``, the node-level system matrix (up to sign)."""
    return weighted_laplacian(inc, sw) / sw.epsilon[:, None]


def scaled_edge_laplacian(inc: IncidenceDecomposition, sw: ScaleWeightPair) -> np.ndarray:
    """``L_es = D_tau^T E^-1 D_tau`` on the spanning-tree edges."""
    _check_dims(inc, sw)
    D_tau = inc.D_tau
    return D_tau.T @ (D_tau / sw.epsilon[:, None])


def cut_weight_gram(cb: CutBasis, sw: ScaleWeightPair) -> np.ndarray:
    """``R W R^T``."""
    R = cb.R
    if R.shape[1] != sw.weights.size:
        raise DimensionMismatch(f"R has {R.shape[1]} columns, got {sw.weights.size} weights")
    return (R * sw.weights) @ R.T


@dataclass(frozen=True)
class SimilarityPair:
    S_v: np.ndarray
    S_v_inv: np.ndarray


def similarity_transform(inc: IncidenceDecomposition, cb: CutBasis, sw: ScaleWeightPair) -> SimilarityPair:
    """Change of basis from node states to (tree-edge states, consensus state)."""
    L_es = scaled_edge_laplacian(inc, sw)
    try:
        L_inv = np.linalg.inv(L_es)
    except np.linalg.LinAlgError as exc:
        raise SingularTreeGram("scaled edge Laplacian is singular") from exc
    n = sw.epsilon.size
    S_v = np.hstack([(inc.D_tau / sw.epsilon[:, None]) @ L_inv, np.ones((n, 1))])
    S_v_inv = np.vstack([inc.D_tau.T, sw.epsilon[None, :] / sw.eps_sum])
    return SimilarityPair(S_v=S_v, S_v_inv=S_v_inv)


@dataclass(frozen=True)
class EdgeSystem:
    """Tree-edge dynamics ``dx/dt = -A x + B w``, output ``z = C x``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    mode: Mode = Mode.SIGMA_HAT

    @property
    def order(self) -> int:
        return self.A.shape[0]


def input_matrix(
    inc: IncidenceDecomposition, cb: CutBasis, sw: ScaleWeightPair, noise: NoiseModel
) -> np.ndarray:
    """``B = [D_tau^T E^-1 Omega,  -L_es R Gamma]``."""
    L_es = scaled_edge_laplacian(inc, sw)
    B_proc = (inc.D_tau / sw.epsilon[:, None]).T @ noise.omega(sw)
    B_meas = -L_es @ cb.R @ noise.gamma(sw)
    return np.hstack([B_proc, B_meas])


def edge_system(
    inc: IncidenceDecomposition,
    cb: CutBasis,
    sw: ScaleWeightPair,
    noise: NoiseModel,
    mode: Mode | str = Mode.SIGMA_HAT,
) -> EdgeSystem:
    mode = Mode(mode)
    with np.errstate(over="ignore", invalid="ignore"):
        A = scaled_edge_laplacian(inc, sw) @ cut_weight_gram(cb, sw)
    if not np.all(np.isfinite(A)):
        raise IllConditioned("edge dynamics overflow; time scales or weights are out of range")
    if np.min(np.linalg.eigvals(A).real) <= 0:
        raise UnstablePair("edge dynamics are not stable; check time scales and weights")
    B = input_matrix(inc, cb, sw, noise)
    C = cb.R.T.copy() if mode is Mode.SIGMA else np.eye(A.shape[0])
    return EdgeSystem(A=A, B=B, C=C, mode=mode)
