"""Eigenvalue brackets on the squared H2 norm for arbitrary noise covariances."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, RankDeficientZ
from .graph import CutBasis, IncidenceDecomposition
from .h2 import h2_norm_squared, solve_lyapunov
from .operators import Mode, NoiseModel, ScaleWeightPair, edge_system, scaled_edge_laplacian


def _sym_eigvals(M: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (M + M.T))


def observability_gramian(sys) -> np.ndarray:
    """``P`` with ``A^T P + P A = C^T C`` (the system matrix is ``-A``)."""
    P = solve_lyapunov(sys.A.T, sys.C.T @ sys.C)
    if P.size and _sym_eigvals(P)[0] <= 0:
        raise NumericError("observability gramian is not positive definite")
    return P


@dataclass(frozen=True)
class BoundReport:
    lower: float
    value: float
    upper: float
    components: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lower - 1e-9 <= self.value <= self.upper + 1e-9

    def as_dict(self) -> dict:
        return {"lower": self.lower, "value": self.value, "upper": self.upper, "components": dict(self.components)}


def gramian_trace_bounds(sys) -> BoundReport:
    """``lam_min(BB^T) tr(P) <= tr(B^T P B) <= lam_max(BB^T) tr(P)``."""
    P = observability_gramian(sys)
    BBt = sys.B @ sys.B.T
    lam = _sym_eigvals(BBt)
    tr_p = float(np.trace(P))
    value = float(np.trace(sys.B.T @ P @ sys.B))
    return BoundReport(
        lower=float(lam[0]) * tr_p,
        value=value,
        upper=float(lam[-1]) * tr_p,
        components={"lambda_min_BBt": float(lam[0]), "lambda_max_BBt": float(lam[-1]), "trace_P_O": tr_p},
    )


@dataclass(frozen=True)
class RayleighBounds:
    lower: float
    upper: float
    lambda_min: float
    lambda_max: float


def rayleigh_product_bounds(M: np.ndarray, Z: np.ndarray) -> RayleighBounds:
    """Bracket the extreme eigenvalues of ``Z^T M Z`` by those of ``M`` and ``Z^T Z``.

    ``Z`` must have a trivial null space.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[0] < Z.shape[1] or np.linalg.svd(Z, compute_uv=False)[-1] <= 1e-10:
        raise RankDeficientZ("Z has a nontrivial null space")
    lam_m = _sym_eigvals(M)
    lam_z = _sym_eigvals(Z.T @ Z)
    lam = _sym_eigvals(Z.T @ M @ Z)
    return RayleighBounds(
        lower=float(lam_m[0] * lam_z[0]),
        upper=float(lam_m[-1] * lam_z[-1]),
        lambda_min=float(lam[0]),
        lambda_max=float(lam[-1]),
    )


def covariance_h2_bounds(
    inc: IncidenceDecomposition,
    cb: CutBasis,
    sw: ScaleWeightPair,
    omega: np.ndarray,
    gamma: np.ndarray,
    mode: Mode | str = Mode.SIGMA_HAT,
) -> BoundReport:
    """Bracket the squared H2 norm using only covariance eigenvalue extremes.

    The Gram matrices of the process and measurement input maps are taken in
    the ``(n-1) x (n-1)`` form ``Z^T Z`` with ``Z = E^-1 D_tau`` and
    ``Z = R^T L_es`` respectively.
    """
    noise = NoiseModel(omega_factor=omega, gamma_factor=gamma)
    sys = edge_system(inc, cb, sw, noise, mode)
    P = observability_gramian(sys)
    tr_p = float(np.trace(P))

    Z_tau = inc.D_tau / sw.epsilon[:, None]
    Z_c = cb.R.T @ scaled_edge_laplacian(inc, sw)
    Q = noise.omega(sw) @ noise.omega(sw).T
    G = noise.gamma(sw) @ noise.gamma(sw).T
    lq, lg = _sym_eigvals(Q), _sym_eigvals(G)
    lt, lc = _sym_eigvals(Z_tau.T @ Z_tau), _sym_eigvals(Z_c.T @ Z_c)
    lb = _sym_eigvals(sys.B @ sys.B.T)

    lower = (lq[0] * lt[0] + lg[0] * lc[0]) * tr_p
    upper = (lq[-1] * lt[-1] + lg[-1] * lc[-1]) * tr_p
    components = {
        "lambda_min_omega_cov": float(lq[0]),
        "lambda_max_omega_cov": float(lq[-1]),
        "lambda_min_gamma_cov": float(lg[0]),
        "lambda_max_gamma_cov": float(lg[-1]),
        "lambda_min_tree_gram": float(lt[0]),
        "lambda_max_tree_gram": float(lt[-1]),
        "lambda_min_cycle_gram": float(lc[0]),
        "lambda_max_cycle_gram": float(lc[-1]),
        "lambda_min_BBt": float(lb[0]),
        "lambda_max_BBt": float(lb[-1]),
        "trace_P_O": tr_p,
    }
    return BoundReport(lower=float(lower), value=h2_norm_squared(sys), upper=float(upper), components=components)


def weyl_terms(
    inc: IncidenceDecomposition, cb: CutBasis, sw: ScaleWeightPair, omega: np.ndarray, gamma: np.ndarray
) -> dict:
    """Extreme eigenvalues of the two Hermitian parts of ``B B^T`` and of the sum."""
    Z_tau = inc.D_tau / sw.epsilon[:, None]
    Z_c = cb.R.T @ scaled_edge_laplacian(inc, sw)
    part_tau = Z_tau.T @ omega @ omega.T @ Z_tau
    part_c = Z_c.T @ gamma @ gamma.T @ Z_c
    l1, l2, ls = _sym_eigvals(part_tau), _sym_eigvals(part_c), _sym_eigvals(part_tau + part_c)
    return {
        "min_sum_of_parts": float(l1[0] + l2[0]),
        "min_of_sum": float(ls[0]),
        "max_sum_of_parts": float(l1[-1] + l2[-1]),
        "max_of_sum": float(ls[-1]),
    }
