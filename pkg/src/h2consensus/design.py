"""Time-scale design.

Both problems are posed in the inverse time scales ``y_i = 1/eps_i``. The
time-scale part of the Sigma-mode H2 term equals ``sum_i deg_i y_i / 2`` for
any spanning tree, so the budgeted problem is a continuous knapsack and the
regularized problem separates per node.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleMu, NonConvergence, ValidationError
from .graph import EdgeOrdering, Graph, IncidenceDecomposition, CutBasis, cut_basis, degrees, incidence, spanning_tree
from .h2 import separated_h2
from .operators import Mode, ScaleWeightPair, scaled_edge_laplacian


class Tag(str, enum.Enum):
    AT_SLOW_BOUND = "AtSlowBound"
    AT_FAST_BOUND = "AtFastBound"
    INTERIOR = "Interior"
    FRACTIONAL = "Fractional"


def _check_box(eps_min: float, eps_max: float) -> None:
    if not (np.isfinite(eps_min) and np.isfinite(eps_max)) or eps_min <= 0 or eps_min >= eps_max:
        raise ValidationError(f"need 0 < eps_min < eps_max, got eps_min={eps_min}, eps_max={eps_max}")


@dataclass(frozen=True)
class P1Config:
    eps_min: float
    eps_max: float
    mu: float

    def __post_init__(self):
        _check_box(self.eps_min, self.eps_max)
        if not np.isfinite(self.mu) or self.mu < 0:
            raise ValidationError(f"mu must be finite and nonnegative, got {self.mu}")

    def mu_max(self, n: int) -> float:
        return n / self.eps_min


@dataclass(frozen=True)
class P2Config:
    h: float
    r: float = 1
    eps_min: float = 1e-2
    eps_max: float = 2.0

    def __post_init__(self):
        _check_box(self.eps_min, self.eps_max)
        if not np.isfinite(self.h) or self.h <= 0:
            raise ValidationError(f"h must be positive, got {self.h}")
        if not np.isfinite(self.r) or self.r < 1:
            raise ValidationError(f"r must be >= 1, got {self.r}")


@dataclass(frozen=True)
class DesignSolution:
    epsilon: np.ndarray
    objective: float
    active_constraints: tuple[Tag, ...]
    iterations: int = 0


def p1_cost_coefficients(g: Graph) -> np.ndarray:
    """Coefficient of ``y_i / 2`` in the objective: the node degree."""
    return degrees(g).astype(float)


def _realize(g: Graph, ordering: EdgeOrdering | None) -> tuple[IncidenceDecomposition, CutBasis]:
    inc = incidence(g, ordering if ordering is not None else spanning_tree(g))
    return inc, cut_basis(inc)


def p1_weight_term(cb: CutBasis, sw: ScaleWeightPair) -> float:
    """``tr(R^T (R W R^T)^-1 R) / 2``: the part of the objective independent of eps."""
    R = cb.R
    M = (R * sw.weights) @ R.T
    return 0.5 * float(np.trace(R.T @ np.linalg.solve(M, R)))


def _tag(y: float, lo: float, hi: float, fractional_tag: Tag) -> Tag:
    tol = 1e-12 * hi
    if abs(y - lo) <= tol:
        return Tag.AT_SLOW_BOUND
    if abs(y - hi) <= tol:
        return Tag.AT_FAST_BOUND
    return fractional_tag


def _check_feasible(n: int, cfg: P1Config) -> None:
    mu_max = cfg.mu_max(n)
    if cfg.mu > mu_max * (1 + 1e-12):
        raise InfeasibleMu(cfg.mu, mu_max)


def p1_solve(
    g: Graph, sw: ScaleWeightPair, cfg: P1Config, ordering: EdgeOrdering | None = None
) -> DesignSolution:
    """Exact minimizer of the budgeted problem by greedy knapsack filling.

    Every node starts slow (``y = 1/eps_max``); nodes are then made fast in
    ascending degree order (ties by node id) until ``sum y = mu``. At most one
    node ends strictly between the bounds.

    ``sw.weights`` must follow ``ordering`` (default: :func:`spanning_tree`);
    ``sw.epsilon`` is ignored.
    """
    n = g.n
    _check_feasible(n, cfg)
    lo, hi = 1.0 / cfg.eps_max, 1.0 / cfg.eps_min
    deg = p1_cost_coefficients(g)
    y = np.full(n, lo)
    need = cfg.mu - n * lo
    for i in sorted(range(n), key=lambda k: (deg[k], k)):
        if need <= 0:
            break
        step = min(hi - lo, need)
        y[i] = lo + step
        need -= step
    # land exactly on the budget despite accumulated rounding
    if cfg.mu > n * lo:
        frac = [i for i in range(n) if lo < y[i] < hi]
        if frac:
            k = frac[0]
            y[k] = min(hi, max(lo, cfg.mu - (y.sum() - y[k])))

    _, cb = _realize(g, ordering)
    objective = p1_weight_term(cb, sw) + 0.5 * float(deg @ y)
    tags = tuple(_tag(v, lo, hi, Tag.FRACTIONAL) for v in y)
    return DesignSolution(epsilon=1.0 / y, objective=objective, active_constraints=tags)


def project_box_budget(z: np.ndarray, lo: float, hi: float, mu: float) -> np.ndarray:
    """Euclidean projection onto ``{lo <= y <= hi, sum(y) >= mu}``."""
    x = np.clip(z, lo, hi)
    if x.sum() >= mu:
        return x
    # sum(clip(z + lam)) is piecewise linear and nondecreasing in lam
    breaks = np.unique(np.concatenate([lo - z, hi - z]))
    breaks = breaks[breaks > 0]
    prev_lam, prev_s = 0.0, float(x.sum())
    for lam in breaks:
        s = float(np.clip(z + lam, lo, hi).sum())
        if s >= mu:
            lam_star = prev_lam + (mu - prev_s) * (lam - prev_lam) / (s - prev_s)
            return np.clip(z + lam_star, lo, hi)
        prev_lam, prev_s = lam, s
    return np.full_like(z, hi)


def p1_objective(inc: IncidenceDecomposition, cb: CutBasis, sw: ScaleWeightPair, epsilon: np.ndarray) -> float:
    """Objective evaluated through the Sigma-mode traces (no degree shortcut)."""
    trial = ScaleWeightPair(epsilon=epsilon, weights=sw.weights)
    term_w, term_e = separated_h2(inc, cb, trial, 1.0, 1.0, Mode.SIGMA)
    return term_w + term_e


def p1_solve_reference(
    g: Graph,
    sw: ScaleWeightPair,
    cfg: P1Config,
    ordering: EdgeOrdering | None = None,
    max_iter: int = 100_000,
    tol: float = 1e-12,
) -> DesignSolution:
    """Projected-gradient solve of the budgeted problem, used as an oracle."""
    n = g.n
    _check_feasible(n, cfg)
    lo, hi = 1.0 / cfg.eps_max, 1.0 / cfg.eps_min
    grad = 0.5 * p1_cost_coefficients(g)
    step = 1.0 / np.max(grad * 2)
    y = project_box_budget(np.full(n, 0.5 * (lo + hi)), lo, hi, cfg.mu)
    for it in range(1, max_iter + 1):
        y_new = project_box_budget(y - step * grad, lo, hi, cfg.mu)
        if np.max(np.abs(y_new - y)) <= tol * hi:
            y = y_new
            break
        y = y_new
    else:
        raise NonConvergence(f"projected gradient did not converge in {max_iter} iterations")

    inc, cb = _realize(g, ordering)
    eps = 1.0 / y
    tags = tuple(_tag(v, lo, hi, Tag.FRACTIONAL) for v in y)
    return DesignSolution(epsilon=eps, objective=p1_objective(inc, cb, sw, eps), active_constraints=tags, iterations=it)


def p2_unclamped(deg, h: float, r: float) -> np.ndarray:
    """Stationary point ``(deg / (h r)) ** (1 / (r + 1))`` of the per-node cost."""
    return (np.asarray(deg, dtype=float) / (h * r)) ** (1.0 / (r + 1.0))


def p2_solve(g: Graph, cfg: P2Config) -> DesignSolution:
    """Closed-form regularized assignment; each node needs only its own degree."""
    deg = degrees(g).astype(float)
    raw = p2_unclamped(deg, cfg.h, cfg.r)
    eps = np.clip(raw, cfg.eps_min, cfg.eps_max)
    tags = []
    for e_raw, e in zip(raw, eps):
        if e_raw >= cfg.eps_max:
            tags.append(Tag.AT_SLOW_BOUND)
        elif e_raw <= cfg.eps_min:
            tags.append(Tag.AT_FAST_BOUND)
        else:
            tags.append(Tag.INTERIOR)
    objective = float(np.sum(0.5 * deg / eps + 0.5 * cfg.h * eps**cfg.r))
    return DesignSolution(epsilon=eps, objective=objective, active_constraints=tuple(tags))


def p2_objective(
    g: Graph, inc: IncidenceDecomposition, cb: CutBasis, epsilon, cfg: P2Config
) -> float:
    """``tr(R^T L_es R)/2 + (h/2) sum eps^r`` computed from the matrices."""
    eps = np.asarray(epsilon, dtype=float)
    if eps.size != g.n or np.any(eps <= 0):
        raise ValidationError("epsilon must hold n positive values")
    sw = ScaleWeightPair(epsilon=eps, weights=np.ones(g.m))
    L_es = scaled_edge_laplacian(inc, sw)
    return 0.5 * float(np.trace(cb.R.T @ L_es @ cb.R)) + 0.5 * cfg.h * float(np.sum(eps**cfg.r))
