"""Monte Carlo estimation of the squared H2 norm.

The squared H2 norm of a stable system driven by unit-intensity white noise is
the stationary mean of ``|z|^2``; it is estimated by time-averaging simulated
outputs after a burn-in period, then averaging across independent trials.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import EmptyInput, UnstableStep, ValidationError
from .graph import CutBasis, IncidenceDecomposition
from .operators import EdgeSystem, Mode, NoiseModel, ScaleWeightPair, scaled_laplacian

CHUNK = 4096


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    horizon: float = 200.0
    burn_in: float = 20.0
    trials: int = 8
    seed: int = 0
    method: str = "euler"  # or "exact": matrix-exponential transition, no dt bias
    stride: int = 0  # keep every stride-th sample of trial 0; 0 disables

    def __post_init__(self):
        if not self.dt > 0 or not self.horizon > 0:
            raise ValidationError("dt and horizon must be positive")
        if not 0 <= self.burn_in < self.horizon:
            raise ValidationError("burn_in must satisfy 0 <= burn_in < horizon")
        if int(self.trials) < 1:
            raise ValidationError("trials must be a positive integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        if self.method not in ("euler", "exact"):
            raise ValidationError(f"unknown method {self.method!r}")
        if int(self.stride) < 0:
            raise ValidationError("stride must be nonnegative")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def burn_steps(self) -> int:
        return int(round(self.burn_in / self.dt))


@dataclass
class SimResult:
    h2_squared_estimate: float
    standard_error: float
    per_trial: list[float]
    trajectory_sample: dict | None = None
    node_trajectory: np.ndarray | None = field(default=None, repr=False)


def estimate_h2(trial_means) -> tuple[float, float]:
    """Mean and standard error of the per-trial estimates."""
    vals = np.asarray(list(trial_means), dtype=float)
    if vals.size == 0:
        raise EmptyInput("no trial means to combine")
    mean = float(vals.mean())
    if vals.size == 1:
        return mean, 0.0
    return mean, float(vals.std(ddof=1) / np.sqrt(vals.size))


def max_stable_dt(F: np.ndarray) -> float:
    """Largest explicit-Euler step keeping ``x <- x - dt F x`` mean-stable."""
    lam = np.linalg.eigvals(F)
    lam = lam[np.abs(lam) > 1e-12]
    if lam.size == 0:
        return np.inf
    # |1 - dt lam| < 1  <=>  dt < 2 Re(lam) / |lam|^2
    return float(np.min(2.0 * lam.real / np.abs(lam) ** 2))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(trial),)))


def _transition(F: np.ndarray, B: np.ndarray, cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """One-step map ``x <- Phi x + G xi`` with standard normal ``xi``."""
    k = F.shape[0]
    if cfg.method == "euler":
        dt_max = max_stable_dt(F)
        if cfg.dt >= dt_max:
            raise UnstableStep(cfg.dt, dt_max)
        return np.eye(k) - cfg.dt * F, np.sqrt(cfg.dt) * B
    # Van Loan with drift -F: expm([[F, BB^T], [0, -F^T]] dt) = [[., M12], [0, Phi^T]]
    big = np.zeros((2 * k, 2 * k))
    big[:k, :k] = F
    big[:k, k:] = B @ B.T
    big[k:, k:] = -F.T
    ex = scipy.linalg.expm(big * cfg.dt)
    phi = ex[k:, k:].T
    qd = phi @ ex[:k, k:]
    w, v = np.linalg.eigh(0.5 * (qd + qd.T))
    return phi, v * np.sqrt(np.clip(w, 0.0, None))


def _run(
    phi: np.ndarray,
    G: np.ndarray,
    readout: np.ndarray,
    cfg: SimConfig,
):
    """Iterate all trials together; return per-trial means of ``|readout x|^2``.

    With a positive stride, the states of trial 0 are sampled as well.
    """
    k, p = G.shape
    trials = int(cfg.trials)
    rngs = [trial_rng(cfg.seed, t) for t in range(trials)]
    x = np.zeros((trials, k))
    phi_t = phi.T
    acc = np.zeros(trials)
    counted = 0
    stride = int(cfg.stride)
    samples: list[tuple[float, np.ndarray]] = []
    total, burn = cfg.steps, cfg.burn_steps
    done = 0
    while done < total:
        c = min(CHUNK, total - done)
        xi = np.stack([rng.standard_normal((c, p)) for rng in rngs])
        u = xi @ G.T
        states = np.empty((trials, c, k))
        for s in range(c):
            x = x @ phi_t + u[:, s]
            states[:, s] = x
        first = max(0, burn - done)  # step index done+s+1 counts when > burn
        if first < c:
            z = states[:, first:] @ readout.T
            acc += np.einsum("tsj,tsj->t", z, z)
            counted += c - first
        if stride:
            for s in range(c):
                step = done + s + 1
                if step % stride == 0:
                    samples.append((step * cfg.dt, states[0, s].copy()))
        done += c
    means = acc / max(counted, 1)
    traj = None
    if stride:
        t = np.array([s[0] for s in samples])
        xs = np.array([s[1] for s in samples]).reshape(len(samples), k)
        traj = (t, xs)
    return means, traj


def simulate_edge_system(sys: EdgeSystem, cfg: SimConfig | None = None) -> SimResult:
    """Simulate the tree-edge system from ``x = 0``; estimate ``E|C x|^2``."""
    cfg = cfg or SimConfig()
    phi, G = _transition(sys.A, sys.B, cfg)
    means, traj = _run(phi, G, sys.C, cfg)
    est, se = estimate_h2(means)
    sample = None
    if traj is not None:
        t, x_tau = traj
        sample = {"t": t, "x_tau": x_tau, "z": x_tau @ sys.C.T}
    return SimResult(est, se, means.tolist(), sample)


def node_input_matrix(inc: IncidenceDecomposition, sw: ScaleWeightPair, noise: NoiseModel) -> np.ndarray:
    """``[E^-1 Omega,  -E^-1 D Gamma]`` of the node-level model."""
    inv_e = 1.0 / sw.epsilon[:, None]
    return np.hstack([inv_e * noise.omega(sw), -(inv_e * inc.D) @ noise.gamma(sw)])


def simulate_node_system(
    inc: IncidenceDecomposition,
    cb: CutBasis,
    sw: ScaleWeightPair,
    noise: NoiseModel,
    cfg: SimConfig | None = None,
    mode: Mode | str = Mode.SIGMA_HAT,
) -> SimResult:
    """Simulate node states; outputs are formed from ``x_tau = D_tau^T x``.

    The consensus component drifts freely and never enters the output.
    """
    cfg = cfg or SimConfig()
    mode = Mode(mode)
    F = scaled_laplacian(inc, sw)
    B = node_input_matrix(inc, sw, noise)
    C_edge = cb.R.T if mode is Mode.SIGMA else np.eye(cb.R.shape[0])
    readout = C_edge @ inc.D_tau.T
    phi, G = _transition(F, B, cfg)
    means, traj = _run(phi, G, readout, cfg)
    est, se = estimate_h2(means)
    sample = None
    nodes = None
    if traj is not None:
        t, x = traj
        nodes = x
        x_tau = x @ inc.D_tau
        sample = {"t": t, "x_tau": x_tau, "z": x_tau @ C_edge.T, "x_c": x @ inc.D_c}
    return SimResult(est, se, means.tolist(), sample, nodes)


def write_trajectory_csv(result: SimResult, path) -> None:
    """Write ``t,x_tau_1,...,z_1,...`` rows from a recorded trajectory."""
    sample = result.trajectory_sample
    if sample is None:
        raise ValidationError("no trajectory recorded; set a positive stride")
    t, x_tau, z = sample["t"], sample["x_tau"], sample["z"]
    header = ["t"] + [f"x_tau_{i + 1}" for i in range(x_tau.shape[1])] + [f"z_{i + 1}" for i in range(z.shape[1])]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(t.size):
            writer.writerow([repr(float(t[k]))] + [repr(float(v)) for v in x_tau[k]] + [repr(float(v)) for v in z[k]])
