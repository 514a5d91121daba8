"""JSON network specification files.

Layout::

    {
      "nodes": [{"id": 1, "epsilon": 0.1}, ...],
      "edges": [{"u": 1, "v": 2, "weight": 1.0}, ...],
      "noise": {"sigma_omega": 1.0, "sigma_v": 1.0,
                "omega": [[...]], "gamma": [[...]]}
    }

``noise`` and its matrices are optional. Rows and columns of ``gamma`` follow
the order of ``edges``; every edge is oriented from its lower to its higher id.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .network import Network
from .operators import NoiseModel


def _reject_constant(token: str):
    raise ParseError(f"non-finite number {token} is not allowed")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number, got {value!r}")
    return float(value)


def _matrix(value, size: int, where: str) -> np.ndarray:
    try:
        mat = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where} must be a numeric matrix") from exc
    if mat.shape != (size, size):
        raise ParseError(f"{where} must be {size}x{size}, got shape {mat.shape}")
    return mat


def parse_spec(data: dict) -> Network:
    """Build a :class:`Network` from a decoded spec document."""
    if not isinstance(data, dict):
        raise ParseError("spec must be a JSON object")
    for key in ("nodes", "edges"):
        if not isinstance(data.get(key), list):
            raise ParseError(f"missing or invalid '{key}' list")

    eps_by_id = {}
    for k, node in enumerate(data["nodes"]):
        if not isinstance(node, dict) or "id" not in node or "epsilon" not in node:
            raise ParseError(f"nodes[{k}] needs 'id' and 'epsilon'")
        nid = node["id"]
        if isinstance(nid, bool) or not isinstance(nid, int):
            raise ParseError(f"nodes[{k}].id must be an integer")
        if nid in eps_by_id:
            raise ParseError(f"duplicate node id {nid}")
        eps = _number(node["epsilon"], f"nodes[{k}].epsilon")
        if eps <= 0:
            raise ValidationError(f"node {nid}: epsilon must be positive, got {eps}")
        eps_by_id[nid] = eps
    n = len(eps_by_id)
    if sorted(eps_by_id) != list(range(1, n + 1)):
        raise ParseError(f"node ids must be contiguous 1..{n}")

    edges, weights = [], []
    for k, edge in enumerate(data["edges"]):
        if not isinstance(edge, dict) or not {"u", "v", "weight"} <= edge.keys():
            raise ParseError(f"edges[{k}] needs 'u', 'v' and 'weight'")
        u, v = edge["u"], edge["v"]
        if any(isinstance(x, bool) or not isinstance(x, int) for x in (u, v)):
            raise ParseError(f"edges[{k}] endpoints must be integers")
        w = _number(edge["weight"], f"edges[{k}].weight")
        if w <= 0:
            raise ValidationError(f"edge ({u}, {v}): weight must be positive, got {w}")
        edges.append((u, v))
        weights.append(w)

    noise_data = data.get("noise") or {}
    if not isinstance(noise_data, dict):
        raise ParseError("'noise' must be an object")
    sigma_omega = _number(noise_data.get("sigma_omega", 1.0), "noise.sigma_omega")
    sigma_v = _number(noise_data.get("sigma_v", 1.0), "noise.sigma_v")
    omega = noise_data.get("omega")
    gamma = noise_data.get("gamma")
    omega = None if omega is None else _matrix(omega, n, "noise.omega")
    gamma = None if gamma is None else _matrix(gamma, len(edges), "noise.gamma")
    noise = NoiseModel(sigma_omega, sigma_v, omega, gamma)

    eps = np.array([eps_by_id[i] for i in range(1, n + 1)])
    return Network.from_lists(n, edges, eps, np.array(weights), noise)


def loads(text: str) -> Network:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_spec(data)


def load(path) -> Network:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def to_spec(net: Network) -> dict:
    """Inverse of :func:`parse_spec`."""
    noise = {"sigma_omega": net.noise.sigma_omega, "sigma_v": net.noise.sigma_v}
    if net.noise.omega_factor is not None:
        noise["omega"] = net.noise.omega_factor.tolist()
    if net.noise.gamma_factor is not None:
        noise["gamma"] = net.noise.gamma_factor.tolist()
    return {
        "nodes": [{"id": i + 1, "epsilon": float(e)} for i, e in enumerate(net.epsilon)],
        "edges": [
            {"u": u, "v": v, "weight": float(w)} for (u, v), w in zip(net.graph.edges, net.weights)
        ],
        "noise": noise,
    }
