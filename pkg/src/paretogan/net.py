"""Fully connected ReLU network with exact backpropagation and Adam.

Hidden layers use ReLU, the output layer is linear, so the network is a
piecewise linear map. Saturating activations are deliberately unsupported.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

ACTIVATION = "relu"


@dataclass(frozen=True)
class NetSpec:
    input_dim: int
    hidden_widths: tuple
    output_dim: int
    activation: str = ACTIVATION

    def __post_init__(self):
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if self.activation != ACTIVATION:
            raise ValueError(
                f"only piecewise linear ReLU hidden layers are supported, got {self.activation!r}")
        if len(self.hidden_widths) < 1:
            raise ValueError("at least one hidden layer is required")
        if min(self.input_dim, self.output_dim, *self.hidden_widths) < 1:
            raise ValueError("all layer sizes must be >= 1")

    @property
    def layer_sizes(self) -> List[int]:
        return [self.input_dim, *self.hidden_widths, self.output_dim]

    def to_dict(self) -> dict:
        return {"input_dim": self.input_dim, "hidden_widths": list(self.hidden_widths),
                "output_dim": self.output_dim, "activation": self.activation}

    @classmethod
    def from_dict(cls, d: dict) -> "NetSpec":
        return cls(d["input_dim"], tuple(d["hidden_widths"]), d["output_dim"],
                   d.get("activation", ACTIVATION))


@dataclass
class NetParams:
    """Layer weights ``W[l]`` of shape (out, in) and biases ``b[l]`` of shape (out,)."""
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def arrays(self) -> List[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def copy(self) -> "NetParams":
        return NetParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def zeros_like(self) -> "NetParams":
        return NetParams([np.zeros_like(w) for w in self.weights],
                         [np.zeros_like(b) for b in self.biases])

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def spectral_norms(self) -> np.ndarray:
        return np.array([np.linalg.norm(w, 2) for w in self.weights])

    def to_lists(self) -> dict:
        return {"weights": [w.ravel().tolist() for w in self.weights],
                "biases": [b.tolist() for b in self.biases]}

    @classmethod
    def from_lists(cls, spec: NetSpec, d: dict) -> "NetParams":
        sizes = spec.layer_sizes
        ws = [np.asarray(w, dtype=float).reshape(sizes[i + 1], sizes[i])
              for i, w in enumerate(d["weights"])]
        bs = [np.asarray(b, dtype=float).reshape(sizes[i + 1]) for i, b in enumerate(d["biases"])]
        return cls(ws, bs)


def net_init(spec: NetSpec, rng: np.random.Generator) -> NetParams:
    """Uniform(-sqrt(6/fan_in), sqrt(6/fan_in)) weights, zero biases."""
    sizes = spec.layer_sizes
    ws, bs = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / fan_in)
        ws.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        bs.append(np.zeros(fan_out))
    return NetParams(ws, bs)


def _check_input(params: NetParams, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[1] != params.weights[0].shape[1]:
        raise ValueError(
            f"input of shape {z.shape} does not match input_dim {params.weights[0].shape[1]}")
    return z


def net_forward_cached(params: NetParams, z):
    """Forward pass returning the output and the per-layer pre-activations."""
    z = _check_input(params, z)
    h = z
    pre = []
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        a = h @ w.T + b
        if i == last:
            return a, pre
        pre.append(a)
        h = np.maximum(a, 0.0)
    raise AssertionError("unreachable")


def net_forward(params: NetParams, z) -> np.ndarray:
    return net_forward_cached(params, z)[0]


def net_backward(params: NetParams, z, upstream, cache: Optional[list] = None) -> NetParams:
    """Gradients of sum_i <upstream_i, f(z_i)> with respect to all parameters.

    ``cache`` is the pre-activation list from :func:`net_forward_cached`; it
    is recomputed when omitted. ReLU'(0) is taken as 0.
    """
    z = _check_input(params, z)
    upstream = np.asarray(upstream, dtype=float)
    out_dim = params.weights[-1].shape[0]
    if upstream.shape != (z.shape[0], out_dim):
        raise ValueError(f"upstream shape {upstream.shape} != {(z.shape[0], out_dim)}")
    if cache is None:
        cache = net_forward_cached(params, z)[1]
    acts = [z] + [np.maximum(a, 0.0) for a in cache]
    gw = [None] * len(params.weights)
    gb = [None] * len(params.weights)
    delta = upstream
    for i in range(len(params.weights) - 1, -1, -1):
        gw[i] = delta.T @ acts[i]
        gb[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i]) * (cache[i - 1] > 0)
    return NetParams(gw, gb)


def activation_pattern(params: NetParams, z) -> List[np.ndarray]:
    """Boolean ReLU on/off pattern per hidden layer for each input row."""
    return [a > 0 for a in net_forward_cached(params, z)[1]]


@dataclass
class AdamState:
    m: NetParams
    v: NetParams
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, params: NetParams, **hyper) -> "AdamState":
        return cls(params.zeros_like(), params.zeros_like(), 0, **hyper)

    def to_dict(self) -> dict:
        return {"m": self.m.to_lists(), "v": self.v.to_lists(), "step": self.step,
                "beta1": self.beta1, "beta2": self.beta2, "eps": self.eps}

    @classmethod
    def from_dict(cls, spec: NetSpec, d: dict) -> "AdamState":
        return cls(NetParams.from_lists(spec, d["m"]), NetParams.from_lists(spec, d["v"]),
                   int(d["step"]), d["beta1"], d["beta2"], d["eps"])


def _adam_update(p, g, m, v, lr, st: AdamState, t: int):
    m = st.beta1 * m + (1 - st.beta1) * g
    v = st.beta2 * v + (1 - st.beta2) * g * g
    mhat = m / (1 - st.beta1 ** t)
    vhat = v / (1 - st.beta2 ** t)
    return p - lr * mhat / (np.sqrt(vhat) + st.eps), m, v


def adam_step(params: NetParams, grads: NetParams, state: AdamState, lr: float):
    """One bias-corrected Adam update; returns new (params, state)."""
    if not lr > 0:
        raise ValueError("learning rate must be positive")
    t = state.step + 1
    new_p, new_m, new_v = params.zeros_like(), params.zeros_like(), params.zeros_like()
    for attr in ("weights", "biases"):
        for i, (p, g, m, v) in enumerate(zip(getattr(params, attr), getattr(grads, attr),
                                             getattr(state.m, attr), getattr(state.v, attr))):
            if p.shape != g.shape:
                raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
            p2, m2, v2 = _adam_update(p, g, m, v, lr, state, t)
            getattr(new_p, attr)[i] = p2
            getattr(new_m, attr)[i] = m2
            getattr(new_v, attr)[i] = v2
    return new_p, AdamState(new_m, new_v, t, state.beta1, state.beta2, state.eps)


def lipschitz_bound(params: NetParams) -> float:
    """Product of layer spectral norms; ReLU is 1-Lipschitz."""
    return float(np.prod(params.spectral_norms()))
