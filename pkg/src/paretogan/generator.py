"""Generator variants: noise prior -> ReLU network -> per-dimension output
transform.

Four variants are supported:

* ``uniform``   -- uniform(0, 1] noise, identity output (bounded support)
* ``normal``    -- standard normal noise, identity output
* ``lognormal`` -- standard normal noise, output ``exp(f(z) - 1)``
* ``pareto``    -- unit-scale GPD(xi=1) noise, output ``sign(f)|f|**beta``
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Tuple

import numpy as np

from .gpd import sample_gpd
from .metrics import MetricSpec
from .net import NetParams, NetSpec, net_backward, net_forward_cached, lipschitz_bound
from ._rng import uniform_open_closed

log = logging.getLogger(__name__)

EXP_CAP = 700.0
JACOBIAN_FLOOR = 1e-6
VARIANTS = ("uniform", "normal", "lognormal", "pareto")


@dataclass(frozen=True)
class NoiseSpec:
    kind: Literal["uniform01", "standard_normal", "gpd"]
    dim: int
    xi: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform01", "standard_normal", "gpd"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("noise dim must be >= 1")
        if not np.isfinite(self.xi):
            raise ValueError("gpd xi must be finite")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "dim": self.dim}
        if self.kind == "gpd":
            d["xi"] = self.xi
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        return cls(d["kind"], int(d["dim"]), float(d.get("xi", 1.0)))


@dataclass(frozen=True)
class DimTransform:
    kind: Literal["identity", "exp_shift", "signed_power"] = "identity"
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("identity", "exp_shift", "signed_power"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == "signed_power" and not self.beta > 0:
            raise ValueError("signed_power needs beta > 0")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "beta": self.beta} if self.kind == "signed_power" \
            else {"kind": self.kind}


@dataclass(frozen=True)
class GeneratorSpec:
    noise: NoiseSpec
    net: NetSpec
    transform: Tuple[DimTransform, ...]
    loss_metric: MetricSpec = field(default_factory=MetricSpec)
    loss_space: Literal["data", "log"] = "data"
    variant: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "transform", tuple(self.transform))
        if self.net.input_dim != self.noise.dim:
            raise ValueError("net input_dim must equal noise dim")
        if len(self.transform) != self.net.output_dim:
            raise ValueError("one output transform per output dimension is required")
        if self.loss_space not in ("data", "log"):
            raise ValueError(f"unknown loss space {self.loss_space!r}")
        if self.loss_space == "log" and any(t.kind != "exp_shift" for t in self.transform):
            raise ValueError("log loss space requires exp_shift outputs")

    def to_dict(self) -> dict:
        return {"variant": self.variant, "noise": self.noise.to_dict(), "net": self.net.to_dict(),
                "transform": [t.to_dict() for t in self.transform],
                "loss_metric": self.loss_metric.to_dict(), "loss_space": self.loss_space}

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(NoiseSpec.from_dict(d["noise"]), NetSpec.from_dict(d["net"]),
                   tuple(DimTransform(t["kind"], float(t.get("beta", 1.0))) for t in d["transform"]),
                   MetricSpec.from_dict(d["loss_metric"]), d.get("loss_space", "data"),
                   d.get("variant", "custom"))


def signed_power(x, beta: float):
    """sign(x) * |x|**beta, elementwise; ``beta`` may be an array."""
    x = np.asarray(x, dtype=float)
    out = np.sign(x) * np.power(np.abs(x), beta)
    return out[()] if out.ndim == 0 else out


def sample_noise(spec: NoiseSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.kind == "uniform01":
        return uniform_open_closed(rng, (n, spec.dim))
    if spec.kind == "standard_normal":
        return rng.standard_normal((n, spec.dim))
    cols = [sample_gpd(n, spec.xi, rng)[:, 0] for _ in range(spec.dim)]
    return np.stack(cols, axis=1)


def apply_transform(transform: Sequence[DimTransform], raw: np.ndarray):
    """Map raw network outputs through the per-dimension transforms.

    Returns ``(x, n_capped)`` where ``n_capped`` counts exp arguments clipped
    at 700 to avoid overflow.
    """
    x = np.array(raw, dtype=float, copy=True)
    capped = 0
    for k, t in enumerate(transform):
        if t.kind == "exp_shift":
            arg = raw[:, k] - 1.0
            over = arg > EXP_CAP
            capped += int(np.count_nonzero(over))
            x[:, k] = np.exp(np.minimum(arg, EXP_CAP))
        elif t.kind == "signed_power" and t.beta != 1.0:
            x[:, k] = signed_power(raw[:, k], t.beta)
    if capped:
        log.debug("exp cap fired on %d entries", capped)
    return x, capped


def loss_space_view(gspec: GeneratorSpec, raw: np.ndarray) -> np.ndarray:
    """Generated samples as seen by the loss: log space is ``f(z) - 1``."""
    if gspec.loss_space == "log":
        return raw - 1.0
    return apply_transform(gspec.transform, raw)[0]


def generate_from_noise(gspec: GeneratorSpec, params: NetParams, z) -> np.ndarray:
    raw, _ = net_forward_cached(params, z)
    return apply_transform(gspec.transform, raw)[0]


def generate(gspec: GeneratorSpec, params: NetParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` generated rows: noise -> network -> output transform."""
    if [w.shape for w in params.weights] != [
            (o, i) for i, o in zip(gspec.net.layer_sizes[:-1], gspec.net.layer_sizes[1:])]:
        raise ValueError("params do not match the generator's network spec")
    return generate_from_noise(gspec, params, sample_noise(gspec.noise, n, rng))


def transform_jacobian(gspec: GeneratorSpec, raw: np.ndarray) -> np.ndarray:
    """Diagonal Jacobian of the loss-space output with respect to raw outputs."""
    jac = np.ones_like(raw)
    if gspec.loss_space == "log":
        return jac
    for k, t in enumerate(gspec.transform):
        if t.kind == "exp_shift":
            jac[:, k] = np.exp(np.minimum(raw[:, k] - 1.0, EXP_CAP))
        elif t.kind == "signed_power" and t.beta != 1.0:
            a = np.maximum(np.abs(raw[:, k]), JACOBIAN_FLOOR)
            jac[:, k] = t.beta * np.power(a, t.beta - 1.0)
    return jac


def generate_grad_chain(gspec: GeneratorSpec, params: NetParams, noise_batch, loss_grads,
                        cache=None, raw=None) -> NetParams:
    """Backpropagate loss gradients (taken in the loss space) to parameters."""
    loss_grads = np.asarray(loss_grads, dtype=float)
    if raw is None or cache is None:
        raw, cache = net_forward_cached(params, noise_batch)
    if loss_grads.shape != raw.shape:
        raise ValueError(f"loss gradient shape {loss_grads.shape} != output shape {raw.shape}")
    return net_backward(params, noise_batch, loss_grads * transform_jacobian(gspec, raw), cache)


def build_pareto_generator(xi_hats: Sequence[float], net_shape: NetSpec,
                           gamma: Optional[float] = None) -> GeneratorSpec:
    """Pareto generator with GPD(1) noise and per-dimension output power xi_hat.

    The loss uses the root metric with gamma = max(xi_hats) + 1 unless
    ``gamma`` overrides it (gamma=2 for univariate data, gamma=1 for plain
    energy distance).
    """
    xi_hats = [float(x) for x in xi_hats]
    if not xi_hats:
        raise ValueError("xi_hats must be non-empty")
    if any(not (0.05 <= x <= 10.0) for x in xi_hats):
        raise ValueError("tail estimates must lie in [0.05, 10]")
    if len(xi_hats) != net_shape.output_dim:
        raise ValueError("one tail estimate per output dimension is required")
    if gamma is None:
        gamma = max(xi_hats) + 1.0
    metric = MetricSpec.root(gamma) if gamma != 1.0 else MetricSpec()
    return GeneratorSpec(NoiseSpec("gpd", net_shape.input_dim, 1.0), net_shape,
                         tuple(DimTransform("signed_power", b) for b in xi_hats),
                         metric, "data", "pareto")


def build_generator(variant: str, net_shape: NetSpec, xi_hats: Optional[Sequence[float]] = None,
                    gamma: Optional[float] = None, positive_data: bool = True) -> GeneratorSpec:
    """GeneratorSpec for one of the four named variants.

    The lognormal variant computes its loss in log space when the data are
    strictly positive and falls back to data space otherwise.
    """
    d = net_shape.output_dim
    noise_dim = net_shape.input_dim
    if variant == "pareto":
        if xi_hats is None:
            raise ValueError("pareto variant needs tail estimates")
        return build_pareto_generator(xi_hats, net_shape, gamma)
    if variant == "uniform":
        return GeneratorSpec(NoiseSpec("uniform01", noise_dim), net_shape,
                             (DimTransform(),) * d, MetricSpec(), "data", "uniform")
    if variant == "normal":
        return GeneratorSpec(NoiseSpec("standard_normal", noise_dim), net_shape,
                             (DimTransform(),) * d, MetricSpec(), "data", "normal")
    if variant == "lognormal":
        return GeneratorSpec(NoiseSpec("standard_normal", noise_dim), net_shape,
                             (DimTransform("exp_shift"),) * d, MetricSpec(),
                             "log" if positive_data else "data", "lognormal")
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def uniform_output_bound(params: NetParams) -> float:
    """Radius of a ball around the origin containing f(z) for all z in [0, 1]^dim."""
    f0, _ = net_forward_cached(params, np.zeros((1, params.weights[0].shape[1])))
    dim = params.weights[0].shape[1]
    return float(np.linalg.norm(f0) + lipschitz_bound(params) * np.sqrt(dim))
