"""
Layer Specifications

Each layer kind is a pydantic model holding its hyperparameters and
implementing batched forward, backward (vector-Jacobian) and tangent
(Jacobian-vector) passes with numpy. Tensors carry a leading batch axis.
"""

from typing import Annotated, Any, Dict, Literal, Optional, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, Field

Shape = Tuple[int, ...]
Params = Dict[str, np.ndarray]
Cache = Dict[str, Any]


def _uniform(
    rng: np.random.Generator, shape: Shape, fan_in: int, gain: float = 1.0
) -> np.ndarray:
    bound = gain / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def _init_affine(
    rng: np.random.Generator, shapes: Dict[str, Shape], fan_in: int, gain: float
) -> Params:
    """Uniform fan-in init; the gain scales weights only."""
    return {
        name: _uniform(rng, shape, fan_in, gain if name == "weight" else 1.0)
        for name, shape in shapes.items()
    }


def _pad(x: np.ndarray, padding: int) -> np.ndarray:
    if padding == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))


def _crop(x: np.ndarray, padding: int) -> np.ndarray:
    if padding == 0:
        return x
    return x[:, :, padding:-padding, padding:-padding]


def _windows(x: np.ndarray, kernel_size: int, stride: int) -> np.ndarray:
    """Strided k x k patches of a (N, C, H, W) array as (N, C, Ho, Wo, k, k)."""
    patches = sliding_window_view(x, (kernel_size, kernel_size), axis=(2, 3))
    return patches[:, :, ::stride, ::stride]


def _correlate(x: np.ndarray, weight: np.ndarray, stride: int) -> np.ndarray:
    """Valid cross-correlation of padded input with (O, C, k, k) weights."""
    patches = _windows(x, weight.shape[-1], stride)
    out = np.tensordot(patches, weight, axes=([1, 4, 5], [1, 2, 3]))
    return out.transpose(0, 3, 1, 2)


def _scatter(x: np.ndarray, weight: np.ndarray, stride: int) -> np.ndarray:
    """Adjoint of _correlate: spread (N, C, H, W) input through (C, O, k, k) weights."""
    n, _, h, w = x.shape
    k = weight.shape[-1]
    out = np.zeros((n, weight.shape[1], (h - 1) * stride + k, (w - 1) * stride + k))
    for i in range(k):
        for j in range(k):
            out[:, :, i : i + stride * h : stride, j : j + stride * w : stride] += np.einsum(
                "nchw,co->nohw", x, weight[:, :, i, j]
            )
    return out


class _Layer(BaseModel):
    """Common behavior of parameter-free layers."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    def output_shape(self, input_shape: Shape) -> Shape:
        return tuple(input_shape)

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        return {}

    def init_params(self, input_shape: Shape, rng: np.random.Generator) -> Params:
        return {}

    def forward(
        self,
        params: Params,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, Cache]:
        raise NotImplementedError

    def backward(
        self, params: Params, cache: Cache, dy: np.ndarray, need_param_grads: bool = True
    ) -> Tuple[Params, np.ndarray]:
        raise NotImplementedError

    def tangent(self, params: Params, cache: Cache, dx: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class FullyConnected(_Layer):
    """Affine map y = W x + b on flat feature vectors."""

    kind: Literal["fully_connected"] = "fully_connected"
    in_features: int = Field(..., ge=1)
    out_features: int = Field(..., ge=1)
    init_gain: float = Field(1.0, gt=0, description="Multiplier on the weight init bound")

    def output_shape(self, input_shape: Shape) -> Shape:
        if tuple(input_shape) != (self.in_features,):
            raise ValueError(f"expected ({self.in_features},)")
        return (self.out_features,)

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        return {"weight": (self.out_features, self.in_features), "bias": (self.out_features,)}

    def init_params(self, input_shape: Shape, rng: np.random.Generator) -> Params:
        return _init_affine(rng, self.param_shapes(input_shape), self.in_features, self.init_gain)

    def forward(self, params, x, train=False, rng=None):
        return x @ params["weight"].T + params["bias"], {"x": x}

    def backward(self, params, cache, dy, need_param_grads=True):
        grads = {}
        if need_param_grads:
            grads = {"weight": dy.T @ cache["x"], "bias": dy.sum(axis=0)}
        return grads, dy @ params["weight"]

    def tangent(self, params, cache, dx):
        return dx @ params["weight"].T


class Convolution(_Layer):
    """2-D cross-correlation over (C, H, W) feature maps."""

    kind: Literal["convolution"] = "convolution"
    in_channels: int = Field(..., ge=1)
    out_channels: int = Field(..., ge=1)
    kernel_size: int = Field(..., ge=1)
    stride: int = Field(1, ge=1)
    padding: int = Field(0, ge=0)
    init_gain: float = Field(1.0, gt=0, description="Multiplier on the weight init bound")

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3 or input_shape[0] != self.in_channels:
            raise ValueError(f"expected ({self.in_channels}, H, W)")
        _, h, w = input_shape
        span = self.kernel_size - 2 * self.padding
        if h < span or w < span:
            raise ValueError("input smaller than the kernel")
        return (
            self.out_channels,
            (h + 2 * self.padding - self.kernel_size) // self.stride + 1,
            (w + 2 * self.padding - self.kernel_size) // self.stride + 1,
        )

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        k = self.kernel_size
        return {
            "weight": (self.out_channels, self.in_channels, k, k),
            "bias": (self.out_channels,),
        }

    def init_params(self, input_shape: Shape, rng: np.random.Generator) -> Params:
        fan_in = self.in_channels * self.kernel_size**2
        return _init_affine(rng, self.param_shapes(input_shape), fan_in, self.init_gain)

    def forward(self, params, x, train=False, rng=None):
        xp = _pad(x, self.padding)
        y = _correlate(xp, params["weight"], self.stride)
        return y + params["bias"][None, :, None, None], {"xp": xp, "input_shape": x.shape}

    def backward(self, params, cache, dy, need_param_grads=True):
        weight = params["weight"]
        xp = cache["xp"]
        grads = {}
        if need_param_grads:
            patches = _windows(xp, self.kernel_size, self.stride)
            grads = {
                "weight": np.tensordot(dy, patches, axes=([0, 2, 3], [0, 2, 3])),
                "bias": dy.sum(axis=(0, 2, 3)),
            }

        # Scatter back into the padded frame, then drop the border
        dxp = np.zeros_like(xp)
        ho, wo = dy.shape[2:]
        s = self.stride
        for i in range(self.kernel_size):
            for j in range(self.kernel_size):
                dxp[:, :, i : i + s * ho : s, j : j + s * wo : s] += np.einsum(
                    "nohw,oc->nchw", dy, weight[:, :, i, j]
                )
        return grads, _crop(dxp, self.padding)

    def tangent(self, params, cache, dx):
        return _correlate(_pad(dx, self.padding), params["weight"], self.stride)


class TransposedConvolution(_Layer):
    """Transposed 2-D convolution; weights are (in_channels, out_channels, k, k)."""

    kind: Literal["transposed_convolution"] = "transposed_convolution"
    in_channels: int = Field(..., ge=1)
    out_channels: int = Field(..., ge=1)
    kernel_size: int = Field(..., ge=1)
    stride: int = Field(1, ge=1)
    padding: int = Field(0, ge=0)
    init_gain: float = Field(1.0, gt=0, description="Multiplier on the weight init bound")

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3 or input_shape[0] != self.in_channels:
            raise ValueError(f"expected ({self.in_channels}, H, W)")
        _, h, w = input_shape
        out_h = (h - 1) * self.stride - 2 * self.padding + self.kernel_size
        out_w = (w - 1) * self.stride - 2 * self.padding + self.kernel_size
        if out_h < 1 or out_w < 1:
            raise ValueError("padding removes the whole output")
        return (self.out_channels, out_h, out_w)

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        k = self.kernel_size
        return {
            "weight": (self.in_channels, self.out_channels, k, k),
            "bias": (self.out_channels,),
        }

    def init_params(self, input_shape: Shape, rng: np.random.Generator) -> Params:
        fan_in = self.out_channels * self.kernel_size**2
        return _init_affine(rng, self.param_shapes(input_shape), fan_in, self.init_gain)

    def forward(self, params, x, train=False, rng=None):
        y = _crop(_scatter(x, params["weight"], self.stride), self.padding)
        return y + params["bias"][None, :, None, None], {"x": x}

    def backward(self, params, cache, dy, need_param_grads=True):
        x = cache["x"]
        dy_full = _pad(dy, self.padding)
        patches = _windows(dy_full, self.kernel_size, self.stride)
        grads = {}
        if need_param_grads:
            grads = {
                "weight": np.tensordot(x, patches, axes=([0, 2, 3], [0, 2, 3])),
                "bias": dy.sum(axis=(0, 2, 3)),
            }
        dx = np.tensordot(patches, params["weight"], axes=([1, 4, 5], [1, 2, 3]))
        return grads, dx.transpose(0, 3, 1, 2)

    def tangent(self, params, cache, dx):
        return _crop(_scatter(dx, params["weight"], self.stride), self.padding)


class Dropout(_Layer):
    """Inverted dropout; identity in eval mode."""

    kind: Literal["dropout"] = "dropout"
    rate: float = Field(0.1, ge=0.0, lt=1.0)

    def forward(self, params, x, train=False, rng=None):
        if not train or self.rate == 0.0:
            return x, {"mask": None}
        if rng is None:
            raise ValueError("dropout in train mode needs a random generator")
        mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * mask, {"mask": mask}

    def backward(self, params, cache, dy, need_param_grads=True):
        mask = cache["mask"]
        return {}, dy if mask is None else dy * mask

    def tangent(self, params, cache, dx):
        mask = cache["mask"]
        return dx if mask is None else dx * mask


ActivationName = Literal["relu", "sigmoid", "softplus", "tanh", "identity"]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class Activation(_Layer):
    """Elementwise nonlinearity."""

    kind: Literal["activation"] = "activation"
    name: ActivationName = "relu"

    def _apply(self, x: np.ndarray) -> np.ndarray:
        if self.name == "relu":
            return np.maximum(x, 0.0)
        if self.name == "sigmoid":
            return _sigmoid(x)
        if self.name == "softplus":
            return np.logaddexp(0.0, x)
        if self.name == "tanh":
            return np.tanh(x)
        return x

    def _derivative(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.name == "relu":
            return (x > 0.0).astype(x.dtype)
        if self.name == "sigmoid":
            return y * (1.0 - y)
        if self.name == "softplus":
            return _sigmoid(x)
        if self.name == "tanh":
            return 1.0 - y * y
        return np.ones_like(x)

    def forward(self, params, x, train=False, rng=None):
        y = self._apply(x)
        return y, {"slope": self._derivative(x, y)}

    def backward(self, params, cache, dy, need_param_grads=True):
        return {}, dy * cache["slope"]

    def tangent(self, params, cache, dx):
        return dx * cache["slope"]


class Reshape(_Layer):
    """Reinterpret the per-sample shape; (-1,) flattens."""

    kind: Literal["reshape"] = "reshape"
    shape: Tuple[int, ...]

    def output_shape(self, input_shape: Shape) -> Shape:
        size = int(np.prod(input_shape))
        if self.shape == (-1,):
            return (size,)
        if int(np.prod(self.shape)) != size or any(d < 1 for d in self.shape):
            raise ValueError(f"cannot reshape {size} values to {self.shape}")
        return tuple(self.shape)

    def forward(self, params, x, train=False, rng=None):
        out_shape = self.output_shape(x.shape[1:])
        return x.reshape((x.shape[0],) + out_shape), {"input_shape": x.shape}

    def backward(self, params, cache, dy, need_param_grads=True):
        return {}, dy.reshape(cache["input_shape"])

    def tangent(self, params, cache, dx):
        return dx.reshape((dx.shape[0],) + self.output_shape(dx.shape[1:]))


LayerSpec = Annotated[
    Union[FullyConnected, Convolution, TransposedConvolution, Dropout, Activation, Reshape],
    Field(discriminator="kind"),
]
