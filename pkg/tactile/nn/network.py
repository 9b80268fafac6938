"""
Network

Sequential composition of layer specifications with explicit forward,
backward and tangent passes.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import TypeAdapter

from tactile.config import get_settings
from tactile.exceptions import CacheMismatchError, ShapeError
from tactile.nn.layers import LayerSpec, Shape

logger = logging.getLogger(__name__)

LAYER_ADAPTER = TypeAdapter(LayerSpec)


@dataclass
class NetworkParams:
    """Per-layer weight and bias tensors plus the seed they were drawn from."""

    layers: List[Dict[str, np.ndarray]]
    seed: int = 0

    def tensors(self) -> Iterator[Tuple[Tuple[int, str], np.ndarray]]:
        """Iterate over ((layer index, name), tensor) pairs."""
        for index, layer in enumerate(self.layers):
            for name in sorted(layer):
                yield (index, name), layer[name]

    def copy(self) -> "NetworkParams":
        return NetworkParams([{k: v.copy() for k, v in p.items()} for p in self.layers], self.seed)

    def zeros_like(self) -> "NetworkParams":
        return NetworkParams(
            [{k: np.zeros_like(v) for k, v in p.items()} for p in self.layers], self.seed
        )

    @property
    def size(self) -> int:
        """Total number of scalar parameters."""
        return sum(t.size for _, t in self.tensors())


@dataclass
class ForwardCache:
    """Intermediates of one forward pass, bound to the network state that produced them."""

    token: object
    version: int
    layer_caches: List[dict] = field(repr=False)
    output_shape: Tuple[int, ...]


def _assert_finite(values: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(values)):
        raise FloatingPointError(f"Non-finite values after {where}")


class Network:
    """Feed-forward network over batched inputs of shape (N, *input_shape)."""

    def __init__(
        self,
        layers: Sequence[Union[LayerSpec, dict]],
        input_shape: Sequence[int],
        params: Optional[NetworkParams] = None,
        seed: int = 0,
    ):
        self.layers = tuple(
            LAYER_ADAPTER.validate_python(layer) if isinstance(layer, dict) else layer
            for layer in layers
        )
        if not self.layers:
            raise ValueError("A network needs at least one layer")
        self.input_shape: Shape = tuple(int(d) for d in input_shape)
        self.shapes = self._infer_shapes()
        self._token = object()
        self._version = 0

        if params is None:
            rng = np.random.default_rng(seed)
            params = NetworkParams(
                [layer.init_params(shape, rng) for layer, shape in zip(self.layers, self.shapes)],
                seed,
            )
        self._validate_params(params)
        self._params = params

    def _infer_shapes(self) -> List[Shape]:
        shapes = [self.input_shape]
        for index, layer in enumerate(self.layers):
            try:
                shapes.append(tuple(layer.output_shape(shapes[-1])))
            except ValueError as e:
                raise ShapeError(index, layer.kind, shapes[-1], str(e)) from e
        return shapes

    def _validate_params(self, params: NetworkParams) -> None:
        if len(params.layers) != len(self.layers):
            raise ValueError(
                f"Parameter set has {len(params.layers)} layers, network has {len(self.layers)}"
            )
        for index, (layer, shape) in enumerate(zip(self.layers, self.shapes)):
            expected = layer.param_shapes(shape)
            actual = {name: tuple(t.shape) for name, t in params.layers[index].items()}
            if expected != actual:
                raise ValueError(
                    f"Layer {index} ({layer.kind}) expects parameters {expected}, got {actual}"
                )

    @property
    def output_shape(self) -> Shape:
        return self.shapes[-1]

    @property
    def params(self) -> NetworkParams:
        return self._params

    @params.setter
    def params(self, value: NetworkParams) -> None:
        self._validate_params(value)
        self._params = value
        self._version += 1

    def forward(
        self,
        x: np.ndarray,
        mode: str = "eval",
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, ForwardCache]:
        """
        Run a forward pass.

        Args:
            x: Batched input of shape (N, *input_shape)
            mode: "train" enables dropout, "eval" is deterministic
            rng: Dropout generator for train mode

        Returns:
            Tuple of (output, cache for backward and tangent)
        """
        if mode not in ("train", "eval"):
            raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != len(self.input_shape) + 1 or x.shape[1:] != self.input_shape:
            raise ShapeError(
                0, self.layers[0].kind, x.shape[1:], f"expected batches of {self.input_shape}"
            )

        train = mode == "train"
        if train and rng is None:
            rng = np.random.default_rng(self._params.seed)
        debug = get_settings().debug

        caches = []
        for index, layer in enumerate(self.layers):
            x, cache = layer.forward(self._params.layers[index], x, train, rng)
            if debug:
                _assert_finite(x, f"layer {index} ({layer.kind})")
            caches.append(cache)
        return x, ForwardCache(self._token, self._version, caches, x.shape)

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Eval-mode output for a batch."""
        return self.forward(x, "eval")[0]

    def _check_cache(self, cache: ForwardCache, gradient: np.ndarray) -> None:
        if cache.token is not self._token:
            raise CacheMismatchError("Forward cache belongs to a different network")
        if cache.version != self._version:
            raise CacheMismatchError("Forward cache is stale: parameters changed since forward")
        if gradient.shape != cache.output_shape:
            raise ValueError(
                f"Gradient shape {gradient.shape} does not match output {cache.output_shape}"
            )

    def backward(
        self,
        cache: ForwardCache,
        output_gradient: np.ndarray,
        need_param_grads: bool = True,
    ) -> Tuple[Optional[NetworkParams], np.ndarray]:
        """
        Propagate an output gradient back through the network.

        Args:
            cache: Cache from the matching forward call
            output_gradient: dL/dy with the output's shape
            need_param_grads: Skip parameter gradients when False

        Returns:
            Tuple of (parameter gradients or None, input gradient)
        """
        dy = np.asarray(output_gradient, dtype=np.float64)
        self._check_cache(cache, dy)

        grads: List[dict] = [{} for _ in self.layers]
        for index in reversed(range(len(self.layers))):
            layer = self.layers[index]
            grads[index], dy = layer.backward(
                self._params.layers[index], cache.layer_caches[index], dy, need_param_grads
            )
        param_grads = NetworkParams(grads, self._params.seed) if need_param_grads else None
        return param_grads, dy

    def tangent(self, cache: ForwardCache, input_direction: np.ndarray) -> np.ndarray:
        """
        Push an input perturbation forward (Jacobian-vector product).

        Args:
            cache: Cache from the forward call at the linearization point
            input_direction: Perturbation with the input's shape

        Returns:
            Directional derivative of the output
        """
        dx = np.asarray(input_direction, dtype=np.float64)
        if cache.token is not self._token or cache.version != self._version:
            raise CacheMismatchError("Forward cache does not belong to this network state")
        for index, layer in enumerate(self.layers):
            dx = layer.tangent(self._params.layers[index], cache.layer_caches[index], dx)
        return dx

    def describe(self) -> List[dict]:
        """Layer specifications as plain dictionaries."""
        return [layer.model_dump(mode="json") for layer in self.layers]
