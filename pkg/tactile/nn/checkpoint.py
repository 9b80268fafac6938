"""
Checkpoints

Versioned `.npz` parameter dumps with JSON metadata describing the layer
chain. Loading reproduces the network exactly.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import orjson

from tactile.nn.network import Network, NetworkParams

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
METADATA_KEY = "__metadata__"

PathLike = Union[str, Path]


def save_checkpoint(
    net: Network, path: PathLike, extra: Optional[Dict[str, Any]] = None
) -> Path:
    """
    Save a network's layer chain and parameters.

    Args:
        net: Network to save
        path: Destination file (".npz" is appended by numpy when missing)
        extra: Additional JSON-serializable metadata

    Returns:
        Path of the written file
    """
    file_path = Path(path)
    if file_path.suffix != ".npz":
        file_path = file_path.with_name(file_path.name + ".npz")
    file_path.parent.mkdir(parents=True, exist_ok=True)

    metadata = {
        "version": CHECKPOINT_VERSION,
        "input_shape": list(net.input_shape),
        "layers": net.describe(),
        "seed": net.params.seed,
        "extra": extra or {},
    }
    arrays = {f"layer{index}.{name}": t for (index, name), t in net.params.tensors()}
    arrays[METADATA_KEY] = np.frombuffer(orjson.dumps(metadata), dtype=np.uint8)
    np.savez(file_path, **arrays)

    logger.debug(f"Saved checkpoint with {net.params.size} parameters to {file_path}")
    return file_path


def load_checkpoint(path: PathLike) -> Tuple[Network, Dict[str, Any]]:
    """
    Load a network saved by save_checkpoint.

    Args:
        path: Checkpoint file

    Returns:
        Tuple of (network, extra metadata)
    """
    with np.load(Path(path), allow_pickle=False) as data:
        metadata = orjson.loads(data[METADATA_KEY].tobytes())
        if metadata.get("version") != CHECKPOINT_VERSION:
            raise ValueError(f"Unsupported checkpoint version {metadata.get('version')}")

        layers = []
        for index in range(len(metadata["layers"])):
            prefix = f"layer{index}."
            layers.append(
                {
                    key[len(prefix) :]: data[key].copy()
                    for key in data.files
                    if key.startswith(prefix)
                }
            )

    params = NetworkParams(layers, int(metadata["seed"]))
    net = Network(metadata["layers"], metadata["input_shape"], params=params)
    return net, metadata["extra"]
