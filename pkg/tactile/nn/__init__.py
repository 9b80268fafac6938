"""
Minimal neural network kit with explicit forward, backward and tangent passes.
"""

from tactile.nn.checkpoint import load_checkpoint, save_checkpoint
from tactile.nn.gradcheck import GradCheckReport, grad_check, grad_check_report
from tactile.nn.layers import (
    Activation,
    Convolution,
    Dropout,
    FullyConnected,
    LayerSpec,
    Reshape,
    TransposedConvolution,
)
from tactile.nn.network import ForwardCache, Network, NetworkParams
from tactile.nn.optim import Adam, sgd_step
from tactile.nn.training import fit_network, mse_loss

__all__ = [
    # Layers
    "LayerSpec",
    "FullyConnected",
    "Convolution",
    "TransposedConvolution",
    "Dropout",
    "Activation",
    "Reshape",
    # Network
    "Network",
    "NetworkParams",
    "ForwardCache",
    # Training
    "sgd_step",
    "Adam",
    "fit_network",
    "mse_loss",
    # Verification and persistence
    "grad_check",
    "grad_check_report",
    "GradCheckReport",
    "save_checkpoint",
    "load_checkpoint",
]
