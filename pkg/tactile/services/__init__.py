"""
Services Package

Generative decoder, free-energy inference and the supervised baseline.
"""

from tactile.services.baseline import RegressorModel, predict_tilt, train_baseline
from tactile.services.generator import (
    DecoderModel,
    TrainReport,
    d_g_d_mu,
    instant_train,
    predict,
)
from tactile.services.inference import (
    BeliefState,
    belief_rate,
    free_energy,
    perceptual_inference,
    update_mu,
)

__all__ = [
    "DecoderModel",
    "TrainReport",
    "instant_train",
    "predict",
    "d_g_d_mu",
    "BeliefState",
    "free_energy",
    "belief_rate",
    "update_mu",
    "perceptual_inference",
    "RegressorModel",
    "train_baseline",
    "predict_tilt",
]
