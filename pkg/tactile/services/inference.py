"""
Inference Service

Free-energy evaluation and perceptual inference of the tilt belief mu.

    F = 1/2 * precision * sum((o - g(mu))^2) + 1/2 * mu^2 / var_mu + 1/2 * theta^2 / var_theta
    mu_dot = <dg/dmu, precision * (o - g(mu))> - mu / var_mu
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from tactile.exceptions import InferenceDivergenceError
from tactile.imagekit.image import TactileImage
from tactile.schemas.inference import InferenceConfig
from tactile.services.generator import DecoderModel

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["iteration", "mu", "free_energy"]


@dataclass(frozen=True)
class BeliefState:
    """Current tilt belief and its free energy."""

    mu: float
    free_energy: float = float("nan")
    iterations_run: int = 0
    trace: Optional[Tuple[Tuple[float, float], ...]] = None
    converged: bool = False

    def trace_frame(self) -> pd.DataFrame:
        """Per-iteration (mu, F) history as a table."""
        rows = self.trace or ()
        return pd.DataFrame(
            [(i, mu, f) for i, (mu, f) in enumerate(rows)], columns=TRACE_COLUMNS
        )

    def write_trace(self, path: Union[str, Path]) -> Path:
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        self.trace_frame().to_csv(file_path, index=False, float_format="%.17g")
        return file_path


def _prior_terms(mu: float, theta: float, cfg: InferenceConfig) -> float:
    return 0.5 * mu * mu / cfg.prior_var_mu + 0.5 * theta * theta / cfg.prior_var_theta


def free_energy(
    model: DecoderModel,
    mu: float,
    o_tac: TactileImage,
    theta: float,
    cfg: InferenceConfig,
) -> float:
    """
    Free energy of an observation under belief mu and relative angle theta.

    Constant terms are dropped, so a perfectly predicted observation at
    mu = theta = 0 has zero free energy.
    """
    g, _ = model.evaluate(mu)
    residual = o_tac.pixels - g
    return 0.5 * cfg.precision_tac * float(np.sum(residual * residual)) + _prior_terms(
        mu, theta, cfg
    )


def _evaluate(
    model: DecoderModel, mu: float, o_tac: TactileImage, theta: float, cfg: InferenceConfig
) -> Tuple[float, float]:
    """Free energy and mu_dot at mu from one forward and one backward pass."""
    g, cache = model.evaluate(mu)
    weighted_error = cfg.precision_tac * (o_tac.pixels - g)
    likelihood_drive = model.pullback(cache, weighted_error)
    mu_dot = likelihood_drive - mu / cfg.prior_var_mu
    if not np.isfinite(mu_dot):
        raise InferenceDivergenceError(cfg.step_dt, abs(likelihood_drive))

    f = 0.5 * float(np.sum(weighted_error * (o_tac.pixels - g))) + _prior_terms(mu, theta, cfg)
    return f, mu_dot


def belief_rate(model: DecoderModel, mu: float, o_tac: TactileImage, cfg: InferenceConfig) -> float:
    """Rate of change mu_dot of the belief at mu."""
    return _evaluate(model, mu, o_tac, 0.0, cfg)[1]


def update_mu(
    model: DecoderModel,
    belief: BeliefState,
    o_tac: TactileImage,
    cfg: InferenceConfig,
    theta: float = 0.0,
) -> BeliefState:
    """
    Apply one Euler step mu' = mu + step_dt * mu_dot.

    Args:
        model: Trained decoder
        belief: Current belief
        o_tac: Observed contact area
        cfg: Precisions, prior variances and step size
        theta: Relative angle entering the reported free energy

    Returns:
        New belief holding the free energy at mu'

    Raises:
        InferenceDivergenceError: mu_dot or mu' is not finite
    """
    _, mu_dot = _evaluate(model, belief.mu, o_tac, theta, cfg)
    new_mu = belief.mu + cfg.step_dt * mu_dot
    if not np.isfinite(new_mu):
        raise InferenceDivergenceError(cfg.step_dt, abs(mu_dot))
    return replace(
        belief,
        mu=float(new_mu),
        free_energy=free_energy(model, new_mu, o_tac, theta, cfg),
        iterations_run=belief.iterations_run + 1,
    )


def perceptual_inference(
    model: DecoderModel,
    o_tac: TactileImage,
    cfg: InferenceConfig,
    mu_init: Optional[float] = None,
    theta: float = 0.0,
) -> BeliefState:
    """
    Descend the free energy from an initial belief.

    Stops after cfg.max_iters updates or once the belief rate |mu_dot| falls
    below cfg.convergence_eps.

    Args:
        model: Trained decoder
        o_tac: Observed contact area
        cfg: Inference settings
        mu_init: Starting belief, defaults to cfg.mu_init
        theta: Relative angle entering the reported free energy

    Returns:
        Final belief, with the (mu, F) trace when cfg.record_trace is set
    """
    mu = cfg.mu_init if mu_init is None else float(mu_init)
    trace = []
    iterations = 0
    converged = False

    while iterations < cfg.max_iters:
        f, mu_dot = _evaluate(model, mu, o_tac, theta, cfg)
        if cfg.record_trace:
            trace.append((mu, f))
        mu = mu + cfg.step_dt * mu_dot
        iterations += 1
        if not np.isfinite(mu):
            raise InferenceDivergenceError(cfg.step_dt, abs(mu_dot))
        if abs(mu_dot) < cfg.convergence_eps:
            converged = True
            break

    if not converged:
        logger.debug(f"Inference stopped at max_iters={cfg.max_iters} with mu={mu:.4f}")

    return BeliefState(
        mu=float(mu),
        free_energy=free_energy(model, mu, o_tac, theta, cfg),
        iterations_run=iterations,
        trace=tuple(trace) if cfg.record_trace else None,
        converged=converged,
    )
