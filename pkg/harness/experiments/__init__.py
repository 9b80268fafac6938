"""
Experiment runners, one per CLI subcommand.
"""

from harness.experiments.calibration import calibrate_dt, run_calibration
from harness.experiments.dualpolicy import run_dualpolicy_experiment
from harness.experiments.gradcheck import run_grad_check
from harness.experiments.perception import run_perception_experiment
from harness.experiments.render import run_render
from harness.experiments.runner import ExperimentResult

RUNNERS = {
    "perception": run_perception_experiment,
    "dual-policy": run_dualpolicy_experiment,
    "grad-check": run_grad_check,
    "calibrate-dt": run_calibration,
    "render": run_render,
}

__all__ = [
    "RUNNERS",
    "ExperimentResult",
    "calibrate_dt",
    "run_calibration",
    "run_dualpolicy_experiment",
    "run_grad_check",
    "run_perception_experiment",
    "run_render",
]
