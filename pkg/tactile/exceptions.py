"""
Exceptions

Error taxonomy shared by the library, the simulator and the harness.
"""

from typing import Optional


class TactileError(Exception):
    """Base class for all toolkit errors."""


class ImageParseError(TactileError, ValueError):
    """A tactile image file could not be parsed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class ImageDimensionError(TactileError, ValueError):
    """Image dimensions differ from the expected ones."""

    def __init__(self, expected: tuple[int, int], actual: tuple[int, int]):
        super().__init__(
            f"Image dimensions {actual[1]}x{actual[0]} do not match expected "
            f"{expected[1]}x{expected[0]}"
        )
        self.expected = expected
        self.actual = actual


class ShapeError(TactileError, ValueError):
    """A tensor shape does not fit the layer it is fed to."""

    def __init__(self, layer_index: int, layer_kind: str, actual, reason: str):
        super().__init__(
            f"Layer {layer_index} ({layer_kind}) rejects input shape {tuple(actual)}: {reason}"
        )
        self.layer_index = layer_index
        self.layer_kind = layer_kind
        self.actual = tuple(actual)


class CacheMismatchError(TactileError, RuntimeError):
    """A backward or tangent pass was given a cache from another forward pass."""


class TrainingDivergenceError(TactileError, RuntimeError):
    """Training produced a non-finite loss or a decoder that ignores its input."""

    def __init__(
        self,
        epoch: int,
        learning_rate: float,
        loss: Optional[float] = None,
        reason: Optional[str] = None,
    ):
        message = (
            f"Training diverged in epoch {epoch} (learning rate {learning_rate:g}, loss {loss})"
        )
        super().__init__(f"{message}: {reason}" if reason else message)
        self.epoch = epoch
        self.learning_rate = learning_rate
        self.reason = reason


class InferenceDivergenceError(TactileError, RuntimeError):
    """The belief update produced a non-finite rate of change."""

    def __init__(self, step_dt: float, gradient_magnitude: float):
        super().__init__(
            f"Belief update diverged (step_dt {step_dt:g}, "
            f"gradient magnitude {gradient_magnitude:g})"
        )
        self.step_dt = step_dt
        self.gradient_magnitude = gradient_magnitude


class NoStableStepError(TactileError, RuntimeError):
    """No step size in a calibration sweep gave stable inference."""


class ContactStateError(TactileError, RuntimeError):
    """An in-contact operation was requested while the peg is not in contact."""
