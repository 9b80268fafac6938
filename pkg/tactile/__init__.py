"""
Tactile Active Inference Library

Deep active inference for tactile peg alignment: image kit, neural network
kit, generative decoder, free-energy inference and the supervised baseline.
"""

__version__ = "1.0.0"
