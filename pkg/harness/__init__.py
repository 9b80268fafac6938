"""
Experiment harness: CLI, run storage and the experiment runners.
"""
