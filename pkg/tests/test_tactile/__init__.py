"""Tests for the tactile package."""
