"""Tests for the harness package."""
