"""Tests for the sim package."""
