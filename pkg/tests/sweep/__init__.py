"""Tests for sweeps, fits and result files."""
