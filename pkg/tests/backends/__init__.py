"""Tests for backends and related classes."""
