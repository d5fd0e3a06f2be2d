"""Tests for the counting statistics."""
