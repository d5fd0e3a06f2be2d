"""Tests for kinkpairs."""
