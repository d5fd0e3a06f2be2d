"""Tests for the exact spin-chain oracle."""
