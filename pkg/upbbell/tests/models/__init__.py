"""Tests for report models."""
