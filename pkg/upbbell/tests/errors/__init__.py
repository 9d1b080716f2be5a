"""Tests for error handling."""
