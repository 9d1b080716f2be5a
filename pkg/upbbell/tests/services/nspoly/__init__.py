"""Tests for the no-signalling polytope package."""
