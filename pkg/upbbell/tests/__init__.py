"""Tests for the upbbell package."""
