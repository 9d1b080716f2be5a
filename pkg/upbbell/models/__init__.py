"""Report models for the application."""
