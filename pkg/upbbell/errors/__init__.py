"""Error handling for the application."""
