"""Configuration settings for the application."""
