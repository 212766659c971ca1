"""Command implementations for the nlqm CLI."""
