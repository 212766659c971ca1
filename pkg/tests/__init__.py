"""Tests for nlqm-sim."""
