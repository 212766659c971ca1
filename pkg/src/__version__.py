"""Version information for nlqm-sim."""

__version__ = "0.4.0"
__project__ = "nlqm-sim"
