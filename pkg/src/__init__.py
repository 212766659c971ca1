"""nlqm-sim - simulator and analysis toolkit for the RF nonlinearity search."""

from .__version__ import __project__, __version__

__all__ = ["__version__", "__project__"]
