"""Single source of the tool version used in serialized artifacts."""

__version__ = "0.1.0"
