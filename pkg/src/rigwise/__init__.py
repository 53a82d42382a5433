"""rigwise: reservoir decision-support engine."""

__version__ = "0.1.0"
