"""Scene generation from contextual ontologies compiled to answer-set programs."""

__version__ = "0.1.0"
