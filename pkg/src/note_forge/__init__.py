"""note-forge: sequential hospitalization datasets, preference pairs, and
summary evaluation for EMR discharge-summary generation."""

__version__ = "0.1.0"
