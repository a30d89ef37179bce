"""Steps-to-reproduce extraction and Q-learning crash reproduction."""

__version__ = "0.1.0"
