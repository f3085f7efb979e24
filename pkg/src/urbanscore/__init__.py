"""Address-level liveability scoring with personalised weighting and grounded
plain-language explanations."""

__version__ = "0.1.0"
