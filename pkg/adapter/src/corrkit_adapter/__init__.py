"""Neural correction tagger: BERT token classification behind tagger/1."""

__version__ = "0.1.0"

LABELS = ("C", "D", "R1", "R2", "S1", "S2")
