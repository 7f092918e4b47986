"""Decision summarization for spoken meetings: cluster decision-related
dialogue acts, extract DA-level and token-level decision summaries, and
score clusterings (B-cubed, pairwise, VOI) and summaries (ROUGE-1)."""

__version__ = "0.1.0"
