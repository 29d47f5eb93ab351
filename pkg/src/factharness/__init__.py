"""Reference-free summarization evaluation on synthetic documents whose
facts are fully known to the harness."""

__version__ = "0.1.0"
