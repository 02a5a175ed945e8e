"""Latent-topic analysis of short-text corpora: coherence-guided topic count
selection, subword document embeddings, k-means cluster maps, and a report
service for labeling and classifying."""

__version__ = "0.1.0"
