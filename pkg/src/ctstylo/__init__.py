"""Stylometry toolkit for pre-annotated Chinese translation corpora.

Pipeline: parse annotated documents -> chunk into samples -> extract
generic and creative-translation feature families -> rank by chi-square ->
classify translation groups with a five-model ensemble -> cluster with
k-means (ARI) and delta-based agglomerative trees.
"""

__version__ = "0.1.0"
