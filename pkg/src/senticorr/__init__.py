"""Entropy-keyword SVM sentiment scoring and sentiment/score dependence analysis."""

__version__ = "0.1.0"
