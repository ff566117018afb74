"""Maintainability scoring of commits from per-guideline risk profiles."""

__version__ = "0.1.0"
