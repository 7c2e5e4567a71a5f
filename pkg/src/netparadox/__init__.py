"""Paradoxes in social network games with multiple products."""
