"""Fixtures, document I/O, random generation, DOT export and the CLI."""
