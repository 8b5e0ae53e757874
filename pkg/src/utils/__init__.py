"""Utility functions and helpers."""

from src.utils.parallel import ordered_map, resolve_threads
from src.utils.seed_generator import SeedGenerator

__all__ = ['ordered_map', 'resolve_threads', 'SeedGenerator']
