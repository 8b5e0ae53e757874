"""File access layer: edge-list graphs and result emission."""

from src.repositories.base_repository import BaseRepository
from src.repositories.edge_list_repository import EdgeListRepository
from src.repositories.result_repository import ResultRepository

__all__ = ['BaseRepository', 'EdgeListRepository', 'ResultRepository']
