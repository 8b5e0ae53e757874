"""Input validation utilities."""

from src.validators.descriptor_validator import DescriptorValidator, FamilySpec

__all__ = ['DescriptorValidator', 'FamilySpec']
