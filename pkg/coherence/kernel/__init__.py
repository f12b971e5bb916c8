from .validator import Checkpoint, ValidationReport, replay, validate

__all__ = ['Checkpoint', 'ValidationReport', 'replay', 'validate']
