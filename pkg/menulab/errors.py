"""Errors raised by the workbench.

Every error carries the process exit status the CLI should use and a
human readable ``detail``, the same shape as an HTTP error response.
"""
from typing import Optional


class WorkbenchError(Exception):
    status_code = 1

    def __init__(self, detail: str, status_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if status_code is not None:
            self.status_code = status_code


class InputError(WorkbenchError):
    status_code = 2


class SearchError(WorkbenchError):
    status_code = 2


class EnumerationLimitError(WorkbenchError):
    status_code = 2


class ConstructionError(WorkbenchError):
    """A construction produced a menu that earns less than its input."""

    status_code = 1

    def __init__(self, detail: str, certificate=None):
        super().__init__(detail)
        self.certificate = certificate


class ReproductionFailure(WorkbenchError):
    status_code = 1


class LPError(WorkbenchError):
    status_code = 1
