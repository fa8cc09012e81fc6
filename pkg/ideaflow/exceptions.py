"""
Custom exceptions for ideaflow
"""

from typing import Optional


class IdeaFlowError(Exception):
    """Base exception for all ideaflow errors"""
    def __init__(
        self,
        message: str,
        details: Optional[str] = None,
        suggestion: Optional[str] = None
    ):
        self.message = message
        self.details = details
        self.suggestion = suggestion
        super().__init__(self._render())

    def _header(self) -> str:
        return self.message

    def _render(self) -> str:
        error_parts = [self._header()]

        if self.details:
            error_parts.append(f"\nDetails: {self.details}")
        if self.suggestion:
            error_parts.append(f"\nSuggestion: {self.suggestion}")

        return "".join(error_parts)


class InvalidInputError(IdeaFlowError):
    """Raised when input data (series, corpus, files) violates its contract"""
    def __init__(
        self,
        message: str,
        details: Optional[str] = None,
        suggestion: Optional[str] = None,
        source: Optional[str] = None,
        line: Optional[int] = None
    ):
        self.source = source
        self.line = line
        super().__init__(message, details=details, suggestion=suggestion)

    def _header(self) -> str:
        if self.source and self.line is not None:
            return f"{self.source}:{self.line}: {self.message}"
        if self.source:
            return f"{self.source}: {self.message}"
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message


class DimensionError(InvalidInputError):
    """Raised when lengths or shapes disagree"""
    pass


class UniquenessError(InvalidInputError):
    """Raised when a word token appears twice within a group"""
    pass


class FormatError(InvalidInputError):
    """Raised when a file cannot be parsed"""
    pass


class EmptyGroupError(InvalidInputError):
    """Raised when a corpus holds no documents for one of the groups"""
    pass


class ConfigurationError(IdeaFlowError):
    """Raised when a tunable is out of range"""
    pass


class DegenerateRegressorError(IdeaFlowError):
    """Raised when the regressor of a cointegration fit has no variance"""
    pass


class InfeasibleBandError(IdeaFlowError):
    """Raised when the warping band cannot connect the path endpoints"""
    pass


class EmptySelectionError(IdeaFlowError):
    """Raised when a sub-tensor is requested over an empty index set"""
    pass


class EmptyTensorError(IdeaFlowError):
    """Raised when a factorization is requested on a tensor without entries"""
    pass


class ArchiveError(IdeaFlowError):
    """Raised when the dataset archive returns an error response"""
    def __init__(
        self,
        message: str,
        status_code: Optional[int] = None,
        details: Optional[str] = None,
        suggestion: Optional[str] = None,
        url: Optional[str] = None
    ):
        self.status_code = status_code
        self.url = url
        super().__init__(message, details=details, suggestion=suggestion)

    def _render(self) -> str:
        text = super()._render()
        if self.url:
            text += f"\nURL: {self.url}"
        return text

    def _header(self) -> str:
        if self.status_code:
            return f"Archive Error (status {self.status_code}): {self.message}"
        return self.message
