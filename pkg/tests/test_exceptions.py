"""
Error message formatting and the exception hierarchy

Run with: pytest tests/test_exceptions.py
"""

import pytest

from ideaflow.exceptions import (
    IdeaFlowError,
    InvalidInputError,
    DimensionError,
    FormatError,
    EmptyGroupError,
    ConfigurationError,
    EmptyTensorError,
    ArchiveError
)


def test_archive_error_with_all_fields():
    """ArchiveError captures and displays all error context"""
    error = ArchiveError(
        message="Dataset not found",
        status_code=404,
        details="No archive entry named 'Cofee'",
        suggestion="Check the dataset name against the archive's dataset list",
        url="https://example.org/Cofee.zip"
    )

    print(str(error))

    assert error.message == "Dataset not found"
    assert error.status_code == 404
    assert error.url == "https://example.org/Cofee.zip"
    assert "Archive Error (status 404)" in str(error)
    assert "Details: No archive entry named 'Cofee'" in str(error)
    assert "Suggestion: Check the dataset name" in str(error)
    assert "URL: https://example.org/Cofee.zip" in str(error)


def test_archive_error_minimal():
    """ArchiveError works with only a message and status"""
    error = ArchiveError(message="Something went wrong", status_code=500)

    assert error.message == "Something went wrong"
    assert error.status_code == 500
    assert error.details is None
    assert error.suggestion is None
    assert str(error) == "Archive Error (status 500): Something went wrong"


def test_network_error():
    """Network errors carry no status code"""
    error = ArchiveError(message="Network error: Connection refused")

    assert error.status_code is None
    assert str(error) == "Network error: Connection refused"


def test_input_error_location():
    """Input errors prefix the message with source and line"""
    assert str(FormatError("Ragged row", source="Coffee_TRAIN.tsv", line=7)) == "Coffee_TRAIN.tsv:7: Ragged row"
    assert str(FormatError("Empty file", source="x.tsv")) == "x.tsv: Empty file"
    assert str(DimensionError("Bad length", line=3)) == "line 3: Bad length"
    assert str(InvalidInputError("Bad value")) == "Bad value"


def test_exception_catching_pattern():
    """Every library error is catchable as IdeaFlowError"""
    for error in (
        DimensionError("shape"),
        EmptyGroupError("group"),
        ConfigurationError("k", suggestion="Request fewer clusters"),
        EmptyTensorError("empty"),
        ArchiveError("down", status_code=503)
    ):
        with pytest.raises(IdeaFlowError) as info:
            raise error
        assert info.value.message


def test_suggestion_rendering():
    """Suggestions render on their own line"""
    error = ConfigurationError("k=5 exceeds the number of items (3)", suggestion="Request fewer clusters")

    assert str(error) == "k=5 exceeds the number of items (3)\nSuggestion: Request fewer clusters"
