"""
Document parser for fatdual JSON and YAML files.

This module provides the DocumentParser class for loading, validating and
writing interchange documents. It handles:
- Loading JSON and YAML files from disk
- Parsing dictionaries into quiver, algebra, element and result documents
- Validating schema versions
- Rendering documents back to JSON or YAML with the schema version attached
"""

import json
from pathlib import Path
from typing import Any, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from .errors import FatDualError
from .schema_config import DEFAULT_SCHEMA_VERSION, SUPPORTED_SCHEMA_VERSIONS

DocumentT = TypeVar("DocumentT", bound=BaseModel)


class DocumentParserError(FatDualError):
    """Exception raised for document parsing errors."""

    pass


class DocumentParser:
    """
    Parser for fatdual interchange documents.

    Every document carries a top-level `schemaVersion`; the remaining fields
    are validated by the pydantic model of the requested document type.
    """

    @staticmethod
    def parse_file(file_path: str | Path, document_type: type[DocumentT]) -> DocumentT:
        """
        Load and validate a document file (JSON or YAML).

        Args:
            file_path: Path to the document (.json, .yaml or .yml)
            document_type: Model class the document must validate against

        Returns:
            The validated document

        Raises:
            DocumentParserError: If the file doesn't exist, can't be read,
                                 contains invalid JSON/YAML, has an unsupported
                                 extension, or fails validation
        """
        path = Path(file_path)

        if not path.exists():
            raise DocumentParserError(f"Schema file not found: {file_path}")

        if not path.is_file():
            raise DocumentParserError(f"Path is not a file: {file_path}")

        file_extension = path.suffix.lower()

        try:
            with path.open("r", encoding="utf-8") as f:
                if file_extension == ".json":
                    data = json.load(f)
                elif file_extension in (".yaml", ".yml"):
                    data = yaml.safe_load(f)
                else:
                    raise DocumentParserError(
                        f"Unsupported file extension '{file_extension}'. "
                        f"Supported extensions: .json, .yaml, .yml"
                    )
        except json.JSONDecodeError as e:
            raise DocumentParserError(f"Invalid JSON in file {file_path}: {e}") from e
        except yaml.YAMLError as e:
            raise DocumentParserError(f"Invalid YAML in file {file_path}: {e}") from e
        except OSError as e:
            raise DocumentParserError(f"Failed to read file {file_path}: {e}") from e

        return DocumentParser.parse_dict(data, document_type)

    @staticmethod
    def parse_dict(data: Any, document_type: type[DocumentT]) -> DocumentT:
        """
        Parse a dictionary into a document.

        Args:
            data: Dictionary with a `schemaVersion` field and the document fields
            document_type: Model class the document must validate against

        Returns:
            The validated document

        Raises:
            DocumentParserError: If the structure is invalid, the schema version
                                 is unsupported, or validation fails
        """
        if not isinstance(data, dict):
            raise DocumentParserError(f"Expected dictionary, got {type(data).__name__}")

        if "schemaVersion" not in data:
            raise DocumentParserError("Missing required field 'schemaVersion'")

        DocumentParser._validate_schema_version(data["schemaVersion"])

        fields = dict(data)
        if "schemaVersion" not in document_type.model_fields:
            fields.pop("schemaVersion")

        try:
            return document_type.model_validate(fields)
        except ValidationError as e:
            raise DocumentParserError(f"Document validation failed: {e}") from e

    @staticmethod
    def parse_text(text: str, document_type: type[DocumentT]) -> DocumentT:
        """Parse YAML (or JSON, which is a subset) text into a document."""
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise DocumentParserError(f"Invalid YAML: {e}") from e
        return DocumentParser.parse_dict(data, document_type)

    @staticmethod
    def to_dict(document: BaseModel) -> dict[str, Any]:
        """JSON-compatible dictionary with the schema version as the first field."""
        body = document.model_dump(mode="json")
        body.pop("schemaVersion", None)
        version = getattr(document, "schemaVersion", DEFAULT_SCHEMA_VERSION)
        return {"schemaVersion": version, **body}

    @staticmethod
    def dump_yaml(document: BaseModel) -> str:
        return yaml.safe_dump(DocumentParser.to_dict(document), sort_keys=False, allow_unicode=True)

    @staticmethod
    def dump_json(document: BaseModel) -> str:
        return json.dumps(DocumentParser.to_dict(document), indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def _validate_schema_version(version: Any) -> None:
        """
        Validate schema version compatibility.

        Raises:
            DocumentParserError: If the version is not supported
        """
        if not isinstance(version, str):
            raise DocumentParserError(
                f"Schema version must be a string, got {type(version).__name__}"
            )

        if version not in SUPPORTED_SCHEMA_VERSIONS:
            raise DocumentParserError(
                f"Unsupported schema version '{version}'. "
                f"Supported versions: {', '.join(SUPPORTED_SCHEMA_VERSIONS)}"
            )
