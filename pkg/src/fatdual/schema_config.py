"""
Interchange schema version configuration.

This module manages supported interchange document versions and the default
version. New versions are added here; the parser rejects anything else.
"""

# Supported schema versions
SUPPORTED_SCHEMA_VERSIONS = ["1.0"]

# Default schema version
DEFAULT_SCHEMA_VERSION = "1.0"
