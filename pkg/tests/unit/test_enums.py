"""Unit tests for the shared enums."""

from fatdual.enums import DiagramFamily, GraphKind, OutputFormat, RootKind, RootRegion, SummandKind


def test_graph_kind_values():
    """Test that GraphKind enum has correct string values."""
    assert GraphKind.DYNKIN == "dynkin"
    assert GraphKind.EUCLIDEAN == "euclidean"
    assert GraphKind.WILD == "wild"


def test_diagram_family_tags():
    """Test that Euclidean families carry the tilde marker."""
    assert [f.value for f in DiagramFamily] == ["A", "D", "E", "A~", "D~", "E~"]


def test_enums_are_strings():
    """Test that every enum value is a string."""
    for enum in (GraphKind, DiagramFamily, RootKind, RootRegion, SummandKind, OutputFormat):
        assert all(isinstance(member.value, str) for member in enum)


def test_output_formats():
    """Test that the CLI formats are present."""
    assert {f.value for f in OutputFormat} == {"table", "doc"}
    assert RootRegion("regular") is RootRegion.REGULAR
