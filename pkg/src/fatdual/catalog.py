"""
Built-in algebra aliases.

Names accepted by `resolve_quiver` / `resolve_algebra`:

- `t2`, `t3`, ... `t<n>`: the n-block upper triangular algebra (linear A_n)
- `kronecker`, `a2tilde`, `d4tilde`
- `a<n>`, `d<n>`, `e<n>` for the standard Dynkin diagrams and the same with a
  `tilde` suffix (`a3tilde`, `e6tilde`, ...) for the Euclidean ones
"""

import re

from .enums import DiagramFamily
from .errors import FatDualError
from .exactalg import BasicAlgebra, GroundField
from .quiver import Quiver, QuiverError, a_n, kronecker, path_algebra, standard_diagram

_PATTERN = re.compile(r"^(?P<letter>[ade])(?P<rank>\d+)(?P<tilde>tilde|~)?$")
_TRIANGULAR = re.compile(r"^t(?P<blocks>\d+)$")

_FAMILIES = {
    ("a", False): DiagramFamily.A,
    ("d", False): DiagramFamily.D,
    ("e", False): DiagramFamily.E,
    ("a", True): DiagramFamily.A_TILDE,
    ("d", True): DiagramFamily.D_TILDE,
    ("e", True): DiagramFamily.E_TILDE,
}

ALIASES = ("t2", "t3", "kronecker", "a2tilde", "d4tilde")


class CatalogError(FatDualError):
    """Exception raised for unknown algebra names."""

    pass


def resolve_quiver(name: str) -> Quiver:
    """
    Look up the quiver behind a built-in name.

    Raises:
        CatalogError: If the name is not recognised
    """
    key = name.strip().lower()
    if key == "kronecker":
        return kronecker()
    try:
        if m := _TRIANGULAR.match(key):
            return a_n(int(m["blocks"]))
        if m := _PATTERN.match(key):
            family = _FAMILIES[(m["letter"], m["tilde"] is not None)]
            return standard_diagram(family, int(m["rank"]))
    except QuiverError as e:
        raise CatalogError(f"unknown algebra '{name}': {e}") from e
    raise CatalogError(f"unknown algebra '{name}'; built-in aliases: {', '.join(ALIASES)}")


def resolve_algebra(name: str, field: GroundField | None = None) -> BasicAlgebra:
    """The path algebra of a built-in quiver over `field` (default QQ)."""
    return path_algebra(resolve_quiver(name), field or GroundField.rationals())
