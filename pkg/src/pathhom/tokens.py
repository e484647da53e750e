"""Shared token helpers: identity morphisms and a total order on labels.

Labels in this package are heterogeneous (strings from files, integers,
tuples built by products, small frozen dataclasses for formal arrows), so
sorting needs a key that never compares an ``int`` with a ``str``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable


@dataclass(frozen=True)
class Identity:
    """The degenerate loop ``s(v)`` at a vertex."""

    vertex: Hashable

    def __repr__(self) -> str:
        return f"id[{self.vertex!r}]"


def sort_key(x: Any) -> tuple:
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, (int, Fraction)):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, len(x), tuple(sort_key(e) for e in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(sort_key(e) for e in x)))
    if isinstance(x, Identity):
        return (4, sort_key(x.vertex))
    key = getattr(x, "sort_key", None)
    if key is not None:
        return (5, type(x).__name__, key())
    return (6, type(x).__name__, repr(x))


def sorted_tokens(items):
    return sorted(items, key=sort_key)


def label_str(x: Any) -> str:
    """Human-readable rendering used in reports."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label_str(e) for e in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(label_str(e) for e in sorted_tokens(x)) + "}"
    if isinstance(x, Identity):
        return f"id_{label_str(x.vertex)}"
    return str(x)
