"""Shims for the oldest supported Python versions."""

import itertools
import sys
from collections.abc import Iterator, Iterable
from typing import TypeVar

T = TypeVar("T")


# --- itertools.pairwise (Python 3.10)


def _adjacent_pairs(iterable: Iterable[T]) -> Iterator[tuple[T, T]]:
    """Neighbouring items of *iterable*, e.g., the steps of a grid.

    >>> list(_adjacent_pairs([0.0, 0.5, 2.0]))
    [(0.0, 0.5), (0.5, 2.0)]
    """
    left, right = itertools.tee(iterable)
    next(right, None)
    yield from zip(left, right)


try:
    # Under 3.9 the attribute is missing, under later versions the ignore
    # is unused. MyPy is told to accept both.
    from itertools import (  # type: ignore[attr-defined,unused-ignore]
        pairwise as _itertools_pairwise,
    )
except ImportError:  # pragma: no cover  # Python 3.9 only
    pairwise = _adjacent_pairs
else:  # pragma: no cover  # Python 3.10 and later

    def pairwise(iterable: Iterable[T]) -> Iterator[tuple[T, T]]:
        yield from _itertools_pairwise(iterable)


# --- tomllib (Python 3.11)

# Before 3.11, the tomli backport offers the same API under another name.
if sys.version_info >= (3, 11):  # pragma: no cover  # depends on Python version
    import tomllib
else:  # pragma: no cover  # depends on Python version
    import tomli as tomllib

__all__ = ("pairwise", "tomllib")
