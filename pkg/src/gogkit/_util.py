"""Small shared helpers: id ordering, union-find, error types."""

from __future__ import annotations

import re
from typing import Hashable, Iterable

_DIGITS = re.compile(r"(\d+)")


class ValidationError(ValueError):
    """Malformed input: a structure that violates its own invariants."""


class VerificationError(AssertionError):
    """A construction produced an object that failed an internal check."""


def id_key(s: str) -> tuple:
    """Natural sort key, so that ``e2`` sorts before ``e10``."""
    parts = _DIGITS.split(s)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def sorted_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=id_key)


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out
