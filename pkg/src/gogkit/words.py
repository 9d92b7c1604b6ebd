"""Reduced words in free groups and the text syntax for them.

Syntax: whitespace-separated tokens ``name`` or ``name^k`` (k may be
negative); ``1`` is the empty word.  Names are identifiers
(letters, digits, underscore; not starting with a digit).
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Optional, Sequence

from ._util import ValidationError

Letter = tuple  # (generator name, +1 | -1)

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _free_reduce(letters: Iterable[Letter]) -> tuple:
    stack: list = []
    for g, s in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


class Word:
    """An element of a free group, always stored freely reduced."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        checked = []
        for g, s in letters:
            if s not in (1, -1):
                raise ValidationError(f"letter sign must be +1 or -1, got {s!r}")
            checked.append((g, s))
        object.__setattr__(self, "letters", _free_reduce(checked))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls([(name, s)] * abs(power))

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters: list = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValidationError(f"bad word token {tok!r} in {text!r}")
            k = int(m.group(2)) if m.group(2) is not None else 1
            s = 1 if k > 0 else -1
            letters.extend([(m.group(1), s)] * abs(k))
        return cls(letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self.letters))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            k = (j - i) * L[i][1]
            parts.append(L[i][0] if k == 1 else f"{L[i][0]}^{k}")
            i = j
        return " ".join(parts)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def exponent_sum(self, name: str) -> int:
        return sum(s for g, s in self.letters if g == name)

    def cyclic_reduce(self) -> "Word":
        L = list(self.letters)
        while len(L) >= 2 and L[0][0] == L[-1][0] and L[0][1] == -L[-1][1]:
            L = L[1:-1]
        return Word(L)

    def rotations(self) -> list["Word"]:
        L = self.letters
        return [Word(L[i:] + L[:i]) for i in range(max(1, len(L)))]

    def is_conjugate_to(self, other: "Word") -> bool:
        """Conjugacy in the free group: compare cyclic reductions up to rotation."""
        a, b = self.cyclic_reduce(), other.cyclic_reduce()
        if len(a) != len(b):
            return False
        return any(r == b for r in a.rotations())


def reduce(w: Word | Sequence[Letter], basis: Optional[Iterable[str]] = None) -> Word:
    """Freely reduce; with ``basis`` given, reject letters outside it."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if basis is not None:
        known = set(basis)
        for g, _ in letters:
            if g not in known:
                raise ValidationError(f"unknown generator {g!r}")
    return Word(letters)


def substitute(w: Word, sub: Mapping[str, Word]) -> Word:
    """Image of ``w`` under the homomorphism given on generators by ``sub``.

    Generators missing from ``sub`` are left alone.
    """
    out: list = []
    for g, s in w.letters:
        if g in sub:
            img = sub[g] if s > 0 else sub[g].inverse()
            out.extend(img.letters)
        else:
            out.append((g, s))
    return Word(out)


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def alternating(first: str, second: str, length: int) -> Word:
    """``first second first ...`` with ``length`` letters."""
    return Word((first if i % 2 == 0 else second, 1) for i in range(length))
