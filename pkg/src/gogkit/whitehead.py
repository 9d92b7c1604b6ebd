"""Free-factor recognition by Whitehead minimization of a basis tuple.

A subgroup H of rank s is a free factor of F_r exactly when some
automorphism carries its core graph to a rose with s petals, the smallest
possible size.  Peak reduction for core graphs (Gersten) guarantees that a
non-minimal core graph is shrunk by some Whitehead automorphism of the
second kind, so greedy strict descent over those moves reaches the minimum.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterator, Sequence

from .stallings import StallingsGraph, subgroup_basis, subgroup_graph
from .words import Word, substitute

DEFAULT_BUDGET = 10_000


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


def whitehead_moves(basis: Sequence[str]) -> Iterator[dict]:
    """Nontrivial Whitehead automorphisms (A, a), as generator substitutions.

    For a letter ``a`` and a set A of letters containing a but not a^-1, a
    generator y != a^{+-1} goes to y a, a^-1 y, a^-1 y a or y according to
    whether y, y^-1 lie in A.
    """
    letters = [(g, s) for g in basis for s in (1, -1)]
    for a in letters:
        others = [x for x in letters if x[0] != a[0]]
        for bits in itertools.product((False, True), repeat=len(others)):
            A = {x for x, b in zip(others, bits) if b}
            if not A:
                continue
            aw = Word([a])
            sub = {}
            for g in basis:
                if g == a[0]:
                    continue
                y = Word.gen(g)
                pos, neg = (g, 1) in A, (g, -1) in A
                if pos and neg:
                    sub[g] = aw.inverse() * y * aw
                elif pos:
                    sub[g] = y * aw
                elif neg:
                    sub[g] = aw.inverse() * y
            if sub:
                yield sub


def _size(words: Sequence[Word], basis: Sequence[str]) -> int:
    return len(subgroup_graph(words, tuple(basis)).graph.edges)


def minimize_tuple(words: Sequence[Word], basis: Sequence[str], budget: int = DEFAULT_BUDGET):
    """Greedy strict descent of the folded core graph size.

    Returns (tuple, minimal?); minimal is False if the budget ran out before
    a local minimum was certified.
    """
    current = list(words)
    size = _size(current, basis)
    spent = 0
    while True:
        improved = False
        for sub in whitehead_moves(basis):
            spent += 1
            if spent > budget:
                return current, False
            image = [substitute(w, sub) for w in current]
            t = _size(image, basis)
            if t < size:
                current, size, improved = image, t, True
                break
        if not improved:
            return current, True


def is_free_factor(sg: StallingsGraph, budget: int = DEFAULT_BUDGET, conservative: bool = False) -> Verdict:
    s, r = sg.rank, sg.ambient_rank
    no = Verdict.UNKNOWN if conservative else Verdict.NO
    if s > r:
        return no
    if s == 0:
        return Verdict.YES
    final, minimal = minimize_tuple(subgroup_basis(sg), sg.basis, budget)
    # a free factor of rank s ends as a rose on s distinct generators
    if _size(final, sg.basis) == s:
        return Verdict.YES
    if not minimal:
        return Verdict.UNKNOWN
    return no
