"""Small named structures used by the demos, the CLI and the tests."""

from __future__ import annotations

from .classes import signature_of
from .structures import FiniteStructure, from_partitions, partition_of

__all__ = ["bigraph", "g0", "g0_crossed", "g0_three_edges", "g1", "a2", "figure"]


def bigraph(m, n, edges):
    """Bipartite graph ``l1..lm``, ``r1..rn`` with 1-based edge pairs ``(i, j)``."""
    names = {f"l{i + 1}": i for i in range(m)}
    names.update({f"r{j + 1}": m + j for j in range(n)})
    return FiniteStructure(signature_of("bigraph"), m + n,
                           {"L": [(i,) for i in range(m)],
                            "R": [(m + j,) for j in range(n)],
                            "E": [(i - 1, m + j - 1) for i, j in edges]}, names)


def g0():
    """Parts ``{l1, l2}`` and ``{r1, r2}``, edges ``l1 r1`` and ``l2 r2``."""
    return bigraph(2, 2, [(1, 1), (2, 2)])


def g0_crossed():
    """Edges ``l1 r2`` and ``l2 r1``: isomorphic to ``g0``."""
    return bigraph(2, 2, [(1, 2), (2, 1)])


def g0_three_edges():
    return bigraph(2, 2, [(1, 1), (2, 2), (1, 2)])


def g1():
    """The 3 by 3 perfect matching ``l_i r_i``."""
    return bigraph(3, 3, [(1, 1), (2, 2), (3, 3)])


def a2():
    """Four elements, P-classes ``{a1, a2} {a3, a4}``, Q-classes
    ``{a1, a3} {a2} {a4}``."""
    return from_partitions(signature_of("2eq"), 4,
                           {"P": [[0, 1], [2, 3]], "Q": [[0, 2], [1], [3]]},
                           {f"a{i + 1}": i for i in range(4)})


def figure(B):
    """Text rendering of a built structure: both partitions for pairs of
    equivalences, the order chain with class numbers for an order with an
    equivalence (smallest element first)."""
    label = B.label
    show = lambda b: label.get(b, str(b))  # noqa: E731
    lines = []
    if "P" in B.signature:
        for rel in ("P", "Q"):
            classes = partition_of(B, rel)
            lines.append(f"{rel}-classes ({len(classes)}):")
            lines += ["  {" + ", ".join(show(b) for b in cls) + "}" for cls in classes]
        return "\n".join(lines)
    below = {b: sum((a, b) in B.relations["<"] for a in B.universe) for b in B.universe}
    chain = sorted(B.universe, key=below.__getitem__)
    classes = partition_of(B, "~")
    number = {b: i for i, cls in enumerate(classes, 1) for b in cls}
    lines.append("order (smallest first), [n] = ~-class number:")
    lines.append("  " + " < ".join(f"{show(b)}[{number[b]}]" for b in chain))
    lines.append(f"~-classes ({len(classes)}):")
    lines += ["  {" + ", ".join(show(b) for b in cls) + "}" for cls in classes]
    return "\n".join(lines)
