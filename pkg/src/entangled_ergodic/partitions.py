"""Pair-partitions of ``{1, ..., 2k}`` into ``k`` two-element classes.

A partition is stored as its word ``(alpha(1), ..., alpha(2k))`` with
classes relabelled in order of first appearance, so two partitions are
equal exactly when their words are.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import KTooLarge, NotAPairPartition

MAX_ENUMERATION_K = 5


def _canonical(word: Sequence[int]) -> tuple[int, ...]:
    labels: dict[int, int] = {}
    out = []
    for w in word:
        if w not in labels:
            labels[w] = len(labels) + 1
        out.append(labels[w])
    return tuple(out)


@dataclass(frozen=True)
class PairPartition:
    word: tuple[int, ...]

    def __post_init__(self):
        counts = Counter(self.word)
        bad = {c: n for c, n in counts.items() if n != 2}
        if bad:
            raise NotAPairPartition(
                f"classes {sorted(bad)} do not have exactly two members in {list(self.word)}")
        if tuple(self.word) != _canonical(self.word):
            object.__setattr__(self, "word", _canonical(self.word))
        else:
            object.__setattr__(self, "word", tuple(self.word))

    @property
    def k(self) -> int:
        return len(self.word) // 2

    def __len__(self):
        return len(self.word)

    def positions(self, cls: int) -> tuple[int, int]:
        """1-based positions of the two members of class ``cls``."""
        pos = tuple(i + 1 for i, w in enumerate(self.word) if w == cls)
        if len(pos) != 2:
            raise KeyError(cls)
        return pos

    def pairs(self) -> list[tuple[int, int]]:
        """0-based position pairs, one per class in label order."""
        return [tuple(p - 1 for p in self.positions(j)) for j in range(1, self.k + 1)]

    def __str__(self):
        return "[" + ",".join(map(str, self.word)) + "]"


def from_word(word: Sequence[int]) -> PairPartition:
    """Validate and canonically relabel ``word``.

    Raises:
        NotAPairPartition: some label does not occur exactly twice.
    """
    try:
        word = tuple(int(w) for w in word)
    except (TypeError, ValueError) as exc:
        raise NotAPairPartition(f"partition word must be integers: {word!r}") from exc
    return PairPartition(word)


def sign_assignment(p: PairPartition) -> list[tuple[int, bool]]:
    """For each position, its class and whether it carries the conjugate phase.

    The first occurrence of a class gets ``z_j``, the second ``conj(z_j)``.
    """
    seen: set[int] = set()
    out = []
    for w in p.word:
        out.append((w, w in seen))
        seen.add(w)
    return out


def reduce(beta: PairPartition, cls: int | None = None):
    """Delete one class from ``beta``.

    Args:
        beta: partition with ``k + 1 >= 1`` classes.
        cls: the class to delete; defaults to ``k + 1``, the class that
            appears last in canonical order.

    Returns:
        ``(k_beta, (p1, p2), alpha_beta)`` with 1-based positions: ``k_beta``
        is the first position of the deleted class, ``(p1, p2)`` both of its
        positions, and ``alpha_beta`` the remaining canonical partition.
    """
    if beta.k == 0:
        raise ValueError("cannot reduce the empty partition")
    if cls is None:
        cls = beta.k
    p1, p2 = beta.positions(cls)
    rest = [w for w in beta.word if w != cls]
    return p1, (p1, p2), PairPartition(tuple(rest))


def reinsert(alpha: PairPartition, pair: tuple[int, int]) -> PairPartition:
    """Inverse of :func:`reduce`: put a new class back at 1-based positions ``pair``."""
    p1, p2 = pair
    word = list(alpha.word)
    word.insert(p1 - 1, alpha.k + 1)
    word.insert(p2 - 1, alpha.k + 1)
    return PairPartition(tuple(word))


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def enumerate_pair_partitions(k: int) -> list[PairPartition]:
    """All ``(2k-1)!!`` canonical pair-partitions of ``2k`` positions."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > MAX_ENUMERATION_K:
        raise KTooLarge(f"k={k} exceeds the enumeration limit {MAX_ENUMERATION_K}")
    out: list[PairPartition] = []

    def extend(word: list[int], next_label: int):
        try:
            first = word.index(0)
        except ValueError:
            out.append(PairPartition(tuple(word)))
            return
        word[first] = next_label
        for j in range(first + 1, len(word)):
            if word[j] == 0:
                word[j] = next_label
                extend(word, next_label + 1)
                word[j] = 0
        word[first] = 0

    extend([0] * (2 * k), 1)
    return out


def random_pair_partition(k: int, rng) -> PairPartition:
    """Uniformly random pair-partition of ``2k`` positions."""
    positions = list(rng.permutation(2 * k))
    word = [0] * (2 * k)
    for j in range(k):
        word[positions[2 * j]] = j + 1
        word[positions[2 * j + 1]] = j + 1
    return PairPartition(tuple(word))
