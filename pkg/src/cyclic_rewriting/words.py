"""
Words over an ordered alphabet, rotations and cyclic conjugacy.

A word is a plain ``tuple[int, ...]`` of indices into an :class:`Alphabet`.
The empty tuple is the empty word, written ``1``.  Index order is the
declaration order of the alphabet, so comparing tuples compares words
lexicographically in that order.

    >>> sigma = Alphabet(("a", "b", "c", "d", "e", "f"))
    >>> w = sigma.parse("a b c d e f")
    >>> sigma.format(rotate(w, 1))
    'b c d e f a'
    >>> sigma.format(rotate(w, 4))
    'e f a b c d'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ContractError, ParseError

Word = tuple[int, ...]

EMPTY: Word = ()
EMPTY_TOKEN = "1"

_POWER = re.compile(r"^(?P<sym>[^\s^]+)\^(?P<exp>\d+)$")


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        index = {}
        for i, name in enumerate(symbols):
            if not name or any(ch.isspace() for ch in name):
                raise ContractError(f"invalid symbol name {name!r}")
            if name == EMPTY_TOKEN or "^" in name or name in ("->", "~>"):
                raise ContractError(f"reserved symbol name {name!r}")
            if name in index:
                raise ContractError(f"duplicate symbol {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        return self._index[name]

    def parse(self, text: str) -> Word:
        """Parse whitespace-separated symbol names; ``a^3`` repeats a symbol."""
        return self.parse_tokens(text.split())

    def parse_tokens(self, tokens: Iterable[str]) -> Word:
        tokens = list(tokens)
        if tokens == [EMPTY_TOKEN]:
            return EMPTY
        out = []
        for tok in tokens:
            name, count = tok, 1
            m = _POWER.match(tok)
            if m and tok not in self._index:
                name, count = m.group("sym"), int(m.group("exp"))
            if name not in self._index:
                raise ParseError(f"unknown symbol {name!r}")
            out.extend([self._index[name]] * count)
        return tuple(out)

    def format(self, word: Word) -> str:
        if not word:
            return EMPTY_TOKEN
        return " ".join(self.symbols[i] for i in word)

    def words(self, length: int, letters: Iterable[int] | None = None) -> Iterator[Word]:
        """All words of exactly ``length`` over ``letters`` (default: whole alphabet), in lex order."""
        pool = sorted(letters) if letters is not None else range(len(self.symbols))
        pool = tuple(pool)

        def rec(prefix, k):
            if k == 0:
                yield prefix
                return
            for s in pool:
                yield from rec(prefix + (s,), k - 1)

        yield from rec((), length)


def rotate(w: Word, i: int) -> Word:
    """Move the first ``i`` letters of ``w`` to the end."""
    if not 0 <= i < max(1, len(w)):
        raise ContractError(f"rotation {i} out of range for a word of length {len(w)}")
    return w[i:] + w[:i]


def rotations(w: Word) -> Iterator[tuple[int, Word]]:
    """Yield ``(i, rotate(w, i))`` once per distinct rotated word, smallest ``i`` first."""
    seen = set()
    for i in range(max(1, len(w))):
        r = w[i:] + w[:i]
        if r not in seen:
            seen.add(r)
            yield i, r


def cyclic_conjugates(w: Word) -> frozenset[Word]:
    return frozenset(r for _, r in rotations(w))


def least_rotation_index(w: Word) -> int:
    # Two-pointer minimal rotation, O(n).
    n = len(w)
    if n < 2:
        return 0
    i, j, k = 0, 1, 0
    while i < n and j < n and k < n:
        a, b = w[(i + k) % n], w[(j + k) % n]
        if a == b:
            k += 1
            continue
        if a > b:
            i += k + 1
        else:
            j += k + 1
        if i == j:
            j += 1
        k = 0
    return min(i, j)


def canonical_rotation(w: Word) -> Word:
    """Lexicographically least rotation of ``w``; the representative of its conjugacy class."""
    i = least_rotation_index(w)
    return w[i:] + w[:i]


def are_cyclic_conjugates(u: Word, v: Word) -> bool:
    return len(u) == len(v) and canonical_rotation(u) == canonical_rotation(v)


def rotation_between(u: Word, v: Word) -> int | None:
    """Smallest ``i`` with ``rotate(u, i) == v``, or None when ``v`` is not a rotation of ``u``."""
    if len(u) != len(v):
        return None
    for i in range(max(1, len(u))):
        if u[i:] + u[:i] == v:
            return i
    return None


def prefixes(w: Word) -> frozenset[Word]:
    if not w:
        raise ContractError("prefixes of the empty word are undefined")
    return frozenset(w[:k] for k in range(1, len(w) + 1))


def suffixes(w: Word) -> frozenset[Word]:
    if not w:
        raise ContractError("suffixes of the empty word are undefined")
    return frozenset(w[k:] for k in range(len(w)))


def shortlex_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def occurrences(pattern: Word, w: Word) -> Iterator[int]:
    """Start positions of ``pattern`` inside ``w`` (plain, non-cyclic)."""
    m = len(pattern)
    if m == 0:
        return
    first = pattern[0]
    for p in range(len(w) - m + 1):
        if w[p] == first and w[p:p + m] == pattern:
            yield p


def is_subword(pattern: Word, w: Word) -> bool:
    return next(occurrences(pattern, w), None) is not None
