"""Words over indexed letters, with optional involution stars.

Letters are ``x1, x2, ...``; a starred letter is printed with a ``*`` suffix.
Words are immutable and hashable so they can key dictionaries in the scans.
"""

from __future__ import annotations

import re
from collections import Counter
from itertools import product
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple


@dataclass(frozen=True, order=True)
class Letter:
    index: int
    starred: bool = False

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"letter index must be a positive integer, got {self.index!r}")

    def star(self) -> "Letter":
        return Letter(self.index, not self.starred)

    def __str__(self):
        return f"x{self.index}{'*' if self.starred else ''}"


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        if not letters:
            raise ValueError("words are nonempty")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, *indices: int) -> "Word":
        """Plain word from letter indices: ``Word.of(1, 2, 1)`` is x1 x2 x1."""
        return cls(tuple(Letter(i) for i in indices))

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 1:
            raise ValueError("exponent must be positive")
        return Word(self.letters * n)

    def __str__(self):
        return " ".join(str(a) for a in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    @property
    def has_stars(self) -> bool:
        return any(a.starred for a in self.letters)

    def alphabet(self) -> list[int]:
        """Sorted distinct letter indices, stars ignored."""
        return sorted({a.index for a in self.letters})


@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word
    involutory: bool = False

    def __post_init__(self):
        if not self.involutory and (self.lhs.has_stars or self.rhs.has_stars):
            raise ValueError("a plain identity cannot contain starred letters")

    def alphabet(self) -> list[int]:
        return sorted(set(self.lhs.alphabet()) | set(self.rhs.alphabet()))

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


def zimin(n: int) -> Word:
    if n < 1:
        raise ValueError("Zimin words are indexed from 1")
    w = Word.of(1)
    for k in range(2, n + 1):
        w = w * Word.of(k) * w
    return w


def star_of(w: Word) -> Word:
    return Word(tuple(a.star() for a in reversed(w.letters)))


def substitute(w: Word, sigma: Mapping[int, Word]) -> Word:
    """Replace each letter by its image; a starred letter maps to the star of its image."""
    out: list[Letter] = []
    for a in w:
        try:
            image = sigma[a.index]
        except KeyError:
            raise KeyError(f"substitution has no image for x{a.index}") from None
        out.extend(star_of(image).letters if a.starred else image.letters)
    return Word(tuple(out))


class OccurrenceStats(NamedTuple):
    letters: Counter
    pairs: Counter
    first: Letter
    last: Letter


def occurrence_stats(w: Word) -> OccurrenceStats:
    """Letter counts, adjacent two-letter factor counts, and the end letters."""
    letters = Counter(w.letters)
    pairs = Counter(zip(w.letters, w.letters[1:]))
    return OccurrenceStats(letters, pairs, w.letters[0], w.letters[-1])


def is_balanced(identity: Identity) -> bool:
    # Letter keeps its star flag, so starred and plain occurrences count separately.
    return Counter(identity.lhs.letters) == Counter(identity.rhs.letters)


# -- text form ---------------------------------------------------------------

class IdentitySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"x(\d+)(\*?)")


def parse_word(text: str, offset: int = 0) -> Word:
    letters = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise IdentitySyntaxError(f"unexpected character {text[pos]!r}", offset + pos)
        index = int(m.group(1))
        if index < 1:
            raise IdentitySyntaxError("letter indices start at 1", offset + pos)
        letters.append(Letter(index, bool(m.group(2))))
        pos = m.end()
    if not letters:
        raise IdentitySyntaxError("empty word", offset + len(text))
    return Word(tuple(letters))


def parse_identity(text: str) -> Identity:
    if text.count("=") != 1:
        raise IdentitySyntaxError("expected exactly one '='", text.find("=") if "=" in text else len(text))
    split = text.index("=")
    left, right = text[:split], text[split + 1:]
    if not left.strip():
        raise IdentitySyntaxError("empty left side", 0)
    if not right.strip():
        raise IdentitySyntaxError("empty right side", split + 1)
    lhs = parse_word(left)
    rhs = parse_word(right, split + 1)
    return Identity(lhs, rhs, involutory=lhs.has_stars or rhs.has_stars)


def format_identity(identity: Identity) -> str:
    return str(identity)


def words_over(symbols: Iterable[Letter], length: int) -> Iterator[Word]:
    symbols = tuple(symbols)
    for combo in product(symbols, repeat=length):
        yield Word(combo)
