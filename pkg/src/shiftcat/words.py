"""Alphabets and finite words.

Words are immutable sequences of symbols drawn from a fixed alphabet.
Symbols are opaque tokens ordered by their position in the alphabet;
all lexicographic comparisons go through that order, never through
Python string ordering, so multi-character symbols (higher-block
alphabets) behave the same as single letters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of distinct symbols."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def is_single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


@dataclass(frozen=True)
class Word:
    """A finite, possibly empty, sequence of symbols over an alphabet."""

    alphabet: Alphabet
    letters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for x in self.letters:
            if x not in self.alphabet:
                raise ValueError(f"letter {x!r} not in alphabet")

    @staticmethod
    def from_str(alphabet: Alphabet, text: str) -> "Word":
        """Parse a word written as one character per symbol."""
        if not alphabet.is_single_char():
            raise ValueError("from_str needs a single-character alphabet")
        return Word(alphabet, tuple(text))

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.letters[i])
        return self.letters[i]

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            raise ValueError("negative word power")
        return Word(self.alphabet, self.letters * n)

    def lex_key(self) -> tuple[int, ...]:
        idx = {s: i for i, s in enumerate(self.alphabet.symbols)}
        return tuple(idx[x] for x in self.letters)

    def as_str(self) -> str:
        return "".join(self.letters)

    def __str__(self) -> str:
        return self.as_str() if self.letters else "ε"


def empty_word(alphabet: Alphabet) -> Word:
    return Word(alphabet, ())


def prefix_k(u: Word, k: int) -> Word:
    """First k letters of u; all of u when k exceeds its length."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= len(u):
        return u
    return Word(u.alphabet, u.letters[:k])


def suffix_k(u: Word, k: int) -> Word:
    """Last k letters of u; all of u when k exceeds its length."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Word(u.alphabet, ())
    if k >= len(u):
        return u
    return Word(u.alphabet, u.letters[-k:])


def factors_up_to(u: Word, k: int) -> set[Word]:
    """All nonempty factors of u of length at most k."""
    if k < 1:
        raise ValueError("k must be positive")
    out: set[Word] = set()
    n = len(u)
    for i in range(n):
        for j in range(i + 1, min(i + k, n) + 1):
            out.add(Word(u.alphabet, u.letters[i:j]))
    return out


def is_primitive(v: Word) -> bool:
    """True iff v is not a proper power of a shorter word."""
    if len(v) == 0:
        raise ValueError("primitivity is undefined for the empty word")
    root, _ = primitive_root(v)
    return len(root) == len(v)


def primitive_root(w: Word) -> tuple[Word, int]:
    """The unique (root, exponent) with w = root**exponent and root primitive."""
    n = len(w)
    if n == 0:
        raise ValueError("the empty word has no primitive root")
    for d in range(1, n + 1):
        if n % d != 0:
            continue
        cand = Word(w.alphabet, w.letters[:d])
        if cand.letters * (n // d) == w.letters:
            return cand, n // d
    raise AssertionError("unreachable: w is always a power of itself")


def conjugates(v: Word) -> list[Word]:
    """All cyclic rotations of v in rotation order, first occurrence kept."""
    if len(v) == 0:
        raise ValueError("conjugates are undefined for the empty word")
    seen: list[Word] = []
    for i in range(len(v)):
        rot = Word(v.alphabet, v.letters[i:] + v.letters[:i])
        if rot not in seen:
            seen.append(rot)
    return seen


def least_rotation(v: Word) -> Word:
    """Lexicographically least cyclic rotation (necklace representative)."""
    if len(v) == 0:
        raise ValueError("least rotation is undefined for the empty word")
    return min(conjugates(v), key=Word.lex_key)


def check_primitivity_inclusion(v: Word, bound: int, power: int = 2) -> list[Word]:
    """Violations of  v* · v^power · A^(<|v|)  ∩  A* · v^power  ⊆  v⁺.

    Enumerates every word of length ≤ bound in the left-hand set and
    returns, sorted, those that are not a positive power of v.  With the
    default power=2 the result is expected empty for primitive v; power=1
    is the weaker variant that does admit witnesses.
    """
    if not is_primitive(v):
        raise ValueError("v must be primitive")
    if power < 1:
        raise ValueError("power must be positive")
    anchor = v ** power
    violations: set[Word] = set()
    j = 0
    while len(v) * j + len(anchor) <= bound:
        head = (v ** j) * anchor
        for slen in range(len(v)):
            if len(head) + slen > bound:
                break
            for tail in itertools.product(v.alphabet.symbols, repeat=slen):
                w = Word(v.alphabet, head.letters + tail)
                # membership in A* · v^power: w must end with the anchor
                if w.letters[len(w) - len(anchor):] != anchor.letters:
                    continue
                if len(w) % len(v) != 0 or (v ** (len(w) // len(v))).letters != w.letters:
                    violations.add(w)
        j += 1
    return sorted(violations, key=Word.lex_key)


def word_to_json(u: Word) -> str | list[str]:
    """Plain string for single-character alphabets, array of tokens otherwise."""
    if u.alphabet.is_single_char():
        return "".join(u.letters)
    return list(u.letters)


def word_from_json(alphabet: Alphabet, data: str | list[str]) -> Word:
    if isinstance(data, str):
        return Word.from_str(alphabet, data)
    return Word(alphabet, tuple(data))
