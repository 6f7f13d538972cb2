"""Symbolic algebra of reflexive processes.

Values are polynomials over a free non-commutative monoid of words.  Each
word is an ordered run of atoms: the leftmost atom is a root process, every
atom to its right is one further level of reflection (``Txy`` reads "y's
image of x's image of T").  Coefficients are Boolean, so a polynomial is
just a set of words: addition is set union, multiplication concatenates
every pair of words, and the empty word acts as the unit ``1``.

All values are immutable; every operation returns a new value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union


class ExpressionError(ValueError):
    """Malformed expression text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_ATOM_RE = re.compile(r"[A-Za-z][0-9]*")


@dataclass(frozen=True, order=False)
class Atom:
    """One symbol: a single letter plus an optional numeric suffix.

    ``Atom("a")`` and ``Atom("a", 1)`` are distinct; an absent index is not
    index 0.
    """

    letter: str
    index: int | None = None

    def __post_init__(self):
        if len(self.letter) != 1 or not self.letter.isalpha():
            raise ValueError(f"atom letter must be a single alphabetic character, got {self.letter!r}")
        if self.index is not None and self.index < 0:
            raise ValueError(f"atom index must be non-negative, got {self.index}")

    @property
    def sort_key(self) -> tuple[str, int]:
        # absent index sorts before any explicit index
        return (self.letter, -1 if self.index is None else self.index)

    def __str__(self) -> str:
        return self.letter if self.index is None else f"{self.letter}{self.index}"

    def __repr__(self) -> str:
        return f"Atom({str(self)!r})"


def atom(text: str) -> Atom:
    """Parse a single atom like ``"T"`` or ``"a12"``."""
    m = _ATOM_RE.fullmatch(text)
    if m is None:
        raise ValueError(f"not an atom: {text!r}")
    return Atom(text[0], int(text[1:]) if len(text) > 1 else None)


@dataclass(frozen=True)
class Word:
    """An ordered run of atoms; the empty run is the unit word, printed "1"."""

    atoms: tuple[Atom, ...] = ()

    @staticmethod
    def of(*factors: Union[Atom, str]) -> "Word":
        """Build a word from atoms and/or strings.

        String factors are tokenized letter-plus-digits (``"Ta12x"`` gives
        three atoms); ``"1"`` factors are unit placeholders and cancel.
        """
        out: list[Atom] = []
        for f in factors:
            if isinstance(f, Atom):
                out.append(f)
                continue
            pos = 0
            while pos < len(f):
                if f[pos] == "1" and (pos == 0 or not f[pos - 1].isalpha()):
                    pos += 1  # standalone unit placeholder
                    continue
                m = _ATOM_RE.match(f, pos)
                if m is None:
                    raise ValueError(f"not a word factor: {f!r}")
                out.append(atom(m.group()))
                pos = m.end()
        return Word(tuple(out))

    @property
    def is_unit(self) -> bool:
        return not self.atoms

    @property
    def sort_key(self) -> tuple:
        return (len(self.atoms), tuple(a.sort_key for a in self.atoms))

    def concat(self, other: "Word") -> "Word":
        return Word(self.atoms + other.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return "".join(str(a) for a in self.atoms) if self.atoms else "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


UNIT_WORD = Word()


def reflection_depth(w: Word) -> int:
    """Number of reflection levels above the root atom (``Txy`` has 2)."""
    if w.is_unit:
        raise ValueError("the unit word has no root process")
    return len(w.atoms) - 1


@dataclass(frozen=True)
class Polynomial:
    """A set of words under Boolean coefficients.

    The empty set is the zero polynomial.  Instances are canonical by
    construction: duplicates merge by set semantics and unit placeholders
    never survive word construction.
    """

    words: frozenset[Word] = frozenset()

    @staticmethod
    def of(words: Iterable[Word]) -> "Polynomial":
        return Polynomial(frozenset(words))

    @staticmethod
    def unit() -> "Polynomial":
        return Polynomial(frozenset([UNIT_WORD]))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @property
    def is_zero(self) -> bool:
        return not self.words

    def sorted_words(self) -> list[Word]:
        """Words by atom count, then lexicographically by atom sequence."""
        return sorted(self.words, key=lambda w: w.sort_key)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.words | other.words)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(frozenset(a.concat(b) for a in self.words for b in other.words))

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        result = Polynomial.unit()  # w^0 = 1 for every w, zero included
        for _ in range(n):
            result = result * self
        return result

    def contains(self, w: Word) -> bool:
        return w in self.words

    def __contains__(self, w: Word) -> bool:
        return self.contains(w)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.sorted_words())

    def __len__(self) -> int:
        return len(self.words)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(str(w) for w in self.sorted_words())

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


ZERO = Polynomial.zero()
UNIT = Polynomial.unit()


def normalize(p: Polynomial | Iterable[Word]) -> Polynomial:
    """Canonical representative: duplicates merged, unit placeholders gone.

    Accepts any iterable of words for convenience; on a ``Polynomial`` this
    is the identity (values are canonical by construction), kept so callers
    can state the idempotence contract explicitly.
    """
    if isinstance(p, Polynomial):
        return Polynomial(p.words)
    return Polynomial.of(p)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def power(p: Polynomial, n: int) -> Polynomial:
    return p**n


def equals(p: Polynomial, q: Polynomial) -> bool:
    return normalize(p).words == normalize(q).words


def contains_word(p: Polynomial, w: Word) -> bool:
    return w in normalize(p)


def apply_awareness(omega: Polynomial, observers: Sequence[Atom]) -> Polynomial:
    """One awareness step: multiply by (1 + sum of observer atoms).

    Every observer gains an image of every word already in ``omega``.
    """
    if not observers:
        raise ValueError("awareness step requires at least one observer")
    step = UNIT + Polynomial.of(Word((a,)) for a in observers)
    return omega * step


def to_canonical_string(p: Polynomial) -> str:
    return str(p)


# ---------------------------------------------------------------------------
# Expression parsing
#
#   expr    := product ('+' product)*
#   product := primary (('*')? primary)* ('^' nat)?
#   primary := word | '(' expr ')'
#   word    := '1' | atom+
#   atom    := letter digit*
#
# Whitespace separates tokens and is otherwise ignored; digits bind to an
# immediately preceding letter ("T1 1" is the atom T1 times the unit, while
# "T11" is the single atom T11).  Juxtaposition multiplies.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<atom>[A-Za-z][0-9]*)|(?P<number>[0-9]+)|(?P<op>[+*^()]))")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind  # 'atom' | 'number' | one of '+ * ^ ( )' | 'end'
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ExpressionError(f"unexpected character {text[bad_at]!r}", bad_at)
        if m.lastgroup == "atom":
            tokens.append(_Token("atom", m.group("atom"), m.start("atom")))
        elif m.lastgroup == "number":
            tokens.append(_Token("number", m.group("number"), m.start("number")))
        else:
            tokens.append(_Token(m.group("op"), m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        result = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionError(f"unexpected {tok.text!r}", tok.pos)
        return result

    def expr(self) -> Polynomial:
        result = self.product()
        while self.peek().kind == "+":
            self.advance()
            result = result + self.product()
        return result

    def product(self) -> Polynomial:
        result = self.primary()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.advance()
                result = result * self.primary()
            elif tok.kind in ("atom", "(") or (tok.kind == "number" and tok.text in ("0", "1")):
                result = result * self.primary()
            else:
                break
        if self.peek().kind == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "number":
                raise ExpressionError("exponent must be a non-negative integer", tok.pos)
            self.advance()
            result = result ** int(tok.text)
        return result

    def primary(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            closing = self.peek()
            if closing.kind != ")":
                raise ExpressionError("expected ')'", closing.pos)
            self.advance()
            return inner
        if tok.kind == "number":
            if tok.text == "1":
                self.advance()
                return UNIT
            if tok.text == "0":
                # zero literal, so canonical strings of zero round-trip
                self.advance()
                return ZERO
            raise ExpressionError(f"only the literals '0' and '1' are allowed, got {tok.text!r}", tok.pos)
        if tok.kind == "atom":
            atoms: list[Atom] = []
            while self.peek().kind == "atom":
                atoms.append(atom(self.advance().text))
            return Polynomial.of([Word(tuple(atoms))])
        raise ExpressionError(f"expected a word or '(', got {tok.text or 'end of input'!r}", tok.pos)


def parse(text: str) -> Polynomial:
    """Parse expression text into a normalized polynomial.

    Round-trips with ``to_canonical_string``:
    ``parse(to_canonical_string(p)) == p`` for every polynomial ``p``.
    """
    return _Parser(text).parse()


parse_expression = parse
