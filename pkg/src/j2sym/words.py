"""Words over a mixed alphabet of control symbols and symmetric-generator letters.

Text grammar, shared by every data file the package ships::

    word     := factor*
    factor   := atom ('^' exponent)?
    atom     := NAME | '(' word ')'
    NAME     := a letter optionally followed by digits, e.g. x, y, t13
    exponent := optional '-' followed by digits

``*`` and whitespace separate factors and are otherwise ignored.  ``e`` is
reserved for the empty word.  Symbols of the form ``t<k>`` are involutory
symmetric generators: they are their own inverses, and any sign on them is
normalised away at construction time.
"""

from __future__ import annotations

import re

from .perm import Permutation

__all__ = [
    "Word",
    "WordError",
    "expand_progenitor_relator",
    "transversal_word",
    "word_from_indices",
]

_T_SYMBOL = re.compile(r"t[0-9]+\Z")
_NAME = re.compile(r"[A-Za-z][0-9]*")
_TOKEN = re.compile(
    r"(?P<ws>[\s*]+)|(?P<name>[A-Za-z][0-9]*)|(?P<pow>\^-?[0-9]+)|(?P<lp>\()|(?P<rp>\))"
)


class WordError(ValueError):
    pass


def _is_symmetric(sym: str) -> bool:
    return _T_SYMBOL.match(sym) is not None


class Word:
    """An unreduced sequence of signed letters ``(symbol, sign)``."""

    __slots__ = ("letters",)

    def __init__(self, letters=()) -> None:
        norm = []
        for sym, sign in letters:
            if sign not in (1, -1):
                raise WordError(f"bad sign {sign!r} on letter {sym!r}")
            if _is_symmetric(sym):
                sign = 1
            norm.append((sym, sign))
        self.letters = tuple(norm)

    @classmethod
    def parse(cls, text: str) -> "Word":
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise WordError(f"cannot tokenise {text!r} at position {pos}")
            pos = m.end()
            if m.lastgroup == "ws":
                continue
            tokens.append((m.lastgroup, m.group()))

        def parse_seq(i: int, depth: int) -> tuple[list, int]:
            letters: list = []
            while i < len(tokens):
                kind, val = tokens[i]
                if kind == "rp":
                    if depth == 0:
                        raise WordError(f"unbalanced ')' in {text!r}")
                    return letters, i
                if kind == "name":
                    # "e" is reserved for the empty word
                    atom = [] if val == "e" else [(val, 1)]
                    i += 1
                elif kind == "lp":
                    atom, i = parse_seq(i + 1, depth + 1)
                    if i >= len(tokens) or tokens[i][0] != "rp":
                        raise WordError(f"unbalanced '(' in {text!r}")
                    i += 1
                else:
                    raise WordError(f"unexpected {val!r} in {text!r}")
                if i < len(tokens) and tokens[i][0] == "pow":
                    exp = int(tokens[i][1][1:])
                    i += 1
                else:
                    exp = 1
                letters.extend(_repeat(atom, exp))
            return letters, i

        letters, i = parse_seq(0, 0)
        if i != len(tokens):
            raise WordError(f"trailing input in {text!r}")
        return cls(letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word([(sym, -sign) for sym, sign in reversed(self.letters)])

    def __pow__(self, n: int) -> "Word":
        return Word(_repeat(list(self.letters), n))

    def __len__(self) -> int:
        return len(self.letters)

    def free_reduce(self, *, involutions: bool = True) -> "Word":
        """Cancel adjacent inverse pairs; with ``involutions`` (the default),
        adjacent equal symmetric generators cancel too, matching the
        progenitor where every ``t<k>`` squares to the identity.  Pass
        ``involutions=False`` for plain free-group reduction, as used for
        presentation relators (where ``t1^2`` must survive as a relator)."""
        stack: list[tuple[str, int]] = []
        for sym, sign in self.letters:
            if stack and stack[-1][0] == sym and (
                (involutions and _is_symmetric(sym)) or stack[-1][1] == -sign
            ):
                stack.pop()
            else:
                stack.append((sym, sign))
        return Word(stack)

    def is_reduced(self) -> bool:
        return self.free_reduce().letters == self.letters

    def symbols(self) -> set[str]:
        return {sym for sym, _ in self.letters}

    def evaluate(
        self, assignment: dict[str, Permutation], degree: int | None = None
    ) -> Permutation:
        """Left-to-right product of the assigned permutations."""
        if degree is None:
            if assignment:
                degree = next(iter(assignment.values())).degree
            else:
                raise WordError("degree required to evaluate with no assignment")
        acc = Permutation.identity(degree)
        inverses: dict[str, Permutation] = {}
        for sym, sign in self.letters:
            try:
                p = assignment[sym]
            except KeyError:
                raise WordError(f"unassigned symbol {sym!r}") from None
            if sign < 0:
                if sym not in inverses:
                    inverses[sym] = p.inverse()
                p = inverses[sym]
            acc = acc * p
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        parts = []
        i = 0
        while i < len(self.letters):
            sym, sign = self.letters[i]
            run = 1
            while (
                i + run < len(self.letters) and self.letters[i + run] == (sym, sign)
            ):
                run += 1
            exp = run * sign
            parts.append(sym if exp == 1 else f"{sym}^{exp}")
            i += run
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word.parse({str(self)!r})"


def _repeat(letters: list, exp: int) -> list:
    if exp >= 0:
        return letters * exp
    inv = [(sym, -sign) for sym, sign in reversed(letters)]
    return inv * (-exp)


EMPTY = Word()


def word_from_indices(indices, names) -> Word:
    """Convert a signed 1-based generator-index tuple into a :class:`Word`."""
    letters = []
    for i in indices:
        if i > 0:
            letters.append((names[i - 1], 1))
        else:
            letters.append((names[-i - 1], -1))
    return Word(letters)


def transversal_word(group, point: int, names, seed: int = 1) -> Word:
    """Deterministic word in ``names`` mapping ``seed`` to ``point``.

    Words come from the breadth-first orbit of ``seed`` with the group's
    generators taken in order, so the result is reproducible.
    """
    words = group.orbit_words(seed)
    if point not in words:
        raise ValueError(f"point {point} is not in the orbit of {seed}")
    return word_from_indices(words[point], names)


def expand_progenitor_relator(
    control: Word, letter: int, exponent: int, assignment: dict[str, Permutation]
) -> tuple[Word, tuple[int, ...]]:
    """Rewrite ``(w t_i)^k`` as ``w^k  t_{i^(w^(k-1))} ... t_{i^w} t_i``.

    Conjugation of a symmetric generator by a control element moves its
    index: ``t_i ^ g = t_{i^g}``.  Returns the control part as a word and the
    letter indices in the order they appear.
    """
    pi = control.evaluate(assignment)
    seq = [letter]
    for _ in range(exponent - 1):
        seq.append(pi[seq[-1]])
    part = (control ** exponent).free_reduce()
    return part, tuple(reversed(seq))
