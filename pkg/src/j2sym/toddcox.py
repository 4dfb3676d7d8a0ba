"""Todd-Coxeter coset enumeration over a subgroup of a finitely presented group.

The table is stored column-wise as flat integer lists, one column per
generator and per inverse; a generator with a length-2 relator ``s s`` is
involutory and shares its inverse column.  Coset 0 is a dummy so the live
cosets are 1-based, and 0 marks an undefined entry.  Coincidences are merged
with a path-compressed union-find keeping the smaller index, so coset 1 (the
subgroup) always survives.

Two strategies are implemented: HLT with periodic lookahead (the default,
good for presentations with many short relators) and Felsch (deduction
driven, behind a flag).  Both produce the same table after standardisation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .perm import Permutation
from .presentation import Presentation
from .words import Word

__all__ = [
    "CosetTable",
    "EnumerationStats",
    "LimitExceeded",
    "enumerate_cosets",
    "standardize",
    "coset_permutations",
]


@dataclass
class EnumerationStats:
    definitions: int = 0
    coincidences: int = 0
    max_live: int = 0
    cosets: int = 0
    strategy: str = "hlt"
    complete: bool = False

    def as_dict(self) -> dict:
        return {
            "definitions": self.definitions,
            "coincidences": self.coincidences,
            "max_live": self.max_live,
            "cosets": self.cosets,
            "strategy": self.strategy,
            "complete": self.complete,
        }


class LimitExceeded(Exception):
    """The definition limit was hit before the table closed: undecided."""

    def __init__(self, limit: int, stats: EnumerationStats) -> None:
        super().__init__(f"coset definition limit {limit} exceeded")
        self.limit = limit
        self.stats = stats


class _Alphabet:
    """Column layout for a presentation's generators."""

    __slots__ = ("symbols", "ncols", "col_of", "inv_col", "col_label")

    def __init__(self, presentation: Presentation) -> None:
        involutory = set()
        for rel in presentation.relators:
            ls = rel.letters
            if len(ls) == 2 and ls[0] == ls[1]:
                involutory.add(ls[0][0])
        self.symbols = tuple(presentation.generators)
        self.col_of: dict[tuple[str, int], int] = {}
        self.inv_col: list[int] = []
        self.col_label: list[str] = []
        for sym in self.symbols:
            c = len(self.inv_col)
            self.col_of[(sym, 1)] = c
            if sym in involutory:
                self.col_of[(sym, -1)] = c
                self.inv_col.append(c)
                self.col_label.append(sym)
            else:
                self.col_of[(sym, -1)] = c + 1
                self.inv_col.extend([c + 1, c])
                self.col_label.extend([sym, sym + "^-1"])
        self.ncols = len(self.inv_col)

    def word_cols(self, word: Word) -> tuple[int, ...]:
        return tuple(self.col_of[letter] for letter in word.letters)


class CosetTable:
    """The Todd-Coxeter state; complete and consistent after enumeration."""

    def __init__(self, presentation: Presentation, subgroup: list[Word],
                 limit: int = 10**6, trace=None) -> None:
        for w in subgroup:
            missing = w.symbols() - set(presentation.generators)
            if missing:
                raise ValueError(f"subgroup word uses undeclared symbols {missing}")
        self.presentation = presentation
        self.subgroup = list(subgroup)
        self.alphabet = _Alphabet(presentation)
        self.rel_cols = [self.alphabet.word_cols(r) for r in presentation.relators]
        self.sub_cols = [self.alphabet.word_cols(w) for w in subgroup]
        self.cols: list[list[int]] = [[0, 0] for _ in range(self.alphabet.ncols)]
        self.p = [0, 1]
        self.n = 1
        self.live = 1
        self.limit = limit
        self.trace = trace
        self.stats = EnumerationStats(max_live=1)
        self._deductions: list[tuple[int, int]] = []
        self._track_deductions = False

    # -- basic bookkeeping -------------------------------------------------

    def rep(self, a: int) -> int:
        p = self.p
        r = a
        while p[r] != r:
            r = p[r]
        while p[a] != r:
            p[a], a = r, p[a]
        return r

    def is_live(self, a: int) -> bool:
        return self.p[a] == a

    def live_cosets(self) -> list[int]:
        return [a for a in range(1, self.n + 1) if self.p[a] == a]

    @property
    def coset_count(self) -> int:
        return self.live

    def entry(self, coset: int, sym: str, sign: int = 1) -> int:
        return self.cols[self.alphabet.col_of[(sym, sign)]][coset]

    def _define(self, alpha: int, c: int) -> int:
        if self.stats.definitions >= self.limit:
            self.stats.cosets = self.live
            raise LimitExceeded(self.limit, self.stats)
        self.stats.definitions += 1
        self.n += 1
        beta = self.n
        for col in self.cols:
            col.append(0)
        self.p.append(beta)
        self.cols[c][alpha] = beta
        self.cols[self.alphabet.inv_col[c]][beta] = alpha
        self.live += 1
        if self.live > self.stats.max_live:
            self.stats.max_live = self.live
        if self.trace is not None:
            self.trace(f"DEF {alpha} {self.alphabet.col_label[c]} -> {beta}")
        if self._track_deductions:
            self._deductions.append((alpha, c))
        return beta

    # -- coincidences --------------------------------------------------=---

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        ra, rb = self.rep(a), self.rep(b)
        if ra == rb:
            return
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.p[hi] = lo
        self.live -= 1
        self.stats.coincidences += 1
        if self.trace is not None:
            self.trace(f"COI {hi}={lo}")
        queue.append(hi)

    def _coincide(self, a: int, b: int, rng: random.Random | None = None) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        cols = self.cols
        inv = self.alphabet.inv_col
        while queue:
            if rng is None:
                gamma = queue.pop(0)
            else:
                gamma = queue.pop(rng.randrange(len(queue)))
            for c in range(self.alphabet.ncols):
                delta = cols[c][gamma]
                if delta == 0:
                    continue
                ic = inv[c]
                cols[ic][delta] = 0
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if cols[c][mu]:
                    self._merge(nu, cols[c][mu], queue)
                elif cols[ic][nu]:
                    self._merge(mu, cols[ic][nu], queue)
                else:
                    cols[c][mu] = nu
                    cols[ic][nu] = mu
                    if self._track_deductions:
                        self._deductions.append((mu, c))

    # -- scanning ------------------------------------------------------=---

    def _scan(self, alpha: int, rel: tuple[int, ...], fill: bool,
              rng: random.Random | None = None) -> None:
        cols = self.cols
        inv = self.alphabet.inv_col
        f = alpha
        i = 0
        b = alpha
        j = len(rel) - 1
        while True:
            while i <= j:
                nxt = cols[rel[i]][f]
                if not nxt:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self._coincide(f, b, rng)
                return
            while j >= i:
                prv = cols[inv[rel[j]]][b]
                if not prv:
                    break
                b = prv
                j -= 1
            if j < i:
                self._coincide(f, b, rng)
                return
            if j == i:
                c = rel[i]
                cols[c][f] = b
                cols[inv[c]][b] = f
                if self._track_deductions:
                    self._deductions.append((f, c))
                return
            if not fill:
                return
            self._define(f, rel[i])

    def _lookahead(self, rng: random.Random | None = None) -> None:
        for beta in range(1, self.n + 1):
            if self.p[beta] != beta:
                continue
            for rel in self.rel_cols:
                self._scan(beta, rel, fill=False, rng=rng)
                if self.p[beta] != beta:
                    break

    def check(self) -> bool:
        """True iff every relator closes at every live coset, the subgroup
        words fix coset 1, and the table is fully defined on live rows."""
        one = self.rep(1)
        for w in self.sub_cols:
            cur = one
            for c in w:
                cur = self.cols[c][cur]
                if cur == 0:
                    return False
            if cur != one:
                return False
        for alpha in range(1, self.n + 1):
            if self.p[alpha] != alpha:
                continue
            for c in range(self.alphabet.ncols):
                if self.cols[c][alpha] == 0:
                    return False
            for rel in self.rel_cols:
                cur = alpha
                for c in rel:
                    cur = self.cols[c][cur]
                if cur != alpha:
                    return False
        return True


def _enumerate_hlt(table: CosetTable, rng, lookahead_interval: int) -> None:
    for w in table.sub_cols:
        table._scan(1, w, fill=True, rng=rng)
    next_lookahead = lookahead_interval
    alpha = 1
    while alpha <= table.n:
        if table.p[alpha] == alpha:
            for rel in table.rel_cols:
                table._scan(alpha, rel, fill=True, rng=rng)
                if table.p[alpha] != alpha:
                    break
            if table.p[alpha] == alpha:
                for c in range(table.alphabet.ncols):
                    if table.cols[c][alpha] == 0:
                        table._define(alpha, c)
            if table.stats.definitions >= next_lookahead:
                table._lookahead(rng)
                next_lookahead = table.stats.definitions + lookahead_interval
        alpha += 1


def _enumerate_felsch(table: CosetTable, rng, max_stack: int = 5000) -> None:
    # deduction words: all cyclic rotations of every relator and its inverse,
    # grouped by leading column
    table._track_deductions = True
    buckets: list[set[tuple[int, ...]]] = [set() for _ in range(table.alphabet.ncols)]
    inv = table.alphabet.inv_col

    def add_rotations(rel: tuple[int, ...]) -> None:
        for shift in range(len(rel)):
            rot = rel[shift:] + rel[:shift]
            buckets[rot[0]].add(rot)

    for rel in table.rel_cols:
        add_rotations(rel)
        add_rotations(tuple(inv[c] for c in reversed(rel)))
    bucket_lists = [sorted(b) for b in buckets]

    def process_deductions() -> None:
        while table._deductions:
            if len(table._deductions) > max_stack:
                table._deductions.clear()
                table._lookahead(rng)
                continue
            alpha, c = table._deductions.pop()
            if table.p[alpha] == alpha:
                for w in bucket_lists[c]:
                    table._scan(alpha, w, fill=False, rng=rng)
                    if table.p[alpha] != alpha:
                        break
            beta = table.cols[c][alpha] if table.p[alpha] == alpha else 0
            if beta and table.p[beta] == beta:
                for w in bucket_lists[inv[c]]:
                    table._scan(beta, w, fill=False, rng=rng)
                    if table.p[beta] != beta:
                        break

    for w in table.sub_cols:
        table._scan(1, w, fill=True, rng=rng)
    process_deductions()
    alpha = 1
    while alpha <= table.n:
        if table.p[alpha] == alpha:
            for c in range(table.alphabet.ncols):
                if table.p[alpha] != alpha:
                    break
                if table.cols[c][alpha] == 0:
                    table._define(alpha, c)
                    process_deductions()
        alpha += 1


def enumerate_cosets(
    presentation: Presentation,
    subgroup: list[Word],
    *,
    strategy: str = "hlt",
    limit: int = 10**6,
    queue_seed: int | None = None,
    trace=None,
    lookahead_interval: int = 200_000,
) -> CosetTable:
    """Enumerate the cosets of ``<subgroup>`` in the presented group.

    Returns the complete (unstandardised) table; raises
    :class:`LimitExceeded` when more than ``limit`` definitions are needed.
    A collapse to a single coset is a valid result, not an error.
    ``queue_seed`` randomises the coincidence processing order (for testing
    confluence); the final standardised table must not depend on it.
    """
    table = CosetTable(presentation, subgroup, limit=limit, trace=trace)
    rng = random.Random(queue_seed) if queue_seed is not None else None
    if strategy == "hlt":
        _enumerate_hlt(table, rng, lookahead_interval)
    elif strategy == "felsch":
        _enumerate_felsch(table, rng)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    table._deductions.clear()
    table.stats.cosets = table.live
    table.stats.strategy = strategy
    table.stats.complete = True
    return table


def standardize(table: CosetTable) -> CosetTable:
    """Renumber the cosets breadth-first from coset 1, columns in order.

    The result is canonical: any complete table for the same presentation
    and subgroup standardises to the same table, whatever strategy or
    processing order produced it.  Standardising twice is a no-op.
    """
    if not table.stats.complete:
        raise ValueError("cannot standardize an incomplete table")
    ncols = table.alphabet.ncols
    start = table.rep(1)
    new_of_old = {start: 1}
    order = [start]
    qi = 0
    while qi < len(order):
        old = order[qi]
        qi += 1
        for c in range(ncols):
            tgt = table.rep(table.cols[c][old])
            if tgt not in new_of_old:
                new_of_old[tgt] = len(order) + 1
                order.append(tgt)
    out = CosetTable(table.presentation, table.subgroup, limit=table.limit)
    out.n = len(order)
    out.live = len(order)
    out.p = list(range(len(order) + 1))
    out.cols = []
    for c in range(ncols):
        col = [0] * (len(order) + 1)
        for new_idx, old in enumerate(order, start=1):
            col[new_idx] = new_of_old[table.rep(table.cols[c][old])]
        out.cols.append(col)
    out.stats = EnumerationStats(
        definitions=table.stats.definitions,
        coincidences=table.stats.coincidences,
        max_live=table.stats.max_live,
        cosets=len(order),
        strategy=table.stats.strategy,
        complete=True,
    )
    return out


def coset_permutations(table: CosetTable) -> dict[str, Permutation]:
    """The permutation of the cosets induced by each generator.

    Requires a standardised (compact) table.  The map extends to a
    homomorphism from the presented group: every relator evaluates to the
    identity on the returned permutations.
    """
    if not table.stats.complete:
        raise ValueError("table is not complete")
    if table.p != list(range(table.n + 1)):
        raise ValueError("table must be standardised first")
    out = {}
    for sym in table.alphabet.symbols:
        col = table.cols[table.alphabet.col_of[(sym, 1)]]
        out[sym] = Permutation(col[1:])
    return out
