"""Finite presentations: Cayley-derived relators for a concrete permutation
group, presentation verification by enumeration, and the progenitor-quotient
presentation on the control symbols plus one symmetric generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .perm import Permutation
from .permgroup import PermutationGroup
from .words import Word, word_from_indices

__all__ = [
    "Presentation",
    "ProgenitorSpec",
    "cayley_presentation",
    "verify_presentation",
    "build_progenitor_quotient_presentation",
    "sufficient_subpresentation",
]


def _word_key(word: Word, index: dict[str, int]):
    return (
        len(word.letters),
        tuple((index[s], 0 if sign > 0 else 1) for s, sign in word.letters),
    )


@dataclass(frozen=True)
class Presentation:
    """Generator alphabet plus relator list.

    Relators are freely reduced, nonempty, deduplicated and stored in a
    canonical order (by length, then lexicographically in the generator
    order) so that derived enumerations are reproducible.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        index = {s: i for i, s in enumerate(self.generators)}
        if len(index) != len(self.generators):
            raise ValueError("duplicate generator symbols")
        reduced = []
        seen = set()
        for r in self.relators:
            missing = r.symbols() - set(self.generators)
            if missing:
                raise ValueError(f"relator uses undeclared symbols {missing}")
            r = r.free_reduce(involutions=False)
            if not r.letters:
                raise ValueError("empty relator after free reduction")
            if r.letters not in seen:
                seen.add(r.letters)
                reduced.append(r)
        reduced.sort(key=lambda w: _word_key(w, index))
        object.__setattr__(self, "relators", tuple(reduced))

    def __str__(self) -> str:
        rels = ", ".join(str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


@dataclass(frozen=True)
class ProgenitorSpec:
    """A free product of involutions controlled by a transitive group.

    ``control_gens`` act on the symmetric-generator indices ``1..degree``;
    each relation triple ``(w, i, k)`` imposes ``(w t_i)^k = 1`` on the
    quotient.  ``expectations`` carries optional known values (control
    order, coset count, image order) used as cross-checks downstream.
    """

    control_names: tuple[str, ...]
    control_gens: tuple[Permutation, ...]
    relation_triples: tuple[tuple[Word, int, int], ...]
    expectations: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.control_names) != len(self.control_gens):
            raise ValueError("one name per control generator required")
        group = self.control_group()
        if not group.is_transitive():
            raise ValueError("control group must be transitive on the letters")
        assignment = self.control_assignment()
        for w, i, k in self.relation_triples:
            if not 1 <= i <= self.degree:
                raise ValueError(f"letter {i} outside 1..{self.degree}")
            if k < 1:
                raise ValueError("relation exponent must be positive")
            w.evaluate(assignment, degree=self.degree)

    @property
    def degree(self) -> int:
        return self.control_gens[0].degree if self.control_gens else 1

    def control_group(self) -> PermutationGroup:
        return PermutationGroup(self.degree, self.control_gens)

    def control_assignment(self) -> dict[str, Permutation]:
        return dict(zip(self.control_names, self.control_gens))


def cayley_presentation(
    group: PermutationGroup, names, bound: int = 10_000
) -> Presentation:
    """Presentation of ``group`` from its Cayley graph.

    Relators are the cycles closed by the non-tree edges of a breadth-first
    spanning tree, freely and cyclically reduced with exact duplicates (as
    rotations of one another or of inverses) removed.  Presents the group
    exactly; self-contained but large, roughly two relators per element.
    """
    names = tuple(names)
    if len(names) != len(group.generators):
        raise ValueError("one name per generator required")
    ident = Permutation.identity(group.degree)
    words: dict[tuple[int, ...], tuple[int, ...]] = {ident.images: ()}
    order = [ident]
    qi = 0
    while qi < len(order):
        cur = order[qi]
        qi += 1
        if len(order) > bound:
            raise ValueError(f"group order exceeds bound {bound}")
        w = words[cur.images]
        for i, g in enumerate(group.generators):
            nxt = cur * g
            if nxt.images not in words:
                words[nxt.images] = w + (i + 1,)
                order.append(nxt)
    index = {s: i for i, s in enumerate(names)}
    relators: dict = {}
    for cur in order:
        w = words[cur.images]
        for i, g in enumerate(group.generators):
            nxt = cur * g
            wn = words[nxt.images]
            if wn == w + (i + 1,):
                continue  # tree edge
            rel = word_from_indices(w + (i + 1,), names) * word_from_indices(
                wn, names
            ).inverse()
            rel = _cyclic_canonical(rel, index)
            if rel.letters and rel.letters not in relators:
                relators[rel.letters] = rel
    return Presentation(names, tuple(relators.values()))


def _cyclic_canonical(word: Word, index: dict[str, int]) -> Word:
    """Cyclically reduce, then pick the least rotation of the word or its
    inverse (in the generator order) as a canonical representative."""
    w = word.free_reduce()
    letters = list(w.letters)
    while len(letters) >= 2 and Word([letters[0], letters[-1]]).free_reduce().letters == ():
        letters = letters[1:-1]
        letters = list(Word(letters).free_reduce().letters)
    if not letters:
        return Word(())
    best = None
    for cand in (letters, list(Word(letters).inverse().letters)):
        for shift in range(len(cand)):
            rot = Word(cand[shift:] + cand[:shift])
            key = _word_key(rot, index)
            if best is None or key < best[0]:
                best = (key, rot)
    return best[1]


def verify_presentation(
    presentation: Presentation,
    group: PermutationGroup,
    *,
    limit: int = 10**6,
) -> bool:
    """True iff every relator holds on the group's generators and coset
    enumeration over the trivial subgroup yields exactly the group order.

    Raises :class:`j2sym.toddcox.LimitExceeded` when the enumeration hits
    the definition limit, which is an indeterminate outcome, distinct from
    ``False``.
    """
    from .toddcox import enumerate_cosets

    if len(presentation.generators) != len(group.generators):
        return False
    assignment = dict(zip(presentation.generators, group.generators))
    for rel in presentation.relators:
        if not rel.evaluate(assignment, degree=group.degree).is_identity():
            return False
    table = enumerate_cosets(presentation, [], limit=limit)
    return table.coset_count == group.order


def build_progenitor_quotient_presentation(
    spec: ProgenitorSpec,
    control_presentation: Presentation,
    *,
    control_verified: bool = False,
) -> Presentation:
    """Presentation of the progenitor quotient on ``control symbols + t1``.

    Relators: the control relators; ``t1^2``; commutators of ``t1`` with the
    Schreier generators of the stabilizer of letter 1 (which centralises
    ``t1`` in the progenitor); and one expansion ``(w u_i^-1 t1 u_i)^k`` per
    relation triple, where ``u_i`` is the deterministic transversal word
    taking letter 1 to letter ``i``.

    ``control_verified`` is the caller's confirmation that
    ``control_presentation`` passed :func:`verify_presentation` against the
    concrete control group.
    """
    if not control_verified:
        raise ValueError("control presentation has not been verified")
    if tuple(control_presentation.generators) != tuple(spec.control_names):
        raise ValueError("control presentation alphabet mismatch")
    tsym = "t1"
    names = spec.control_names
    group = spec.control_group()
    t_word = Word([(tsym, 1)])
    relators = list(control_presentation.relators)
    relators.append(t_word * t_word)
    for _, sword_idx in group.stabilizer_generator_words(1):
        s = word_from_indices(sword_idx, names)
        relators.append(
            (t_word * s.inverse() * t_word * s).free_reduce(involutions=False)
        )
    orbit_words = group.orbit_words(1)
    for w, i, k in spec.relation_triples:
        u = word_from_indices(orbit_words[i], names)
        relators.append(
            ((w * u.inverse() * t_word * u) ** k).free_reduce(involutions=False)
        )
    return Presentation(names + (tsym,), tuple(relators))


def sufficient_subpresentation(
    presentation: Presentation,
    order: int,
    *,
    initial: int = 8,
    limit_factor: int = 64,
    shrink: bool = False,
) -> Presentation:
    """A sub-list of the relators that still presents the same finite group.

    Grows a prefix of the (canonically ordered) relator list until coset
    enumeration over the trivial subgroup completes with exactly ``order``
    cosets: any subset of valid relators presents a group that surjects onto
    the target, so an enumeration count equal to ``order`` certifies the
    subset.  With ``shrink=True`` a backward pass drops relators that are
    not needed for the certificate.  Intended for taming Cayley-derived
    relator sets; the result is deterministic.
    """
    from .toddcox import LimitExceeded, enumerate_cosets

    relators = list(presentation.relators)
    budget = max(order * limit_factor, 10_000)

    def works(subset: list[Word]) -> bool:
        try:
            table = enumerate_cosets(
                Presentation(presentation.generators, tuple(subset)),
                [],
                limit=budget,
            )
        except LimitExceeded:
            return False
        return table.coset_count == order

    k = min(initial, len(relators))
    while True:
        subset = relators[:k]
        if works(subset):
            break
        if k >= len(relators):
            raise ValueError("full relator list does not present the group")
        k = min(2 * k, len(relators))
    if shrink:
        keep = list(subset)
        i = len(keep) - 1
        while i >= 0:
            trial = keep[:i] + keep[i + 1 :]
            if trial and works(trial):
                keep = trial
            i -= 1
        subset = keep
    return Presentation(presentation.generators, tuple(subset))
