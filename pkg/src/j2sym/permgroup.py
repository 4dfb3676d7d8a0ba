"""Permutation-group kernel: orbits, stabilizer chains, order and membership,
normal closure, derived subgroup, block systems, class sizes, coset actions.

Everything is deterministic: orbits are breadth-first with generators taken
in their listed order, base points are the first points moved by the
residues that create each level, and no randomisation is used anywhere.
Words are tuples of signed 1-based generator indices (``-k`` meaning the
inverse of generator ``k``).
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

from .perm import Permutation

__all__ = ["PermutationGroup", "StabilizerChain", "CosetAction"]


def _inv_word(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-i for i in reversed(word))


class _Level:
    __slots__ = ("base", "orbit", "orbit_order", "done")

    def __init__(self, base: int) -> None:
        self.base = base
        # point -> (transversal element u with base^u == point, word for u)
        self.orbit: dict[int, tuple[Permutation, tuple[int, ...]]] = {}
        self.orbit_order: list[int] = []
        self.done: set[tuple[int, int]] = set()


class StabilizerChain:
    """Base and strong generating set built by deterministic Schreier-Sims.

    Strong generators are stored with the level at which they start acting
    (the number of leading base points they fix) and with a word in the
    original group generators.
    """

    def __init__(self, degree: int) -> None:
        self.degree = degree
        self.levels: list[_Level] = []
        # (permutation, word in original generators, level)
        self.strong: list[tuple[Permutation, tuple[int, ...], int]] = []

    @classmethod
    def build(cls, degree: int, gens_with_words) -> "StabilizerChain":
        chain = cls(degree)
        for g, w in gens_with_words:
            chain.extend(g, w)
        return chain

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.orbit)
        return n

    def _gens_at(self, k: int):
        return [(p, w) for p, w, lvl in self.strong if lvl >= k]

    def _recompute_orbit(self, k: int) -> bool:
        lvl = self.levels[k]
        gens = self._gens_at(k)
        orbit: dict[int, tuple[Permutation, tuple[int, ...]]] = {
            lvl.base: (Permutation.identity(self.degree), ())
        }
        order = [lvl.base]
        queue = deque(order)
        while queue:
            pt = queue.popleft()
            u, uw = orbit[pt]
            for gi, (g, gw) in enumerate(gens):
                img = g.images[pt - 1]
                if img not in orbit:
                    orbit[img] = (u * g, uw + gw)
                    order.append(img)
                    queue.append(img)
        changed = order != lvl.orbit_order or any(
            orbit[p][0] != lvl.orbit.get(p, (None, None))[0] for p in order
        )
        lvl.orbit = orbit
        lvl.orbit_order = order
        return changed

    def _sift(self, p: Permutation, word: tuple[int, ...], start: int = 0):
        """Sift ``p`` through levels ``start..``; return (residue, word, level).

        ``level`` is where sifting stopped: ``len(self.levels)`` means the
        residue fixes every base point.
        """
        r, rw = p, word
        for k in range(start, len(self.levels)):
            lvl = self.levels[k]
            img = r.images[lvl.base - 1]
            if img == lvl.base:
                continue
            if img not in lvl.orbit:
                return r, rw, k
            u, uw = lvl.orbit[img]
            r = r * u.inverse()
            rw = rw + _inv_word(uw)
        return r, rw, len(self.levels)

    def _place(self, p: Permutation, word: tuple[int, ...], start: int = 0) -> int | None:
        """Sift and, if the residue is nontrivial, record it as a strong
        generator; return the level it was placed at (None if a member)."""
        r, rw, k = self._sift(p, word, start)
        if r.is_identity():
            return None
        if k == len(self.levels):
            self.levels.append(_Level(r.first_moved()))
        self.strong.append((r, rw, k))
        return k

    def extend(self, p: Permutation, word: tuple[int, ...]) -> bool:
        """Add a generator (skipping members); returns True if the group grew."""
        if p.degree != self.degree:
            raise ValueError("degree mismatch")
        k = self._place(p, word)
        if k is None:
            return False
        # the new generator belongs to the generating sets of every level
        # above k as well, so reverify the whole chain (cached pairs make
        # untouched levels cheap)
        self._process(0)
        return True

    def _process(self, top: int) -> None:
        # Verify Schreier generators level by level, deepest first, restarting
        # at the level where any new strong generator lands.
        i = len(self.levels) - 1
        while i >= top:
            lvl = self.levels[i]
            if self._recompute_orbit(i):
                lvl.done.clear()
            gens = self._gens_at(i)
            restart = None
            for pt in lvl.orbit_order:
                for gi in range(len(gens)):
                    key = (pt, gi)
                    if key in lvl.done:
                        continue
                    lvl.done.add(key)
                    g, gw = gens[gi]
                    img = g.images[pt - 1]
                    u, uw = lvl.orbit[pt]
                    v, vw = lvl.orbit[img]
                    s = u * g * v.inverse()
                    if s.is_identity():
                        continue
                    sw = uw + gw + _inv_word(vw)
                    k = self._place(s, sw, i + 1)
                    if k is not None:
                        restart = k
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        r, _, _ = self._sift(p, ())
        return r.is_identity()

    def element_word(self, p: Permutation) -> tuple[int, ...]:
        """Word in the original generators evaluating to ``p``.

        Raises ValueError when ``p`` is not a member.  Words can be long;
        they are exact, not short.
        """
        r, _, _ = self._sift(p, ())
        if not r.is_identity():
            raise ValueError("element is not in the group")
        # p = u_{L-1} * ... * u_0 read off the sift path
        parts: list[tuple[int, ...]] = []
        cur = p
        for lvl in self.levels:
            img = cur.images[lvl.base - 1]
            u, uw = lvl.orbit[img]
            parts.append(uw)
            cur = cur * u.inverse()
        word: tuple[int, ...] = ()
        for uw in reversed(parts):
            word = word + uw
        return word


@dataclass(frozen=True)
class CosetAction:
    """Right-coset action of a group on the cosets of a subgroup."""

    group: "PermutationGroup"
    representatives: tuple[Permutation, ...]

    @property
    def degree(self) -> int:
        return self.group.degree


class PermutationGroup:
    """A group of permutations of {1..degree} given by generators.

    An empty generator list is the trivial group of the stated degree.
    Cached data (the stabilizer chain, element words, orbits) is guarded so
    concurrent readers see a consistent chain.
    """

    def __init__(self, degree: int, generators) -> None:
        self.degree = degree
        self.generators = tuple(generators)
        for g in self.generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self._lock = threading.Lock()
        self._chain: StabilizerChain | None = None
        self._element_words: dict[tuple[int, ...], tuple[int, ...]] | None = None

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def chain(self) -> StabilizerChain:
        with self._lock:
            if self._chain is None:
                self._chain = StabilizerChain.build(
                    self.degree,
                    ((g, (i + 1,)) for i, g in enumerate(self.generators)),
                )
            return self._chain

    @property
    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, p: Permutation) -> bool:
        return self.chain.contains(p)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    # ------------------------------------------------------------------
    # orbits and stabilizers

    def orbit(self, point: int) -> list[int]:
        """Orbit of ``point`` in breadth-first order (generators in order)."""
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} outside 1..{self.degree}")
        seen = {point}
        order = [point]
        queue = deque(order)
        while queue:
            pt = queue.popleft()
            for g in self.generators:
                img = g.images[pt - 1]
                if img not in seen:
                    seen.add(img)
                    order.append(img)
                    queue.append(img)
        return order

    def orbit_words(self, point: int) -> dict[int, tuple[int, ...]]:
        """Orbit of ``point`` with a Schreier word per point.

        The word for ``q`` evaluates (left to right, positive generator
        indices) to an element mapping ``point`` to ``q``.
        """
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} outside 1..{self.degree}")
        words: dict[int, tuple[int, ...]] = {point: ()}
        queue = deque([point])
        while queue:
            pt = queue.popleft()
            w = words[pt]
            for i, g in enumerate(self.generators):
                img = g.images[pt - 1]
                if img not in words:
                    words[img] = w + (i + 1,)
                    queue.append(img)
        return words

    def orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for pt in range(1, self.degree + 1):
            if pt in seen:
                continue
            orb = self.orbit(pt)
            seen.update(orb)
            out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(self.orbit(1)) == self.degree

    def stabilizer_generator_words(
        self, point: int
    ) -> list[tuple[Permutation, tuple[int, ...]]]:
        """Deduplicated Schreier generators of the stabilizer of ``point``,
        each with its word in the group generators."""
        words = self.orbit_words(point)
        transversal: dict[int, Permutation] = {}
        for pt in words:
            u = Permutation.identity(self.degree)
            for i in words[pt]:
                u = u * self.generators[i - 1]
            transversal[pt] = u
        out: dict[tuple[int, ...], tuple[Permutation, tuple[int, ...]]] = {}
        for pt in words:
            for i, g in enumerate(self.generators):
                img = g.images[pt - 1]
                s = transversal[pt] * g * transversal[img].inverse()
                if s.is_identity():
                    continue
                if s.images not in out:
                    sw = words[pt] + (i + 1,) + _inv_word(words[img])
                    out[s.images] = (s, sw)
        return list(out.values())

    def stabilizer_generators(self, point: int) -> list[Permutation]:
        return [s for s, _ in self.stabilizer_generator_words(point)]

    def stabilizer(self, point: int) -> "PermutationGroup":
        return PermutationGroup(self.degree, self.stabilizer_generators(point))

    # ------------------------------------------------------------------
    # element words

    def element_word(self, p: Permutation, cap: int = 100_000) -> tuple[int, ...]:
        """Short word for ``p`` from a breadth-first closure of the group.

        Only sensible for small groups (the closure is cached); raises
        ValueError for non-members or when the group exceeds ``cap``.
        """
        with self._lock:
            if self._element_words is None:
                ident = Permutation.identity(self.degree)
                words = {ident.images: ()}
                queue = deque([ident])
                while queue:
                    cur = queue.popleft()
                    w = words[cur.images]
                    for i, g in enumerate(self.generators):
                        nxt = cur * g
                        if nxt.images not in words:
                            if len(words) >= cap:
                                raise ValueError(
                                    f"group order exceeds element-word cap {cap}"
                                )
                            words[nxt.images] = w + (i + 1,)
                            queue.append(nxt)
                self._element_words = words
        try:
            return self._element_words[p.images]
        except KeyError:
            raise ValueError("element is not in the group") from None

    # ------------------------------------------------------------------
    # normal structure

    def normal_closure(self, seeds) -> "PermutationGroup":
        """Smallest subgroup containing ``seeds`` that is closed under
        conjugation by this group's generators."""
        gens: list[Permutation] = []
        chain = StabilizerChain(self.degree)
        queue: deque[Permutation] = deque()
        for s in seeds:
            if s.degree != self.degree:
                raise ValueError("seed degree mismatch")
            if chain.extend(s, ()):
                gens.append(s)
                queue.append(s)
        while queue:
            s = queue.popleft()
            for g in self.generators:
                c = s.conjugate(g)
                if chain.extend(c, ()):
                    gens.append(c)
                    queue.append(c)
        return PermutationGroup(self.degree, gens)

    def derived_subgroup(self) -> "PermutationGroup":
        """Normal closure of the pairwise commutators of the generators."""
        seeds = []
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                c = self.generators[i].commutator(self.generators[j])
                if not c.is_identity():
                    seeds.append(c)
        return self.normal_closure(seeds)

    def derived_series(self, limit: int = 32) -> list["PermutationGroup"]:
        series = [self]
        for _ in range(limit):
            nxt = series[-1].derived_subgroup()
            if nxt.order == series[-1].order:
                break
            series.append(nxt)
        return series

    def is_perfect(self) -> bool:
        return self.derived_subgroup().order == self.order

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            (gens[i] * gens[j]) == (gens[j] * gens[i])
            for i in range(len(gens))
            for j in range(i + 1, len(gens))
        )

    # ------------------------------------------------------------------
    # blocks

    def minimal_block(self, alpha: int, beta: int) -> list[int]:
        """The smallest block containing ``alpha`` and ``beta`` for a
        transitive group, as a sorted point list."""
        parent = list(range(self.degree + 1))

        def find(x: int) -> int:
            r = x
            while parent[r] != r:
                r = parent[r]
            while parent[x] != r:
                parent[x], x = r, parent[x]
            return r

        queue = deque([(alpha, beta)])
        while queue:
            u, v = queue.popleft()
            ru, rv = find(u), find(v)
            if ru == rv:
                continue
            parent[max(ru, rv)] = min(ru, rv)
            for g in self.generators:
                queue.append((g.images[u - 1], g.images[v - 1]))
        root = find(alpha)
        return [pt for pt in range(1, self.degree + 1) if find(pt) == root]

    def primitivity(self) -> tuple[bool, list[int] | None]:
        """(True, None) if primitive; otherwise (False, witness block ∋ 1)."""
        if not self.is_transitive():
            raise ValueError("primitivity is defined for transitive groups only")
        for beta in range(2, self.degree + 1):
            block = self.minimal_block(1, beta)
            if 1 < len(block) < self.degree:
                return False, block
        return True, None

    def is_primitive(self) -> bool:
        return self.primitivity()[0]

    # ------------------------------------------------------------------
    # classes and centralizers

    def class_size(self, p: Permutation) -> int:
        """Size of the conjugation orbit of ``p`` under this group."""
        if p not in self:
            raise ValueError("element is not in the group")
        seen = {p.images}
        queue = deque([p])
        while queue:
            cur = queue.popleft()
            for g in self.generators:
                c = cur.conjugate(g)
                if c.images not in seen:
                    seen.add(c.images)
                    queue.append(c)
        return len(seen)

    def centralizer_order(self, p: Permutation) -> int:
        return self.order // self.class_size(p)

    # ------------------------------------------------------------------
    # coset action

    def coset_action(self, subgroup_gens) -> CosetAction:
        """Permutation action on the right cosets of ``<subgroup_gens>``.

        Cosets are numbered breadth-first from the subgroup itself with the
        generators taken in order; coset 1 is the subgroup.
        """
        subgroup_gens = list(subgroup_gens)
        for h in subgroup_gens:
            if h not in self:
                raise ValueError("subgroup generator is not in the group")
        hchain = StabilizerChain.build(
            self.degree, ((h, ()) for h in subgroup_gens)
        )

        def canon(w: Permutation) -> Permutation:
            r = w
            for lvl in hchain.levels:
                best_pt = None
                best_img = None
                for o in lvl.orbit_order:
                    img = r.images[o - 1]
                    if best_img is None or img < best_img:
                        best_img = img
                        best_pt = o
                u, _ = lvl.orbit[best_pt]
                r = u * r
            return r

        first = canon(Permutation.identity(self.degree))
        reps = [first]
        index = {first.images: 1}
        queue = deque([first])
        while queue:
            r = queue.popleft()
            for g in self.generators:
                c = canon(r * g)
                if c.images not in index:
                    index[c.images] = len(reps) + 1
                    reps.append(c)
                    queue.append(c)
        images = []
        for g in self.generators:
            images.append(
                Permutation._make(
                    [index[canon(r * g).images] for r in reps]
                )
            )
        return CosetAction(
            PermutationGroup(len(reps), images), tuple(reps)
        )
