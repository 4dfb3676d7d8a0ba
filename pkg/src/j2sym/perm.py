"""Permutations of {1..n} stored as dense image tables.

Conventions used consistently across the package:

* points are the integers ``1..degree``;
* permutations act on the right: the image of ``i`` under ``p`` is ``p[i]``;
* products compose left to right: ``(p * q)[i] == q[p[i]]``;
* conjugation is right conjugation: ``p.conjugate(h) == h.inverse() * p * h``,
  so for points ``(i ** p) ** h == (i ** h) ** p.conjugate(h)``.
"""

from __future__ import annotations

import math
import re

__all__ = ["Permutation"]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection of {1..degree}.

    ``images[k]`` is the image of point ``k + 1``; stored values are 1-based.
    """

    __slots__ = ("images",)

    def __init__(self, images) -> None:
        images = tuple(images)
        n = len(images)
        seen = [False] * (n + 1)
        for v in images:
            if not isinstance(v, int) or not 1 <= v <= n or seen[v]:
                raise ValueError(f"image table is not a bijection of 1..{n}")
            seen[v] = True
        self.images = images

    @classmethod
    def _make(cls, images) -> "Permutation":
        # trusted constructor: callers guarantee a bijection
        p = object.__new__(cls)
        p.images = tuple(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 0:
            raise ValueError("degree must be non-negative")
        return cls._make(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> "Permutation":
        images = list(range(1, degree + 1))
        moved = set()
        for cycle in cycles:
            cycle = list(cycle)
            for a in cycle:
                if not 1 <= a <= degree:
                    raise ValueError(f"point {a} outside 1..{degree}")
                if a in moved:
                    raise ValueError(f"point {a} appears in two cycles")
                moved.add(a)
            for a, b in zip(cycle, cycle[1:]):
                images[a - 1] = b
            if len(cycle) > 1:
                images[cycle[-1] - 1] = cycle[0]
        return cls._make(images)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Parse disjoint-cycle notation, e.g. ``(1,2)(3,5,7)``.

        Whitespace inside cycles is ignored.  ``()`` and ``e`` denote the
        identity (``degree`` is then required).
        """
        s = text.strip()
        if s in ("()", "e", ""):
            if degree is None:
                raise ValueError("degree required to parse the identity")
            return cls.identity(degree)
        if _CYCLE_RE.sub("", s).strip():
            raise ValueError(f"cannot parse permutation: {text!r}")
        cycles = []
        top = 0
        for m in _CYCLE_RE.finditer(s):
            body = m.group(1).strip()
            if not body:
                continue
            pts = [int(tok) for tok in re.split(r"[,\s]+", body)]
            top = max(top, max(pts))
            cycles.append(pts)
        if degree is None:
            degree = top
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __getitem__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation._make([o[v - 1] for v in self.images])

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return Permutation._make(inv)

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(len(self.images))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, h: "Permutation") -> "Permutation":
        """Return ``h.inverse() * self * h``."""
        if len(self.images) != len(h.images):
            raise ValueError("degree mismatch")
        him = h.images
        sim = self.images
        out = [0] * len(sim)
        for i in range(len(sim)):
            out[him[i] - 1] = him[sim[i] - 1]
        return Permutation._make(out)

    def commutator(self, other: "Permutation") -> "Permutation":
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [i + 1 for i, v in enumerate(self.images) if v == i + 1]

    def first_moved(self) -> int | None:
        for i, v in enumerate(self.images):
            if v != i + 1:
                return i + 1
        return None

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted by it."""
        seen = [False] * (len(self.images) + 1)
        out = []
        for start in range(1, len(self.images) + 1):
            if seen[start] or self.images[start - 1] == start:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start - 1]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt - 1]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        lengths = [len(c) for c in self.cycles()]
        return math.lcm(*lengths) if lengths else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r}, degree={self.degree})"
