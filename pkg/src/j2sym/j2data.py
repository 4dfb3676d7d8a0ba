"""Shipped construction data and loaders for the package's file formats.

Formats (all plain text, ``#`` comments):

* ``*.perm``      named permutations, ``name = (cycles)`` one per line
* ``*.spec``      progenitor spec: ``degree n``, ``control <file>``,
                  ``rel <word> | <letter> | <exponent>``, ``expect <key> <int>``
* ``*.pres``      presentation relators, one word per line
* ``relations.cat``   ``label : LHS <op> RHS`` with op one of ``=``, ``~``, ``~~``
* ``maxsub.tab``      ``name | order | word ; word ; ...``
* ``published_graph.tab``  ``node <word> <count>`` / ``edge <src> <dst> <valency>``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .perm import Permutation
from .presentation import Presentation, ProgenitorSpec
from .words import Word

__all__ = [
    "CatalogEntry",
    "ConstructionData",
    "DrawnGraph",
    "StabilizerClaim",
    "SubgroupRow",
    "data_path",
    "load_builtin",
    "load_catalog",
    "load_drawn_graph",
    "load_perm_file",
    "load_presentation_file",
    "load_progenitor_spec",
    "load_stabilizer_claims",
    "load_subgroup_table",
]

DATA_DIR = Path(__file__).parent / "data"


def data_path(name: str) -> Path:
    return DATA_DIR / name


def _content_lines(path: Path) -> list[str]:
    lines = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def load_perm_file(path: Path, degree: int | None = None) -> dict[str, Permutation]:
    out: dict[str, Permutation] = {}
    for line in _content_lines(path):
        name, _, cycles = line.partition("=")
        name = name.strip()
        if not name or not cycles.strip():
            raise ValueError(f"{path}: malformed line {line!r}")
        out[name] = Permutation.parse(cycles.strip(), degree=degree)
    return out


def load_presentation_file(path: Path, generators) -> Presentation:
    relators = tuple(Word.parse(line) for line in _content_lines(path))
    return Presentation(tuple(generators), relators)


def load_progenitor_spec(path: Path) -> ProgenitorSpec:
    degree: int | None = None
    perms: dict[str, Permutation] | None = None
    triples: list[tuple[Word, int, int]] = []
    expectations: dict[str, int] = {}
    for line in _content_lines(path):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "degree":
            degree = int(rest)
        elif key == "control":
            perms = load_perm_file((path.parent / rest), degree=degree)
        elif key == "rel":
            parts = [p.strip() for p in rest.split("|")]
            if len(parts) != 3:
                raise ValueError(f"{path}: malformed rel line {line!r}")
            triples.append((Word.parse(parts[0]), int(parts[1]), int(parts[2])))
        elif key == "expect":
            ekey, _, eval_ = rest.partition(" ")
            expectations[ekey.strip()] = int(eval_)
        else:
            raise ValueError(f"{path}: unknown directive {key!r}")
    if perms is None:
        raise ValueError(f"{path}: no control file given")
    # permutations named tau/pi are printed relation values, not generators
    control_names = tuple(n for n in perms if n not in ("tau", "pi"))
    spec = ProgenitorSpec(
        control_names=control_names,
        control_gens=tuple(perms[n] for n in control_names),
        relation_triples=tuple(triples),
        expectations=expectations,
    )
    # cross-check any extra printed permutations against the relation words
    assignment = spec.control_assignment()
    for name, perm in perms.items():
        if name in control_names:
            continue
        if name == "tau" and triples:
            if triples[0][0].evaluate(assignment) != perm:
                raise ValueError("printed tau disagrees with its word")
        if name == "pi" and len(triples) > 1:
            if triples[1][0].evaluate(assignment) != perm:
                raise ValueError("printed pi disagrees with its word")
    return spec


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    kind: str  # "element" | "coset" | "double_coset"
    lhs: Word
    rhs: Word


_OPS = (("~~", "double_coset"), ("~", "coset"), ("=", "element"))


def load_catalog(path: Path) -> tuple[CatalogEntry, ...]:
    entries = []
    for line in _content_lines(path):
        label, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"{path}: missing label in {line!r}")
        for op, kind in _OPS:
            lhs, found, rhs = rest.partition(f" {op} ")
            if found:
                entries.append(
                    CatalogEntry(label.strip(), kind, Word.parse(lhs), Word.parse(rhs))
                )
                break
        else:
            raise ValueError(f"{path}: no relation operator in {line!r}")
    return tuple(entries)


@dataclass(frozen=True)
class SubgroupRow:
    name: str
    expected_order: int
    words: tuple[Word, ...] | None
    error: str | None = None


def load_subgroup_table(path: Path) -> tuple[SubgroupRow, ...]:
    rows = []
    for line in _content_lines(path):
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise ValueError(f"{path}: malformed row {line!r}")
        name, order_s, words_s = parts
        expected = int(order_s)
        try:
            words = tuple(Word.parse(w) for w in words_s.split(";"))
            rows.append(SubgroupRow(name, expected, words))
        except ValueError as exc:
            rows.append(SubgroupRow(name, expected, None, error=str(exc)))
    return tuple(rows)


@dataclass(frozen=True)
class StabilizerClaim:
    name: str
    coset_word: Word
    expected_order: int
    element: Permutation


def load_stabilizer_claims(path: Path, degree: int) -> tuple[StabilizerClaim, ...]:
    claims = []
    for line in _content_lines(path):
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise ValueError(f"{path}: malformed row {line!r}")
        name, word_s, order_s, perm_s = parts
        claims.append(
            StabilizerClaim(
                name,
                Word.parse(word_s),
                int(order_s),
                Permutation.parse(perm_s, degree=degree),
            )
        )
    return tuple(claims)


@dataclass(frozen=True)
class DrawnGraph:
    node_counts: dict[str, int]
    valencies: dict[tuple[str, str], int]


def load_drawn_graph(path: Path) -> DrawnGraph:
    nodes: dict[str, int] = {}
    valencies: dict[tuple[str, str], int] = {}
    for line in _content_lines(path):
        parts = line.split()
        if parts[0] == "node" and len(parts) == 3:
            nodes[_node_word(parts[1])] = int(parts[2])
        elif parts[0] == "edge" and len(parts) == 4:
            valencies[(_node_word(parts[1]), _node_word(parts[2]))] = int(parts[3])
        else:
            raise ValueError(f"{path}: malformed line {line!r}")
    return DrawnGraph(nodes, valencies)


def _node_word(token: str) -> str:
    return "*" if token == "*" else " ".join(token.split("."))


@dataclass(frozen=True)
class ConstructionData:
    """Everything the pipeline needs: the progenitor spec plus the claim
    catalogs shipped with the package."""

    spec: ProgenitorSpec
    catalog: tuple[CatalogEntry, ...] = ()
    subgroup_rows: tuple[SubgroupRow, ...] = ()
    stabilizer_claims: tuple[StabilizerClaim, ...] = ()
    drawn_graph: DrawnGraph | None = None
    control_presentation_path: Path | None = None
    source: str = "builtin"


def load_builtin() -> ConstructionData:
    spec = load_progenitor_spec(data_path("j2.spec"))
    return ConstructionData(
        spec=spec,
        catalog=load_catalog(data_path("relations.cat")),
        subgroup_rows=load_subgroup_table(data_path("maxsub.tab")),
        stabilizer_claims=load_stabilizer_claims(
            data_path("stabilizers.perm"), spec.degree
        ),
        drawn_graph=load_drawn_graph(data_path("published_graph.tab")),
        control_presentation_path=data_path("control.pres"),
        source="builtin",
    )


def load_spec_data(path: Path) -> ConstructionData:
    """Construction data for a user-supplied progenitor spec file (the claim
    catalogs only apply to the builtin data)."""
    return ConstructionData(spec=load_progenitor_spec(path), source=str(path))
