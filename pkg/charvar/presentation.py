"""Finitely presented groups.

Presentation text format::

    # the genus-2 surface group
    gens a1 b1 a2 b2;
    rel [a1,b1][a2,b2];

Juxtaposition is the product, ``x^-1`` (or any ``x^k``) a power, ``[x,y]``
the commutator x y x^-1 y^-1, parentheses group, ``1`` is the empty word and
several relators may share one ``rel`` statement when separated by commas.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from string import ascii_lowercase

import networkx as nx

from .const import LOGGER
from .exceptions import (
    InvalidParameter,
    PresentationSyntaxError,
    UnknownGenerator,
)
from .zmodule import IntMatrix

KEYWORD_GENS = "gens"
KEYWORD_REL = "rel"
KEYWORDS = frozenset({KEYWORD_GENS, KEYWORD_REL})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Letter = tuple[int, int]


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for generator, exponent in letters:
        if stack and stack[-1] == (generator, -exponent):
            stack.pop()
        else:
            stack.append((generator, exponent))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the free group on generator indices 0, 1, ..."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        """Validate and freely reduce the letters."""
        for generator, exponent in self.letters:
            if generator < 0 or exponent not in (1, -1):
                raise ValueError(f"Invalid letter {(generator, exponent)}")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def generator(cls, index: int) -> Word:
        """Return the one-letter word for generator ``index``."""
        return cls(((index, 1),))

    @classmethod
    def commutator(cls, x: Word | int, y: Word | int) -> Word:
        """Return x y x^-1 y^-1."""
        x = cls.generator(x) if isinstance(x, int) else x
        y = cls.generator(y) if isinstance(y, int) else y
        return x * y * x.inverse() * y.inverse()

    @classmethod
    def product(cls, words: Iterable[Word]) -> Word:
        """Return the freely reduced concatenation of words."""
        letters: list[Letter] = []
        for word in words:
            letters.extend(word.letters)
        return cls(tuple(letters))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> Word:
        """Return the inverse word."""
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def power(self, exponent: int) -> Word:
        """Return the word raised to an integer power; negative powers use the inverse."""
        base = self if exponent >= 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def shifted(self, offset: int) -> Word:
        """Return the word with every generator index moved by offset."""
        return Word(tuple((g + offset, e) for g, e in self.letters))

    def exponent_sums(self, num_generators: int) -> list[int]:
        """Return the net exponent of each generator."""
        sums = [0] * num_generators
        for generator, exponent in self.letters:
            sums[generator] += exponent
        return sums

    def max_generator(self) -> int:
        """Return the largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def cyclic_key(self) -> tuple[Letter, ...]:
        """Return a normal form invariant under cyclic permutation and inversion."""
        candidates = []
        for word in (self, self.inverse()):
            letters = word.letters
            for shift in range(max(len(letters), 1)):
                candidates.append(Word(letters[shift:] + letters[:shift]).letters)
        return min(candidates)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation <generators | relators>."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        """Validate names and relator ranges."""
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        object.__setattr__(self, "relators", tuple(self.relators))
        seen = set()
        for name in self.generator_names:
            if not _NAME_RE.match(name) or name in KEYWORDS:
                raise InvalidParameter(f"Invalid generator name '{name}'")
            if name in seen:
                raise InvalidParameter(f"Duplicate generator name '{name}'")
            seen.add(name)
        for relator in self.relators:
            if relator.max_generator() >= len(self.generator_names):
                raise InvalidParameter("Relator references an undeclared generator")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    def index(self, name: str) -> int:
        """Return the position of a generator name."""
        return self.generator_names.index(name)


def format_word(word: Word, names: Sequence[str]) -> str:
    """Render a word in the text format."""
    if not word.letters:
        return "1"
    return " ".join(
        names[g] if e == 1 else f"{names[g]}^-1" for g, e in word.letters
    )


def format_presentation(presentation: Presentation) -> str:
    """Render a presentation so that parse_presentation reads it back."""
    names = presentation.generator_names
    lines = [f"gens {' '.join(names)};".replace("gens ;", "gens;")]
    lines.extend(f"rel {format_word(r, names)};" for r in presentation.relators)
    return "\n".join(lines) + "\n"


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<power>\^\s*[+-]?\s*\d+)
  | (?P<identity>1(?![0-9]))
  | (?P<punct>[\[\],;()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    position = 0
    line, line_start = 1, 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if match is None:
            msg = f"Unexpected character {text[position]!r}"
            raise PresentationSyntaxError(msg, line, column)
        kind = match.lastgroup
        value = match.group()
        if kind not in ("space", "comment"):
            tokens.append(_Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
        position = match.end()
    tokens.append(_Token("eof", "", line, position - line_start + 1))
    return tokens


@dataclass
class _Parser:
    tokens: list[_Token]
    position: int = 0
    names: dict[str, int] = field(default_factory=dict)

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def _advance(self) -> _Token:
        token = self.current
        self.position += 1
        return token

    def _fail(self, message: str) -> PresentationSyntaxError:
        token = self.current
        found = token.text or "end of input"
        return PresentationSyntaxError(
            f"{message}, found {found!r}", token.line, token.column
        )

    def _expect(self, text: str) -> _Token:
        if self.current.text != text:
            raise self._fail(f"Expected {text!r}")
        return self._advance()

    def parse(self) -> Presentation:
        if self.current.kind != "name" or self.current.text != KEYWORD_GENS:
            raise self._fail(f"Expected {KEYWORD_GENS!r}")
        self._advance()
        generator_names = []
        while self.current.kind == "name" and self.current.text not in KEYWORDS:
            token = self._advance()
            if token.text in self.names:
                raise PresentationSyntaxError(
                    f"Duplicate generator {token.text!r}", token.line, token.column
                )
            self.names[token.text] = len(generator_names)
            generator_names.append(token.text)
        self._expect(";")

        relators = []
        while self.current.kind != "eof":
            if self.current.text != KEYWORD_REL:
                raise self._fail(f"Expected {KEYWORD_REL!r}")
            self._advance()
            relators.append(self._word())
            while self.current.text == ",":
                self._advance()
                relators.append(self._word())
            self._expect(";")
        return Presentation(tuple(generator_names), tuple(relators))

    def _word(self) -> Word:
        factors = []
        while self.current.kind in ("name", "identity") or self.current.text in "([":
            if self.current.kind == "name" and self.current.text in KEYWORDS:
                break
            if self.current.kind == "eof":
                break
            factors.append(self._factor())
        return Word.product(factors)

    def _factor(self) -> Word:
        word = self._atom()
        while self.current.kind == "power":
            exponent = int(re.sub(r"[\s^]", "", self._advance().text))
            word = word.power(exponent)
        return word

    def _atom(self) -> Word:
        token = self.current
        if token.kind == "identity":
            self._advance()
            return Word()
        if token.kind == "name":
            self._advance()
            if token.text not in self.names:
                raise UnknownGenerator(token.text, token.line, token.column)
            return Word.generator(self.names[token.text])
        if token.text == "(":
            self._advance()
            word = self._word()
            self._expect(")")
            return word
        if token.text == "[":
            self._advance()
            left = self._word()
            self._expect(",")
            right = self._word()
            self._expect("]")
            return Word.commutator(left, right)
        raise self._fail("Expected a generator, '(' or '['")


def parse_presentation(text: str) -> Presentation:
    """Parse presentation text; relators come back freely reduced."""
    presentation = _Parser(_tokenize(text)).parse()
    LOGGER.debug(
        "Parsed presentation with %d generators and %d relators",
        presentation.num_generators,
        len(presentation.relators),
    )
    return presentation


def abelianization_matrix(presentation: Presentation) -> IntMatrix:
    """Return the exponent-sum matrix: entry (i, j) is the net exponent of j in relator i."""
    return IntMatrix.from_rows(
        (r.exponent_sums(presentation.num_generators) for r in presentation.relators),
        presentation.num_generators,
    )


def is_exponent_canceling(presentation: Presentation) -> tuple[bool, int | None]:
    """Return (flag, rank); rank is the generator count when every relator cancels."""
    if abelianization_matrix(presentation).is_zero():
        return True, presentation.num_generators
    return False, None


@dataclass(frozen=True)
class GroupClass:
    """A class tag used to select theorems: free, free_abelian, surface or other."""

    kind: str
    param: int | None = None

    FREE = "free"
    FREE_ABELIAN = "free_abelian"
    SURFACE = "surface"
    OTHER = "other"

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind} {self.param}"

    @classmethod
    def parse(cls, text: str) -> GroupClass:
        """Parse tags like 'surface 2' or 'other'."""
        parts = text.split()
        if not parts or parts[0] not in (
            cls.FREE,
            cls.FREE_ABELIAN,
            cls.SURFACE,
            cls.OTHER,
        ):
            raise InvalidParameter(f"Unknown group class '{text}'")
        if parts[0] == cls.OTHER:
            if len(parts) != 1:
                raise InvalidParameter("Class 'other' takes no parameter")
            return cls(cls.OTHER)
        if len(parts) != 2 or not parts[1].isdigit():
            raise InvalidParameter(f"Class '{parts[0]}' needs one integer parameter")
        return cls(parts[0], int(parts[1]))


def _letter_names(count: int) -> tuple[str, ...]:
    if count <= len(ascii_lowercase):
        return tuple(ascii_lowercase[:count])
    return tuple(f"x{i + 1}" for i in range(count))


def _surface_names(genus: int) -> tuple[str, ...]:
    return tuple(name for i in range(1, genus + 1) for name in (f"a{i}", f"b{i}"))


def _surface_word(genus: int) -> Word:
    return Word.product(Word.commutator(2 * i, 2 * i + 1) for i in range(genus))


def _check_count(value: int, minimum: int, what: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InvalidParameter(f"{what} must be an integer >= {minimum}, got {value!r}")


def free_group(rank: int) -> Presentation:
    """Return <x1..xr | >."""
    _check_count(rank, 0, "Rank")
    return Presentation(_letter_names(rank))


def free_abelian_group(rank: int) -> Presentation:
    """Return the free abelian group with all pairwise commutators as relators."""
    _check_count(rank, 0, "Rank")
    return Presentation(
        _letter_names(rank),
        tuple(Word.commutator(i, j) for i, j in combinations(range(rank), 2)),
    )


def surface_group(genus: int) -> Presentation:
    """Return <a1, b1, ..., ag, bg | [a1,b1]...[ag,bg]>."""
    _check_count(genus, 1, "Genus")
    return Presentation(_surface_names(genus), (_surface_word(genus),))


def bordered_surface_group(genus: int, boundaries: int) -> Presentation:
    """Return the fundamental group of a genus-g surface with b boundary circles.

    It is free of rank 2g + b - 1.
    """
    _check_count(genus, 0, "Genus")
    _check_count(boundaries, 1, "Number of boundary components")
    return free_group(2 * genus + boundaries - 1)


def central_ext_surface_group(genus: int, with_center: bool = False) -> Presentation:
    """Return the central extension of the surface group by Z.

    The central generator equals [a1,b1]...[ag,bg]. By default it is
    eliminated, leaving the relators [c, a_j] and [c, b_j] with
    c = [a1,b1]...[ag,bg], which cancel exponents. ``with_center`` keeps z
    as an extra generator with relators z^-1 c, [z, a_j], [z, b_j].
    """
    _check_count(genus, 1, "Genus")
    names = _surface_names(genus)
    central = _surface_word(genus)
    if not with_center:
        return Presentation(
            names,
            tuple(Word.commutator(central, j) for j in range(2 * genus)),
        )
    z = 2 * genus
    return Presentation(
        (*names, "z"),
        (
            Word.generator(z).inverse() * central,
            *(Word.commutator(z, j) for j in range(2 * genus)),
        ),
    )


def raag(graph: nx.Graph | Iterable[tuple[str, str]]) -> Presentation:
    """Return the right-angled Artin group of a simple graph.

    Vertices become generators (in node order); each edge u-v contributes [u, v].
    """
    if not isinstance(graph, nx.Graph):
        graph = nx.Graph(list(graph))
    if graph.is_multigraph() or graph.is_directed():
        raise InvalidParameter("RAAG graph must be a simple undirected graph")
    if nx.number_of_selfloops(graph):
        raise InvalidParameter("RAAG graph must not contain loops")
    names = tuple(str(node) for node in graph.nodes)
    index = {node: i for i, node in enumerate(graph.nodes)}
    relators = []
    for u, v in graph.edges:
        i, j = sorted((index[u], index[v]))
        relators.append(Word.commutator(i, j))
    return Presentation(names, tuple(relators))


def _parse_raag_edges(text: str) -> nx.Graph:
    graph = nx.Graph()
    for item in filter(None, (part.strip() for part in text.split(","))):
        vertices = [vertex.strip() for vertex in item.split("-")]
        if len(vertices) == 1:
            graph.add_node(vertices[0])
        elif len(vertices) == 2 and all(vertices):
            if vertices[0] == vertices[1]:
                raise InvalidParameter(f"Loop at vertex '{vertices[0]}'")
            graph.add_edge(*vertices)
        else:
            raise InvalidParameter(f"Malformed RAAG edge '{item}'")
    return graph


def standard_group(kind: str, *params: int, graph: nx.Graph | None = None) -> Presentation:
    """Return the standard presentation of a named family."""
    builders = {
        "free": free_group,
        "free_abelian": free_abelian_group,
        "surface": surface_group,
        "bordered_surface": bordered_surface_group,
        "central_ext_surface": central_ext_surface_group,
    }
    if kind == "raag":
        if graph is None:
            raise InvalidParameter("raag needs an adjacency graph")
        return raag(graph)
    if kind not in builders:
        raise InvalidParameter(f"Unknown group family '{kind}'")
    try:
        return builders[kind](*params)
    except TypeError as exception:
        raise InvalidParameter(f"Wrong parameters for '{kind}': {params}") from exception


def detect_classes(presentation: Presentation) -> frozenset[GroupClass]:
    """Recognize the standard free, free abelian and surface shapes.

    Relators are compared up to cyclic permutation and inversion; generator
    order matters.
    """
    count = presentation.num_generators
    relators = {r.cyclic_key() for r in presentation.relators if r.letters}
    classes = set()
    if not relators:
        classes.add(GroupClass(GroupClass.FREE, count))
        if count <= 1:
            classes.add(GroupClass(GroupClass.FREE_ABELIAN, count))
    if relators and relators == {
        Word.commutator(i, j).cyclic_key() for i, j in combinations(range(count), 2)
    }:
        classes.add(GroupClass(GroupClass.FREE_ABELIAN, count))
    if count >= 2 and count % 2 == 0 and relators == {
        _surface_word(count // 2).cyclic_key()
    }:
        classes.add(GroupClass(GroupClass.SURFACE, count // 2))
    return frozenset(classes)


def parse_group_spec(text: str) -> tuple[Presentation, GroupClass]:
    """Parse a group spec such as 'surface 2' or 'raag x-y,y-z'.

    Returns the presentation and the class tag the theorem engine should use.
    """
    kind, _, rest = text.strip().partition(" ")
    if kind == "raag":
        presentation = raag(_parse_raag_edges(rest))
    else:
        try:
            params = tuple(int(part) for part in rest.split())
        except ValueError as exception:
            raise InvalidParameter(f"Malformed group spec '{text}'") from exception
        presentation = standard_group(kind, *params)
    if kind in (GroupClass.FREE, GroupClass.FREE_ABELIAN, GroupClass.SURFACE):
        return presentation, GroupClass(kind, params[0])
    detected = sorted(detect_classes(presentation), key=str)
    return presentation, detected[0] if detected else GroupClass(GroupClass.OTHER)


def _merged_names(
    left: Sequence[str], right: Sequence[str]
) -> tuple[str, ...]:
    taken = set(left)
    renamed = []
    for name in right:
        candidate, suffix = name, 2
        while candidate in taken:
            candidate = f"{name}_{suffix}"
            suffix += 1
        taken.add(candidate)
        renamed.append(candidate)
    return (*left, *renamed)


def free_product(left: Presentation, right: Presentation) -> Presentation:
    """Return a presentation of the free product (clashing names get a suffix)."""
    offset = left.num_generators
    return Presentation(
        _merged_names(left.generator_names, right.generator_names),
        (*left.relators, *(r.shifted(offset) for r in right.relators)),
    )


def direct_product(left: Presentation, right: Presentation) -> Presentation:
    """Return a presentation of the direct product."""
    combined = free_product(left, right)
    offset = left.num_generators
    commuting = tuple(
        Word.commutator(i, offset + j)
        for i in range(left.num_generators)
        for j in range(right.num_generators)
    )
    return Presentation(combined.generator_names, combined.relators + commuting)
