"""Permutations of {0, ..., n-1} and fully enumerated permutation groups.

Composition reads left to right: ``(p * q)(i) == q(p(i))``, the right
action convention, so conjugation ``x ** g`` means ``g⁻¹ x g`` and
stabilisers transform the way orbits do.  Points are 0-based in memory;
cycle notation at the text boundary is 1-based.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    CapExceeded,
    CycleSyntaxError,
    DegreeMismatch,
    NotTransitive,
    PointOutOfRange,
    RepeatedPoint,
)

DEFAULT_ELEMENT_CAP = 200_000
_CAP_ENV = "SGK_ELEMENT_CAP"


def element_cap() -> int:
    """Enumeration cap currently in force; SGK_ELEMENT_CAP overrides it."""
    raw = os.environ.get(_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_ELEMENT_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{_CAP_ENV} must be an integer, got {raw!r}") from None


class Perm:
    """A permutation stored as its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        self.images = tuple(images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Perm":
        """Parse 1-based cycle notation such as ``(1 2)(3 4)``."""
        return cls(parse_cycles(text, degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        img = other.images
        return Perm(img[i] for i in self.images)

    def inverse(self) -> "Perm":
        out = [0] * len(self.images)
        for src, dst in enumerate(self.images):
            out[dst] = src
        return Perm(out)

    def conjugated_by(self, g: "Perm") -> "Perm":
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def is_involution(self) -> bool:
        """Order exactly two."""
        return not self.is_identity() and (self * self).is_identity()

    def order(self) -> int:
        n, p = 1, self
        while not p.is_identity():
            p = p * self
            n += 1
        return n

    def cycles(self) -> list:
        """Cycles of length at least two, each starting at its least point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """1-based cycle notation; the identity prints as ``id``."""
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join(
            "(" + " ".join(str(p + 1) for p in cyc) + ")" for cyc in cycs
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Perm[{self.cycle_string()}]"


def parse_cycles(text: str, degree: int) -> tuple:
    """Parse 1-based disjoint cycle notation into an image tuple.

    ``id``, ``()`` and the empty string denote the identity.  Each point
    must lie in 1..degree and may appear at most once; commas inside a
    cycle count as spaces.
    """
    images = list(range(degree))
    used = set()
    stripped = text.strip()
    if stripped in ("", "id", "()"):
        return tuple(images)
    pos, n = 0, len(stripped)
    while pos < n:
        ch = stripped[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch != "(":
            raise CycleSyntaxError(f"expected '(' at position {pos} in {text!r}")
        end = stripped.find(")", pos)
        if end < 0:
            raise CycleSyntaxError(f"unclosed cycle in {text!r}")
        points = []
        for tok in stripped[pos + 1 : end].replace(",", " ").split():
            if not tok.isdigit():
                raise CycleSyntaxError(f"bad point {tok!r} in {text!r}")
            p = int(tok) - 1
            if not 0 <= p < degree:
                raise PointOutOfRange(f"point {tok} outside 1..{degree} in {text!r}")
            if p in used:
                raise RepeatedPoint(f"point {tok} repeated in {text!r}")
            used.add(p)
            points.append(p)
        if not points:
            raise CycleSyntaxError(f"empty cycle in {text!r}")
        for i, p in enumerate(points):
            images[p] = points[(i + 1) % len(points)]
        pos = end + 1
    return tuple(images)


@dataclass(frozen=True)
class GroupSpec:
    """Degree plus a nonempty generator list, the raw input to enumeration."""

    degree: int
    generators: tuple

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        if not self.generators:
            raise ValueError("at least one generator is required")
        for g in self.generators:
            if g.degree != self.degree:
                raise DegreeMismatch(
                    f"generator {g.cycle_string()} has degree {g.degree}, "
                    f"expected {self.degree}"
                )


class GroupTable:
    """A fully enumerated permutation group with a fixed element order.

    Elements are sorted by image tuple; the identity's image tuple is the
    lexicographic minimum of all permutations, so it always sits at index 0.
    Everything downstream indexes into this order.
    """

    __slots__ = ("degree", "generators", "elements", "_pos")

    def __init__(self, degree: int, generators: Sequence[Perm], elements: Sequence[Perm]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self._pos = {p.images: i for i, p in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, perm) -> bool:
        return isinstance(perm, Perm) and perm.images in self._pos

    def __repr__(self) -> str:
        return f"<group of order {len(self.elements)} on {self.degree} points>"

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Perm) -> int:
        try:
            return self._pos[perm.images]
        except KeyError:
            raise KeyError(f"{perm.cycle_string()} is not in this group") from None

    def element(self, i: int) -> Perm:
        return self.elements[i]

    def identity(self) -> Perm:
        return self.elements[0]

    def generator_indices(self) -> tuple:
        return tuple(self.index(g) for g in self.generators)

    def product_index(self, i: int, j: int) -> int:
        return self._pos[(self.elements[i] * self.elements[j]).images]

    def inverse_index(self, i: int) -> int:
        return self._pos[self.elements[i].inverse().images]


def _bfs_closure(degree: int, generators: Sequence[Perm], limit: Optional[int]) -> dict:
    ident = Perm.identity(degree)
    seen = {ident.images: ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in generators:
                q = p * g
                if q.images in seen:
                    continue
                if limit is not None and len(seen) >= limit:
                    raise CapExceeded(f"group exceeds the element cap of {limit}")
                seen[q.images] = q
                new.append(q)
        frontier = new
    return seen


def enumerate_group(spec: GroupSpec, cap: Optional[int] = None) -> GroupTable:
    """Close the generators under multiplication, breadth first.

    Raises CapExceeded as soon as the element count would pass the cap
    (SGK_ELEMENT_CAP, or 200000 by default).
    """
    limit = element_cap() if cap is None else cap
    seen = _bfs_closure(spec.degree, spec.generators, limit)
    elements = sorted(seen.values(), key=lambda p: p.images)
    return GroupTable(spec.degree, spec.generators, elements)


def group_from_generators(
    generators: Sequence[Perm],
    degree: Optional[int] = None,
    cap: Optional[int] = None,
) -> GroupTable:
    gens = tuple(generators)
    if degree is None:
        if not gens:
            raise ValueError("cannot infer a degree from an empty generator list")
        degree = gens[0].degree
    return enumerate_group(GroupSpec(degree, gens), cap=cap)


def small_generating_set(degree: int, elements: Sequence[Perm]) -> tuple:
    """Greedy generating set for an already closed element list."""
    target = len(set(p.images for p in elements))
    gens: list = []
    closed = {Perm.identity(degree).images}
    for p in sorted(elements, key=lambda q: q.images):
        if p.images in closed:
            continue
        gens.append(p)
        closed = set(_bfs_closure(degree, gens, None))
        if len(closed) == target:
            break
    return tuple(gens) if gens else (Perm.identity(degree),)


def orbit(group: GroupTable, point: int) -> frozenset:
    if not 0 <= point < group.degree:
        raise PointOutOfRange(f"point {point} outside the domain of the group")
    seen = {point}
    queue = [point]
    while queue:
        x = queue.pop()
        for g in group.generators:
            y = g.images[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def transversal(group: GroupTable, point: int) -> dict:
    """For each point in the orbit, one group element carrying ``point``
    there.  Breadth first with generators in listed order, so reproducible.
    """
    if not 0 <= point < group.degree:
        raise PointOutOfRange(f"point {point} outside the domain of the group")
    wit = {point: group.identity()}
    frontier = [point]
    while frontier:
        new = []
        for x in frontier:
            for g in group.generators:
                y = g.images[x]
                if y not in wit:
                    wit[y] = wit[x] * g
                    new.append(y)
        frontier = new
    return wit


def stabilizer(group: GroupTable, point: int) -> GroupTable:
    """Point stabiliser as a group in its own right (same degree)."""
    if not 0 <= point < group.degree:
        raise PointOutOfRange(f"point {point} outside the domain of the group")
    elems = [p for p in group.elements if p.images[point] == point]
    gens = small_generating_set(group.degree, elems)
    return GroupTable(group.degree, gens, elems)


def is_transitive(group: GroupTable, domain_size: Optional[int] = None) -> bool:
    if domain_size is not None and domain_size != group.degree:
        raise DegreeMismatch(
            f"group degree {group.degree} does not match domain size {domain_size}"
        )
    return len(orbit(group, 0)) == group.degree


@dataclass(frozen=True)
class Action:
    """A finite group acting on {0, ..., n_points-1}, one image row per
    group element.

    ``group`` indexes the rows and may act unfaithfully here; that is the
    point of keeping rows separate from the group's own degree.  Any object
    with ``__len__``, ``generator_indices()`` and ``product_index(i, j)``
    can stand in for a GroupTable.
    """

    group: object
    n_points: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != len(self.group):
            raise DegreeMismatch("need exactly one image row per group element")

    @classmethod
    def natural(cls, group: GroupTable) -> "Action":
        return cls(group, group.degree, tuple(p.images for p in group))

    def generator_rows(self) -> tuple:
        return tuple(self.rows[i] for i in self.group.generator_indices())

    def kernel_size(self) -> int:
        ident = tuple(range(self.n_points))
        return sum(1 for r in self.rows if r == ident)

    def is_faithful(self) -> bool:
        return len(set(self.rows)) == len(self.rows)

    def stabilizer_indices(self, point: int) -> list:
        return [i for i, r in enumerate(self.rows) if r[point] == point]

    def orbit_of(self, point: int) -> frozenset:
        gen_rows = self.generator_rows()
        seen = {point}
        queue = [point]
        while queue:
            x = queue.pop()
            for row in gen_rows:
                y = row[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def validate(self) -> None:
        """Full homomorphism check, quadratic in the group order."""
        size = len(self.group)
        for i in range(size):
            ri = self.rows[i]
            for j in range(size):
                rj = self.rows[j]
                k = self.group.product_index(i, j)
                composite = tuple(rj[x] for x in ri)
                if composite != self.rows[k]:
                    raise ValueError(
                        f"rows {i} and {j} do not compose to row {k}; "
                        "this is not an action"
                    )

    def faithful_group(self) -> GroupTable:
        """The image of the action as an honest permutation group."""
        if not self.is_faithful():
            raise ValueError("the action has a kernel, its image loses elements")
        elements = sorted(Perm(r) for r in self.rows)
        gens = [Perm(r) for r in self.generator_rows()]
        return GroupTable(self.n_points, gens, elements)


GroupLike = Union[GroupTable, Action]


def coerce_action(group_or_action: GroupLike, n_points: int) -> Action:
    if isinstance(group_or_action, Action):
        act = group_or_action
    elif isinstance(group_or_action, GroupTable):
        act = Action.natural(group_or_action)
    else:
        raise TypeError("expected a GroupTable or an Action")
    if act.n_points != n_points:
        raise DegreeMismatch(
            f"action on {act.n_points} points where {n_points} were needed"
        )
    return act


def right_regular_action(group: GroupTable) -> Action:
    """The group acting on its own element list by right multiplication."""
    size = len(group)
    rows = []
    for j in range(size):
        rows.append(tuple(group.product_index(i, j) for i in range(size)))
    return Action(group, size, tuple(rows))


def permutation_equivalent(group, act1: Action, act2: Action):
    """A point bijection intertwining two transitive actions of one group.

    Returns ``eta`` with ``eta[p^g] == eta[p]^g`` for every element, or
    None.  Both actions must index rows by the same group.
    """
    if len(act1.rows) != len(group) or len(act2.rows) != len(group):
        raise DegreeMismatch("both actions must have one row per group element")
    n = act1.n_points
    if act2.n_points != n:
        return None
    if len(act1.orbit_of(0)) != n or len(act2.orbit_of(0)) != n:
        raise NotTransitive("permutation equivalence is defined for transitive actions")
    stab1 = frozenset(i for i, r in enumerate(act1.rows) if r[0] == 0)
    for target in range(n):
        if frozenset(i for i, r in enumerate(act2.rows) if r[target] == target) != stab1:
            continue
        eta: list = [None] * n
        ok = True
        for i, row in enumerate(act1.rows):
            src, dst = row[0], act2.rows[i][target]
            if eta[src] is None:
                eta[src] = dst
            elif eta[src] != dst:
                ok = False
                break
        if not ok or any(v is None for v in eta) or len(set(eta)) != n:
            continue
        if all(
            eta[row[p]] == act2.rows[i][eta[p]]
            for i, row in enumerate(act1.rows)
            for p in range(n)
        ):
            return tuple(eta)
    return None


def permutation_equivalent_inner(group, act1: Action, act2: Action):
    """Equivalence up to an inner automorphism: eta(p^g) = eta(p)^(c⁻¹gc).

    Conjugators are tried in element order; returns (eta, c) or None.
    """
    size = len(group)
    for ci in range(size):
        inv = group.inverse_index(ci)
        rows = tuple(
            act2.rows[group.product_index(group.product_index(inv, i), ci)]
            for i in range(size)
        )
        eta = permutation_equivalent(group, act1, Action(group, act2.n_points, rows))
        if eta is not None:
            return eta, group.element(ci)
    return None
