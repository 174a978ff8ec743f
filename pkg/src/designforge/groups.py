"""Finite abelian groups Z_m1 x ... x Z_mk with explicit tuple elements."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

Element = Tuple[int, ...]

#: Exhaustive homomorphism checks are run whenever the domain is at most this big.
ISO_CHECK_LIMIT = 1 << 16


class FiniteAbelianGroup:
    """Direct product of cyclic groups, written additively.

    Elements are plain tuples of residues, one per modulus, always kept
    reduced.  The group object carries the arithmetic; elements carry no
    back-reference, so element sets are cheap to build and hash.
    """

    __slots__ = ("moduli", "order")

    def __init__(self, moduli: Sequence[int]) -> None:
        mods = tuple(int(m) for m in moduli)
        if not mods:
            raise ValueError("at least one modulus is required")
        if any(m < 1 for m in mods):
            raise ValueError(f"moduli must all be >= 1, got {mods}")
        self.moduli = mods
        order = 1
        for m in mods:
            order *= m
        self.order = order

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.moduli)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(("FiniteAbelianGroup", self.moduli))

    # -- element handling ------------------------------------------------

    def zero(self) -> Element:
        return (0,) * len(self.moduli)

    def reduce(self, coords: Sequence[int]) -> Element:
        if len(coords) != len(self.moduli):
            raise ValueError(f"element {tuple(coords)} does not live in {self}")
        return tuple(c % m for c, m in zip(coords, self.moduli))

    def contains(self, a: Sequence[int]) -> bool:
        return len(a) == len(self.moduli) and all(
            0 <= c < m for c, m in zip(a, self.moduli)
        )

    def add(self, a: Element, b: Element) -> Element:
        if len(a) != len(self.moduli) or len(b) != len(self.moduli):
            raise ValueError(f"mismatched ambient group for {a} + {b} in {self}")
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        if len(a) != len(self.moduli):
            raise ValueError(f"mismatched ambient group for -{a} in {self}")
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def sub(self, a: Element, b: Element) -> Element:
        if len(a) != len(self.moduli) or len(b) != len(self.moduli):
            raise ValueError(f"mismatched ambient group for {a} - {b} in {self}")
        return tuple((x - y) % m for x, y, m in zip(a, b, self.moduli))

    def scalar_mul(self, k: int, a: Element) -> Element:
        return tuple((k * x) % m for x, m in zip(a, self.moduli))

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order."""
        return itertools.product(*(range(m) for m in self.moduli))

    def index(self, a: Element) -> int:
        """Mixed-radix rank of an element in lexicographic order."""
        idx = 0
        for c, m in zip(a, self.moduli):
            idx = idx * m + (c % m)
        return idx

    def element(self, idx: int) -> Element:
        coords = []
        for m in reversed(self.moduli):
            coords.append(idx % m)
            idx //= m
        return tuple(reversed(coords))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteAbelianGroup":
        return cls(data["moduli"])


class Subgroup:
    """A verified subgroup: contains zero, closed under addition and negation."""

    __slots__ = ("parent", "elements")

    def __init__(
        self,
        parent: FiniteAbelianGroup,
        elements: Iterable[Element],
        *,
        verify: bool = True,
    ) -> None:
        elems = frozenset(parent.reduce(e) for e in elements)
        if verify:
            if parent.zero() not in elems:
                raise ValueError("not a subgroup: missing the zero element")
            for a in elems:
                if parent.neg(a) not in elems:
                    raise ValueError(f"not a subgroup: -{a} missing")
                for b in elems:
                    if parent.add(a, b) not in elems:
                        raise ValueError(f"not a subgroup: {a} + {b} escapes")
        self.parent = parent
        self.elements = elems

    @classmethod
    def trivial(cls, parent: FiniteAbelianGroup) -> "Subgroup":
        return cls(parent, [parent.zero()], verify=False)

    @classmethod
    def whole(cls, parent: FiniteAbelianGroup) -> "Subgroup":
        return cls(parent, parent.elements(), verify=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def __contains__(self, a: Element) -> bool:
        return a in self.elements

    def __iter__(self) -> Iterator[Element]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"

    def to_json(self) -> list:
        return [list(e) for e in sorted(self.elements)]


def subgroup_generated(
    group: FiniteAbelianGroup, gens: Iterable[Element]
) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure under repeated addition)."""
    gens = [group.reduce(g) for g in gens]
    closure = {group.zero()}
    frontier = list(closure)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                s = group.add(a, g)
                if s not in closure:
                    closure.add(s)
                    nxt.append(s)
        frontier = nxt
    return Subgroup(group, closure, verify=False)


def cosets(
    group: FiniteAbelianGroup,
    sub: Subgroup,
    *,
    rep_choice: Optional[Callable[[frozenset], Element]] = None,
) -> List[Tuple[Element, frozenset]]:
    """Partition of the group into cosets of ``sub``.

    Cosets are listed in lexicographic order of their smallest member; the
    representative is that smallest member unless ``rep_choice`` overrides it.
    Downstream results must not depend on the representative choice, so
    tests rerun constructions with randomized choices.
    """
    if sub.parent != group:
        raise ValueError("subgroup does not belong to this group")
    seen: Dict[Element, None] = {}
    out: List[Tuple[Element, frozenset]] = []
    for a in group.elements():
        if a in seen:
            continue
        coset = frozenset(group.add(a, n) for n in sub.elements)
        for x in coset:
            seen[x] = None
        rep = rep_choice(coset) if rep_choice is not None else min(coset)
        if rep not in coset:
            raise ValueError(f"representative {rep} not inside its coset")
        out.append((rep, coset))
    out.sort(key=lambda pair: min(pair[1]))
    return out


def random_rep_choice(rng: random.Random) -> Callable[[frozenset], Element]:
    """A coset-representative picker drawing uniformly from each coset."""

    def pick(coset: frozenset) -> Element:
        return rng.choice(sorted(coset))

    return pick


class GroupIso:
    """Tabulated isomorphism from a multiplicative domain onto an abelian group.

    The domain is given extensionally as a ``forward`` table keyed by whatever
    hashable representation the domain uses (field or ring elements here).
    ``mul`` is the domain's multiplication; when present it enables the
    exhaustive homomorphism check.
    """

    def __init__(
        self,
        codomain: FiniteAbelianGroup,
        forward: Dict[Hashable, Element],
        *,
        domain: str = "",
        mul: Optional[Callable[[Hashable, Hashable], Hashable]] = None,
    ) -> None:
        self.codomain = codomain
        self.forward = dict(forward)
        self.domain = domain
        self.mul = mul

    def __call__(self, x: Hashable) -> Element:
        try:
            return self.forward[x]
        except KeyError:
            raise KeyError(f"{x!r} is not in the domain of this isomorphism") from None

    def map_set(self, xs: Iterable[Hashable]) -> frozenset:
        return frozenset(self(x) for x in xs)

    def verify(self) -> None:
        """Check bijectivity, and the homomorphism law if the domain is small."""
        images = set(self.forward.values())
        if len(images) != len(self.forward):
            raise ValueError(f"isomorphism table for {self.domain} is not injective")
        for img in images:
            if not self.codomain.contains(img):
                raise ValueError(f"image {img} outside {self.codomain}")
        if self.mul is not None and len(self.forward) <= ISO_CHECK_LIMIT:
            keys = list(self.forward)
            for x in keys:
                fx = self.forward[x]
                for y in keys:
                    lhs = self.forward[self.mul(x, y)]
                    rhs = self.codomain.add(fx, self.forward[y])
                    if lhs != rhs:
                        raise ValueError(
                            f"not a homomorphism at ({x!r}, {y!r}): {lhs} != {rhs}"
                        )
