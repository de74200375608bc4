"""Dihedral groups and symmetric generator sets.

The dihedral group of order ``2n`` uses the presentation
``<r, s | s^2 = r^n = e, s r s = r^-1>``.  Elements are encoded as
integer indices in a fixed canonical ordering — rotations first, then
reflections::

    0 .. n-1     ->  e, r, r^2, ..., r^(n-1)
    n .. 2n-1    ->  s, sr, sr^2, ..., sr^(n-1)

This ordering is stable across runs and is used everywhere vertex or
column indices are derived from group elements.

Generator sets are stored as ordered tuples; the listed order fixes the
association between classical-code columns and generators downstream,
so two sets with the same elements in different orders are deliberately
distinct objects.

Naming convention: D_n denotes the symmetries of the n-gon, of order 2n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "DihedralGroup",
    "GeneratorSet",
    "GroupError",
    "sample_symmetric_generators",
    "sample_tnc_pair",
    "check_tnc",
]


class GroupError(ValueError):
    """Raised for invalid elements or infeasible generator-set requests."""


_ELEMENT_RE = re.compile(r"^(s)?(?:r(?:\^(-?\d+))?)?$")


class DihedralGroup:
    """Dihedral group D_n of order 2n, elements encoded as ints."""

    def __init__(self, n: int):
        if n < 1:
            raise GroupError("rotation order must be >= 1")
        self.n = n
        self.order = 2 * n

    # element index <-> (flip, rot)

    def _split(self, x: int) -> tuple[int, int]:
        if not 0 <= x < self.order:
            raise GroupError(f"element index {x} out of range for D_{self.n}")
        return divmod(x, self.n)

    def _join(self, flip: int, rot: int) -> int:
        return flip * self.n + rot % self.n

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> list[int]:
        """All elements in the canonical ordering."""
        return list(range(self.order))

    def multiply(self, x: int, y: int) -> int:
        # (s^f1 r^k1)(s^f2 r^k2) = s^(f1^f2) r^(k2 + (-1)^f2 k1)
        f1, k1 = self._split(x)
        f2, k2 = self._split(y)
        rot = k2 - k1 if f2 else k2 + k1
        return self._join(f1 ^ f2, rot)

    def invert(self, x: int) -> int:
        f, k = self._split(x)
        return x if f else self._join(0, -k)

    def is_involution(self, x: int) -> bool:
        return x != 0 and self.multiply(x, x) == 0

    # presentation-notation serialization ("e", "r^2", "s", "sr^3")

    def element_name(self, x: int) -> str:
        f, k = self._split(x)
        if f == 0:
            if k == 0:
                return "e"
            return "r" if k == 1 else f"r^{k}"
        if k == 0:
            return "s"
        return "sr" if k == 1 else f"sr^{k}"

    def parse_element(self, name: str) -> int:
        text = name.strip().replace(" ", "")
        if text == "e":
            return 0
        m = _ELEMENT_RE.match(text)
        if not m or (m.group(1) is None and "r" not in text):
            raise GroupError(f"cannot parse element {name!r}")
        flip = 1 if m.group(1) else 0
        if "r" in text:
            rot = int(m.group(2)) if m.group(2) is not None else 1
        else:
            rot = 0
        return self._join(flip, rot)

    def __repr__(self) -> str:
        return f"DihedralGroup(n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, DihedralGroup) and self.n == other.n

    def __hash__(self):
        return hash(("D", self.n))


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric generating subset, identity excluded, in a fixed order."""

    group: DihedralGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        seen = set(self.elements)
        if len(seen) != len(self.elements):
            raise GroupError("generator set contains duplicates")
        if self.group.identity in seen:
            raise GroupError("generator set must not contain the identity")
        for g in self.elements:
            if self.group.invert(g) not in seen:
                raise GroupError(
                    f"set is not symmetric: inverse of "
                    f"{self.group.element_name(g)} is missing"
                )

    @property
    def delta(self) -> int:
        return len(self.elements)

    def names(self) -> list[str]:
        return [self.group.element_name(g) for g in self.elements]

    @classmethod
    def from_names(cls, group: DihedralGroup, names) -> "GeneratorSet":
        return cls(group, tuple(group.parse_element(t) for t in names))

    def __repr__(self) -> str:
        return "{" + ", ".join(self.names()) + "}"


def sample_symmetric_generators(
    group: DihedralGroup, delta: int, rng: np.random.Generator
) -> GeneratorSet:
    """Draw a random symmetric generator set of the exact size ``delta``.

    Involutions are drawn singly and other elements as {g, g^-1} pairs.
    Raises GroupError when no symmetric set of that size can satisfy the
    total non-conjugacy requirements:

    * ``delta >= |G|/2`` leaves no room for two disjoint valid sets;
    * odd ``delta`` on D_n with odd n forces a reflection into both sets,
      and all reflections are conjugate when n is odd.
    """
    if delta < 1:
        raise GroupError("delta must be positive")
    if delta >= group.order // 2:
        raise GroupError(
            f"delta={delta} is infeasible: a valid complex over D_{group.n} "
            f"requires delta < |G|/2 = {group.order // 2}"
        )
    if group.n % 2 == 1 and delta % 2 == 1:
        raise GroupError(
            f"delta={delta} is infeasible: an odd-size symmetric set in "
            f"D_{group.n} (n odd) must contain a reflection, and all "
            f"reflections are conjugate, so total non-conjugacy cannot hold"
        )
    pool = list(range(1, group.order))
    rng.shuffle(pool)
    chosen: list[int] = []
    chosen_set: set[int] = set()
    for g in pool:
        if len(chosen) == delta:
            break
        if g in chosen_set:
            continue
        inv = group.invert(g)
        if inv == g:
            chosen.append(g)
            chosen_set.add(g)
        elif len(chosen) + 2 <= delta:
            chosen.extend((g, inv))
            chosen_set.update((g, inv))
    if len(chosen) < delta:
        # Only non-involution pairs remained with one slot left; for the
        # dihedral parameter ranges accepted above an involution always
        # exists, so this indicates sampling exhausted them by chance.
        raise GroupError(
            f"could not assemble a symmetric set of size {delta} in D_{group.n}"
        )
    return GeneratorSet(group, tuple(sorted(chosen)))


def check_tnc(
    group: DihedralGroup, gen_a: GeneratorSet, gen_b: GeneratorSet
) -> Optional[tuple[int, int, int]]:
    """Exhaustive total non-conjugacy check: a*g != g*b for all a, b, g.

    Returns None when the condition holds, else the first violating
    witness (a, b, g) in scan order.
    """
    for a in gen_a.elements:
        for g in group.elements():
            ag = group.multiply(a, g)
            for b in gen_b.elements:
                if ag == group.multiply(g, b):
                    return (a, b, g)
    return None


def sample_tnc_pair(
    group: DihedralGroup,
    delta: int,
    rng: np.random.Generator,
    max_retries: int = 1000,
) -> tuple[GeneratorSet, GeneratorSet]:
    """Sample generator sets (A, B) jointly until total non-conjugacy holds.

    Retries up to ``max_retries`` full resamples, then raises GroupError.
    """
    for _ in range(max_retries):
        gen_a = sample_symmetric_generators(group, delta, rng)
        gen_b = sample_symmetric_generators(group, delta, rng)
        if check_tnc(group, gen_a, gen_b) is None:
            return gen_a, gen_b
    raise GroupError(
        f"no totally non-conjugate pair found for D_{group.n}, delta={delta} "
        f"after {max_retries} attempts"
    )
