"""Reynolds operator of a finite permutation group, by averaging.

Over the rationals averaging over the group is the projection onto the
invariants, and it is linear over the invariant ring. The determinant
substitution check for Pluecker relations lives here too, as the testable
trace of the SL_k invariant theory argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .chirality import determinant_image
from .perm import ORBIT_TAGS, Permutation, act_poly, all_permutations
from .poly import Poly

__all__ = [
    "GroupAction",
    "NotInvariantError",
    "ModuleCheck",
    "average",
    "is_invariant",
    "module_identity_check",
    "det_substitution_check",
]


class NotInvariantError(ValueError):
    pass


@dataclass(frozen=True)
class GroupAction:
    """A finite group of permutations acting on one kind of variable.

    ``kind`` is one of ``"offdiag"``, ``"subset"`` or ``"param"``; variables
    of other kinds are left fixed. Closure is checked on construction.
    """

    elements: tuple[Permutation, ...]
    kind: str = "param"

    def __post_init__(self):
        if self.kind not in ORBIT_TAGS:
            raise ValueError(f"unknown action kind {self.kind!r}; expected one of {sorted(ORBIT_TAGS)}")
        elems = tuple(dict.fromkeys(self.elements))
        if not elems:
            raise ValueError("group must have at least one element")
        n = elems[0].n
        if any(g.n != n for g in elems):
            raise ValueError("group elements have different degrees")
        pool = set(elems)
        if Permutation.identity(n) not in pool:
            raise ValueError("group does not contain the identity")
        for g in elems:
            if g.inverse() not in pool:
                raise ValueError(f"group is not closed under inverses: missing inverse of {g}")
            for h in elems:
                if g * h not in pool:
                    raise ValueError(f"group is not closed under composition: {g} * {h}")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def symmetric(cls, n: int, kind: str = "param") -> "GroupAction":
        return cls(tuple(all_permutations(n)), kind)

    @classmethod
    def alternating(cls, n: int, kind: str = "param") -> "GroupAction":
        return cls(tuple(g for g in all_permutations(n) if g.sign() > 0), kind)

    @classmethod
    def generated_by(cls, gens: Iterable[Permutation], kind: str = "param") -> "GroupAction":
        gens = list(gens)
        if not gens:
            raise ValueError("need at least one generator")
        seen = {Permutation.identity(gens[0].n)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = g * a
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return cls(tuple(sorted(seen, key=lambda g: g.images)), kind)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def tags(self):
        return ORBIT_TAGS[self.kind]

    def act(self, g: Permutation, p: Poly) -> Poly:
        return act_poly(g, p, self.tags)


def average(p: Poly, H: GroupAction) -> Poly:
    """(1/|H|) sum_h h.p"""
    total = Poly()
    for h in H.elements:
        total = total + H.act(h, p)
    return total.scale(Fraction(1, H.order))


def is_invariant(p: Poly, H: GroupAction) -> bool:
    return all(H.act(h, p) == p for h in H.elements)


@dataclass
class ModuleCheck:
    holds: bool
    lhs: Poly
    rhs: Poly


def module_identity_check(r: Poly, f: Poly, H: GroupAction) -> ModuleCheck:
    """Compare rho(r f) with rho(r) f for an invariant f."""
    if not is_invariant(f, H):
        raise NotInvariantError(f"{f} is not invariant under the given group")
    lhs = average(r * f, H)
    rhs = average(r, H) * f
    return ModuleCheck(lhs == rhs, lhs, rhs)


def det_substitution_check(relation: Poly, k: int) -> bool:
    """True iff substituting y_J -> det of the J-columns of a generic k x n matrix gives 0."""
    return determinant_image(relation, k).is_zero()
