"""Permutations of [n], k-subsets, and the Sym(n) action on polynomial variables.

Permutations are 1-based: ``Permutation((2, 1, 3))`` swaps 1 and 2.
Subsets are plain strictly increasing tuples of positive integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .poly import Poly, Tag, VarKey, canonicalize

__all__ = [
    "Permutation",
    "all_permutations",
    "all_ksubsets",
    "inversions_on",
    "act_subset_coord",
    "act_poly",
    "relabel_poly",
    "support",
    "orbit_up_to_sign",
    "ORBIT_TAGS",
]


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of [{len(images)}]: {list(images)}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        return cls(tuple(im))

    @classmethod
    def cycle(cls, n: int, *cyc: int) -> "Permutation":
        """The cycle ``cyc[0] -> cyc[1] -> ... -> cyc[0]`` in Sym(n)."""
        im = list(range(1, n + 1))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            im[a - 1] = b
        return cls(tuple(im))

    @classmethod
    def from_partial(cls, n: int, mapping: dict[int, int]) -> "Permutation":
        """Extend an injective partial map to a permutation of [n].

        Unmapped points go to the unused images in increasing order.
        """
        im = [0] * n
        for a, b in mapping.items():
            im[a - 1] = b
        free = iter(sorted(set(range(1, n + 1)) - set(mapping.values())))
        for a in range(n):
            if not im[a]:
                im[a] = next(free)
        return cls(tuple(im))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # composition: (g * h)(i) = g(h(i))
        if self.n != other.n:
            raise ValueError("cannot compose permutations of different degrees")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, gi in enumerate(self.images, 1):
            inv[gi - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(gi == i for i, gi in enumerate(self.images, 1))

    def sign(self) -> int:
        return -1 if inversions_on(self, range(1, self.n + 1)) & 1 else 1

    def to_list(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        return str(list(self.images))


def all_permutations(n: int) -> Iterator[Permutation]:
    """Sym(n) in lexicographic order of one-line notation."""
    for im in itertools.permutations(range(1, n + 1)):
        yield Permutation(im)


def all_ksubsets(n: int, k: int) -> list[tuple[int, ...]]:
    if k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return list(itertools.combinations(range(1, n + 1), k))


def _check_subset(g: Permutation, J: Sequence[int]) -> None:
    if any(j < 1 or j > g.n for j in J):
        raise ValueError(f"subset {tuple(J)} is not inside [{g.n}]")


def inversions_on(g: Permutation, J: Iterable[int]) -> int:
    """Number of pairs i < j in J with g(i) > g(j)."""
    J = sorted(J)
    _check_subset(g, J)
    im = [g.images[j - 1] for j in J]
    return sum(1 for a, b in itertools.combinations(im, 2) if a > b)


def act_subset_coord(g: Permutation, J: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Signed image of the coordinate y_J: ``g y_J = sign * y_{gJ}``."""
    a = inversions_on(g, J)
    gJ = tuple(sorted(g.images[j - 1] for j in J))
    return (-1 if a & 1 else 1), gJ


def _sort_sign(seq: Sequence[int]) -> int:
    s = 1
    for a, b in itertools.combinations(seq, 2):
        if a > b:
            s = -s
    return s


# Which index slots of each variable kind are permuted.
_MOVED_SLOTS = {
    Tag.OFFDIAG: (0, 1),
    Tag.SYMOFFDIAG: (0, 1),
    Tag.SUBSET: None,  # all slots, with sign
    Tag.PARAM: (0,),
    Tag.LOADING: (0,),
    Tag.COLOADING: (1,),
    Tag.ENTRY: (1,),
}

ORBIT_TAGS = {
    "offdiag": frozenset({Tag.OFFDIAG, Tag.SYMOFFDIAG}),
    "subset": frozenset({Tag.SUBSET}),
    "param": frozenset({Tag.PARAM}),
}


def _relabel_var(v: VarKey, f, tags) -> tuple[int, VarKey]:
    tag, idx = v
    if tags is not None and tag not in tags:
        return 1, v
    if tag == Tag.SUBSET:
        im = [f(j) for j in idx]
        return _sort_sign(im), VarKey(tag, tuple(sorted(im)))
    slots = _MOVED_SLOTS[tag]
    new = list(idx)
    for s in slots:
        new[s] = f(idx[s])
    if tag == Tag.SYMOFFDIAG and new[0] > new[1]:
        new.reverse()
    return 1, VarKey(tag, tuple(new))


def relabel_poly(mapping: dict[int, int], p: Poly, tags=None) -> Poly:
    """Rename indices of every variable through the injective map ``mapping``.

    Subset variables pick up the sign of the sorting permutation, so this
    agrees with :func:`act_poly` for any permutation extending ``mapping``.
    """
    def f(i):
        try:
            return mapping[i]
        except KeyError:
            raise ValueError(f"index {i} has no image") from None

    return p.map_vars(lambda v: _relabel_var(v, f, tags))


def act_poly(g: Permutation, p: Poly, tags=None) -> Poly:
    """Apply g to p as a ring automorphism.

    y_ij -> y_{g i, g j}; y_J -> (-1)^a y_{gJ}; x_i -> x_{g i}; b_ip -> b_{g i, p};
    c_pj -> c_{p, g j}; m_pj -> m_{p, g j}. ``tags`` restricts the action to
    the given variable kinds (others are fixed).
    """
    n = g.n
    im = g.images

    def f(i):
        if i < 1 or i > n:
            raise ValueError(f"index {i} out of range for a permutation of [{n}]")
        return im[i - 1]

    return p.map_vars(lambda v: _relabel_var(v, f, tags))


def support(p: Poly, tags=None) -> tuple[int, ...]:
    """Sorted indices touched by the action on p's variables."""
    out = set()
    for v in p.variables():
        if tags is not None and v.tag not in tags:
            continue
        slots = _MOVED_SLOTS[v.tag]
        if slots is None:
            out.update(v.idx)
        else:
            out.update(v.idx[s] for s in slots)
    return tuple(sorted(out))


def orbit_up_to_sign(seed: Poly, n: int, tags=None) -> set[Poly]:
    """Canonical representatives of the Sym(n)-orbit of ``seed``, signs identified.

    Only the images of the support matter, so the enumeration runs over
    injections of the support into [n] instead of all of Sym(n).
    """
    if seed.is_zero():
        raise ValueError("orbit of the zero polynomial")
    sup = support(seed, tags)
    if sup and sup[-1] > n:
        raise ValueError(f"seed uses index {sup[-1]} > n = {n}")
    out = set()
    for img in itertools.permutations(range(1, n + 1), len(sup)):
        q = relabel_poly(dict(zip(sup, img)), seed, tags)
        out.add(canonicalize(q)[1])
    return out
