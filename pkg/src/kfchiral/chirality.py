"""Chirality points: Vandermonde-type parameterizations, Pluecker relations,
the signed Sym(n) action on points, and the augmentation/projection maps.

Coordinates are indexed by increasing k-tuples J. The primary
parameterization is the product form y_J = prod_{i<j in J} (x_i - x_j);
the determinant form det(p_i(x_j)) comes from :func:`generalized_point`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .perm import Permutation, act_poly, act_subset_coord, all_ksubsets, all_permutations, inversions_on
from .poly import Poly, Tag, VarKey, canonicalize, entry, param, subsetvar, sym_determinant

__all__ = [
    "ChiralityPoint",
    "GeneralizedSystem",
    "ChiralityWitness",
    "WitnessVerificationError",
    "T",
    "vandermonde_point",
    "chirality_product",
    "monomial_system",
    "generalized_point",
    "signed_lookup",
    "pluecker_polys",
    "act_point",
    "pullback_act_point",
    "tau_point",
    "pi_point",
    "generic_point",
    "commute_witness_ch",
    "vandermonde_coordinate",
    "sign_identity_holds",
    "sign_identity_exhaustive",
    "determinant_image",
]

# Formal variable of the univariate polynomials in a GeneralizedSystem.
T = param(0)


class WitnessVerificationError(AssertionError):
    pass


@dataclass(frozen=True, eq=True)
class ChiralityPoint:
    n: int
    k: int
    coords: Mapping[tuple[int, ...], object]

    __hash__ = None

    def __post_init__(self):
        if self.k < 1 or self.n < 0:
            raise ValueError(f"need k >= 1 and n >= 0, got n={self.n}, k={self.k}")
        keys = set(self.coords)
        expected = set(itertools.combinations(range(1, self.n + 1), self.k))
        if keys != expected:
            raise ValueError(
                f"chirality point needs exactly the {math.comb(self.n, self.k)} coordinates "
                f"indexed by {self.k}-subsets of [{self.n}]"
            )
        object.__setattr__(self, "coords", dict(self.coords))

    def __getitem__(self, J: Sequence[int]):
        return self.coords[tuple(J)]

    def subsets(self) -> list[tuple[int, ...]]:
        return sorted(self.coords)

    def as_point(self) -> dict:
        return {subsetvar(J): v for J, v in self.coords.items()}


@dataclass(frozen=True)
class GeneralizedSystem:
    """k univariate polynomials p_1..p_k in the formal variable ``var``."""

    polys: tuple[Poly, ...]
    var: VarKey = T

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(Poly.coerce(p) for p in self.polys))
        for p in self.polys:
            extra = p.variables() - {self.var}
            if extra:
                raise ValueError(f"system polynomial {p} uses variables other than {self.var}: {sorted(map(str, extra))}")

    @property
    def k(self) -> int:
        return len(self.polys)

    def value(self, i: int, x):
        """p_i(x), 1-based i; x may be a number or a Poly."""
        p = self.polys[i - 1]
        if isinstance(x, Poly):
            return p.substitute({self.var: x})
        return p.evaluate({self.var: x})


def monomial_system(k: int) -> GeneralizedSystem:
    """1, t, ..., t^{k-1}: the determinant-form Vandermonde."""
    t = Poly.var(T)
    return GeneralizedSystem(tuple(t**e for e in range(k)))


def _pairwise_product(vals: Sequence):
    out = 1
    for a, b in itertools.combinations(vals, 2):
        out = out * (a - b)
    return out


def vandermonde_point(x: Sequence, k: int) -> ChiralityPoint:
    """y_J = prod_{i<j in J} (x_i - x_j) for every k-subset J of [n]."""
    n = len(x)
    if k > n:
        raise ValueError(f"k = {k} exceeds n = {n}")
    return ChiralityPoint(n, k, {J: _pairwise_product([x[j - 1] for j in J]) for J in all_ksubsets(n, k)})


def chirality_product(x: Sequence):
    """prod_{i<j} (x_i - x_j) for four ligand values."""
    if len(x) != 4:
        raise ValueError(f"chirality product takes 4 values, got {len(x)}")
    return _pairwise_product(list(x))


def generalized_point(x: Sequence, system: GeneralizedSystem) -> ChiralityPoint:
    """y_J = det(p_i(x_j))_{i in [k], j in J}."""
    n, k = len(x), system.k
    if k > n:
        raise ValueError(f"k = {k} exceeds n = {n}")
    table = {(i, j): system.value(i, x[j - 1]) for i in range(1, k + 1) for j in range(1, n + 1)}
    coords = {J: sym_determinant([[table[i, j] for j in J] for i in range(1, k + 1)]) for J in all_ksubsets(n, k)}
    return ChiralityPoint(n, k, coords)


def _sorting_sign(tup: Sequence[int]) -> int:
    s = 1
    for a, b in itertools.combinations(tup, 2):
        if a > b:
            s = -s
    return s


def signed_lookup(Y: ChiralityPoint, tup: Sequence[int]):
    """Value of the alternating extension: 0 on repeats, else sign(sort) * y_sorted."""
    if len(set(tup)) != len(tup):
        return 0
    return _sorting_sign(tup) * Y[tuple(sorted(tup))]


def _signed_var(tup: Sequence[int]) -> Poly:
    if len(set(tup)) != len(tup):
        return Poly()
    v = Poly.var(subsetvar(sorted(tup)))
    return v if _sorting_sign(tup) > 0 else -v


def pluecker_polys(n: int, k: int) -> list[Poly]:
    """Quadratic exchange relations sum_t (-1)^t <A b_t> <B - b_t>.

    A runs over (k-1)-subsets and B over (k+1)-subsets of [n]. Relations
    that vanish identically are dropped; the rest are deduplicated up to
    sign, keeping first occurrences in generation order.
    """
    if k > n:
        raise ValueError(f"k = {k} exceeds n = {n}")
    if k < 1:
        raise ValueError("k must be positive")
    out: list[Poly] = []
    seen: set = set()
    for A in itertools.combinations(range(1, n + 1), k - 1):
        for B in itertools.combinations(range(1, n + 1), k + 1):
            rel = Poly()
            for t, b in enumerate(B):
                left = _signed_var(A + (b,))
                if left.is_zero():
                    continue
                right = Poly.var(subsetvar(B[:t] + B[t + 1 :]))
                term = left * right
                rel = rel - term if t & 1 else rel + term
            if rel.is_zero():
                continue
            canon = canonicalize(rel)[1]
            if canon in seen:
                continue
            seen.add(canon)
            out.append(rel)
    return out


# -- group action and chain maps ---------------------------------------------


def act_point(g: Permutation, Y: ChiralityPoint) -> ChiralityPoint:
    """(g.Y)_{gJ} = (-1)^{a(g, J)} Y_J; makes the parameterization equivariant."""
    if g.n != Y.n:
        raise ValueError(f"permutation of [{g.n}] acting on a level-{Y.n} point")
    coords = {}
    for J, v in Y.coords.items():
        s, gJ = act_subset_coord(g, J)
        coords[gJ] = v if s > 0 else -v
    return ChiralityPoint(Y.n, Y.k, coords)


def pullback_act_point(g: Permutation, Y: ChiralityPoint) -> ChiralityPoint:
    """Point map dual to the coordinate action g y_J = (-1)^a y_{gJ}.

    Output coordinate J is (-1)^{a(g, J)} Y_{gJ}; this equals
    ``act_point(g.inverse(), Y)``.
    """
    if g.n != Y.n:
        raise ValueError(f"permutation of [{g.n}] acting on a level-{Y.n} point")
    coords = {}
    for J in Y.coords:
        s, gJ = act_subset_coord(g, J)
        v = Y.coords[gJ]
        coords[J] = v if s > 0 else -v
    return ChiralityPoint(Y.n, Y.k, coords)


def tau_point(y: ChiralityPoint, q: int, zero=0) -> ChiralityPoint:
    """Augment a level-n point to level q >= n.

    Coordinate J of the result is y_J if J is inside [n-1], 0 if at least
    two elements of J exceed n-1, and y_{J - j + n} if exactly one (j) does.
    """
    n, k = y.n, y.k
    if q < n:
        raise ValueError(f"cannot augment level {n} to lower level {q}")
    coords = {}
    for J in itertools.combinations(range(1, q + 1), k):
        outside = [j for j in J if j > n - 1]
        if not outside:
            coords[J] = y.coords[J]
        elif len(outside) >= 2:
            coords[J] = zero
        else:
            coords[J] = y.coords[tuple(sorted([j for j in J if j != outside[0]] + [n]))]
    return ChiralityPoint(q, k, coords)


def _restrict(y: ChiralityPoint, m: int) -> ChiralityPoint:
    return ChiralityPoint(m, y.k, {J: v for J, v in y.coords.items() if J[-1] <= m})


def pi_point(y: ChiralityPoint, m: int) -> ChiralityPoint:
    """Forget every coordinate y_J with J not inside [m]."""
    if m < y.k or m > y.n:
        raise ValueError(f"projection level must satisfy k <= m <= n, got m={m}, k={y.k}, n={y.n}")
    return _restrict(y, m)


def generic_point(n: int, k: int) -> ChiralityPoint:
    return ChiralityPoint(n, k, {J: Poly.var(subsetvar(J)) for J in all_ksubsets(n, k)})


@dataclass
class ChiralityWitness:
    q: int
    n: int
    m: int
    k: int
    g: Permutation
    p: int
    g_prime: Permutation
    g_dprime: Permutation
    L: tuple[int, ...]
    verified: bool = False


def _commute_sides(Y: ChiralityPoint, w: ChiralityWitness) -> tuple[ChiralityPoint, ChiralityPoint]:
    zero = Poly()
    lhs = _restrict(pullback_act_point(w.g, tau_point(Y, w.q, zero)), w.m)
    rhs = pullback_act_point(w.g_dprime, tau_point(_restrict(pullback_act_point(w.g_prime, Y), w.p), w.m, zero))
    return lhs, rhs


def commute_witness_ch(q: int, n: int, m: int, g: Permutation, k: int, verify: bool = True) -> ChiralityWitness:
    """Construct (p, g', g'') for pi_{q,m} g tau_{n,q} = g'' tau_{p,m} pi_{n,p} g'.

    Group elements act on points through the pullback of the coordinate
    action (:func:`pullback_act_point`). With L the elements of [m] sent
    into [n-1] by g: if L = [m], p = m, g'' = 1 and g' extends g on [m];
    otherwise p = |L| + 1, g'' sends L onto [p-1] in the order of their
    g-images and g' is increasing on [p] with g' g'' = g on L and g'(p) = n.
    The result is checked on the fully symbolic level-n point.
    """
    if not q >= n >= m >= k >= 1:
        raise ValueError(f"need q >= n >= m >= k >= 1, got q={q}, n={n}, m={m}, k={k}")
    if g.n != q:
        raise ValueError(f"g must be a permutation of [{q}]")
    L = tuple(i for i in range(1, m + 1) if g(i) <= n - 1)
    if len(L) == m:
        p = m
        g2 = Permutation.identity(m)
        g1 = Permutation.from_partial(n, {i: g(i) for i in range(1, m + 1)})
    else:
        p = len(L) + 1
        by_image = sorted(L, key=g)
        g2 = Permutation.from_partial(m, {i: r for r, i in enumerate(by_image, 1)})
        g1_map = {r: g(i) for r, i in enumerate(by_image, 1)}
        g1_map[p] = n
        g1 = Permutation.from_partial(n, g1_map)
    w = ChiralityWitness(q, n, m, k, g, p, g1, g2, L)
    if verify:
        lhs, rhs = _commute_sides(generic_point(n, k), w)
        if lhs != rhs:
            bad = next(J for J in lhs.coords if lhs.coords[J] != rhs.coords[J])
            raise WitnessVerificationError(
                f"constructed witness fails at coordinate {bad} for q={q}, n={n}, m={m}, k={k}, g={g}"
            )
        w.verified = True
    return w


# -- symbolic identities -----------------------------------------------------


def vandermonde_coordinate(J: Sequence[int]) -> Poly:
    """prod_{i<j in J} (x_i - x_j) as a polynomial in the Param variables."""
    out = Poly.const(1)
    for a, b in itertools.combinations(J, 2):
        out = out * (Poly.var(param(a)) - Poly.var(param(b)))
    return out


def sign_identity_holds(g: Permutation, J: Sequence[int]) -> bool:
    """prod_{i<j in J}(x_{gi} - x_{gj}) == (-1)^{a(g,J)} prod_{i<j in gJ}(x_i - x_j), symbolically."""
    s, gJ = act_subset_coord(g, J)
    return act_poly(g, vandermonde_coordinate(J)) == vandermonde_coordinate(gJ).scale(s)


def sign_identity_exhaustive(n: int, k: int) -> tuple[int, int]:
    """Check the sign identity for every g in Sym(n) and k-subset J.

    Signs come from the batched inversion kernel and are cross-checked
    against the per-permutation count. Returns (checked, failures).
    """
    perms = list(all_permutations(n))
    arr = np.array([g.images for g in perms], dtype=np.int64)
    checked = failures = 0
    for J in all_ksubsets(n, k):
        inv = _kernels.inversion_counts(arr, np.array([j - 1 for j in J], dtype=np.int64))
        base = vandermonde_coordinate(J)
        for g, a in zip(perms, inv.tolist()):
            gJ = tuple(sorted(g(j) for j in J))
            s = -1 if a & 1 else 1
            ok = a == inversions_on(g, J) and act_poly(g, base) == vandermonde_coordinate(gJ).scale(s)
            checked += 1
            failures += not ok
    return checked, failures


def determinant_image(relation: Poly, k: int) -> Poly:
    """Substitute y_J -> det(m_{p j})_{p in [k], j in J} (generic k x n matrix minors)."""
    images = {}
    for v in relation.variables():
        if v.tag != Tag.SUBSET:
            raise ValueError(f"determinant substitution only applies to subset variables, got {v}")
        if len(v.idx) != k:
            raise ValueError(f"subset variable {v} has size {len(v.idx)}, expected {k}")
        images[v] = sym_determinant([[Poly.var(entry(p, j)) for j in v.idx] for p in range(1, k + 1)])
    return relation.substitute(images)
