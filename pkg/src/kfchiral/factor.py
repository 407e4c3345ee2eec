"""Off-diagonal matrices of bounded rank: points, equations, and chain maps.

Covers the (symmetric) off-diagonal rank-<=k varieties behind the k-factor
model: seeded samplers, principal submatrices, off-diagonal minors and
pentads, the rank factorization that makes the "automatic" entries
checkable, the k = 1 completion oracle, augmentation/truncation maps, the
brute-force witness search for the interchange identity, and the
non-Noetherian chain of cycle monomials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .batch import CompiledPolys
from .perm import Permutation, all_permutations, relabel_poly
from .poly import Poly, offdiag, symoffdiag, sym_determinant

__all__ = [
    "OffDiagMatrix",
    "FactorSample",
    "EquationReport",
    "Factorization",
    "CommuteWitness",
    "DemoTable",
    "SingularBlockError",
    "ReconstructionError",
    "ZeroEntryError",
    "WitnessNotFoundError",
    "generic_offdiag",
    "act_matrix",
    "sample_offdiag_rank",
    "principal_submatrix",
    "offdiag_minor_polys",
    "minor_count",
    "pentad_poly",
    "all_pentads",
    "check_equations",
    "rank_factorize",
    "rank1_complete",
    "tau_augment",
    "pi_truncate",
    "find_commute_witness_fm",
    "nonnoetherian_demo",
]

STAT_TOL = 1e-9


class SingularBlockError(ValueError):
    """The pivot block Y[I, J] is not invertible."""


class ReconstructionError(ValueError):
    """The rank-k factorization does not reproduce some entry."""


class ZeroEntryError(ValueError):
    """rank1_complete only handles matrices with every entry nonzero."""


class WitnessNotFoundError(RuntimeError):
    pass


@dataclass(frozen=True, eq=True)
class OffDiagMatrix:
    """An n x n table without diagonal; ``values`` holds every ordered pair i != j."""

    n: int
    values: Mapping[tuple[int, int], object]
    symmetric: bool = False

    __hash__ = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"matrix size must be positive, got {self.n}")
        expected = {(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j}
        keys = set(self.values)
        if keys != expected:
            bad = sorted(keys - expected)[:3] or sorted(expected - keys)[:3]
            raise ValueError(f"off-diagonal entries do not match [{self.n}] x [{self.n}] minus diagonal near {bad}")
        if self.symmetric:
            for i, j in expected:
                if i < j and self.values[i, j] != self.values[j, i]:
                    raise ValueError(f"symmetric matrix has y[{i},{j}] != y[{j},{i}]")
        object.__setattr__(self, "values", dict(self.values))

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int], object], symmetric: bool = False) -> "OffDiagMatrix":
        return cls(n, {(i, j): f(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j}, symmetric)

    @classmethod
    def zeros(cls, n: int, symmetric: bool = False, zero=0) -> "OffDiagMatrix":
        return cls.from_function(n, lambda i, j: zero, symmetric)

    def __getitem__(self, ij: tuple[int, int]):
        return self.values[ij]

    def pairs(self):
        return sorted(self.values)

    def as_point(self) -> dict:
        """Variable assignment for evaluating equations (both y_ij and symmetric s_ij when symmetric)."""
        pt = {offdiag(i, j): v for (i, j), v in self.values.items()}
        if self.symmetric:
            for (i, j), v in self.values.items():
                if i < j:
                    pt[symoffdiag(i, j)] = v
        return pt

    def dense(self, diagonal=None) -> list[list]:
        return [[diagonal if i == j else self.values[i, j] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]


@dataclass
class FactorSample:
    n: int
    k: int
    symmetric: bool
    mode: str
    seed: int
    B: list[list]
    C: list[list]
    derived: OffDiagMatrix
    sigma_diag: Optional[list[float]] = None
    covariance: Optional[list[list[float]]] = None


def generic_offdiag(n: int, symmetric: bool = False) -> OffDiagMatrix:
    """The fully symbolic off-diagonal matrix with entries y_ij (or s_ij)."""
    var = symoffdiag if symmetric else offdiag
    return OffDiagMatrix.from_function(n, lambda i, j: Poly.var(var(i, j)), symmetric)


def act_matrix(g: Permutation, y: OffDiagMatrix) -> OffDiagMatrix:
    """Simultaneous row/column permutation: (g.y)[g i, g j] = y[i, j]."""
    if g.n != y.n:
        raise ValueError(f"permutation of [{g.n}] acting on a {y.n} x {y.n} matrix")
    return OffDiagMatrix(y.n, {(g(i), g(j)): v for (i, j), v in y.values.items()}, y.symmetric)


# -- sampling -------------------------------------------------------------


def _small_rational(rng: np.random.Generator) -> Fraction:
    num = int(rng.integers(1, 10)) * (1 if rng.integers(0, 2) else -1)
    den = int(rng.integers(1, 5))
    return Fraction(num, den)


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def sample_offdiag_rank(
    n: int,
    k: int,
    symmetric: bool = False,
    seed: int = 0,
    mode: str = "exact",
    check: bool = True,
) -> FactorSample:
    """Draw a point of the off-diagonal rank-<=k variety from y = B C off the diagonal.

    In exact mode the loadings are small nonzero rationals and (when
    ``check``) every off-diagonal (k+1)-minor of the result is verified to
    be zero. Statistical mode draws real loadings and a positive diagonal
    and also returns the covariance diag(sigma) + B B^T (symmetric case).
    """
    seed = _check_seed(seed)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    rng = np.random.default_rng(seed)

    if mode == "exact":
        B = [[_small_rational(rng) for _ in range(k)] for _ in range(n)]
        C = [list(col) for col in zip(*B)] if symmetric else [[_small_rational(rng) for _ in range(n)] for _ in range(k)]
        if k == 0:
            C = []
        derived = OffDiagMatrix.from_function(
            n, lambda i, j: sum((B[i - 1][p] * C[p][j - 1] for p in range(k)), Fraction(0)), symmetric
        )
        if check:
            for R, Cols in _disjoint_pairs(n, k + 1):
                if sym_determinant([[derived[r, c] for c in Cols] for r in R]) != 0:
                    raise AssertionError(f"sampled matrix has a nonzero minor at rows {R}, cols {Cols}")
        return FactorSample(n, k, symmetric, mode, seed, B, C, derived)

    if mode == "statistical":
        Bm = rng.standard_normal((n, k))
        Cm = Bm.T.copy() if symmetric else rng.standard_normal((k, n))
        sigma = rng.uniform(0.5, 2.0, n)
        full = Bm @ Cm
        derived = OffDiagMatrix.from_function(n, lambda i, j: float(full[i - 1, j - 1]), symmetric)
        cov = None
        if symmetric:
            covm = np.diag(sigma) + Bm @ Bm.T
            off = ~np.eye(n, dtype=bool)
            if not np.allclose(covm[off], full[off], rtol=0, atol=STAT_TOL):
                raise AssertionError("covariance off-diagonal disagrees with B B^T")
            cov = covm.tolist()
        return FactorSample(n, k, symmetric, mode, seed, Bm.tolist(), Cm.tolist(), derived, sigma.tolist(), cov)

    raise ValueError(f"unknown sampling mode {mode!r} (expected 'exact' or 'statistical')")


# -- submatrices and chain maps ------------------------------------------


def principal_submatrix(y: OffDiagMatrix, I: Sequence[int]) -> OffDiagMatrix:
    I = sorted(I)
    if len(set(I)) != len(I) or any(i < 1 or i > y.n for i in I):
        raise ValueError(f"index set {I} is not a subset of [{y.n}]")
    return OffDiagMatrix(
        len(I),
        {(a, b): y[I[a - 1], I[b - 1]] for a in range(1, len(I) + 1) for b in range(1, len(I) + 1) if a != b},
        y.symmetric,
    )


def tau_augment(y: OffDiagMatrix, fill=0) -> OffDiagMatrix:
    """Append a zero (n+1)-st row and column."""
    n = y.n + 1
    vals = dict(y.values)
    for i in range(1, n):
        vals[i, n] = fill
        vals[n, i] = fill
    return OffDiagMatrix(n, vals, y.symmetric)


def pi_truncate(y: OffDiagMatrix, m: int) -> OffDiagMatrix:
    """Upper-left principal m x m submatrix."""
    if m > y.n or m < 1:
        raise ValueError(f"cannot truncate a {y.n} x {y.n} matrix to size {m}")
    return principal_submatrix(y, range(1, m + 1))


def _tau_to(y: OffDiagMatrix, q: int, fill) -> OffDiagMatrix:
    while y.n < q:
        y = tau_augment(y, fill)
    return y


# -- equations ------------------------------------------------------------


def _disjoint_pairs(n: int, s: int):
    """Ordered pairs (R, C) of disjoint s-subsets of [n], both increasing."""
    for R in itertools.combinations(range(1, n + 1), s):
        rest = [c for c in range(1, n + 1) if c not in R]
        for C in itertools.combinations(rest, s):
            yield R, C


def minor_count(n: int, k: int) -> int:
    s = k + 1
    if n < 2 * s:
        return 0
    return math.comb(n, s) * math.comb(n - s, s)


def offdiag_minor_polys(n: int, k: int, symmetric: bool = False) -> list[Poly]:
    """All off-diagonal (k+1) x (k+1) minors det Y[R, C], R and C disjoint.

    In symmetric mode Y[R, C] and Y[C, R] give the same minor, so results
    are deduplicated up to sign (first occurrence kept).
    """
    var = symoffdiag if symmetric else offdiag
    cache: dict = {}

    def y(i, j):
        key = (i, j)
        if key not in cache:
            cache[key] = Poly.var(var(i, j))
        return cache[key]

    out: list[Poly] = []
    seen: set = set()
    for R, C in _disjoint_pairs(n, k + 1):
        if symmetric and (C, R) in seen:
            continue
        seen.add((R, C))
        out.append(sym_determinant([[y(r, c) for c in C] for r in R]))
    return out


_PENTAD_BASE: dict[bool, Poly] = {}


def _pentad_on_12345(symmetric: bool) -> Poly:
    if symmetric not in _PENTAD_BASE:
        var = symoffdiag if symmetric else offdiag
        cyc = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
        signs: dict = {}
        for g in all_permutations(5):
            mono = tuple(sorted(_collect_exps(var(g(a), g(b)) for a, b in cyc)))
            s = g.sign()
            if signs.setdefault(mono, s) != s:
                raise AssertionError("cycle monomial is fixed by an odd permutation; alternating sum vanishes")
        _PENTAD_BASE[symmetric] = Poly(signs)
    return _PENTAD_BASE[symmetric]


def _collect_exps(vs):
    d: dict = {}
    for v in vs:
        d[v] = d.get(v, 0) + 1
    return d.items()


def pentad_poly(S: Sequence[int] = (1, 2, 3, 4, 5), symmetric: bool = True) -> Poly:
    """Alternating sum of the 5-cycle monomial y_{s1 s2} ... y_{s5 s1} over Sym(S).

    Built by signed-orbit dedupe, so every coefficient is +-1 (this is the
    usual 1/|stabilizer| normalization of the full alternating sum). The
    symmetric version has 12 terms; the seed monomial has coefficient +1.
    """
    S = sorted(S)
    if len(S) != 5 or len(set(S)) != 5:
        raise ValueError(f"pentad needs 5 distinct indices, got {S}")
    base = _pentad_on_12345(symmetric)
    if S == [1, 2, 3, 4, 5]:
        return base
    return relabel_poly(dict(zip(range(1, 6), S)), base)


def all_pentads(n: int, symmetric: bool = True) -> list[Poly]:
    return [pentad_poly(S, symmetric) for S in itertools.combinations(range(1, n + 1), 5)]


@dataclass
class EquationReport:
    values: list
    vanishes: list[bool]
    all_vanish: bool
    first_failure: Optional[int]
    exact: bool


def check_equations(y: OffDiagMatrix, eqs: Sequence[Poly], tol: float = STAT_TOL) -> EquationReport:
    """Evaluate every equation at y. Exact values for rational points; |value| <= tol for float points.

    Vanishing is necessary for membership in the rank-<=k variety. With
    pentads and 3x3 minors it is only known to be sufficient for n <= 9,
    so treat ``all_vanish`` as a sound but possibly incomplete test.
    """
    return _check_at_point(y.as_point(), eqs, tol)


def _check_at_point(point: dict, eqs: Sequence[Poly], tol: float = STAT_TOL) -> EquationReport:
    exact = not any(isinstance(v, float) for v in point.values())
    values = CompiledPolys(eqs).evaluate([point])[0] if eqs else []
    if exact:
        vanishes = [v == 0 for v in values]
    else:
        values = [abs(v) for v in values]
        vanishes = [v <= tol for v in values]
    first = next((i for i, ok in enumerate(vanishes) if not ok), None)
    return EquationReport(values, vanishes, first is None, first, exact)


# -- rank factorization ---------------------------------------------------


def _solve_left(rows: list[list[Fraction]], block: list[list[Fraction]]) -> list[list[Fraction]]:
    """Return X with X @ block == rows by Gauss-Jordan elimination on block^T."""
    k = len(block)
    # X block = R  <=>  block^T X^T = R^T
    A = [[Fraction(block[c][r]) for c in range(k)] for r in range(k)]
    rhs = [[Fraction(rows[i][r]) for i in range(len(rows))] for r in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if A[r][col] != 0), None)
        if piv is None:
            raise SingularBlockError("pivot block Y[I, J] is singular")
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        rhs[col] = [a * inv for a in rhs[col]]
        for r in range(k):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
                rhs[r] = [a - f * b for a, b in zip(rhs[r], rhs[col])]
    return [[rhs[r][i] for r in range(k)] for i in range(len(rows))]


@dataclass
class Factorization:
    k: int
    I: tuple[int, ...]
    J: tuple[int, ...]
    B: dict[int, tuple]  # row i not in J -> length-k row
    C: dict[int, tuple]  # column j not in I -> length-k column
    checked: int = 0

    def value(self, i: int, j: int):
        return sum((b * c for b, c in zip(self.B[i], self.C[j])), Fraction(0))


def rank_factorize(Y: OffDiagMatrix, k: int) -> Factorization:
    """Write Y[[n] - J, [n] - I] as an honest rank-k product B C.

    With I = {1..k}, J = {k+1..2k}: C[:, j] is column j of Y restricted to
    rows I, and B[i, :] = Y[i, J] Y[I, J]^{-1}. Every entry (i, j) with
    i not in J, j not in I, i != j is then re-checked, including those
    outside I u J that are forced by the vanishing minors.
    """
    n = Y.n
    if k < 1 or n < 2 * k:
        raise ValueError(f"rank_factorize needs 1 <= k and n >= 2k, got n={n}, k={k}")
    I = tuple(range(1, k + 1))
    J = tuple(range(k + 1, 2 * k + 1))
    block = [[Y[i, j] for j in J] for i in I]
    if sym_determinant(block) == 0:
        raise SingularBlockError(f"Y[I, J] is singular for I={I}, J={J}")
    rows_idx = [i for i in range(1, n + 1) if i not in J]
    cols_idx = [j for j in range(1, n + 1) if j not in I]
    C = {j: tuple(Fraction(Y[i, j]) for i in I) for j in cols_idx}
    Bm = _solve_left([[Y[i, j] for j in J] for i in rows_idx], block)
    B = {i: tuple(row) for i, row in zip(rows_idx, Bm)}
    fac = Factorization(k, I, J, B, C)
    checked = 0
    for i in rows_idx:
        for j in cols_idx:
            if i == j:
                continue
            if fac.value(i, j) != Y[i, j]:
                raise ReconstructionError(
                    f"entry ({i}, {j}) is not reproduced; some off-diagonal {k + 1}-minor is nonzero"
                )
            checked += 1
    fac.checked = checked
    return fac


def rank1_complete(y: OffDiagMatrix) -> Optional[tuple[tuple, tuple]]:
    """Find b, c with y_ij = b_i c_j for all i != j and b_1 = 1, or None if impossible.

    Only the generic case (every entry nonzero) is supported.
    """
    n = y.n
    for (i, j), v in y.values.items():
        if v == 0:
            raise ZeroEntryError(f"entry ({i}, {j}) is zero; only all-nonzero matrices are supported")
    floats = any(isinstance(v, float) for v in y.values.values())
    num = float if floats else Fraction
    if n == 1:
        return (num(1),), (num(1),)
    b = [num(0)] * (n + 1)
    c = [num(0)] * (n + 1)
    b[1] = num(1)
    for j in range(2, n + 1):
        c[j] = num(y[1, j])
    if n == 2:
        b[2], c[1] = num(1), num(y[2, 1])
    else:
        for i in range(2, n + 1):
            j0 = 3 if i == 2 else 2
            b[i] = num(y[i, j0]) / c[j0]
        c[1] = num(y[2, 1]) / b[2]

    def same(a, v):
        return math.isclose(a, v, rel_tol=STAT_TOL, abs_tol=STAT_TOL) if floats else a == v

    for (i, j), v in y.values.items():
        if not same(b[i] * c[j], v):
            return None
    return tuple(b[1:]), tuple(c[1:])


# -- interchange identity ---------------------------------------------------


@dataclass
class CommuteWitness:
    q: int
    n: int
    m: int
    g: Permutation
    p: int
    g_prime: Permutation
    g_dprime: Permutation
    verified: bool = False


def _fm_lhs(y: OffDiagMatrix, q: int, m: int, g: Permutation, fill) -> OffDiagMatrix:
    return pi_truncate(act_matrix(g, _tau_to(y, q, fill)), m)


def _fm_rhs(y: OffDiagMatrix, p: int, m: int, g1: Permutation, g2: Permutation, fill) -> OffDiagMatrix:
    return act_matrix(g2, _tau_to(pi_truncate(act_matrix(g1, y), p), m, fill))


def _frozen(y: OffDiagMatrix):
    return tuple(sorted(y.values.items()))


def find_commute_witness_fm(q: int, n: int, m: int, g: Permutation) -> CommuteWitness:
    """Brute-force (p, g', g'') with pi_{q,m} g tau_{n,q} = g'' tau_{p,m} pi_{n,p} g'.

    Matrices carry symbolic labels; the search order is p from m down to 1,
    then g'' and g' lexicographically, first match wins. The match is then
    re-verified on the Poly-valued generic matrix.
    """
    if not q >= n >= m >= 1:
        raise ValueError(f"need q >= n >= m >= 1, got q={q}, n={n}, m={m}")
    if g.n != q:
        raise ValueError(f"g must be a permutation of [{q}]")
    labels = OffDiagMatrix.from_function(n, lambda i, j: (i, j))
    lhs = _fm_lhs(labels, q, m, g, None)
    sym_m = list(all_permutations(m))
    sym_n = list(all_permutations(n))
    for p in range(m, 0, -1):
        first_gp: dict = {}
        for g1 in sym_n:
            key = _frozen(_tau_to(pi_truncate(act_matrix(g1, labels), p), m, None))
            first_gp.setdefault(key, g1)
        for g2 in sym_m:
            target = _frozen(act_matrix(g2.inverse(), lhs))
            g1 = first_gp.get(target)
            if g1 is None:
                continue
            w = CommuteWitness(q, n, m, g, p, g1, g2)
            y = generic_offdiag(n)
            zero = Poly()
            if _fm_lhs(y, q, m, g, zero) != _fm_rhs(y, p, m, g1, g2, zero):
                raise AssertionError(f"label search and symbolic check disagree for g={g}")
            w.verified = True
            return w
    raise WitnessNotFoundError(f"no interchange witness for q={q}, n={n}, m={m}, g={g}")


# -- non-Noetherian chain ---------------------------------------------------


def cycle_monomial(i: int) -> Poly:
    """f_i = y_12 y_23 ... y_{i1}."""
    return Poly({tuple(sorted((offdiag(a, a % i + 1), 1) for a in range(1, i + 1))): 1})


def cycle_point(j: int, n: int) -> OffDiagMatrix:
    """p_j truncated to [n]: ones exactly on the positions of the variables of f_j."""
    if n < j:
        raise ValueError(f"cycle point p_{j} does not fit in size {n}")
    ones = {(a, a % j + 1) for a in range(1, j + 1)}
    return OffDiagMatrix.from_function(n, lambda a, b: 1 if (a, b) in ones else 0)


@dataclass
class DemoTable:
    max_len: int
    n: int
    permutations: int
    max_abs: dict[tuple[int, int], int] = field(default_factory=dict)
    self_value: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        off = all(v == 0 for (i, j), v in self.max_abs.items() if i != j)
        return off and all(v == 1 for v in self.self_value.values())


def nonnoetherian_demo(max_len: int, n: int) -> DemoTable:
    """max over g in Sym(n) of |f_i(g p_j)| for 2 <= i, j <= max_len, plus f_i(p_i)."""
    if max_len < 2 or n < max_len:
        raise ValueError(f"need 2 <= max_len <= n, got max_len={max_len}, n={n}")
    perms = _kernels.permutation_array(n)
    inv = np.argsort(perms, axis=1).astype(np.int64)
    table = DemoTable(max_len, n, perms.shape[0])
    for j in range(2, max_len + 1):
        pj = cycle_point(j, n)
        mat = np.zeros((n, n), dtype=np.int64)
        for (a, b), v in pj.values.items():
            mat[a - 1, b - 1] = v
        for i in range(2, max_len + 1):
            edges = np.array([(a - 1, a % i) for a in range(1, i + 1)], dtype=np.int64)
            vals = _kernels.monomial_orbit_values(inv, mat, edges)
            table.max_abs[i, j] = int(np.abs(vals).max())
    for i in range(2, max_len + 1):
        table.self_value[i] = cycle_monomial(i).evaluate(cycle_point(i, n).as_point())
    return table
