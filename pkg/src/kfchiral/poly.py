"""Exact sparse multivariate polynomials over structured variable keys.

Coefficients are Python ints or :class:`fractions.Fraction` (integral
fractions are stored as ints so the common integer case stays fast).
Polynomials are immutable once built.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "Tag",
    "VarKey",
    "Poly",
    "MissingVariableError",
    "offdiag",
    "symoffdiag",
    "subsetvar",
    "param",
    "loading",
    "coloading",
    "entry",
    "sym_determinant",
    "canonicalize",
    "leading_monomial",
]


class Tag(enum.IntEnum):
    # Declaration order is the variable order used by the monomial order.
    OFFDIAG = 0
    SYMOFFDIAG = 1
    SUBSET = 2
    PARAM = 3
    LOADING = 4
    COLOADING = 5
    ENTRY = 6


TAG_NAMES = {
    Tag.OFFDIAG: "offdiag",
    Tag.SYMOFFDIAG: "symoffdiag",
    Tag.SUBSET: "subset",
    Tag.PARAM: "param",
    Tag.LOADING: "loading",
    Tag.COLOADING: "coloading",
    Tag.ENTRY: "entry",
}
TAG_BY_NAME = {v: k for k, v in TAG_NAMES.items()}

_PRINT_PREFIX = {
    Tag.OFFDIAG: "y",
    Tag.SYMOFFDIAG: "s",
    Tag.SUBSET: "y",
    Tag.PARAM: "x",
    Tag.LOADING: "b",
    Tag.COLOADING: "c",
    Tag.ENTRY: "m",
}


class VarKey(NamedTuple):
    tag: Tag
    idx: tuple[int, ...]

    def __str__(self) -> str:
        pre = _PRINT_PREFIX[self.tag]
        if self.tag == Tag.SUBSET:
            return pre + "{" + ",".join(map(str, self.idx)) + "}"
        if all(i < 10 for i in self.idx):
            return pre + "".join(map(str, self.idx))
        return pre + "_" + "_".join(map(str, self.idx))


def offdiag(i: int, j: int) -> VarKey:
    if i == j:
        raise ValueError(f"off-diagonal variable needs i != j, got ({i}, {j})")
    return VarKey(Tag.OFFDIAG, (i, j))


def symoffdiag(i: int, j: int) -> VarKey:
    if i == j:
        raise ValueError(f"off-diagonal variable needs i != j, got ({i}, {j})")
    return VarKey(Tag.SYMOFFDIAG, (i, j) if i < j else (j, i))


def subsetvar(J: Iterable[int]) -> VarKey:
    J = tuple(J)
    if any(a >= b for a, b in zip(J, J[1:])):
        raise ValueError(f"subset variable needs a strictly increasing index tuple, got {J}")
    return VarKey(Tag.SUBSET, J)


def param(i: int) -> VarKey:
    return VarKey(Tag.PARAM, (i,))


def loading(i: int, p: int) -> VarKey:
    return VarKey(Tag.LOADING, (i, p))


def coloading(p: int, j: int) -> VarKey:
    return VarKey(Tag.COLOADING, (p, j))


def entry(p: int, j: int) -> VarKey:
    return VarKey(Tag.ENTRY, (p, j))


Monomial = tuple  # tuple[tuple[VarKey, int], ...], sorted by VarKey

_ONE: Monomial = ()
# Compares greater than every real VarKey; terminates lex keys.
_END = (VarKey(99, ()), 0)


class MissingVariableError(KeyError):
    def __init__(self, key: VarKey):
        super().__init__(key)
        self.key = key

    def __str__(self) -> str:
        return f"no value or image given for variable {self.key}"


def _coeff(c):
    """Normalize a coefficient to int (if integral) or Fraction."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"polynomial coefficients must be exact rationals, got {type(c).__name__}")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m: Monomial):
    """Sort key putting monomials in descending graded-lex order."""
    deg = 0
    for _, e in m:
        deg += e
    return (-deg, tuple((v, -e) for v, e in m) + (_END,))


class Poly:
    """Sparse polynomial: a mapping from monomials to nonzero exact coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _coeff(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms already normalized and free of zeros
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({_ONE: c})

    @classmethod
    def var(cls, key: VarKey) -> "Poly":
        return cls._raw({((key, 1),): 1})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, VarKey):
            return cls.var(x)
        return cls.const(x)

    @property
    def terms(self) -> dict:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return self._terms.items()

    def variables(self) -> set[VarKey]:
        return {v for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def coefficient(self, monomial: Monomial):
        return self._terms.get(monomial, 0)

    def constant_value(self):
        """Value of a constant polynomial; raises if it has variables."""
        if any(self._terms.keys() - {_ONE}):
            raise ValueError("polynomial is not constant")
        return self._terms.get(_ONE, 0)

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]))

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _coeff(s)
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _coeff(c)
        if not c:
            return Poly()
        return Poly._raw({m: _coeff(v * c) for m, v in self._terms.items()})

    def __truediv__(self, c):
        c = _coeff(c)
        return self.scale(Fraction(1) / c)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation and substitution ------------------------------------

    def evaluate(self, point: Mapping[VarKey, object]):
        """Exact value at ``point``; raises :class:`MissingVariableError` if a variable is unassigned."""
        total = 0
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                try:
                    x = point[v]
                except KeyError:
                    raise MissingVariableError(v) from None
                t = t * (x if e == 1 else x**e)
            total = total + t
        if isinstance(total, Fraction) and total.denominator == 1:
            return total.numerator
        return total

    def substitute(self, images: Mapping[VarKey, object]) -> "Poly":
        """Compose with the ring map sending each variable to ``images[var]``."""
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                try:
                    img = Poly.coerce(images[v])
                except KeyError:
                    raise MissingVariableError(v) from None
                powers[key] = img if e == 1 else img**e
            return powers[key]

        out = Poly()
        for m, c in self._terms.items():
            t = Poly.const(c)
            for v, e in m:
                t = t * power(v, e)
            out = out + t
        return out

    def map_vars(self, fn: Callable[[VarKey], tuple[int, VarKey]]) -> "Poly":
        """Apply a signed variable relabelling ``v -> sign * fn(v)[1]``.

        Much cheaper than :meth:`substitute` since each variable maps to a
        single (signed) variable.
        """
        cache: dict = {}
        out: dict = {}
        for m, c in self._terms.items():
            sign = 1
            d: dict = {}
            for v, e in m:
                r = cache.get(v)
                if r is None:
                    r = cache[v] = fn(v)
                s, w = r
                if s < 0 and e & 1:
                    sign = -sign
                d[w] = d.get(w, 0) + e
            nm = tuple(sorted(d.items()))
            out[nm] = out.get(nm, 0) + sign * c
        return Poly(out)

    # -- display ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def leading_monomial(p: Poly) -> Monomial:
    if p.is_zero():
        raise ValueError("zero polynomial has no leading monomial")
    return min(p.terms, key=_mono_key)


def canonicalize(p: Poly) -> tuple[int, Poly]:
    """Return ``(sign, q)`` with ``sign * q == p`` and the leading coefficient of q positive."""
    if p.is_zero():
        raise ValueError("cannot canonicalize the zero polynomial")
    if p.terms[leading_monomial(p)] > 0:
        return 1, p
    return -1, -p


def sym_determinant(m: Sequence[Sequence]):
    """Determinant by first-row cofactor expansion, memoizing sub-determinants.

    Works for any entries supporting ``+``, ``-`` and ``*`` (Poly, int,
    Fraction, ...).
    """
    s = len(m)
    if s == 0 or any(len(row) != s for row in m):
        raise ValueError("sym_determinant needs a non-empty square table")
    memo: dict = {}

    def minor(row: int, cols: tuple[int, ...]):
        # determinant of rows row..s-1 against the given columns
        if len(cols) == 1:
            return m[row][cols[0]]
        if cols in memo:
            return memo[cols]
        total = None
        for t, c in enumerate(cols):
            a = m[row][c]
            if isinstance(a, Poly) and a.is_zero() or (not isinstance(a, Poly) and a == 0):
                continue
            sub = minor(row + 1, cols[:t] + cols[t + 1 :])
            term = a * sub
            if t & 1:
                total = -term if total is None else total - term
            else:
                total = term if total is None else total + term
        if total is None:
            total = m[row][cols[0]] * 0
        memo[cols] = total
        return total

    return minor(0, tuple(range(s)))
