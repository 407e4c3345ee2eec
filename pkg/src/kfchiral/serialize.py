"""JSON encodings. Rationals travel as "num/den" strings; indices are 1-based."""

from __future__ import annotations

from fractions import Fraction

from .chirality import ChiralityPoint
from .factor import OffDiagMatrix
from .perm import Permutation
from .poly import TAG_BY_NAME, TAG_NAMES, Poly, Tag, VarKey
from .reynolds import GroupAction


class FormatError(ValueError):
    pass


def rational_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, bool):
        raise FormatError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise FormatError(f"rationals must be 'num/den' strings, got {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def scalar_to_json(x):
    if isinstance(x, float):
        return x
    return rational_to_str(x)


def scalar_from_json(x):
    if isinstance(x, float):
        return x
    q = rational_from_str(x)
    return q.numerator if q.denominator == 1 else q


def var_to_json(v: VarKey) -> list:
    return [TAG_NAMES[v.tag], *v.idx]


def var_from_json(obj) -> VarKey:
    if not isinstance(obj, list) or not obj or obj[0] not in TAG_BY_NAME:
        raise FormatError(f"bad variable {obj!r}")
    tag = TAG_BY_NAME[obj[0]]
    idx = tuple(int(i) for i in obj[1:])
    if tag in (Tag.OFFDIAG, Tag.SYMOFFDIAG):
        if len(idx) != 2 or idx[0] == idx[1]:
            raise FormatError(f"off-diagonal variable needs two distinct indices: {obj!r}")
        if tag == Tag.SYMOFFDIAG and idx[0] > idx[1]:
            idx = idx[::-1]
    elif tag == Tag.SUBSET:
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise FormatError(f"subset variable needs increasing indices: {obj!r}")
    elif tag == Tag.PARAM:
        if len(idx) != 1:
            raise FormatError(f"param variable takes one index: {obj!r}")
    elif len(idx) != 2:
        raise FormatError(f"{obj[0]} variable takes two indices: {obj!r}")
    return VarKey(tag, idx)


def poly_to_json(p: Poly) -> dict:
    return {
        "terms": [
            {"coeff": rational_to_str(c), "vars": [[var_to_json(v), e] for v, e in m]}
            for m, c in p.sorted_terms()
        ]
    }


def poly_from_json(obj) -> Poly:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise FormatError("polynomial JSON must be an object with a 'terms' list")
    terms: dict = {}
    for t in obj["terms"]:
        d: dict = {}
        for v, e in t["vars"]:
            if not isinstance(e, int) or e < 1:
                raise FormatError(f"exponents must be positive integers, got {e!r}")
            key = var_from_json(v)
            d[key] = d.get(key, 0) + e
        m = tuple(sorted(d.items()))
        terms[m] = terms.get(m, 0) + rational_from_str(t["coeff"])
    return Poly(terms)


def polys_from_json(obj) -> list[Poly]:
    """Accept a single polynomial, a list of them, or any object with a 'polys' list."""
    if isinstance(obj, list):
        return [poly_from_json(p) for p in obj]
    if isinstance(obj, dict) and "polys" in obj:
        return [poly_from_json(p) for p in obj["polys"]]
    if isinstance(obj, dict) and "terms" in obj:
        return [poly_from_json(obj)]
    raise FormatError("expected a polynomial, a list of polynomials, or an object with 'polys'")


def matrix_to_json(y: OffDiagMatrix) -> dict:
    return {
        "n": y.n,
        "symmetric": y.symmetric,
        "entries": [[i, j, scalar_to_json(y[i, j])] for i, j in y.pairs()],
    }


def matrix_from_json(obj) -> OffDiagMatrix:
    try:
        n = int(obj["n"])
        symmetric = bool(obj.get("symmetric", False))
        vals = {}
        for i, j, v in obj["entries"]:
            i, j = int(i), int(j)
            if i == j:
                raise FormatError(f"diagonal entry ({i}, {i}) in an off-diagonal matrix")
            x = scalar_from_json(v)
            if symmetric and (j, i) in vals and vals[j, i] != x:
                raise FormatError(f"symmetric matrix has conflicting entries at ({i}, {j})")
            vals[i, j] = x
            if symmetric:
                vals.setdefault((j, i), x)
        return OffDiagMatrix(n, vals, symmetric)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad off-diagonal matrix JSON: {exc}") from exc


def point_to_json(Y: ChiralityPoint) -> dict:
    return {"n": Y.n, "k": Y.k, "coords": [[list(J), scalar_to_json(Y[J])] for J in Y.subsets()]}


def point_from_json(obj) -> ChiralityPoint:
    try:
        coords = {tuple(int(j) for j in J): scalar_from_json(v) for J, v in obj["coords"]}
        return ChiralityPoint(int(obj["n"]), int(obj["k"]), coords)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad chirality point JSON: {exc}") from exc


def perm_to_json(g: Permutation) -> list[int]:
    return g.to_list()


def perm_from_json(obj) -> Permutation:
    try:
        return Permutation(tuple(int(i) for i in obj))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad permutation {obj!r}: {exc}") from exc


def group_to_json(H: GroupAction) -> dict:
    return {"kind": H.kind, "elements": [perm_to_json(g) for g in H.elements]}


def group_from_json(obj) -> GroupAction:
    try:
        return GroupAction(tuple(perm_from_json(g) for g in obj["elements"]), obj.get("kind", "param"))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad group JSON: {exc}") from exc
