"""Evaluate many polynomials at many points, exactly.

Integer-valued inputs go through the int64 kernels when a magnitude bound
proves no overflow can happen; everything else (rationals, large
integers) takes the exact Python path. Floats use the float64 kernel.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .poly import MissingVariableError, Poly, VarKey

_INT64_SAFE = 2**62


class CompiledPolys:
    """A list of polynomials flattened into term arrays over a fixed variable order."""

    def __init__(self, polys: Sequence[Poly]):
        self.polys = list(polys)
        variables = sorted(set().union(*(p.variables() for p in self.polys)) if self.polys else set())
        self.variables: list[VarKey] = variables
        self.index = {v: i for i, v in enumerate(variables)}
        depth = max((len(m) for p in self.polys for m in p.terms), default=0)
        self.depth = max(depth, 1)

        rows, coefs, tv, te = [], [], [], []
        self.integral = True
        for k, p in enumerate(self.polys):
            for m, c in p.terms.items():
                if not isinstance(c, int):
                    self.integral = False
                rows.append(k)
                coefs.append(c)
                vs = [self.index[v] for v, _ in m] + [0] * (self.depth - len(m))
                es = [e for _, e in m] + [0] * (self.depth - len(m))
                tv.append(vs)
                te.append(es)
        self.term_poly = np.array(rows, dtype=np.int64)
        self.coefs = coefs
        self.term_vars = np.array(tv, dtype=np.int64).reshape(-1, self.depth)
        self.term_exps = np.array(te, dtype=np.int64).reshape(-1, self.depth)
        # per-poly sum |c| and max degree, for overflow bounds
        self._abs_sum = [sum(abs(c) for c in p.terms.values()) for p in self.polys]
        self._deg = [max(p.degree(), 0) for p in self.polys]

    def _value_matrix(self, points: Sequence[Mapping[VarKey, object]]) -> list[list]:
        mat = []
        for pt in points:
            row = []
            for v in self.variables:
                try:
                    row.append(pt[v])
                except KeyError:
                    raise MissingVariableError(v) from None
            mat.append(row or [0])
        return mat

    def _fits_int64(self, vals: list[list[int]]) -> bool:
        big = max((abs(x) for row in vals for x in row), default=0)
        big = max(big, 1)
        return all(s * big**d < _INT64_SAFE for s, d in zip(self._abs_sum, self._deg))

    def evaluate(self, points: Sequence[Mapping[VarKey, object]]) -> list[list]:
        """Values as nested lists: ``out[point][poly]``; exact unless points hold floats."""
        if not self.polys:
            return [[] for _ in points]
        vals = self._value_matrix(points)
        flat = [x for row in vals for x in row]
        if any(isinstance(x, float) for x in flat):
            arr = np.array(vals, dtype=np.float64)
            out = _kernels.eval_terms(
                arr, self.term_poly, np.array([float(c) for c in self.coefs]),
                self.term_vars, self.term_exps, len(self.polys),
            )
            return out.tolist()
        ints = all(type(x) is int or (isinstance(x, Fraction) and x.denominator == 1) for x in flat)
        if ints and self.integral:
            ivals = [[int(x) for x in row] for row in vals]
            if self._fits_int64(ivals):
                arr = np.array(ivals, dtype=np.int64)
                out = _kernels.eval_terms(
                    arr, self.term_poly, np.array(self.coefs, dtype=np.int64),
                    self.term_vars, self.term_exps, len(self.polys),
                )
                return [[int(x) for x in row] for row in out.tolist()]
        return [[p.evaluate(pt) for p in self.polys] for pt in points]


def evaluate_many(polys: Sequence[Poly], points: Sequence[Mapping[VarKey, object]]) -> list[list]:
    return CompiledPolys(polys).evaluate(points)
