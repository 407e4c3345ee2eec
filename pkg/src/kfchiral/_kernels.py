"""Hot integer/float kernels with a numba path and a pure-numpy fallback.

Set ``KFCHIRAL_DISABLE_NUMBA=1`` to force the numpy implementations (the
numba ones are also skipped when numba is not importable). Both paths are
exposed as ``<name>_numba`` / ``<name>_numpy`` so they can be compared
directly; the bare ``<name>`` dispatches.

Integer kernels run in int64 and do NOT detect overflow; callers bound the
magnitudes first (see :mod:`kfchiral.batch`).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_DISABLED = os.environ.get("KFCHIRAL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not _DISABLED


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if numba is None:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


# -- batched polynomial evaluation --------------------------------------


def _eval_terms_loop(vals, term_poly, term_coef, term_vars, term_exps, npoly):
    npts = vals.shape[0]
    nterms, depth = term_vars.shape
    out = np.zeros((npts, npoly), dtype=vals.dtype)
    for p in range(npts):
        for t in range(nterms):
            acc = term_coef[t]
            for d in range(depth):
                e = term_exps[t, d]
                if e == 0:
                    continue
                x = vals[p, term_vars[t, d]]
                for _ in range(e):
                    acc = acc * x
            out[p, term_poly[t]] += acc
    return out


eval_terms_numba = _njit(_eval_terms_loop)


def eval_terms_numpy(vals, term_poly, term_coef, term_vars, term_exps, npoly):
    npts = vals.shape[0]
    out = np.zeros((npts, npoly), dtype=vals.dtype)
    if term_vars.shape[0] == 0:
        return out
    gathered = vals[:, term_vars]  # (points, terms, depth)
    powered = gathered ** term_exps[None, :, :]
    contrib = powered.prod(axis=2) * term_coef[None, :]
    np.add.at(out, (slice(None), term_poly), contrib)
    return out


def eval_terms(vals, term_poly, term_coef, term_vars, term_exps, npoly):
    """Evaluate a flattened family of polynomials at many points.

    ``vals[p, v]`` is the value of variable v at point p; term t belongs to
    polynomial ``term_poly[t]`` and equals ``term_coef[t] * prod_d
    vals[p, term_vars[t, d]] ** term_exps[t, d]`` (padding uses exponent 0).
    Returns an array of shape (points, npoly).
    """
    if USE_NUMBA:
        return eval_terms_numba(vals, term_poly, term_coef, term_vars, term_exps, npoly)
    return eval_terms_numpy(vals, term_poly, term_coef, term_vars, term_exps, npoly)


# -- monomials evaluated on permuted 0/1 matrices -----------------------


def _monomial_orbit_loop(inv_perms, mat, edges):
    nperm = inv_perms.shape[0]
    out = np.empty(nperm, dtype=mat.dtype)
    for g in range(nperm):
        acc = mat[0, 0] * 0 + 1
        for t in range(edges.shape[0]):
            acc = acc * mat[inv_perms[g, edges[t, 0]], inv_perms[g, edges[t, 1]]]
            if acc == 0:
                break
        out[g] = acc
    return out


monomial_orbit_values_numba = _njit(_monomial_orbit_loop)


def monomial_orbit_values_numpy(inv_perms, mat, edges):
    rows = inv_perms[:, edges[:, 0]]
    cols = inv_perms[:, edges[:, 1]]
    return mat[rows, cols].prod(axis=1)


def monomial_orbit_values(inv_perms, mat, edges):
    """Values of the monomial prod_t y[a_t, b_t] at g.mat for every g.

    ``inv_perms[g]`` is the 0-based one-line form of g^{-1}; since
    (g.y)[a, b] = y[g^{-1} a, g^{-1} b], each factor is a gather.
    """
    if USE_NUMBA:
        return monomial_orbit_values_numba(inv_perms, mat, edges)
    return monomial_orbit_values_numpy(inv_perms, mat, edges)


# -- inversion counts ---------------------------------------------------


def _inversions_loop(perms, subset):
    nperm = perms.shape[0]
    k = subset.shape[0]
    out = np.zeros(nperm, dtype=np.int64)
    for g in range(nperm):
        c = 0
        for a in range(k):
            ga = perms[g, subset[a]]
            for b in range(a + 1, k):
                if ga > perms[g, subset[b]]:
                    c += 1
        out[g] = c
    return out


inversion_counts_numba = _njit(_inversions_loop)


def inversion_counts_numpy(perms, subset):
    sub = perms[:, subset]
    k = subset.shape[0]
    upper = np.triu(np.ones((k, k), dtype=bool), 1)
    gt = sub[:, :, None] > sub[:, None, :]
    return (gt & upper[None]).sum(axis=(1, 2)).astype(np.int64)


def inversion_counts(perms, subset):
    """For each row g of ``perms`` (one-line form), inversions of g on ``subset`` (0-based positions, increasing)."""
    if USE_NUMBA:
        return inversion_counts_numba(perms, subset)
    return inversion_counts_numpy(perms, subset)


def permutation_array(n: int) -> np.ndarray:
    """All of Sym(n) as a (n!, n) int64 array of 0-based images, lexicographic."""
    import itertools

    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
