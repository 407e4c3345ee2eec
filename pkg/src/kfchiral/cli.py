"""Command-line front end. Every command prints one JSON report on stdout.

Exit status: 0 pass, 1 verified mismatch or counterexample, 2 usage or IO error.
Set KFCHIRAL_JOBS to run the verification commands on several processes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from . import serialize as ser
from .chirality import (
    act_point,
    commute_witness_ch,
    generalized_point,
    monomial_system,
    pluecker_polys,
    sign_identity_exhaustive,
    vandermonde_point,
    GeneralizedSystem,
)
from .factor import (
    ReconstructionError,
    SingularBlockError,
    ZeroEntryError,
    all_pentads,
    find_commute_witness_fm,
    nonnoetherian_demo,
    offdiag_minor_polys,
    rank1_complete,
    rank_factorize,
    sample_offdiag_rank,
    _check_at_point,
)
from .perm import Permutation, all_permutations
from .poly import MissingVariableError
from .reynolds import average, is_invariant

log = logging.getLogger("kfchiral")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jobs() -> int:
    raw = os.environ.get("KFCHIRAL_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"KFCHIRAL_JOBS must be an integer, got {raw!r}") from None


def _pmap(fn, items):
    items = list(items)
    jobs = _jobs()
    if jobs == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _read_json(path: str, digests: dict):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    digests[path] = hashlib.sha256(data).hexdigest()
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_matrix(path: str, digests: dict):
    obj = _read_json(path, digests)
    if isinstance(obj, dict) and "matrix" in obj:
        obj = obj["matrix"]
    return ser.matrix_from_json(obj)


def _report(args, passed: bool, **payload) -> dict:
    rep = {"command": args.command, "args": _echo(args)}
    rep.update(payload)
    rep["verdict"] = "pass" if passed else "fail"
    return rep


def _echo(args) -> dict:
    skip = {"command", "func", "timing", "format", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- generators -----------------------------------------------------------------


def cmd_gen_minors(args):
    polys = offdiag_minor_polys(args.n, args.k, args.symmetric)
    return _report(args, True, counts={"polys": len(polys)}, polys=[ser.poly_to_json(p) for p in polys])


def cmd_gen_pentads(args):
    polys = all_pentads(args.n)
    items = [{"index": i, "terms": len(p)} for i, p in enumerate(polys)]
    return _report(args, True, counts={"polys": len(polys)}, items=items, polys=[ser.poly_to_json(p) for p in polys])


def cmd_gen_pluecker(args):
    polys = pluecker_polys(args.n, args.k)
    return _report(args, True, counts={"polys": len(polys)}, polys=[ser.poly_to_json(p) for p in polys])


# -- samplers -------------------------------------------------------------------


def cmd_sample_factor(args):
    s = sample_offdiag_rank(args.n, args.k, args.symmetric, args.seed, args.mode)
    enc = ser.scalar_to_json
    out = {
        "seed": s.seed,
        "mode": s.mode,
        "matrix": ser.matrix_to_json(s.derived),
        "B": [[enc(x) for x in row] for row in s.B],
        "C": [[enc(x) for x in row] for row in s.C],
    }
    if s.sigma_diag is not None:
        out["sigma_diag"] = s.sigma_diag
    if s.covariance is not None:
        out["covariance"] = s.covariance
    return _report(args, True, **out)


def _system_from_arg(spec: str, k: int, digests: dict) -> GeneralizedSystem | None:
    if spec == "vandermonde":
        return None
    if spec == "monomial":
        return monomial_system(k)
    polys = ser.polys_from_json(_read_json(spec, digests))
    if len(polys) != k:
        raise UsageError(f"system file has {len(polys)} polynomials, expected k = {k}")
    return GeneralizedSystem(tuple(polys))


def cmd_sample_chirality(args):
    digests: dict = {}
    if args.x is not None:
        try:
            x = [ser.scalar_from_json(t) for t in args.x.split(",")]
        except ser.FormatError as exc:
            raise UsageError(str(exc)) from None
        if len(x) != args.n:
            raise UsageError(f"--x has {len(x)} values, expected n = {args.n}")
        seed = None
    else:
        seed = args.seed if args.seed is not None else 0
        rng = np.random.default_rng(seed)
        x = [int(v) for v in rng.integers(-10, 11, args.n)]
    system = _system_from_arg(args.system, args.k, digests)
    Y = vandermonde_point(x, args.k) if system is None else generalized_point(x, system)
    return _report(
        args, True, seed=seed, inputs=digests, x=[ser.scalar_to_json(v) for v in x], point=ser.point_to_json(Y)
    )


# -- checks ---------------------------------------------------------------------


def cmd_check(args):
    digests: dict = {}
    pobj = _read_json(args.point, digests)
    if isinstance(pobj, dict):
        pobj = pobj.get("matrix", pobj.get("point", pobj))
    eqs = ser.polys_from_json(_read_json(args.equations, digests))
    if isinstance(pobj, dict) and "entries" in pobj:
        point = ser.matrix_from_json(pobj).as_point()
    elif isinstance(pobj, dict) and "coords" in pobj:
        point = ser.point_from_json(pobj).as_point()
    else:
        raise UsageError("point file must hold an off-diagonal matrix or a chirality point")
    rep = _check_at_point(point, eqs)
    items = [
        {"index": i, "value": ser.scalar_to_json(v), "vanishes": ok}
        for i, (v, ok) in enumerate(zip(rep.values, rep.vanishes))
    ]
    return _report(
        args,
        rep.all_vanish,
        inputs=digests,
        exact=rep.exact,
        counts={"equations": len(eqs), "vanishing": sum(rep.vanishes)},
        first_failure=rep.first_failure,
        items=items,
    )


def _equivariance_trial(task):
    n, k, seed = task
    rng = np.random.default_rng(seed)
    g = Permutation(tuple(int(i) + 1 for i in rng.permutation(n)))
    x = [int(v) for v in rng.integers(-20, 21, n)]
    gx = [0] * n
    for i in range(1, n + 1):
        gx[g(i) - 1] = x[i - 1]
    ok = act_point(g, vandermonde_point(x, k)) == vandermonde_point(gx, k)
    return {"g": g.to_list(), "x": x, "ok": ok}


def cmd_verify_equivariance(args):
    if args.k > args.n:
        raise UsageError("need k <= n")
    tasks = [(args.n, args.k, args.seed * 1_000_003 + t) for t in range(args.trials)]
    items = _pmap(_equivariance_trial, tasks)
    passed = all(it["ok"] for it in items)
    out = {"counts": {"trials": len(items), "failures": sum(not it["ok"] for it in items)}, "items": items}
    if args.symbolic:
        checked, failures = sign_identity_exhaustive(args.n, args.k)
        out["symbolic"] = {"checked": checked, "failures": failures}
        passed = passed and failures == 0
    return _report(args, passed, **out)


def _commute_task(task):
    model, q, n, m, k, images = task
    g = Permutation(images)
    try:
        if model == "chirality":
            w = commute_witness_ch(q, n, m, g, k)
        else:
            w = find_commute_witness_fm(q, n, m, g)
    except (AssertionError, RuntimeError) as exc:
        return {"g": list(images), "verified": False, "error": str(exc)}
    return {
        "g": list(images),
        "p": w.p,
        "g_prime": w.g_prime.to_list(),
        "g_dprime": w.g_dprime.to_list(),
        "verified": w.verified,
    }


def cmd_verify_commute(args):
    q, n, m, k = args.q, args.n, args.m, args.k
    if not q >= n >= m >= 1:
        raise UsageError("need q >= n >= m >= 1")
    if args.model == "chirality" and not m >= k >= 1:
        raise UsageError("chirality model needs m >= k >= 1")
    if args.exhaustive:
        perms = [g.images for g in all_permutations(q)]
    else:
        rng = np.random.default_rng(args.seed)
        perms = [tuple(int(i) + 1 for i in rng.permutation(q)) for _ in range(args.trials)]
    items = _pmap(_commute_task, [(args.model, q, n, m, k, im) for im in perms])
    failures = sum(not it["verified"] for it in items)
    return _report(
        args, failures == 0, counts={"witnesses": len(items) - failures, "failures": failures}, items=items
    )


def cmd_rank_factorize(args):
    digests: dict = {}
    y = _load_matrix(args.matrix, digests)
    try:
        fac = rank_factorize(y, args.k)
    except SingularBlockError as exc:
        raise UsageError(str(exc)) from None
    except ReconstructionError as exc:
        return _report(args, False, inputs=digests, error=str(exc))
    enc = ser.rational_to_str
    return _report(
        args,
        True,
        inputs=digests,
        I=list(fac.I),
        J=list(fac.J),
        B={str(i): [enc(x) for x in row] for i, row in sorted(fac.B.items())},
        C={str(j): [enc(x) for x in col] for j, col in sorted(fac.C.items())},
        counts={"checked_entries": fac.checked},
    )


def cmd_complete_rank1(args):
    digests: dict = {}
    y = _load_matrix(args.matrix, digests)
    try:
        res = rank1_complete(y)
    except ZeroEntryError as exc:
        raise UsageError(str(exc)) from None
    if res is None:
        return _report(args, False, inputs=digests, completion=None)
    b, c = res
    enc = ser.scalar_to_json
    return _report(args, True, inputs=digests, completion={"b": [enc(v) for v in b], "c": [enc(v) for v in c]})


def cmd_reynolds(args):
    digests: dict = {}
    polys = ser.polys_from_json(_read_json(args.poly, digests))
    H = ser.group_from_json(_read_json(args.group, digests))
    items = []
    for p in polys:
        rho = average(p, H)
        items.append(
            {
                "input_invariant": is_invariant(p, H),
                "average": ser.poly_to_json(rho),
                "average_invariant": is_invariant(rho, H),
                "idempotent": average(rho, H) == rho,
            }
        )
    passed = all(it["average_invariant"] and it["idempotent"] for it in items)
    return _report(args, passed, inputs=digests, group_order=H.order, kind=H.kind, items=items)


def cmd_demo_nonnoetherian(args):
    table = nonnoetherian_demo(args.max_len, args.n)
    items = [
        {"i": i, "j": j, "max_abs_value": v} for (i, j), v in sorted(table.max_abs.items())
    ]
    return _report(
        args,
        table.ok,
        counts={"permutations": table.permutations},
        self_values={str(i): v for i, v in sorted(table.self_value.items())},
        items=items,
    )


# -- argument parsing -----------------------------------------------------------------


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _pos(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kfchiral", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--format", choices=["json"], default="json")
    ap.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-minors", help="off-diagonal (k+1)-minors")
    p.add_argument("n", type=_nonneg)
    p.add_argument("k", type=_nonneg)
    p.add_argument("--symmetric", action="store_true")
    p.set_defaults(func=cmd_gen_minors)

    p = sub.add_parser("gen-pentads", help="one pentad per 5-subset of [n]")
    p.add_argument("n", type=_nonneg)
    p.set_defaults(func=cmd_gen_pentads)

    p = sub.add_parser("gen-pluecker", help="quadratic Pluecker relations")
    p.add_argument("n", type=_pos)
    p.add_argument("k", type=_pos)
    p.set_defaults(func=cmd_gen_pluecker)

    p = sub.add_parser("sample-factor", help="seeded point of the off-diagonal rank-<=k variety")
    p.add_argument("n", type=_pos)
    p.add_argument("k", type=_nonneg)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--mode", choices=["exact", "statistical"], default="exact")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.set_defaults(func=cmd_sample_factor)

    p = sub.add_parser("sample-chirality", help="Vandermonde or generalized chirality point")
    p.add_argument("n", type=_pos)
    p.add_argument("k", type=_pos)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--x", help="comma-separated ligand values, e.g. 0,1,2 or 1/2,3")
    g.add_argument("--seed", type=_nonneg)
    p.add_argument(
        "--system", default="vandermonde", help="'vandermonde' (product form), 'monomial', or a JSON file of k polynomials in param 0"
    )
    p.set_defaults(func=cmd_sample_chirality)

    p = sub.add_parser("check", help="evaluate equations at a point")
    p.add_argument("point")
    p.add_argument("equations")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-equivariance", help="act_point(g, V(x)) == V(g.x) on seeded trials")
    p.add_argument("n", type=_pos)
    p.add_argument("k", type=_pos)
    p.add_argument("--trials", type=_nonneg, default=100)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--symbolic", action="store_true", help="also check the sign identity for all of Sym(n)")
    p.set_defaults(func=cmd_verify_equivariance)

    p = sub.add_parser("verify-commute", help="witnesses for the interchange identity")
    p.add_argument("model", choices=["chirality", "factor"])
    p.add_argument("q", type=_pos)
    p.add_argument("n", type=_pos)
    p.add_argument("m", type=_pos)
    p.add_argument("--k", type=_pos, default=2, help="subset size (chirality model)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--trials", type=_nonneg, default=20)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.set_defaults(func=cmd_verify_commute)

    p = sub.add_parser("rank-factorize", help="rank-k factorization outside the free block")
    p.add_argument("matrix")
    p.add_argument("k", type=_pos)
    p.set_defaults(func=cmd_rank_factorize)

    p = sub.add_parser("complete-rank1", help="rank-1 completion y_ij = b_i c_j")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_complete_rank1)

    p = sub.add_parser("reynolds", help="average polynomials over a finite group")
    p.add_argument("poly")
    p.add_argument("group")
    p.set_defaults(func=cmd_reynolds)

    p = sub.add_parser("demo-nonnoetherian", help="cycle monomials against permuted cycle points")
    p.add_argument("max_len", type=_pos)
    p.add_argument("n", type=_pos)
    p.set_defaults(func=cmd_demo_nonnoetherian)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    log.info("kernel backend: %s", _kernels.backend())
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (UsageError, ser.FormatError, ValueError, MissingVariableError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"kfchiral {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    log.info("%s finished in %.3f s", args.command, elapsed)
    if args.timing:
        report["elapsed_s"] = round(elapsed, 6)
    status = EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL
    report["exit_status"] = status
    json.dump(report, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return status
