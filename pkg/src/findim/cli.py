"""Command-line front end: load algebra/module descriptions, run the
analyses, and emit byte-stable JSON or markdown reports.

Exit codes: 0 on success, 2 on invalid input or a failed reproduction,
3 when a computation was inconclusive (a cap was reached, or a
decomposition could not be certified).  Reports carry the command, the
SHA-256 of every input file, and the results; timing is attached only
under ``--timing`` so that identical inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources
from typing import Optional

from . import domdim as dd
from . import modrep as mr
from .algebra import algebra_from_json, cartan_matrix
from .errors import (DecompositionInconclusive, FindimError, Inconclusive,
                     MalformedInput)
from .homalg import Finite
from .quiver import linear_quiver_algebra, liu_schulz

#### input handling ######################################################


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise MalformedInput(f"{path}: {e.strerror or e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(
            f"{path}: line {e.lineno} column {e.colno}: {e.msg}")


def _load_algebra(path: str):
    d = _load_json(path)
    try:
        return algebra_from_json(d)
    except (FindimError, KeyError, TypeError, ValueError, IndexError) as e:
        raise MalformedInput(f"{path}: not a valid algebra description: {e}")


def _load_module(path: str, A):
    d = _load_json(path)
    try:
        return mr.module_from_json(d, algebra=A)
    except (FindimError, KeyError, TypeError, ValueError, IndexError) as e:
        raise MalformedInput(f"{path}: not a valid module description: {e}")


def _cap(args) -> Optional[int]:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get("ALG_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise MalformedInput(f"ALG_CAP must be an integer, got {env!r}")
    return None


def _fixture(name: str) -> dict:
    ref = resources.files("findim").joinpath("fixtures").joinpath(name)
    return json.loads(ref.read_text(encoding="utf-8"))


#### subcommands #########################################################


def _cmd_inspect(args):
    A = _load_algebra(args.algebra)
    cap = _cap(args)
    results = {
        "dim": A.dim,
        "classes": A.n_idempotents,
        "cartan": cartan_matrix(A),
        "dm": dd.result_to_json(dd.domdim_algebra(A, cap=cap)),
        "self_injective": dd.is_self_injective(A),
        "morita": dd.is_morita(A, cap=cap),
    }
    return results, {args.algebra: _sha256(args.algebra)}


def _cmd_domdim(args):
    A = _load_algebra(args.algebra)
    cap = _cap(args)
    inputs = {args.algebra: _sha256(args.algebra)}
    if args.module:
        M = _load_module(args.module, A)
        inputs[args.module] = _sha256(args.module)
        dm = dd.domdim_module(M, cap=cap)
        results = {"subject": "module", "module_dim": M.dim,
                   "dm": dd.result_to_json(dm)}
    else:
        dm = dd.domdim_algebra(A, cap=cap)
        results = {"subject": "algebra", "dm": dd.result_to_json(dm)}
    return results, inputs


def _cmd_tilting_check(args):
    A = _load_algebra(args.algebra)
    T = _load_module(args.module, A)
    rep = dd.is_tilting(A, T, cap=_cap(args))
    results = {
        "is_tilting": rep.is_tilting,
        "pd": dd.result_to_json(rep.pd),
        "selforth_checked_to": rep.selforth_checked_to,
        "coresolution_dims": [m.dim for m in rep.coresolution],
        "failure_witness": list(rep.failure_witness)
        if rep.failure_witness is not None else None,
    }
    inputs = {args.algebra: _sha256(args.algebra),
              args.module: _sha256(args.module)}
    return results, inputs


def _cmd_gradient(args):
    A = _load_algebra(args.algebra)
    T = _load_module(args.tilting, A)
    rep = dd.global_gradient(A, T, cap=_cap(args))
    results = {
        "per_term": [dd.result_to_json(v) for v in rep.values],
        "term_dims": [P.dim for P in rep.projectives],
        "global": dd.result_to_json(rep.global_value),
        "heart_dim": rep.heart.dim,
    }
    inputs = {args.algebra: _sha256(args.algebra),
              args.tilting: _sha256(args.tilting)}
    return results, inputs


def _cmd_endo(args):
    A = _load_algebra(args.algebra)
    M = _load_module(args.module, A)
    B = dd.endo_algebra(M)
    results = {"dim": B.dim, "classes": B.n_idempotents}
    if args.cartan:
        results["cartan"] = cartan_matrix(B)
    inputs = {args.algebra: _sha256(args.algebra),
              args.module: _sha256(args.module)}
    return results, inputs


#### reproductions #######################################################


def _parse_q(text: str):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise MalformedInput(f"--q must be a rational number, got {text!r}")
    if q in (0, 1, -1):
        raise MalformedInput("--q must avoid 0, 1 and -1")
    return int(q) if q.denominator == 1 else q


def _cartan_eq_up_to_relabel(C, D) -> bool:
    from itertools import permutations
    n = len(C)
    if len(D) != n:
        return False
    return any(all(C[p[r]][p[c]] == D[r][c] for r in range(n)
                   for c in range(n))
               for p in permutations(range(n)))


def _ls_family(A):
    f = A.field
    q = f.of(A._cache["liu_schulz_q"])
    out = {}
    R = mr.regular(A)
    for j in range(6):
        u = [f.zero()] * 8
        u[3] = f.one()
        u[2] = q ** j
        out[j] = mr.submodule_generated(R, [u])[0]
    return out


def _cmd_repro_ls(args):
    q = _parse_q(args.q)
    want = _fixture("liu_schulz.json")
    A = liu_schulz(q)
    fam = _ls_family(A)
    mism: list[str] = []

    def check(label, got, expect):
        if got != expect:
            mism.append(f"{label}: got {got!r}, expected {expect!r}")
        return got

    results = {"q": str(q)}
    results["ideal_dims"] = check(
        "ideal_dims", [fam[j].dim for j in range(6)], want["ideal_dims"])
    results["hom_grid"] = check(
        "hom_grid",
        [[mr.hom_dim(fam[j], fam[i]) for i in range(6)] for j in range(6)],
        want["hom_grid"])
    from .homalg import ext
    results["ext_grid"] = check(
        "ext_grid",
        [[ext(fam[j], fam[i], 1).dim for i in range(6)] for j in range(6)],
        want["ext_grid"])
    R = mr.regular(A)
    results["hom_to_regular"] = check(
        "hom_to_regular", [mr.hom_dim(fam[i], R) for i in range(6)],
        want["hom_to_regular"])

    g = mr.projective_cover(fam[2])
    _, f_inc = mr.kernel(g)
    Lam, Gam = dd.theorem_lambda_gamma(A, (f_inc, g), fam[0])
    for label, B in (("lambda3", Lam), ("gamma", Gam)):
        block = {
            "dim": check(f"{label}.dim", B.dim, want[label]["dim"]),
            "dm": check(f"{label}.dm",
                        dd.result_to_json(dd.domdim_algebra(B)),
                        want[label]["dm"]),
            "cartan": check(f"{label}.cartan", cartan_matrix(B),
                            want[label]["cartan"]),
        }
        results[label] = block

    M2, _, _ = mr.direct_sum([R, fam[0], fam[2]])
    L2 = dd.endo_algebra(M2)
    results["lambda2"] = {
        "dim": check("lambda2.dim", L2.dim, want["lambda2"]["dim"]),
        "dm": check("lambda2.dm", dd.result_to_json(dd.domdim_algebra(L2)),
                    want["lambda2"]["dm"]),
        "cartan": check("lambda2.cartan", cartan_matrix(L2),
                        want["lambda2"]["cartan"]),
    }

    M3, _, _ = mr.direct_sum([R, fam[0], fam[3]])
    L3 = dd.endo_algebra(M3)
    results["endo_route_matches"] = check(
        "endo_route_matches",
        L3.dim == Lam.dim
        and _cartan_eq_up_to_relabel(cartan_matrix(L3), cartan_matrix(Lam))
        and dd.domdim_algebra(L3) == dd.domdim_algebra(Lam),
        True)

    results["verified"] = not mism
    if mism:
        results["mismatches"] = mism
    return results, {"fixtures/liu_schulz.json": _fixture_sha("liu_schulz.json")}


def _cmd_repro_lq(args):
    n = args.n
    if n < 1:
        raise MalformedInput("--n must be at least 1")
    want = _fixture("linear_quiver.json")
    A = linear_quiver_algebra(n)
    mism: list[str] = []

    def check(label, got, expect):
        if got != expect:
            mism.append(f"{label}: got {got!r}, expected {expect!r}")
        return got

    profile = want["profiles"].get(str(n))
    results = {"n": n, "dim": A.dim}
    dm = dd.domdim_algebra(A)
    results["dm"] = check("dm", dd.result_to_json(dm),
                          {"kind": "finite", "value": n})
    if profile is not None:
        check("dim", A.dim, profile["dim"])
    got_profile = []
    for i in range(1, n + 1):
        T = dd.basic_module(dd.canonical_tilting(A, i))
        B = dd.endo_algebra(T)
        got_profile.append(dd.result_to_json(dd.domdim_algebra(B)))
    expect_profile = [
        {"kind": "finite", "value": min(i, n - i) if i < n else n}
        for i in range(1, n + 1)]
    results["endo_dm_profile"] = check(
        "endo_dm_profile", got_profile, expect_profile)
    if profile is not None:
        check("endo_dm_profile/fixture", got_profile,
              [{"kind": "finite", "value": v} for v in profile["endo_dm"]])

    results["verified"] = not mism
    if mism:
        results["mismatches"] = mism
    return results, {"fixtures/linear_quiver.json":
                     _fixture_sha("linear_quiver.json")}


def _fixture_sha(name: str) -> str:
    ref = resources.files("findim").joinpath("fixtures").joinpath(name)
    return hashlib.sha256(ref.read_bytes()).hexdigest()


#### rendering ###########################################################


def _fmt_scalar(v) -> str:
    if isinstance(v, dict) and "kind" in v:
        if v["kind"] == "finite":
            return str(v["value"])
        if v["kind"] == "at_least":
            return f">= {v['cap']} (cap reached)"
        return "infinite"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return json.dumps(v)


def _is_grid(v) -> bool:
    return (isinstance(v, list) and v
            and all(isinstance(r, list) and len(r) == len(v[0]) for r in v)
            and all(isinstance(x, int) for r in v for x in r))


def _md_grid(v: list[list[int]]) -> list[str]:
    cols = len(v[0])
    lines = ["| | " + " | ".join(str(c) for c in range(cols)) + " |",
             "|" + "---|" * (cols + 1)]
    for r, row in enumerate(v):
        lines.append(f"| {r} | " + " | ".join(str(x) for x in row) + " |")
    return lines


def _md_block(key: str, v, depth: int) -> list[str]:
    head = "#" * min(depth, 6)
    if isinstance(v, dict) and "kind" not in v:
        lines = [f"{head} {key}", ""]
        for k in sorted(v):
            lines.extend(_md_block(k, v[k], depth + 1))
        return lines
    if _is_grid(v):
        return [f"{head} {key}", ""] + _md_grid(v) + [""]
    return [f"- {key}: {_fmt_scalar(v)}"]


def render_markdown(report: dict) -> str:
    lines = [f"# findim {report['command']}", ""]
    if report.get("inputs"):
        lines += ["## inputs", ""]
        for path in sorted(report["inputs"]):
            lines.append(f"- `{path}` — `{report['inputs'][path]}`")
        lines.append("")
    lines += ["## results", ""]
    results = report["results"]
    for key in sorted(results):
        lines.extend(_md_block(key, results[key], 3))
    if "timing" in report:
        lines += ["", f"_elapsed: {report['timing']['seconds']} s_"]
    return "\n".join(lines).rstrip() + "\n"


def _contains_cap(obj) -> bool:
    if isinstance(obj, dict):
        if obj.get("kind") == "at_least":
            return True
        return any(_contains_cap(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_contains_cap(v) for v in obj)
    return False


#### argument parsing ####################################################


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="findim",
        description="Exact homological analyses of finite-dimensional "
                    "algebras: dominant dimensions, tilting modules, "
                    "gradients, endomorphism algebras.")
    p.add_argument("--format", choices=("json", "markdown"), default="json",
                   help="output format (default: json)")
    p.add_argument("--timing", action="store_true",
                   help="attach wall-clock timing to the report")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("inspect", help="dimension, Cartan matrix, dominant "
                                        "dimension of an algebra")
    sp.add_argument("algebra")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=_cmd_inspect, label="inspect")

    sp = sub.add_parser("domdim", help="dominant dimension of an algebra "
                                       "or of a module")
    sp.add_argument("algebra")
    sp.add_argument("--module")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=_cmd_domdim, label="domdim")

    tp = sub.add_parser("tilting", help="tilting-module analyses")
    tsub = tp.add_subparsers(dest="subcommand", required=True)
    sp = tsub.add_parser("check", help="validate the tilting axioms")
    sp.add_argument("algebra")
    sp.add_argument("module")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=_cmd_tilting_check, label="tilting check")

    sp = sub.add_parser("gradient", help="per-term and global gradients "
                                         "along a tilting module")
    sp.add_argument("algebra")
    sp.add_argument("tilting")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=_cmd_gradient, label="gradient")

    sp = sub.add_parser("endo", help="endomorphism algebra of a module")
    sp.add_argument("algebra")
    sp.add_argument("module")
    sp.add_argument("--cartan", action="store_true",
                    help="include the Cartan matrix")
    sp.set_defaults(func=_cmd_endo, label="endo")

    rp = sub.add_parser("repro", help="self-verifying reference "
                                      "computations")
    rsub = rp.add_subparsers(dest="subcommand", required=True)
    sp = rsub.add_parser("liu-schulz",
                         help="the q-parameterized local algebra, its "
                              "ideal family and corner extensions")
    sp.add_argument("--q", default="2")
    sp.set_defaults(func=_cmd_repro_ls, label="repro liu-schulz")
    sp = rsub.add_parser("linear-quiver",
                         help="the bound linear quiver family and its "
                              "canonical tilts")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_repro_lq, label="repro linear-quiver")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        results, inputs = args.func(args)
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (Inconclusive, DecompositionInconclusive) as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return 3
    report = {"command": args.label, "inputs": inputs, "results": results}
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render_markdown(report), end="")
    if results.get("verified") is False:
        print("error: reproduction mismatch", file=sys.stderr)
        return 2
    return 3 if _contains_cap(results) else 0


if __name__ == "__main__":
    sys.exit(main())
