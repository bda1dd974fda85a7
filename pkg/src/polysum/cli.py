"""``polysum`` command line.

Exit codes: 0 when every check passes, 1 when an identity fails or the
perturbation gives up, 2 on bad input or configuration.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import batch
from .centered import is_perfectly_centered, verify_mainthm_pc
from .errors import PerturbationError, PolysumError
from .flag import flag_vector, from_face_lattice
from .generate import rand_polytope
from .io import dump_json, load_input, load_polytope, polytope_to_json, save_polytope
from .minkowski import (is_relatively_general_position, minkowski_sum,
                        perturb_to_general_position)
from .polytope import euler_check, f_vector, polar_dual


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _dimension(text: str) -> int:
    d = int(text)
    if not 1 <= d <= 4:
        raise argparse.ArgumentTypeError("--d must be between 1 and 4")
    return d


def _vertices(text: str) -> int:
    n = int(text)
    if not 1 <= n <= 200:
        raise argparse.ArgumentTypeError("--vertices must be between 1 and 200")
    return n


def cmd_fvector(args) -> int:
    p = load_polytope(args.path)
    lat = p.lattice
    f = f_vector(lat)
    euler = euler_check(f)
    fv = flag_vector(from_face_lattice(lat))
    if args.json:
        print(dump_json({"name": p.name, "dim": p.dim, "f_vector": list(f.counts),
                         "flag_vector": fv.to_json(max_size=3), "euler": euler.to_json()}), end="")
    else:
        print(f"f = {f}; euler: {'pass' if euler.passed else 'FAIL'}")
        for row in fv.to_json(max_size=3):
            if len(row["S"]) >= 2:
                print(f"f_{{{','.join(map(str, row['S']))}}} = {row['count']}")
    return 0 if euler.passed else 1


def cmd_sum(args) -> int:
    summands = [load_polytope(p) for p in args.paths]
    ms = minkowski_sum(summands)
    f = f_vector(ms.lattice)
    out = {"sum": polytope_to_json(ms.polytope), "f_vector": list(f.counts), "dim": ms.d}
    lines = [f"sum {ms.polytope.name}: dim {ms.d}, f = {f}"]
    if args.decompose or args.check_gp:
        sd = ms.decomposition
    if args.decompose:
        rows = []
        lat = ms.lattice
        for i in lat.nonempty():
            face = lat.faces[i]
            parts = [sorted(s.lattice.faces[j].vertices) for s, j in zip(summands, sd.parts[i])]
            rows.append({"face": sorted(face.vertices), "dim": face.dim, "parts": parts,
                         "exact": sd.exact[i]})
            lines.append(f"  {sorted(face.vertices)} (dim {face.dim}) -> {parts} "
                         f"{'exact' if sd.exact[i] else 'inexact'}")
        out["decomposition"] = rows
    if args.check_gp:
        gp = is_relatively_general_position(sd)
        out["general_position"] = gp
        lines.append(f"gp: {'true' if gp else 'false'}")
    if args.out:
        save_polytope(ms.polytope, args.out)
    print(dump_json(out), end="") if args.json else print("\n".join(lines))
    return 0


def cmd_perturb(args) -> int:
    summands = [load_polytope(p) for p in args.paths]
    before = f_vector(minkowski_sum(summands).lattice)
    try:
        rotated = perturb_to_general_position(summands, args.seed, batch.max_retries())
    except PerturbationError as exc:
        print(f"error: {exc}; last attempt: {exc.diagnostics}", file=sys.stderr)
        return 1
    after = f_vector(minkowski_sum(rotated).lattice)
    unchanged = all(a is b for a, b in zip(summands, rotated))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for path, p in zip(args.paths, rotated):
        save_polytope(p, outdir / (Path(path).stem + "_rot.json"))
    width = max(len(before), len(after))
    pad = lambda f: list(f.counts) + [0] * (width - len(f.counts))
    ok = all(x >= y for x, y in zip(pad(after), pad(before)))
    if unchanged:
        print("identity rotation: input already relatively in general position")
    print(f"before: f = {before}")
    print(f"after:  f = {after}")
    print(f"componentwise >=: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    if not args.random and not args.inputs:
        raise PolysumError("give input files or --random")
    inputs = [load_input(p) for p in args.inputs]
    a_values = tuple(args.a) if args.a else batch.DEFAULT_A
    result = batch.verify_batch(args.identity, inputs, random_count=args.count if args.random else 0,
                                seed=args.seed, d=args.d, vertices=args.vertices, a_values=a_values)
    if args.out:
        dump_json(result, args.out)
    if args.json:
        print(dump_json(result), end="")
    else:
        for rec in result["instances"]:
            for rep in rec["reports"]:
                status = "pass" if rep["pass"] else "FAIL"
                notes = [x["precondition_violated"] for x in rep["diagnostics"]
                         if "precondition_violated" in x]
                note = f" (advisory: {'; '.join(notes)})" if notes else ""
                print(f"[{rec['index']}] {rec['name']}: {rep['identity']} "
                      f"lhs={rep['lhs']} rhs={rep['rhs']} {status}{note}")
        print(f"{result['passed']}/{result['total']} pass")
    return 0 if result["passed"] == result["total"] else 1


def cmd_dual(args) -> int:
    q = polar_dual(load_polytope(args.path))
    text = dump_json(polytope_to_json(q), args.out)
    if not args.out:
        print(text, end="")
    return 0


def cmd_pc_check(args) -> int:
    p = load_polytope(args.path)
    rep = is_perfectly_centered(p)
    reports = [rep]
    if rep.passed:
        reports.append(verify_mainthm_pc(p))
    if args.json:
        print(dump_json([r.to_json() for r in reports]), end="")
    else:
        for r in reports:
            print(r)
    return 0 if all(r.passed for r in reports) else 1


def cmd_rand(args) -> int:
    p = rand_polytope(args.d, args.vertices, args.seed, name=f"rand_d{args.d}_s{args.seed}")
    text = dump_json(polytope_to_json(p), args.out)
    if not args.out:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polysum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fvector", help="f-vector, flag vector and Euler check")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fvector)

    p = sub.add_parser("sum", help="Minkowski sum of polytope files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--decompose", action="store_true")
    p.add_argument("--check-gp", action="store_true")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("perturb", help="rotate summands into relative general position")
    p.add_argument("paths", nargs="+")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("verify", help="check an identity on files or random instances")
    p.add_argument("identity", choices=batch.IDENTITIES)
    p.add_argument("inputs", nargs="*")
    p.add_argument("--random", action="store_true")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=_dimension)
    p.add_argument("--vertices", type=_vertices)
    p.add_argument("--a", type=_fraction, action="append")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="polar dual of a polytope with the origin inside")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("pc-check", help="test perfect centering")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pc_check)

    p = sub.add_parser("rand", help="seeded random polytope")
    p.add_argument("--d", type=_dimension, default=3)
    p.add_argument("--vertices", type=_vertices, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rand)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolysumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
