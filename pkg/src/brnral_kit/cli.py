"""Command-line front end.

Exit codes: 0 success, 1 mathematical rejection (an invariant failed, with
its witness), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .brnral import brnral_char_zero, brnral_finite_field, real_orthogonality
from .cohom import h1_abelian, h1_cyclic, h1_nonabelian
from .errors import InvariantError
from .io import FORMAT, Instance, ParseError, dumps, read_json
from .oracles import verify_instance
from .torf import (ExtensionLevel, build_finite_subgroup, corollary_variant, enlarge_subgroup,
                   h1_surjectivity_report)

log = logging.getLogger("brnral_kit")

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _emit(payload: dict, output: str | None) -> None:
    text = dumps({"format": FORMAT, **payload})
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _levels(text: str) -> list[int]:
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if any(v < 1 for v in out):
        raise argparse.ArgumentTypeError("levels must be positive")
    return out


# --- commands --------------------------------------------------------------------

def cmd_brnral(args) -> int:
    inst = Instance.load(args.input).brnral()
    res = brnral_finite_field(inst) if args.mode == "ff" else brnral_char_zero(inst)
    _emit({"command": f"brnral {args.mode}", **res.to_dict()}, args.output)
    return EXIT_OK


def cmd_h1(args) -> int:
    inst = Instance.load(args.input)
    M = inst.brnral().M if "H" in inst.data else inst.module()
    H1 = h1_abelian(M)
    out = {"command": "cohomology h1",
           "invariants": list(H1.invariants), "order": H1.order,
           "generators": [g.to_list() for g in H1.generators()]}
    G = M.actor
    gen = next((g for g in G if G.element_orders[g] == G.order), None)
    if gen is not None:
        out["cyclic"] = {"generator": gen, "invariants": list(h1_cyclic(M, gen).invariants)}
    _emit(out, args.output)
    return EXIT_OK


def cmd_h1_nonab(args) -> int:
    act = Instance.load(args.input).action()
    H1 = h1_nonabelian(act)
    _emit({"command": "cohomology h1-nonab", "classes": len(H1),
           "representatives": [list(r.values) for r in H1.representatives]}, args.output)
    return EXIT_OK


def cmd_norm_table(args) -> int:
    nc = Instance.load(args.input).norm_context()
    nc.validate()
    _emit({"command": "norm-table", "hab": list(nc.hab.orders), "rows": nc.norm_table()},
          args.output)
    return EXIT_OK


def cmd_real(args) -> int:
    inst = Instance.load(args.input).brnral()
    rep = real_orthogonality(inst)
    _emit({"command": "check real-orthogonality", **rep.to_dict()}, args.output)
    return EXIT_OK if rep.all_orthogonal else EXIT_REJECT


def _build(args):
    data = Instance.load(args.input).torf()
    return build_finite_subgroup(data, args.n, args.d, args.max_level)


def cmd_build(args) -> int:
    res = _build(args)
    out = {"command": "subgroup build", **res.to_dict()}
    if args.ladder is not None:
        out["surjectivity"] = h1_surjectivity_report(res, args.ladder)
    _emit(out, args.output)
    return EXIT_OK if res.certificate["passed"] else EXIT_REJECT


def cmd_enlarge(args) -> int:
    res = _build(args)
    m = args.m if args.m is not None else res.n * res.d
    if args.m is None:
        info = corollary_variant(res)
    else:
        E = ExtensionLevel(res.data.lattice, res.level, res.cocycle)
        out = enlarge_subgroup(E, res.pairs, m)
        info = {"level": out.level.level, "order": out.order,
                "torus_order": len(out.torus_part), "checks": out.checks}
    _emit({"command": "subgroup enlarge", "base_order": res.order, "base_level": res.level,
           "m": m, **info}, args.output)
    ok = all(v for v in info["checks"].values() if isinstance(v, bool))
    return EXIT_OK if ok else EXIT_REJECT


def _verify_one(path: str, max_level):
    try:
        return path, verify_instance(read_json(path), max_level), None
    except (InvariantError, ParseError) as exc:
        return path, None, str(exc)


def cmd_verify(args) -> int:
    paths = list(args.input or [])
    if args.corpus:
        from .corpus import corpus_dir
        paths += [str(p) for p in sorted(corpus_dir().glob("*.json"))]
    if not paths:
        raise ParseError("oracle verify needs -i or --corpus")
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_one, paths, [args.max_level] * len(paths)))
    else:
        results = [_verify_one(p, args.max_level) for p in paths]
    entries = []
    for path, rep, err in results:
        name = Path(path).stem
        if err is not None:
            entries.append({"instance": name, "ok": False, "error": err})
        else:
            entries.append({"instance": name, **rep})
    ok = all(e["ok"] for e in entries)
    payload = {"command": "oracle verify", "ok": ok, "instances": entries}
    if len(entries) == 1:
        payload = {"command": "oracle verify", **entries[0]}
    _emit(payload, args.output)
    for e in entries:
        if not e["ok"]:
            failed = [c["check"] for c in e.get("checks", []) if not c["ok"]]
            print(f"MISMATCH {e['instance']}: {e.get('error') or ', '.join(failed)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_REJECT


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="brnral-kit", description="Unramified algebraic Brauer group calculators.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def io_args(sp, multi=False):
        if multi:
            sp.add_argument("-i", "--input", action="append", help="instance file (repeatable)")
        else:
            sp.add_argument("-i", "--input", required=True, help="instance file")
        sp.add_argument("-o", "--output", help="result file (default: stdout)")
        sp.add_argument("--max-level", type=int, default=None, help="torsion level retry bound")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")

    br = sub.add_parser("brnral", help="membership calculators")
    brs = br.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode, text in (("ff", "finite-field formula (Frobenius only)"),
                       ("char0", "characteristic-zero formula (all of Γ)")):
        io_args(brs.add_parser(mode, help=text))
        brs.choices[mode].set_defaults(func=cmd_brnral)

    sg = sub.add_parser("subgroup", help="finite subgroups of the torus extension")
    sgs = sg.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = sgs.add_parser("build", help="construct the finite Galois-stable subgroup H")
    e = sgs.add_parser("enlarge", help="enlarge the built H by the m-torsion preimage")
    for sp in (b, e):
        io_args(sp)
        sp.add_argument("--n", type=int, default=None, help="order of F (default |F|)")
        sp.add_argument("--d", type=int, default=None, help="splitting degree")
    b.add_argument("--ladder", type=_levels, default=None,
                   help="comma-separated torsion levels for the H^1 surjectivity report")
    b.set_defaults(func=cmd_build)
    e.add_argument("--m", type=int, default=None, help="multiplier (default n·d)")
    e.set_defaults(func=cmd_enlarge)

    co = sub.add_parser("cohomology", help="H^1 computations")
    cos = co.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    io_args(cos.add_parser("h1", help="abelian H^1(Γ, M)"))
    cos.choices["h1"].set_defaults(func=cmd_h1)
    io_args(cos.add_parser("h1-nonab", help="nonabelian H^1(Γ, H)"))
    cos.choices["h1-nonab"].set_defaults(func=cmd_h1_nonab)

    nt = sub.add_parser("norm-table", help="N(σ, b) for all σ and b")
    io_args(nt)
    nt.set_defaults(func=cmd_norm_table)

    ch = sub.add_parser("check", help="theorem checks")
    chs = ch.add_subparsers(dest="check", required=True, parser_class=_Parser)
    io_args(chs.add_parser("real-orthogonality", help="cup products at a real place"))
    chs.choices["real-orthogonality"].set_defaults(func=cmd_real)

    orc = sub.add_parser("oracle", help="brute-force cross-checks")
    ors = orc.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    v = ors.add_parser("verify", help="re-run calculators against brute-force oracles")
    io_args(v, multi=True)
    v.add_argument("--corpus", action="store_true", help="verify every bundled instance")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(dumps({"format": FORMAT, "error": exc.to_dict()}),
              file=sys.stderr, end="")
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
