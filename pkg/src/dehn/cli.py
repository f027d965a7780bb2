"""Command-line front end.

Exit status: 0 on success, 1 on malformed input, 2 when a search ran out of
limits and the answer is unknown.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .complex2 import Complex2, standard_model
from .diagram import VanKampenDiagram, collapse
from .growth import GrowthTable, classify_table
from .plmaps import PLDiscMap, combinatorialize, component_degrees
from .presentation import (AreaLimits, Presentation, combinatorial_area, cyclic_group, dehn_function,
                           free_group, free_reduce, z2)
from .pushing import (DEFAULT_R, LocalSegment, PLChain, ambient, estimate_alpha, local_xy, push_chain,
                      pushing_constants)

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_presentation(source: str) -> Presentation:
    """A presentation file, or one of ``z2``, ``free:N``, ``cyclic:N``."""
    if os.path.exists(source):
        return Presentation.from_text(_read(source))
    name, _, arg = source.partition(":")
    if name == "z2" and not arg:
        return z2()
    if name in ("free", "cyclic") and arg.isdigit():
        return free_group(int(arg)) if name == "free" else cyclic_group(int(arg))
    raise InputError(f"no presentation file or built-in named {source!r}")


def load_complex(source: str) -> Complex2:
    """A complex file, or a model ``name:size`` such as ``disc_grid:3``."""
    if os.path.exists(source):
        return Complex2.from_text(_read(source))
    name, _, arg = source.partition(":")
    size = int(arg) if arg.isdigit() else 1
    return standard_model(name, size)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _limits(args) -> AreaLimits:
    lim = AreaLimits()
    if args.limit_area is not None:
        lim.max_area = args.limit_area
    if args.limit_wordlen is not None:
        lim.max_word_length = args.limit_wordlen
    return lim


# -- commands ------------------------------------------------------------------------

def cmd_area(args) -> int:
    P = load_presentation(args.presentation)
    w = P.parse_word(args.word)
    if tuple(free_reduce(w)) != tuple(w):
        print(f"note: reducing {args.word} to {P.format_word(free_reduce(w)) or '1'}", file=sys.stderr)
        w = free_reduce(w)
    res = combinatorial_area(w, P, _limits(args))
    if args.format == "json":
        _emit(args, _dumps(res.to_dict()))
    elif args.format == "csv":
        d = res.to_dict()
        _emit(args, ",".join(d) + "\n" + ",".join("" if v is None else str(v) for v in d.values()))
    else:
        _emit(args, str(res))
    return EXIT_UNKNOWN if res.status in ("Unknown", "LowerBound") else EXIT_OK


def cmd_dehn(args) -> int:
    P = load_presentation(args.presentation)
    table = dehn_function(P, args.n, _limits(args))
    if args.format == "json":
        _emit(args, _dumps({"values": {str(k): int(v) for k, v in table.samples.items()},
                            "flagged": sorted(k for k, f in table.flags.items() if f)}))
    elif args.format == "table":
        rows = [f"{'n':>4} {'delta':>6}"] + [f"{k:>4} {int(v):>6}{' *' if table.flags.get(k) else ''}"
                                             for k, v in table.samples.items() if k > 0]
        _emit(args, "\n".join(rows))
    else:
        _emit(args, GrowthTable({k: v for k, v in table.samples.items() if k > 0}).to_csv())
    for k, f in table.flags.items():
        if f:
            print(f"warning: entry n={k} rests on a non-exact area", file=sys.stderr)
    return EXIT_UNKNOWN if any(table.flags.values()) else EXIT_OK


def cmd_classify(args) -> int:
    t = GrowthTable.from_csv(_read(args.table))
    res = classify_table(t, args.max_exp)
    doc = {name: {"dominated_by": str(r.forward) if r.forward else None,
                  "dominates": str(r.backward) if r.backward else None,
                  "equivalent": r.equivalent} for name, r in res.items()}
    matches = [n for n, r in res.items() if r.equivalent]
    if args.format == "json":
        _emit(args, _dumps({"classes": doc, "matches": matches}))
    elif args.format == "csv":
        lines = ["class,equivalent,dominated_by,dominates"]
        lines += [f"{n},{d['equivalent']},{d['dominated_by'] or ''},{d['dominates'] or ''}" for n, d in doc.items()]
        _emit(args, "\n".join(lines))
    else:
        lines = [f"{n:<12} {'equivalent' if d['equivalent'] else '-':<10}" for n, d in doc.items()]
        for n in matches:
            lines.append(f"{n}: {res[n]}".replace("\n", "; "))
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_reduce(args) -> int:
    K = load_complex(args.target)
    D = VanKampenDiagram.from_json(_read(args.diagram), K)
    rep = collapse(D, allow_boundary_collapse=args.allow_boundary_collapse)
    doc = {"diagram": json.loads(rep.diagram.to_json()),
           "report": {"excised_sphere_count": rep.excised_sphere_count, "area_before": rep.area_before,
                      "area_after": rep.area_after, "excised_areas": rep.excised_areas,
                      "sphere_eulers": rep.sphere_eulers}}
    if args.format == "table":
        r = doc["report"]
        _emit(args, f"area {r['area_before']} -> {r['area_after']}, spheres excised {r['excised_sphere_count']}")
    else:
        _emit(args, _dumps(doc))
    return EXIT_OK


def _piece_json(item) -> dict:
    if item[0] == "seg":
        return {"kind": "seg", "a": list(map(float, item[1])), "b": list(map(float, item[2]))}
    return {"kind": "arc", "center": list(map(float, item[1])), "radius": float(item[2]),
            "phi0": float(item[3]), "phi1": float(item[4])}


def cmd_push(args) -> int:
    K = load_complex(args.complex)
    T = PLChain.from_json(_read(args.chain), K)
    C = pushing_constants(1, 2, args.r)
    res = push_chain(T, K, C, seed=args.seed)
    cert = res.certificate
    if args.format == "table":
        _emit(args, cert.table())
    else:
        doc = {"R": json.loads(res.R.to_json()),
               "S": [{"simplex": c.simplex, "mult": c.mult, "path": [_piece_json(p) for p in c.path]}
                     for c in res.S],
               "certificate": cert.to_dict()}
        _emit(args, _dumps(doc))
    return EXIT_OK


def cmd_straighten(args) -> int:
    K = load_complex(args.complex)
    eta = PLChain.from_json(_read(args.loop), K)
    zeta, cert = combinatorialize(eta, K, args.seed)
    if args.format == "table":
        _emit(args, "zeta " + " ".join(f"{e}{'+' if s > 0 else '-'}" for e, s in zeta.edges) + "\n" + cert.table())
    else:
        _emit(args, _dumps({"loop": json.loads(zeta.to_json()), "certificate": cert.to_dict()}))
    return EXIT_OK


def cmd_degree(args) -> int:
    f = PLDiscMap.from_json(_read(args.discmap))
    f.validate()
    rep = component_degrees(f, args.seed, args.samples or 5)
    if args.format == "table":
        _emit(args, rep.table())
    elif args.format == "csv":
        lines = ["simplex,triangles,degree,area,bound_ok"]
        lines += [f"{c.simplex},{len(c.triangles)},{c.degree},{c.area!r},{c.bound_ok}" for c in rep.components]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _dumps(rep.to_dict()))
    return EXIT_OK


def cmd_alpha(args) -> int:
    K = load_complex(args.complex)
    T = PLChain.from_json(_read(args.chain), K)
    by_face: dict = {}
    for s in T.pieces:
        kind, c = ambient(K, s)
        if kind == "face":
            by_face.setdefault(c, []).append(LocalSegment(tuple(local_xy(K, c, s.p)), tuple(local_xy(K, c, s.q)), s.mult))
    C = pushing_constants(1, 2, args.r)
    rows = []
    for f in sorted(by_face):
        est = estimate_alpha(by_face[f], args.v, args.samples or 10_000, [args.seed, f], args.r)
        rows.append({"simplex": f, "v": est.v, "alpha": est.alpha, "ci_low": est.ci_low, "ci_high": est.ci_high,
                     "hits": est.hits, "samples": est.samples, "alpha_v": est.alpha * est.v,
                     "bound_K": C.K, "bound_ok": est.ci_low * est.v <= C.K})
    if args.format == "csv":
        keys = list(rows[0]) if rows else ["simplex"]
        _emit(args, "\n".join([",".join(keys)] + [",".join(repr(r[k]) if isinstance(r[k], float) else str(r[k])
                                                          for k in keys) for r in rows]))
    elif args.format == "table":
        lines = [f"{'simplex':>7} {'alpha':>12} {'95% CI':>27} {'alpha*v':>10} {'K':>10}"]
        lines += [f"{r['simplex']:>7} {r['alpha']:>12.6g} [{r['ci_low']:>11.6g}, {r['ci_high']:>11.6g}] "
                  f"{r['alpha_v']:>10.6g} {r['bound_K']:>10.6g}" for r in rows]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _dumps(rows))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random choices")
    common.add_argument("--limit-area", type=int, default=None)
    common.add_argument("--limit-wordlen", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--format", choices=["json", "csv", "table"], default=None)
    common.add_argument("--out", default=None, help="write the primary output here instead of stdout")

    p = _Parser(prog="dehn", description="Dehn functions, van Kampen diagrams and the pushing lemma.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("area", parents=[common], help="combinatorial area of a word")
    s.add_argument("presentation")
    s.add_argument("word")
    s.set_defaults(func=cmd_area, default_format="table")

    s = sub.add_parser("dehn", parents=[common], help="tabulate the Dehn function")
    s.add_argument("presentation")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_dehn, default_format="csv")

    s = sub.add_parser("classify", parents=[common], help="growth class of a CSV table")
    s.add_argument("table")
    s.add_argument("--max-exp", type=int, default=3)
    s.set_defaults(func=cmd_classify, default_format="table")

    s = sub.add_parser("reduce", parents=[common], help="collapse a degenerate diagram")
    s.add_argument("diagram")
    s.add_argument("--target", required=True, help="complex file or model name:size")
    s.add_argument("--allow-boundary-collapse", action="store_true")
    s.set_defaults(func=cmd_reduce, default_format="json")

    s = sub.add_parser("push", parents=[common], help="push a 1-chain into the 1-skeleton")
    s.add_argument("complex")
    s.add_argument("chain")
    s.add_argument("--r", type=float, default=DEFAULT_R)
    s.set_defaults(func=cmd_push, default_format="json")

    s = sub.add_parser("straighten", parents=[common], help="combinatorial loop from a skeleton loop")
    s.add_argument("complex")
    s.add_argument("loop")
    s.set_defaults(func=cmd_straighten, default_format="json")

    s = sub.add_parser("degree", parents=[common], help="degrees of a PL disc map")
    s.add_argument("discmap")
    s.set_defaults(func=cmd_degree, default_format="json")

    s = sub.add_parser("alpha", parents=[common], help="measure of bad centres")
    s.add_argument("chain")
    s.add_argument("--v", type=float, required=True)
    s.add_argument("--r", type=float, default=DEFAULT_R)
    s.add_argument("--complex", default="single_triangle")
    s.set_defaults(func=cmd_alpha, default_format="table")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
