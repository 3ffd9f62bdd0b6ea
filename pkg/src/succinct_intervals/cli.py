"""Command-line front end.

    succinct-intervals gen --n N --seed S [--out F]
    succinct-intervals convert --in F [--out G]
    succinct-intervals build --kind adj|deg|cellprobe --in F --out G
    succinct-intervals query --kind K --in G adj I J
    succinct-intervals query --kind K --in G deg I
    succinct-intervals reconstruct --kind adj|deg|cellprobe --in G [--out F]
    succinct-intervals audit --kind K --n-list N [N ...] [--seed S] [--queries Q]
"""

from __future__ import annotations

import argparse
import sys

from . import audit
from .adjacency import AdjCode, adj_reconstruct
from .cellprobe import CellProbeCode, cp_reconstruct
from .core import classic_to_universal, normalize_to_classic, sample_uniform
from .degree import DegCode, deg_reconstruct
from .errors import InvariantError
from .formats import dumps_uir, loads_intervals, read_uir

CODECS = {"adj": AdjCode, "deg": DegCode, "cellprobe": CellProbeCode}
RECONSTRUCT = {"adj": adj_reconstruct, "deg": deg_reconstruct, "cellprobe": cp_reconstruct}


class UsageError(ValueError):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _n_list(values) -> list[int]:
    out = []
    for v in values:
        for tok in v.split(","):
            if tok:
                out.append(_positive(tok))
    if not out:
        raise UsageError("--n-list is empty")
    return out


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="succinct-intervals", description="Succinct interval graph structures.")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="sample a uniform universal representation")
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")

    c = sub.add_parser("convert", help="interval list to universal representation")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out")

    b = sub.add_parser("build", help="build and serialize a structure")
    b.add_argument("--kind", choices=sorted(CODECS), required=True)
    b.add_argument("--in", dest="inp", required=True)
    b.add_argument("--out", required=True)

    q = sub.add_parser("query", help="answer one query on a serialized structure")
    q.add_argument("--kind", choices=sorted(CODECS), required=True)
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("op", choices=("adj", "deg"))
    q.add_argument("vertices", nargs="+", type=int)

    r = sub.add_parser("reconstruct", help="decode a structure back to UIR text")
    r.add_argument("--kind", choices=sorted(CODECS), required=True)
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out")

    a = sub.add_parser("audit", help="print redundancy and probe CSV")
    a.add_argument("--kind", choices=audit.KINDS, required=True)
    a.add_argument("--n-list", nargs="+", required=True)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--queries", type=int, default=1000)
    return p


def _emit_text(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="\n") as f:
            f.write(text)


def _load(kind: str, path: str):
    with open(path, "rb") as f:
        return CODECS[kind].from_bytes(f.read())


def _query(args) -> str:
    want = 2 if args.op == "adj" else 1
    if len(args.vertices) != want:
        raise UsageError(f"query {args.op} takes {want} vertex argument(s), got {len(args.vertices)}")
    for v in args.vertices:
        if v < 1:
            raise IndexError(f"vertex {v} must be at least 1")
    if args.op == "deg" and args.kind != "deg":
        raise UsageError(f"degree queries need a deg structure, not {args.kind}")
    code = _load(args.kind, args.inp)
    if args.op == "deg":
        return str(code.degree(args.vertices[0]))
    return "true" if code.adj(*args.vertices) else "false"


def dispatch(args) -> None:
    if args.verb == "gen":
        _emit_text(dumps_uir(sample_uniform(args.n, args.seed)), args.out)
    elif args.verb == "convert":
        with open(args.inp, encoding="utf-8") as f:
            raw = loads_intervals(f.read())
        _emit_text(dumps_uir(classic_to_universal(normalize_to_classic(raw))), args.out)
    elif args.verb == "build":
        code = audit.build(args.kind, read_uir(args.inp))
        with open(args.out, "wb") as f:
            f.write(code.to_bytes())
    elif args.verb == "query":
        print(_query(args))
    elif args.verb == "reconstruct":
        rep = RECONSTRUCT[args.kind](_load(args.kind, args.inp))
        _emit_text(dumps_uir(rep), args.out)
    elif args.verb == "audit":
        n_list = _n_list(args.n_list)
        reports = audit.redundancy_curve(args.kind, n_list, args.seed, args.queries)
        sys.stdout.write(audit.to_csv(reports))


def run(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return 0 if exc.code == 0 else 1
    try:
        dispatch(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
