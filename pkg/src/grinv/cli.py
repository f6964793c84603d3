"""Command-line surface.

Subcommands: gri, gpd, decompose, invertible, zib, bounds, erosion,
enumerate, fixtures.  Exit codes: 0 ok, 2 input error, 3 enumeration cap
exceeded, 4 invariant violation detected (an internal-consistency alarm,
e.g. a non-monotone rank table).  Identical inputs and options produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .erosion import ThickeningFamily, erosion_distance, union_bbox, verify_erosion
from .fixtures import FIXTURES, build_fixture
from .gf import is_prime
from .invariants import (
    RankCache,
    containment_dot,
    format_members,
    gpd,
    gri,
    minimal_rank_decomposition,
    verify_invertibility,
)
from .modules import PModule, generalized_rank
from .posets import (
    EnumerationCapError,
    FinitePoset,
    GridInterval,
    containment_poset,
    enumerate_connected,
    enumerate_grid_intervals,
    enumerate_intervals,
    enumerate_segments,
    subposet,
)
from .zigzag import ZigzagPath, multiplicity_bounds, rank_bounds_from_gri, zigzag_barcode

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INVARIANT = 4

ENV_FIELD = "GRINV_FIELD"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _default_field() -> int:
    raw = os.environ.get(ENV_FIELD)
    if raw is None:
        return 2
    try:
        p = int(raw)
    except ValueError:
        raise CliError(f"{ENV_FIELD} must be an integer, got {raw!r}")
    return p


def _load_module(path: str, args) -> PModule:
    """Parse a module file.  The file's `field p` line is authoritative; an
    explicitly given --field (or env default) must agree with it."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read module file: {e}")
    try:
        module = PModule.from_text(text)
    except (ValueError, IndexError) as e:
        raise CliError(f"cannot parse module file {path}: {e}")
    if getattr(args, "field_explicit", False) and args.field != module.p:
        raise CliError(
            f"module file declares field {module.p} but --field {args.field} was given"
        )
    return module


def _collection(module: PModule, spec: str, cap: int):
    """Resolve a collection selector: segments | intervals | connected |
    int:M,N | file:PATH."""
    poset = module.poset
    if spec == "segments":
        if poset.grid_coords is not None:
            return enumerate_grid_intervals(poset, 1, 1, cap)
        return enumerate_segments(poset)
    if spec == "intervals":
        if poset.grid_coords is not None:
            return enumerate_grid_intervals(poset, cap=cap)
        return enumerate_intervals(poset, cap=cap)
    if spec == "connected":
        return enumerate_connected(poset)
    if spec.startswith("int:"):
        try:
            m, n = (int(t) for t in spec[4:].split(","))
        except ValueError:
            raise CliError(f"bad collection selector {spec!r}; expected int:M,N")
        if poset.grid_coords is None:
            return enumerate_intervals(poset, m, n, cap)
        return enumerate_grid_intervals(poset, m, n, cap)
    if spec.startswith("file:"):
        return _read_collection_file(module, spec[5:])
    raise CliError(f"unknown collection selector {spec!r}")


def _parse_members(module: PModule, tokens: list[str], kind: str | None = None):
    """One subset per line: `x,y` coordinate tokens or plain element ids.
    Connected non-intervals stay id-based subsets; intervals become
    ambient grid intervals when the module has coordinates."""
    if all("," in t for t in tokens):
        pts = []
        for t in tokens:
            x, y = t.split(",")
            pts.append((int(x), int(y)))
        if kind == "connected":
            idx = module.poset.id_of_coord()
            return subposet(module.poset, (idx[pt] for pt in pts), kind="connected")
        return GridInterval.from_points(pts)
    ids = tuple(int(t) for t in tokens)
    if module.poset.grid_coords is not None and kind != "connected":
        return GridInterval.from_points(module.poset.grid_coords[i] for i in ids)
    return subposet(module.poset, ids, kind=kind)


def _read_collection_file(module: PModule, path: str):
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    except OSError as e:
        raise CliError(f"cannot read collection file: {e}")
    out = []
    for ln in lines:
        tokens = ln.split()
        kind = None
        if tokens[0] in ("interval", "connected", "segment"):
            kind = tokens[0]
            tokens = tokens[1:]
        try:
            out.append(_parse_members(module, tokens, kind))
        except (ValueError, KeyError, IndexError) as e:
            raise CliError(f"bad collection line {ln!r}: {e}")
    if not out:
        raise CliError("collection file is empty")
    # a collection must live in one member-key space: if any entry is an
    # id-based subset, re-house the ambient intervals as id subsets too
    if any(not isinstance(it, GridInterval) for it in out) and any(
        isinstance(it, GridInterval) for it in out
    ):
        idx = module.poset.id_of_coord()
        rehoused = []
        for it in out:
            if isinstance(it, GridInterval):
                try:
                    ids = tuple(sorted(idx[pt] for pt in it.points()))
                except KeyError:
                    raise CliError(
                        "collections mixing connected subsets with intervals must "
                        "stay inside the window"
                    )
                rehoused.append(subposet(module.poset, ids, kind="interval"))
            else:
                rehoused.append(it)
        out = rehoused
    return out


def _emit_table(table, fmt: str):
    if fmt == "tsv":
        print(table.to_tsv())
    else:
        print(f"# collection size {len(table.collection)}")
        for it, r in zip(table.collection, table.ranks):
            print(f"rank {format_members(it)} = {r}")


def cmd_gri(args) -> int:
    module = _load_module(args.module, args)
    collection = _collection(module, args.collection, args.cap)
    table = gri(module, collection, module_ref=os.path.basename(args.module),
                threads=args.threads)
    bad = table.check_monotone()
    if bad is not None:
        print(f"invariant violation: non-monotone table at {format_members(bad[0])} "
              f"vs {format_members(bad[1])}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit_table(table, args.format)
    return EXIT_OK


def cmd_gpd(args) -> int:
    module = _load_module(args.module, args)
    collection = _collection(module, args.collection, args.cap)
    table = gri(module, collection, threads=args.threads)
    diagram = gpd(table)
    if args.format == "dot":
        print(containment_dot(containment_poset(table.collection), diagram))
    elif args.format == "tsv":
        print(diagram.to_tsv())
    else:
        for it, v in diagram.support:
            print(f"multiplicity {format_members(it)} = {v:+d}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    module = _load_module(args.module, args)
    collection = _collection(module, args.collection, args.cap)
    diagram = gpd(gri(module, collection, threads=args.threads))
    plus, minus = minimal_rank_decomposition(diagram)
    for it, m in plus:
        print(f"R\t{format_members(it)}\t{m}")
    for it, m in minus:
        print(f"S\t{format_members(it)}\t{m}")
    return EXIT_OK


def cmd_invertible(args) -> int:
    module = _load_module(args.module, args)
    collection = _collection(module, args.collection, args.cap)
    table = gri(module, collection, threads=args.threads)
    if args.support:
        support = _read_collection_file(module, args.support)
    else:
        support = [it for it, r in zip(table.collection, table.ranks) if r > 0]
    report = verify_invertibility(table, support)
    if report.ok:
        print("invertible")
        for it, v in report.diagram.support:
            print(f"multiplicity {format_members(it)} = {v:+d}")
        return EXIT_OK
    print(f"fails at {format_members(report.witness)}")
    return EXIT_OK


def cmd_zib(args) -> int:
    module = _load_module(args.module, args)
    paths = _read_paths(args.paths)
    for path in paths:
        bc = zigzag_barcode(module, path)
        print(f"path {' '.join(f'{x},{y}' for x, y in path.points)}")
        for (i, j), m in bc.bars:
            print(f"{i}\t{j}\t{m}")
    return EXIT_OK


def _read_paths(path: str) -> list[ZigzagPath]:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    except OSError as e:
        raise CliError(f"cannot read path file: {e}")
    out = []
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if head[0] != "path":
            raise CliError(f"expected 'path <n>', got {lines[i]!r}")
        n = int(head[1])
        chunk = "\n".join(lines[i : i + n + 1])
        try:
            out.append(ZigzagPath.from_text(chunk))
        except ValueError as e:
            raise CliError(f"bad path: {e}")
        i += n + 1
    if not out:
        raise CliError("path file is empty")
    return out


def cmd_bounds(args) -> int:
    module = _load_module(args.module, args)
    paths = _read_paths(args.paths)
    cache = RankCache(module)
    for path in paths:
        m, ell = rank_bounds_from_gri(path, cache.rank)
        print(f"path {' '.join(f'{x},{y}' for x, y in path.points)}")
        print(f"rank_bounds\t{m}\t{ell}")
        n = len(path.points)
        for i in range(n):
            for j in range(i, n):
                lo, hi = multiplicity_bounds(path, (i, j), cache.rank)
                print(f"bar\t{i}\t{j}\t{lo}\t{hi}")
    return EXIT_OK


def cmd_erosion(args) -> int:
    m1 = _load_module(args.module, args)
    m2 = _load_module(args.other, args)
    budgets = []
    for spec in args.mn:
        try:
            mm, nn = (int(t) for t in spec.split(","))
        except ValueError:
            raise CliError(f"bad --mn value {spec!r}; expected M,N")
        budgets.append((mm, nn))
    # wall time is printed only on request, so default output is byte-reproducible
    head = "min_pts\tmax_pts\tcollection\tdistance\trank_queries"
    print(head + "\tseconds" if args.timing else head)
    for mm, nn in budgets:
        family = ThickeningFamily(mm, nn)
        collection = family.members_within(union_bbox(m1, m2))
        caches = (RankCache(m1), RankCache(m2))
        t0 = time.perf_counter()
        dist = erosion_distance(m1, m2, collection, caches=caches)
        dt = time.perf_counter() - t0
        row = (f"{mm}\t{nn}\t{len(collection)}\t{dist}\t"
               f"{caches[0].queries + caches[1].queries}")
        print(row + f"\t{dt:.4f}" if args.timing else row)
        if args.witness:
            for eps in range(int(dist)):
                w = verify_erosion(m1, m2, collection, eps, *caches)
                print(f"witness\teps={eps}\t{format_members(w)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    # a module file starts with its poset block, so parsing the poset works for both
    try:
        with open(args.module) as fh:
            poset = FinitePoset.from_text(fh.read())
    except OSError as e:
        raise CliError(f"cannot read poset file: {e}")
    except (ValueError, IndexError) as e:
        raise CliError(f"cannot parse poset: {e}")
    if args.what == "connected":
        items = enumerate_connected(poset)
        for it in items:
            print(" ".join(str(m) for m in it.members))
        return EXIT_OK
    mm = args.min_pts
    nn = args.max_pts
    if args.what == "segments":
        mm = nn = 1
    if poset.grid_coords is not None:
        for gi in enumerate_grid_intervals(poset, mm, nn, args.cap):
            print(format_members(gi))
    else:
        for it in enumerate_intervals(poset, mm, nn, args.cap):
            print(" ".join(str(m) for m in it.members))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in sorted(FIXTURES):
            print(name)
        return EXIT_OK
    kwargs = {"window": args.window} if args.window is not None else {}
    try:
        bundle = build_fixture(args.name, p=args.field, **kwargs)
    except KeyError as e:
        raise CliError(str(e))
    except (TypeError, ValueError) as e:
        raise CliError(f"cannot build fixture: {e}")
    if args.describe:
        print(f"{bundle.name}: {bundle.description}")
        return EXIT_OK
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        for mname, module in sorted(bundle.modules.items()):
            path = os.path.join(args.emit, f"{bundle.name}-{mname}.txt")
            with open(path, "w") as fh:
                fh.write(module.to_text() + "\n")
            print(f"wrote {path}")
        return EXIT_OK
    if args.action == "run":
        return _run_fixture(bundle, args)
    raise CliError(f"unknown fixtures action {args.action!r}")


def _run_fixture(bundle, args) -> int:
    print(f"fixture {bundle.name}")
    if bundle.name == "thm-tame-counterexample":
        module = bundle.modules["m"]
        for label, gi in sorted(bundle.intervals.items()):
            print(f"rank {label} = {generalized_rank(module, gi)}")
        from .fixtures import claim2_supersets

        import numpy as np

        rng = np.random.default_rng(7)
        samples = claim2_supersets(bundle, rng, count=8)
        for i, members in enumerate(samples):
            print(f"superset[{i}] rank = {generalized_rank(module, members)}")
        return EXIT_OK
    for mname, module in sorted(bundle.modules.items()):
        dims = " ".join(str(d) for d in module.dims)
        print(f"module {mname}: dims {dims}")
    for label, gi in sorted(bundle.intervals.items()):
        for mname, module in sorted(bundle.modules.items()):
            try:
                r = generalized_rank(module, gi)
            except ValueError:
                continue
            print(f"rank[{mname}] {label} = {r}")
    for label, path in sorted(bundle.paths.items()):
        for mname, module in sorted(bundle.modules.items()):
            bc = zigzag_barcode(module, path)
            bars = " ".join(f"[{i},{j}]x{m}" for (i, j), m in bc.bars)
            print(f"barcode[{mname}] {label}: {bars}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grinv", description=__doc__)
    ap.add_argument("--field", type=int, default=None,
                    help=f"prime field modulus (default: ${ENV_FIELD} or 2)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for rank tables")
    ap.add_argument("--cap", type=int, default=5_000_000,
                    help="enumeration guard: refuse collections larger than this")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("module", help="module file")
        sp.add_argument("--collection", default="intervals",
                        help="segments | intervals | connected | int:M,N | file:PATH")
        sp.add_argument("--format", choices=("tsv", "structured", "dot"), default="tsv")

    sp = sub.add_parser("gri", help="rank table over a collection")
    common(sp)
    sp.set_defaults(fn=cmd_gri)

    sp = sub.add_parser("gpd", help="signed diagram (Mobius inversion of the rank table)")
    common(sp)
    sp.set_defaults(fn=cmd_gpd)

    sp = sub.add_parser("decompose", help="minimal rank decomposition (R, S)")
    common(sp)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("invertible", help="check a table against a candidate support")
    common(sp)
    sp.add_argument("--support", default=None, help="collection file of candidate supports")
    sp.set_defaults(fn=cmd_invertible)

    sp = sub.add_parser("zib", help="barcodes of the module over given paths")
    sp.add_argument("module")
    sp.add_argument("--paths", required=True, help="path file")
    sp.set_defaults(fn=cmd_zib)

    sp = sub.add_parser("bounds", help="rank/multiplicity bounds for paths from interval ranks")
    sp.add_argument("module")
    sp.add_argument("--paths", required=True)
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("erosion", help="erosion distance between two modules")
    sp.add_argument("module")
    sp.add_argument("other")
    sp.add_argument("--mn", nargs="+", default=["2,2"],
                    help="one or more M,N interval budgets (timing table rows)")
    sp.add_argument("--witness", action="store_true",
                    help="print a witness interval for each infeasible radius")
    sp.add_argument("--timing", action="store_true",
                    help="append wall seconds to each row (non-reproducible column)")
    sp.set_defaults(fn=cmd_erosion)

    sp = sub.add_parser("enumerate", help="enumerate intervals/segments/connected subsets")
    sp.add_argument("module", help="module or poset file")
    sp.add_argument("--what", choices=("intervals", "segments", "connected"),
                    default="intervals")
    sp.add_argument("--min-pts", type=int, default=None)
    sp.add_argument("--max-pts", type=int, default=None)
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("fixtures", help="list or run built-in example modules")
    sp.add_argument("action", choices=("list", "run"))
    sp.add_argument("name", nargs="?", default=None)
    sp.add_argument("--window", type=int, default=None)
    sp.add_argument("--describe", action="store_true")
    sp.add_argument("--emit", default=None, metavar="DIR",
                    help="write the fixture's modules as files instead of running it")
    sp.set_defaults(fn=cmd_fixtures)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.field_explicit = args.field is not None or ENV_FIELD in os.environ
    if args.field is None:
        try:
            args.field = _default_field()
        except CliError as e:
            print(f"error: {e}", file=sys.stderr)
            return e.code
    if not is_prime(args.field):
        print(f"error: field modulus {args.field} is not prime", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "command", None) == "fixtures" and args.action == "run" and not args.name:
        print("error: fixtures run needs a name", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except EnumerationCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except AssertionError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
