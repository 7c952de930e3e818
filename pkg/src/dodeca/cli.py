"""Command line: ``python -m dodeca <command>`` or ``dodeca <command>``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import fixtures, pipeline
from .cosets import PermutationAction, ResourceLimit, SubgroupRecord, action_from_table, regular_table
from .cubecomplex import cubulate, npc_report
from .dodecomplex import FixtureError, cover_complex
from .fpgroup import WordError
from .homology import AbelianGroup

log = logging.getLogger("dodeca")

OK, MISMATCH, INVALID, LIMIT = 0, 1, 2, 3


class InvalidInput(ValueError):
    pass


def _emit(args, obj, rows=None):
    """Print JSON (or CSV rows when asked and available)."""
    if args.format == "csv" and rows:
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    else:
        print(json.dumps(obj, indent=1, default=str))


def _progress(label):
    def cb(i, n):
        if i == n or i % max(1, n // 20) == 0:
            log.info("%s %d/%d", label, i, n)
    return cb


def _load_action(path: str) -> tuple[str, PermutationAction]:
    """Cover file: {"space", "degree", "action"}, or a fixture name like ``fixture:cover_c``."""
    if path.startswith("fixture:"):
        name = path.split(":", 1)[1]
        try:
            return "WS", fixtures.source_action(name)
        except (FixtureError, FileNotFoundError) as exc:
            raise InvalidInput(str(exc)) from exc
    try:
        d = json.loads(Path(path).read_text())
        space = d["space"].upper()
        a = PermutationAction.from_json(d["action"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"cannot read cover file {path}: {exc}") from exc
    if space not in ("WS", "PHS", "RP3"):
        raise InvalidInput(f"unknown space {space}")
    if d.get("degree", a.degree) != a.degree:
        raise InvalidInput("degree field disagrees with the action")
    if any(sorted(p) != list(range(a.degree)) for p in a.perms):
        raise InvalidInput("action entries are not permutations")
    if not a.satisfies(pipeline.presentation(space)):
        raise InvalidInput("action does not satisfy the relators")
    if not a.is_transitive():
        raise InvalidInput("action is not transitive")
    return space, a


def _load_census(args) -> list:
    """Analyzed census of WS covers up to degree 9, from ``--classes DIR`` or recomputed."""
    recs = None
    if getattr(args, "classes", None):
        recs = []
        for f in sorted(Path(args.classes).glob("*.json")):
            d = json.loads(f.read_text())
            recs.append(SubgroupRecord.from_json(d))
    else:
        recs = pipeline.enumerate_covers("WS", 9, args.jobs, _progress("enumerate"))
    return [pipeline.analyze_action("WS", r.action(), "enumerated", special=False) for r in recs]


# --------------------------------------------------------------------------- commands


def cmd_presentations(args):
    res = pipeline.presentations_check()
    _emit(args, res)
    return OK if all(v["equivalent"] for v in res.values()) else MISMATCH


def cmd_enumerate(args):
    space = args.space.upper()
    if space == "PHS" and args.lattice:
        classes = pipeline.finite_subgroup_classes(pipeline.presentation("PHS"))
        tables = [c.table for c in classes]
    else:
        tables = [r.table for r in pipeline.enumerate_covers(space, args.max_index, args.jobs,
                                                             _progress("enumerate"))]
    out = Path(args.out or f"covers_{space.lower()}")
    out.mkdir(parents=True, exist_ok=True)
    counts: dict = {}
    for t in tables:
        k = t.index
        counts[k] = counts.get(k, 0) + 1
        a = action_from_table(t)
        d = {"space": space.lower(), "degree": k, "action": a.to_json(), "provenance": "enumerated"}
        (out / f"{space.lower()}_{k:03d}_{counts[k]:04d}.json").write_text(json.dumps(d))
    _emit(args, {"space": space, "directory": str(out), "files": len(tables),
                 "per_degree": {str(k): v for k, v in sorted(counts.items())}})
    return OK


def cmd_analyze(args):
    space, a = _load_action(args.cover)
    _emit(args, pipeline.full_report(space, a, npc=args.npc))
    return OK


def cmd_homology(args):
    space, a = _load_action(args.cover)
    h = pipeline.homology_of(space, a)
    _emit(args, {"degree": a.degree, "homology": str(h), "betti": h.betti})
    return OK


def cmd_cubulate(args):
    space, a = _load_action(args.cover)
    c = cubulate(cover_complex(space, a))
    out = {"cube_f_vector": list(c.f_vector())}
    if args.npc:
        r = npc_report(c)
        out["npc"] = {"npc": r.npc, "min_edge_degree": r.min_edge_degree, "flag": r.flag,
                      "simplicial": r.simplicial, "closed": r.closed}
    if args.out:
        c.dump(args.out)
    _emit(args, out)
    return OK


def cmd_surfaces(args):
    space, a = _load_action(args.cover)
    rep = pipeline.full_report(space, a)
    _emit(args, {"components": rep["components"], "crossing_pairs": rep["crossing_pairs"]}, rep["components"])
    return OK


def cmd_special(args):
    space, a = _load_action(args.cover)
    rep = pipeline.full_report(space, a)
    keys = ("special", "lemma_agrees", "inter_osculating", "crossing_chromatic_number")
    _emit(args, {k: rep[k] for k in keys} | {"self_osculating": [c["id"] for c in rep["components"]
                                                                 if c["self_osculating"]]})
    return OK


def cmd_core(args):
    space, a = _load_action(args.cover)
    summ = pipeline.image_summary(a)
    out = {"core_index": summ.order, "image": summ.label(), "perfect": summ.perfect}
    if args.build:
        ra = action_from_table(regular_table(a))
        out["cover"] = {"space": space.lower(), "degree": ra.degree, "action": ra.to_json()}
        if args.out:
            pipeline.write_json(Path(args.out), out["cover"])
            del out["cover"]
            out["written"] = args.out
    _emit(args, out)
    return OK


def cmd_double_covers(args):
    space, a = _load_action(args.cover)
    fam = pipeline.double_family(space, a)
    rows = []
    for lam, fpf, n in zip(fam.lam, fam.fpf, fam.components):
        if args.fixed_point_free and not fpf:
            continue
        r = {"index": int(lam), "fixed_point_free": bool(fpf), "components": int(n)}
        if args.analyze:
            r["homology"] = str(pipeline.homology_of(space, fam.lift(int(lam))))
        rows.append(r)
    _emit(args, {"doubles": len(fam.lam), "fixed_point_free": int(fam.fpf.sum()), "covers": rows}, rows)
    return OK


def cmd_reproduce(args):
    which = args.table
    if which == "table1":
        ds = pipeline.table1(jobs=args.jobs)
    elif which == "table2":
        ds = pipeline.table2()
    elif which == "table3":
        ds = pipeline.table3(pipeline.tower(progress=_progress("tower")))
    else:
        ds = pipeline.table4()
    _emit(args, ds.to_json(), ds.rows)
    if args.out:
        pipeline.write_json(Path(args.out) / f"{which}.json", ds.to_json())
    for d in ds.diff:
        log.error("mismatch: %s", d)
    return OK if ds.ok else MISMATCH


def cmd_verify_appendix(args):
    res = pipeline.verify_appendix()
    _emit(args, res)
    return OK if res["ok"] else MISMATCH


def cmd_search_cores(args):
    covers = _load_census(args)
    res = pipeline.search_cores(covers, homology=args.slow, progress=_progress("cores"))
    expected = [168, 504, 1344, 2520, 20160, 181440]
    res["indices_match"] = res["core_indices"] == expected
    _emit(args, res)
    return OK if res["indices_match"] else MISMATCH


def cmd_search_towers(args):
    res = pipeline.tower(progress=_progress("tower"))
    out = {"doubles": res.doubles, "doubles_fpf": res.doubles_fpf, "second": res.second,
           "second_fpf": res.second_fpf,
           "distribution": {str(k): v for k, v in sorted(res.distribution.items())},
           "twentyfour_component_covers": len(res.special_candidates)}
    ok = res.e_action is not None
    if ok:
        words = fixtures.source_words("E")
        out["e_words_trace"] = pipeline.base_point_containing(res.e_action, words) is not None
        n, nf, dist = pipeline.e_doubles(res.e_action)
        out["e_doubles"] = n
        out["e_doubles_fpf"] = nf
        out["e_distribution"] = {str(k): v for k, v in sorted(dist.items())}
        ok = out["e_words_trace"]
    _emit(args, out)
    return OK if ok else MISMATCH


COMMANDS = {
    "presentations": cmd_presentations, "enumerate": cmd_enumerate, "analyze": cmd_analyze,
    "homology": cmd_homology, "cubulate": cmd_cubulate, "surfaces": cmd_surfaces, "special": cmd_special,
    "core": cmd_core, "double-covers": cmd_double_covers, "reproduce": cmd_reproduce,
    "verify-appendix": cmd_verify_appendix, "search-cores": cmd_search_cores,
    "search-towers": cmd_search_towers,
}


def build_parser() -> argparse.ArgumentParser:
    def shared(suppress):
        # subcommands must not overwrite options given before the command name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        q = argparse.ArgumentParser(add_help=False)
        q.add_argument("--jobs", type=int, default=d(1), help="worker processes")
        q.add_argument("--slow", action="store_true", default=d(False), help="include the expensive parts")
        q.add_argument("--out", default=d(None), help="output directory or file")
        q.add_argument("--format", choices=("json", "csv"), default=d("json"))
        q.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return q

    p = argparse.ArgumentParser(prog="dodeca", description=__doc__.splitlines()[0], parents=[shared(False)])
    common = shared(True)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("presentations", parents=[common])
    e = sub.add_parser("enumerate", parents=[common])
    e.add_argument("space", type=str.upper, choices=("WS", "PHS", "RP3"))
    e.add_argument("max_index", type=int, nargs="?", default=9)
    e.add_argument("--lattice", action="store_true", help="all subgroups of the finite PHS group")
    for name in ("analyze", "homology", "cubulate", "surfaces", "special", "core", "double-covers"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("cover", help="cover JSON file, or fixture:cover_c / fixture:appendix")
        if name in ("analyze", "cubulate"):
            q.add_argument("--npc", action="store_true")
        if name == "core":
            q.add_argument("--build", action="store_true")
        if name == "double-covers":
            q.add_argument("--fixed-point-free", action="store_true")
            q.add_argument("--analyze", action="store_true")
    r = sub.add_parser("reproduce", parents=[common])
    r.add_argument("table", choices=("table1", "table2", "table3", "table4"))
    sub.add_parser("verify-appendix", parents=[common])
    c = sub.add_parser("search-cores", parents=[common])
    c.add_argument("--classes", help="directory written by 'enumerate ws 9'")
    sub.add_parser("search-towers", parents=[common])
    return p


def main(argv=None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.jobs < 1:
        log.error("--jobs must be positive")
        return INVALID
    try:
        return COMMANDS[args.command](args)
    except (InvalidInput, WordError, FixtureError) as exc:
        log.error("%s", exc)
        return INVALID
    except ResourceLimit as exc:
        log.error("resource limit: %s", exc)
        return LIMIT


if __name__ == "__main__":
    sys.exit(main())
