"""Command-line entry point.

    indexmap check cocycle --cases 500 --seed 7
    indexmap lattice sup "1, 0; 0, t" "t, 0; 0, 1"
    indexmap index group "t, 0; 0, 1" "1, t; 0, 1"
    indexmap poset gen B 3
    indexmap diagram preindex diagram.txt
    indexmap appendix lemma-pre --cat c2 --degree 4
    indexmap generate chain --seed 3
"""
from __future__ import annotations

import argparse
import json
import sys

from . import simplicial as simp
from .diagram import (
    LatticeDiagram,
    contraction_instance,
    extend_to_glued,
    idx_via_splitting,
    parse_diagram,
    phi_t,
    pre_index,
    rigidity_check,
    section,
)
from .errors import ConditionViolated, IndexMapError, TreeNotCollapsible
from .lattice import (
    Lattice,
    compare,
    index_of_automorphism,
    inf,
    quotient,
    rel_index,
    standard_lattice,
    sup,
)
from .linalg import Matrix
from .poset import BasedPoset, a_poset, admissible_trees, b_poset, chain, parse_poset, random_based_poset, star_edges, t_poset
from .schain import GroupTuple, LatticeChain, LatticeTuple, index_of_chain, index_of_tuple, l_map
from .suites import GENERATORS, SUITES, RunConfig, case_rng, generate, run_suite


def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=None, help="residue characteristic (default 2; some suites sweep)")
    p.add_argument("--ring", choices=["series", "padic"], default="series")
    p.add_argument("--prec", type=int, default=24, help="working precision in digits")
    p.add_argument("--n", type=int, default=None, help="ambient rank")
    p.add_argument("--bound", type=int, default=3, help="exponent bound for random instances")
    p.add_argument("--cases", type=int, default=None, help="case count (suite default when omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=4, help="truncation degree for appendix checks")
    p.add_argument("--json", metavar="PATH", default=None, help="also write a JSON report to PATH ('-' for stdout)")


def _config(args) -> RunConfig:
    return RunConfig(args.p, args.ring, args.prec, args.n, args.bound, args.cases, args.seed, args.degree)


def _emit(args, text: str, payload: dict):
    if args.json == "-":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    print(text)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indexmap", description="Lattice index computations over F_p((t)) and Q_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    _common(p)

    p = sub.add_parser("lattice", help="operations on lattices given by basis matrices")
    p.add_argument("op", choices=["leq", "sup", "inf", "quotient", "relindex"])
    p.add_argument("bases", nargs=2, metavar="MATRIX")
    _common(p)

    p = sub.add_parser("index", help="index of lattice chains, tuples and automorphisms")
    p.add_argument("kind", choices=["chain", "tuple", "group"])
    p.add_argument("matrices", nargs="+", metavar="MATRIX")
    _common(p)

    p = sub.add_parser("poset", help="poset generators")
    p.add_argument("action", choices=["gen"])
    p.add_argument("shape", choices=["B", "A", "T", "chain", "random"])
    p.add_argument("size", type=int)
    _common(p)

    p = sub.add_parser("diagram", help="invariants of a diagram file ('-' reads stdin)")
    p.add_argument("op", choices=["preindex", "split", "rigidity", "lemma327"])
    p.add_argument("file")
    p.add_argument("--tree", default=None, help="edges like '0<2,1<2,2<3' (split only)")
    _common(p)

    p = sub.add_parser("appendix", help="level-wise checks on finite categories")
    p.add_argument("check", choices=["lemma-pre", "tpling-rezk", "segal", "coskeletal"])
    p.add_argument("--cat", default="ordinal1", choices=sorted(simp.PRESETS))
    p.add_argument("--k", type=int, default=2, help="coskeletal degree to test")
    _common(p)

    p = sub.add_parser("generate", help="print a reproducible random instance")
    p.add_argument("kind", choices=list(GENERATORS))
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    report = run_suite(args.suite, _config(args))
    _emit(args, report.to_text(), report.to_json())
    return 0 if report.ok else 1


def cmd_lattice(args) -> int:
    ring = _config(args).ring_config()
    L0, L1 = (Lattice(Matrix.parse(ring, b)) for b in args.bases)
    payload = {"op": args.op}
    if args.op == "leq":
        rel = compare(L0, L1)
        payload["relation"] = rel.value
        text = rel.value
    elif args.op in ("sup", "inf"):
        L = sup(L0, L1) if args.op == "sup" else inf(L0, L1)
        payload.update(L.to_json())
        text = L.basis.to_text()
    elif args.op == "quotient":
        M = quotient(L0, L1)
        payload.update({"exponents": list(M.exponents), "length": M.length})
        text = M.to_text()
    else:
        payload["rel_index"] = rel_index(L0, L1)
        text = str(payload["rel_index"])
    _emit(args, text, payload)
    return 0


def cmd_index(args) -> int:
    ring = _config(args).ring_config()
    mats = [Matrix.parse(ring, m) for m in args.matrices]
    if args.kind == "group":
        gs = GroupTuple(mats)
        L = standard_lattice(ring, mats[0].nrows)
        comps = index_of_tuple(l_map(gs, L))
        per = [index_of_automorphism(g) for g in mats]
        payload = {"index": per, "tuple_index": list(comps), "product_index": index_of_automorphism(gs.product())}
        text = f"Index per element: {per}\nindex of (L, g1 L, ...): {list(comps)}\nIndex of product: {payload['product_index']}"
    elif args.kind == "tuple":
        comps = index_of_tuple(LatticeTuple([Lattice(M) for M in mats]))
        payload, text = {"index": list(comps)}, str(list(comps))
    else:
        X = index_of_chain(LatticeChain([Lattice(M) for M in mats]))
        inv = {f"{i},{j}": list(e) for (i, j), e in X.invariants().items()}
        payload = {"class_vector": list(X.class_vector()), "subquotients": inv}
        text = f"class vector: {list(X.class_vector())}\n" + "\n".join(f"X{j}/X{i}: {e}" for (i, j), e in X.invariants().items())
    _emit(args, text, payload)
    return 0


def cmd_poset(args) -> int:
    k = args.size
    if args.shape == "B":
        P = b_poset(k)
    elif args.shape == "A":
        P = a_poset(k)
    elif args.shape == "T":
        P = t_poset(k)
    elif args.shape == "chain":
        P = BasedPoset(chain(k), [0])
    else:
        P = random_based_poset(case_rng(args.seed, "poset", 0), k, max(1, min(2, k - 1)))
    text = P.to_text()
    _emit(args, text, {"poset": text})
    return 0


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _parse_tree(F, text):
    elems = F.poset.elements
    edges = []
    for tok in text.split(","):
        a, b = tok.strip().split("<")
        edges.append((elems[int(a)], elems[int(b)]))
    return edges


def cmd_diagram(args) -> int:
    ring = _config(args).ring_config()
    text = _read(args.file)
    if args.op == "lemma327":
        head = "\n".join(ln for ln in text.splitlines() if ln.split(" ", 1)[0] not in ("lattice", "module", "map", "quotient:"))
        S = parse_poset(head, require_minimal=False)
        inst = contraction_instance(S)
        try:
            s = section(inst)
        except ConditionViolated as exc:
            _emit(args, str(exc), {"ok": False, "condition": exc.condition, "reason": str(exc)})
            return 1
        pos = S.poset.index
        mapping = {str(k): pos(v) for k, v in s.items()}
        _emit(args, f"conditions (a)-(d) hold; section {mapping}", {"ok": True, "section": mapping})
        return 0
    F = parse_diagram(text, ring)
    if isinstance(F, LatticeDiagram):
        F = F.to_torsion(inf(*F.lattices.values()))
    if args.op == "preindex":
        v = list(pre_index(F))
        _emit(args, str(v), {"pre_index": v})
        return 0
    pos = F.poset.index
    if args.op == "split":
        trees = [_parse_tree(F, args.tree)] if args.tree else list(admissible_trees(F.poset)) or [star_edges(F.poset)]
        rows, payload = [], {"pre_index": list(pre_index(F)), "trees": []}
        for tree in trees:
            split = phi_t(F, tree)
            edges = {f"{pos(a)}<{pos(b)}": c for (a, b), c in split.edges.items()}
            try:
                value = list(idx_via_splitting(F, tree))
            except TreeNotCollapsible:
                value = None
            payload["trees"].append({"base": split.base, "edges": edges, "index": value})
            rows.append(f"class of F(x_0) {split.base}, edges {edges} -> {value if value is not None else 'not collapsible'}")
        _emit(args, "\n".join(rows), payload)
        return 0
    # rigidity needs lattices to extend
    if F.origin is None:
        raise ValueError("rigidity needs a diagram given by lattice lines")
    lattices, base = F.origin
    G1, inc1, F1, ext1 = extend_to_glued(F.based, lattices, base, spread="all")
    G2, inc2, F2, _ = extend_to_glued(G1, ext1, base)
    ok = rigidity_check(F, inc1, F1) and rigidity_check(F, inc1.then(inc2), F2)
    payload = {"ok": ok, "pre_index": list(pre_index(F)), "glued_sizes": [len(G1), len(G2)]}
    _emit(args, f"pre-index {list(pre_index(F))} unchanged on I^B and (I^B)^B: {ok}", payload)
    return 0 if ok else 1


def cmd_appendix(args) -> int:
    C = simp.preset(args.cat)
    D = args.degree
    if args.check == "lemma-pre":
        rep = simp.lemma_pre_check(C, D)
        ok = rep["ok"]
        payload = {"ok": ok, "nerve": _levels(rep["nerve"]), "core": _levels(rep["core"])}
    elif args.check == "tpling-rezk":
        rep = simp.tpling_rezk_check(C, D)
        ok = rep["ok"]
        payload = {"ok": ok, "levels": _levels(rep)}
    elif args.check == "segal":
        rep = simp.segal_check(simp.nerve(C, D))
        ok = rep["ok"]
        payload = {"ok": ok, "reduced": rep["reduced"], "levels": {str(k): v for k, v in rep["levels"].items()}}
    else:
        ok = simp.coskeletal_check(simp.nerve(C, D), args.k)
        payload = {"ok": ok, "k": args.k}
    _emit(args, f"{args.check} on {C.name} to degree {D}: {'holds' if ok else 'fails'}", payload)
    return 0 if ok else 1


def _levels(rep):
    return {str(k): v for k, v in rep["levels"].items()}


def cmd_generate(args) -> int:
    text = generate(args.kind, _config(args))
    _emit(args, text, {"kind": args.kind, "instance": text})
    return 0


COMMANDS = {
    "check": cmd_check,
    "lattice": cmd_lattice,
    "index": cmd_index,
    "poset": cmd_poset,
    "diagram": cmd_diagram,
    "appendix": cmd_appendix,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (IndexMapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
