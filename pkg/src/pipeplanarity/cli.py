"""Command-line entry point.

Exit codes: 0 = yes, 1 = no, 2 = budget or cap exceeded, 64 = usage error,
65 = parse/validation error.  Output is plain structured text (one fact per
line); no color is ever emitted.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .core import CapExceeded, InvalidInstance
from .formats import InstanceFile, canonicalize, parse, serialize
from .sefe import Budget, decide_sefe, verify_witness

EXIT_YES = 0
EXIT_NO = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64
EXIT_DATA = 65


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _budget(args) -> Budget:
    return Budget(max_nodes=args.max_nodes, max_ms=args.budget_ms)


def _emit(lines) -> None:
    for line in lines:
        print(line)


def _status_exit(status: str) -> int:
    return {"yes": EXIT_YES, "no": EXIT_NO, "budget_exceeded": EXIT_BUDGET}[status]


def cmd_check_strip(args) -> int:
    from .strip import decide_single_source

    inst = parse(_read_text(args.file))
    if inst.kind != "strip":
        raise InvalidInstance(f"check-strip needs a strip file, got {inst.kind}")
    answer = decide_single_source(inst.payload)
    _emit([f"answer {'yes' if answer else 'no'}"])
    return EXIT_YES if answer else EXIT_NO


def cmd_check_embedded(args) -> int:
    from .embedded_pipes import decide_embedded_pipes

    inst = parse(_read_text(args.file))
    if inst.kind != "embedded-pipes":
        raise InvalidInstance(f"check-embedded-pipes needs an embedded-pipes file, got {inst.kind}")
    verdict = decide_embedded_pipes(inst.payload, _budget(args))
    lines = [f"answer {verdict.status}",
             f"nodes {verdict.nodes}",
             f"elapsed-ms {verdict.elapsed_ms}",
             f"cases {verdict.case_report.verdict}"]
    for (mu, nu), case in verdict.case_report.per_pair:
        lines.append(f"case {mu} {nu} {case}")
    if verdict.crossing_orders:
        for (mu, nu), order in verdict.crossing_orders:
            lines.append(f"order {mu} {nu} " + " ".join(str(e) for e in order))
    _emit(lines)
    return _status_exit(verdict.status)


def cmd_check_pipes(args) -> int:
    from .pipes import decide_pipes

    inst = parse(_read_text(args.file))
    if inst.kind != "flat-cgraph":
        raise InvalidInstance(f"check-pipes needs a flat-cgraph file, got {inst.kind}")
    verdict = decide_pipes(inst.payload, _budget(args), component_cap=args.cap_k)
    lines = [f"answer {verdict.status}",
             f"nodes {verdict.nodes}",
             f"elapsed-ms {verdict.elapsed_ms}",
             f"parameter K {verdict.parameters.max_multi_edge_components}",
             f"parameter c {verdict.parameters.clusters_with_two_or_more}",
             f"icp-calls {verdict.icp_calls}"]
    if verdict.witness:
        for mu, order in verdict.witness.orders:
            lines.append(f"order {mu} " + " ".join(str(e) for e in order))
    _emit(lines)
    return _status_exit(verdict.status)


def cmd_check_icp(args) -> int:
    from .inclusion import decide_icp

    inst = parse(_read_text(args.file))
    if inst.kind != "icp":
        raise InvalidInstance(f"check-icp needs an icp file, got {inst.kind}")
    verdict = decide_icp(inst.payload, _budget(args))
    lines = [f"answer {verdict.status}",
             f"nodes {verdict.nodes}",
             f"elapsed-ms {verdict.elapsed_ms}"]
    if verdict.witness:
        for mu, order in verdict.witness.orders:
            lines.append(f"order {mu} " + " ".join(str(e) for e in order))
    _emit(lines)
    return _status_exit(verdict.status)


def cmd_sefe(args) -> int:
    inst = parse(_read_text(args.file))
    if inst.kind != "sefe":
        raise InvalidInstance(f"sefe needs a sefe file, got {inst.kind}")
    res = decide_sefe(inst.payload, _budget(args))
    lines = [f"answer {res.status}", f"nodes {res.nodes}", f"elapsed-ms {res.elapsed_ms}"]
    if res.witness:
        for v in inst.payload.vertices:
            r1 = " ".join(str(e) for e in res.witness.rotation1.at(v))
            r2 = " ".join(str(e) for e in res.witness.rotation2.at(v))
            lines.append(f"rotation1 {v} {r1}".rstrip())
            lines.append(f"rotation2 {v} {r2}".rstrip())
    _emit(lines)
    return _status_exit(res.status)


def cmd_gen(args) -> int:
    from . import generators

    if args.kind == "strip":
        payload = generators.generate_strip(args.seed, n=args.n, strips=args.strips,
                                            single_source=args.single_source)
        out = InstanceFile("strip", payload)
    elif args.kind == "flat-cgraph":
        payload = generators.generate_flat_cgraph(args.seed, n=args.n,
                                                  clusters=args.clusters,
                                                  max_multi=args.max_multi)
        out = InstanceFile("flat-cgraph", payload)
    elif args.kind == "embedded-pipes":
        payload = generators.generate_embedded_pipes(args.seed, n=args.n,
                                                     clusters=args.clusters,
                                                     max_multi=args.max_multi)
        out = InstanceFile("embedded-pipes", payload)
    elif args.kind == "sefe":
        payload = generators.generate_sefe(args.seed, n=args.n,
                                           common_forest=not args.allow_common_cycles)
        out = InstanceFile("sefe", payload)
    elif args.kind == "icp":
        payload = generators.generate_icp(args.seed, n=args.n, clusters=args.clusters)
        out = InstanceFile("icp", payload)
    else:
        raise InvalidInstance(f"unknown kind {args.kind!r}")
    sys.stdout.write(serialize(out))
    return EXIT_YES


def cmd_oracle(args) -> int:
    from .oracles import oracle_cplanarity_pipes, oracle_sefe
    from .strip import to_flat_clustered

    inst = parse(_read_text(args.file))
    if inst.kind == "sefe":
        answer = oracle_sefe(inst.payload)
    elif inst.kind == "flat-cgraph":
        answer = oracle_cplanarity_pipes(inst.payload)
    elif inst.kind == "strip":
        answer = oracle_cplanarity_pipes(to_flat_clustered(inst.payload))
    else:
        raise InvalidInstance(f"no oracle for {inst.kind} files")
    _emit([f"answer {'yes' if answer else 'no'}"])
    return EXIT_YES if answer else EXIT_NO


def cmd_canon(args) -> int:
    sys.stdout.write(canonicalize(_read_text(args.file)))
    return EXIT_YES


def _parse_witness(text: str):
    rot1, rot2, orders = {}, {}, {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "witness":
            continue
        if parts[0] in ("rotation1", "rotation2"):
            v = int(parts[1])
            target = rot1 if parts[0] == "rotation1" else rot2
            target[v] = tuple(int(x) for x in parts[2:])
        elif parts[0] == "order":
            if len(parts) >= 4 and all(p.lstrip("-").isdigit() for p in parts[1:]):
                # embedded-pipes orders carry two cluster ids
                pass
            orders[int(parts[1])] = tuple(int(x) for x in parts[2:])
        else:
            raise InvalidInstance(f"witness line {i}: unknown row {parts[0]!r}")
    return rot1, rot2, orders


def cmd_verify(args) -> int:
    from .core import RotationSystem

    inst = parse(_read_text(args.file))
    rot1, rot2, orders = _parse_witness(_read_text(args.witness))
    if inst.kind == "sefe":
        if not rot1 or not rot2:
            raise InvalidInstance("sefe witness needs rotation1 and rotation2 rows")
        from .sefe import SefeWitness

        payload = inst.payload
        for v in payload.vertices:
            rot1.setdefault(v, ())
            rot2.setdefault(v, ())
        w = SefeWitness(RotationSystem.build(rot1), RotationSystem.build(rot2))
        try:
            ok = verify_witness(payload, w)
        except InvalidInstance as exc:
            print(f"violation {exc}")
            return EXIT_NO
        print("verified" if ok else "violation common rotations differ or a rotation is nonplanar")
        return EXIT_YES if ok else EXIT_NO
    if inst.kind == "icp":
        from .core import classify_components
        from .inclusion import ClusterOrderWitness, is_consistent

        payload = inst.payload
        cg = payload.clustered
        infos = classify_components(cg)
        for mu in cg.clusters:
            if mu not in orders:
                print(f"violation missing order for cluster {mu}")
                return EXIT_NO
            multi = frozenset(e for i in infos
                              if i.cluster == mu and i.multi_edge for e in i.inter_edges)
            try:
                ok = is_consistent(orders[mu], payload.component_tree(mu),
                                   payload.neighbor_tree(mu), multi)
            except InvalidInstance as exc:
                print(f"violation {exc}")
                return EXIT_NO
            if not ok:
                print(f"violation order of cluster {mu} breaks a subtree's consecutiveness")
                return EXIT_NO
        print("verified")
        return EXIT_YES
    if inst.kind == "flat-cgraph":
        from .inclusion import ClusterOrderWitness
        from .pipes import witness_is_pipe_consistent

        payload = inst.payload
        w = ClusterOrderWitness(tuple(sorted(orders.items())))
        if witness_is_pipe_consistent(payload, w):
            print("verified")
            return EXIT_YES
        print("violation some neighbor's edges are not consecutive")
        return EXIT_NO
    raise InvalidInstance(f"no witness verifier for {inst.kind} files")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pipeplanarity",
                                  description="clustered planarity with pipes toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, with_budget=True):
        p.add_argument("file", help="instance file, or - for standard input")
        if with_budget:
            p.add_argument("--budget-ms", type=int, default=None)
            p.add_argument("--max-nodes", type=int, default=2_000_000)
            p.add_argument("--cap-k", type=int, default=8)

    p = sub.add_parser("check-strip", help="decide single-source strip planarity")
    add_common(p)
    p.set_defaults(func=cmd_check_strip)

    p = sub.add_parser("check-embedded-pipes", help="decide with a fixed pipe order")
    add_common(p)
    p.set_defaults(func=cmd_check_embedded)

    p = sub.add_parser("check-pipes", help="decide clustered planarity with pipes")
    add_common(p)
    p.set_defaults(func=cmd_check_pipes)

    p = sub.add_parser("check-icp", help="decide inclusion-constrained clustered planarity")
    add_common(p)
    p.set_defaults(func=cmd_check_icp)

    p = sub.add_parser("sefe", help="decide simultaneous embedding with fixed edges")
    add_common(p)
    p.set_defaults(func=cmd_sefe)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", required=True,
                   choices=("strip", "flat-cgraph", "embedded-pipes", "sefe", "icp"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--strips", type=int, default=3)
    p.add_argument("--max-multi", type=int, default=None)
    p.add_argument("--single-source", action="store_true", default=True)
    p.add_argument("--allow-common-cycles", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="run the brute-force oracle on an instance")
    add_common(p, with_budget=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("canon", help="canonicalize an instance file")
    add_common(p, with_budget=False)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("verify", help="verify a witness against an instance")
    p.add_argument("file")
    p.add_argument("witness")
    p.set_defaults(func=cmd_verify)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap-exceeded {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
