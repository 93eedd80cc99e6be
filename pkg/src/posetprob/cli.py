"""Command-line front end.

Commands: classify | check | decide | couple | counterexample | enlarge |
sweep.  Text output is the default; ``--format json`` mirrors the same
fields.  Randomized commands take ``--seed`` and identical seeds produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import catalog
from .coupling import (
    DEFAULT_CANDIDATE_CAP,
    monotone_elements,
    realize,
    realize_acyclic,
    realize_class_z,
    realize_enlargeable,
)
from .decide import FAILS, HOLDS, UNKNOWN, decide_equivalence, decide_markov
from .measure import Measure, MeasureSystem, monotonicity_violation
from .poset import OrderError, Poset, find_induced_pattern
from .structure import NotEnlargeable, check_enlargeable, classify, enlarge_to_acyclic
from .textio import (
    ParseError,
    Workspace,
    dump_system,
    format_certificate,
    format_coupling,
    format_poset,
)
from .witness import Counterexample

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3


def _read_files(paths) -> Workspace:
    texts = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            texts.append(fh.read())
    return Workspace().load(*texts)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _write(path: str, content: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(content)


def cmd_classify(args) -> int:
    ws = _read_files(args.files)
    name, poset = ws.poset_named_or_first(args.poset)
    lines = []
    payload = {"poset": name, "components": []}
    for comp in poset.components():
        label = classify(comp)
        lines.append(f"{name}[{' '.join(comp.elements)}]: {label.describe()}")
        payload["components"].append(
            {"elements": list(comp.elements), "class": label.label, "evidence": label.describe()}
        )
    if args.dot:
        arcs = "\n".join(f'  "{x}" -> "{y}";' for x, y in poset.covers())
        _write(args.dot, f"digraph {name} {{\n{arcs}\n}}\n")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    ws = _read_files(args.files)
    sys_ = ws.first_system()
    index_name = ws.name_of_poset(sys_.index)
    target_name = ws.name_of_poset(sys_.target)
    if args.mode == "stochastic":
        violation = monotonicity_violation(sys_)
        if violation is None:
            _emit(args, {"mode": "stochastic", "ok": True}, "ok: stochastically monotone\n")
            return EXIT_OK
        a, b, up = violation
        text = f"violated: {a} < {b} on up-set {{{' '.join(sorted(up))}}}\n"
        payload = {"mode": "stochastic", "ok": False, "pair": [a, b], "up_set": sorted(up)}
        _emit(args, payload, text)
        return EXIT_VIOLATED
    result = realize(sys_, args.max_delta)
    if result.feasible:
        body = format_coupling(index_name, target_name, result.coupling)
        if args.out:
            _write(args.out, body)
        _emit(args, {"mode": "realizable", "ok": True, "coupling": body}, "ok: coupling found\n" + body)
        return EXIT_OK
    body = format_certificate(index_name, target_name, result.certificate)
    if args.out:
        _write(args.out, body)
    _emit(
        args,
        {"mode": "realizable", "ok": False, "certificate": body},
        "violated: no coupling exists\n" + body,
    )
    return EXIT_VIOLATED


def _verdict_payload(v) -> dict:
    return {
        "outcome": v.outcome,
        "reason": v.reason,
        "coupler": v.coupler,
        "witness": v.witness.provenance if v.witness else None,
    }


def _emit_witness(args, ws: Workspace, witness: Counterexample) -> str:
    index_name = ws.name_of_poset(witness.system.index)
    target_name = ws.name_of_poset(witness.system.target)
    body = dump_system((index_name, target_name), "witness", witness.system)
    body += "\n" + format_certificate(index_name, target_name, witness.certificate)
    if args.out:
        _write(args.out, body)
    return body


def cmd_decide(args) -> int:
    ws = _read_files([args.index_file, args.target_file])
    a_name, a = ws.poset_named_or_first(args.index_poset)
    ws2 = _read_files([args.target_file])
    s_name, s = ws2.poset_named_or_first(args.target_poset)
    verdict = decide_equivalence(a, s)
    lines = [f"{verdict.outcome}: ({a_name}, {s_name}) [{verdict.reason}]"]
    if verdict.coupler:
        lines.append(f"coupler: {verdict.coupler}")
    payload = _verdict_payload(verdict)
    if verdict.witness is not None:
        lines.append(_emit_witness(args, ws, verdict.witness))
    _emit(args, payload, "\n".join(lines) + "\n")
    if verdict.outcome == HOLDS:
        return EXIT_OK
    if verdict.outcome == FAILS:
        return EXIT_VIOLATED
    return EXIT_UNKNOWN


def cmd_couple(args) -> int:
    ws = _read_files(args.files)
    sys_ = ws.first_system()
    index_name = ws.name_of_poset(sys_.index)
    target_name = ws.name_of_poset(sys_.target)
    cap = args.max_delta

    strategies = (
        ["acyclic", "class-z", "enlargeable", "lp"] if args.strategy == "auto" else [args.strategy]
    )
    last_error = None
    for strategy in strategies:
        try:
            if strategy == "lp":
                result = realize(sys_, cap)
                if not result.feasible:
                    body = format_certificate(index_name, target_name, result.certificate)
                    if args.out:
                        _write(args.out, body)
                    _emit(args, {"ok": False, "certificate": body}, "infeasible\n" + body)
                    return EXIT_VIOLATED
                coupling = result.coupling
            elif strategy == "acyclic":
                coupling = realize_acyclic(sys_, cap)
            elif strategy == "class-z":
                coupling = realize_class_z(sys_, cap)
            else:
                coupling = realize_enlargeable(sys_, cap)
            body = format_coupling(index_name, target_name, coupling)
            if args.out:
                _write(args.out, body)
            _emit(
                args,
                {"ok": True, "strategy": strategy, "coupling": body},
                f"strategy: {strategy}\n" + body,
            )
            return EXIT_OK
        except OrderError as exc:
            last_error = exc
            if args.strategy != "auto":
                raise
    raise last_error  # auto exhausted every strategy


def cmd_counterexample(args) -> int:
    ws = _read_files([args.index_file])
    a_name, a = ws.poset_named_or_first(args.index_poset)
    ws2 = _read_files([args.target_file])
    s_name, s = ws2.poset_named_or_first(args.target_poset)
    verdict = decide_equivalence(a, s)
    if verdict.outcome != FAILS:
        print(f"pair ({a_name}, {s_name}) does not fail: {verdict.outcome}", file=sys.stderr)
        return EXIT_ERROR
    assert verdict.witness is not None
    body = _emit_witness(args, ws, verdict.witness)
    _emit(
        args,
        {"provenance": verdict.witness.provenance, "witness": body},
        f"provenance: {verdict.witness.provenance}\n{body}",
    )
    return EXIT_OK


def cmd_enlarge(args) -> int:
    ws = _read_files(args.files)
    name, poset = ws.poset_named_or_first(args.poset)
    if not poset.is_connected():
        print("poset is not connected", file=sys.stderr)
        return EXIT_ERROR
    try:
        bigger = enlarge_to_acyclic(poset)
    except NotEnlargeable as exc:
        text = f"obstruction: {exc.obstruction}\n"
        _emit(args, {"ok": False, "obstruction": str(exc.obstruction)}, text)
        return EXIT_VIOLATED
    body = format_poset(f"{name}_acyclic", bigger)
    if args.out:
        _write(args.out, body)
    _emit(args, {"ok": True, "poset": body}, body)
    return EXIT_OK


def _random_monotone_system(rng: random.Random, index: Poset, target: Poset, atoms: int, cap: int) -> MeasureSystem:
    delta = monotone_elements(index, target, cap)
    k = min(atoms, len(delta.elements))
    picks = sorted(rng.sample(range(len(delta.elements)), k))
    weights = [rng.randint(1, 9) for _ in picks]
    total = sum(weights)
    assign: dict[str, dict[str, Fraction]] = {a: {} for a in index.elements}
    for i, w in zip(picks, weights):
        values = delta.elements[i]
        for pos, alpha in enumerate(index.elements):
            bucket = assign[alpha]
            bucket[values[pos]] = bucket.get(values[pos], Fraction(0)) + Fraction(w, total)
    return MeasureSystem(index, target, {a: Measure(target, m) for a, m in assign.items()})


def cmd_sweep(args) -> int:
    rng = random.Random(args.seed)
    lines = []
    payload = {"max_size": args.max_size, "seed": args.seed, "posets": []}
    failures = 0
    for p in catalog.connected_posets(args.max_size):
        label = classify(p)
        acyclic = p.is_acyclic()
        obstruction = check_enlargeable(p)
        checks = {}
        # classifier vs. diamond-or-crown content
        crowned = find_induced_pattern(p, catalog.diamond()) is not None or any(
            find_induced_pattern(p, catalog.k_crown(k)) is not None
            for k in range(2, len(p) // 2 + 1)
        )
        checks["class_b_iff_diamond_or_crown"] = (label.label == "B") == crowned
        # enlargement round-trip
        if obstruction is None:
            bigger = enlarge_to_acyclic(p)
            checks["enlargement_valid"] = bigger.is_acyclic() and bigger.induced(p.elements) == p
        else:
            checks["enlargement_valid"] = True
        # self-pair decision against acyclicity
        verdict = decide_markov(p)
        checks["markov_iff_acyclic"] = (verdict.outcome == HOLDS) == acyclic
        # random systems through the guaranteed coupler
        if acyclic and args.systems:
            ok = True
            for _ in range(args.systems):
                sys_ = _random_monotone_system(rng, p, p, atoms=3, cap=args.max_delta)
                coupling = realize_acyclic(sys_, args.max_delta)
                ok = ok and coupling.has_marginals(sys_) and realize(sys_, args.max_delta).feasible
            checks["random_systems_couple"] = ok
        good = all(checks.values())
        failures += 0 if good else 1
        key = " ".join(f"{x}<{y}" for x, y in p.covers()) or "(antichain)"
        status = "ok" if good else "FAIL"
        lines.append(
            f"{status} n={len(p)} class={label.label} acyclic={int(acyclic)} "
            f"enlargeable={int(obstruction is None)} markov={verdict.outcome} | {key}"
        )
        payload["posets"].append(
            {
                "covers": key,
                "n": len(p),
                "class": label.label,
                "acyclic": acyclic,
                "enlargeable": obstruction is None,
                "markov": verdict.outcome,
                "checks": checks,
            }
        )
    lines.append(f"swept {len(payload['posets'])} posets, {failures} failures")
    payload["failures"] = failures
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK if failures == 0 else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posetprob",
        description="order/coupling toolkit: classify posets, test dominance, build or refute monotone couplings",
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=["text", "json"], default="text")
    shared.add_argument("--max-delta", type=int, default=DEFAULT_CANDIDATE_CAP, metavar="N",
                        help="candidate cap for monotone-map enumeration")
    shared.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[shared], **kw)

    c = add_parser("classify", help="class label and evidence per component")
    c.add_argument("files", nargs="+")
    c.add_argument("--poset", default=None)
    c.add_argument("--dot", default=None, help="also write the cover digraph")
    c.set_defaults(func=cmd_classify)

    c = add_parser("check", help="test a system for stochastic or realizable monotonicity")
    c.add_argument("files", nargs="+")
    c.add_argument("--mode", choices=["stochastic", "realizable"], default="stochastic")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_check)

    c = add_parser("decide", help="decide monotonicity equivalence for a poset pair")
    c.add_argument("index_file")
    c.add_argument("target_file")
    c.add_argument("--index-poset", default=None)
    c.add_argument("--target-poset", default=None)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_decide)

    c = add_parser("couple", help="construct a coupling for a system")
    c.add_argument("files", nargs="+")
    c.add_argument("--strategy", choices=["auto", "lp", "acyclic", "class-z", "enlargeable"], default="auto")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_couple)

    c = add_parser("counterexample", help="emit a certified counterexample for a failing pair")
    c.add_argument("index_file")
    c.add_argument("target_file")
    c.add_argument("--index-poset", default=None)
    c.add_argument("--target-poset", default=None)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_counterexample)

    c = add_parser("enlarge", help="embed a poset into an acyclic one, or report the obstruction")
    c.add_argument("files", nargs="+")
    c.add_argument("--poset", default=None)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_enlarge)

    c = add_parser("sweep", help="run the structural checks over all small connected posets")
    c.add_argument("--max-size", "--all-posets-up-to", dest="max_size", type=int, default=4)
    c.add_argument("--systems", type=int, default=2, help="random systems per acyclic poset")
    c.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OrderError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
