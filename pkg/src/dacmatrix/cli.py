"""Command-line front end.

Exit codes: 0 success, 1 domain error (inadmissible precedents,
undefined or ambiguous queried cell, order-check failure, busy port),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import socket
import sys

from . import engine
from .engine import UndefinedCell
from .policyfile import (
    FORMAT_STRUCTURED,
    FORMAT_TABLE,
    PolicyDocument,
    PolicyError,
    build_log,
    parse_policy,
    serialize_matrix,
)
from .precedents import INTERACTIVE, REJECT_NEW
from .verify import check_order_independence


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _seed(value: str) -> int:
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dacmatrix",
        description="Interpolate discretionary access matrices from precedents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interpolate", help="compute and export the access matrix")
    p.add_argument("policy", help="path to a .policy.json document")
    p.add_argument("--mode", choices=engine.MODES, help="override the document's mode")
    p.add_argument("--format", choices=[FORMAT_TABLE, FORMAT_STRUCTURED],
                   default=FORMAT_TABLE, dest="fmt")
    p.add_argument("--out", help="write the matrix to this file instead of stdout")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("explain", help="show why a cell holds its decision")
    p.add_argument("policy")
    p.add_argument("subject")
    p.add_argument("object")
    p.add_argument("--mode", choices=engine.MODES)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("validate", help="validate a policy document")
    p.add_argument("policy")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check-order", help="verify order-independence empirically")
    p.add_argument("policy")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=_seed, default=None)
    p.set_defaults(func=cmd_check_order)

    p = sub.add_parser("serve", help="run the policy administration service")
    p.add_argument("policy")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def _read_policy(path: str) -> PolicyDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(2, f"cannot read {path}: {e}") from None
    try:
        return parse_policy(text)
    except PolicyError as e:
        report = "\n".join(f"  {issue}" for issue in e.issues)
        raise CliError(2, f"invalid policy document {path}:\n{report}") from None


def _batch_strategy(doc: PolicyDocument) -> str:
    """Interactive collisions need a human; batch commands fall back to reject-new."""
    if doc.settings.collision_strategy == INTERACTIVE:
        print(
            "warning: interactive collision strategy degrades to reject-new "
            "outside of serve",
            file=sys.stderr,
        )
        return REJECT_NEW
    return doc.settings.collision_strategy


def _admit(doc: PolicyDocument, strategy: str):
    universe = doc.universe()
    log, outcomes = build_log(doc, universe=universe, strategy=strategy)
    refused = [o for o in outcomes if o.status != "admitted"]
    if refused:
        lines = [
            f"  {o.precedent.describe()} {o.status}"
            + (f" (collides with {o.conflict.describe()})" if o.conflict else "")
            for o in refused
        ]
        raise CliError(1, "precedents not admissible under the collision strategy:\n"
                       + "\n".join(lines))
    return universe, log


def _summary_line(matrix: engine.AccessMatrix) -> str:
    counts = engine.summarize(matrix)
    if matrix.mode == engine.SEQUENTIAL:
        return (f"{counts['explicit']} explicit, {counts['implicit']} implicit "
                f"({counts['derived']} derived), {counts['undefined']} undefined")
    return (f"{counts['explicit']} explicit, {counts['implicit']} implicit, "
            f"{counts['undefined']} undefined")


def cmd_interpolate(args) -> int:
    doc = _read_policy(args.policy)
    universe, log = _admit(doc, _batch_strategy(doc))
    mode = args.mode or doc.settings.mode
    matrix = engine.interpolate(universe, log.admitted(), mode,
                                doc.settings.dominance_depth)
    text = serialize_matrix(matrix, args.fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
        print(_summary_line(matrix))
    else:
        sys.stdout.write(text)
        print(_summary_line(matrix), file=sys.stderr)
    return 0


def cmd_explain(args) -> int:
    doc = _read_policy(args.policy)
    universe, log = _admit(doc, _batch_strategy(doc))
    mode = args.mode or doc.settings.mode
    matrix = engine.interpolate(universe, log.admitted(), mode,
                                doc.settings.dominance_depth)
    try:
        sid = universe.rep_id(args.subject)
        oid = universe.rep_id(args.object)
    except KeyError as e:
        raise CliError(2, str(e)) from None
    explanation = engine.explain_cell(matrix, sid, oid)
    print(explanation.text())
    return 0 if not isinstance(explanation.cell, UndefinedCell) else 1


def cmd_validate(args) -> int:
    try:
        with open(args.policy, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(2, f"cannot read {args.policy}: {e}") from None
    try:
        doc = parse_policy(text)
    except PolicyError as e:
        print(f"invalid: {len(e.issues)} issue(s)")
        for issue in e.issues:
            print(f"  {issue}")
        return 1
    universe = doc.universe()
    log, outcomes = build_log(doc, universe=universe)
    refused = [o for o in outcomes if o.status != "admitted"]
    overwrites = [e for e in log.events() if e.event == "overwritten"]
    for event in overwrites:
        print(f"  note: {event.precedent.describe()} overwritten ({event.detail})")
    if refused:
        print(f"conflicts under strategy {doc.settings.collision_strategy!r}:")
        for o in refused:
            conflict = f" (collides with {o.conflict.describe()})" if o.conflict else ""
            print(f"  {o.precedent.describe()} {o.status}{conflict}")
        return 1
    print(
        f"OK: {len(universe.subject_classes)} subject classes, "
        f"{len(universe.object_classes)} object classes, "
        f"{len(log.admitted())} precedents admitted"
    )
    return 0


def cmd_check_order(args) -> int:
    doc = _read_policy(args.policy)
    universe, log = _admit(doc, _batch_strategy(doc))
    seed = args.seed if args.seed is not None else random.SystemRandom().getrandbits(64)
    result = check_order_independence(
        universe, log.admitted(), trials=args.trials, seed=seed,
        depth=doc.settings.dominance_depth,
    )
    if result.ok:
        print(f"PASS: {result.trials} permutations, both modes identical (seed {result.seed})")
        return 0
    m = result.mismatch
    print(
        f"FAIL: mode {m.mode}, permutation {m.trial}, first differing cell "
        f"({m.subject_id}, {m.object_id}) (seed {result.seed})"
    )
    print(f"  baseline: {m.baseline}")
    print(f"  permuted: {m.permuted}")
    return 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import PolicySession, SessionLoadError, create_app

    doc = _read_policy(args.policy)
    try:
        session = PolicySession(doc, persist_path=args.policy)
    except SessionLoadError as e:
        raise CliError(1, str(e)) from None
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        try:
            probe.bind((args.host, args.port))
        except OSError as e:
            raise CliError(1, f"cannot bind {args.host}:{args.port}: {e}") from None
    uvicorn.run(create_app(session), host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
