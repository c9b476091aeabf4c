"""Command-line interface.

Exit codes: 0 success, 1 usage or input errors, 2 goal not entailed or no
proof, 3 cancelled (a partial result is written when available), 4 internal
resource limits.
"""

from __future__ import annotations

import argparse
import os
import sys
import threading

from .syntax import (Axiom, Ontology, ParseError, Signature, axiom_ascii,
                     axiom_signature, axiom_unicode, parse_axiom,
                     parse_ontology)
from .proofmodel import (DEPTH, MEASURES, SIZE, check_proof, read_json,
                         write_dot, write_json)
from .extract import CancelToken, Cancelled, NoProofError
from .elreasoner import classify, generate_el_proof, is_elh
from .elimination import EliminationTask, generate_elimination_proof
from .detailed import GoalNotDerivedError, generate_detailed_proof
from .justify import (NotEntailedError, compute_all_justifications,
                      compute_justification, justification_union)
from .forgetting import forget_signature
from . import tableau

TIMEOUT_ENV = "PROOFFORGE_TIMEOUT_SECS"

METHODS = ("elk-size", "elk-depth", "elim-heur", "elim-name-opt",
           "elim-size-opt", "detailed")


class _Usage(Exception):
    pass


def _load_ontology(path: str) -> Ontology:
    try:
        with open(path, encoding="utf-8") as f:
            return parse_ontology(f.read())
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}")
    except ParseError as e:
        raise _Usage(f"{path}: {e}")


def _parse_goal(text: str) -> Axiom:
    try:
        return parse_axiom(text)
    except ParseError as e:
        raise _Usage(f"bad goal axiom: {e}")


def _load_signature(path: str, o: Ontology) -> Signature:
    try:
        with open(path, encoding="utf-8") as f:
            tokens = f.read().replace(",", " ").split()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}")
    roles = {t for t in tokens if t in o.signature.role_names}
    concepts = set(tokens) - roles
    return Signature(frozenset(concepts), frozenset(roles))


def cmd_classify(args) -> int:
    o = _load_ontology(args.ontology)
    for a in classify(o):
        print(axiom_ascii(a))
    return 0


def cmd_justify(args) -> int:
    o = _load_ontology(args.ontology)
    goal = _parse_goal(args.goal)
    try:
        if args.all:
            justs, complete = compute_all_justifications(o, goal, limit=args.all)
            for i, j in enumerate(justs):
                print(f"# justification {i + 1}")
                for a in j:
                    print(axiom_ascii(a))
            if not complete:
                print(f"# enumeration stopped at {args.all}", file=sys.stderr)
        else:
            for a in compute_justification(o, goal):
                print(axiom_ascii(a))
    except NotEntailedError:
        print("goal is not entailed", file=sys.stderr)
        return 2
    return 0


def _run_with_timeout(fn, timeout):
    """Run fn(cancel_token); cancel it when the timeout elapses."""
    token = CancelToken()
    timer = None
    if timeout and timeout > 0:
        timer = threading.Timer(timeout, token.cancel)
        timer.start()
    try:
        return fn(token)
    finally:
        if timer:
            timer.cancel()


def cmd_explain(args) -> int:
    o = _load_ontology(args.ontology)
    goal = _parse_goal(args.goal)
    known = _load_signature(args.known, o) if args.known else Signature.empty()
    known_check = None
    if known.names:
        cache: dict = {}

        def known_check(a, _c=cache):
            if a not in _c:
                _c[a] = tableau.is_entailed(o, a)
            return _c[a]

    timeout = args.timeout
    if timeout is None:
        env = os.environ.get(TIMEOUT_ENV)
        timeout = float(env) if env else None

    partial = None
    try:
        try:
            proof = _generate(args.method, o, goal, known, known_check, timeout)
        except Cancelled as e:
            partial = e.best
            proof = None
    except NotEntailedError:
        print("goal is not entailed", file=sys.stderr)
        return 2
    except NoProofError:
        print("no proof found", file=sys.stderr)
        return 2
    except GoalNotDerivedError as e:
        print(f"no proof found: {e}", file=sys.stderr)
        return 2
    except tableau.ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 4

    result = proof if proof is not None else partial
    if result is not None:
        text = write_json(result)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text + "\n")
        else:
            print(text)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as f:
                f.write(write_dot(result))
    if proof is None:
        if result is None:
            print("cancelled before any proof was found", file=sys.stderr)
        else:
            print("cancelled; result may be sub-optimal", file=sys.stderr)
        return 3
    return 0


def _generate(method: str, o: Ontology, goal: Axiom, known: Signature,
              known_check, timeout):
    if method in ("elk-size", "elk-depth"):
        union = justification_union(o, goal)
        if not is_elh(union):
            raise _Usage(f"--method {method} needs the goal's justifications "
                         "to stay inside the EL fragment")
        measure = SIZE if method == "elk-size" else DEPTH
        return _run_with_timeout(
            lambda tok: generate_el_proof(union, goal, measure, known,
                                          known_check, tok), timeout)
    if method == "detailed":
        return _run_with_timeout(
            lambda tok: generate_detailed_proof(o, goal, SIZE, known,
                                                known_check, tok), timeout)
    strategy = {"elim-heur": "heuristic", "elim-name-opt": "nameOptimized",
                "elim-size-opt": "sizeOptimized"}[method]
    return _run_with_timeout(
        lambda tok: generate_elimination_proof(EliminationTask(
            o, goal, strategy=strategy, known=known, cancel=tok)), timeout)


def cmd_forget(args) -> int:
    o = _load_ontology(args.ontology)
    keep = set(args.keep.replace(",", " ").split())
    res = forget_signature(o, keep)
    for a in res.ontology:
        print(axiom_ascii(a))
    if res.failed_names:
        print("# kept (could not be eliminated): " + ", ".join(res.failed_names),
              file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    o = _load_ontology(args.ontology)
    goal = _parse_goal(args.goal)
    try:
        with open(args.proof, encoding="utf-8") as f:
            proof = read_json(f.read())
    except OSError as e:
        raise _Usage(f"cannot read {args.proof}: {e.strerror}")
    except ValueError as e:
        raise _Usage(f"{args.proof}: {e}")
    known = _load_signature(args.known, o) if args.known else Signature.empty()
    report = check_proof(proof, o, goal, known)
    if report.valid:
        print("valid")
        return 0
    for v in report.violations:
        print(v, file=sys.stderr)
    return 2


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proofforge",
        description="Generate and inspect proofs for ontology entailments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="print all entailed atomic inclusions")
    p.add_argument("ontology")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("justify", help="minimal axiom sets entailing a goal")
    p.add_argument("ontology")
    p.add_argument("--goal", required=True, help="axiom, e.g. 'sub(A, B)'")
    p.add_argument("--all", type=int, metavar="N",
                   help="enumerate up to N justifications")
    p.set_defaults(fn=cmd_justify)

    p = sub.add_parser("explain", help="generate a proof for a goal")
    p.add_argument("ontology")
    p.add_argument("--goal", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--known", metavar="SIGFILE",
                   help="file of names the reader already understands")
    p.add_argument("--timeout", type=float, metavar="SECS",
                   help=f"cancel after this long (default ${TIMEOUT_ENV})")
    p.add_argument("--out", metavar="FILE", help="write the proof JSON here")
    p.add_argument("--dot", metavar="FILE", help="also write a graphviz file")
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("forget", help="project the ontology onto a signature")
    p.add_argument("ontology")
    p.add_argument("--keep", required=True, metavar="NAMES",
                   help="comma- or space-separated names to keep")
    p.set_defaults(fn=cmd_forget)

    p = sub.add_parser("check", help="validate a proof JSON file")
    p.add_argument("ontology")
    p.add_argument("--proof", required=True, metavar="FILE")
    p.add_argument("--goal", required=True)
    p.add_argument("--known", metavar="SIGFILE")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _Usage as e:
        print(str(e), file=sys.stderr)
        return 1
    except tableau.ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
