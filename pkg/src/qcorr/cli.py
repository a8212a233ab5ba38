"""``qcorr`` command-line driver.

Exit codes: 0 success, 1 mathematical failure, 2 usage or parse failure.

Instances are given as a JSON file (an instance spec, or a quantum group in
the interchange format) or as a shorthand: ``C(S3)``, ``C*(Q8)``, ``KP``,
``dual(KP)``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import io
from .algebra import subalgebra_closure
from .config import DEFAULT_TOL, get_tol
from .correspondence import (as_subalgebra, expectation_residuals, invariant_subalgebra_of,
                             is_left_invariant, left_invariance_residual, make_subgroup,
                             roundtrip_subgroup, correspond, invariant_closure)
from .errors import (InvalidGroup, NotInvariant, ParseError, QCorrError, ShapeMismatch,
                     TooLarge, UnknownKind, ValidationFailed)
from .groups import enumerate_subgroups, subgroup_labels
from .instances import build_instance
from .qgroup import biduality_residuals, build_dual

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_SHORT = re.compile(r"^\s*(dual\((?P<inner>.*)\)|C\*\((?P<ga>[^()]*)\)|C\((?P<fa>[^()]*)\)|KP)\s*$")


class UsageError(QCorrError):
    pass


# ---------------------------------------------------------------------------
# loading


def instance_spec(arg: str):
    """Turn a path or shorthand into an instance spec."""
    p = Path(arg)
    if p.exists() or arg.endswith(".json"):
        data = io.read_json(arg)
        if not isinstance(data, dict):
            raise ParseError(f"{arg}: expected a JSON object")
        if "kind" in data:
            return data
        if "dim" in data:
            return {"kind": "literal", "data": data, "name": data.get("name") or p.stem}
        raise ParseError(f"{arg}: neither an instance spec nor a quantum group")
    m = _SHORT.match(arg)
    if not m:
        raise ParseError(f"cannot read instance {arg!r}")
    if m.group("inner") is not None:
        return {"kind": "dual_of", "inner": instance_spec(m.group("inner"))}
    if m.group("ga") is not None:
        return {"kind": "group_algebra", "group": m.group("ga")}
    if m.group("fa") is not None:
        return {"kind": "function_algebra", "group": m.group("fa")}
    return {"kind": "kac_paljutkin"}


def load_instance(arg, tol):
    spec = instance_spec(arg)
    try:
        return build_instance(spec, tol)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed instance spec: {exc}") from None


def _split_terms(text):
    """Split at top-level ``+``/``-`` (signs inside brackets belong to labels)."""
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip():
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def _label_index(labels, name):
    name = name.strip()
    if name in labels:
        return labels.index(name)
    m = re.fullmatch(r"(λ|lambda|δ|delta)\((.*)\)", name)
    if m:
        head = "λ" if m.group(1) in ("λ", "lambda") else "δ"
        inner = m.group(2).strip()
        for cand in (f"{head}({inner})", f"{head}(({inner}))"):
            if cand in labels:
                return labels.index(cand)
    raise ParseError(f"unknown basis element {name!r}; labels are {', '.join(labels)}")


def parse_element(text, alg):
    """``"λ(123)"``, ``"0.5*λ(e) - 2j*λ(12)"`` or a JSON coefficient vector."""
    text = text.strip()
    if text.startswith("["):
        try:
            vals = json.loads(text)
            v = np.array([io._num(x) for x in vals], dtype=complex)
        except (json.JSONDecodeError, TypeError) as exc:
            raise ParseError(f"bad coefficient vector {text!r}: {exc}") from None
        if v.shape != (alg.dim,):
            raise ParseError(f"coefficient vector has length {v.size}, expected {alg.dim}")
        return v
    labels = list(alg.labels)
    v = np.zeros(alg.dim, dtype=complex)
    for term in _split_terms(text):
        term = term.strip()
        sign = 1
        if term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:].strip()
        coeff = 1
        if "*" in term:
            c, term = term.split("*", 1)
            try:
                coeff = complex(c.strip().replace(" ", ""))
            except ValueError:
                raise ParseError(f"bad coefficient {c!r}") from None
        v[_label_index(labels, term)] += sign * coeff
    return v


def load_morphism(path, qg, tol):
    """Quantum subgroup from a morphism file.

    ``{"target": <instance>, "pi": rows}`` for an explicit map, or for
    group instances ``{"restrict_to": [labels]}`` (function algebras) and
    ``{"quotient_by": [labels]}`` (group algebras, normal subgroup).
    """
    from .cocommutative import build_group_algebra, quotient_map, restriction_subgroup
    from .groups import named_group
    data = io.read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    if "pi" in data:
        tspec = data["target"]
        target = build_instance(tspec if isinstance(tspec, dict) else instance_spec(tspec), tol)
        pi = np.array([[io._num(x) for x in row] for row in data["pi"]], dtype=complex)
        return make_subgroup(qg, target, pi, tol, name=data.get("name", "H"))
    group = data.get("group")
    if group is None:
        raise ParseError(f"{path}: needs 'pi' or a 'group' with 'restrict_to'/'quotient_by'")
    G = named_group(group) if isinstance(group, str) else io.group_from_dict(group)
    if "restrict_to" in data:
        H = tuple(sorted(G.index(x) for x in data["restrict_to"]))
        if not G.is_subgroup(H):
            raise ParseError(f"{data['restrict_to']} is not a subgroup")
        return restriction_subgroup(G, H, qg, tol)
    if "quotient_by" in data:
        K = tuple(sorted(G.index(x) for x in data["quotient_by"]))
        GK, _ = G.quotient(K)
        target = build_group_algebra(GK, tol)
        return make_subgroup(qg, target, quotient_map(G, K, target), tol, name="C*(G/K)")
    raise ParseError(f"{path}: needs 'pi', 'restrict_to' or 'quotient_by'")


# ---------------------------------------------------------------------------
# commands


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(_plain(payload), indent=2, ensure_ascii=False))
    else:
        print(text)


def _plain(obj):
    from .correspondence import _jsonable
    return _jsonable(obj)


def cmd_validate(args):
    tol = get_tol(args.tol)
    try:
        qg = load_instance(args.instance, tol)
    except ValidationFailed as exc:
        rep = exc.report
        _emit(args, {"passed": False, "failed": exc.report.first_failure if rep else None,
                     "error": str(exc), "report": rep.to_dict() if rep else None},
              f"FAIL: {exc}\n" + (rep.table() if rep else ""))
        return EXIT_FAIL
    except QCorrError as exc:
        if isinstance(exc, (ParseError, UsageError, UnknownKind, InvalidGroup, ShapeMismatch)):
            raise
        rep = getattr(exc, "report", None)
        _emit(args, {"passed": False, "error": f"{type(exc).__name__}: {exc}",
                     "report": rep.to_dict() if rep else None},
              f"FAIL: {type(exc).__name__}: {exc}\n" + (rep.table() if rep else ""))
        return EXIT_FAIL
    _emit(args, {"instance": qg.name, "dim": qg.dim, "passed": True, "report": qg.report.to_dict()},
          f"{qg.name}: dim {qg.dim}, blocks {qg.report.notes.get('blocks')}\n{qg.report.table()}\nPASS")
    return EXIT_OK


def cmd_correspond(args):
    tol = get_tol(args.tol)
    qg = load_instance(args.instance, tol)
    if args.subgroup:
        H = load_morphism(args.subgroup, qg, tol)
        X, ce = invariant_subalgebra_of(qg, H, tol)
        report = roundtrip_subgroup(qg, H, tol, label=f"{H.name} in {qg.name}")
        eres = expectation_residuals(qg, ce, tol)
        report.witnesses["expectation"] = eres
        ok = report.passed and all(v <= tol for v in eres.values())
        if args.roundtrip:
            back = correspond(qg, X, roundtrip=True, tol=tol)
            report.roundtrip["subalgebra_equal"] = back.roundtrip["subalgebra_equal"]
            ok &= bool(back.roundtrip["subalgebra_equal"])
        text = (f"{report.input}: quotient dim {H.dim}, X_H dim {X.dim}\n"
                f"symmetric: {report.symmetric['verdict']} ({report.symmetric['residual']:.1e})\n"
                f"expectation: " + ", ".join(f"{k} {v:.1e}" for k, v in eres.items()) + "\n"
                f"roundtrip: kernel_equal={report.roundtrip['kernel_equal']} "
                f"isomorphism={report.roundtrip['isomorphism']}")
        _emit(args, {**report.to_dict(), "x_dim": X.dim, "passed": ok}, text)
        return EXIT_OK if ok else EXIT_FAIL

    if not args.subalgebra:
        raise UsageError("give --subalgebra generators or --subgroup FILE")
    gens = [parse_element(g, qg.alg) for g in args.subalgebra]
    if args.closure:
        X = invariant_closure(qg, np.array(gens), tol)
    else:
        X = subalgebra_closure(qg.alg, np.array([qg.alg.unit, *gens]), tol)
    if not is_left_invariant(qg, X, tol):
        raise NotInvariant(f"the generated subalgebra (dim {as_subalgebra(qg.alg, X, tol).dim}) "
                           f"is not left invariant (residual "
                           f"{left_invariance_residual(qg, X, tol):.2e}); try --closure")
    report = correspond(qg, X, roundtrip=args.roundtrip, tol=tol,
                        label=f"{', '.join(args.subalgebra)} in {qg.name}")
    text = (f"{report.input}: X dim {X.dim}, J_X dim {report.jx_dim}, "
            f"quotient dim {report.quotient_dim}\n"
            f"symmetric: {report.symmetric['verdict']} ({report.symmetric['residual']:.1e})")
    if args.roundtrip:
        text += f"\nroundtrip: subalgebra_equal={report.roundtrip['subalgebra_equal']}"
    _emit(args, {**report.to_dict(), "x_dim": X.dim, "passed": report.passed}, text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(args):
    from .sweep import matrix_text, sweep
    from .instances import corpus
    tol = get_tol(args.tol)
    if args.corpus == "default":
        specs = corpus()
    else:
        specs = io.read_json(args.corpus)
        if not isinstance(specs, list):
            raise ParseError(f"{args.corpus}: a corpus is a JSON list of instance specs")
    for extra in args.add or []:
        specs.append(instance_spec(extra))
    if not specs:
        raise UsageError("empty corpus: nothing to sweep")
    results = sweep(specs, tol, states=args.states, seed=args.seed, jobs=args.jobs)
    ok = all(r.passed for r in results)
    total = sum(r.seconds for r in results)
    _emit(args, {"passed": ok, "seconds": total, "instances": [r.to_dict() for r in results]},
          matrix_text(results) + f"\n{'PASS' if ok else 'FAIL'} ({len(results)} instances, {total:.1f}s)")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dual(args):
    tol = get_tol(args.tol)
    qg = load_instance(args.instance, tol)
    pair = build_dual(qg, tol)
    d = pair.dual_qg
    data = io.quantum_group_to_dict(d)
    data["name"] = f"dual({qg.name})"
    if args.output:
        io.write_json(data, args.output)
    bres = biduality_residuals(pair, tol)
    ok = all(v <= tol for v in bres.values())
    if args.format == "json":
        print(json.dumps(data if not args.output else {"written": args.output, "biduality": bres}))
    else:
        print(f"dual({qg.name}): dim {d.dim}, blocks {d.report.notes.get('blocks')}, "
              f"commutative {d.alg.is_commutative(tol)}")
        for k, v in bres.items():
            print(f"{'ok  ' if v <= tol else 'FAIL'} {k:<14} {v:.3e}")
        if args.output:
            print(f"written to {args.output}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_subgroups(args):
    G = io.load_group(args.group)
    subs = enumerate_subgroups(G, bound=args.bound)
    rows = [{"order": len(H), "elements": subgroup_labels(G, H), "normal": G.is_normal(H)}
            for H in subs]
    text = "\n".join(f"{r['order']:>3}  {'normal' if r['normal'] else '      '}  "
                     f"{{{', '.join(r['elements'])}}}" for r in rows)
    _emit(args, {"group": G.name, "order": G.order, "subgroups": rows},
          f"{G.name or 'group'} of order {G.order}: {len(rows)} subgroups\n{text}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"numerical tolerance (default {DEFAULT_TOL:g} or $QCORR_TOL)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default $QCORR_SEED)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="qcorr", description=__doc__.split("\n")[0])
    sp = p.add_subparsers(dest="command", required=True)

    v = sp.add_parser("validate", parents=[common], help="check every axiom of an instance")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)

    c = sp.add_parser("correspond", parents=[common],
                      help="quotient subgroup of an invariant subalgebra, or X_H of a subgroup")
    c.add_argument("instance")
    c.add_argument("--subalgebra", action="append", metavar="ELEMENT",
                   help='generator, e.g. "λ(123)" or "0.5*λ(e) + λ(12)" or a JSON vector; repeatable')
    c.add_argument("--subgroup", metavar="FILE", help="morphism file describing a quantum subgroup")
    c.add_argument("--closure", action="store_true",
                   help="use the left invariant closure of the generators")
    c.add_argument("--roundtrip", action="store_true")
    c.set_defaults(func=cmd_correspond)

    s = sp.add_parser("sweep", parents=[common], help="all checks on a corpus")
    s.add_argument("--corpus", default="default", help='"default" or a JSON list of instance specs')
    s.add_argument("--add", action="append", metavar="INSTANCE", help="append an instance")
    s.add_argument("--states", type=int, default=20, help="random states per subgroup")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    d = sp.add_parser("dual", parents=[common], help="print the dual quantum group")
    d.add_argument("instance")
    d.add_argument("-o", "--output", help="write the dual in interchange format")
    d.set_defaults(func=cmd_dual)

    g = sp.add_parser("subgroups", parents=[common], help="list the subgroups of a finite group")
    g.add_argument("group", help="group JSON file or name such as S3, D4, Q8, Z/8")
    g.add_argument("--bound", type=int, default=64, help="largest group order to enumerate")
    g.set_defaults(func=cmd_subgroups)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and not args.tol > 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except (ParseError, UsageError, TooLarge, UnknownKind, InvalidGroup, ShapeMismatch,
            KeyError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QCorrError as exc:
        print(f"qcorr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
