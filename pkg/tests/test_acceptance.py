"""Acceptance suite: one PASS/FAIL line per criterion, every residual below 1e-9.

Run with ``pytest -m acceptance -s`` for the summary lines, or directly with
``python tests/test_acceptance.py``.
"""
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from qcorr.cocommutative import (group_algebra_of, indicator_state, lam,
                                 normality_symmetry_check, quotient_by_normal,
                                 random_invariant_search, span_lambda,
                                 subgroup_of_subalgebra, subalgebra_of_subgroup)
from qcorr.algebra import span
from qcorr.correspondence import (build_dual_inclusion, build_quotient_subgroup,
                                  coamenability_residual, enumerate_quantum_subgroups,
                                  expectation_residuals, invariant_subalgebra_of, is_in_F0,
                                  is_left_invariant, is_symmetric, mu_a_transform, random_state_near,
                                  roundtrip_subalgebra, roundtrip_subgroup, membership_verdicts)
from qcorr.groups import enumerate_subgroups, named_group
from qcorr.instances import CORPUS_GROUPS, build_instance, corpus, instance_name
from qcorr.qgroup import biduality_residuals, build_dual

TOL = 1e-9
SEED = 20240601

pytestmark = pytest.mark.acceptance


@lru_cache(maxsize=None)
def instances():
    return tuple((instance_name(s), build_instance(s, TOL)) for s in corpus())


@lru_cache(maxsize=None)
def subgroup_table():
    """``[(instance name, qg, subgroup, X_H, P)]`` over the whole corpus."""
    rows = []
    for name, qg in instances():
        for s in enumerate_quantum_subgroups(qg, TOL):
            X, ce = invariant_subalgebra_of(qg, s, TOL)
            rows.append((name, qg, s, X, ce))
    return tuple(rows)


def worst(values):
    return max((float(v) for v in values), default=0.0)


def c1_axioms():
    w = 0.0
    for name, qg in instances():
        if not qg.report.passed:
            return False, f"{name} failed {qg.report.first_failure}"
        w = max(w, worst(qg.report.residuals.values()))
    return w < TOL, f"14 instances, worst residual {w:.1e}"


def c2_biduality():
    w = max(worst(biduality_residuals(build_dual(qg, TOL), TOL).values()) for _, qg in instances())
    return w < TOL, f"worst residual {w:.1e}"


def c3_group_correspondence():
    gen = np.random.default_rng(SEED)
    details = []
    ok = True
    for g, expected in (("S3", 6), ("D4", 10), ("Q8", 6)):
        G = named_group(g)
        qg = group_algebra_of(G)
        subs = {tuple(sorted(H)) for H in enumerate_subgroups(G)}
        ok &= len(subs) == expected
        ok &= all(subgroup_of_subalgebra(G, subalgebra_of_subgroup(G, H, qg), qg) == H for H in subs)
        found = random_invariant_search(G, 1000, gen, qg, TOL)
        ok &= set(found) <= subs
        details.append(f"{g}: {len(subs)} subgroups, {len(found)} reached")
    return ok, "; ".join(details)


def c4_normality():
    ok = True
    counts = {}
    for g in CORPUS_GROUPS:
        G = named_group(g)
        rows = [normality_symmetry_check(G, H, tol=TOL) for H in enumerate_subgroups(G)]
        ok &= all(r["agree"] for r in rows)
        counts[g] = (sum(r["symmetric"] for r in rows), len(rows))
    ok &= counts["S3"] == (3, 6) and counts["Q8"] == (6, 6)
    return ok, ", ".join(f"{g} {a}/{b} symmetric" for g, (a, b) in counts.items())


def c5_quotients():
    G = named_group("S3")
    qg = group_algebra_of(G)
    H12 = tuple(sorted(G.index(x) for x in ("e", "(12)")))
    A3 = tuple(sorted(G.index(x) for x in ("e", "(123)", "(132)")))
    q1 = build_quotient_subgroup(qg, span_lambda(G, H12, qg), TOL)
    q2 = build_quotient_subgroup(qg, span_lambda(G, A3, qg), TOL)
    # explicit isomorphism onto the group algebra of S3/A3 = Z/2
    oracle = quotient_by_normal(G, A3, strict=True, qg=qg, tol=TOL)
    same = q2.dim == 2 and oracle["quotient_order"] == 2 and oracle["isomorphic"]
    ok = q1.dim == 1 and same
    return ok, f"<(12)> gives dim {q1.dim}, A3 gives dim {q2.dim}"


def c6_expectations():
    w = 0.0
    ok = True
    for name, qg, s, X, ce in subgroup_table():
        ok &= bool(is_left_invariant(qg, X, TOL) and is_symmetric(qg, X, TOL)[0])
        w = max(w, worst(expectation_residuals(qg, ce, TOL).values()))
    return ok and w < TOL, f"{len(subgroup_table())} subgroups, worst residual {w:.1e}"


def c7_roundtrips():
    ok = True
    w = 0.0
    for name, qg, s, X, ce in subgroup_table():
        a = roundtrip_subalgebra(qg, X, TOL)
        b = roundtrip_subgroup(qg, s, TOL)
        ok &= bool(a.roundtrip["subalgebra_equal"] and b.roundtrip["kernel_equal"]
                   and b.roundtrip["isomorphism"])
        w = max(w, worst(a.roundtrip["residuals"].values()), worst(b.roundtrip["residuals"].values()))
    return ok and w < TOL, f"worst residual {w:.1e}"


def c8_membership():
    gen = np.random.default_rng(SEED)
    total = agree = 0
    for name, qg, s, X, ce in subgroup_table():
        q = build_quotient_subgroup(qg, X, TOL)
        for _ in range(200):
            v = membership_verdicts(qg, X, q, random_state_near(qg, X, gen, TOL), TOL)
            agree += v[0] == v[1] == v[2]
            total += 1
    return agree == total, f"{agree}/{total} states agree"


def c9_dual_inclusion():
    w = 0.0
    for name, qg, s, X, ce in subgroup_table():
        w = max(w, worst(build_dual_inclusion(qg, s, TOL).residuals.values()))
    return w < TOL, f"worst residual {w:.1e}"


def c10_counit():
    w = max(coamenability_residual(s) for _, _, s, _, _ in subgroup_table())
    return w < TOL, f"worst residual {w:.1e}"


def c11_negative_controls():
    G = named_group("S3")
    qg = group_algebra_of(G)
    H = tuple(sorted(G.index(x) for x in ("e", "(12)")))
    X = span_lambda(G, H, qg)
    mu = mu_a_transform(qg, X, indicator_state(G, H), lam(G, "(123)"), TOL)
    rejected = not is_left_invariant(qg, span(qg.alg, [lam(G, "e", "(12)")]), TOL)
    ok = (not is_in_F0(qg, X, mu, TOL)) and rejected
    return ok, f"mu_a outside F_0: {not is_in_F0(qg, X, mu, TOL)}, non-invariant rejected: {rejected}"


CRITERIA = [
    (1, "axiom suite", c1_axioms),
    (2, "biduality", c2_biduality),
    (3, "subgroups vs invariant subalgebras", c3_group_correspondence),
    (4, "normality = symmetry = ideal", c4_normality),
    (5, "quotients of S3", c5_quotients),
    (6, "conditional expectations", c6_expectations),
    (7, "round trips", c7_roundtrips),
    (8, "three membership criteria", c8_membership),
    (9, "dual inclusion", c9_dual_inclusion),
    (10, "co-unit on quotients", c10_counit),
    (11, "negative controls", c11_negative_controls),
]


def run_criterion(k, title, fn, out=sys.stdout):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported on its own line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {k:>2} ({title}): {detail} [{time.perf_counter() - t0:.1f}s]"
    print(line, file=out, flush=True)
    return ok, line


@pytest.mark.parametrize("k,title,fn", CRITERIA, ids=[f"criterion_{k:02d}" for k, _, _ in CRITERIA])
def test_acceptance(k, title, fn, capsys):
    with capsys.disabled():
        print()
        ok, line = run_criterion(k, title, fn)
    assert ok, line


if __name__ == "__main__":
    t0 = time.perf_counter()
    results = [run_criterion(*c)[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed in {time.perf_counter() - t0:.1f}s")
    sys.exit(0 if all(results) else 1)
