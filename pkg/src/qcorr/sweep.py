"""Corpus sweep: every correspondence check on every instance.

Each instance yields a row of named checks, each a ``(passed, worst)``
pair.  A failure to build an instance fails its row without touching the
others.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import get_tol, rng
from .correspondence import (build_dual_inclusion, coamenability_residual,
                             enumerate_quantum_subgroups, expectation_residuals,
                             invariant_subalgebra_of, is_left_invariant, is_symmetric,
                             left_invariance_residual, random_state_near, roundtrip_subalgebra,
                             roundtrip_subgroup, membership_verdicts)
from .errors import QCorrError
from .instances import build_instance, corpus, instance_name
from .qgroup import biduality_residuals, build_dual

CHECKS = ("axioms", "bidual", "expectation", "roundtrip", "dual inclusion", "counit", "F0 agree")


@dataclass
class InstanceResult:
    name: str
    checks: dict = field(default_factory=dict)  # name -> (passed, worst residual)
    subgroups: int = 0
    error: str = ""
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.error and all(ok for ok, _ in self.checks.values())

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "subgroups": self.subgroups,
                "error": self.error, "seconds": round(self.seconds, 3),
                "checks": {k: {"passed": bool(ok), "worst": float(w)}
                           for k, (ok, w) in self.checks.items()}}


def _worst(values):
    return max((float(v) for v in values), default=0.0)


def check_instance(qg, tol=None, states=20, seed=None):
    """All checks on a validated quantum group; returns ``{check: (passed, worst)}``."""
    tol = get_tol(tol)
    gen = rng(seed)
    out = {}
    w = _worst(qg.report.residuals.values())
    out["axioms"] = (qg.report.passed, w)
    w = _worst(biduality_residuals(build_dual(qg, tol), tol).values())
    out["bidual"] = (w <= tol, w)

    subgroups = enumerate_quantum_subgroups(qg, tol)
    exp_ok, exp_w = True, 0.0
    rt_ok, rt_w = True, 0.0
    di_w = ce_w = 0.0
    agree, total = 0, 0
    for s in subgroups:
        X, ce = invariant_subalgebra_of(qg, s, tol)
        sym, sres = is_symmetric(qg, X, tol)
        inv = is_left_invariant(qg, X, tol)
        res = expectation_residuals(qg, ce, tol)
        res["left invariance"] = left_invariance_residual(qg, X, tol)
        res["symmetry"] = sres
        exp_ok &= bool(sym and inv and all(v <= tol for v in res.values()))
        exp_w = max(exp_w, _worst(res.values()))

        a = roundtrip_subgroup(qg, s, tol)
        b = roundtrip_subalgebra(qg, X, tol)
        rt_ok &= bool(a.roundtrip["kernel_equal"] and a.roundtrip["isomorphism"]
                      and b.roundtrip["subalgebra_equal"])
        rt_w = max(rt_w, _worst(a.roundtrip["residuals"].values()),
                   _worst(b.roundtrip["residuals"].values()))

        di_w = max(di_w, _worst(build_dual_inclusion(qg, s, tol).residuals.values()))
        ce_w = max(ce_w, coamenability_residual(s))

        for _ in range(states):
            mu = random_state_near(qg, X, gen, tol)
            v = membership_verdicts(qg, X, s, mu, tol)
            agree += v[0] == v[1] == v[2]
            total += 1
    out["expectation"] = (exp_ok, exp_w)
    out["roundtrip"] = (rt_ok, rt_w)
    out["dual inclusion"] = (di_w <= tol, di_w)
    out["counit"] = (ce_w <= tol, ce_w)
    out["F0 agree"] = (agree == total, float(total - agree))
    return out, len(subgroups)


def run_spec(spec, tol=None, states=20, seed=None) -> InstanceResult:
    try:
        name = instance_name(spec)
    except (KeyError, TypeError, AttributeError):
        name = "?"
    res = InstanceResult(name)
    t0 = time.perf_counter()
    try:
        qg = build_instance(spec, tol)
        res.checks, res.subgroups = check_instance(qg, tol, states, seed)
    except (QCorrError, KeyError, ValueError, TypeError) as exc:
        res.error = f"{type(exc).__name__}: {exc}"
    res.seconds = time.perf_counter() - t0
    return res


def sweep(specs=None, tol=None, states=20, seed=None, jobs=1):
    """Run :func:`run_spec` over ``specs`` (default: the built-in corpus), in order."""
    specs = corpus() if specs is None else list(specs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(run_spec, s, tol, states, seed) for s in specs]
            return [f.result() for f in futs]
    return [run_spec(s, tol, states, seed) for s in specs]


def matrix_text(results):
    """Pass/fail matrix, one row per instance."""
    cols = list(CHECKS)
    width = max([len(r.name) for r in results] + [8])
    head = f"{'instance':<{width}}  " + "  ".join(f"{c:>14}" for c in cols) + "    time"
    lines = [head]
    for r in results:
        if r.error:
            lines.append(f"{r.name:<{width}}  ERROR {r.error}")
            continue
        cells = []
        for c in cols:
            ok, w = r.checks.get(c, (False, np.inf))
            cells.append(f"{('ok ' if ok else 'FAIL') + f' {w:.0e}':>14}")
        lines.append(f"{r.name:<{width}}  " + "  ".join(cells) + f"  {r.seconds:5.2f}s")
    return "\n".join(lines)
