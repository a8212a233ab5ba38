"""Subgroups of S3 seen from both sides: group algebra and function algebra."""
import numpy as np

from qcorr.cocommutative import (build_function_algebra, group_algebra_of, indicator_state, lam,
                                 normality_symmetry_check, quotient_by_normal,
                                 restriction_subgroup, span_lambda)
from qcorr.correspondence import (build_quotient_subgroup, invariant_subalgebra_of, is_in_F0,
                                  mu_a_transform, x_trivial_ideal)
from qcorr.groups import enumerate_subgroups, named_group, subgroup_labels

G = named_group("S3")
ga = group_algebra_of(G)
fa = build_function_algebra(G)

print("group algebra side: X = span lambda(H)")
print(f"{'H':<22} {'normal':>6} {'symmetric':>9} {'J_X':>4} {'quotient':>8}")
for H in enumerate_subgroups(G):
    X = span_lambda(G, H, ga)
    chk = normality_symmetry_check(G, H, ga)
    J = x_trivial_ideal(ga, X)
    q = build_quotient_subgroup(ga, X)
    print(f"{'{' + ','.join(subgroup_labels(G, H)) + '}':<22} {chk['normal']!s:>6} "
          f"{chk['symmetric']!s:>9} {J.dim:>4} {q.dim:>8}")

H = tuple(sorted(G.index(x) for x in ("e", "(12)")))
r = quotient_by_normal(G, H, qg=ga)
print(f"\n<(12)> is not normal: its quotient is the dual of S3/K with |K| = {len(r['K'])}")

X = span_lambda(G, H, ga)
mu = mu_a_transform(ga, X, indicator_state(G, H), lam(G, "(123)"))
print("mu_a for 1_<(12)> and a = lambda(123):", np.round(mu.real, 12))
print("  still in F_0?", is_in_F0(ga, X, mu))

print("\nfunction algebra side: restriction C(S3) -> C(H)")
for H in enumerate_subgroups(G):
    s = restriction_subgroup(G, H, fa)
    X, ce = invariant_subalgebra_of(fa, s)
    print(f"  {s.name:<22} X_H dim {X.dim} (= number of cosets {G.order // len(H)})")
