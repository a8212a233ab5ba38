"""The Kac-Paljutkin quantum group: quantum subgroups, expectations, round trips."""
from qcorr.correspondence import (enumerate_quantum_subgroups, expectation_residuals,
                                  invariant_subalgebra_of, is_symmetric, roundtrip_subalgebra,
                                  roundtrip_subgroup)
from qcorr.instances import build_kac_paljutkin
from qcorr.qgroup import biduality_residuals, build_dual

kp = build_kac_paljutkin()
print(f"KP: dim {kp.dim}, blocks {kp.report.notes['blocks']}, "
      f"worst axiom residual {max(kp.report.residuals.values()):.1e}")
dual = build_dual(kp)
print(f"dual: blocks {dual.dual_qg.report.notes['blocks']}, "
      f"worst biduality residual {max(biduality_residuals(dual).values()):.1e}")

subs = enumerate_quantum_subgroups(kp)
print(f"\n{len(subs)} quantum subgroups")
for s in subs:
    X, ce = invariant_subalgebra_of(kp, s)
    worst = max(expectation_residuals(kp, ce).values())
    sym, _ = is_symmetric(kp, X)
    a = roundtrip_subgroup(kp, s).roundtrip
    b = roundtrip_subalgebra(kp, X).roundtrip
    print(f"  quotient dim {s.dim}: X_H dim {X.dim}, symmetric {sym}, "
          f"expectation residual {worst:.1e}, kernels equal {a['kernel_equal']}, "
          f"X recovered {b['subalgebra_equal']}")
