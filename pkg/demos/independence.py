"""Rank, stationary independence, canonical bases and the generation check."""
from lascar_lab import linalg as la
from lascar_lab import rank as rk
from lascar_lab import stabilizers as sb
from lascar_lab.structures import VectorSpaceBackend

E0, E1, E2 = (la.basis_vector(i) for i in range(3))


def main():
    b = VectorSpaceBackend(2)
    for r in rk.check_stationary_axioms(b, samples=200):
        print(f"{r.axiom:14} {r.status}  ({r.exercised}/{r.samples} samples exercised)")
    bad = {r.axiom: r for r in rk.check_rank_axioms(b, samples=200, rank=rk.corrupt_rank(b))}
    print("corrupted rank, strict monotonicity:", bad["strict-monotonicity"].counterexample)

    A, B = b.acl([la.add(b.F, E0, E2)]), b.acl([E0, E1])
    print("cb(<e0+e2> / <e0, e1>) =", sorted(rk.canonical_base(b, A, B).elements))
    cert = rk.generation_check(b, b.acl([E0]), b.acl([E1]), 2)
    print(f"<G_(A) u G_(B)> has order {cert.order_generated}, G_(A n B) has order {cert.order_G_intersection}")
    print("k_M on GF(2)^3:", sb.k_M(b, 3))


if __name__ == "__main__":
    main()
