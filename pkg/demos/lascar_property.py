"""Both halves of the Lascar property: witnesses on vector spaces, supports on finite sets."""
from lascar_lab import linalg as la
from lascar_lab import stabilizers as sb
from lascar_lab.structures import VectorSpaceBackend, make_backend


def main():
    b = VectorSpaceBackend(2)
    K, S = b.acl([la.basis_vector(0)]), b.acl([la.basis_vector(1)])
    w = sb.lascar_condition1(K, S)
    print("GF(2): witness g, h for K = <e0>, S = <e1>")
    print("  g =", w.g.to_json(), " h =", w.h.to_json())
    print("  verified by direct images:", sb.verify_lascar_witness(K, S, w.g, w.h))

    for size in (3, 4):
        rep = sb.lascar_condition2(make_backend({"kind": "finite", "size": size}))
        print(f"Sym({size}): every subgroup has a least support: {rep.verdict}")
        for e in rep.failures:
            print(f"  order {e.order} group sandwiched by", [sorted(C.elements) for C in e.candidates])


if __name__ == "__main__":
    main()
