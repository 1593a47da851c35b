"""Closed sets, their stabilizers, and the Galois round trip on three backends."""
from lascar_lab import linalg as la
from lascar_lab import stabilizers as sb
from lascar_lab.structures import PureSetBackend, VectorSpaceBackend, make_backend


def main():
    b = VectorSpaceBackend(3)
    K = b.acl([la.basis_vector(0)])
    print(f"GF(3): acl(e0) has {len(K.elements)} elements and rank {K.rank}")
    print("  Fix_G(G_(K)) == K and G_(Fix_G(G_(K))) == G_(K):", sb.galois_roundtrip(K, 3))
    print("  G_(K) normal in G_{K}:", sb.is_normal_in(sb.pointwise(K), sb.setwise(K)))

    p = PureSetBackend()
    print("pure set: acl({0, 3}) =", sorted(p.acl([0, 3]).elements))

    cycle = make_backend({"kind": "finite", "structure": {"size": 3, "relations": [
        {"arity": 2, "tuples": [[0, 1], [1, 2], [2, 0]]}]}})
    print("directed 3-cycle closed sets:", [sorted(C.elements) for C in cycle.closed_sets()])
    for C in cycle.closed_sets():
        print(f"  {sorted(C.elements)}: |G_{{K}}| = {len(sb.setwise_elements(cycle, C))}, "
              f"|G_(K)| = {len(sb.pointwise_elements(cycle, C))}, |Aut_M(K)| = {len(cycle.aut_M_group(C))}")


if __name__ == "__main__":
    main()
