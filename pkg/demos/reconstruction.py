"""From automorphisms of the window back to the action, the kernel, and the geometry."""
import random

from lascar_lab import expanded as ex
from lascar_lab import linalg as la
from lascar_lab import reconstruction as rc
from lascar_lab.structures import VectorSpaceBackend


def main():
    rng = random.Random(0)
    b = VectorSpaceBackend(4)
    W = ex.build_window(b, 1, 2)
    alpha = rc.Conjugation(b, rc.random_semilinear(b, 2, rng, frobenius=1))
    g = b.random_automorphism(2, rng)
    print("GF(4) semilinear action survives the round trip:", bool(rc.check_roundtrip(alpha, g, W)))

    e0, e1 = la.basis_vector(0), la.basis_vector(1)
    P = ex.build_window(b, 1, pool=[e0, e1, la.add(b.F, e0, e1)])
    ke = rc.kernel_extract(rc.f_from_alpha(rc.Conjugation(b, rc.frobenius_map(4, 1)), P), 4, P)
    print("Frobenius gives f_i =", ke.common(), "on nonzero scalars (1, 2, 3)")
    print("realizable f_i values:", rc.realizable_kernel_values(P))

    W3 = ex.build_window(b, 1, 3)
    G = rc.geometry_of_window(W3)
    h = rc.random_semilinear(b, 3, rng)
    found = rc.semilinear_search(rc.phi_map(h, G, b), 4, 3, G, b)
    print(f"geometry automorphism lifted back: frobenius {found.frobenius} (original {h.frobenius})")
    rep = rc.diagram_check([alpha], W3, G, [rc.phi_map(h, G, b)])
    print("diagram commutes:", rep.commutes, " section:", rep.section)


if __name__ == "__main__":
    main()
