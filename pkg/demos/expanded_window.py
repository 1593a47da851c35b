"""The expanded structure on a small window: closed lines and partial isomorphisms."""
from lascar_lab import expanded as ex
from lascar_lab.structures import PureSetBackend, VectorSpaceBackend


def main():
    W = ex.build_window(VectorSpaceBackend(3), 1, 2)
    print(f"GF(3), lines in a plane: {len(W.closed_sets)} closed sets, {len(W.triples)} triples")
    for C in W.closed_sets:
        print("  line", C.ordered, "self-maps:", len(W.self_maps(C)))
    print("groupoid violations:", ex.groupoid_check(W))
    O = ex.orbital_structure(PureSetBackend(), 4, 3)
    print("orbital classes on a 4-point pure set, arities 1..3:", [len(O.classes(n)) for n in (1, 2, 3)])


if __name__ == "__main__":
    main()
