"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import json
import random
import time
from itertools import product

import pytest

from lascar_lab import expanded as ex
from lascar_lab import linalg as la
from lascar_lab import rank as rk
from lascar_lab import reconstruction as rc
from lascar_lab import report
from lascar_lab import stabilizers as sb
from lascar_lab.cli import main
from lascar_lab.groups import tables_isomorphic
from lascar_lab.structures import PureSetBackend, VectorSpaceBackend, make_backend

import oracles

E0, E1 = la.basis_vector(0), la.basis_vector(1)


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail
    return emit


def random_finite_backends(count, seed, max_aut=None):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        size, rels = oracles.random_structure(rng, 6, 2)
        b = make_backend({"kind": "finite", "structure": oracles.structure_json(size, rels)})
        if max_aut is None or len(b.group()) <= max_aut:
            out.append(b)
    return out


def test_01_galois_roundtrip(verdict):
    start = time.time()
    checked, bad = 0, []
    for q in (2, 3):
        b = VectorSpaceBackend(q)
        for n in range(1, 5):
            for K in b.closed_sets_in_window(n):
                checked += 1
                # fix_G needs room outside K to see that a vector moves
                if sb.galois_roundtrip(K, max(n, K.rank + 2)) != (True, True):
                    bad.append((q, n, K))
    rng = random.Random(1)
    for _ in range(50):
        size, rels = oracles.random_structure(rng, 6, 2)
        b = make_backend({"kind": "finite", "structure": oracles.structure_json(size, rels)})
        group = oracles.automorphisms(size, rels)
        for K in b.closed_sets():
            checked += 1
            # K must also be a fixed-point closure under the brute-force automorphism group
            if sb.galois_roundtrip(K) != (True, True) or K.elements != oracles.fixed_point_closure(
                    group, K.elements, size):
                bad.append(("finite", K))
    elapsed = time.time() - start
    verdict(1, not bad and elapsed < 60,
            f"Galois round trip on {checked} closed sets, {len(bad)} failures, {elapsed:.1f}s")


def test_02_subgroup_and_normality_agree_with_literal(verdict):
    start = time.time()
    backends = [make_backend({"kind": "finite", "size": n}) for n in range(2, 6)]
    backends += random_finite_backends(30, seed=2, max_aut=120)
    pairs = sub_bad = norm_bad = false_yes = 0
    example = None
    for b in backends:
        U = sb.descriptor_universe(b, b.closed_sets())
        for H1 in U:
            for H2 in U:
                pairs += 1
                for desc, lit, kind in ((sb.is_subgroup(H1, H2), sb.literal_subgroup(H1, H2), "subgroup"),
                                        (sb.is_normal_in(H1, H2), sb.literal_normal(H1, H2), "normal")):
                    if desc == lit:
                        continue
                    false_yes += desc
                    if kind == "subgroup":
                        sub_bad += 1
                    else:
                        norm_bad += 1
                    if example is None:
                        example = (kind, sorted(H1.K.elements), len(H1.group()),
                                   sorted(H2.K.elements), len(H2.group()))
    elapsed = time.time() - start
    ok = sub_bad == 0 and norm_bad == 0 and elapsed < 120
    verdict(2, ok, f"{pairs} descriptor pairs on {len(backends)} backends, {sub_bad} subgroup and "
                   f"{norm_bad} normality disagreements ({false_yes} false yes), first {example}, "
                   f"{elapsed:.1f}s")


def test_03_pointwise_stabilizers_are_the_l_trivial_descriptors(verdict):
    windows = [(VectorSpaceBackend(2), 2), (VectorSpaceBackend(3), 2), (VectorSpaceBackend(2), 3),
               (PureSetBackend(), 3), (PureSetBackend(), 4)]
    windows += [(make_backend({"kind": "finite", "size": n}), None) for n in (3, 4)]
    windows += [(b, None) for b in random_finite_backends(10, seed=3, max_aut=48)]
    total, bad = 0, 0
    for b, n in windows:
        U = sb.descriptor_universe(b, b.closed_sets_in_window(n) if n else b.closed_sets())
        for H in U:
            total += 1
            bad += sb.is_pointwise_stabilizer(H, U) != H.is_pointwise
    verdict(3, bad == 0, f"{total} descriptors in {len(windows)} universes, {bad} mismatches")


def test_04_sandwich_order_identity(verdict):
    backends = [make_backend({"kind": "finite", "size": n}) for n in range(1, 6)]
    backends += random_finite_backends(40, seed=4)
    sets = order_bad = tables = iso_bad = 0
    for b in backends:
        for K in b.closed_sets():
            sets += 1
            aut = b.aut_M_group(K)
            PK = sb.pointwise_elements(b, K)
            GK = sb.setwise_elements(b, K)
            order_bad += len(GK) != len(PK) * len(aut)
            if len(aut) <= 24:
                tables += 1
                iso_bad += tables_isomorphic(sb.literal_quotient_table(b, K), sb.aut_M_table(K)) is None
    # on a vector window the quotient comes from the descriptor universe alone
    b = VectorSpaceBackend(2)
    U = sb.descriptor_universe(b, b.closed_sets_in_window(2))
    for K in b.closed_sets_in_window(2):
        tables += 1
        _, reps, table = sb.aut_M_K_iso_detect(sb.pointwise(K), U)
        iso_bad += len(reps) != len(b.aut_M_group(K)) or tables_isomorphic(table, sb.aut_M_table(K)) is None
    ok = order_bad == 0 and iso_bad == 0
    verdict(4, ok, f"{sets} closed sets, {order_bad} order failures, {iso_bad}/{tables} quotient tables "
                   f"not isomorphic to Aut_M(K)")


def _dense_matrix(g, n):
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, row in enumerate(g.matrix):
        for j, x in enumerate(row):
            M[i][j] = x
    return M


def test_05_lascar_witnesses(verdict):
    start = time.time()
    rng = random.Random(5)
    n = 3
    pool = []
    for q in (2, 3):
        b = VectorSpaceBackend(q)
        closed = b.closed_sets_in_window(n)
        pool += [(b, K, S) for K in closed for S in closed if not S <= K]
    bad = []
    for b, K, S in rng.sample(pool, 100):
        w = sb.lascar_condition1(K, S)
        if not w or not sb.verify_lascar_witness(K, S, w.g, w.h):
            bad.append((K, S))
            continue
        # second route on dense matrices: g^-1 h g (S) != S iff h g (S) != g (S)
        p = b.q
        size = max(n, w.g.size, w.h.size)
        G, H = _dense_matrix(w.g, size), _dense_matrix(w.h, size)
        dense = lambda v: tuple(la.to_dense(v, size))
        S_dense = [dense(v) for v in b.basis(S)]
        gS = [oracles.mat_vec(p, G, v) for v in S_dense]
        hgS = [oracles.mat_vec(p, H, v) for v in gS]
        fixes_K = all(oracles.mat_vec(p, G, dense(v)) == dense(v) for v in K.elements)
        fixes_S = all(oracles.mat_vec(p, H, v) == v for v in S_dense)
        moved = oracles.rank_dense(p, gS + hgS, size) > oracles.rank_dense(p, gS, size)
        if not (fixes_K and fixes_S and moved):
            bad.append((K, S))
    elapsed = time.time() - start
    verdict(5, not bad and elapsed < 30, f"100 pairs S not in K, {len(bad)} unverified witnesses, {elapsed:.1f}s")


def test_06_stationary_independence_axioms(verdict):
    failures, counts = [], {}
    for q in (2, 3):
        for r in rk.check_stationary_axioms(VectorSpaceBackend(q), samples=500, seed=6):
            counts[r.axiom] = counts.get(r.axiom, 0) + r.samples
            if not r.passed:
                failures.append((q, r.axiom))
    b = VectorSpaceBackend(2)
    bad_rank = rk.corrupt_rank(b)
    mono = {r.axiom: r for r in rk.check_rank_axioms(b, samples=500, rank=bad_rank)}["strict-monotonicity"]
    cex = mono.counterexample
    concrete = False
    if cex:
        A = [b.element_from_json(x) for x in cex["A"]]
        B = [b.element_from_json(x) for x in cex["B"]]
        concrete = b.acl(A) < b.acl(B) and bad_rank(A) >= bad_rank(B)
    ok = not failures and min(counts.values()) >= 500 and not mono.passed and concrete
    verdict(6, ok, f"{len(counts)} axioms x {min(counts.values())} samples, failures {failures}; "
                   f"corrupted rank counterexample {cex}")


def test_07_generation(verdict):
    start = time.time()
    records, bad = [], []
    for p, n in ((2, 3), (3, 2)):
        b = VectorSpaceBackend(p)
        subs = b.closed_sets_in_window(n)
        for A, B in product(subs, repeat=2):
            cert = rk.generation_check(b, A, B, n)
            dense = lambda K: {tuple(la.to_dense(v, n)) for v in K.elements}
            oracle = _generated_order_oracle(p, n, dense(A), dense(B))
            mine = (cert.order_generated, cert.order_G_intersection)
            records.append({"q": p, "A": sorted(dense(A)), "B": sorted(dense(B)), "orders": mine})
            if mine != oracle or not cert.equal:
                bad.append(records[-1])
    two_lines = rk.generation_check(VectorSpaceBackend(2), VectorSpaceBackend(2).acl([E0]),
                                    VectorSpaceBackend(2).acl([E1]), 2)
    frozen = (two_lines.order_generated, two_lines.order_G_intersection) == (6, 6)
    elapsed = time.time() - start
    assert json.dumps(records)
    verdict(7, not bad and frozen and elapsed < 300,
            f"{len(records)} subspace pairs recorded, {len(bad)} mismatches, GF(2)^2 two lines order "
            f"{two_lines.order_generated}, {elapsed:.1f}s")


def _generated_order_oracle(p, n, A, B):
    G = oracles.gl(p, n)
    fixes = lambda M, S: all(oracles.mat_vec(p, M, v) == tuple(v) for v in S)
    gens = [M for M in G if fixes(M, A) or fixes(M, B)]
    mul = lambda X, Y: tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(n)) % p for j in range(n))
                             for i in range(n))
    one = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen, frontier = {one}, [one]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = mul(x, tuple(map(tuple, g)))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen), sum(1 for M in G if fixes(M, A & B))


def test_08_expanded_window(verdict):
    W = ex.build_window(VectorSpaceBackend(3), 1, 2)
    lines = len(W.closed_sets)
    self_maps = sorted({len(W.self_maps(C)) for C in W.closed_sets})
    laws = ex.groupoid_check(W, budget=10 ** 9)
    ok = lines == 4 and self_maps == [2] and not laws and not ex.well_formed(W)
    verdict(8, ok, f"GF(3) k=1 size 2: {lines} lines, self-maps per line {self_maps}, "
                   f"{len(W.triples)} triples, groupoid violations {laws[:1]}")


def test_09_reconstruction_roundtrip(verdict):
    start = time.time()
    rng = random.Random(9)
    roundtrips, pairs, bad = 0, 0, []
    for q in (2, 4):
        b = VectorSpaceBackend(q)
        W = ex.build_window(b, 1, 2)
        actions = [rc.Conjugation(b, rc.random_semilinear(b, 2, rng, frobenius=0)) for _ in range(20)]
        if q == 4:
            actions += [rc.Conjugation(b, rc.random_semilinear(b, 2, rng, frobenius=1)) for _ in range(5)]
        for alpha in actions:
            g = b.random_automorphism(2, rng)
            roundtrips += 1
            if not rc.check_roundtrip(alpha, g, W):
                bad.append(("roundtrip", q, alpha.to_json()))
        for alpha, beta in product(actions, repeat=2):
            pairs += 1
            if not rc.check_functoriality(alpha, beta, W):
                bad.append(("functoriality", q, alpha.to_json(), beta.to_json()))
    elapsed = time.time() - start
    verdict(9, not bad and elapsed < 60,
            f"{roundtrips} round trips, {pairs} functoriality pairs, {len(bad)} failures, {elapsed:.1f}s")


def test_10_kernel_laws(verdict):
    b = VectorSpaceBackend(4)
    W = ex.build_window(b, 1, pool=[E0, E1, la.add(b.F, E0, E1)])
    f = rc.f_from_alpha(rc.Conjugation(b, rc.frobenius_map(4, 1)), W)
    ke = rc.kernel_extract(f, 4, W)
    squaring = tuple(oracles.gf_mul(4, x, x) for x in range(1, 4))
    per_line = sorted(set(ke.per_line.values()))
    values = rc.realizable_kernel_values(W)
    bound = rc.aut_of_cyclic_order(3)
    ok = per_line == [squaring] and ke.common() == squaring and bound == 2 and len(values) <= bound
    verdict(10, ok, f"f_i on {len(ke.per_line)} lines = {per_line}, squaring {squaring}, "
                    f"realizable values {values} (bound {bound})")


def test_11_diagram_and_section(verdict):
    rng = random.Random(11)
    commutes, sections, failures = [], [], []
    for q, count, nsec in ((2, 17, 7), (3, 17, 7), (4, 16, 6)):
        b = VectorSpaceBackend(q)
        W = ex.build_window(b, 1, 3)
        G = rc.geometry_of_window(W)
        actions = [rc.Conjugation(b, rc.random_semilinear(b, 3, rng)) for _ in range(count)]
        samples = [rc.phi_map(rc.random_semilinear(b, 3, rng), G, b) for _ in range(nsec)]
        rep = rc.diagram_check(actions, W, G, samples)
        commutes += rep.commutes
        sections += rep.section
        failures += rep.failures
    ok = len(commutes) == 50 and all(commutes) and len(sections) == 20 and all(sections) and not failures
    verdict(11, ok, f"diagram commutes {sum(commutes)}/{len(commutes)}, "
                    f"section {sum(sections)}/{len(sections)}")


def test_12_k_m_is_one_for_pregeometries(verdict):
    cases = [("GF(2)", VectorSpaceBackend(2), n) for n in (1, 2, 3)]
    cases += [("GF(3)", VectorSpaceBackend(3), n) for n in (1, 2)]
    cases += [("GF(4)", VectorSpaceBackend(4), 2)]
    cases += [("pure", PureSetBackend(), n) for n in range(1, 6)]
    values = {f"{name}/{n}": sb.k_M(b, n) for name, b, n in cases}
    verdict(12, set(values.values()) == {1}, f"k_M by window {values}")


def test_13_determinism(verdict, tmp_path):
    configs = [{"backend": {"kind": "vector", "q": 2}, "seed": 13},
               {"backend": {"kind": "finite", "size": 4}, "seed": 13},
               {"backend": {"kind": "pure"}, "seed": 13}]
    same = []
    for i, config in enumerate(configs):
        path = tmp_path / f"c{i}.json"
        path.write_text(json.dumps(config))
        outs = []
        for run in ("a", "b"):
            out = tmp_path / f"r{i}{run}.json"
            main(["run", "--config", str(path), "--json", str(out)])
            outs.append(report.canonical_json(json.loads(out.read_text())["canonical"]).encode())
        same.append(outs[0] == outs[1])
    verdict(13, all(same), f"byte-identical canonical sections for {sum(same)}/{len(same)} configs")
