"""Named verification suites, run configuration and report rendering."""

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import jsonschema

from . import linalg as la
from . import rank as rk
from . import stabilizers as st
from .errors import (Inapplicable, LascarLabError, NoSupport, NotAnIsomorphism, UsageError)
from .expanded import build_window, groupoid_check, orbital_structure, well_formed
from .gf import SUPPORTED_ORDERS
from .groups import tables_isomorphic
from .reconstruction import (Conjugation, aut_of_cyclic_order, diagram_check, frobenius_map,
                             geometry_of_window, kernel_extract, f_from_alpha, phi_map,
                             random_semilinear, realizable_kernel_values, check_functoriality,
                             check_roundtrip)
from .structures import make_backend

SUITES = {
    "galois-roundtrip": "Fix_G(Fix_M(K)) = K and Fix_M(Fix_G(G_(K))) = G_(K) on every closed set of the window",
    "stab-characterizations": "subgroup, normality and pointwise-stabilizer tests on descriptors; G_{K}/G_(K) vs Aut_M(K)",
    "lascar-verify": "condition (1) witnesses g, h with g^-1 h g (S) != S; condition (2) support scan on finite backends",
    "rank-axioms": "dimension-function axioms: invariance, submodularity, strict monotonicity, finiteness",
    "stationary-axioms": "stationary independence: compatibility, invariance, monotonicity, transitivity, symmetry, existence, stationarity",
    "canonical-base": "least closed C inside B with A independent from B over C",
    "generation": "<G_(A) u G_(B)> = G_(A n B) inside GL(n, q)",
    "pregeometry": "closure axioms with exchange, and the canonical geometry of points",
    "expanded-window": "window of triples (K, p, K'): counts, identity and inverse closure, groupoid laws",
    "reconstruction-roundtrip": "alpha -> f_alpha -> alpha on the window, and f_(beta alpha) = f_beta f_alpha",
    "kernel-cor16": "per-line scalar maps f_i of a window map fixing every line: multiplicative and uniform",
    "diagram-thm13": "phi_H = pi . gamma on samples, and pi(conjugation by g-hat) = g for semilinear g-hat",
    "orbital": "orbit equivalence relations on n-tuples for backends whose points are closed",
}

INJECTIONS = ("rank-monotonicity", "exchange", "galois-roundtrip", "lascar-witness")

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["backend"],
    "additionalProperties": False,
    "properties": {
        "backend": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["vector", "pure", "finite"]},
                "q": {"enum": list(SUPPORTED_ORDERS)},
                "size": {"type": "integer", "minimum": 1, "maximum": 10},
                "bound": {"type": "integer", "minimum": 1},
                "group_cap": {"type": "integer", "minimum": 1},
                "structure": {
                    "type": "object",
                    "required": ["size"],
                    "properties": {
                        "size": {"type": "integer", "minimum": 1},
                        "relations": {"type": "array", "items": {
                            "type": "object", "required": ["arity", "tuples"],
                            "properties": {"arity": {"type": "integer", "minimum": 1},
                                           "tuples": {"type": "array"}}}},
                    },
                },
            },
        },
        "suites": {"type": "array", "items": {"enum": list(SUITES)}},
        "window": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"size": {"type": "integer", "minimum": 1, "maximum": 8},
                           "k": {"type": "integer", "minimum": 1}},
        },
        "samples": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "caps": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"triples": {"type": "integer", "minimum": 1},
                           "group_order": {"type": "integer", "minimum": 1}},
        },
        "inject": {"enum": list(INJECTIONS) + [None]},
    },
}

DEFAULTS = {"window": {"size": 3, "k": 1}, "samples": 100, "seed": 0,
            "caps": {"triples": 100000, "group_order": 5040}, "inject": None}


def expand_shorthand(config):
    """{"backend": "vector", "q": 2} -> {"backend": {"kind": "vector", "q": 2}}."""
    if not isinstance(config, dict) or not isinstance(config.get("backend"), str):
        return config
    out = dict(config)
    backend = {"kind": out.pop("backend")}
    for key in ("q", "size"):
        if key in out:
            backend[key] = out.pop(key)
    out["backend"] = backend
    return out


def validate_config(config):
    config = expand_shorthand(config)
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid config: {exc.message}") from None
    if config["backend"]["kind"] == "vector" and "q" not in config["backend"]:
        raise UsageError("invalid config: vector backend needs q")
    out = json.loads(json.dumps(config))
    for key, val in DEFAULTS.items():
        if isinstance(val, dict):
            out[key] = {**val, **out.get(key, {})}
        else:
            out.setdefault(key, val)
    out.setdefault("suites", list(SUITES))
    return out


@dataclass
class CheckRecord:
    name: str
    status: str  # "pass", "fail" or "skip"
    counterexample: object = None
    details: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "status": self.status,
                "counterexample": self.counterexample, "details": self.details}


@dataclass
class SuiteReport:
    suite: str
    checks: list
    timing: float = 0.0

    @property
    def verdict(self):
        statuses = {c.status for c in self.checks}
        if "fail" in statuses:
            return "fail"
        if statuses <= {"skip"}:
            return "skip"
        return "pass"

    def to_json(self):
        return {"suite": self.suite, "verdict": self.verdict,
                "checks": [c.to_json() for c in self.checks]}


def _check(name, ok, cex=None, **details):
    return CheckRecord(name, "pass" if ok else "fail", None if ok else cex, details)


def _skip(name, reason):
    return CheckRecord(name, "skip", None, {"reason": reason})


def _closed_json(K):
    b = K.backend
    return [b.element_to_json(x) for x in K.generators]


class Context:
    def __init__(self, config):
        self.config = config
        self.backend = make_backend(config["backend"])
        self.size = config["window"]["size"]
        self.k = config["window"]["k"]
        self.samples = config["samples"]
        self.seed = config["seed"]
        self.caps = config["caps"]
        self.inject = config["inject"]

    def rng(self, suite):
        # per-suite stream so suite order and selection do not change results
        return random.Random(f"{self.seed}:{suite}")


# suites

def suite_galois_roundtrip(ctx):
    b = ctx.backend
    checks = []
    closed = b.closed_sets_in_window(ctx.size)
    bad = []
    for K in closed:
        window = max(ctx.size, K.rank + 2) if b.kind != "finite" else None
        first, second = st.galois_roundtrip(K, window)
        if ctx.inject == "galois-roundtrip" and K == closed[-1]:
            first = False
        if not (first and second):
            bad.append({"K": _closed_json(K), "fix_fix_K": first, "fix_fix_G": second})
    checks.append(_check("roundtrip-all-closed-sets", not bad, bad[:1], closed_sets=len(closed)))
    return checks


def suite_stab_characterizations(ctx):
    b = ctx.backend
    cap = ctx.caps["group_order"]
    closed = b.closed_sets_in_window(ctx.size if b.kind != "vector" else min(ctx.size, 2))
    universe = st.descriptor_universe(b, closed, cap)
    checks = []
    bad = [H for H in universe if st.is_pointwise_stabilizer(H, universe) != H.is_pointwise]
    checks.append(_check("pointwise-iff-L-trivial", not bad,
                         [{"K": _closed_json(H.K), "L_order": len(H.group())} for H in bad[:1]],
                         descriptors=len(universe)))
    normal_bad = [K for K in closed if not st.is_normal_in(st.pointwise(K), st.setwise(K))]
    checks.append(_check("pointwise-normal-in-setwise", not normal_bad,
                         [_closed_json(K) for K in normal_bad[:1]]))
    if b.kind == "finite":
        sub_bad, norm_bad, pairs = [], [], 0
        for H1 in universe:
            for H2 in universe:
                pairs += 1
                if st.is_subgroup(H1, H2) != st.literal_subgroup(H1, H2):
                    sub_bad.append((H1, H2))
                if st.is_normal_in(H1, H2) != st.literal_normal(H1, H2):
                    norm_bad.append((H1, H2))
        fmt = lambda pr: [{"K": _closed_json(H.K), "L_order": len(H.group())} for H in pr]
        checks.append(_check("subgroup-vs-literal", not sub_bad, fmt(sub_bad[0]) if sub_bad else None,
                             pairs=pairs, disagreements=len(sub_bad)))
        checks.append(_check("normality-vs-literal", not norm_bad, fmt(norm_bad[0]) if norm_bad else None,
                             pairs=pairs, disagreements=len(norm_bad)))
        order_bad, iso_bad = [], []
        for K in closed:
            nset = len(st.setwise_elements(b, K))
            npt = len(st.pointwise_elements(b, K))
            naut = len(b.aut_M_group(K))
            if nset != npt * naut:
                order_bad.append({"K": _closed_json(K), "setwise": nset, "pointwise": npt, "aut": naut})
            if naut <= 24 and tables_isomorphic(st.literal_quotient_table(b, K), st.aut_M_table(K)) is None:
                iso_bad.append({"K": _closed_json(K)})
        checks.append(_check("sandwich-order-identity", not order_bad, order_bad[:1]))
        checks.append(_check("quotient-iso-aut", not iso_bad, iso_bad[:1]))
    else:
        bad = []
        for K in closed:
            Hmax, reps, table = st.aut_M_K_iso_detect(st.pointwise(K), universe)
            if len(reps) != len(b.aut_M_group(K)):
                bad.append({"K": _closed_json(K), "quotient": len(reps)})
        checks.append(_check("quotient-order-is-aut", not bad, bad[:1]))
    return checks


def suite_lascar_verify(ctx):
    b = ctx.backend
    rng = ctx.rng("lascar-verify")
    checks = []
    closed = b.closed_sets_in_window(ctx.size)
    pairs = [(K, S) for K in closed for S in closed if not S <= K]
    if len(pairs) > ctx.samples:
        pairs = [pairs[i] for i in sorted(rng.sample(range(len(pairs)), ctx.samples))]
    bad = []
    for K, S in pairs:
        w = st.lascar_condition1(K, S)
        ok = bool(w) and w.verify(K, S)
        if ctx.inject == "lascar-witness" and (K, S) == pairs[0]:
            ok = False
        if not ok:
            bad.append({"K": _closed_json(K), "S": _closed_json(S),
                        "reason": getattr(w, "reason", "witness rejected")})
    checks.append(_check("condition-1-witnesses", not bad, bad[:1], pairs=len(pairs)))
    if b.kind == "finite":
        try:
            rep = st.lascar_condition2(b, ctx.caps["group_order"])
            cex = None
            if not rep.verdict:
                e = rep.failures[0]
                cex = {"subgroup_order": e.order,
                       "minimal_candidates": [sorted(C.elements) for C in e.candidates]}
            checks.append(_check("condition-2-support-scan", rep.verdict, cex,
                                 subgroups=len(rep.entries), unsupported=len(rep.failures)))
        except LascarLabError as exc:
            checks.append(_skip("condition-2-support-scan", str(exc)))
    else:
        checks.append(_skip("condition-2-support-scan", "explicit subgroup scan needs a finite backend"))
    return checks


def _axiom_checks(results):
    return [CheckRecord(r.axiom, r.status, r.counterexample,
                        {"samples": r.samples, "exercised": r.exercised, **({"note": r.note} if r.note else {})})
            for r in results]


def suite_rank_axioms(ctx):
    b = ctx.backend
    if b.kind == "finite":
        return [_skip("rank-axioms", "no rank function on finite structures")]
    rank = rk.corrupt_rank(b) if ctx.inject == "rank-monotonicity" else None
    return _axiom_checks(rk.check_rank_axioms(b, ctx.samples, rank=rank, seed=ctx.seed,
                                              window=max(ctx.size, 3)))


def suite_stationary_axioms(ctx):
    b = ctx.backend
    if b.kind == "finite":
        return [_skip("stationary-axioms", "no rank function on finite structures")]
    rank = rk.corrupt_rank(b) if ctx.inject == "rank-monotonicity" else None
    return _axiom_checks(rk.check_stationary_axioms(b, ctx.samples, rank=rank, seed=ctx.seed,
                                                    window=max(ctx.size, 4)))


def suite_canonical_base(ctx):
    b = ctx.backend
    if b.kind == "finite":
        return [_skip("canonical-base", "not attempted: no rank function on this backend")]
    rng = ctx.rng("canonical-base")
    bad, n = [], 0
    for _ in range(ctx.samples):
        A = rk.random_closed(b, rng, ctx.size, 2)
        B = rk.random_closed(b, rng, ctx.size, 3)
        n += 1
        try:
            C = rk.canonical_base(b, A, B)
        except LascarLabError as exc:
            bad.append({"A": _closed_json(A), "B": _closed_json(B), "error": str(exc)})
            continue
        inter = A.elements & B.elements
        ok = C <= B and rk.indep(b, A, C, B).verdict and C.elements == inter
        if not ok:
            bad.append({"A": _closed_json(A), "B": _closed_json(B), "cb": _closed_json(C)})
    return [_check("least-independent-base", not bad, bad[:1], samples=n)]


def suite_generation(ctx):
    b = ctx.backend
    if b.kind != "vector":
        return [_skip("generation", "runs inside GL(n, q)")]
    # brute force over GL(n, q): GF(2)^3 and GF(q)^2 are the tractable ambients
    n = min(ctx.size, 3 if b.q == 2 else 2)
    subs = b.closed_sets_in_window(n)
    rows, bad, not_contained = [], [], []
    for A, B in combinations(subs, 2):
        cert = rk.generation_check(b, A, B, n)
        rows.append(cert)
        if not cert.contained:
            not_contained.append({"A": _closed_json(A), "B": _closed_json(B)})
        if not cert.equal:
            bad.append({"A": _closed_json(A), "B": _closed_json(B),
                        "generated": cert.order_generated, "G_AnB": cert.order_G_intersection})
    return [_check("generated-inside-intersection-stabilizer", not not_contained, not_contained[:1],
                   pairs=len(rows), ambient=f"GL({n},{b.q})"),
            _check("generated-equals-intersection-stabilizer", not bad, bad[:1],
                   pairs=len(rows), unequal=len(bad))]


def suite_pregeometry(ctx):
    b = ctx.backend
    checks = []
    system = rk.path_convexity(3) if ctx.inject == "exchange" else rk.backend_closure_system(b, ctx.size)
    res = rk.pregeometry_check(system, ctx.samples, seed=ctx.seed)
    for r in res:
        if r.axiom == "geometry":
            continue
        checks.append(CheckRecord(r.axiom, r.status, r.counterexample, {"samples": r.samples}))
    if b.kind in ("vector", "pure"):
        G = rk.canonical_geometry(b, ctx.size)
        gres = rk.pregeometry_check(G.as_closure_system(), ctx.samples, seed=ctx.seed)
        geo = next(r for r in gres if r.axiom == "geometry")
        checks.append(CheckRecord("canonical-geometry-points-closed", geo.status,
                                  geo.counterexample, {"points": len(G.points)}))
        ok = rk.pregeometry_passed(gres)
        checks.append(_check("canonical-geometry-exchange", ok,
                             next((r.counterexample for r in gres if not r.passed and r.axiom != "geometry"), None)))
    chain = rk.noetherian_check(b, ctx.size)
    checks.append(_check("noetherian-chains", chain.ok, {"max_chain": chain.max_chain},
                         max_chain=chain.max_chain, bound=chain.bound))
    return checks


def suite_expanded_window(ctx):
    b = ctx.backend
    W = build_window(b, ctx.k, min(ctx.size, 3), cap=ctx.caps["triples"])
    checks = [_check("well-formed", not well_formed(W), None,
                     closed_sets=len(W.closed_sets), triples=len(W.triples))]
    problems = groupoid_check(W)
    checks.append(_check("groupoid-laws", not problems,
                         [p[0] for p in problems[:1]] or None))
    counts = sorted({len(W.self_maps(C)) for C in W.closed_sets})
    expected = sorted({len(b.aut_M_group(C)) for C in W.closed_sets})
    checks.append(_check("self-maps-are-aut", counts == expected, {"counts": counts},
                         self_maps=counts))
    return checks


def _inner_and_semilinear(ctx, n, count_inner, count_semi, rng):
    b = ctx.backend
    acts = [Conjugation(b, b.random_automorphism(n, rng)) for _ in range(count_inner)]
    if b.kind == "vector" and b.F.degree > 1:
        acts += [Conjugation(b, random_semilinear(b, n, rng, frobenius=1 + rng.randrange(b.F.degree - 1)))
                 for _ in range(count_semi)]
    return acts


def suite_reconstruction_roundtrip(ctx):
    b = ctx.backend
    if b.kind == "finite":
        return [_skip("roundtrip", "windows of finite structures are not closed under conjugation checks here")]
    rng = ctx.rng("reconstruction-roundtrip")
    n = 2
    W = build_window(b, 1, n, cap=ctx.caps["triples"])
    acts = _inner_and_semilinear(ctx, n, 20, 5, rng)
    gs = [b.random_automorphism(n, rng) for _ in range(5)]
    bad_rt, bad_fn = [], []
    for a in acts:
        for g in gs:
            if not check_roundtrip(a, g, W):
                bad_rt.append(a.to_json())
                break
    for a, c in zip(acts, acts[1:] + acts[:1]):
        if not check_functoriality(a, c, W):
            bad_fn.append([a.to_json(), c.to_json()])
    return [_check("alpha-f-alpha", not bad_rt, bad_rt[:1], actions=len(acts)),
            _check("functoriality", not bad_fn, bad_fn[:1], pairs=len(acts))]


def suite_kernel_cor16(ctx):
    b = ctx.backend
    if b.kind != "vector":
        return [_skip("kernel", "kernel extraction runs on GF(q) windows")]
    pool = [la.basis_vector(0), la.basis_vector(1), la.vec({0: 1, 1: 1})]
    W = build_window(b, 1, pool=pool)
    checks = []
    frob = Conjugation(b, frobenius_map(b.q, 1))
    f = f_from_alpha(frob, W)
    try:
        ke = kernel_extract(f, b.q, W)
        F = b.F
        expected = tuple(F.frobenius(x, 1) for x in range(1, b.q))
        checks.append(_check("frobenius-kernel-element", ke.common() == expected,
                             {"per_line": [list(v) for v in ke.per_line.values()]},
                             f_i=list(ke.common() or ()), lines=len(ke.per_line)))
    except NotAnIsomorphism as exc:
        checks.append(_check("frobenius-kernel-element", False,
                             {"predicate": exc.predicate, "message": str(exc)}))
    vals = realizable_kernel_values(W)
    bound = aut_of_cyclic_order(b.q - 1)
    checks.append(_check("realizable-values-bounded", len(vals) <= bound,
                         {"values": [list(v) for v in vals]}, realizable=len(vals), bound=bound))
    return checks


def suite_diagram_thm13(ctx):
    b = ctx.backend
    if b.kind != "vector":
        return [_skip("diagram", "the semilinear overgroup is defined for vector backends")]
    rng = ctx.rng("diagram-thm13")
    n = 3
    W = build_window(b, 1, n, cap=ctx.caps["triples"])
    G = geometry_of_window(W)
    acts = _inner_and_semilinear(ctx, n, 10, 5, rng)
    samples = [phi_map(random_semilinear(b, n, rng), G, b) for _ in range(5)]
    rep = diagram_check(acts, W, G, samples)
    return [_check("phi-equals-pi-gamma", all(rep.commutes), None, samples=len(rep.commutes)),
            _check("section-property", all(rep.section), rep.failures[:1] or None,
                   samples=len(rep.section))]


def suite_orbital(ctx):
    b = ctx.backend
    try:
        O = orbital_structure(b, ctx.size, 2)
    except Inapplicable as exc:
        return [_skip("orbital-structure", str(exc))]
    sizes = {n: len(O.classes(n)) for n in O.relations}
    ok = all(sum(len(c) for c in O.classes(n)) == len(O.domain) ** n for n in O.relations)
    return [_check("orbit-classes-partition", ok, None, classes={str(k): v for k, v in sizes.items()})]


RUNNERS = {
    "galois-roundtrip": suite_galois_roundtrip,
    "stab-characterizations": suite_stab_characterizations,
    "lascar-verify": suite_lascar_verify,
    "rank-axioms": suite_rank_axioms,
    "stationary-axioms": suite_stationary_axioms,
    "canonical-base": suite_canonical_base,
    "generation": suite_generation,
    "pregeometry": suite_pregeometry,
    "expanded-window": suite_expanded_window,
    "reconstruction-roundtrip": suite_reconstruction_roundtrip,
    "kernel-cor16": suite_kernel_cor16,
    "diagram-thm13": suite_diagram_thm13,
    "orbital": suite_orbital,
}


def run_suite(ctx, name):
    t0 = time.perf_counter()
    try:
        checks = RUNNERS[name](ctx)
    except (NoSupport, NotAnIsomorphism, LascarLabError) as exc:
        checks = [CheckRecord("suite-error", "fail", {"error": type(exc).__name__, "message": str(exc)})]
    return SuiteReport(name, checks, time.perf_counter() - t0)


def run(config, suites=None):
    """Validate, run the selected suites in declared order, return (canonical, timings)."""
    config = validate_config(config)
    names = list(suites) if suites else config["suites"]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    config["suites"] = names
    ctx = Context(config)
    reports = [run_suite(ctx, n) for n in names]
    canonical = {"config": config,
                 "suites": [r.to_json() for r in reports],
                 "verdict": "fail" if any(r.verdict == "fail" for r in reports) else "pass"}
    for rep in canonical["suites"]:
        for c in rep["checks"]:
            if c["status"] == "fail":
                c["replay"] = {"suite": rep["suite"], "check": c["name"], "config": config}
    timings = {r.suite: round(r.timing, 4) for r in reports}
    return canonical, timings


def canonical_json(canonical):
    return json.dumps(canonical, sort_keys=True, indent=2, default=str)


def replay(cex):
    """Re-run the check a replay record points at; returns its fresh record."""
    if "replay" in cex:
        cex = cex["replay"]
    canonical, _ = run(cex["config"], [cex["suite"]])
    for c in canonical["suites"][0]["checks"]:
        if c["name"] == cex["check"]:
            return c
    return {"name": cex["check"], "status": "skip", "details": {"reason": "check not produced"}}


def to_markdown(canonical, timings=None):
    lines = ["# lascar-lab report", ""]
    cfg = canonical["config"]
    lines.append(f"- backend: `{json.dumps(cfg['backend'], sort_keys=True)}`")
    lines.append(f"- window: size {cfg['window']['size']}, k {cfg['window']['k']}; "
                 f"samples {cfg['samples']}; seed {cfg['seed']}")
    lines.append(f"- verdict: **{canonical['verdict']}**")
    lines.append("")
    for rep in canonical["suites"]:
        head = f"## {rep['suite']}: {rep['verdict']}"
        if timings and rep["suite"] in timings:
            head += f" ({timings[rep['suite']]:.2f} s)"
        lines += [head, "", "| check | status | details |", "|---|---|---|"]
        for c in rep["checks"]:
            det = json.dumps(c["details"], sort_keys=True)
            if c["counterexample"] is not None:
                det += " counterexample: " + json.dumps(c["counterexample"], sort_keys=True, default=str)
            lines.append(f"| {c['name']} | {c['status']} | {det} |")
        lines.append("")
    return "\n".join(lines)
