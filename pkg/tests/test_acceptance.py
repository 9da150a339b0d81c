"""One test per acceptance criterion; each records a single pass/fail line."""

import time


from cayley_ci import ci, matgroup as mg, schur
from cayley_ci.digraph import two_closure
from conftest import ACCEPTANCE_LINES


def record(n, ok, detail, started, limit_s):
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < limit_s
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s, limit {limit_s:g}s) {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_group_orders():
    t0 = time.perf_counter()
    got = {}
    for q in (3, 5, 7, 11):
        cr = mg.coset_representation(q)
        got[q] = (cr.G.order, cr.D.order, cr.H.order, cr.K.order)
    want = {q: (4 * q**3, 2 * q, 2 * q * q, 2 * q * q) for q in got}
    record(1, got == want, f"orders {got}", t0, 4.0)


def test_criterion_2_orbit_structure():
    t0 = time.perf_counter()
    bad = []
    for q in (3, 5, 7, 11):
        fams = mg.orbit_families(q)
        kinds = [f.kind for f in fams]
        computed = sorted(sorted(o) for o in mg.coset_representation(q).D.orbits())
        if computed != sorted(sorted(f.members) for f in fams):
            bad.append(f"q={q} orbits")
        if (kinds.count("S"), kinds.count("C"), kinds.count("P")) != (q, (q - 1) // 2, q):
            bad.append(f"q={q} counts")
        if [f.label for f in fams if f.kind == "S" and mg.is_self_paired(f)] != ["S_0"]:
            bad.append(f"q={q} pairing")
    record(2, not bad, f"mismatches {bad}", t0, 5)


def test_criterion_3_separation():
    t0 = time.perf_counter()
    got = {q: ci.separation_check(q, {0} | mg.parabolic(q, 0).members) for q in (5, 7, 11)}
    record(3, all(got.values()), f"separates {got}", t0, 30)


def test_criterion_4_two_closed():
    t0 = time.perf_counter()
    got = {}
    for q in (3, 5, 7):
        cr = mg.coset_representation(q)
        got[q] = two_closure(cr.G.gens, cr.degree).order
    record(4, got == {3: 108, 5: 500, 7: 1372}, f"2-closure orders {got}", t0, 300)


def test_criterion_5_multiplication_table():
    t0 = time.perf_counter()
    reports = {q: schur.verify_table1(q) for q in (3, 5, 7, 11)}
    detail = {q: f"{r.checks - len(r.mismatches)}/{r.checks}" for q, r in reports.items()}
    record(5, all(r.ok for r in reports.values()), f"entries verified {detail}", t0, 60)


def test_criterion_6_generated_schur_ring():
    t0 = time.perf_counter()
    got = {}
    for q in (3, 5, 7, 11, 13):
        H = mg.h_group(q)
        gen = schur.generated_sring(H, mg.build_T(q))
        module = schur.transitivity_module(H, mg.coset_representation(q).D)
        got[q] = (len(gen), len(module), gen == module)
    record(6, all(v[2] for v in got.values()),
           f"(generated classes, module classes, equal) {got}", t0, 300)


def test_criterion_7_non_ci_certificates():
    t0 = time.perf_counter()
    parts = {}
    for q in (7, 11):
        cert = ci.non_ci_certificate(q)
        p = cert.payload
        parts[f"q={q} certificate"] = cert.ok
        parts[f"q={q} |Aut(H)| = {p['aut_group_order']}"] = p["aut_group_order"] == q * q * (q * q - 1) * (q * q - q)
    cert = ci.non_ci_certificate(5)
    parts["q=5 |Aut| = 2000"] = cert.payload["aut_order"] == 2000
    parts["q=5 H, K regular"] = cert.checks["H and K regular inside Aut"]
    parts["q=5 H, K non-conjugate"] = cert.payload["H_to_K_conjugator"] is None
    parts["q=5 two classes of regular copies"] = cert.checks["at least two classes of regular copies of H"]
    failed = [k for k, v in parts.items() if not v]
    record(7, not failed, f"failed parts {failed}", t0, 600)


def test_criterion_8_z27_example():
    t0 = time.perf_counter()
    cert = ci.bci_check_z27()
    p = cert.payload
    ok = cert.ok and p["aut_order"] == 46656 and p["classes_found"] >= 2
    record(8, ok, f"|Aut| {p['aut_order']}, classes {p['classes_found']}, "
                  f"search complete {p['search_complete']}", t0, 900)


def test_criterion_9_alpha_lemma():
    t0 = time.perf_counter()
    got = {q: mg.alpha_lemma_checks(q) for q in (3, 5, 7)}
    failed = [(q, k) for q, checks in got.items() for k, v in checks.items() if not v]
    record(9, not failed, f"failed {failed}", t0, 10)


def test_criterion_10_oracle_agreement():
    t0 = time.perf_counter()
    cases = ci.oracle_cases()
    res = ci.oracle_agreement(cases)
    record(10, res.ok and res.cases == len(cases),
           f"{res.cases} cases, disagreements {res.disagreements}", t0, 600)
