"""Acceptance criteria AC1..AC11.

Each test records a PASS/FAIL line (printed in the terminal summary) and then asserts.
"""
import itertools
import subprocess
import sys
import time
from math import comb, factorial

from conftest import record_acceptance

from permucat import cli, gitwin, picard
from permucat.combinat import curious_sum, enumerate_ghat, factorial_split, popcount
from permucat.excoll import euler_pairing_matrix, verify_collection


def recursion_oracle(n):
    # !n = (n-1)(!(n-1) + !(n-2)), written out independently of the package
    d = [1, 0]
    for k in range(2, n + 1):
        d.append((k - 1) * (d[-1] + d[-2]))
    return d[n]


def test_ac1_derangement_counts():
    t0 = time.perf_counter()
    counts = {n: len(enumerate_ghat(n)) for n in range(2, 10)}
    expect = {n: recursion_oracle(n) for n in range(2, 10)}
    identities = all(curious_sum(n) == recursion_oracle(n) and factorial_split(n) == factorial(n)
                     for n in range(1, 13))
    elapsed = time.perf_counter() - t0
    ok = counts == expect and identities and elapsed < 5
    record_acceptance("AC1", ok, f"counts n=2..9 {list(counts.values())}, identities n<=12 {identities}, "
                                 f"{elapsed:.1f}s")
    assert counts == expect
    assert identities
    assert elapsed < 5


# name, bound, samples (None = exhaustive), shifts, nef samples
AC2_PLAN = [
    ("P1", 3, None, 50, 0),
    ("P2", 3, None, 50, 0),
    ("P1xP1", 3, None, 50, 0),
    ("LM3", 3, None, 50, 0),
    ("LM4", 3, 500, 50, 50),
    ("LM5", 3, 100, 50, 20),
    ("LM6", 1, 10, 10, 3),
]


def test_ac2_toric_oracle():
    t0 = time.perf_counter()
    fans_ok = all(cli.chk_lm_fan(n)[0] for n in range(2, 7))
    results = {}
    for name, bound, samples, shifts, nef in AC2_PLAN:
        ok, witness = cli.chk_oracle(name, bound, samples, 1, shifts, nef)
        results[name] = (ok, witness)
    elapsed = time.perf_counter() - t0
    checks_ok = fans_ok and all(ok for ok, _ in results.values()) and elapsed < 180
    # the literal criterion asks for every LM4/LM5 divisor with |coefficients| <= 3
    # (7^11 and 7^26 classes) and 200 LM6 divisors; only LM3 is exhaustive here
    coverage = {name: ("exhaustive" if samples is None else f"{samples} sampled")
                for name, _, samples, _, _ in AC2_PLAN}
    literal = all(coverage[k] == "exhaustive" for k in ("LM3", "LM4", "LM5")) and AC2_PLAN[-1][2] >= 200
    summary = ", ".join(f"{k}:{w['divisors']}/{w['nef']}nef/{w['shifts']}sh" for k, (_, w) in results.items())
    record_acceptance("AC2", checks_ok and literal,
                      f"all executed checks {'pass' if checks_ok else 'FAIL'} ({summary}; {elapsed:.0f}s); "
                      f"literal coverage {'met' if literal else 'not met: LM4/LM5 sampled, LM6 10 of 200'}")
    assert fans_ok
    assert all(ok for ok, _ in results.values()), {k: w for k, (ok, w) in results.items() if not ok}
    assert elapsed < 180
    assert literal, "exhaustive LM4/LM5 coverage and 200 LM6 samples are out of reach"


def test_ac3_g_bundle_claims():
    res = {n: cli.chk_gclaims(n) for n in range(2, 7)}
    ok = all(r[0] for r in res.values())
    record_acceptance("AC3", ok, f"n=2..6 nef, acyclic duals and differences: "
                                 f"{sum(r[0] for r in res.values())}/5 pass")
    assert ok, {n: r[1] for n, r in res.items() if not r[0]}


def test_ac4_acyclicity_criterion():
    res = {n: cli.chk_acyclic(n, None) for n in range(2, 5)}
    res[5] = cli.chk_acyclic(5, 500)
    ok = all(r[0] for r in res.values())
    sizes = {n: r[1]["divisors"] for n, r in res.items()}
    record_acceptance("AC4", ok, f"divisors checked per n {sizes} (n<=4 exhaustive, n=5 sampled)")
    assert ok, {n: r[1] for n, r in res.items() if not r[0]}


def test_ac5_exceptionality():
    t0 = time.perf_counter()
    reps = {n: verify_collection(n) for n in range(2, 6)}
    elapsed = time.perf_counter() - t0
    counts = {n: (r.objects, r.pairs["lex"], r.pairs["lexprime"]) for n, r in reps.items()}
    ok = (all(r.ok for r in reps.values()) and counts[4] == (9, 36, 36) and counts[5] == (44, 946, 946)
          and elapsed < 180)
    record_acceptance("AC5", ok, f"objects/pairs(lex)/pairs(lexprime) {counts}, "
                                 f"case mismatches {sum(len(r.case_mismatches) for r in reps.values())}, "
                                 f"{elapsed:.0f}s")
    assert all(r.ok for r in reps.values())
    assert counts[4] == (9, 36, 36) and counts[5] == (44, 946, 946)
    assert elapsed < 180


def test_ac6_gram_matrix():
    tri = {n: euler_pairing_matrix(n).unitriangular for n in range(2, 6)}
    spot_ok, spot = cli.chk_gram(5, 10)
    ok = all(tri.values()) and spot_ok
    record_acceptance("AC6", ok, f"unitriangular n=2..5 {all(tri.values())}, "
                                 f"lift independence on 10 objects {spot['liftIndependent']}")
    assert all(tri.values())
    assert spot_ok


def test_ac7_cartan_identity():
    reps = {n: picard.class_identities_check(n) for n in range(2, 13)}
    inverse = all(r["cartan_inverse"] for r in reps.values())
    ok = inverse and all(r["ok"] for r in reps.values())
    record_acceptance("AC7", ok, f"B * Cartan(A_(n-1)) = Id and G rows, n=2..12: {ok}")
    assert ok


def test_ac8_reduction_formulas():
    sigma_cases = sigma_bad = 0
    for n in range(2, 7):
        for forget in range(1 << n):
            rest = n - popcount(forget)
            for a in range(1, rest):
                sigma_cases += 1
                sigma_bad += not picard.sigma_decomposition(n, forget, a).ok
    blow_cases = blow_bad = 0
    for n in range(2, 6):
        for r in (-1, 0, 1):
            model = picard.Model((1 << n) - 1, r)
            for i, a in itertools.product(range(1, n + 1), range(1, n + r + 1)):
                blow_cases += 1
                blow_bad += not picard.blowdown_compat(model, a, i).ok
    ok = sigma_bad == 0 and blow_bad == 0
    record_acceptance("AC8", ok, f"sigma {sigma_cases - sigma_bad}/{sigma_cases}, "
                                 f"blowdown {blow_cases - blow_bad}/{blow_cases}")
    assert ok


def test_ac9_odd_windows():
    t0 = time.perf_counter()
    counts = {n: gitwin.enum_windows(n).total for n in (3, 5, 7, 9)}
    formula = {n: n * comb(n - 1, (n - 1) // 2) for n in (3, 5, 7, 9)}
    windows = {n: gitwin.window_report(n) for n in (3, 5, 7, 9)}
    inside = all(not w["outside"] and not w["no_descent"] for w in windows.values())
    pairs = {n: gitwin.check_collection_odd(n) for n in (3, 5, 7)}
    pairs_ok = all(p.ok for p in pairs.values())
    closure = all(gitwin.closure_odd(n)["ok"] for n in (3, 5, 7, 9))
    elapsed = time.perf_counter() - t0
    ok = counts == formula and inside and pairs_ok and closure and elapsed < 120
    record_acceptance("AC9", ok, f"counts {list(counts.values())}, windows/descent {inside}, "
                                 f"pairs {[p.pairs for p in pairs.values()]} ok={pairs_ok}, "
                                 f"closure {closure}, {elapsed:.0f}s")
    assert counts == formula
    assert inside
    assert pairs_ok
    assert closure
    assert elapsed < 120


def test_ac10_even_windows():
    t0 = time.perf_counter()
    ns = (4, 6, 8)
    counts = {n: gitwin.enum_windows(n).total for n in ns}
    formula = {n: (n // 2) ** 2 * comb(n, n // 2) for n in ns}
    windows = {n: gitwin.window_report(n) for n in ns}
    inside = all(not w["outside"] and not w["no_descent"] for w in windows.values())
    suites = {4: gitwin.alpha_x_suite(4), 6: gitwin.alpha_x_suite(6), 8: gitwin.alpha_x_suite(8, interval=False)}
    torsion_ok = True
    for r in (2, 3, 4):
        labels = list(itertools.product(range(r), repeat=2))
        torsion_ok &= all(gitwin.torsion_pair_check(r, ab, abp)["agrees"] for ab in labels for abp in labels)
    elapsed = time.perf_counter() - t0
    ineq_ok = all(s["ok"] for s in suites.values())
    ok = counts == formula and inside and ineq_ok and torsion_ok and elapsed < 120
    bad = {n: len(s["failures"]) for n, s in suites.items() if s["failures"]}
    k_of = {n: (n // 2 - 1) // 2 for n in ns}
    at_k1 = all(abs(gitwin.x_value(n, E, p, T)) == k_of[n] + 1
                for n, s in suites.items() for _, E, p, T in s["failures"])
    record_acceptance("AC10", ok, f"counts {list(counts.values())}, windows/descent {inside}, "
                                  f"torsion {torsion_ok}, alpha/x suite {'pass' if ineq_ok else 'FAIL'}"
                                  + (f" (|x_T| <= k violated outside the listed exceptions: {bad} cases,"
                                     f" all at |x_T| = k+1: {at_k1})" if bad else "")
                                  + f", {elapsed:.0f}s")
    assert counts == formula
    assert inside
    assert torsion_ok
    assert elapsed < 120
    assert ineq_ok, {n: s["failures"][:3] for n, s in suites.items() if not s["ok"]}


def test_ac11_determinism(tmp_path):
    outs = []
    codes = []
    for tag, jobs in (("a", "1"), ("b", "1"), ("c", "4")):
        path = tmp_path / f"{tag}.json"
        proc = subprocess.run([sys.executable, "-m", "permucat", "all", "--jobs", jobs, "--out", str(path)],
                              capture_output=True, text=True)
        codes.append(proc.returncode)
        outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    jobs_same = outs[0] == outs[2]
    ok = same and jobs_same and all(c in (0, 1) for c in codes)
    record_acceptance("AC11", ok, f"two runs identical {same}, --jobs 4 identical {jobs_same}, "
                                  f"{len(outs[0])} bytes, exit codes {codes}")
    assert all(c in (0, 1) for c in codes)
    assert same and jobs_same
