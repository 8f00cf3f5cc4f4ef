"""Command line front end: runs the verification suites and writes a JSON report.

    permucat {ghat,picard,toric,excoll,windows,all} [--n N | --n-max N] [--order lex|lexprime]
             [--margin M] [--jobs J] [--out PATH] [--cache DIR]

Exit status is 0 when every check passes, 1 when some check fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import combinat, excoll, gitwin, picard, toric
from .combinat import Order, Verdict, popcount

SCHEMA = "permucat/1"
CAPS = {"ghat": 16, "picard": 12, "toric": 7, "excoll": 6, "windows": 9}
DEFAULT_N_MAX = {"ghat": 9, "picard": 6, "toric": 5, "excoll": 4, "windows": 7}
MIN_N = {"ghat": 1, "picard": 2, "toric": 2, "excoll": 2, "windows": 3}


@dataclass(frozen=True)
class SuiteConfig:
    ns: tuple[int, ...]
    orders: tuple[str, ...]
    margin: int = 1
    jobs: int = 1


@dataclass(frozen=True)
class CheckSpec:
    id: str
    claim: str
    func: str
    kwargs: tuple = ()


def _result(ok: bool, **witness) -> tuple[bool, dict]:
    return bool(ok), witness


# --- ghat checks ----------------------------------------------------------

def chk_ghat_count(n: int):
    count = len(combinat.enumerate_ghat(n))
    d = combinat.derangements(n)
    return _result(count == d, objects=count, derangements=d)


def chk_ghat_identities(n: int):
    d = combinat.derangements(n)
    rec = n < 2 or d == (n - 1) * (combinat.derangements(n - 1) + combinat.derangements(n - 2))
    ok = combinat.curious_sum(n) == d and combinat.factorial_split(n) == factorial(n) and rec
    return _result(ok, derangements=d)


def chk_ghat_symmetry(n: int):
    """Cremona and S_n preserve the collection; the primed order is lex on Cremona images."""
    objs = combinat.enumerate_ghat(n)
    keys = {o.key() for o in objs}
    gens = [combinat.GroupElement(True, tuple(range(1, n + 1)))]
    if n >= 2:
        gens.append(combinat.GroupElement(False, (2, 1) + tuple(range(3, n + 1))))
        gens.append(combinat.GroupElement(False, tuple(range(2, n + 1)) + (1,)))
    closed = all(combinat.group_act(g, o).key() in keys for g in gens for o in objs)
    primed = all(combinat.order_sequence(o, Order.LEX_PRIME) == combinat.order_sequence(combinat.cremona(o), Order.LEX)
                 for o in objs)
    invol = all(combinat.cremona(combinat.cremona(o)) == o for o in objs)
    return _result(closed and primed and invol, objects=len(objs))


def chk_ghat_enddata(n: int):
    objs = [o for o in combinat.enumerate_ghat(n) if o.t > 1]
    unsound = []
    vanish = 0
    for T, Tp in itertools.permutations(objs, 2):
        dec = combinat.end_data_decide(T, Tp)
        if dec.verdict is Verdict.VANISH:
            vanish += 1
            if not excoll.certify_vanishing(T, Tp):
                unsound.append(f"{T} -> {Tp}")
    return _result(not unsound, vanish=vanish, unsound=unsound[:5])


# --- picard checks --------------------------------------------------------

def chk_cartan(n: int):
    rep = picard.class_identities_check(n)
    return _result(rep["ok"])


def chk_sigma(n: int):
    cases, bad = 0, []
    for forget in range(1 << n):
        s = n - popcount(forget)
        for a in range(1, s):
            cases += 1
            rep = picard.sigma_decomposition(n, forget, a)
            if not rep.ok or (n % 2 and rep.uncovered) or \
                    any(2 * popcount(J) != n for J in rep.uncovered):
                bad.append(rep.to_json())
    return _result(not bad, cases=cases, failures=bad[:3])


def chk_blowdown(n: int):
    bad, cases = [], 0
    for r in (-1, 0, 1):
        model = picard.Model((1 << n) - 1, r)
        for a in range(1, n + r + 1):
            for i in model.elements:
                cases += 1
                rep = picard.blowdown_compat(model, a, i)
                if not rep.ok:
                    bad.append({"r": r, "a": a, "i": i, "violations": rep.violations})
    return _result(not bad, cases=cases, failures=bad[:3])


def chk_reduction(n: int):
    rows = picard.reduction_relations(n)
    bad = [r["relation"] for r in rows if not r["ok"]]
    return _result(not bad, relations=len(rows), failures=bad)


def chk_comps(s: int):
    ok = all(picard.comps_coefficients(a, k, s) == (0, 0, 0) and picard.comps_class_check(a, k, s)
             for a in range(0, 2 * s + 2) for k in range(0, 2 * s + 2))
    return _result(ok and picard.attaching_psi_check(s))


def chk_lift(n: int):
    cases, bad = 0, []
    full = (1 << n) - 1
    for blocks in combinat._ordered_partitions(full):
        if len(blocks) < 2:
            continue
        for labels in itertools.product(*[range(popcount(b)) for b in blocks]):
            if not any(labels):
                continue
            cases += 1
            lifted = picard.lift_bundle(blocks, labels)
            if picard.restrict_to_stratum(lifted, blocks) != picard.factorized_labels(blocks, labels):
                bad.append({"blocks": [list(combinat.elements_of(b)) for b in blocks], "labels": list(labels)})
    return _result(not bad, cases=cases, failures=bad[:3])


# --- toric checks ---------------------------------------------------------

def _named_fan(name: str) -> toric.Fan:
    if name == "P1":
        return toric.projective_fan(1)
    if name == "P2":
        return toric.projective_fan(2)
    if name == "P1xP1":
        return toric.product_fan([toric.projective_fan(1), toric.projective_fan(1)])
    return toric.lm_fan(int(name[2:]))


def chk_lm_fan(n: int):
    fan = toric.lm_fan(n)
    s = toric.lm_summary(fan, n)
    return _result(s["rays"] == s["expected_rays"] and s["cones"] == s["expected_cones"], **s)


def oracle_divisors(name: str, bound: int, samples: int | None, seed: int = 0) -> list[tuple[int, ...]]:
    """Divisors for the oracle self-tests.

    Small fans: every vector with entries in [-bound, bound].  LM fans: every vector
    vanishing on the first cone (one per class) when ``samples`` is None, else a seeded sample.
    """
    fan = _named_fan(name)
    k = fan.nrays
    if not name.startswith("LM"):
        return list(itertools.product(range(-bound, bound + 1), repeat=k))
    fixed = set(fan.cones[0])
    free = [i for i in range(k) if i not in fixed]
    if samples is None:
        out = []
        for vals in itertools.product(range(-bound, bound + 1), repeat=len(free)):
            a = [0] * k
            for i, v in zip(free, vals):
                a[i] = v
            out.append(tuple(a))
        return out
    rng = random.Random(f"{name}:{seed}")
    return [tuple(rng.randint(-bound, bound) for _ in range(k)) for _ in range(samples)]


def nef_divisors(n: int, count: int, top: int = 2) -> list[tuple[int, ...]]:
    """Seeded nonnegative combinations of pulled back G classes on LM_n."""
    model = picard.Model.lm(n)
    fan = toric.lm_fan(n)
    gens = []
    for forget in range(1 << n):
        s = n - popcount(forget)
        for a in range(1, s):
            gens.append(np.array(toric.class_to_tdivisor(-picard.pullback_forgetful(forget, a, model), fan)))
    rng = random.Random(f"nef:{n}")
    out = []
    for _ in range(count):
        total = np.zeros(fan.nrays, dtype=np.int64)
        for g in rng.sample(gens, min(3, len(gens))):
            total += rng.randint(0, top) * g
        out.append(tuple(int(x) for x in total))
    return out


def chk_oracle(name: str, bound: int, samples: int | None, margin: int = 1, shifts: int = 50,
               nef_samples: int = 0):
    """Serre duality, nef vanishing and h0 = lattice points on every divisor; ``shifts``
    random principal shifts per fan, recomputed without the class memo."""
    fan = _named_fan(name)
    rng = random.Random(f"shift:{name}")
    divisors = oracle_divisors(name, bound, samples)
    extra = nef_divisors(int(name[2:]), nef_samples) if nef_samples and name.startswith("LM") else []
    bad = [("nef generator", a) for a in extra if not toric.nef_check(fan, a)[0]]
    divisors += extra
    counts = {"divisors": len(divisors), "nef": 0, "shifts": 0}
    canon = [-1] * fan.nrays
    for a in divisors:
        h = toric.cohomology(fan, a, margin)
        dual = toric.cohomology(fan, [c - x for c, x in zip(canon, a)], margin)
        if h.h != dual.h[::-1]:
            bad.append(("serre", a))
        if toric.euler_characteristic(fan, a, margin) != h.chi:
            bad.append(("chi", a))
        if toric.nef_check(fan, a)[0]:
            counts["nef"] += 1
            if any(h.h[1:]) or h.h[0] != toric.lattice_points(fan, a):
                bad.append(("nef", a))
    if fan.rank:
        for _ in range(shifts):
            a = divisors[rng.randrange(len(divisors))]
            m = [rng.randint(-3, 3) for _ in range(fan.rank)]
            moved = np.asarray(a) + toric.principal(fan, m)
            counts["shifts"] += 1
            if toric.cohomology_uncached(fan, moved, margin).h != toric.cohomology(fan, a, margin).h:
                bad.append(("shift", a))
    return _result(not bad, **counts, failures=[[k, list(v)] for k, v in bad[:3]])


def chk_gclaims(n: int, margin: int = 1):
    fan = toric.lm_fan(n)
    model = picard.Model.lm(n)
    G = {a: -picard.g_class(model, a) for a in range(1, n)}
    psi = picard.psi0(model)
    bad = []

    def acyclic(cls):
        return toric.cohomology(fan, toric.class_to_tdivisor(cls, fan), margin).acyclic

    for a in range(1, n):
        if not toric.nef_check(fan, toric.class_to_tdivisor(G[a], fan))[0]:
            bad.append(f"G_{a} not nef")
        if not acyclic(-G[a]):
            bad.append(f"G_{a} dual not acyclic")
        for b in range(1, n):
            if a != b and not acyclic(G[b] - G[a]):
                bad.append(f"G_{b} - G_{a}")
            if a < b and not acyclic(-psi + G[a] - G[b]):
                bad.append(f"-psi0 + G_{a} - G_{b}")
    return _result(not bad, failures=bad)


def acyclicity_divisors(n: int, samples: int | None, seed: int = 0):
    """-dH + sum m_I E_I with 1 <= d <= n-1 and 0 <= m_I <= n-1-|I|."""
    model = picard.Model.lm(n)
    basis = model.basis()
    ranges = [range(n - popcount(J)) for J in basis]
    if samples is None:
        for d in range(1, n):
            for ms in itertools.product(*ranges):
                yield picard.DivisorClass(model, -d, {J: m for J, m in zip(basis, ms) if m})
        return
    rng = random.Random(f"acyclic:{n}:{seed}")
    for _ in range(samples):
        d = rng.randint(1, n - 1)
        ms = [rng.choice(r) for r in ranges]
        yield picard.DivisorClass(model, -d, {J: m for J, m in zip(basis, ms) if m})


def chk_acyclic(n: int, samples: int | None, margin: int = 1):
    fan = toric.lm_fan(n)
    count, bad = 0, []
    for cls in acyclicity_divisors(n, samples):
        count += 1
        if not toric.cohomology(fan, toric.class_to_tdivisor(cls, fan), margin).acyclic:
            bad.append(cls.to_json())
    return _result(not bad, divisors=count, counterexamples=bad[:3])


def chk_cremona_classes(n: int):
    model = picard.Model.lm(n)
    ok = all(toric.cremona_class(picard.g_class(model, a)) == picard.g_class(model, n - a) for a in range(1, n))
    return _result(ok)


def chk_restriction(n: int):
    model = picard.Model.lm(n)
    full = model.ground
    classes = [picard.g_class(model, a) for a in range(1, n)]
    classes += [picard.boundary(model, s) for s in range(1, full)]
    cases, bad = 0, 0
    for t in range(2, n + 1):
        for blocks in _set_partitions(full, t):
            for cls in classes:
                cases += 1
                bad += not toric.restriction_matches(cls, blocks)
    return _result(bad == 0, cases=cases, failures=bad)


def _set_partitions(mask: int, t: int):
    """Ordered partitions of ``mask`` into t nonempty blocks."""
    if t == 1:
        if mask:
            yield (mask,)
        return
    for first in combinat.submasks(mask):
        if first and first != mask:
            for rest in _set_partitions(mask & ~first, t - 1):
                yield (first,) + rest


# --- excoll checks --------------------------------------------------------

def chk_excoll(n: int, order: str):
    rep = excoll.verify_collection(n, (order,), allow_six=True)
    return _result(rep.ok, objects=rep.objects, pairs=rep.pairs[order],
                   selfExtFailures=rep.self_ext_failures, failures=rep.failures[:3],
                   caseMismatches=len(rep.case_mismatches), lineBundleRight=rep.line_bundle_right,
                   lineBundleFailures=rep.line_bundle_failures[:3])


def chk_gram(n: int, spot: int = 10):
    gm = excoll.euler_pairing_matrix(n)
    objs = gm.objects
    step = max(1, len(objs) // spot)
    picks = objs[::step][:spot]
    indep = all(excoll.euler_pairing(a, b) == excoll.euler_pairing(a, b, excoll.lift_from_right)
                for a in picks for b in objs)
    return _result(gm.unitriangular and indep, objects=len(objs), unitriangular=gm.unitriangular,
                   liftIndependent=indep)


# --- window checks ---------------------------------------------------------

def chk_win_count(n: int):
    col = gitwin.enum_windows(n)
    expect = gitwin.euler_odd(n) if n % 2 else gitwin.euler_even(n)
    return _result(col.total == expect and gitwin.euler_identities(n),
                   bundles=len(col.bundles), torsion=len(col.torsion), expected=expect)


def chk_win_membership(n: int):
    rep = gitwin.window_report(n)
    ok = not rep["outside"] and not rep["no_descent"] and gitwin.equivariance_check(n)
    if n % 2:
        ok = ok and gitwin.maxmin_odd(n)
    return _result(ok, bundles=rep["bundles"], outside=rep["outside"][:3], noDescent=rep["no_descent"][:3])


def chk_win_pairs(n: int):
    rep = gitwin.check_collection_odd(n) if n % 2 else gitwin.check_collection_even(n)
    return _result(rep.ok, pairs=rep.pairs, failures=rep.failures[:3], blockFailures=rep.both_ways_failures[:3])


def chk_win_closure(n: int):
    rep = gitwin.closure_odd(n) if n % 2 else gitwin.closure_even(n)
    return _result(rep["ok"], missing=rep.get("missing", []), failures=rep.get("failures", []))


def chk_win_dictionary(n: int):
    rep = gitwin.dictionary_check(n)
    return _result(rep["ok"] and gitwin.pushforward_check(n), failures=rep["failures"][:5])


def chk_win_alphax(n: int):
    rep = gitwin.alpha_x_suite(n, interval=n <= 6)
    return _result(rep["ok"], items=rep["items"], failures=len(rep["failures"]),
                   firstFailures=[[k, E, p, T] for k, E, p, T in rep["failures"][:3]],
                   maxminFailures=len(rep["maxmin_failures"]), intervalFailures=len(rep["interval_failures"]))


def chk_win_torsion(r: int):
    rows = [gitwin.torsion_pair_check(r, (a, b), (c, d))
            for a, b, c, d in itertools.product(range(r), repeat=4)]
    bad = [row for row in rows if not row["agrees"]]
    return _result(not bad, pairs=len(rows), disagreements=bad[:3])


CHECKS = {name: obj for name, obj in globals().items() if name.startswith("chk_")}


# --- suites ---------------------------------------------------------------

def suite_ghat(cfg: SuiteConfig) -> list[CheckSpec]:
    out = []
    for n in cfg.ns:
        if n <= 9:
            out.append(CheckSpec(f"ghat.count.n{n:02d}", "enumerated objects equal the derangement number",
                                 "chk_ghat_count", (("n", n),)))
        out.append(CheckSpec(f"ghat.identities.n{n:02d}", "composition sum and factorial split identities",
                             "chk_ghat_identities", (("n", n),)))
        if 2 <= n <= 7:
            out.append(CheckSpec(f"ghat.symmetry.n{n:02d}", "collection closed under S_2 x S_n; primed order is Cremona-lex",
                                 "chk_ghat_symmetry", (("n", n),)))
        if 4 <= n <= 5:
            out.append(CheckSpec(f"ghat.enddata.n{n:02d}", "end-data vanishing verdicts are certified",
                                 "chk_ghat_enddata", (("n", n),)))
    return out


def suite_picard(cfg: SuiteConfig) -> list[CheckSpec]:
    out = []
    for n in cfg.ns:
        out.append(CheckSpec(f"picard.cartan.n{n:02d}", "G classes through big deltas; B times Cartan is the identity",
                             "chk_cartan", (("n", n),)))
        if n <= 7:
            out.append(CheckSpec(f"picard.sigma.n{n:02d}", "forgetful pullback splits with bounded leftover sums",
                                 "chk_sigma", (("n", n),)))
            out.append(CheckSpec(f"picard.reduction.n{n:02d}", "pulled back relations among psi and delta classes",
                                 "chk_reduction", (("n", n),)))
        if n <= 5:
            out.append(CheckSpec(f"picard.blowdown.n{n:02d}", "G classes compatible with blow-downs",
                                 "chk_blowdown", (("n", n),)))
            out.append(CheckSpec(f"picard.comps.s{n:02d}", "restriction coefficient identities vanish",
                                 "chk_comps", (("s", n),)))
        if n <= 5:
            out.append(CheckSpec(f"picard.lift.n{n:02d}", "lifted bundles restrict to the labeled box products",
                                 "chk_lift", (("n", n),)))
    return out


def suite_toric(cfg: SuiteConfig) -> list[CheckSpec]:
    m = cfg.margin
    out = []
    small = [("P1", 3, None), ("P2", 3, None), ("P1xP1", 3, None)]
    plan = {3: (3, None, 50, 0), 4: (3, 60, 50, 20), 5: (2, 20, 20, 5), 6: (1, 3, 3, 1), 7: (1, 1, 1, 0)}
    for name, b, s in small:
        out.append(CheckSpec(f"toric.oracle.{name}", "oracle self-tests", "chk_oracle",
                             (("name", name), ("bound", b), ("samples", s), ("margin", m), ("shifts", 50))))
    for n in cfg.ns:
        if n <= 6:
            out.append(CheckSpec(f"toric.fan.n{n:02d}", "LM fan has 2^n-2 rays and n! smooth cones",
                                 "chk_lm_fan", (("n", n),)))
        if n in plan:
            b, s, k, e = plan[n]
            out.append(CheckSpec(f"toric.oracle.LM{n}", "oracle self-tests", "chk_oracle",
                                 (("name", f"LM{n}"), ("bound", b), ("samples", s), ("margin", m),
                                  ("shifts", k), ("nef_samples", e))))
        if 2 <= n <= 6:
            out.append(CheckSpec(f"toric.gclaims.n{n:02d}", "G_a nef; G_a dual and differences acyclic",
                                 "chk_gclaims", (("n", n), ("margin", m))))
            out.append(CheckSpec(f"toric.cremona.n{n:02d}", "Cremona exchanges G_a and G_{n-a}",
                                 "chk_cremona_classes", (("n", n),)))
        if 3 <= n <= 5:
            out.append(CheckSpec(f"toric.acyclic.n{n:02d}", "bounded -dH + sum m_I E_I is acyclic", "chk_acyclic",
                                 (("n", n), ("samples", None if n <= 4 else 100), ("margin", m))))
        if 3 <= n <= 4:
            out.append(CheckSpec(f"toric.restriction.n{n:02d}", "symbolic restriction agrees with the star fan",
                                 "chk_restriction", (("n", n),)))
    return out


def suite_excoll(cfg: SuiteConfig) -> list[CheckSpec]:
    out = []
    for n in cfg.ns:
        for order in cfg.orders:
            out.append(CheckSpec(f"excoll.pairs.{order}.n{n:02d}", "self-Ext and ordered pair vanishing certified",
                                 "chk_excoll", (("n", n), ("order", order))))
        if n <= 5:
            out.append(CheckSpec(f"excoll.gram.n{n:02d}", "Euler pairing matrix is unitriangular and lift independent",
                                 "chk_gram", (("n", n),)))
    return out


def suite_windows(cfg: SuiteConfig) -> list[CheckSpec]:
    out = []
    for n in cfg.ns:
        out.append(CheckSpec(f"windows.count.n{n:02d}", "collection size equals the Euler characteristic",
                             "chk_win_count", (("n", n),)))
        out.append(CheckSpec(f"windows.membership.n{n:02d}", "descent, window membership and symmetry",
                             "chk_win_membership", (("n", n),)))
        out.append(CheckSpec(f"windows.dictionary.n{n:02d}", "tautological relations hold in the bundle lattice",
                             "chk_win_dictionary", (("n", n),)))
        if n <= 7 or (n % 2 and n <= 9):
            if n % 2 or n <= 6:
                out.append(CheckSpec(f"windows.pairs.n{n:02d}", "ordered pairs are orthogonal",
                                     "chk_win_pairs", (("n", n),)))
        if n % 2 or n <= 8:
            out.append(CheckSpec(f"windows.closure.n{n:02d}", "Koszul closure reaches the pushforward types",
                                 "chk_win_closure", (("n", n),)))
        if n % 2 == 0:
            out.append(CheckSpec(f"windows.alphax.n{n:02d}", "alpha and x_T inequalities, extrema and interval claim",
                                 "chk_win_alphax", (("n", n),)))
            out.append(CheckSpec(f"windows.torsion.r{n // 2:02d}", "torsion pair criterion matches the direct count",
                                 "chk_win_torsion", (("r", n // 2),)))
    return out


SUITES = {"ghat": suite_ghat, "picard": suite_picard, "toric": suite_toric,
          "excoll": suite_excoll, "windows": suite_windows}


def run_check(spec: CheckSpec) -> dict:
    ok, witness = CHECKS[spec.func](**dict(spec.kwargs))
    rec = {"id": spec.id, "claim": spec.claim, "status": "pass" if ok else "fail"}
    if witness:
        rec["witness"] = witness
    return rec


def run_specs(specs: list[CheckSpec], jobs: int = 1) -> list[dict]:
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_check, specs))
    else:
        records = [run_check(s) for s in specs]
    return sorted(records, key=lambda r: r["id"])


def build_report(command: str, cfgs: dict[str, SuiteConfig], records: list[dict]) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "config": {k: {"n": list(c.ns), "orders": list(c.orders), "margin": c.margin} for k, c in sorted(cfgs.items())},
        "summary": {"checks": len(records), "failed": sum(r["status"] != "pass" for r in records)},
        "checks": records,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


# --- argument handling ----------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permucat", description="Verification suites for the collection G-hat and GIT windows.")
    p.add_argument("command", choices=sorted(SUITES) + ["all"])
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int, help="run a single n")
    g.add_argument("--n-max", type=int, help="run every n up to this bound")
    p.add_argument("--order", choices=[o.value for o in Order], help="restrict excoll to one order")
    p.add_argument("--margin", type=int, default=1, help="extra margin for the character box")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--cache", help="directory for cached fans (PERMUCAT_CACHE takes precedence)")
    return p


def configs(args, parser) -> dict[str, SuiteConfig]:
    names = sorted(SUITES) if args.command == "all" else [args.command]
    if args.margin < 0:
        parser.error("--margin must be nonnegative")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    orders = (args.order,) if args.order else tuple(o.value for o in Order)
    out = {}
    for name in names:
        cap, lo = CAPS[name], MIN_N[name]
        if args.n is not None:
            if not lo <= args.n <= cap:
                parser.error(f"--n for {name} must lie in {lo}..{cap}")
            ns = (args.n,)
        else:
            top = args.n_max if args.n_max is not None else DEFAULT_N_MAX[name]
            if not lo <= top <= cap:
                parser.error(f"--n-max for {name} must lie in {lo}..{cap}")
            ns = tuple(range(lo, top + 1))
        out[name] = SuiteConfig(ns, orders, args.margin, args.jobs)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfgs = configs(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    cache = os.environ.get("PERMUCAT_CACHE") or args.cache
    if cache:
        os.environ["PERMUCAT_CACHE"] = cache
    specs = [s for name, cfg in cfgs.items() for s in SUITES[name](cfg)]
    records = run_specs(specs, args.jobs)
    report = build_report(args.command, cfgs, records)
    text = dumps_report(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        for r in records:
            print(f"{r['status'].upper():4} {r['id']}")
        print(f"{report['summary']['checks']} checks, {report['summary']['failed']} failed")
    else:
        sys.stdout.write(text)
    return 1 if report["summary"]["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
