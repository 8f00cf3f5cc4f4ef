from collections import Counter
from fractions import Fraction

import pytest

from permucat.combinat import mask_of, popcount
from permucat.gitwin import (Dictionary, EqLineBundle, Stratum, alpha_value, alpha_x_suite,
                             bundle_from_set, check_collection_even, check_collection_odd,
                             closure_even, closure_odd, descent_check, dictionary_check,
                             enum_windows, eq_cohomology_p1n, equivariance_check, euler_even,
                             euler_odd, kn_weight, l_bundle, maxmin_odd, p1_table, pair_check_even,
                             pair_check_odd, pushforward_check, r_bundle, torsion_pair_check,
                             window_membership, window_report, window_spec, x_value)


def B(j, p):
    return EqLineBundle(tuple(j), p)


def test_enum_n3():
    col = enum_windows(3)
    got = sorted((b.j, b.p) for b in col.bundles)
    expect = sorted([((0, 0, 0), 0), ((-1, -1, -1), -1), ((-1, -1, -1), 1),
                     ((-1, -1, 0), 0), ((-1, 0, -1), 0), ((0, -1, -1), 0)])
    assert got == expect
    assert not col.torsion
    assert [b.s for b in col.bundles] == sorted((b.s for b in col.bundles), reverse=True)


@pytest.mark.parametrize("n,lines,torsion", [(4, 18, 6), (6, 60, 120)])
def test_enum_even(n, lines, torsion):
    col = enum_windows(n)
    assert (len(col.bundles), len(col.torsion)) == (lines, torsion)
    assert col.total == euler_even(n)


def test_euler_numbers():
    assert [euler_odd(n) for n in (3, 5, 7, 9)] == [6, 30, 140, 630]
    assert [euler_even(n) for n in (4, 6, 8)] == [24, 180, 1120]
    with pytest.raises(ValueError):
        enum_windows(10)


def test_weight_examples():
    b = B((-1, -1, -1), 1)
    st = Stratum("lambda", mask_of([1, 2]))
    assert kn_weight(b, st) == 2
    spec = window_spec(3, st)
    assert (spec.w, spec.eta) == (0, 4) and window_membership(b, spec)
    st = Stratum("lambda", mask_of([1, 2, 3]))
    assert kn_weight(b, st) == 4 and window_spec(3, st).eta == 6
    L = l_bundle(4, mask_of([1, 2]), 0)
    st = Stratum("blowup_plus", mask_of([1, 2]))
    assert kn_weight(L, st) == 0
    spec = window_spec(4, st)
    assert (spec.w, spec.eta) == (-4, 8)
    with pytest.raises(ValueError):
        kn_weight(b, Stratum("lambda", mask_of([1])))


def test_minus_stratum_is_s2_image():
    # minus weight at T equals the plus weight of the flipped bundle at the complement
    full = 63
    for b in enum_windows(6).bundles:
        flipped = EqLineBundle(b.j, -b.p, tuple(sorted((full & ~t, a) for t, a in b.alpha)))
        for T, _ in b.alpha:
            assert kn_weight(b, Stratum("blowup_minus", T)) == \
                kn_weight(flipped, Stratum("blowup_plus", full & ~T))


def test_p1_tables():
    assert p1_table(1) == Counter({(0, -1): 1, (0, 1): 1})
    assert p1_table(-2) == Counter({(1, 0): 1})
    assert p1_table(-1) == Counter()
    assert eq_cohomology_p1n((0, 0, 0)) == Counter({(0, 0): 1})
    assert eq_cohomology_p1n((0, -1, 4)) == Counter()


def test_pair_examples_odd():
    assert pair_check_odd(B((-1, -1, 0), 0), B((-1, -1, -1), 1))
    a, b = B((-1, -1, 0), 0), B((-1, 0, -1), 0)
    assert pair_check_odd(a, b) and pair_check_odd(b, a)
    assert not pair_check_odd(a, a)
    with pytest.raises(ValueError):
        pair_check_odd(B((0, 0, 0), 1), a)


def test_descent_examples():
    assert descent_check(B((-1, -1, -1), 1), "odd")
    assert not descent_check(B((0, 0, 0), 1), "odd")
    assert all(descent_check(b) for b in enum_windows(4).bundles)


def test_dictionary_examples():
    d = Dictionary(3)
    assert -d.delta_i0(1) + d.delta_iinf(1) == d.vec(None, None, -2) == d.psi0()
    d = Dictionary(4)
    T = mask_of([1, 2])
    assert d.delta_T_inf(T) == d.vec(None, {T: 2}, 0)
    assert d.restrict(d.delta_T_inf(T), T) == (-1, -1)
    E = mask_of([1, 2])
    assert x_value(4, E, 0, T) == 1
    assert d.restrict(d.bundle(r_bundle(4, E, 0)), T) == (-1, 0)
    for n in (3, 4, 5, 6):
        assert dictionary_check(n)["ok"]
        assert pushforward_check(n)


def test_alpha_x_examples():
    E = T = mask_of([1, 2])
    assert x_value(4, E, 0, T) == 1
    rep = alpha_x_suite(4)
    assert (E, T, 1) in rep["exceptions"]
    assert {alpha_value(4, e, p, t) for e, p, t in _collection_triples(4)} == {-1, 0}
    rep6 = alpha_x_suite(6)
    assert rep6["ok"]


def _collection_triples(n):
    out = []
    for b in enum_windows(n).bundles:
        for T, _ in b.alpha:
            out.append((b.minus_set, b.p, T))
    return out


def test_x_bound_at_n4_reports_extra_types():
    # beyond E = T, the scan finds |x_T| = k + 1 for other s = r + 1, r + 2 types
    rep = alpha_x_suite(4)
    kinds = {f[0] for f in rep["failures"]}
    assert kinds == {"|x| > k"}
    assert all(abs(x_value(4, E, p, T)) == 1 for _, E, p, T in rep["failures"])
    assert not rep["maxmin_failures"] and not rep["interval_failures"]


def test_maxmin_case_b():
    # n = 6, |I| = 4: the largest weight over the collection is 4
    items = [(b.minus_set, b.p) for b in enum_windows(6).bundles]
    I = mask_of([1, 2, 3, 4])
    vals = [popcount(E & I) - popcount(E & ~I & 63) + p for E, p in items]
    assert max(vals) == 4
    assert all(maxmin_odd(n) for n in (3, 5, 7))


def test_torsion_examples():
    rep = torsion_pair_check(2, (1, 1), (0, 0))
    assert rep["verdict"] == "not_pair" and rep["agrees"] and rep["dim"] == 1
    rep = torsion_pair_check(2, (1, 1), (1, 0))
    assert rep["verdict"] == "exceptional_pair" and rep["agrees"] and rep["dim"] == 0
    rep = torsion_pair_check(3, (1, 2), (1, 2))
    assert rep["verdict"] == "endo_scalar" and rep["dim"] == 1
    with pytest.raises(ValueError):
        torsion_pair_check(2, (2, 0), (0, 0))


def test_collections_exceptional():
    for n in (3, 5):
        assert check_collection_odd(n).ok
    assert check_collection_even(4).ok
    ok, witness = pair_check_even(l_bundle(4, 0, 0), l_bundle(4, 0, 0))
    assert not ok and witness == "H*(M0)"


def test_window_reports():
    for n in (3, 4, 5, 6):
        rep = window_report(n)
        assert not rep["outside"] and not rep["no_descent"]
        assert equivariance_check(n)


def test_closure_examples():
    rep = closure_odd(3)
    assert rep["ok"] and all(v == "window" for v in rep["trace"].values())
    rep = closure_odd(5)
    assert rep["ok"] and rep["trace"]["3,1"] == "line s-p=2: (2,0) (1,-1) (0,-2)"
    rep = closure_odd(7)
    assert rep["ok"] and rep["trace"]["3,1"].startswith("line s+p=4")
    for n in (4, 6):
        assert closure_even(n)["ok"]
    assert closure_even(6)["red_plus"] == [(3, 1), (4, 2), (5, 3), (6, 4)]


def test_json_dump():
    b = bundle_from_set(4, mask_of([1]), 1, {mask_of([1, 2]): -1})
    assert b.to_json() == {"j": [-1, 0, 0, 0], "p": 1, "alpha": {"1,2": -1}}
    assert enum_windows(4).to_json()[0].keys() == {"T", "a", "b"}
    assert isinstance(x_value(4, 1, 1, 3), Fraction)
