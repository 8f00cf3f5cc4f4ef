from collections import Counter
from functools import lru_cache
from math import factorial

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from permucat import toric
from permucat.combinat import (GhatObject, GroupElement, compare, cremona, derangements,
                               enumerate_ghat, group_act, popcount)
from permucat.excoll import certify_vanishing
from permucat.gitwin import (EqLineBundle, Stratum, descent_check, eq_cohomology_p1n, kn_weight,
                             pair_check_odd)
from permucat.picard import (DivisorClass, Model, g_class, pullback_class, pullback_forgetful,
                             sigma_decomposition)

fast = settings(max_examples=60, deadline=None)


@lru_cache(maxsize=None)
def ghat(n):
    return tuple(enumerate_ghat(n))


@st.composite
def objects(draw, lo=2, hi=6, count=1):
    n = draw(st.integers(lo, hi))
    pool = ghat(n)
    picks = [pool[draw(st.integers(0, len(pool) - 1))] for _ in range(count)]
    return picks[0] if count == 1 else picks


@st.composite
def group_elements(draw, n):
    return GroupElement(draw(st.booleans()), tuple(draw(st.permutations(range(1, n + 1)))))


@st.composite
def lm_classes(draw, lo=2, hi=5, bound=3):
    n = draw(st.integers(lo, hi))
    model = Model.lm(n)
    basis = model.basis()
    coeffs = draw(st.lists(st.integers(-bound, bound), min_size=len(basis), max_size=len(basis)))
    return DivisorClass(model, draw(st.integers(-bound, bound)), dict(zip(basis, coeffs)))


# --- combinatorics --------------------------------------------------------

@fast
@given(st.data())
def test_group_action_axioms(data):
    obj = data.draw(objects())
    n = popcount(obj.ground)
    g, h = data.draw(group_elements(n)), data.draw(group_elements(n))
    assert group_act(GroupElement.identity(n), obj) == obj
    assert group_act(g * h, obj) == group_act(g, group_act(h, obj))
    assert group_act(g, obj) in ghat(n)


@fast
@given(objects())
def test_cremona_involution(obj):
    img = cremona(obj)
    assert cremona(img) == obj
    assert sorted(img.sizes) == sorted(obj.sizes)
    assert img in ghat(popcount(obj.ground))


@fast
@given(objects(count=2), st.sampled_from(["lex", "lexprime"]))
def test_compare_antisymmetric(pair, kind):
    a, b = pair
    assume(a.ground == b.ground)
    assert compare(a, b, kind) == -compare(b, a, kind)
    assert (compare(a, b, kind) == 0) == (a == b)


@given(st.integers(0, 20))
def test_derangements_inclusion_exclusion(n):
    assert derangements(n) == sum((-1) ** k * factorial(n) // factorial(k) for k in range(n + 1))


@fast
@given(objects())
def test_text_round_trip(obj):
    assert GhatObject.from_text(obj.to_text()) == obj


# --- divisor classes ------------------------------------------------------

@fast
@given(st.data())
def test_class_arithmetic(data):
    a = data.draw(lm_classes(2, 5))
    b = data.draw(lm_classes(popcount(a.model.ground), popcount(a.model.ground)))
    assert (a + b) - b == a
    assert a * 2 == a + a
    assert (a - a).is_zero
    assert DivisorClass.from_json(a.model, a.to_json()) == a


@fast
@given(lm_classes(2, 6))
def test_tdivisor_round_trip(cls):
    a = toric.class_to_tdivisor(cls)
    assert toric.tdivisor_to_class(a, cls.model) == cls


@fast
@given(st.integers(3, 6), st.data())
def test_sigma_identity(n, data):
    forget = data.draw(st.integers(0, (1 << n) - 1))
    rest = n - popcount(forget)
    assume(rest >= 2)
    a = data.draw(st.integers(1, rest - 1))
    assert sigma_decomposition(n, forget, a).identity_ok


@fast
@given(st.integers(3, 6), st.data())
def test_pullbacks_compose(n, data):
    full = (1 << n) - 1
    first = data.draw(st.integers(0, full))
    second = data.draw(st.integers(0, full & ~first))
    rest = full & ~(first | second)
    assume(popcount(rest) >= 2)
    a = data.draw(st.integers(1, popcount(rest) - 1))
    mid = Model(full & ~second, -1)
    inner = pullback_forgetful(first, a, mid)
    assert pullback_class(Model.lm(n), second, inner) == pullback_forgetful(first | second, a, Model.lm(n))


# --- cohomology oracle ----------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(3, 4), st.data())
def test_serre_duality_and_shift(n, data):
    fan = toric.lm_fan(n)
    a = data.draw(st.lists(st.integers(-2, 2), min_size=fan.nrays, max_size=fan.nrays))
    m = data.draw(st.lists(st.integers(-3, 3), min_size=fan.rank, max_size=fan.rank))
    h = toric.cohomology_uncached(fan, a).h
    dual = toric.cohomology_uncached(fan, toric.serre_dual(fan, a)).h
    assert h == dual[::-1]
    shifted = np.asarray(a) + fan.rays @ np.asarray(m, dtype=np.int64)
    assert toric.cohomology_uncached(fan, shifted).h == h
    assert toric.CohomologyTable(h).chi == toric.chi_recursive(fan, a)


@settings(max_examples=30, deadline=None)
@given(lm_classes(3, 5, 2), st.data())
def test_restriction_rule_matches_star(cls, data):
    n = popcount(cls.model.ground)
    full = (1 << n) - 1
    first = data.draw(st.integers(1, full - 1))
    blocks = [first, full & ~first]
    assume(all(popcount(b) >= 2 for b in blocks))
    assert toric.restriction_matches(cls, blocks)


@settings(max_examples=30, deadline=None)
@given(objects(3, 5, count=2))
def test_certification_cremona_equivariant(pair):
    a, b = pair
    assume(a.ground == b.ground)
    assert certify_vanishing(a, b) == certify_vanishing(cremona(a), cremona(b))


@fast
@given(st.integers(2, 6))
def test_g_classes_cremona_symmetric(n):
    fan = toric.lm_fan(n)
    model = Model.lm(n)
    for a in range(1, n):
        img = toric.cremona_tdivisor(toric.class_to_tdivisor(g_class(model, a), fan), n)
        assert toric.linearly_equivalent(fan, img, toric.class_to_tdivisor(g_class(model, n - a), fan))


# --- equivariant line bundles ---------------------------------------------

def _p1_total(m):
    return m + 1 if m >= 0 else max(0, -m - 1)


@fast
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_eq_cohomology_dimensions(j):
    table = eq_cohomology_p1n(j)
    expect = 1
    for m in j:
        expect *= _p1_total(m)
    assert sum(table.values()) == expect
    assert table == Counter({(d, -w): x for (d, w), x in table.items()})


@fast
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-3, 3))
def test_descent_parity(j, p):
    b = EqLineBundle(tuple(j), p)
    assert descent_check(b, "odd") == ((sum(j) + p) % 2 == 0)


@fast
@given(st.lists(st.integers(-1, 0), min_size=5, max_size=5), st.integers(-2, 2),
       st.lists(st.integers(-1, 0), min_size=5, max_size=5), st.integers(-2, 2))
def test_pair_check_matches_serre_flip(j1, p1, j2, p2):
    # RHom(L', L) and RHom(L, L' (x) K) carry the same graded pieces up to sign of weight
    assume((sum(j1) + p1) % 2 == 0 and (sum(j2) + p2) % 2 == 0)
    a, b = EqLineBundle(tuple(j1), p1), EqLineBundle(tuple(j2), p2)
    k = EqLineBundle(tuple(x - 2 for x in j1), p1)
    assert pair_check_odd(a, b) == pair_check_odd(b, k)


@fast
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.integers(-4, 4),
       st.integers(-2, 0), st.integers(1, 14))
def test_blowup_weights_s2_symmetric(j, p, alpha, T):
    assume(popcount(T) == 2)
    full = 15
    b = EqLineBundle(tuple(j), p, ((T, alpha),))
    flipped = EqLineBundle(tuple(j), -p, ((full & ~T, alpha),))
    assert kn_weight(b, Stratum("blowup_minus", T)) == kn_weight(flipped, Stratum("blowup_plus", full & ~T))
