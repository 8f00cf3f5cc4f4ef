import json
from math import factorial

import pytest

from permucat.combinat import (GhatObject, GroupElement, Order, Verdict, compare, cremona,
                               curious_sum, derangement_suite, derangements, dumps_objects,
                               elements_of, end_data_decide, enumerate_ghat, factorial_split,
                               group_act, mask_of, order_sequence, submasks)


def inclusion_exclusion(n):
    # independent oracle: n! sum (-1)^k / k!
    return sum((-1) ** k * factorial(n) // factorial(k) for k in range(n + 1))


def test_masks_round_trip():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b1101) == (1, 3, 4)
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


def test_small_enumerations():
    assert [o.to_text() for o in enumerate_ghat(2)] == ["1,2;1"]
    assert [o.to_text() for o in enumerate_ghat(3)] == ["1,2,3;1", "1,2,3;2"]
    objs = enumerate_ghat(4)
    assert len(objs) == 9
    assert sum(o.t == 1 for o in objs) == 3
    torsion = [o for o in objs if o.t > 1]
    assert len(torsion) == 6
    assert all(o.sizes == (2, 2) and o.labels == (1, 1) for o in torsion)
    assert enumerate_ghat(1) == []


def test_derangement_values():
    frozen = [1, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496]
    assert [inclusion_exclusion(n) for n in range(10)] == frozen
    assert [derangements(n) for n in range(10)] == frozen


def test_curious_formula_terms():
    # n = 4: one composition (4) with weight 3, six (2,2) splits with weight 1
    assert curious_sum(4) == 1 * 3 + 6 * 1 == 9
    assert all(factorial_split(n) == factorial(n) for n in range(1, 13))


def test_derangement_suite():
    rows = derangement_suite(9)
    assert all(r["ok"] for r in rows)
    assert rows[4]["enumerated"] == 44
    assert rows[0]["derangements"] == 0
    with pytest.raises(ValueError):
        derangement_suite(21)


def test_object_validation():
    with pytest.raises(ValueError):
        GhatObject.make([[1]], [1])
    with pytest.raises(ValueError):
        GhatObject.make([[1, 2]], [2])
    with pytest.raises(ValueError):
        GhatObject.make([[1, 2], [2, 3]], [1, 1])
    with pytest.raises(ValueError):
        GhatObject.from_text("1,2;x")


def test_text_and_json():
    o = GhatObject.make([[1, 3], [2, 4, 5]], [1, 2])
    assert o.to_text() == "1,3|2,4,5;1,2"
    assert GhatObject.from_text(o.to_text()) == o
    assert GhatObject.from_json(o.to_json()) == o
    assert json.loads(dumps_objects([o])) == [{"blocks": [[1, 3], [2, 4, 5]], "labels": [1, 2]}]
    assert o.chain() == (mask_of([1, 3]),)


def test_group_action_examples():
    n3 = GhatObject.make([[1, 2, 3]], [1])
    assert cremona(n3) == GhatObject.make([[1, 2, 3]], [2])
    assert all(cremona(cremona(o)) == o for o in enumerate_ghat(5))
    g = GroupElement(False, (2, 1, 3, 4))
    o = GhatObject.make([[1, 3], [2, 4]], [1, 1])
    assert group_act(g, o) == GhatObject.make([[2, 3], [1, 4]], [1, 1])


def test_cremona_reverses_blocks():
    o = GhatObject.make([[1, 2], [3, 4, 5]], [1, 1])
    assert cremona(o) == GhatObject.make([[3, 4, 5], [1, 2]], [2, 1])


def test_compare_examples():
    n = 4
    full = list(range(1, n + 1))
    a2, a1 = GhatObject.make([full], [2]), GhatObject.make([full], [1])
    assert order_sequence(a2, Order.LEX) == (2, -4)
    assert compare(a2, a1, Order.LEX) == 1
    assert compare(a1, a1, Order.LEX_PRIME) == 0
    T = GhatObject.make([[1, 2, 3], [4, 5, 6, 7, 8]], [1, 3])
    Tp = GhatObject.make([[1, 2, 3], [4, 5], [6, 7, 8]], [2, 1, 1])
    assert order_sequence(T, "lex") == (1, -3, 3, -5)
    assert compare(T, Tp, "lex") == -1
    with pytest.raises(ValueError):
        compare(a1, GhatObject.make([[1, 2, 3]], [1]))


def test_end_data_examples():
    T = GhatObject.make([[1, 2, 3], [4, 5, 6, 7, 8]], [1, 3])
    Tp = GhatObject.make([[1, 2, 3], [4, 5], [6, 7, 8]], [2, 1, 1])
    assert end_data_decide(Tp, T).verdict is Verdict.VANISH
    assert end_data_decide(T, Tp).verdict is Verdict.INCONCLUSIVE
    A = GhatObject.make([[1, 2], [3, 4, 5], [6, 7]], [1, 1, 1])
    B = GhatObject.make([[1, 2], [3, 4, 5], [6, 7]], [1, 2, 1])
    dec = end_data_decide(A, B)
    assert dec.verdict is Verdict.RECURSE
    assert dec.stripped == (GhatObject.make([[3, 4, 5]], [1]), GhatObject.make([[3, 4, 5]], [2]))
    two = GhatObject.make([[1, 2], [3, 4]], [1, 1])
    assert end_data_decide(two, two).verdict is Verdict.INCONCLUSIVE
    with pytest.raises(ValueError):
        end_data_decide(GhatObject.make([[1, 2, 3, 4]], [1]), two)
