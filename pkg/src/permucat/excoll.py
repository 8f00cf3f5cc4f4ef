"""Exceptionality certificates for the collection G-hat.

Vanishing of RHom(T, T') is certified the way the ordering argument does it:
pass to W = Z n Z', and for every sum D of the divisors containing both
supports show that some Kunneth factor of Hom(L|W, L'(D + N)|W) is acyclic,
where N is the sum of the divisors cutting out Z but not Z'.  Each factor is
checked with the toric cohomology oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import toric
from .combinat import (GhatObject, Order, compare, cremona, elements_of, enumerate_ghat,
                       order_key, popcount)
from .picard import (DivisorClass, FactorizedClass, Model, boundary, combo_class, lift_bundle,
                     restrict_combo, tdivisor_combo)


# --- factor arithmetic ----------------------------------------------------

def _add(acc: dict, combo: dict, c: int = 1) -> None:
    for g, v in combo.items():
        acc[g] = acc.get(g, 0) + c * v


def _chain_of(blocks: Sequence[int]) -> tuple[int, ...]:
    return toric.stratum_chain(blocks)


def _blocks_of_chain(chain: Sequence[int], ground: int) -> tuple[int, ...]:
    out, prev = [], 0
    for s in list(chain) + [ground]:
        out.append(s & ~prev)
        prev = s
    return tuple(out)


def is_chain(rays: Iterable[int]) -> bool:
    rs = sorted(set(rays), key=popcount)
    return all(a & ~b == 0 for a, b in zip(rs, rs[1:]))


def label_combos(obj: GhatObject, w_blocks: Sequence[int]) -> list[dict]:
    """Restriction of the box product of G^dual labels from Z to a refinement W."""
    out = []
    pos = 0
    for b, a in zip(obj.blocks, obj.labels):
        sub = []
        acc = 0
        while acc != b:
            sub.append(w_blocks[pos])
            acc |= w_blocks[pos]
            pos += 1
        if acc & ~b:
            raise ValueError("W does not refine the support")
        out += restrict_combo(Model(b, -1), {("G", a): -1}, sub)
    return out


def factor_cohomology(model: Model, cls: DivisorClass) -> toric.CohomologyTable:
    if model.n == 1:
        return toric.CohomologyTable((1,))
    fan = toric.lm_fan(model.n)
    return toric.cohomology(fan, toric.class_to_tdivisor(cls, fan))


def factor_chi(model: Model, cls: DivisorClass) -> int:
    if model.n == 1:
        return 1
    fan = toric.lm_fan(model.n)
    return toric.euler_characteristic(fan, toric.class_to_tdivisor(cls, fan))


def kunneth(tables: Sequence[toric.CohomologyTable]) -> toric.CohomologyTable:
    h = [1]
    for t in tables:
        out = [0] * (len(h) + len(t.h) - 1)
        for i, x in enumerate(h):
            for j, y in enumerate(t.h):
                out[i + j] += x * y
        h = out
    return toric.CohomologyTable(tuple(h))


# --- self-Ext ---------------------------------------------------------------

@dataclass
class SelfExtCertificate:
    obj: GhatObject
    structure: toric.CohomologyTable
    records: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.structure.h[0] == 1 and sum(self.structure.h) == 1


def self_ext_certificate(obj: GhatObject) -> SelfExtCertificate:
    """RHom(O_Z, O_Z) reduces to R Gamma(O_Z) = k once every O_Z(sum of cutting divisors) is acyclic."""
    blocks, chain = obj.blocks, obj.chain()
    models = [Model(b, -1) for b in blocks]
    structure = kunneth([factor_cohomology(m, DivisorClass(m)) for m in models])
    cert = SelfExtCertificate(obj, structure)
    ambient = Model(obj.ground, -1)
    for k in range(1, len(chain) + 1):
        for sub in itertools.combinations(chain, k):
            parts = restrict_combo(ambient, {("D", s): 1 for s in sub}, blocks)
            found = None
            for idx, (m, p) in enumerate(zip(models, parts)):
                if factor_cohomology(m, combo_class(m, p)).acyclic:
                    found = idx
                    break
            rec = {"subsetD": [list(elements_of(s)) for s in sub], "witnessFactor": found}
            (cert.records if found is not None else cert.failures).append(rec)
    return cert


# --- pairs ----------------------------------------------------------------

@dataclass
class VanishingCertificate:
    T: GhatObject
    Tp: GhatObject
    order: str
    status: str                   # "certified", "disjoint" or "failed"
    records: list[dict] = field(default_factory=list)
    case_agrees: bool = True

    @property
    def ok(self) -> bool:
        return self.status in ("certified", "disjoint")

    def to_json(self) -> dict:
        return {"pair": [self.T.to_text(), self.Tp.to_text()], "order": self.order,
                "status": self.status, "records": self.records, "caseAgrees": self.case_agrees}


def intersection(T: GhatObject, Tp: GhatObject):
    """(W blocks, common rays, rays of N) or None when the supports are disjoint."""
    c, cp = set(T.chain()), set(Tp.chain())
    union = c | cp
    if not is_chain(union):
        return None
    chain = tuple(sorted(union, key=popcount))
    return _blocks_of_chain(chain, T.ground), tuple(sorted(c & cp, key=popcount)), \
        tuple(sorted(c - cp, key=popcount))


def hom_factors(T: GhatObject, Tp: GhatObject, D: Iterable[int]) -> FactorizedClass | None:
    """Per-factor classes of Hom(L|W, L'(D + N)|W); None when W is empty."""
    inter = intersection(T, Tp)
    if inter is None:
        return None
    w_blocks, _, normal = inter
    left, right = label_combos(T, w_blocks), label_combos(Tp, w_blocks)
    twist = restrict_combo(Model(T.ground, -1), {("D", s): 1 for s in set(D) | set(normal)}, w_blocks)
    factors = []
    for b, l, r, tw in zip(w_blocks, left, right, twist):
        acc: dict = {}
        _add(acc, l, -1)
        _add(acc, r)
        _add(acc, tw)
        m = Model(b, -1)
        factors.append((m, combo_class(m, {g: v for g, v in acc.items() if v})))
    return FactorizedClass(tuple(factors))


def predicted_case(T: GhatObject, Tp: GhatObject, D: Iterable[int]) -> tuple[int, int] | None:
    """(case number, index of the vanishing factor of W) from the lex case analysis."""
    D = set(D)
    if intersection(T, Tp) is None:
        return None
    prefix = 0
    for i in range(min(T.t, Tp.t)):
        a, k = T.labels[i], popcount(T.blocks[i])
        ap, kp = Tp.labels[i], popcount(Tp.blocks[i])
        if a > ap:
            return 1, i
        if a < ap:
            return None
        if k < kp:
            return 2, i
        if k > kp:
            return None
        prefix |= T.blocks[i]
        if prefix in D:
            return 3, i
        # case 4: identical component, move on
    return None


def _cremona_D(D: Iterable[int], ground: int) -> set[int]:
    return {ground & ~s for s in D}


def pair_vanishing_certificate(T: GhatObject, Tp: GhatObject, order_kind: Order | str = Order.LEX,
                               require_order: bool = True) -> VanishingCertificate:
    """Certify RHom(T, T') = 0 for T > T' in the given order."""
    kind = Order(order_kind)
    if T.ground != Tp.ground:
        raise ValueError("objects live on different ground sets")
    if require_order and compare(T, Tp, kind) <= 0:
        raise ValueError("the first object must be the larger one")
    inter = intersection(T, Tp)
    if inter is None:
        return VanishingCertificate(T, Tp, kind.value, "disjoint")
    w_blocks, common, _ = inter
    nf = len(w_blocks)
    cert = VanishingCertificate(T, Tp, kind.value, "certified")
    for k in range(len(common) + 1):
        for D in itertools.combinations(common, k):
            fc = hom_factors(T, Tp, D)
            found = None
            for idx, (m, cls) in enumerate(fc.factors):
                if factor_cohomology(m, cls).acyclic:
                    found = idx
                    break
            if kind is Order.LEX:
                pred = predicted_case(T, Tp, D)
            else:
                pred = predicted_case(cremona(T), cremona(Tp), _cremona_D(D, T.ground))
                if pred is not None:
                    pred = (pred[0], nf - 1 - pred[1])
            agrees = None
            if pred is not None:
                m, cls = fc.factors[pred[1]]
                agrees = factor_cohomology(m, cls).acyclic
                cert.case_agrees &= agrees
            cert.records.append({"subsetD": [list(elements_of(s)) for s in D],
                                 "witnessFactor": found,
                                 "case": pred[0] if pred else None,
                                 "caseFactor": pred[1] if pred else None})
            if found is None:
                cert.status = "failed"
    return cert


def certify_vanishing(T: GhatObject, Tp: GhatObject) -> bool:
    """Brute-force sufficient test for RHom(T, T') = 0, with no order assumed."""
    inter = intersection(T, Tp)
    if inter is None:
        return True
    common = inter[1]
    for k in range(len(common) + 1):
        for D in itertools.combinations(common, k):
            fc = hom_factors(T, Tp, D)
            if not any(factor_cohomology(m, c).acyclic for m, c in fc.factors):
                return False
    return True


# --- whole collection ---------------------------------------------------

@dataclass
class CollectionReport:
    n: int
    objects: int
    self_ext_failures: list[str]
    pairs: dict                       # order -> number of certified pairs
    failures: list[dict]
    case_mismatches: list[dict]
    line_bundle_right: int
    line_bundle_failures: list[str]

    @property
    def ok(self) -> bool:
        return not (self.self_ext_failures or self.failures or self.case_mismatches
                    or self.line_bundle_failures)


def verify_collection(n: int, orders: Sequence[Order | str] = (Order.LEX, Order.LEX_PRIME),
                      allow_six: bool = False) -> CollectionReport:
    if n > 5 and not (allow_six and n == 6):
        raise ValueError("collection verification is limited to n <= 5 (n = 6 behind a flag)")
    objs = enumerate_ghat(n)
    self_bad = [o.to_text() for o in objs if o.t > 1 and not self_ext_certificate(o).ok]
    pairs, failures, mismatches = {}, [], []
    for kind in orders:
        kind = Order(kind)
        ordered = sorted(objs, key=lambda o: order_key(o, kind))
        count = 0
        for i, j in itertools.combinations(range(len(ordered)), 2):
            big, small = ordered[j], ordered[i]
            cert = pair_vanishing_certificate(big, small, kind)
            count += 1
            if not cert.ok:
                failures.append(cert.to_json())
            elif not cert.case_agrees:
                mismatches.append(cert.to_json())
        pairs[kind.value] = count
    lb_count, lb_bad = 0, []
    for L in objs:
        if L.t != 1:
            continue
        for Tp in objs:
            if Tp.t == 1:
                continue
            lb_count += 1
            if not certify_vanishing(L, Tp):
                lb_bad.append(f"{L.to_text()} -> {Tp.to_text()}")
    return CollectionReport(n, len(objs), self_bad, pairs, failures, mismatches, lb_count, lb_bad)


# --- Euler pairing -------------------------------------------------------

def lift_of(obj: GhatObject) -> DivisorClass:
    return lift_bundle(obj.blocks, obj.labels)


def lift_from_right(obj: GhatObject) -> DivisorClass:
    """A second lift: run the construction on the Cremona image and map back."""
    return toric.cremona_class(lift_bundle(cremona(obj).blocks, cremona(obj).labels))


def _signed_subsets(chain: Sequence[int]):
    for k in range(len(chain) + 1):
        for sub in itertools.combinations(chain, k):
            yield (-1) ** k, sub


def euler_pairing(T: GhatObject, Tp: GhatObject, lift=lift_of) -> int:
    """chi(T, T') with [T] = sum_D (-1)^|D| [L(-D)] from the Koszul resolution of O_Z.

    The line-bundle differences are restricted to Z' (or, when T' is a line bundle,
    dualized onto Z) so that the toric Euler characteristics run on the strata.
    """
    ambient = Model(T.ground, -1)
    if Tp.t > 1 or T.t == 1:
        L = lift(T)
        target = Tp
        total = 0
        for sign, D in _signed_subsets(T.chain()):
            combo = toric_combo(ambient, -L)
            _add(combo, {("D", s): 1 for s in D})
            parts = restrict_combo(ambient, combo, target.blocks)
            right = label_combos(target, target.blocks)
            chi = 1
            for b, p, r in zip(target.blocks, parts, right):
                acc = dict(p)
                _add(acc, r)
                m = Model(b, -1)
                chi *= factor_chi(m, combo_class(m, acc))
            total += sign * chi
        return total
    # T torsion, T' a line bundle: chi(O_Z ⊗ L^dual ⊗ L') with Serre-type duality on Z
    Lp = lift(Tp)
    codim = T.t - 1
    combo = toric_combo(ambient, Lp)
    _add(combo, {("D", s): 1 for s in T.chain()})
    parts = restrict_combo(ambient, combo, T.blocks)
    left = label_combos(T, T.blocks)
    chi = 1
    for b, p, l in zip(T.blocks, parts, left):
        acc = dict(p)
        _add(acc, l, -1)
        m = Model(b, -1)
        chi *= factor_chi(m, combo_class(m, acc))
    return (-1) ** codim * chi


def toric_combo(model: Model, cls: DivisorClass) -> dict:
    return dict(tdivisor_combo(model, cls))


def euler_pairing_full(T: GhatObject, Tp: GhatObject) -> int:
    """Double Koszul sum evaluated entirely on LM_N; slow, used as a cross-check."""
    n = popcount(T.ground)
    fan = toric.lm_fan(n)
    L, Lp = lift_of(T), lift_of(Tp)
    model = L.model
    total = 0
    for s1, D in _signed_subsets(T.chain()):
        for s2, Dp in _signed_subsets(Tp.chain()):
            cls = Lp - L
            for s in D:
                cls = cls + boundary(model, s)
            for s in Dp:
                cls = cls - boundary(model, s)
            total += s1 * s2 * toric.euler_characteristic(fan, toric.class_to_tdivisor(cls, fan))
    return total


@dataclass
class GramMatrix:
    objects: list[GhatObject]
    rows: list[list[int]]

    @property
    def unitriangular(self) -> bool:
        """Ones on the diagonal and chi(T, T') = 0 whenever T comes after T'."""
        k = len(self.rows)
        return all(self.rows[i][i] == 1 for i in range(k)) and \
            all(self.rows[i][j] == 0 for i in range(k) for j in range(i))

    def to_csv(self) -> str:
        head = "," + ",".join(o.to_text().replace(",", " ") for o in self.objects)
        lines = [head]
        for o, row in zip(self.objects, self.rows):
            lines.append(o.to_text().replace(",", " ") + "," + ",".join(map(str, row)))
        return "\n".join(lines) + "\n"


def euler_pairing_matrix(n: int, lift=lift_of) -> GramMatrix:
    if n > 5:
        raise ValueError("the Gram matrix is limited to n <= 5")
    objs = sorted(enumerate_ghat(n), key=lambda o: order_key(o, Order.LEX))
    rows = [[euler_pairing(a, b, lift) for b in objs] for a in objs]
    return GramMatrix(objs, rows)
