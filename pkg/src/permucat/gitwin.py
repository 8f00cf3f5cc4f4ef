"""Linearized line bundles on (P^1)^n, Kempf-Ness windows and the window collections.

G_m acts on P^1 by z.(x, y) = (zx, z^-1 y).  A bundle O(j) (x) z^p is stored as the
vector j and the integer p; for even n = 2r a bundle on the blow-up W_n of the
strictly semistable points p_T (|T| = r) also carries coefficients alpha_T of
the exceptional divisors E_T.

Weights at the fixed point Z_I (infinity on I, zero elsewhere) for lambda(z) = z:
    X_I = -sum_{i in I} j_i + sum_{i not in I} j_i + p.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .combinat import elements_of, mask_of, popcount

MAX_N = 9


def _subsets(n: int, k: int | None = None):
    for s in range(1 << n):
        if k is None or popcount(s) == k:
            yield s


# --- bundles --------------------------------------------------------------

@dataclass(frozen=True)
class EqLineBundle:
    j: tuple[int, ...]
    p: int
    alpha: tuple[tuple[int, int], ...] | None = None   # sorted (T mask, alpha_T), even n only

    @property
    def n(self) -> int:
        return len(self.j)

    @property
    def alpha_map(self) -> dict[int, int]:
        return dict(self.alpha or ())

    @property
    def minus_set(self) -> int:
        """E, the positions of the -1 entries (meaningful for 0/-1 vectors)."""
        return mask_of(i + 1 for i, x in enumerate(self.j) if x == -1)

    @property
    def s(self) -> int:
        return sum(1 for x in self.j if x == -1)

    def key(self) -> tuple:
        return (self.j, self.p, self.alpha or ())

    def to_json(self) -> dict:
        out = {"j": list(self.j), "p": self.p}
        if self.alpha is not None:
            out["alpha"] = {",".join(map(str, elements_of(t))): v for t, v in self.alpha}
        return out

    def __str__(self):
        body = f"O({','.join(map(str, self.j))})z^{self.p}"
        if self.alpha:
            body += "(" + " ".join(f"{v}E{{{','.join(map(str, elements_of(t)))}}}" for t, v in self.alpha if v) + ")"
        return body


def bundle_from_set(n: int, E: int, p: int, alpha: dict[int, int] | None = None) -> EqLineBundle:
    j = tuple(-1 if E >> i & 1 else 0 for i in range(n))
    return EqLineBundle(j, p, None if alpha is None else tuple(sorted(alpha.items())))


def x_value(n: int, E: int, p: int, T: int) -> Fraction:
    """x_T = (p + |E n T| - |E n T^c|) / 2."""
    return Fraction(p + popcount(E & T) - popcount(E & ~T & ((1 << n) - 1)), 2)


def alpha_value(n: int, E: int, p: int, T: int) -> int:
    x = x_value(n, E, p, T)
    if x.denominator != 1:
        raise ValueError("p + |E| must be even")
    return -abs(int(x))


def l_bundle(n: int, E: int, p: int) -> EqLineBundle:
    """L_{E,p} on the blow-up: alpha_T = -|x_T| for every |T| = n/2."""
    if n % 2:
        raise ValueError("L_{E,p} is defined for even n")
    if (p + popcount(E)) % 2:
        raise ValueError("p + |E| must be even")
    r = n // 2
    return bundle_from_set(n, E, p, {T: alpha_value(n, E, p, T) for T in _subsets(n, r)})


@dataclass(frozen=True)
class TorsionSheaf:
    """O(-a, -b) on the divisor delta_T = P^{r-1} x P^{r-1}."""

    T: int
    a: int
    b: int

    def key(self) -> tuple:
        return (-(self.a + self.b), elements_of(self.T), self.a, self.b)

    def to_json(self) -> dict:
        return {"T": list(elements_of(self.T)), "a": self.a, "b": self.b}


# --- enumeration ----------------------------------------------------------

def euler_odd(n: int) -> int:
    return n * comb(n - 1, (n - 1) // 2)


def euler_even(n: int) -> int:
    r = n // 2
    return r * r * comb(n, r)


def euler_identities(n: int) -> bool:
    if n % 2:
        alt = sum((n - 2 * i) * comb(n, i) for i in range((n + 1) // 2))
        return euler_odd(n) == alt
    r = n // 2
    alt = sum((n - 2 * i) * comb(n, i) for i in range(r))
    return euler_even(n) == (r - 1) ** 2 * comb(n, r) + (n - 1) * comb(n, r) and r * comb(n, r) == alt


def _sym_range(k: int) -> list[int]:
    return list(range(-k, k + 1, 2)) if k >= 0 else []


def odd_types(n: int) -> list[tuple[int, int]]:
    """(s, p) types of the odd window collection."""
    r = (n - 1) // 2
    out = []
    case_a = r % 2 == 1
    for l in range(r + 1):
        # l entries equal to -1
        if case_a:
            if l <= r - 1:
                out += [(l, p) for p in _sym_range(r - 1 - l)]
        else:
            out += [(l, p) for p in _sym_range(r - l)]
        # l entries equal to 0
        if case_a:
            out += [(n - l, p) for p in _sym_range(r - l)]
        elif l <= r - 1:
            out += [(n - l, p) for p in _sym_range(r - 1 - l)]
    return sorted(set(out))


def even_types(n: int) -> list[tuple[int, int]]:
    r = n // 2
    out = []
    case_a = r % 2 == 0
    for l in range(r + 1):
        if case_a:
            if l <= r - 2:
                out += [(l, p) for p in _sym_range(r - 2 - l)]
            out += [(n - l, p) for p in _sym_range(r - l)]
        elif l < r:
            out += [(l, p) for p in _sym_range(r - 1 - l)]
            out += [(n - l, p) for p in _sym_range(r - 1 - l)]
    return sorted(set(out))


def torsion_labels(r: int) -> list[tuple[int, int]]:
    out = [(a, b) for a in range(1, r) for b in range(1, r)]
    out += [(0, b) for b in range(1, r) if 2 * b < r]
    out += [(a, 0) for a in range(1, r) if 2 * a < r]
    return out


@dataclass
class WindowCollection:
    n: int
    bundles: list[EqLineBundle]
    torsion: list[TorsionSheaf] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.bundles) + len(self.torsion)

    def to_json(self) -> list:
        return [t.to_json() for t in self.torsion] + [b.to_json() for b in self.bundles]


def _bundle_order(b: EqLineBundle) -> tuple:
    return (-b.s, b.key())


def enum_windows(n: int) -> WindowCollection:
    """Odd n: the window line bundles.  Even n: torsion sheaves first, then L_{E,p}."""
    if not 3 <= n <= MAX_N:
        raise ValueError(f"n must lie in 3..{MAX_N}")
    if n % 2:
        bundles = [bundle_from_set(n, E, p) for s, p in odd_types(n) for E in _subsets(n, s)]
        return WindowCollection(n, sorted(bundles, key=_bundle_order))
    r = n // 2
    bundles = [l_bundle(n, E, p) for s, p in even_types(n) for E in _subsets(n, s)]
    torsion = [TorsionSheaf(T, a, b) for T in _subsets(n, r) for a, b in torsion_labels(r)]
    return WindowCollection(n, sorted(bundles, key=_bundle_order), sorted(torsion, key=TorsionSheaf.key))


# --- Kempf-Ness strata and windows ---------------------------------------

@dataclass(frozen=True)
class Stratum:
    kind: str          # "lambda", "lambda_prime", "blowup_plus", "blowup_minus"
    subset: int


@dataclass(frozen=True)
class WindowSpec:
    stratum: Stratum
    w: int
    eta: int

    def contains(self, weight: int) -> bool:
        return self.w <= weight < self.w + self.eta


def unstable_strata(n: int) -> list[Stratum]:
    out = []
    for I in _subsets(n):
        k = popcount(I)
        if 2 * k > n:
            out.append(Stratum("lambda", I))
        elif 2 * k < n:
            out.append(Stratum("lambda_prime", I))
        else:
            out += [Stratum("blowup_plus", I), Stratum("blowup_minus", I)]
    return out


def _check_unstable(n: int, st: Stratum) -> None:
    k = popcount(st.subset)
    ok = {"lambda": 2 * k > n, "lambda_prime": 2 * k < n,
          "blowup_plus": 2 * k == n, "blowup_minus": 2 * k == n}.get(st.kind)
    if not ok:
        raise ValueError(f"{st} is not an unstable stratum for n={n}")


def window_spec(n: int, st: Stratum) -> WindowSpec:
    _check_unstable(n, st)
    k = popcount(st.subset)
    if n % 2:
        m = (n - 1) // 4
        w = -2 * m
    else:
        r = n // 2
        m = r // 2
        w = -2 * m + 2 if r % 2 == 0 else -2 * m
    if st.kind == "lambda":
        return WindowSpec(st, w, 2 * k)
    if st.kind == "lambda_prime":
        return WindowSpec(st, w, 2 * (n - k))
    return WindowSpec(st, -4 * (n // 4), 2 * n)


def fixed_weight(bundle: EqLineBundle, I: int) -> int:
    """lambda-weight of the pulled back bundle at Z_I."""
    return sum(-x if I >> i & 1 else x for i, x in enumerate(bundle.j)) + bundle.p


def kn_weight(bundle: EqLineBundle, st: Stratum) -> int:
    n = bundle.n
    _check_unstable(n, st)
    X = fixed_weight(bundle, st.subset)
    if st.kind == "lambda":
        return X
    if st.kind == "lambda_prime":
        return -X
    alpha = bundle.alpha_map.get(st.subset, 0)
    # the minus stratum is the S_2 image of the plus stratum of the complement
    return X + 2 * alpha if st.kind == "blowup_plus" else -X + 2 * alpha


def window_membership(bundle: EqLineBundle, spec: WindowSpec) -> bool:
    return spec.contains(kn_weight(bundle, spec.stratum))


# --- descent --------------------------------------------------------------

def descent_check(bundle: EqLineBundle, parity_case: str | None = None) -> bool:
    """P G_m descent: odd n needs sum j + p even; even n the conditions over all I."""
    n = bundle.n
    case = parity_case or ("odd" if n % 2 else "even")
    if case == "odd":
        return (sum(bundle.j) + bundle.p) % 2 == 0
    alpha = bundle.alpha_map
    for I in _subsets(n):
        X = fixed_weight(bundle, I)
        if 2 * popcount(I) != n:
            if X % 2:
                return False
        else:
            a = alpha.get(I, 0)
            if (X + 2 * a) % 4 or (X - 2 * a) % 4:
                return False
    return True


# --- weight-graded cohomology ---------------------------------------------

def p1_table(m: int) -> Counter:
    """{(degree, weight): dim} for O(m) on P^1."""
    out: Counter = Counter()
    if m >= 0:
        for w in range(-m, m + 1, 2):
            out[(0, w)] += 1
    elif m <= -2:
        for w in range(m + 2, -m - 1, 2):
            out[(1, w)] += 1
    return out


def fiber_weights(m: int) -> tuple[int, int]:
    """Weights of O(m) at 0 and at infinity."""
    return m, -m


def eq_cohomology_p1n(j: Sequence[int]) -> Counter:
    total: Counter = Counter({(0, 0): 1})
    for m in j:
        t = p1_table(m)
        if not t:
            return Counter()
        nxt: Counter = Counter()
        for (d1, w1), x in total.items():
            for (d2, w2), y in t.items():
                nxt[(d1 + d2, w1 + w2)] += x * y
        total = nxt
    return total


def weight_part(table: Counter, weight: int) -> dict[int, int]:
    return {d: x for (d, w), x in table.items() if w == weight and x}


def pair_check_odd(Lp: EqLineBundle, L: EqLineBundle) -> bool:
    """True when RHom(L', L) vanishes: the weight p' - p part of H^*(O(j - j')) is zero."""
    if not (descent_check(Lp, "odd") and descent_check(L, "odd")):
        raise ValueError("bundles do not descend")
    diff = [a - b for a, b in zip(L.j, Lp.j)]
    return not weight_part(eq_cohomology_p1n(diff), Lp.p - L.p)


def pair_check_even(Lp: EqLineBundle, L: EqLineBundle) -> tuple[bool, str | None]:
    """Sufficient test for RHom(L', L) = 0 between blow-up bundles with |E| >= |E'|.

    The blow-up part is peeled one exceptional divisor at a time; the restriction of
    M(-iE_T) to E_T contributes the weights w_T + 2j with |j| <= i.
    """
    n = L.n
    if L.s < Lp.s:
        raise ValueError("expects |E| >= |E'|")
    target = Lp.p - L.p
    diff = [a - b for a, b in zip(L.j, Lp.j)]
    if weight_part(eq_cohomology_p1n(diff), target):
        return False, "H*(M0)"
    a, ap = L.alpha_map, Lp.alpha_map
    for T in _subsets(n, n // 2):
        beta = a.get(T, 0) - ap.get(T, 0)
        if beta <= 0:
            continue
        w0 = (fixed_weight(L, T) - L.p) - (fixed_weight(Lp, T) - Lp.p)
        for i in range(beta):
            for jj in range(-i, i + 1):
                if w0 + 2 * jj == target:
                    return False, f"E_{{{','.join(map(str, elements_of(T)))}}} i={i}"
    return True, None


# --- projective-space cohomology and the torsion sheaves ------------------

def pk_total(k: int, d: int) -> int:
    """Total dimension of H^*(P^k, O(d))."""
    if d >= 0:
        return comb(d + k, k)
    if d <= -k - 1:
        return comb(-d - 1, k)
    return 0


def pp_total(r: int, c: int, d: int) -> int:
    return pk_total(r - 1, c) * pk_total(r - 1, d)


def torsion_criterion(r: int, ab: tuple[int, int], abp: tuple[int, int]) -> bool:
    """True when RHom(O(-a',-b'), O(-a,-b)) is nonzero, from the four listed conditions."""
    a, b = ab
    ap, bp = abp
    return ((ap >= a and bp >= b) or (ap == 0 and a == r - 1 and bp > b)
            or (bp == 0 and b == r - 1 and ap > a) or (ap == 0 and bp == 0 and a == b == r - 1))


def torsion_rhom_dim(r: int, ab: tuple[int, int], abp: tuple[int, int]) -> int:
    """dim RHom(O_d(-a',-b'), O_d(-a,-b)) = h(F) + h(F(-1,-1)) with F = O(a'-a, b'-b).

    The derived restriction of O_d to the divisor d splits as O_d plus O_d(-d)[1],
    and O_d(d) = O(-1,-1).
    """
    a, b = ab
    ap, bp = abp
    c, d = ap - a, bp - b
    return pp_total(r, c, d) + pp_total(r, c - 1, d - 1)


def torsion_pair_check(r: int, ab: tuple[int, int], abp: tuple[int, int]) -> dict:
    if not all(0 <= x < r for x in ab + abp):
        raise ValueError("labels must lie in 0..r-1")
    dim = torsion_rhom_dim(r, ab, abp)
    crit = torsion_criterion(r, ab, abp)
    if ab == abp:
        verdict = "endo_scalar"
    else:
        verdict = "not_pair" if crit else "exceptional_pair"
    agrees = (dim != 0) == crit and (ab != abp or dim == 1)
    return {"r": r, "ab": list(ab), "abp": list(abp), "verdict": verdict, "dim": dim, "agrees": agrees}


def torsion_line_check(r: int, tor: TorsionSheaf, L: EqLineBundle) -> bool:
    """RHom(L, O_d(-a,-b)) = H^*(L^dual restricted (x) O(-a,-b)) vanishes."""
    n = L.n
    X = x_value(n, L.minus_set, L.p, tor.T)
    alpha = L.alpha_map[tor.T]
    dual = (0, alpha) if X >= 0 else (alpha, 0)
    return pp_total(r, dual[0] - tor.a, dual[1] - tor.b) == 0


# --- exceptionality of the enumerated collections ------------------------

@dataclass
class ExceptionalityReport:
    n: int
    pairs: int
    failures: list[str]
    both_ways_failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.both_ways_failures


def check_collection_odd(n: int) -> ExceptionalityReport:
    col = enum_windows(n).bundles
    fails, both = [], []
    count = 0
    for i, L in enumerate(col):
        for Lp in col[i + 1:]:
            count += 1
            if not pair_check_odd(Lp, L):
                fails.append(f"{Lp} -> {L}")
            if Lp.s == L.s and not pair_check_odd(L, Lp):
                both.append(f"{L} -> {Lp}")
    return ExceptionalityReport(n, count, fails, both)


def check_collection_even(n: int) -> ExceptionalityReport:
    col = enum_windows(n)
    r = n // 2
    fails, both = [], []
    count = 0
    tors = col.torsion
    for i, A in enumerate(tors):
        for B in tors[i + 1:]:
            if A.T != B.T:
                continue           # distinct divisors of the same size are disjoint
            count += 1
            if torsion_criterion(r, (A.a, A.b), (B.a, B.b)):
                fails.append(f"{B} -> {A}")
    for tor in tors:
        for L in col.bundles:
            count += 1
            if not torsion_line_check(r, tor, L):
                fails.append(f"{L} -> {tor}")
    bl = col.bundles
    for i, L in enumerate(bl):
        for Lp in bl[i + 1:]:
            count += 1
            if not pair_check_even(Lp, L)[0]:
                fails.append(f"{Lp} -> {L}")
            if Lp.s == L.s and not pair_check_even(L, Lp)[0]:
                both.append(f"{L} -> {Lp}")
    return ExceptionalityReport(n, count, fails, both)


def window_report(n: int) -> dict:
    col = enum_windows(n)
    strata = unstable_strata(n)
    specs = [window_spec(n, st) for st in strata]
    outside, no_descent = [], []
    for b in col.bundles:
        if not descent_check(b):
            no_descent.append(str(b))
        for sp in specs:
            if not window_membership(b, sp):
                outside.append(f"{b} @ {sp.stratum.kind}{list(elements_of(sp.stratum.subset))}")
    return {"n": n, "bundles": len(col.bundles), "torsion": len(col.torsion),
            "outside": outside, "no_descent": no_descent}


def equivariance_check(n: int) -> bool:
    col = enum_windows(n)
    keys = {b.key() for b in col.bundles}
    perms = [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]

    def move(mask, perm):
        return sum(1 << perm[i] for i in range(n) if mask >> i & 1)

    for b in col.bundles:
        for perm in perms:
            j = [0] * n
            for i in range(n):
                j[perm[i]] = b.j[i]
            alpha = None if b.alpha is None else tuple(sorted((move(t, perm), v) for t, v in b.alpha))
            if (tuple(j), b.p, alpha or ()) not in keys:
                return False
        full = (1 << n) - 1
        alpha = None if b.alpha is None else tuple(sorted((full & ~t, v) for t, v in b.alpha))
        if (b.j, -b.p, alpha or ()) not in keys:
            return False
    tkeys = {(t.T, t.a, t.b) for t in col.torsion}
    full = (1 << n) - 1
    return all((full & ~t.T, t.b, t.a) in tkeys for t in col.torsion)


# --- dictionary between tautological classes and linearized bundles -------

@dataclass(frozen=True)
class LatticeVec:
    """(j, alpha, p) with rational entries; alpha indexed by the T of size n/2."""

    j: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]
    p: Fraction

    def __add__(self, o):
        return LatticeVec(tuple(a + b for a, b in zip(self.j, o.j)),
                          tuple(a + b for a, b in zip(self.alpha, o.alpha)), self.p + o.p)

    def __mul__(self, k):
        k = Fraction(k)
        return LatticeVec(tuple(a * k for a in self.j), tuple(a * k for a in self.alpha), self.p * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, o):
        return self + (-o)


class Dictionary:
    """Tautological classes of Z_N as linearized bundles (on W_n when n is even)."""

    def __init__(self, n: int):
        self.n = n
        self.even = n % 2 == 0
        self.ts = list(_subsets(n, n // 2)) if self.even else []
        self.tpos = {t: k for k, t in enumerate(self.ts)}
        self.full = (1 << n) - 1

    def vec(self, j=None, alpha=None, p=0) -> LatticeVec:
        jj = [Fraction(0)] * self.n
        for i, v in (j or {}).items():
            jj[i - 1] += v
        aa = [Fraction(0)] * len(self.ts)
        for t, v in (alpha or {}).items():
            aa[self.tpos[t]] += v
        return LatticeVec(tuple(jj), tuple(aa), Fraction(p))

    def delta_i0(self, i: int) -> LatticeVec:
        b = 1 << (i - 1)
        return self.vec({i: 1}, {t: -1 for t in self.ts if not t & b}, 1)

    def delta_iinf(self, i: int) -> LatticeVec:
        b = 1 << (i - 1)
        return self.vec({i: 1}, {t: -1 for t in self.ts if t & b}, -1)

    def psi0(self) -> LatticeVec:
        return self.vec(None, {t: 1 for t in self.ts}, -2)

    def psi_inf(self) -> LatticeVec:
        return self.vec(None, {t: 1 for t in self.ts}, 2)

    def psi_i(self, i: int) -> LatticeVec:
        return self.vec({i: -2}, {t: 1 for t in self.ts}, 0)

    def delta_T_inf(self, T: int) -> LatticeVec:
        """delta_{T u inf} for |T| = n/2."""
        return self.vec(None, {T: 2}, 0)

    def delta_T_zero(self, T: int) -> LatticeVec:
        return self.delta_T_inf(self.full & ~T)

    def bundle(self, b: EqLineBundle) -> LatticeVec:
        return self.vec({i + 1: x for i, x in enumerate(b.j)}, b.alpha_map, b.p)

    def restrict(self, v: LatticeVec, T: int) -> tuple[Fraction, Fraction]:
        """Restriction to delta_{T u inf} = P^{r-1} x P^{r-1}."""
        inside = sum(x for i, x in enumerate(v.j) if T >> i & 1)
        outside = sum(x for i, x in enumerate(v.j) if not T >> i & 1)
        a = v.alpha[self.tpos[T]]
        q = inside - outside - v.p
        return q / 4 - a / 2, -q / 4 - a / 2


def r_bundle(n: int, E: int, p: int) -> EqLineBundle:
    return bundle_from_set(n, E, p, {T: int(x_value(n, E, p, T)) for T in _subsets(n, n // 2)})


def s_bundle(n: int, E: int, p: int) -> EqLineBundle:
    return bundle_from_set(n, E, p, {T: -int(x_value(n, E, p, T)) for T in _subsets(n, n // 2)})


def dictionary_check(n: int) -> dict:
    d = Dictionary(n)
    fails = []

    def need(ok, name):
        if not ok:
            fails.append(name)

    els = range(1, n + 1)
    if n % 2:
        for i in els:
            need(-d.delta_i0(i) + d.delta_iinf(i) == d.psi0(), f"psi0 = -delta_{i}0 + delta_{i}inf")
            need(d.psi0() == -d.psi_inf(), "psi0 = -psi_inf")
            need(d.psi_i(i) == -d.delta_i0(i) - d.delta_iinf(i), f"psi_{i} = -delta_{i}0 - delta_{i}inf")
        return {"n": n, "failures": fails, "ok": not fails}
    r = n // 2
    all_zero = sum((d.delta_T_zero(T) for T in d.ts), d.vec())
    need(d.psi0() + d.psi_inf() == all_zero, "psi0 + psi_inf = sum delta_{T u 0}")
    for i in els:
        b = 1 << (i - 1)
        lhs = d.delta_iinf(i) - d.delta_i0(i) + sum((d.delta_T_zero(T) for T in d.ts if not T & b), d.vec())
        need(d.psi0() == lhs, f"psi0 relation at {i}")
        lhs = d.delta_i0(i) - d.delta_iinf(i) + sum((d.delta_T_zero(T) for T in d.ts if T & b), d.vec())
        need(d.psi_inf() == lhs, f"psi_inf relation at {i}")
        need(d.psi_i(i) == -d.delta_i0(i) - d.delta_iinf(i), f"psi_{i} relation")
    one = Fraction(1)
    for T in d.ts:
        need(d.restrict(d.delta_T_inf(T), T) == (-one, -one), "delta_T restricted")
        need(d.restrict(d.psi_inf(), T) == (-one, 0), "psi_inf restricted")
        need(d.restrict(d.psi0(), T) == (0, -one), "psi0 restricted")
        for i in els:
            inside = T >> (i - 1) & 1
            need(d.restrict(d.delta_iinf(i), T) == ((one, 0) if inside else (0, 0)), "delta_iinf restricted")
            need(d.restrict(d.delta_i0(i), T) == ((0, 0) if inside else (0, one)), "delta_i0 restricted")
    # R, S and L for every (E, p) of matching parity in the table
    for E in _subsets(n):
        s = popcount(E)
        for p in range(-r, r + 1):
            if (p + s) % 2:
                continue
            L, R, S = (d.bundle(f(n, E, p)) for f in (l_bundle, r_bundle, s_bundle))
            xs = {T: x_value(n, E, p, T) for T in d.ts}
            base = -sum((d.delta_iinf(i) for i in elements_of(E)), d.vec())
            need(R == base + d.psi_inf() * Fraction(p - s, 2), "R formula")
            need(S == -sum((d.delta_i0(i) for i in elements_of(E)), d.vec()) - d.psi0() * Fraction(p + s, 2),
                 "S formula")
            lform = base + d.psi_inf() * Fraction(p - s, 2) + sum(
                (d.delta_T_inf(T) * alpha_value(n, E, p, T) for T in d.ts if xs[T] >= 0), d.vec())
            need(L == lform, "L formula")
            pos = sum((d.delta_T_inf(T) * abs(xs[T]) for T in d.ts if xs[T] > 0), d.vec())
            neg = sum((d.delta_T_inf(T) * abs(xs[T]) for T in d.ts if xs[T] < 0), d.vec())
            need(R == L + pos, "R = L + sum over x_T > 0")
            need(S == L + neg, "S = L + sum over x_T < 0")
            need(R + neg == S + pos, "R/S balance")
            for T in d.ts:
                need(d.restrict(R, T) == (-xs[T], 0), "R restricted")
                need(d.restrict(S, T) == (0, xs[T]), "S restricted")
    return {"n": n, "failures": sorted(set(fails)), "ok": not fails}


def pushforward_bundle(n: int, forget: int, a: int) -> LatticeVec:
    """Image of -a psi_0 - sum_{j not in I} delta_j0 (+ the middle-layer terms for even n)."""
    d = Dictionary(n)
    rest = d.full & ~forget
    v = d.psi0() * -a - sum((d.delta_i0(j) for j in elements_of(rest)), d.vec())
    if d.even:
        for J in _subsets(n, n // 2):
            k = popcount(J & rest)
            if k < a:
                v = v + d.delta_T_zero(J) * (a - k)
    return v


def pushforward_check(n: int) -> bool:
    """The dictionary image of each pushforward matches O(-1 on N - I) z^{2a - |N - I|} (with |a - |E n T^c|| E_T)."""
    d = Dictionary(n)
    for I in _subsets(n):
        E = d.full & ~I
        s = popcount(E)
        for a in range(1, s):
            alpha = None
            if d.even:
                alpha = {T: abs(a - popcount(E & ~T & d.full)) for T in d.ts}
            expect = d.bundle(bundle_from_set(n, E, 2 * a - s, alpha))
            if pushforward_bundle(n, I, a) != expect:
                return False
    return True


# --- alpha and x_T inequalities -------------------------------------------

def _blue_k(r: int) -> int:
    return (r - 1) // 2


def alpha_x_suite(n: int, interval: bool = True) -> dict:
    if n % 2 or not 4 <= n <= 8:
        raise ValueError("n must be 4, 6 or 8")
    r = n // 2
    m = n // 4
    k = _blue_k(r)
    full = (1 << n) - 1
    items = [(E, p) for s, p in even_types(n) for E in _subsets(n, s)]
    ts = list(_subsets(n, r))
    fails = []
    exceptions = []
    for E, p in items:
        s = popcount(E)
        for T in ts:
            x = x_value(n, E, p, T)
            al = alpha_value(n, E, p, T)
            if not -m <= al <= 0:
                fails.append(("alpha bound", E, p, T))
            lo, hi = Fraction(p - s, 2), Fraction(p + s, 2)
            if not lo <= x <= hi:
                fails.append(("x range", E, p, T))
            if (x == hi) != (E & ~T & full == 0) or (x == lo) != (E & T == 0):
                fails.append(("x equality", E, p, T))
            if s < r and not -k <= x <= k:
                fails.append(("x small s", E, p, T))
            if abs(x) > k + 1:
                fails.append(("|x| > k+1", E, p, T))
            if abs(x) > k:
                exc = (r % 2 == 0 and s == r and p == 0 and (E == T or E == full & ~T))
                if not exc:
                    fails.append(("|x| > k", E, p, T))
                else:
                    exceptions.append((E, T, int(x)))
                    if x != (k + 1 if E == T else -(k + 1)):
                        fails.append(("exception value", E, p, T))
    # extrema over the collection
    maxmin = []
    for I in _subsets(n):
        if 2 * popcount(I) <= n:
            continue
        vals = [popcount(E & I) - popcount(E & ~I & full) + p for E, p in items]
        if r % 2 == 0:
            want = (2 * popcount(I) - 2 * m, -2 * m + 2)
        else:
            want = (2 * popcount(I) - 2 * m - 2, -2 * m)
        if (max(vals), min(vals)) != want:
            maxmin.append(("I", I, max(vals), min(vals), want))
    for T in ts:
        vals = [int(2 * x_value(n, E, p, T)) for E, p in items]
        if (max(vals), min(vals)) != (2 * m, -2 * m):
            maxmin.append(("T", T, max(vals), min(vals)))
    interval_fails = []
    if interval:
        for T in ts:
            alphas = sorted({alpha_value(n, E, p, T) for E, p in items})
            for a1, a2 in itertools.product(alphas, repeat=2):
                if a1 <= a2:
                    continue
                bound = a1 - a2 - 1
                for v in (a1 + a2, a1 - a2, -a1 + a2, -a1 - a2):
                    if -bound <= v <= bound:
                        interval_fails.append((T, a1, a2, v))
    return {"n": n, "items": len(items), "failures": fails, "exceptions": exceptions,
            "maxmin_failures": maxmin, "interval_failures": interval_fails,
            "ok": not (fails or maxmin or interval_fails)}


def maxmin_odd(n: int) -> bool:
    """Window extrema for odd n: max 2m + 2|I| - n + 1 (r odd) or 2m + 2|I| - n - 1, min -2m."""
    r = (n - 1) // 2
    m = r // 2
    full = (1 << n) - 1
    items = [(E, p) for s, p in odd_types(n) for E in _subsets(n, s)]
    for I in _subsets(n):
        if 2 * popcount(I) <= n:
            continue
        vals = [popcount(E & I) - popcount(E & ~I & full) + p for E, p in items]
        top = 2 * m + 2 * popcount(I) - n + (1 if r % 2 else -1)
        if max(vals) != top or min(vals) != -2 * m:
            return False
    return True


# --- fullness bookkeeping -------------------------------------------------

def pushforward_types(n: int) -> list[tuple[int, int]]:
    out = {(0, 0)}
    for s in range(2, n + 1):
        for a in range(1, s):
            out.add((s, 2 * a - s))
    return sorted(out)


def closure_odd(n: int) -> dict:
    """Fixpoint over (s, p) types seeded by the window types, using the two Koszul templates.

    Template (1) (s <= r): (s, p) from (s + k, p - k), k = 1..r+1.
    Template (2) (s >= r+1): (s, p) from (s - k, p - k), k = 1..r+1.
    Their S_2 images flip the sign of every p.
    """
    if n % 2 == 0 or not 3 <= n <= MAX_N:
        raise ValueError("odd n in 3..9 expected")
    r = (n - 1) // 2
    bound = n + r + 2
    have = set(odd_types(n))
    trace = {t: "window" for t in have}
    grid = [(s, p) for s in range(n + 1) for p in range(-bound, bound + 1) if (s + p) % 2 == 0]
    changed = True
    while changed:
        changed = False
        for s, p in grid:
            if (s, p) in have:
                continue
            for sign in (1, -1):
                if s <= r:
                    others = [(s + k, p - sign * k) for k in range(1, r + 2)]
                else:
                    others = [(s - k, p - sign * k) for k in range(1, r + 2)]
                # the terms share s + p or s - p with the target
                shared = "s+p" if others[0][0] + others[0][1] == s + p else "s-p"
                value = s + p if shared == "s+p" else s - p
                if all(o in have for o in others):
                    have.add((s, p))
                    trace[(s, p)] = f"line {shared}={value}: " + " ".join(f"({a},{b})" for a, b in others)
                    changed = True
                    break
    targets = pushforward_types(n)
    missing = [t for t in targets if t not in have]
    return {"n": n, "targets": targets, "missing": missing,
            "trace": {f"{s},{p}": trace[(s, p)] for s, p in targets if (s, p) in trace},
            "ok": not missing}


def _on_line(kind: str, q: int, k: int, s: int, p: int) -> bool:
    if kind == "A":
        return p - s == -2 * k - 2 + 2 * q
    return p + s == 2 * k + 2 * q


def closure_even(n: int) -> dict:
    """Region and line bookkeeping of the even fullness argument (n = 4 or 6, 8 allowed)."""
    if n % 2 or not 4 <= n <= 8:
        raise ValueError("even n in 4..8 expected")
    r = n // 2
    k = _blue_k(r)
    fails = []
    blue = set()
    for s in range(n + 1):
        for p in range(-r, r + 1):
            if (s + p) % 2:
                continue
            if (s < r and p - s >= -2 * k and p + s <= 2 * k) or \
               (s > r and p - s <= -2 * k - 2 and p + s >= 2 * k + 2):
                blue.add((s, p))
    if r % 2 == 0:
        blue.add((r, 0))
    if blue != set(even_types(n)):
        fails.append("blue region differs from the window types")
    red = [t for t in pushforward_types(n) if t not in blue]
    red_plus = [t for t in red if t[1] > 0]
    for s, p in red_plus:
        covered = any((_on_line("A", q, k, s, p) and s >= r) or (_on_line("B", q, k, s, p) and s <= r)
                      for q in range(1, k + 1))
        if not covered:
            fails.append(f"red type ({s},{p}) is on no line")
    reds_mid = sorted(t for t in red_plus if t[0] == 2 * k + 1)
    if reds_mid != [(2 * k + 1, 2 * q - 1) for q in range(1, k + 1)]:
        fails.append("lines meet s = 2k+1 elsewhere")
    # per-line Koszul closure: R along p - s, S along p + s, positioned at |E| >= r
    lines = {}
    for q in range(0, k + 2):
        for kind in ("A", "B"):
            pts = [(s, p) for s in range(n + 1) for p in range(-r, r + 1)
                   if (s + p) % 2 == 0 and _on_line(kind, q, k, s, p)]
            if not pts:
                continue
            have = {t for t in pts if t in blue}
            step = 1 if kind == "A" else -1
            changed = True
            while changed:
                changed = False
                for s, p in pts:
                    if s < r:
                        continue
                    terms = [(s - t, p - step * t) for t in range(r + 1)]
                    if any(not (0 <= a <= n and -r <= b <= r) for a, b in terms):
                        continue
                    missing = [t for t in terms if t not in have]
                    if len(missing) == 1:
                        have.add(missing[0])
                        changed = True
            lines[f"{kind}{2 * q - 1}"] = {"points": len(pts), "reached_from_blue": len(have)}
    # inequality preconditions for concrete (E, p) on the lines
    full = (1 << n) - 1
    for q in range(1, k + 2):
        for E in _subsets(n):
            s = popcount(E)
            for p in range(-r, r + 1):
                if (s + p) % 2:
                    continue
                for T in _subsets(n, r):
                    x = x_value(n, E, p, T)
                    if _on_line("B", q, k, s, p) and x > k + q:
                        fails.append(f"x_T > k+q on B{2 * q - 1}")
                    if _on_line("B", q, k, s, p) and s > r and x >= k + q:
                        fails.append(f"x_T = k+q with s > r on B{2 * q - 1}")
                    if _on_line("A", q, k, s, p) and x < -k - 1 + q:
                        fails.append(f"x_T < -k-1+q on A{2 * q - 1}")
    return {"n": n, "k": k, "red_plus": red_plus, "lines": lines,
            "failures": sorted(set(fails)), "ok": not fails}
