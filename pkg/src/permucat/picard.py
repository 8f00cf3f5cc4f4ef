"""Divisor classes on LM_N and the blow-up models X^r_N in the Kapranov basis.

A class is -dH + sum m_J E_J with exact rational coefficients.  The basis is
the one attached to the marking 0: H = psi_0 and E_J is the boundary divisor
delta_{J u 0}.  X^r_N is the iterated blow-up of P^{n+r} along the spans of
the coordinate points; r = -1 is LM_N itself.

Symbolic combinations (``Combo``) of G-classes and boundary divisors are kept
alongside so that restriction to strata can follow the case rules for each
generator rather than a change of basis.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .combinat import elements_of, mask_of, popcount, submasks


def _subset_text(mask: int) -> str:
    return ",".join(map(str, elements_of(mask)))


def _parse_subset(text: str) -> int:
    return mask_of(int(x) for x in text.split(",")) if text else 0


# --- models ---------------------------------------------------------------

@dataclass(frozen=True)
class Model:
    """Ground set (bitmask) and blow-up parameter r >= -1."""

    ground: int
    r: int = -1

    def __post_init__(self):
        if self.r < -1:
            raise ValueError("r must be at least -1")
        if self.ground <= 0:
            raise ValueError("empty ground set")

    @classmethod
    def lm(cls, n_or_ground: int | Iterable[int]) -> "Model":
        if isinstance(n_or_ground, int):
            return cls((1 << n_or_ground) - 1, -1)
        return cls(mask_of(n_or_ground), -1)

    @property
    def n(self) -> int:
        return popcount(self.ground)

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.ground)

    @property
    def max_exceptional(self) -> int:
        return min(self.n, self.n + self.r - 1)

    def admissible(self, mask: int) -> bool:
        return mask & ~self.ground == 0 and 1 <= popcount(mask) <= self.max_exceptional

    def basis(self) -> list[int]:
        """Admissible exceptional indices ordered by size, then elements."""
        out = [s for s in submasks(self.ground) if self.admissible(s)]
        return sorted(out, key=lambda s: (popcount(s), elements_of(s)))

    @property
    def is_point(self) -> bool:
        return self.r == -1 and self.n == 1

    def __str__(self):
        name = "LM" if self.r == -1 else f"X^{self.r}"
        return f"{name}[{_subset_text(self.ground)}]"


# --- classes --------------------------------------------------------------

def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class DivisorClass:
    """h*H + sum e[J] E_J.  Note ``h`` is the coefficient of H itself, so G_a^dual has h = -a."""

    model: Model
    h: Fraction = Fraction(0)
    e: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, c in self.e.items():
            c = _frac(c)
            if c == 0:
                continue
            if not self.model.admissible(j):
                raise ValueError(f"E_{{{_subset_text(j)}}} is not a basis element of {self.model}")
            clean[j] = c
        object.__setattr__(self, "h", _frac(self.h))
        object.__setattr__(self, "e", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, model: Model) -> "DivisorClass":
        return cls(model)

    def _check(self, other: "DivisorClass"):
        if self.model != other.model:
            raise ValueError(f"classes live on {self.model} and {other.model}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        e = dict(self.e)
        for j, c in other.e.items():
            e[j] = e.get(j, 0) + c
        return DivisorClass(self.model, self.h + other.h, e)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.model, -self.h, {j: -c for j, c in self.e.items()})

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __mul__(self, k) -> "DivisorClass":
        k = _frac(k)
        return DivisorClass(self.model, self.h * k, {j: c * k for j, c in self.e.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.model == other.model and self.h == other.h and self.e == other.e

    def __hash__(self):
        return hash((self.model, self.h, tuple(self.e.items())))

    def coeff(self, mask: int) -> Fraction:
        return self.e.get(mask, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.h == 0 and not self.e

    @property
    def is_integral(self) -> bool:
        return self.h.denominator == 1 and all(c.denominator == 1 for c in self.e.values())

    def vector(self) -> list[Fraction]:
        return [self.h] + [self.coeff(j) for j in self.model.basis()]

    def to_json(self) -> dict:
        return {"H": str(self.h), "E": {_subset_text(j): str(c) for j, c in self.e.items()}}

    @classmethod
    def from_json(cls, model: Model, record: dict | str) -> "DivisorClass":
        if isinstance(record, str):
            record = json.loads(record)
        return cls(model, Fraction(record.get("H", "0")),
                   {_parse_subset(k): Fraction(v) for k, v in record.get("E", {}).items()})

    def __str__(self):
        parts = []
        if self.h:
            parts.append(f"{self.h}H")
        for j, c in self.e.items():
            parts.append(f"{c}E{{{_subset_text(j)}}}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def H(model: Model) -> DivisorClass:
    return DivisorClass(model, 1)


def E(model: Model, mask: int | Iterable[int]) -> DivisorClass:
    if not isinstance(mask, int):
        mask = mask_of(mask)
    return DivisorClass(model, 0, {mask: 1})


# --- named classes --------------------------------------------------------

def g_class(model: Model, a: int) -> DivisorClass:
    """(G_a)^dual = -aH + sum_{|J| < a} (a - |J|) E_J."""
    if model.is_point:
        raise ValueError("a point carries no G-classes")
    top = model.n + model.r
    if not 1 <= a <= top:
        raise ValueError(f"a={a} outside 1..{top}")
    return DivisorClass(model, -a, {j: a - popcount(j) for j in model.basis() if popcount(j) < a})


def _lm(model: Model):
    if model.r != -1:
        raise ValueError("this class is defined on LM models only")


def psi0(model: Model) -> DivisorClass:
    _lm(model)
    if model.is_point:
        return DivisorClass(model)
    return H(model)


def boundary(model: Model, s: int | Iterable[int]) -> DivisorClass:
    """Class of the ray divisor D_S = delta_{S u 0}, for nonempty S strictly inside the ground set."""
    _lm(model)
    if not isinstance(s, int):
        s = mask_of(s)
    g = model.ground
    if s == 0 or s & ~g or s == g:
        raise ValueError("boundary subset must be a proper nonempty subset")
    if popcount(s) <= model.n - 2:
        return E(model, s)
    # complement of a single point: proper transform of a coordinate hyperplane
    return DivisorClass(model, 1, {j: -1 for j in model.basis() if j & ~s == 0})


def boundary_inf(model: Model, s: int | Iterable[int]) -> DivisorClass:
    """delta_{S u inf}, which is the ray divisor of the complement."""
    if not isinstance(s, int):
        s = mask_of(s)
    return boundary(model, model.ground & ~s)


def psi_inf(model: Model) -> DivisorClass:
    _lm(model)
    if model.is_point:
        return DivisorClass(model)
    g = model.ground
    top = 1 << (model.elements[-1] - 1)
    total = DivisorClass(model)
    for s in submasks(g):
        if s and s != g and s & top:
            total = total + boundary(model, s)
    return total


def psi_point(model: Model, i: int) -> DivisorClass:
    """psi_i for a point i of N vanishes on LM_N."""
    _lm(model)
    return DivisorClass(model)


def delta_ij(model: Model, i: int, j: int) -> DivisorClass:
    """Class of the diagonal x_i = x_j: pullback of a point from LM_{ij}."""
    _lm(model)
    if i == j:
        raise ValueError("need distinct points")
    rest = model.ground & ~mask_of((i, j))
    return DivisorClass(model, 1, {k: -1 for k in submasks(rest) if model.admissible(k)})


def big_delta(model: Model, k: int) -> DivisorClass:
    """Sum of the ray divisors D_J over |J| = k."""
    total = DivisorClass(model)
    for s in submasks(model.ground):
        if popcount(s) == k and s != model.ground:
            total = total + boundary(model, s)
    return total


def lambda_class(model: Model, s: int) -> DivisorClass:
    """H minus the exceptional divisors strictly inside S."""
    return DivisorClass(model, 1, {k: -1 for k in submasks(s) if k != s and model.admissible(k)})


# --- symbolic combinations ------------------------------------------------
# Generators: ("G", a) for G_a (not dualized), ("D", S) for a ray divisor.
# psi_0 = G_1 and psi_inf = G_{n-1}.

Combo = dict


def combo_class(model: Model, combo: Mapping[tuple, int]) -> DivisorClass:
    total = DivisorClass(model)
    for (kind, arg), c in combo.items():
        if not c:
            continue
        if kind == "G":
            total = total + (-g_class(model, arg)) * c
        elif kind == "D":
            total = total + boundary(model, arg) * c
        else:
            raise ValueError(f"unknown generator {kind}")
    return total


def tdivisor_combo(model: Model, cls: DivisorClass) -> dict:
    """Express an LM class as a combination of ray divisors.

    -dH + sum m_J E_J is sum over rays S of (-d[top not in S] + m_S) D_S, where
    top is the largest element; H is the sum of the rays avoiding a fixed point.
    """
    _lm(model)
    if not cls.is_integral:
        raise ValueError("class is not integral")
    if cls.model != model:
        raise ValueError("class belongs to another model")
    g = model.ground
    if model.is_point:
        return {}
    top = 1 << (model.elements[-1] - 1)
    out = {}
    for s in submasks(g):
        if s == 0 or s == g:
            continue
        c = (int(cls.h) if not s & top else 0) + int(cls.coeff(s))
        if c:
            out[("D", s)] = c
    return out


@dataclass(frozen=True)
class FactorizedClass:
    factors: tuple[tuple[Model, DivisorClass], ...]

    def __eq__(self, other):
        if not isinstance(other, FactorizedClass):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    @property
    def is_trivial(self) -> bool:
        return all(c.is_zero for _, c in self.factors)

    def to_json(self) -> list:
        return [{"ground": list(m.elements), "class": c.to_json()} for m, c in self.factors]

    def __str__(self):
        return " [x] ".join(f"{m}:{c}" for m, c in self.factors)


def _stratum_models(blocks: Sequence[int]) -> list[Model]:
    return [Model(b, -1) for b in blocks]


def restrict_combo(model: Model, combo: Mapping[tuple, int], blocks: Sequence[int]) -> list[dict]:
    """Per-factor combinations for the restriction to the stratum with the given blocks."""
    _lm(model)
    acc, prefix = 0, [0]
    for b in blocks:
        if b & acc:
            raise ValueError("blocks overlap")
        acc |= b
        prefix.append(acc)
    if acc != model.ground:
        raise ValueError("blocks do not cover the ground set")
    sizes = [0]
    for b in blocks:
        sizes.append(sizes[-1] + popcount(b))
    t = len(blocks)
    out = [dict() for _ in range(t)]

    def add(i, gen, c):
        if popcount(blocks[i]) == 1:
            return  # points carry only the zero class
        out[i][gen] = out[i].get(gen, 0) + c

    for (kind, arg), c in combo.items():
        if not c:
            continue
        if kind == "G":
            for i in range(t):
                if sizes[i] < arg < sizes[i + 1]:
                    add(i, ("G", arg - sizes[i]), c)
                    break
        elif kind == "D":
            s = arg
            if s in prefix[1:-1]:
                i = prefix.index(s) - 1
                k_left, k_right = popcount(blocks[i]), popcount(blocks[i + 1])
                add(i, ("G", k_left - 1), -c)   # -psi_inf on the left factor
                add(i + 1, ("G", 1), -c)         # -psi_0 on the right factor
                continue
            for i in range(t):
                lo, hi = prefix[i], prefix[i + 1]
                if lo & ~s == 0 and s & ~hi == 0 and s != lo and s != hi:
                    add(i, ("D", s & ~lo), c)
                    break
            # otherwise the divisor misses the stratum
        else:
            raise ValueError(f"unknown generator {kind}")
    return [{g: c for g, c in f.items() if c} for f in out]


def restrict_to_stratum(cls_or_combo, blocks: Sequence[int | Iterable[int]],
                        model: Model | None = None) -> FactorizedClass:
    """Restriction of an LM line bundle to a boundary stratum, factor by factor.

    Accepts a DivisorClass or a symbolic combination (then ``model`` is required).
    """
    blocks = [b if isinstance(b, int) else mask_of(b) for b in blocks]
    if isinstance(cls_or_combo, DivisorClass):
        model = cls_or_combo.model
        combo = tdivisor_combo(model, cls_or_combo)
    else:
        if model is None:
            raise ValueError("a model is needed for a symbolic combination")
        combo = cls_or_combo
    parts = restrict_combo(model, combo, blocks)
    models = _stratum_models(blocks)
    return FactorizedClass(tuple((m, combo_class(m, p)) for m, p in zip(models, parts)))


def factorized_labels(blocks: Sequence[int], labels: Sequence[int]) -> FactorizedClass:
    """Box product of G_{a_i}^dual, with label 0 standing for the trivial bundle."""
    models = _stratum_models(blocks)
    return FactorizedClass(tuple(
        (m, g_class(m, a) if a else DivisorClass(m)) for m, a in zip(models, labels)))


# --- forgetful pullbacks --------------------------------------------------

def pullback_class(model: Model, forget: int, cls: DivisorClass) -> DivisorClass:
    """pi_I^* from LM_{N minus I} to LM_N.

    H pulls back to H minus the E_J with J inside I; E_K pulls back to the sum
    of E_J with J meeting the remaining points exactly in K.
    """
    _lm(model)
    rest = model.ground & ~forget
    if forget & ~model.ground or popcount(rest) < 2:
        raise ValueError("forgetting leaves fewer than two points")
    if cls.model != Model(rest, -1):
        raise ValueError("class does not live on the target of the forgetful map")
    e: dict[int, Fraction] = {}
    for j in model.basis():
        k = j & rest
        if k == 0:
            c = -cls.h
        else:
            c = cls.coeff(k) if k != rest else Fraction(0)
        if c:
            e[j] = c
    return DivisorClass(model, cls.h, e)


def pullback_forgetful(forget: int | Iterable[int], a: int, model: Model) -> DivisorClass:
    """pi_I^* G_a^dual = -aH + sum_{|J cap (N-I)| < a} (a - |J cap (N-I)|) E_J."""
    _lm(model)
    if not isinstance(forget, int):
        forget = mask_of(forget)
    rest = model.ground & ~forget
    if not 1 <= a <= popcount(rest) - 1:
        raise ValueError(f"a={a} outside 1..{popcount(rest) - 1}")
    e = {}
    for j in model.basis():
        k = popcount(j & rest)
        if k < a:
            e[j] = a - k
    return DivisorClass(model, -a, e)


# --- reduction map to Z_N ------------------------------------------------

def reduction_pullback(kind: str, model: Model, i: int | None = None, j: int | None = None) -> DivisorClass:
    """Pullbacks of tautological classes along LM_N -> Z_N.

    kind is one of psi0, psi_inf, psi_i, delta_i0, delta_iinf, delta_ij.
    """
    _lm(model)
    n = model.n
    m = (n - 1) // 2
    small = [s for s in submasks(model.ground) if 1 <= popcount(s) <= m]
    zero = DivisorClass(model)

    def zside(pred):
        return sum((E(model, s) for s in small if pred(s)), zero)

    def inf_side(pred):
        return sum((boundary_inf(model, s) for s in small if pred(s)), zero)

    def bit(x):
        if x is None or not model.ground >> (x - 1) & 1:
            raise ValueError("point index missing or outside the ground set")
        return 1 << (x - 1)

    if kind == "psi0":
        return psi0(model) - zside(lambda s: True)
    if kind == "psi_inf":
        return psi_inf(model) - inf_side(lambda s: True)
    if kind == "delta_i0":
        b = bit(i)
        return zside(lambda s: s & b)
    if kind == "delta_iinf":
        b = bit(i)
        return inf_side(lambda s: s & b)
    if kind == "psi_i":
        b = bit(i)
        return -(zside(lambda s: s & b) + inf_side(lambda s: s & b))
    if kind == "delta_ij":
        b, c = bit(i), bit(j)
        both = b | c
        return delta_ij(model, i, j) + zside(lambda s: s & both == both) + inf_side(lambda s: s & both == both)
    raise ValueError(f"unknown kind {kind!r}")


def reduction_relations(n: int) -> list[dict]:
    """Check the pulled back relations that hold on Z_N.

    Odd n: psi0 = -psi_inf = -delta_i0 + delta_iinf and psi_i = -delta_i0 - delta_iinf,
    psi_i + psi_j = -2 delta_ij.
    """
    model = Model.lm(n)
    rows = []

    def rp(kind, *args):
        return reduction_pullback(kind, model, *args)

    if n % 2 == 1:
        rows.append({"relation": "psi0 + psi_inf", "ok": (rp("psi0") + rp("psi_inf")).is_zero})
        for i in model.elements:
            rows.append({"relation": f"psi0 = -delta_{i}0 + delta_{i}inf",
                         "ok": rp("psi0") == rp("delta_iinf", i) - rp("delta_i0", i)})
            rows.append({"relation": f"psi_{i} = -delta_{i}0 - delta_{i}inf",
                         "ok": rp("psi_i", i) == -(rp("delta_i0", i) + rp("delta_iinf", i))})
        for i, j in itertools.combinations(model.elements, 2):
            rows.append({"relation": f"psi_{i} + psi_{j} = -2 delta_{i}{j}",
                         "ok": rp("psi_i", i) + rp("psi_i", j) == rp("delta_ij", i, j) * -2})
    else:
        half = n // 2
        mid = sum((E(model, s) if popcount(s) <= n - 2 else boundary(model, s)
                   for s in submasks(model.ground) if popcount(s) == half), DivisorClass(model))
        # p^* psi_0 + p^* psi_inf picks up the middle layer
        rows.append({"relation": "psi0 + psi_inf = sum over |T| = n/2",
                     "ok": rp("psi0") + rp("psi_inf") == mid})
    return rows


# --- sums appearing in the pushforward to Z_N ------------------------------

@dataclass
class SigmaReport:
    n: int
    forget: int
    a: int
    sigma1: DivisorClass
    sigma2: DivisorClass
    identity_ok: bool
    uncovered: list[int]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return self.identity_ok and not self.violations

    def to_json(self) -> dict:
        return {"n": self.n, "I": list(elements_of(self.forget)), "a": self.a,
                "sigma1": self.sigma1.to_json(), "sigma2": self.sigma2.to_json(),
                "identity": self.identity_ok,
                "uncovered": [list(elements_of(j)) for j in self.uncovered],
                "violations": self.violations}


def sigma_decomposition(n: int, forget: int | Iterable[int], a: int) -> SigmaReport:
    """Split pi_I^* G_a^dual into p^*(-a psi_0 - sum delta_j0) plus the two leftover sums."""
    model = Model.lm(n)
    if not isinstance(forget, int):
        forget = mask_of(forget)
    rest = model.ground & ~forget
    m = (n - 1) // 2
    target = pullback_forgetful(forget, a, model)
    base = reduction_pullback("psi0", model) * -a
    for j in elements_of(rest):
        base = base - reduction_pullback("delta_i0", model, j)
    s1, s2, uncovered, bad = {}, {}, [], []
    for J in model.basis():
        size, k = popcount(J), popcount(J & rest)
        if size > m and k < a:
            s1[J] = a - k
            if n - size <= m:
                if a - k > n - 1 - size:
                    bad.append(f"sigma1 E{{{_subset_text(J)}}} coefficient {a - k} > {n - 1 - size}")
            else:
                uncovered.append(J)
        elif size <= m and k > a:
            s2[J] = k - a
            if k - a > size - 1:
                bad.append(f"sigma2 E{{{_subset_text(J)}}} coefficient {k - a} > {size - 1}")
    sigma1, sigma2 = DivisorClass(model, 0, s1), DivisorClass(model, 0, s2)
    return SigmaReport(n, forget, a, sigma1, sigma2, target == base + sigma1 + sigma2, uncovered, bad)


# --- blow-up models -------------------------------------------------------

def forget_model(model: Model, i: int) -> Model:
    """Target of f_i: X^r_N -> X^{r+1}_{N minus i}."""
    return Model(model.ground & ~(1 << (i - 1)), model.r + 1)


def pullback_blowdown(model: Model, i: int, cls: DivisorClass) -> DivisorClass:
    """f_i^* keeps H and sends E_J (J avoiding i) to E_J."""
    target = forget_model(model, i)
    if cls.model != target:
        raise ValueError("class does not live on the target of f_i")
    return DivisorClass(model, cls.h, dict(cls.e))


@dataclass
class BlowdownReport:
    model: Model
    a: int
    i: int
    F: DivisorClass
    identity_ok: bool
    violations: list[str]

    @property
    def ok(self) -> bool:
        return self.identity_ok and not self.violations


def blowdown_compat(model: Model, a: int, i: int) -> BlowdownReport:
    """Compare (G_a^r)^dual with f_i^*(G_a^{r+1})^dual; the difference F lives on divisors through i."""
    if not model.ground >> (i - 1) & 1:
        raise ValueError(f"{i} is not in the ground set")
    n, r = model.n, model.r
    if not 1 <= a <= n + r:
        raise ValueError(f"a={a} outside 1..{n + r}")
    b = 1 << (i - 1)
    F = DivisorClass(model, 0, {J: a - popcount(J) for J in model.basis()
                                if J & b and popcount(J) < a})
    lower = g_class(forget_model(model, i), a)
    ok = g_class(model, a) == pullback_blowdown(model, i, lower) + F
    bad = []
    for J, c in F.e.items():
        codim = n + r - popcount(J) + 1
        if not 1 <= c < codim:
            bad.append(f"E{{{_subset_text(J)}}}: coefficient {c} not in [1, {codim})")
    return BlowdownReport(model, a, i, F, ok, bad)


# --- restriction identities on exceptional divisors ------------------------

def comps_coefficients(a: int, k: int, s: int) -> tuple[int, int, int]:
    """Residual coefficients of H, E_K and E_{K u i} in the restriction computation (all zero)."""
    h = -a + (a - s) + (k - s + 1) * s - (k - s) * s
    residues = []
    for l in range(1, s):
        residues.append((a - l) - (a - s) - (k - s + 1) * (s - l) + (k - s) * (s - l))
    e_k = max(map(abs, residues), default=0)
    residues = []
    for l in range(0, s - 1):
        residues.append((k - l) - (k - s + 1) * (s - l) + (k - s) * (s - l - 1))
    e_ki = max(map(abs, residues), default=0)
    return h, e_k, e_ki


def comps_class_check(a: int, k: int, s: int) -> bool:
    """Assemble the leftover class on LM_I, |I| = s + 1, and test that it vanishes.

    I = J u {i}; the pulled back G_a^dual contributes -aH, E_K for K inside J and
    Lambda_J; the H_{k+1} part contributes E_{K u i}, Lambda_{K u i} for |K| = s-1
    and (k - s) copies of -psi at the attaching point.
    """
    model = Model.lm(s + 1)
    i = 1 << s
    J = model.ground & ~i
    cls = H(model) * -a
    for K in submasks(J):
        if K and K != J:
            cls = cls + E(model, K) * (a - popcount(K))
    cls = cls + lambda_class(model, J) * (a - s)
    for K in submasks(J):
        if popcount(K) <= s - 2:
            cls = cls + E(model, K | i) * (k - popcount(K))
        elif popcount(K) == s - 1:
            cls = cls + lambda_class(model, K | i) * (k - s + 1)
    cls = cls - psi_inf(model) * (k - s)
    return cls.is_zero


def attaching_psi_check(s: int) -> bool:
    """On LM_I with |I| = s+1, the rays through the attaching point sum to psi there."""
    model = Model.lm(s + 1)
    i = 1 << s
    total = DivisorClass(model)
    for S in submasks(model.ground):
        if S & i and S != model.ground:
            total = total + boundary(model, S)
    return total == psi_inf(model)


# --- symmetric matrix identity -------------------------------------------

def b_matrix(n: int) -> list[list[Fraction]]:
    return [[Fraction(min(i, j) * (n - max(i, j)), n) for j in range(1, n)] for i in range(1, n)]


def cartan_matrix(k: int) -> list[list[int]]:
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(k)] for i in range(k)]


def _matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def class_identities_check(n: int) -> dict:
    if not 2 <= n <= 12:
        raise ValueError("n must lie in 2..12")
    model = Model.lm(n)
    B = b_matrix(n)
    deltas = [big_delta(model, j) for j in range(1, n)]
    g_rows = []
    for i in range(1, n):
        rhs = DivisorClass(model)
        for j in range(1, n):
            rhs = rhs + deltas[j - 1] * B[i - 1][j - 1]
        g_rows.append(-g_class(model, i) == rhs)
    symmetric = all(B[i][j] == B[j][i] for i in range(n - 1) for j in range(n - 1))
    ident = [[int(i == j) for j in range(n - 1)] for i in range(n - 1)]
    inverse = _matmul(B, cartan_matrix(n - 1)) == ident
    lam = all(lambda_class(model, S) == boundary(model, S)
              for S in submasks(model.ground) if popcount(S) == n - 1)
    return {"n": n, "g_rows": g_rows, "symmetric": symmetric, "cartan_inverse": inverse,
            "lambda": lam, "ok": all(g_rows) and symmetric and inverse and lam,
            "B": [[str(x) for x in row] for row in B]}


# --- lifting box products -------------------------------------------------

def lift_bundle(blocks: Sequence[int | Iterable[int]], labels: Sequence[int]) -> DivisorClass:
    """A line bundle on LM_N restricting to the box product of G_{a_i}^dual (label 0 = trivial).

    Peel off the first block: L = G_{a_1}^dual (if nontrivial) times pi_{N_1}^* of the
    lift on the remaining blocks.  With a single nontrivial label the answer is
    G^dual with the label shifted by the sizes of the earlier blocks.
    """
    blocks = [b if isinstance(b, int) else mask_of(b) for b in blocks]
    if len(blocks) != len(labels):
        raise ValueError("blocks and labels differ in length")
    for b, a in zip(blocks, labels):
        if a and not 1 <= a < popcount(b):
            raise ValueError(f"label {a} out of range for a block of size {popcount(b)}")
    nontrivial = [k for k, a in enumerate(labels) if a]
    if not nontrivial:
        raise ValueError("all labels are trivial")
    ground = 0
    for b in blocks:
        ground |= b
    model = Model(ground, -1)
    if len(nontrivial) == 1:
        k = nontrivial[0]
        return g_class(model, labels[k] + sum(popcount(b) for b in blocks[:k]))
    tail = lift_bundle(blocks[1:], labels[1:])
    out = pullback_class(model, blocks[0], tail)
    if labels[0]:
        out = out + g_class(model, labels[0])
    return out
