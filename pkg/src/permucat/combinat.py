"""Objects of the collection G-hat: labeled ordered partitions with blocks of size >= 2.

Subsets of the ground set {1..n} are bitmasks with bit i-1 standing for element i.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Sequence

MAX_N = 16


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int):
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True, order=False)
class GhatObject:
    """One object of G-hat.

    ``blocks`` are bitmasks listed in order, ``labels`` the matching a_i.  A single
    block is the line bundle G_a^dual; two or more blocks give a torsion sheaf on
    the boundary stratum cut out by the prefix unions of the blocks.
    """

    blocks: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.labels):
            raise ValueError("blocks and labels differ in length")
        seen = 0
        for b, a in zip(self.blocks, self.labels):
            if b & seen:
                raise ValueError("blocks overlap")
            seen |= b
            k = popcount(b)
            if k < 2:
                raise ValueError("every block needs at least two elements")
            if not 1 <= a <= k - 1:
                raise ValueError(f"label {a} out of range for a block of size {k}")

    @property
    def t(self) -> int:
        return len(self.blocks)

    @property
    def ground(self) -> int:
        m = 0
        for b in self.blocks:
            m |= b
        return m

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(popcount(b) for b in self.blocks)

    @property
    def is_line_bundle(self) -> bool:
        return self.t == 1

    def chain(self) -> tuple[int, ...]:
        """Prefix unions S_1 < ... < S_{t-1}; these are the rays cutting out the stratum."""
        out = []
        acc = 0
        for b in self.blocks[:-1]:
            acc |= b
            out.append(acc)
        return tuple(out)

    def key(self) -> tuple:
        return (tuple(elements_of(b) for b in self.blocks), self.labels)

    def to_text(self) -> str:
        bl = "|".join(",".join(map(str, elements_of(b))) for b in self.blocks)
        return bl + ";" + ",".join(map(str, self.labels))

    def to_json(self) -> dict:
        return {"blocks": [list(elements_of(b)) for b in self.blocks], "labels": list(self.labels)}

    @classmethod
    def from_text(cls, text: str) -> "GhatObject":
        try:
            bl, lab = text.strip().split(";")
            blocks = tuple(mask_of(int(x) for x in part.split(",")) for part in bl.split("|"))
            labels = tuple(int(x) for x in lab.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse object {text!r}") from exc
        return cls(blocks, labels)

    @classmethod
    def from_json(cls, record: dict) -> "GhatObject":
        return cls(tuple(mask_of(b) for b in record["blocks"]), tuple(record["labels"]))

    @classmethod
    def make(cls, blocks: Sequence[Iterable[int]], labels: Sequence[int]) -> "GhatObject":
        return cls(tuple(mask_of(b) for b in blocks), tuple(labels))

    def __str__(self):
        return self.to_text()


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("undefined ground set")
    if n > MAX_N:
        raise ValueError(f"n={n} exceeds the ceiling {MAX_N}")


def _ordered_partitions(mask: int):
    """Ordered partitions of ``mask`` into blocks of size >= 2."""
    if mask == 0:
        yield ()
        return
    for first in submasks(mask):
        if popcount(first) < 2:
            continue
        for tail in _ordered_partitions(mask & ~first):
            yield (first,) + tail


def enumerate_ghat(n: int) -> list[GhatObject]:
    _check_n(n)
    full = (1 << n) - 1
    out = []
    for blocks in _ordered_partitions(full):
        ranges = [range(1, popcount(b)) for b in blocks]
        for labels in itertools.product(*ranges):
            out.append(GhatObject(blocks, tuple(labels)))
    out.sort(key=GhatObject.key)
    return out


def derangements(n: int) -> int:
    """!n by the recursion !n = (n-1)(!(n-1) + !(n-2))."""
    if n < 0:
        raise ValueError("negative n")
    a, b = 1, 0
    if n == 0:
        return 1
    for k in range(2, n + 1):
        a, b = b, (k - 1) * (a + b)
    return b


def compositions_min2(n: int):
    if n == 0:
        yield ()
        return
    for k in range(2, n + 1):
        for rest in compositions_min2(n - k):
            yield (k,) + rest


def curious_sum(n: int) -> int:
    """Sum over compositions with parts >= 2 of multinomial times prod (k_i - 1)."""
    total = 0
    for parts in compositions_min2(n):
        mult = factorial(n)
        weight = 1
        for k in parts:
            mult //= factorial(k)
            weight *= k - 1
        total += mult * weight
    return total


def factorial_split(n: int) -> int:
    """Right side of n! = !n + sum_{1<=k<=n-1} C(n,k) !(n-k) + 1."""
    return derangements(n) + sum(comb(n, k) * derangements(n - k) for k in range(1, n)) + 1


def derangement_suite(n_max: int, enumerate_max: int = 9) -> list[dict]:
    if n_max > 20:
        raise ValueError("n_max is capped at 20")
    rows = []
    for n in range(1, n_max + 1):
        d = derangements(n)
        row = {"n": n, "derangements": d, "curious": curious_sum(n), "split": factorial_split(n)}
        if n <= enumerate_max:
            row["enumerated"] = len(enumerate_ghat(n))
        row["ok"] = (
            row["curious"] == d
            and row["split"] == factorial(n)
            and row.get("enumerated", d) == d
        )
        rows.append(row)
    return rows


# --- group action ---------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """Element (c, sigma) of S_2 x S_n; sigma[i-1] is the image of i."""

    cremona: bool
    sigma: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(False, tuple(range(1, n + 1)))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        # (self * other) acts as self after other
        return GroupElement(self.cremona != other.cremona,
                            tuple(self.sigma[j - 1] for j in other.sigma))


def permute_mask(mask: int, sigma: Sequence[int]) -> int:
    return mask_of(sigma[e - 1] for e in elements_of(mask))


def cremona(obj: GhatObject) -> GhatObject:
    return GhatObject(obj.blocks[::-1],
                      tuple(popcount(b) - a for b, a in zip(obj.blocks[::-1], obj.labels[::-1])))


def group_act(g: GroupElement, obj: GhatObject) -> GhatObject:
    blocks = tuple(permute_mask(b, g.sigma) for b in obj.blocks)
    moved = GhatObject(blocks, obj.labels)
    return cremona(moved) if g.cremona else moved


# --- orders ---------------------------------------------------------------

class Order(str, enum.Enum):
    LEX = "lex"
    LEX_PRIME = "lexprime"


def order_sequence(obj: GhatObject, kind: Order | str) -> tuple[int, ...]:
    kind = Order(kind)
    if kind is Order.LEX:
        seq = []
        for a, k in zip(obj.labels, obj.sizes):
            seq += [a, -k]
        return tuple(seq)
    seq = []
    for a, k in zip(obj.labels[::-1], obj.sizes[::-1]):
        seq += [k - a, -k]
    return tuple(seq)


def order_key(obj: GhatObject, kind: Order | str) -> tuple:
    return (order_sequence(obj, kind), obj.key())


def compare(obj: GhatObject, other: GhatObject, kind: Order | str = Order.LEX) -> int:
    """-1, 0 or 1.  Equal sequences with different blocks are split by the encoding."""
    if obj.ground != other.ground:
        raise ValueError("objects live on different ground sets")
    a, b = order_key(obj, kind), order_key(other, kind)
    return (a > b) - (a < b)


def sort_objects(objs: Iterable[GhatObject], kind: Order | str = Order.LEX) -> list[GhatObject]:
    return sorted(objs, key=lambda o: order_key(o, kind))


# --- end data -------------------------------------------------------------

@dataclass(frozen=True)
class EndData:
    k_first: int
    k_last: int
    b_first: int
    b_last: int

    @classmethod
    def of(cls, obj: GhatObject) -> "EndData":
        k = obj.sizes
        return cls(k[0], k[-1], k[0] - obj.labels[0], obj.labels[-1])


class Verdict(str, enum.Enum):
    VANISH = "vanish"
    RECURSE = "recurse"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    stripped: tuple[GhatObject, GhatObject] | None = None
    note: str = ""


def end_data_decide(T: GhatObject, Tp: GhatObject) -> Decision:
    """Sufficient test for RHom(T, T') = 0 between torsion objects from end data alone."""
    if T.t < 2 or Tp.t < 2:
        raise ValueError("end data is defined for torsion objects only")
    if T.ground != Tp.ground:
        raise ValueError("objects live on different ground sets")
    e, f = EndData.of(T), EndData.of(Tp)
    b, bp = e.b_first + e.b_last, f.b_first + f.b_last
    c, cp = e.k_first + e.k_last - b, f.k_first + f.k_last - bp
    if b <= bp and c >= cp and (b < bp or c > cp):
        return Decision(Verdict.VANISH)
    if b != bp or c != cp:
        return Decision(Verdict.INCONCLUSIVE)
    same_ends = (e == f and T.blocks[0] == Tp.blocks[0] and T.blocks[-1] == Tp.blocks[-1]
                 and T.labels[0] == Tp.labels[0] and T.labels[-1] == Tp.labels[-1])
    if not same_ends:
        # equalities force matching end components for a nonzero RHom
        return Decision(Verdict.VANISH, note="equal end sums with different end components")
    if T.t == 2 or Tp.t == 2:
        return Decision(Verdict.INCONCLUSIVE, note="nothing left after removing the ends")
    inner = (GhatObject(T.blocks[1:-1], T.labels[1:-1]), GhatObject(Tp.blocks[1:-1], Tp.labels[1:-1]))
    return Decision(Verdict.RECURSE, stripped=inner)


def dumps_objects(objs: Iterable[GhatObject]) -> str:
    return json.dumps([o.to_json() for o in objs], sort_keys=True)
