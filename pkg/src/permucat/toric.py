"""Smooth complete fans, line-bundle cohomology and orbit-closure restriction.

Cohomology follows the standard character decomposition: for a torus-invariant
divisor D = sum a_rho D_rho and a character m, H^p(D)_m is the reduced
cohomology in degree p-1 of the full subcomplex of the ray complex on the rays
with <m, v_rho> < -a_rho.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .combinat import elements_of, popcount

PRIME = 2147483647
_CHUNK = 1 << 18


@dataclass(frozen=True)
class CohomologyTable:
    h: tuple[int, ...]

    @property
    def chi(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.h))

    @property
    def acyclic(self) -> bool:
        return not any(self.h)

    def __str__(self):
        return "(" + ",".join(map(str, self.h)) + ")"


def _int_det(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class Fan:
    """A smooth complete fan given by primitive rays and maximal cones."""

    def __init__(self, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]],
                 tags: dict[int, int] | None = None, name: str = "", check: bool = True,
                 rank: int | None = None):
        arr = np.array(rays, dtype=np.int64)
        if rank is None:
            rank = arr.shape[1] if arr.ndim == 2 else 0
        self.rays = arr.reshape(len(arr), rank)
        self.rank = self.rays.shape[1]
        self.cones = tuple(sorted(tuple(sorted(c)) for c in cones))
        self.tags = dict(tags or {})
        self.name = name
        self.memo: dict = {}
        self.subset_poset = False
        self.cone_masks = [sum(1 << i for i in c) for c in self.cones]
        self._cone_idx = np.array(self.cones, dtype=np.int64).reshape(len(self.cones), self.rank)
        self._inv = self._inverses(check)
        self._walls = None
        if check:
            self.check_complete()

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def _inverses(self, check: bool) -> np.ndarray:
        d = self.rank
        if d == 0:
            return np.zeros((len(self.cones), 0, 0), dtype=np.int64)
        mats = self.rays[self._cone_idx]
        inv = np.rint(np.linalg.inv(mats.astype(float))).astype(np.int64)
        eye = np.broadcast_to(np.eye(d, dtype=np.int64), mats.shape)
        if not np.array_equal(mats @ inv, eye):
            bad = [c for c, m in zip(self.cones, mats) if abs(_int_det(m.tolist())) != 1]
            raise ValueError(f"fan is not smooth: cone {bad[0] if bad else '?'}")
        return inv

    def check_complete(self) -> None:
        walls = self.wall_relations()
        del walls

    def wall_relations(self):
        """Per wall: (rho, rho', wall rays, coefficients b) with v_rho + v_rho' = sum b_i v_i."""
        if self._walls is not None:
            return self._walls
        owners: dict[int, list[int]] = {}
        for ci, cm in enumerate(self.cone_masks):
            for r in self.cones[ci]:
                owners.setdefault(cm & ~(1 << r), []).append(ci)
        rel = []
        for wall, cs in sorted(owners.items()):
            if len(cs) != 2:
                raise ValueError(f"fan is not complete: wall {elements_of(wall)} lies in {len(cs)} cones")
            c1, c2 = cs
            r1 = (self.cone_masks[c1] & ~wall).bit_length() - 1
            r2 = (self.cone_masks[c2] & ~wall).bit_length() - 1
            w = self.rays[r1] + self.rays[r2]
            b = w @ self._inv[c1]
            idx = list(self.cones[c1])
            pos = idx.index(r1)
            if b[pos] != 0:
                raise ValueError("wall relation is not balanced")
            wr = [i for i in idx if i != r1]
            bw = [int(b[k]) for k, i in enumerate(idx) if i != r1]
            rel.append((r1, r2, wr, bw))
        self._walls = rel
        return rel

    def key(self) -> tuple:
        return (self.rays.tobytes(), self.cones)

    def to_json(self) -> str:
        return json.dumps({"rank": self.rank, "rays": self.rays.tolist(),
                           "cones": [list(c) for c in self.cones],
                           "tags": {str(k): list(elements_of(v)) for k, v in sorted(self.tags.items())}},
                          sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "Fan":
        rec = json.loads(text)
        tags = {int(k): sum(1 << (e - 1) for e in v) for k, v in rec["tags"].items()}
        return cls(rec["rays"], rec["cones"], tags, name, rank=rec["rank"])

    def __repr__(self):
        return f"Fan({self.name or 'anonymous'}, rank={self.rank}, rays={self.nrays}, cones={len(self.cones)})"


# --- standard fans --------------------------------------------------------

def point_fan() -> Fan:
    return Fan([], [()], name="point", rank=0)


def projective_fan(k: int) -> Fan:
    rays = [[int(i == j) for j in range(k)] for i in range(k)] + [[-1] * k]
    cones = itertools.combinations(range(k + 1), k)
    return Fan(rays, cones, name=f"P{k}")


def product_fan(fans: Sequence[Fan]) -> Fan:
    d = sum(f.rank for f in fans)
    rays, offsets = [], []
    col = 0
    for f in fans:
        offsets.append(len(rays))
        for v in f.rays:
            row = [0] * d
            row[col:col + f.rank] = v.tolist()
            rays.append(row)
        col += f.rank
    cones = []
    for combo in itertools.product(*[f.cones for f in fans]):
        cones.append(tuple(off + i for off, c in zip(offsets, combo) for i in c))
    return Fan(rays, cones, name="x".join(f.name for f in fans), rank=d)


def lm_ray(mask: int, n: int) -> list[int]:
    last = (mask >> (n - 1)) & 1
    return [((mask >> i) & 1) - last for i in range(n - 1)]


def _build_lm(n: int) -> Fan:
    full = (1 << n) - 1
    masks = list(range(1, full))
    rays = [lm_ray(s, n) for s in masks]
    cones = []
    for perm in itertools.permutations(range(n)):
        acc, flag = 0, []
        for e in perm[:-1]:
            acc |= 1 << e
            flag.append(acc - 1)
        cones.append(tuple(sorted(flag)))
    tags = {s - 1: s for s in masks}
    return Fan(rays, cones, tags, name=f"LM{n}")


def _mark_poset(fan: Fan) -> Fan:
    # cones of LM fans are exactly the chains of subsets, so full subcomplexes are order complexes
    fan.subset_poset = True
    return fan


def lm_fan(n: int, cache: str | os.PathLike | None = None) -> Fan:
    """Permutohedral fan of LM_n in Z^n/(1,...,1) = Z^{n-1}; ray index of subset S is S-1."""
    if not 2 <= n <= 7:
        raise ValueError("LM fans are available for 2 <= n <= 7")
    key = ("lm", n)
    if key in _FAN_CACHE:
        return _FAN_CACHE[key]
    cache = os.environ.get("PERMUCAT_CACHE", cache)
    fan = None
    if cache:
        path = Path(cache) / f"lm{n}.json"
        if path.exists():
            fan = Fan.from_json(path.read_text(), name=f"LM{n}")
        else:
            fan = _build_lm(n)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(fan.to_json())
    else:
        fan = _build_lm(n)
    _FAN_CACHE[key] = _mark_poset(fan)
    return fan


_FAN_CACHE: dict = {}


def lm_summary(fan: Fan, n: int) -> dict:
    return {"rays": fan.nrays, "cones": len(fan.cones),
            "expected_rays": 2 ** n - 2, "expected_cones": factorial(n)}


# --- divisors -------------------------------------------------------------

def principal(fan: Fan, m: Sequence[int]) -> np.ndarray:
    return fan.rays @ np.asarray(m, dtype=np.int64)


def normalize(fan: Fan, a: Sequence[int]) -> tuple[int, ...]:
    """Representative of the linear-equivalence class vanishing on the first cone."""
    a = np.asarray(a, dtype=np.int64)
    if fan.rank == 0:
        return tuple(int(x) for x in a)
    m = -(fan._inv[0] @ a[fan._cone_idx[0]])
    return tuple(int(x) for x in a + fan.rays @ m)


def linearly_equivalent(fan: Fan, a: Sequence[int], b: Sequence[int]) -> bool:
    return normalize(fan, a) == normalize(fan, b)


def anticanonical(fan: Fan) -> tuple[int, ...]:
    return (1,) * fan.nrays


def cone_characters(fan: Fan, a: Sequence[int]) -> np.ndarray:
    """m_sigma with <m_sigma, v_rho> = -a_rho on the rays of each maximal cone."""
    a = np.asarray(a, dtype=np.int64)
    return -np.einsum("cij,cj->ci", fan._inv, a[fan._cone_idx])


def nef_check(fan: Fan, a: Sequence[int]) -> tuple[bool, tuple | None]:
    """Degree on every wall curve; returns (nef, first violating wall or None)."""
    a = np.asarray(a, dtype=np.int64)
    for r1, r2, wr, bw in fan.wall_relations():
        deg = int(a[r1] + a[r2] - sum(b * a[i] for b, i in zip(bw, wr)))
        if deg < 0:
            return False, (tuple(wr), r1, r2, deg)
    return True, None


def curve_degrees(fan: Fan, a: Sequence[int]) -> list[int]:
    a = np.asarray(a, dtype=np.int64)
    return [int(a[r1] + a[r2] - sum(b * a[i] for b, i in zip(bw, wr)))
            for r1, r2, wr, bw in fan.wall_relations()]


# --- simplicial part ------------------------------------------------------

def _maximal(sets: Iterable[int]) -> list[int]:
    uniq = sorted(set(s for s in sets), key=popcount, reverse=True)
    out: list[int] = []
    for s in uniq:
        if not any(s & ~t == 0 for t in out):
            out.append(s)
    return out


def _strong_core(facets: list[int]) -> list[int]:
    """Remove dominated vertices until none is left; homotopy type is preserved."""
    changed = True
    while changed and len(facets) > 1:
        changed = False
        verts = 0
        for f in facets:
            verts |= f
        v = verts
        while v:
            bit = v & -v
            v ^= bit
            inter = -1
            for f in facets:
                if f & bit:
                    inter &= f
            if inter & ~bit:
                facets = _maximal(f & ~bit for f in facets)
                changed = True
                break
    return facets


def _faces_by_dim(facets: list[int], top: int) -> list[list[int]]:
    faces = set()
    for f in facets:
        elems = [1 << i for i in range(f.bit_length()) if f >> i & 1]
        for k in range(1, len(elems) + 1):
            for c in itertools.combinations(elems, k):
                faces.add(sum(c))
    by = [[] for _ in range(top + 2)]
    by[0].append(0)
    for f in faces:
        by[popcount(f)].append(f)
    for lst in by:
        lst.sort()
    return by


def _boundary(by: list[list[int]], k: int) -> list[dict[int, int]]:
    """Columns of the boundary map from faces with k vertices to faces with k-1 vertices."""
    index = {f: i for i, f in enumerate(by[k - 1])}
    cols = []
    for f in by[k]:
        col = {}
        sign = 1
        v = f
        while v:
            bit = v & -v
            v ^= bit
            col[index[f ^ bit]] = sign
            sign = -sign
        cols.append(col)
    return cols


def _rank_mod_p(cols: list[dict[int, int]], nrows: int) -> int:
    if not cols or nrows == 0:
        return 0
    m = np.zeros((len(cols), nrows), dtype=np.int64)
    for j, col in enumerate(cols):
        for i, v in col.items():
            m[j, i] = v % PRIME
    rank = 0
    rows, ncols = m.shape
    for c in range(ncols):
        piv = np.nonzero(m[rank:, c])[0]
        if piv.size == 0:
            continue
        p = rank + piv[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        inv = pow(int(m[rank, c]), PRIME - 2, PRIME)
        m[rank] = (m[rank] * inv) % PRIME
        below = np.nonzero(m[rank + 1:, c])[0] + rank + 1
        if below.size:
            f = m[below, c][:, None]
            m[below] = (m[below] - (f * m[rank]) % PRIME) % PRIME
        rank += 1
        if rank == rows:
            break
    return rank


def _rank_exact(cols: list[dict[int, int]], nrows: int) -> int:
    """Rank over the rationals by fraction-free elimination on Python integers."""
    m = [[col.get(i, 0) for i in range(nrows)] for col in cols]
    rank = 0
    prev = 1
    ncols = nrows
    rows = len(m)
    for c in range(ncols):
        p = next((i for i in range(rank, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, rows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[rank][c] - m[i][c] * m[rank][j]) // prev
            m[i][c] = 0
        prev = m[rank][c]
        rank += 1
    return rank


def complex_reduced_betti(facets: list[int], top: int) -> tuple[int, ...]:
    """Reduced Betti numbers b~_{-1}, ..., b~_{top} of the complex with these facets.

    Ranks are taken mod a large prime; the answer is accepted when the mod-p Betti
    numbers are all zero or add up to |reduced Euler characteristic|, which pins
    the rational ones.  Otherwise ranks are recomputed over the integers.
    """
    out = [0] * (top + 2)
    facets = [f for f in facets if f]
    if not facets:
        out[0] = 1
        return tuple(out)
    facets = _strong_core(_maximal(facets))
    if len(facets) == 1:
        return tuple(out)
    by = _faces_by_dim(facets, top)
    counts = [len(x) for x in by]
    bnd = [None] + [_boundary(by, k) for k in range(1, len(by))]
    ranks = [0] + [_rank_mod_p(bnd[k], counts[k - 1]) for k in range(1, len(by))] + [0]
    betti = [counts[k] - ranks[k] - ranks[k + 1] for k in range(len(by))]
    chi = sum((-1) ** k * c for k, c in enumerate(counts))
    if any(betti) and sum(betti) != abs(chi):
        ranks = [0] + [_rank_exact(bnd[k], counts[k - 1]) for k in range(1, len(by))] + [0]
        betti = [counts[k] - ranks[k] - ranks[k + 1] for k in range(len(by))]
    for k, b in enumerate(betti):
        out[k] = b
    return tuple(out)


def _beat_core(elems: list[int]) -> list[int]:
    """Strip beat points of a finite poset of sets ordered by inclusion."""
    pts = set(elems)
    changed = True
    while changed and len(pts) > 1:
        changed = False
        for x in sorted(pts):
            up, down = -1, 0
            has_up = has_down = False
            for y in pts:
                if y != x:
                    if y & x == x:
                        up &= y
                        has_up = True
                    elif x & y == y:
                        down |= y
                        has_down = True
            if (has_up and up != x and up in pts) or (has_down and down != x and down in pts):
                pts.discard(x)
                changed = True
                break
    return sorted(pts)


def _maximal_chains(elems: list[int]) -> list[int]:
    """Maximal chains of the poset as bitmasks over positions in ``elems``."""
    n = len(elems)
    above = [[j for j in range(n) if j != i and elems[j] & elems[i] == elems[i]] for i in range(n)]
    covers = [[j for j in above[i] if not any(k in above[i] and j in above[k] for k in above[i])]
              for i in range(n)]
    minimal = [i for i in range(n) if not any(i in above[j] for j in range(n))]
    out = []

    def walk(i, acc):
        acc |= 1 << i
        if not covers[i]:
            out.append(acc)
            return
        for j in covers[i]:
            walk(j, acc)

    for i in minimal:
        walk(i, 0)
    return out


def poset_reduced_betti(elems: list[int], top: int) -> tuple[int, ...]:
    out = [0] * (top + 2)
    if not elems:
        out[0] = 1
        return tuple(out)
    core = _beat_core(elems)
    if len(core) == 1:
        return tuple(out)
    return complex_reduced_betti(_maximal_chains(core), top)


def reduced_cohomology(fan: Fan, rmask: int, alexander: bool = True) -> tuple[int, ...]:
    """Reduced cohomology ranks h~^q, q = -1..d-1, of the full subcomplex on ``rmask``."""
    memo = fan.memo.setdefault(("rc", alexander), {})
    hit = memo.get(rmask)
    if hit is not None:
        return hit
    d = fan.rank
    full = (1 << fan.nrays) - 1
    if alexander and 2 * popcount(rmask) > fan.nrays:
        # Alexander duality inside the (d-1)-sphere of a complete fan
        comp = reduced_cohomology(fan, full & ~rmask, alexander=False)
        res = tuple(comp[d - 1 - q] for q in range(-1, d))
    elif fan.subset_poset:
        res = poset_reduced_betti([fan.tags[i] for i in range(fan.nrays) if rmask >> i & 1], d - 1)
    else:
        res = complex_reduced_betti([c & rmask for c in fan.cone_masks], d - 1)
    memo[rmask] = res
    return res


# --- characters and cohomology --------------------------------------------

def _candidate_box(fan: Fan, a: np.ndarray, margin: int):
    ms = cone_characters(fan, a)
    return ms.min(axis=0) - margin, ms.max(axis=0) + margin


def negative_sets(fan: Fan, a: Sequence[int], margin: int = 1) -> dict[int, int]:
    """Map from negative-ray masks to the number of candidate characters producing them."""
    a = np.asarray(a, dtype=np.int64)
    d = fan.rank
    if d == 0:
        return {0: 1}
    lo, hi = _candidate_box(fan, a, margin)
    sides = hi - lo + 1
    total = int(np.prod(sides))
    counts: dict[bytes, int] = {}
    raysT = fan.rays.T
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        pts = np.empty((idx.size, d), dtype=np.int64)
        rem = idx
        for k in range(d - 1, -1, -1):
            pts[:, k] = rem % sides[k] + lo[k]
            rem = rem // sides[k]
        neg = (pts @ raysT + a) < 0
        packed = np.packbits(neg, axis=1, bitorder="little")
        view = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1]))).ravel()
        uniq, cnt = np.unique(view, return_counts=True)
        for u, c in zip(uniq, cnt):
            b = u.tobytes()
            counts[b] = counts.get(b, 0) + int(c)
    return {int.from_bytes(b, "little"): c for b, c in counts.items()}


def cohomology(fan: Fan, a: Sequence[int], margin: int = 1, alexander: bool = True) -> CohomologyTable:
    key = (normalize(fan, a), margin, alexander)
    memo = fan.memo.setdefault("coh", {})
    hit = memo.get(key)
    if hit is not None:
        return hit
    table = cohomology_uncached(fan, key[0], margin, alexander)
    memo[key] = table
    return table


def cohomology_uncached(fan: Fan, a: Sequence[int], margin: int = 1, alexander: bool = True) -> CohomologyTable:
    """Same computation on the given vector itself, without normalizing or memoizing."""
    d = fan.rank
    h = [0] * (d + 1)
    for rmask, cnt in negative_sets(fan, a, margin).items():
        rc = reduced_cohomology(fan, rmask, alexander)
        for p in range(d + 1):
            if rc[p]:
                h[p] += cnt * rc[p]
    return CohomologyTable(tuple(h))


def is_acyclic(fan: Fan, a: Sequence[int], margin: int = 1) -> bool:
    return cohomology(fan, a, margin).acyclic


def _face_masks(fan: Fan) -> list[tuple[int, int]]:
    faces = fan.memo.get("faces")
    if faces is None:
        seen = set()
        for c in fan.cones:
            for k in range(len(c) + 1):
                for sub in itertools.combinations(c, k):
                    seen.add(sum(1 << i for i in sub))
        faces = sorted((f, (-1) ** popcount(f)) for f in seen)
        fan.memo["faces"] = faces
    return faces


def euler_characteristic(fan: Fan, a: Sequence[int], margin: int = 1) -> int:
    """chi(D) = sum over characters m of the signed count of cones with all rays in R_m."""
    key = (normalize(fan, a), margin)
    memo = fan.memo.setdefault("chi", {})
    if key in memo:
        return memo[key]
    faces = _face_masks(fan)
    fb = np.array([[f >> i & 1 for i in range(fan.nrays)] for f, _ in faces], dtype=np.int32)
    sg = np.array([sg for _, sg in faces], dtype=np.int64)
    items = sorted(negative_sets(fan, key[0], margin).items())
    total = 0
    for start in range(0, len(items), 4096):
        part = items[start:start + 4096]
        outside = np.array([[1 - (r >> i & 1) for i in range(fan.nrays)] for r, _ in part], dtype=np.int32)
        inside = (outside @ fb.T) == 0
        cnt = np.array([c for _, c in part], dtype=np.int64)
        total += int(cnt @ (inside @ sg))
    memo[key] = total
    return total


def lattice_points(fan: Fan, a: Sequence[int]) -> int:
    """Lattice points of P_D = {m : <m, v_rho> >= -a_rho}, scanned over the hull box of m_sigma."""
    a = np.asarray(a, dtype=np.int64)
    if fan.rank == 0:
        return 1
    lo, hi = _candidate_box(fan, a, 0)
    count = 0
    for pt in itertools.product(*[range(int(l), int(h) + 1) for l, h in zip(lo, hi)]):
        if all(int(np.dot(pt, v)) >= -x for v, x in zip(fan.rays.tolist(), a.tolist())):
            count += 1
    return count


# --- orbit closures -------------------------------------------------------

@dataclass(frozen=True)
class Star:
    fan: Fan
    rays: tuple[int, ...]     # original index of each star ray
    tau: tuple[int, ...]
    cone: int                 # maximal cone used for the quotient coordinates


def star_restrict(fan: Fan, tau: Iterable[int]) -> Star:
    """Fan of the orbit closure V(tau), in coordinates on N / span(tau)."""
    tau = tuple(sorted(set(tau)))
    memo = fan.memo.setdefault("star", {})
    if tau in memo:
        return memo[tau]
    tmask = sum(1 << i for i in tau)
    owners = [ci for ci, cm in enumerate(fan.cone_masks) if cm & tmask == tmask]
    if not owners:
        raise ValueError(f"rays {tau} do not span a cone of the fan")
    c0 = owners[0]
    keep = [k for k, i in enumerate(fan.cones[c0]) if i not in tau]
    star_rays = sorted(set(i for ci in owners for i in fan.cones[ci] if i not in tau))
    pos = {r: k for k, r in enumerate(star_rays)}
    coords = (fan.rays[star_rays] @ fan._inv[c0])[:, keep] if star_rays else np.zeros((0, len(keep)), dtype=np.int64)
    cones = [tuple(pos[i] for i in fan.cones[ci] if i not in tau) for ci in owners]
    sub = Fan(coords, cones, {pos[r]: fan.tags[r] for r in star_rays if r in fan.tags},
              name=f"{fan.name}/star{list(tau)}", rank=len(keep))
    st = Star(sub, tuple(star_rays), tau, c0)
    memo[tau] = st
    return st


def zero_on(fan: Fan, a: Sequence[int], tau: Iterable[int]) -> np.ndarray:
    """D + div(m) with vanishing coefficients on the rays of the cone ``tau``."""
    tau = sorted(set(tau))
    a = np.asarray(a, dtype=np.int64)
    if not tau:
        return a.copy()
    tmask = sum(1 << i for i in tau)
    c0 = next(ci for ci, cm in enumerate(fan.cone_masks) if cm & tmask == tmask)
    b = np.array([a[i] if i in tau else 0 for i in fan.cones[c0]], dtype=np.int64)
    m = -(fan._inv[c0] @ b)
    out = a + fan.rays @ m
    assert all(out[i] == 0 for i in tau)
    return out


def restrict_divisor(fan: Fan, a: Sequence[int], tau: Iterable[int]) -> tuple[Star, tuple[int, ...]]:
    st = star_restrict(fan, tau)
    z = zero_on(fan, a, st.tau)
    return st, tuple(int(z[i]) for i in st.rays)


def chi_recursive(fan: Fan, a: Sequence[int]) -> int:
    """Euler characteristic by peeling one ray at a time: chi(D) = chi(D - D_rho) + chi(D|V(rho))."""
    if fan.rank == 0:
        return 1
    a = list(normalize(fan, a))
    memo = fan.memo.setdefault("chirec", {})
    key = tuple(a)
    if key in memo:
        return memo[key]
    total = 0
    cur = list(a)
    for r in range(fan.nrays):
        while cur[r] > 0:
            st, res = restrict_divisor(fan, cur, (r,))
            total += chi_recursive(st.fan, res)
            cur[r] -= 1
        while cur[r] < 0:
            cur[r] += 1
            st, res = restrict_divisor(fan, cur, (r,))
            total -= chi_recursive(st.fan, res)
    total += 1
    memo[key] = total
    return total


def serre_dual(fan: Fan, a: Sequence[int]) -> tuple[int, ...]:
    return tuple(-1 - int(x) for x in a)


# --- divisor classes on LM fans ------------------------------------------

def _local_mask(mask: int, elements: Sequence[int]) -> int:
    return sum(1 << k for k, e in enumerate(elements) if mask >> (e - 1) & 1)


def _global_mask(local: int, elements: Sequence[int]) -> int:
    return sum(1 << (e - 1) for k, e in enumerate(elements) if local >> k & 1)


def class_to_tdivisor(cls, fan: Fan | None = None) -> tuple[int, ...]:
    """Torus-invariant representative of an LM class on the fan of its ground set.

    Elements of the ground set are relabeled 1..k in increasing order.
    """
    from .picard import tdivisor_combo
    model = cls.model
    if model.r != -1:
        raise ValueError("only LM models have a fan here")
    if not cls.is_integral:
        raise ValueError("class is not integral")
    els = model.elements
    k = len(els)
    if k == 1:
        return ()
    fan = fan or lm_fan(k)
    out = [0] * fan.nrays
    for (_, s), c in tdivisor_combo(model, cls).items():
        out[_local_mask(s, els) - 1] = c
    return tuple(out)


def tdivisor_to_class(a: Sequence[int], model):
    from .picard import DivisorClass, boundary
    els = model.elements
    total = DivisorClass(model)
    for idx, c in enumerate(a):
        if c:
            total = total + boundary(model, _global_mask(idx + 1, els)) * int(c)
    return total


def cremona_tdivisor(a: Sequence[int], n: int) -> tuple[int, ...]:
    """The fan involution e_S -> e_{S^c} acting on ray coefficients."""
    full = (1 << n) - 1
    return tuple(int(a[(full & ~(idx + 1)) - 1]) for idx in range(len(a)))


def cremona_class(cls):
    n = cls.model.n
    return tdivisor_to_class(cremona_tdivisor(class_to_tdivisor(cls), n), cls.model)


def stratum_fans(blocks: Sequence[int]) -> list[Fan]:
    return [lm_fan(popcount(b)) if popcount(b) > 1 else point_fan() for b in blocks]


def stratum_chain(blocks: Sequence[int]) -> tuple[int, ...]:
    acc, out = 0, []
    for b in blocks[:-1]:
        acc |= b
        out.append(acc)
    return tuple(out)


def restriction_matches(cls, blocks: Sequence[int], factorized=None) -> bool:
    """Compare the star-fan restriction of ``cls`` with a per-factor class.

    A ray S of the star lies strictly between consecutive prefix unions; it is the
    ray S minus the lower union in the corresponding factor.
    """
    from .picard import restrict_to_stratum
    model = cls.model
    n = model.n
    if model.ground != (1 << n) - 1:
        raise ValueError("use the standard ground set 1..n")
    fan = lm_fan(n)
    chain = stratum_chain(blocks)
    if factorized is None:
        factorized = restrict_to_stratum(cls, blocks)
    a = class_to_tdivisor(cls, fan)
    st, res = restrict_divisor(fan, a, [s - 1 for s in chain])
    prefix = (0,) + chain + (model.ground,)
    expect = []
    for ridx in st.rays:
        s = ridx + 1
        i = next(i for i in range(len(blocks)) if prefix[i] & ~s == 0 and s & ~prefix[i + 1] == 0)
        fmodel, fcls = factorized.factors[i]
        tdiv = class_to_tdivisor(fcls)
        expect.append(tdiv[_local_mask(s & ~prefix[i], fmodel.elements) - 1])
    return linearly_equivalent(st.fan, res, expect)
