"""Two-sided Gröbner bases in PBW rings of iterated Ore extensions.

The monomial order is pure lex with the highest-index generator most
significant.  Every defining relation ``x_j x_i = q^m x_i x_j + d_j(x_i)``
then has leading monomial ``x_i x_j`` because ``d_j(x_i)`` only involves
generators below ``x_j``, so these rings are solvable polynomial rings for
this order and left Buchberger completion applies.  Two-sidedness comes
from also feeding every right multiple ``g * x_i`` of a new basis element
back into the queue.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .pbw import CglPresentation, NFPoly, _add_into, lex_key
from .qfield import ONE, RatQ

__all__ = [
    "IdealHandle",
    "GBCapError",
    "IncompleteHandleError",
    "two_sided_gb",
    "left_gb",
    "normal_form",
    "ideal_member",
    "ideal_contains",
    "ideal_equal",
    "saturate",
    "right_divide",
    "DEFAULT_PAIR_CAP",
]

DEFAULT_PAIR_CAP = 10000


class GBCapError(RuntimeError):
    """Completion exceeded its pair budget; ``partial`` holds the basis so far."""

    def __init__(self, message: str, partial: list):
        super().__init__(message)
        self.partial = partial


class IncompleteHandleError(RuntimeError):
    pass


@dataclass
class IdealHandle:
    ring: CglPresentation
    gens: list
    gb: Optional[list] = None
    complete: bool = False
    stats: dict = field(default_factory=dict)

    def __repr__(self):
        size = len(self.gb) if self.gb is not None else "?"
        return f"IdealHandle({len(self.gens)} gens, gb size {size}, complete={self.complete})"


# ---------------------------------------------------------------------------
# reduction kernel
# ---------------------------------------------------------------------------


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class _Basis:
    """Monic basis elements with cached leading data."""

    def __init__(self, ring: CglPresentation):
        self.ring = ring
        self.eng = ring.engine
        self.polys = []  # list of term dicts
        self.lms = []
        self.alive = []
        self._shifted = {}

    def add(self, terms: dict) -> int:
        lm = max(terms, key=lex_key)
        self.polys.append(terms)
        self.lms.append(lm)
        self.alive.append(True)
        return len(self.polys) - 1

    def shifted(self, k: int, shift: tuple) -> dict:
        """x^shift * g_k, cached."""
        key = (k, shift)
        hit = self._shifted.get(key)
        if hit is None:
            hit = self.eng.mul_terms({shift: ONE}, self.polys[k])
            self._shifted[key] = hit
        return hit

    def find_reducer(self, m: tuple) -> int:
        for k, lm in enumerate(self.lms):
            if self.alive[k] and _divides(lm, m):
                return k
        return -1

    def reduce(self, terms: dict, full: bool = True) -> dict:
        f = dict(terms)
        rem = {}
        while f:
            m = max(f, key=lex_key)
            c = f[m]
            k = self.find_reducer(m)
            if k < 0:
                if not full:
                    rem.update(f)
                    return rem
                rem[m] = c
                del f[m]
                continue
            shift = tuple(x - y for x, y in zip(m, self.lms[k]))
            prod = self.shifted(k, shift)
            factor = c / prod[m]
            _add_into(f, prod.items(), -factor)
            f.pop(m, None)
        return rem


def _monic(terms: dict) -> dict:
    lm = max(terms, key=lex_key)
    c = terms[lm]
    if c.is_one():
        return terms
    inv = c.inverse()
    return {m: v * inv for m, v in terms.items()}


def _proportional(f: dict, g: dict) -> bool:
    if f.keys() != g.keys():
        return False
    m = next(iter(f))
    ratio = f[m] / g[m]
    return all(f[k] == ratio * g[k] for k in f)


def _complete(ring: CglPresentation, gens: Iterable, pair_cap: int, two_sided: bool) -> tuple:
    B = _Basis(ring)
    eng = ring.engine
    n = ring.n
    todo = [dict(g.terms) for g in gens if g]
    pairs = []  # heap of (lcm key, counter, i, j)
    counter = 0
    processed = 0

    def insert(terms):
        nonlocal counter
        r = B.reduce(terms)
        if not r:
            return
        r = _monic(r)
        k = B.add(r)
        lm = B.lms[k]
        for i in range(k):
            if not B.alive[i]:
                continue
            lcm = tuple(max(a, b) for a, b in zip(B.lms[i], lm))
            # disjoint-support product criterion does not hold in skew rings; keep every pair
            heapq.heappush(pairs, (sum(lcm), lex_key(lcm), counter, i, k))
            counter += 1
        if two_sided:
            for i in range(n):
                e = [0] * n
                e[i] = 1
                right = eng.mul_terms(r, {tuple(e): ONE})
                # g x_i is already a left multiple of g when it is proportional to x_i g
                if not _proportional(right, eng.mul_terms({tuple(e): ONE}, r)):
                    todo.append(right)

    while todo or pairs:
        if processed > pair_cap:
            partial = [NFPoly(n, B.polys[k], _clean=True) for k in range(len(B.polys)) if B.alive[k]]
            raise GBCapError(f"pair cap {pair_cap} exceeded", partial)
        processed += 1
        if todo:
            insert(todo.pop())
            continue
        _, _, _, i, j = heapq.heappop(pairs)
        lcm = tuple(max(a, b) for a, b in zip(B.lms[i], B.lms[j]))
        if _chain_skippable(B, i, j, lcm):
            continue
        si = B.shifted(i, tuple(x - y for x, y in zip(lcm, B.lms[i])))
        sj = B.shifted(j, tuple(x - y for x, y in zip(lcm, B.lms[j])))
        sp = {m: c / si[lcm] for m, c in si.items()}
        _add_into(sp, sj.items(), -(sj[lcm].inverse()))
        sp.pop(lcm, None)
        if sp:
            insert(sp)

    # interreduce to the reduced basis
    live = [k for k in range(len(B.polys)) if B.alive[k]]
    live.sort(key=lambda k: lex_key(B.lms[k]))
    minimal = []
    for k in live:
        if not any(_divides(B.lms[o], B.lms[k]) for o in minimal):
            minimal.append(k)
    R = _Basis(ring)
    for k in minimal:
        R.add(B.polys[k])
    out = []
    for idx in range(len(R.polys)):
        R.alive[idx] = False
        red = R.reduce(R.polys[idx])
        R.alive[idx] = True
        red = _monic(red)
        R.polys[idx] = red
        R._shifted = {key: v for key, v in R._shifted.items() if key[0] != idx}
        out.append(NFPoly(n, red, _clean=True))
    out.sort(key=lambda f: lex_key(f.leading_monomial()))
    return out, processed


def _chain_skippable(B: _Basis, i: int, j: int, lcm: tuple) -> bool:
    # Gebauer-Moeller style chain test is not applied: solvable rings break its
    # commutative justification for pairs created before right multiples arrive.
    return False


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def two_sided_gb(ring: CglPresentation, gens: Iterable[NFPoly], pair_cap: int = DEFAULT_PAIR_CAP) -> IdealHandle:
    """Complete ``gens`` to a reduced two-sided Gröbner basis."""
    gens = [g for g in gens]
    t0 = time.perf_counter()
    gb, processed = _complete(ring, gens, pair_cap, two_sided=True)
    return IdealHandle(ring, gens, gb, True, {"pairs": processed, "seconds": time.perf_counter() - t0})


def left_gb(ring: CglPresentation, gens: Iterable[NFPoly], pair_cap: int = DEFAULT_PAIR_CAP) -> list:
    """Reduced Gröbner basis of the left ideal generated by ``gens``."""
    gb, _ = _complete(ring, list(gens), pair_cap, two_sided=False)
    return gb


def _basis_of(h: IdealHandle) -> _Basis:
    if not h.complete or h.gb is None:
        raise IncompleteHandleError("ideal handle has no completed Gröbner basis")
    B = h.stats.get("_basis")
    if B is None:
        B = _Basis(h.ring)
        for g in h.gb:
            B.add(g.terms)
        h.stats["_basis"] = B
    return B


def normal_form(h: IdealHandle, f: NFPoly) -> NFPoly:
    """Fully reduced remainder of f; zero exactly when f lies in the ideal."""
    B = _basis_of(h)
    if f.n != h.ring.n:
        raise ValueError("element and ideal live over different numbers of generators")
    return NFPoly(f.n, B.reduce(f.terms), _clean=True)


def ideal_member(h: IdealHandle, f: NFPoly) -> bool:
    return normal_form(h, f).is_zero()


def ideal_contains(h_big: IdealHandle, gens_small: Iterable[NFPoly]) -> bool:
    return all(ideal_member(h_big, g) for g in gens_small)


def ideal_equal(a: IdealHandle, b: IdealHandle) -> bool:
    if not a.ring.same_data(b.ring):
        raise ValueError("ideals live in different rings")
    return ideal_contains(a, a_gens(b)) and ideal_contains(b, a_gens(a))


def a_gens(h: IdealHandle) -> list:
    return h.gb if h.gb is not None else h.gens


# ---------------------------------------------------------------------------
# saturation with respect to right multiplication by a generator
# ---------------------------------------------------------------------------


def _check_right_shift(ring: CglPresentation, s: int):
    for (l, i) in ring.delta:
        if l > s and i == s:
            raise ValueError(f"x{s} is not right-shiftable: delta.{l}.{s} is nonzero")


def right_shift_scalar(ring: CglPresentation, s: int, a: tuple) -> RatQ:
    """Scalar mu with x^a * x_s = mu * x^(a + e_s)."""
    e = sum(ring.lambda_exp[l][s - 1] * a[l] for l in range(s, ring.n))
    return RatQ.qpow(e)


def right_multiply_gen_power(ring: CglPresentation, s: int, f: dict, k: int) -> dict:
    out = {}
    for a, c in f.items():
        e = sum(ring.lambda_exp[l][s - 1] * a[l] for l in range(s, ring.n)) * k
        b = list(a)
        b[s - 1] += k
        out[tuple(b)] = c * RatQ.qpow(e) if e else c
    return out


def right_divide(ring: CglPresentation, s: int, f: NFPoly) -> Optional[NFPoly]:
    """The element g with g * x_s = f, or None when f is not a right multiple."""
    out = {}
    for a, c in f.terms.items():
        if a[s - 1] == 0:
            return None
        b = list(a)
        b[s - 1] -= 1
        b = tuple(b)
        out[b] = c / right_shift_scalar(ring, s, b)
    return NFPoly(f.n, out, _clean=True)


def _colon_generators(ring: CglPresentation, gb: list, s: int, pair_cap: int) -> list:
    """Left generators of {f : f x_s in I} computed via I ∩ R x_s.

    The intersection uses a central auxiliary variable t placed above every
    generator (so pure lex eliminates it): (t I + (1 - t) R x_s) ∩ R.
    """
    Rt = ring.with_extra_central()
    n = ring.n
    lift = [NFPoly(n + 1, {m + (1,): c for m, c in g.terms.items()}, _clean=True) for g in gb]
    xs = [0] * (n + 1)
    xs[s - 1] = 1
    xst = list(xs)
    xst[n] = 1
    lift.append(NFPoly(n + 1, {tuple(xs): ONE, tuple(xst): -ONE}, _clean=True))
    G = left_gb(Rt, lift, pair_cap)
    out = []
    for g in G:
        if all(m[n] == 0 for m in g.terms):
            h = NFPoly(n, {m[:n]: c for m, c in g.terms.items()}, _clean=True)
            q = right_divide(ring, s, h)
            if q is None:
                raise AssertionError("elimination produced an element outside R x_s")
            out.append(q)
    return out


def saturate(h: IdealHandle, s: int, pair_cap: int = DEFAULT_PAIR_CAP, certify: bool = True) -> tuple:
    """Saturate a two-sided ideal with respect to right multiplication by x_s.

    Returns ``(handle, certified)``.  Requires d_l(x_s) = 0 for every l > s
    so that right multiplication by x_s shifts PBW monomials.  When
    ``certify`` is set, the result is checked to satisfy I : x_s = I via an
    elimination; ``certified`` is False only if that check ran out of budget.
    """
    ring = h.ring
    _check_right_shift(ring, s)
    cur = h
    while True:
        # cheap pass: basis elements that are already right multiples of x_s
        extra = []
        for g in cur.gb:
            q = right_divide(ring, s, g)
            while q is not None:
                extra.append(q)
                q = right_divide(ring, s, q)
        extra = [e for e in extra if not ideal_member(cur, e)]
        if extra:
            cur = two_sided_gb(ring, list(cur.gb) + extra, pair_cap)
            continue
        if not certify:
            return cur, False
        try:
            colon = _colon_generators(ring, cur.gb, s, pair_cap)
        except GBCapError:
            return cur, False
        extra = [e for e in colon if not ideal_member(cur, e)]
        if not extra:
            return cur, True
        cur = two_sided_gb(ring, list(cur.gb) + extra, pair_cap)
