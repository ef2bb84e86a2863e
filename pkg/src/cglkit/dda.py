"""Deleting-derivations tower and element transport between its levels.

Level ``j`` (``2 <= j <= n+1``) of the tower keeps the derivation rows
``l < j`` of the input presentation and drops the rest, so level ``n+1`` is
the algebra itself and level 2 is a quantum affine space.  Adjacent levels
``j`` and ``j+1`` become isomorphic once ``x_j`` is inverted.  The forward
isomorphism sends the level-``j`` generator ``T_i`` (``i < j``) to the
finite series::

    sum_k  (1 - q_j)^-k / [k]!_{q_j}  *  d_j^k s_j^-k (x_i)  *  x_j^-k

and fixes ``T_i`` for ``i >= j``.  Elements of the localized ring are
:class:`LocElement` objects: PBW-Laurent polynomials whose only possibly
negative exponent sits at the inverted index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .gbasis import IdealHandle, normal_form, two_sided_gb
from .pbw import (
    DEFAULT_NILPOTENCY_CAP,
    CglPresentation,
    LaurentPoly,
    NFPoly,
    ValidationReport,
    _add_into,
    apply_delta,
    nilpotency_index,
    validate_cgl,
)
from .qfield import ONE, RatQ, cauchon_coeff

__all__ = [
    "TowerError",
    "PresentationTower",
    "LocElement",
    "delete_step",
    "build_tower",
    "loc_multiply",
    "loc_power",
    "generator_image",
    "transport",
    "inverse_transport",
    "clear_right",
    "matchloc_check",
    "rename",
    "g_map",
]


class TowerError(ValueError):
    def __init__(self, message: str, level: Optional[int] = None):
        super().__init__(message if level is None else f"level {level}: {message}")
        self.level = level


class LocElement(LaurentPoly):
    """Element of a level ring with generator ``x_j`` inverted."""

    __slots__ = ("j",)

    def __init__(self, n: int, terms=None, j: int = 1, *, _clean=False):
        self.j = j
        super().__init__(n, terms, _clean=_clean)

    def _check(self):
        for m in self.terms:
            for k, e in enumerate(m):
                if e < 0 and k != self.j - 1:
                    raise ValueError(f"negative exponent away from x{self.j}: {m}")

    def _new(self, terms):
        return LocElement(self.n, terms, self.j, _clean=True)

    @classmethod
    def lift(cls, f: LaurentPoly, j: int) -> "LocElement":
        return cls(f.n, dict(f.terms), j, _clean=True)

    def min_exponent(self) -> int:
        return min((m[self.j - 1] for m in self.terms), default=0)

    def is_regular(self) -> bool:
        return self.min_exponent() >= 0

    def to_nf(self) -> NFPoly:
        if not self.is_regular():
            raise ValueError("element has negative powers of the inverted generator")
        return NFPoly(self.n, dict(self.terms), _clean=True)


# ---------------------------------------------------------------------------
# tower
# ---------------------------------------------------------------------------


def delete_step(P: CglPresentation, j: int) -> CglPresentation:
    """Drop the derivation row ``j`` (the passage from level j+1 to level j)."""
    if not 2 <= j <= P.n:
        raise ValueError(f"step index {j} out of range 2..{P.n}")
    if j not in P.delta_rows():
        return P
    delta = {k: v for k, v in P.delta.items() if k[0] != j}
    return P.with_delta(delta, f"{P.name}|{j}" if P.name else "")


@dataclass(frozen=True, eq=False)
class PresentationTower:
    top: CglPresentation
    levels: dict  # j -> presentation, j = 2 .. n+1

    @property
    def n(self) -> int:
        return self.top.n

    def level(self, j: int) -> CglPresentation:
        try:
            return self.levels[j]
        except KeyError:
            raise ValueError(f"no tower level {j}; levels run 2..{self.n + 1}") from None

    @property
    def bottom(self) -> CglPresentation:
        return self.levels[2]

    def _loc(self, j: int) -> "_LocRing":
        key = ("loc", j)
        cache = self.top._cache.setdefault("tower", {})
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = _LocRing(self.level(j + 1), j)
        return hit


def build_tower(P: CglPresentation, nilpotency_cap: int = DEFAULT_NILPOTENCY_CAP, validate: bool = True) -> PresentationTower:
    """All levels from the algebra itself down to its quantum affine space."""
    levels = {P.n + 1: P}
    cur = P
    for j in range(P.n, 1, -1):
        cur = delete_step(cur, j) if P.n >= 2 else cur
        levels[j] = cur
    if P.n == 1:
        levels[2] = P
    if validate:
        for j in sorted(levels, reverse=True):
            rep = validate_cgl(levels[j], nilpotency_cap)
            if not rep.ok:
                bad = "; ".join(c.name for c in rep.failures())
                raise TowerError(f"presentation is not a valid CGL input ({bad})", j)
    return PresentationTower(P, levels)


# ---------------------------------------------------------------------------
# localized arithmetic
# ---------------------------------------------------------------------------


class _LocRing:
    """Arithmetic in ``ring`` with x_j inverted.

    ``ring`` is level j+1 for the forward direction or level j for the
    inverse; either way generators above j q-commute with everything below.
    """

    def __init__(self, ring: CglPresentation, j: int):
        self.ring = ring
        self.eng = ring.engine
        self.n = ring.n
        self.j = j
        self.jj = j - 1
        self.m = ring.lambda_exp
        self.c = ring.q_exp[j - 1]
        self.has_delta = any(k[0] == j for k in ring.delta)
        self._inv = {}
        self._pow = {}

    def split(self, a: tuple):
        jj = self.jj
        low = a[:jj] + (0,) * (self.n - jj)
        high = (0,) * (jj + 1) + a[jj + 1:]
        return low, a[jj], high

    def sigma_inv(self, f: dict) -> dict:
        row = self.m[self.jj]
        out = {}
        for a, c in f.items():
            e = -sum(row[k] * a[k] for k in range(self.jj))
            out[a] = c * RatQ.qpow(e) if e else c
        return out

    def delta(self, f: dict) -> dict:
        if not self.has_delta:
            return {}
        out = {}
        for a, c in f.items():
            _add_into(out, self.eng.delta_mono(self.jj, a).items(), c)
        return out

    def inv_times_mono(self, a: tuple) -> dict:
        """x_j^-1 * x^a for a monomial in x_{<j}."""
        hit = self._inv.get(a)
        if hit is not None:
            return hit
        out = {}
        f = {a: ONE}
        k = 0
        sign = ONE
        while f:
            for m, c in self.sigma_inv(f).items():
                mm = list(m)
                mm[self.jj] = -(k + 1)
                _add_into(out, [(tuple(mm), c)], sign)
            f = self.delta(self.sigma_inv(f))
            k += 1
            sign = -sign
        self._inv[a] = out
        return out

    def pow_times_mono(self, e: int, a: tuple) -> dict:
        """x_j^e * x^a for a monomial in x_{<j} and any integer e."""
        key = (e, a)
        hit = self._pow.get(key)
        if hit is not None:
            return hit
        if e >= 0:
            xe = [0] * self.n
            xe[self.jj] = e
            out = self.eng.mono_mono(tuple(xe), a)
        else:
            cur = {a: ONE}
            for _ in range(-e):
                nxt = {}
                for m, c in cur.items():
                    low, ej, _ = self.split(m)
                    for mm, cc in self.inv_times_mono(low).items():
                        t = list(mm)
                        t[self.jj] += ej
                        _add_into(nxt, [(tuple(t), cc)], c)
                cur = nxt
            out = cur
        self._pow[key] = out
        return out

    def mono_mul(self, u: tuple, v: tuple) -> dict:
        jj = self.jj
        A, a, B = self.split(u)
        A2, a2, B2 = self.split(v)
        # move B (generators above j) to the right past A2 x_j^a2
        e = 0
        for l in range(jj + 1, self.n):
            if B[l]:
                row = self.m[l]
                e += B[l] * sum(row[i] * v[i] for i in range(jj + 1))
        scale = RatQ.qpow(e) if e else ONE
        BB = self.eng.mono_mono(B, B2)
        ((bb, cbb),) = BB.items()
        scale = scale * cbb
        out = {}
        for m, c in self.pow_times_mono(a, A2).items():
            low, ej, _ = self.split(m)
            for mm, cc in self.eng.mono_mono(A, low).items():
                t = list(mm)
                t[jj] = ej + a2
                for l in range(jj + 1, self.n):
                    t[l] = bb[l]
                _add_into(out, [(tuple(t), cc)], c * scale)
        return out

    def mul(self, f: dict, g: dict) -> dict:
        out = {}
        for u, cu in f.items():
            for v, cv in g.items():
                _add_into(out, self.mono_mul(u, v).items(), cu * cv)
        return out

    def right_gen_power(self, f: dict, k: int) -> dict:
        """f * x_j^k; generators above j only contribute a scalar."""
        jj = self.jj
        out = {}
        for a, c in f.items():
            e = k * sum(self.m[l][jj] * a[l] for l in range(jj + 1, self.n))
            t = list(a)
            t[jj] += k
            out[tuple(t)] = c * RatQ.qpow(e) if e else c
        return out


def loc_multiply(tower: PresentationTower, j: int, f: LaurentPoly, g: LaurentPoly) -> LocElement:
    """Product in level j+1 with x_j inverted."""
    L = tower._loc(j)
    return LocElement(tower.n, L.mul(f.terms, g.terms), j, _clean=True)


def loc_power(tower: PresentationTower, j: int, f: LaurentPoly, k: int) -> LocElement:
    out = LocElement(tower.n, {(0,) * tower.n: ONE}, j, _clean=True)
    for _ in range(k):
        out = loc_multiply(tower, j, out, f)
    return out


def generator_image(tower: PresentationTower, j: int, i: int) -> LocElement:
    """Image of the level-j generator T_i in level j+1 with x_j inverted."""
    n = tower.n
    if not 2 <= j <= n:
        raise ValueError(f"step index {j} out of range 2..{n}")
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} out of range 1..{n}")
    cache = tower.top._cache.setdefault("tower", {})
    key = ("img", j, i)
    hit = cache.get(key)
    if hit is not None:
        return hit
    xi = NFPoly.gen(n, i)
    if i >= j:
        out = LocElement.lift(xi, j)
    else:
        R = tower.level(j + 1)
        c = R.q_exp[j - 1]
        m = R.m(j, i)
        K = nilpotency_index(R, j, xi)
        terms = {}
        d = xi
        for k in range(K):
            coeff = cauchon_coeff(k, c) * RatQ.qpow(-k * m)
            for a, v in d.terms.items():
                t = list(a)
                t[j - 1] -= k
                _add_into(terms, [(tuple(t), v)], coeff)
            d = apply_delta(R, j, d)
        out = LocElement(n, terms, j, _clean=True)
    cache[key] = out
    return out


def transport(tower: PresentationTower, j: int, f: LaurentPoly) -> LocElement:
    """Image of a level-j element (T_j may be inverted) in level j+1 with x_j inverted."""
    n = tower.n
    L = tower._loc(j)
    out = {}
    for a, c in f.terms.items():
        cur = {(0,) * n: ONE}
        for i in range(j - 1):
            if a[i]:
                img = generator_image(tower, j, i + 1).terms
                for _ in range(a[i]):
                    cur = L.mul(cur, img)
        tail = (0,) * (j - 1) + a[j - 1:]
        cur = L.mul(cur, {tail: ONE})
        _add_into(out, cur.items(), c)
    return LocElement(n, out, j, _clean=True)


def clear_right(tower_or_ring, j: int, f: LocElement) -> tuple:
    """Return ``(f * x_j^K, K)`` with the least K >= 0 clearing negative powers."""
    ring = tower_or_ring.level(j + 1) if isinstance(tower_or_ring, PresentationTower) else tower_or_ring
    K = max(0, -f.min_exponent())
    L = _LocRing(ring, j)
    return NFPoly(f.n, L.right_gen_power(f.terms, K), _clean=True), K


def inverse_transport(tower: PresentationTower, j: int, f: LaurentPoly) -> LocElement:
    """Image of a level-(j+1) element in level j with T_j inverted."""
    n = tower.n
    R = tower.level(j + 1)
    cache = tower.top._cache.setdefault("tower", {}).setdefault(("psi", j), {})
    c = R.q_exp[j - 1]
    fwd = tower._loc(j)
    has_delta = any(k[0] == j for k in R.delta)

    def psi_low(a: tuple) -> dict:
        # a is a monomial in x_{<j}
        hit = cache.get(a)
        if hit is not None:
            return hit
        out = {a: ONE}
        if has_delta:
            # d_j^k s_j^-k (x^a) = q^(-k w) d_j^k (x^a), w the s_j-exponent of x^a
            w = sum(R.lambda_exp[j - 1][i] * a[i] for i in range(j - 1))
            d = {a: ONE}
            k = 0
            while True:
                k += 1
                d = fwd.delta(d)
                if not d:
                    break
                coeff = -cauchon_coeff(k, c) * RatQ.qpow(-k * w)
                for b, cb in d.items():
                    for m, cm in psi_low(b).items():
                        t = list(m)
                        t[j - 1] -= k
                        _add_into(out, [(tuple(t), cm)], cb * coeff)
        cache[a] = out
        return out

    out = {}
    for a, cf in f.terms.items():
        low = a[: j - 1] + (0,) * (n - j + 1)
        for m, cm in psi_low(low).items():
            t = list(m)
            t[j - 1] += a[j - 1]
            for l in range(j, n):
                t[l] = a[l]
            _add_into(out, [(tuple(t), cm)], cf)
    return LocElement(n, out, j, _clean=True)


# ---------------------------------------------------------------------------
# verification and the quotient maps
# ---------------------------------------------------------------------------


def matchloc_check(tower: PresentationTower, j: int) -> ValidationReport:
    """Check that the images of T_1..T_n satisfy the level-j relations."""
    n = tower.n
    Rj = tower.level(j)
    L = tower._loc(j)
    rep = ValidationReport()
    imgs = [generator_image(tower, j, i).terms for i in range(1, n + 1)]
    for l in range(2, n + 1):
        for i in range(1, l):
            lhs = L.mul(imgs[l - 1], imgs[i - 1])
            rhs = L.mul(imgs[i - 1], imgs[l - 1])
            _add_into(lhs, rhs.items(), -Rj.lam(l, i))
            d = Rj.delta.get((l, i))
            if d:
                _add_into(lhs, transport(tower, j, d).terms.items(), -ONE)
            rep.add("matchloc", f"T{l} T{i} relation", not lhs,
                    "" if not lhs else f"residual {LocElement(n, lhs, j, _clean=True)}")
    return rep


def rename(f: LaurentPoly) -> NFPoly:
    """Read a normal form verbatim over an adjacent level (same coefficient map)."""
    return NFPoly(f.n, dict(f.terms), _clean=True)


def g_map(tower: PresentationTower, j: int, f: NFPoly, xj_ideal: Optional[IdealHandle] = None) -> NFPoly:
    """Canonical representative of the image of a level-j element modulo <x_j> at level j+1."""
    if xj_ideal is None:
        R = tower.level(j + 1)
        cache = tower.top._cache.setdefault("tower", {})
        xj_ideal = cache.get(("xj", j))
        if xj_ideal is None:
            xj_ideal = cache[("xj", j)] = two_sided_gb(R, [R.x(j)])
    return normal_form(xj_ideal, rename(f))
