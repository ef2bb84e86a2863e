"""Torus-invariant primes through the deleting-derivations tower.

A diagram ``w`` (a subset of ``1..n``) names the ideal ``K_w`` generated by
the ``T_i`` with ``i`` in ``w`` at the bottom of the tower.  Lifting it one
level at a time either produces generators of the matching invariant prime
``J_w`` of the top algebra or stops at a step where the kernel of the
quotient map is not contained in the current ideal.

Steps come in two kinds.  At a black step ``s`` (``s`` in ``w``) the ideal
is pushed through ``T_i -> x_i  (mod x_s)``, which is possible exactly when
``T_s`` and every renamed ``d_s(x_i)`` already lie in the ideal.  At a white
step the generators are transported into the localization at ``x_s``,
cleared of negative powers on the right, and the resulting ideal is
saturated with respect to right multiplication by ``x_s``.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .dda import PresentationTower, build_tower, clear_right, inverse_transport, rename, transport
from .gbasis import (
    DEFAULT_PAIR_CAP,
    GBCapError,
    IdealHandle,
    ideal_contains,
    ideal_member,
    saturate,
    two_sided_gb,
)
from .pbw import NFPoly, weight_of

__all__ = [
    "CauchonDiagram",
    "HPrimeRecord",
    "StratumReport",
    "ChainLink",
    "PosetResult",
    "TauvelRow",
    "TauvelReport",
    "ConsistencyError",
    "LiftResult",
    "lift_step",
    "admissible",
    "enumerate_hspec",
    "jw_generators",
    "jw_handle",
    "blackbox_chain",
    "stratum_dimension",
    "center_decomposition",
    "integer_kernel",
    "poset",
    "tauvel_report",
    "diagram_render",
    "diagram_parse",
    "records_csv",
    "poset_dot",
    "DescentOracle",
]


class ConsistencyError(RuntimeError):
    """Membership of T_s disagrees with the diagram colour at step s."""


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CauchonDiagram:
    n: int
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        if any(not 1 <= i <= self.n for i in members):
            raise ValueError(f"diagram members must lie in 1..{self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "CauchonDiagram":
        return cls(n, frozenset(i + 1 for i in range(n) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.members)

    @property
    def black(self) -> int:
        return len(self.members)

    @property
    def white(self) -> int:
        return self.n - len(self.members)

    def white_indices(self) -> list:
        return [i for i in range(1, self.n + 1) if i not in self.members]

    def without_max(self) -> "CauchonDiagram":
        return CauchonDiagram(self.n, self.members - {max(self.members)})

    def __str__(self):
        return diagram_render(self)


def diagram_render(w: CauchonDiagram) -> str:
    return "".join("B" if i in w.members else "W" for i in range(1, w.n + 1))


def diagram_parse(text: str) -> CauchonDiagram:
    text = text.strip()
    bad = [c for c in text if c not in "BW"]
    if bad or not text:
        raise ValueError(f"diagram must be a non-empty string of 'B' and 'W', got {text!r}")
    return CauchonDiagram(len(text), frozenset(i + 1 for i, c in enumerate(text) if c == "B"))


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


@dataclass
class LiftResult:
    handle: Optional[IdealHandle]
    rejected: bool = False
    reason: str = ""
    witness: Optional[NFPoly] = None
    saturation_flag: bool = False


def lift_step(tower: PresentationTower, s: int, J: IdealHandle, w: CauchonDiagram,
              pair_cap: int = DEFAULT_PAIR_CAP) -> LiftResult:
    """Lift a completed ideal of level s to level s+1."""
    n = tower.n
    Rs1 = tower.level(s + 1)
    xs = NFPoly.gen(n, s)
    black = s in w.members
    if ideal_member(J, xs) != black:
        raise ConsistencyError(
            f"step {s}: T{s} {'is not' if black else 'is'} in the ideal but the diagram box is "
            f"{'black' if black else 'white'}"
        )
    if black:
        for i in range(1, s):
            d = Rs1.delta.get((s, i))
            if d is not None and not ideal_member(J, rename(d)):
                return LiftResult(None, True, f"kernel element d{s}(x{i}) = {d} is not in the ideal", rename(d))
        gens = [xs] + [rename(g) for g in J.gb]
        return LiftResult(two_sided_gb(Rs1, gens, pair_cap))
    images = []
    for g in J.gb:
        cleared, _ = clear_right(tower, s, transport(tower, s, g))
        images.append(cleared)
    h = two_sided_gb(Rs1, images, pair_cap)
    h, certified = saturate(h, s, pair_cap)
    return LiftResult(h, saturation_flag=not certified)


@dataclass
class HPrimeRecord:
    w: CauchonDiagram
    admissible: bool = False
    reject_step: Optional[int] = None
    reason: str = ""
    ideal_tower: dict = field(default_factory=dict)  # level -> reduced GB
    height: Optional[int] = None
    gk: Optional[int] = None
    stratum_dim: Optional[int] = None
    saturation_flag: bool = False
    error: Optional[str] = None

    @property
    def diagram(self) -> str:
        return diagram_render(self.w)


def _bottom_handle(tower: PresentationTower, w: CauchonDiagram, pair_cap: int) -> IdealHandle:
    return two_sided_gb(tower.bottom, [NFPoly.gen(tower.n, i) for i in sorted(w.members)], pair_cap)


def admissible(tower: PresentationTower, w: CauchonDiagram, pair_cap: int = DEFAULT_PAIR_CAP) -> HPrimeRecord:
    """Run the lifting pipeline for one diagram."""
    if w.n != tower.n:
        raise ValueError(f"diagram has {w.n} boxes but the algebra has {tower.n} generators")
    rec = HPrimeRecord(w)
    J = _bottom_handle(tower, w, pair_cap)
    rec.ideal_tower[2] = list(J.gb)
    for s in range(2, tower.n + 1):
        res = lift_step(tower, s, J, w, pair_cap)
        if res.rejected:
            rec.reject_step = s
            rec.reason = res.reason
            return rec
        J = res.handle
        rec.saturation_flag |= res.saturation_flag
        rec.ideal_tower[s + 1] = list(J.gb)
    if tower.n == 1:
        rec.ideal_tower[2] = list(J.gb)
    rec.admissible = True
    rec.height = w.black
    rec.gk = w.white
    rec.stratum_dim = stratum_dimension(tower, w)
    return rec


def _safe_admissible(tower, w, pair_cap):
    try:
        return admissible(tower, w, pair_cap)
    except (ConsistencyError, GBCapError, ArithmeticError, ValueError) as exc:
        return HPrimeRecord(w, error=f"{type(exc).__name__}: {exc}")


_WORKER_TOWER = None


def _worker_init(doc: str, nilpotency_cap: int):
    global _WORKER_TOWER
    from .catalog import loads

    _WORKER_TOWER = build_tower(loads(doc), nilpotency_cap, validate=False)


def _worker_run(args):
    mask, pair_cap = args
    return _safe_admissible(_WORKER_TOWER, CauchonDiagram.from_mask(_WORKER_TOWER.n, mask), pair_cap)


def enumerate_hspec(tower: PresentationTower, pair_cap: int = DEFAULT_PAIR_CAP, jobs: int = 1,
                    nilpotency_cap: int = 64) -> list:
    """One record per subset of 1..n, ordered by bitmask.

    A record whose computation raises carries the message in ``error``
    instead of aborting the sweep.
    """
    n = tower.n
    masks = range(1 << n)
    if jobs <= 1:
        return [_safe_admissible(tower, CauchonDiagram.from_mask(n, m), pair_cap) for m in masks]
    from .catalog import dumps

    with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(dumps(tower.top), nilpotency_cap)) as ex:
        return list(ex.map(_worker_run, [(m, pair_cap) for m in masks]))


def jw_generators(record: HPrimeRecord) -> list:
    """Generators (a reduced Gröbner basis) of J_w in the top algebra."""
    if not record.admissible:
        raise ValueError(f"diagram {record.diagram} is not admissible")
    return record.ideal_tower[max(record.ideal_tower)]


def jw_handle(tower: PresentationTower, record: HPrimeRecord) -> IdealHandle:
    gb = jw_generators(record)
    return IdealHandle(tower.top, list(gb), list(gb), True)


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


@dataclass
class ChainLink:
    diagram: CauchonDiagram
    record: HPrimeRecord
    witness: Optional[NFPoly] = None  # element of this ideal outside the next one

    def __iter__(self):
        return iter((self.diagram, self.record))


class ChainError(RuntimeError):
    pass


def blackbox_chain(tower: PresentationTower, w: CauchonDiagram, pair_cap: int = DEFAULT_PAIR_CAP,
                   records: Optional[dict] = None) -> list:
    """Remove the largest black box repeatedly, certifying each strict inclusion."""
    records = records if records is not None else {}

    def rec_of(d):
        r = records.get(d.mask)
        if r is None or not r.admissible:
            r = admissible(tower, d, pair_cap)
            records[d.mask] = r
        if not r.admissible:
            raise ChainError(f"diagram {diagram_render(d)} in the chain is not admissible ({r.reason or r.error})")
        return r

    chain = [ChainLink(w, rec_of(w))]
    while chain[-1].diagram.members:
        cur = chain[-1]
        nxt_d = cur.diagram.without_max()
        nxt = rec_of(nxt_d)
        big = jw_handle(tower, cur.record)
        small = jw_handle(tower, nxt)
        if not ideal_contains(big, small.gb):
            raise ChainError(f"J({diagram_render(nxt_d)}) is not contained in J({diagram_render(cur.diagram)})")
        witness = next((g for g in big.gb if not ideal_member(small, g)), None)
        if witness is None:
            raise ChainError(f"J({diagram_render(nxt_d)}) = J({diagram_render(cur.diagram)}); inclusion not strict")
        cur.witness = witness
        chain.append(ChainLink(nxt_d, nxt))
    return chain


# ---------------------------------------------------------------------------
# stratum lattices
# ---------------------------------------------------------------------------


@dataclass
class StratumReport:
    w: CauchonDiagram
    white_indices: list
    torus_exp: list
    center_basis: list
    complement_basis: list
    index_s: int
    radical_trivial: bool

    @property
    def stratum_dim(self) -> int:
        return len(self.center_basis)


def _column_echelon(M: list) -> tuple:
    """Unimodular U with M U in column echelon form; returns (H, U)."""
    rows = len(M)
    cols = len(M[0]) if M else 0
    H = [list(r) for r in M]
    U = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(dst, src, k):
        for r in H:
            r[dst] -= k * r[src]
        for r in U:
            r[dst] -= k * r[src]

    def swap(a, b):
        for r in H:
            r[a], r[b] = r[b], r[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    piv = 0
    for r in range(rows):
        if piv >= cols:
            break
        while True:
            nz = [c for c in range(piv, cols) if H[r][c]]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(H[r][c]))
            swap(piv, c0)
            done = True
            for c in range(piv + 1, cols):
                if H[r][c]:
                    colop(c, piv, H[r][c] // H[r][piv])
                    if H[r][c]:
                        done = False
            if done:
                break
        if H[r][piv]:
            piv += 1
    return H, U, piv


def integer_kernel(M: list) -> tuple:
    """Basis of {a in Z^c : M a = 0} plus a unimodular completion."""
    cols = len(M[0]) if M else 0
    if cols == 0:
        return [], []
    _, U, rank = _column_echelon(M)
    basis = [[U[i][c] for i in range(cols)] for c in range(cols)]
    return basis[rank:], basis[:rank]


def _det(M: list) -> int:
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(x) for x in r] for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            for k in range(c, n):
                A[r][k] -= f * A[c][k]
    return int(det)


def center_decomposition(torus_exp: list) -> tuple:
    """Return ``(Z, W, s, radical_trivial)`` for an antisymmetric integer matrix.

    ``Z`` spans the integer kernel, ``W`` a complement with ``Z + W = Z^r``
    of index ``s``, and ``radical_trivial`` reports whether the form
    restricted to ``W`` is nondegenerate.
    """
    r = len(torus_exp)
    for i in range(r):
        for j in range(r):
            if torus_exp[i][j] != -torus_exp[j][i]:
                raise ValueError("matrix is not antisymmetric")
    Z, W = integer_kernel(torus_exp)
    s = abs(_det([list(col) for col in zip(*(Z + W))])) if r else 1
    if W:
        G = [[sum(a[i] * torus_exp[i][j] * b[j] for i in range(r) for j in range(r)) for b in W] for a in W]
        radical_trivial = _det(G) != 0
    else:
        radical_trivial = True
    return Z, W, s, radical_trivial


def stratum_report(tower: PresentationTower, w: CauchonDiagram) -> StratumReport:
    white = w.white_indices()
    lam = tower.bottom.lambda_exp
    sub = [[lam[i - 1][j - 1] for j in white] for i in white]
    Z, W, s, rad = center_decomposition(sub)
    return StratumReport(w, white, sub, Z, W, s, rad)


def stratum_dimension(tower: PresentationTower, w: CauchonDiagram) -> int:
    return stratum_report(tower, w).stratum_dim


# ---------------------------------------------------------------------------
# poset and reports
# ---------------------------------------------------------------------------


@dataclass
class PosetResult:
    nodes: list  # diagrams, bitmask order
    edges: list  # (lower, upper) covering pairs of diagrams
    graded: bool
    refines_inclusion: bool  # informational: w <= w' always gives J_w <= J_w'
    problems: list

    @property
    def ok(self) -> bool:
        return self.graded


def poset(tower: PresentationTower, records: Iterable[HPrimeRecord]) -> PosetResult:
    """Inclusion order of the J_w, with its covering relations.

    The order is graded by the number of black boxes exactly when every
    covering step adds one black box and the zero ideal is the minimum, so
    that every maximal chain below J_w has #black(w) steps.
    """
    recs = [r for r in records if r.admissible]
    recs.sort(key=lambda r: r.w.mask)
    handles = [jw_handle(tower, r) for r in recs]
    k = len(recs)
    le = [[a == b or ideal_contains(handles[b], handles[a].gb) for b in range(k)] for a in range(k)]
    problems = []
    edges = []
    for a in range(k):
        for b in range(k):
            if a == b or not le[a][b]:
                continue
            if le[b][a]:
                problems.append(f"J({recs[a].diagram}) = J({recs[b].diagram})")
                continue
            if any(c not in (a, b) and le[a][c] and le[c][b] for c in range(k)):
                continue
            edges.append((recs[a].w, recs[b].w))
    graded = not problems
    for lo, hi in edges:
        if hi.black != lo.black + 1:
            graded = False
            problems.append(f"covering {diagram_render(lo)} < {diagram_render(hi)} skips a rank")
    if not recs or recs[0].w.members or any(not le[0][b] for b in range(k)):
        graded = False
        problems.append("zero ideal is not the minimum of the admissible set")
    refines = all(le[a][b] for a in range(k) for b in range(k) if recs[a].w.members <= recs[b].w.members)
    return PosetResult([r.w for r in recs], edges, graded, refines, problems)


@dataclass
class TauvelRow:
    w: CauchonDiagram
    black: int
    white: int
    chain_length: int
    gk: int
    stratum_dim: int
    prim_gk: int
    prim_height: int
    ok: bool

    def as_dict(self) -> dict:
        return {
            "diagram": diagram_render(self.w), "black": self.black, "white": self.white,
            "chain_length": self.chain_length, "gk": self.gk, "height": self.black,
            "sum": self.black + self.gk, "stratum_dim": self.stratum_dim,
            "primitive_gk": self.prim_gk, "primitive_height": self.prim_height,
            "primitive_sum": self.prim_gk + self.prim_height, "ok": self.ok,
        }


@dataclass
class TauvelReport:
    n: int
    rows: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures and bool(self.rows)


def tauvel_report(tower: PresentationTower, records: Optional[list] = None,
                  pair_cap: int = DEFAULT_PAIR_CAP) -> TauvelReport:
    """Height + GK dimension bookkeeping for every admissible diagram."""
    n = tower.n
    if records is None:
        records = enumerate_hspec(tower, pair_cap)
    by_mask = {r.w.mask: r for r in records}
    rows, failures = [], []
    for r in records:
        if r.error:
            failures.append(f"{r.diagram}: {r.error}")
            continue
        if not r.admissible:
            continue
        try:
            chain = blackbox_chain(tower, r.w, pair_cap, by_mask)
            length = len(chain) - 1
        except (RuntimeError, ValueError) as exc:
            failures.append(f"{r.diagram}: chain failed: {exc}")
            length = -1
        d = r.stratum_dim
        pg, ph = r.w.white - d, r.w.black + d
        ok = (length == r.w.black and r.height + r.gk == n and pg + ph == n and d >= 0 and pg >= 0)
        rows.append(TauvelRow(r.w, r.w.black, r.w.white, length, r.gk, d, pg, ph, ok))
        if not ok:
            failures.append(f"{r.diagram}: identity failed")
    return TauvelReport(n, rows, failures)


CSV_COLUMNS = ["diagram", "black", "white", "height", "gk", "stratum_dim", "admissible", "saturation_flag"]


def records_csv(records: Iterable[HPrimeRecord]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    for r in records:
        wr.writerow([
            r.diagram, r.w.black, r.w.white,
            "" if r.height is None else r.height,
            "" if r.gk is None else r.gk,
            "" if r.stratum_dim is None else r.stratum_dim,
            str(r.admissible).lower(), str(r.saturation_flag).lower(),
        ])
    return buf.getvalue()


def poset_dot(result: PosetResult, name: str = "hspec") -> str:
    safe = "".join(c if c.isalnum() else "_" for c in name) or "hspec"
    lines = [f"digraph {safe} {{", "  rankdir=BT;"]
    for w in result.nodes:
        lines.append(f'  "{diagram_render(w)}" [label="{diagram_render(w)}\\nh={w.black}"];')
    for lo, hi in result.edges:
        lines.append(f'  "{diagram_render(lo)}" -> "{diagram_render(hi)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# independent membership test by descent
# ---------------------------------------------------------------------------


class DescentOracle:
    """Decide membership in J_w without Gröbner bases.

    An element of level s+1 is pushed down to level s: verbatim at black
    steps, and through the inverse transport (then cleared on the right) at
    white steps.  At the bottom, membership in K_w is a monomial test.
    Valid for admissible diagrams only.
    """

    def __init__(self, tower: PresentationTower, w: CauchonDiagram):
        self.tower = tower
        self.w = w

    def descend(self, f: NFPoly, level: Optional[int] = None) -> NFPoly:
        tower = self.tower
        level = tower.n + 1 if level is None else level
        for s in range(level - 1, 1, -1):
            if not f:
                break
            if s in self.w.members:
                f = rename(f)
            else:
                f, _ = clear_right(tower.level(s), s, inverse_transport(tower, s, f))
        return f

    def member(self, f: NFPoly, level: Optional[int] = None) -> bool:
        g = self.descend(f, level)
        idx = [i - 1 for i in self.w.members]
        return all(any(m[i] > 0 for i in idx) for m in g.terms)


def homogeneous(tower: PresentationTower, f: NFPoly) -> bool:
    return bool(f) and weight_of(tower.top, f) is not None


def all_diagrams(n: int) -> list:
    return [CauchonDiagram.from_mask(n, m) for m in range(1 << n)]

