"""Normal-form arithmetic in iterated Ore extensions with diagonal twists.

A :class:`CglPresentation` describes an algebra
``k[x1][x2; s2, d2] ... [xn; sn, dn]`` over Q(q) where every twist is
diagonal, ``s_j(x_i) = q^m[j][i] x_i``, and ``d_j(x_i)`` is a stored
normal form in ``x1 .. x_{j-1}``.  Elements are :class:`NFPoly` objects:
sparse maps from PBW exponent vectors ``x1^a1 ... xn^an`` to RatQ.

Generator indices in the public API are 1-based, as in the defining
relations ``x_j x_i = q^m[j][i] x_i x_j + d_j(x_i)`` (j > i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .qfield import ONE, ZERO, RatQ

__all__ = [
    "NFPoly",
    "LaurentPoly",
    "CglPresentation",
    "CheckResult",
    "ValidationReport",
    "NilpotencyError",
    "multiply",
    "apply_sigma",
    "apply_delta",
    "weight_of",
    "validate_cgl",
    "nilpotency_index",
    "lex_key",
    "DEFAULT_NILPOTENCY_CAP",
]

DEFAULT_NILPOTENCY_CAP = 64


class NilpotencyError(ArithmeticError):
    """Raised when a derivation orbit outlives the nilpotency cap."""


def lex_key(exps: Sequence[int]) -> tuple:
    """Sort key for pure lex with the highest-index generator most significant."""
    return tuple(reversed(exps))


# ---------------------------------------------------------------------------
# sparse polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finitely supported map from integer exponent vectors to RatQ.

    Only the linear structure lives here; ring products need a presentation
    (see :func:`multiply`).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[tuple, RatQ]] = None, *, _clean=False):
        self.n = n
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError(f"exponent vector {m} has length != {n}")
                c = RatQ.coerce(c)
                if c:
                    clean[m] = c
            self.terms = clean
        self._check()

    def _check(self):
        pass

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int):
        return cls(n, {}, _clean=True)

    @classmethod
    def const(cls, n: int, c=1):
        c = RatQ.coerce(c)
        return cls(n, {(0,) * n: c} if c else {}, _clean=True)

    @classmethod
    def gen(cls, n: int, i: int, power: int = 1):
        """The monomial x_i^power (1-based i)."""
        m = [0] * n
        m[i - 1] = power
        return cls(n, {tuple(m): ONE}, _clean=True)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1):
        c = RatQ.coerce(c)
        return cls(len(exps), {tuple(exps): c} if c else {}, _clean=True)

    # linear structure -----------------------------------------------------
    def _new(self, terms):
        return type(self)(self.n, terms, _clean=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def coeff(self, exps) -> RatQ:
        return self.terms.get(tuple(exps), ZERO)

    def __add__(self, other):
        if isinstance(other, (int, RatQ)):
            other = type(self).const(self.n, other)
        if other.n != self.n:
            raise ValueError("polynomials over different numbers of generators")
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, RatQ)):
            other = type(self).const(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = RatQ.coerce(c)
        if not c:
            return self._new({})
        if c.is_one():
            return self
        return self._new({m: v * c for m, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, (int, RatQ)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, RatQ)):
            other = type(self).const(self.n, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # order-dependent ------------------------------------------------------
    def leading_monomial(self) -> tuple:
        return max(self.terms, key=lex_key)

    def leading_coefficient(self) -> RatQ:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: lex_key(t[0]), reverse=True)

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.leading_coefficient().inverse())

    def primitive(self):
        """Clear denominators and integer/polynomial content; sign from the leader."""
        if not self.terms:
            return self
        from flint import fmpz_poly

        den = fmpz_poly([1])
        for c in self.terms.values():
            den = den * (c.den // den.gcd(c.den))
        nums = [c.num * (den // c.den) for c in self.terms.values()]
        g = nums[0]
        for x in nums[1:]:
            g = g.gcd(x)
        lead = self.terms[self.leading_monomial()]
        sign = 1 if (lead.num.leading_coefficient() * lead.den.leading_coefficient()) > 0 else -1
        out = {}
        for (m, _), x in zip(self.terms.items(), nums):
            out[m] = RatQ(sign * (x // g), 1)
        return self._new(out)

    def support_max_index(self) -> int:
        """Largest 1-based index with a nonzero exponent anywhere (0 for constants)."""
        hi = 0
        for m in self.terms:
            for k in range(self.n - 1, -1, -1):
                if m[k]:
                    hi = max(hi, k + 1)
                    break
        return hi

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    # text -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mon = "*".join(
                (f"x{k + 1}" if e == 1 else f"x{k + 1}^{e}") if e >= 0 else f"x{k + 1}^({e})"
                for k, e in enumerate(m)
                if e
            )
            cs = str(c)
            neg = False
            if cs.startswith("-") and c.is_polynomial() and ("+" not in cs[1:] and "-" not in cs[1:]):
                neg = True
                cs = cs[1:]
            simple = c.is_polynomial() and ("+" not in cs and "-" not in cs)
            if not mon:
                body = cs if simple else f"({cs})" if not cs.startswith("(") else cs
            elif cs == "1":
                body = mon
            else:
                body = f"{cs}*{mon}" if simple else (f"{cs}*{mon}" if cs.startswith("(") else f"({cs})*{mon}")
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class NFPoly(LaurentPoly):
    """Normal-form element: nonnegative PBW exponents only."""

    __slots__ = ()

    def _check(self):
        for m in self.terms:
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in normal form: {m}")

    @classmethod
    def parse(cls, text: str, n: int) -> "NFPoly":
        from ._parse import parse_poly

        return cls(n, parse_poly(text, n))


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def _int_matrix(rows, nrows=None, ncols=None, what="matrix"):
    out = tuple(tuple(int(x) for x in r) for r in rows)
    if nrows is not None and len(out) != nrows:
        raise ValueError(f"{what}: expected {nrows} rows, got {len(out)}")
    if ncols is not None:
        for k, r in enumerate(out):
            if len(r) != ncols:
                raise ValueError(f"{what}: row {k + 1} has length {len(r)}, expected {ncols}")
    return out


@dataclass(frozen=True, eq=False)
class CglPresentation:
    """Defining data of an iterated Ore extension with a torus action.

    ``lambda_exp[j-1][i-1]`` is the exponent m with s_j(x_i) = q^m x_i;
    ``delta[(j, i)]`` is d_j(x_i) (absent means zero); ``q_exp[j-1]`` is c_j
    with q_j = q^c_j; ``weights`` and ``h_exp`` are d x n integer matrices
    whose columns are the torus weight of x_i and the exponent vector of h_j.

    Construction only checks shapes; :func:`validate_cgl` certifies the rest.
    """

    n: int
    lambda_exp: tuple
    delta: Mapping[tuple, NFPoly]
    q_exp: tuple
    torus_rank: int
    weights: tuple
    h_exp: tuple
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "lambda_exp", _int_matrix(self.lambda_exp, n, n, "lambda_exp"))
        q_exp = tuple(int(c) for c in self.q_exp)
        if len(q_exp) != n:
            raise ValueError(f"q_exp: expected length {n}, got {len(q_exp)}")
        object.__setattr__(self, "q_exp", q_exp)
        d = int(self.torus_rank)
        if d < 0:
            raise ValueError("torus_rank must be >= 0")
        object.__setattr__(self, "weights", _int_matrix(self.weights, d, n, "weights"))
        object.__setattr__(self, "h_exp", _int_matrix(self.h_exp, d, n, "h_exp"))
        clean = {}
        for key, val in dict(self.delta).items():
            j, i = (int(k) for k in key)
            if not (1 <= i < j <= n):
                raise ValueError(f"delta entry ({j},{i}) must satisfy 1 <= i < j <= n")
            if not isinstance(val, NFPoly):
                val = NFPoly(n, val.terms if isinstance(val, LaurentPoly) else val)
            if val.n != n:
                raise ValueError(f"delta entry ({j},{i}) has the wrong number of variables")
            if val:
                clean[(j, i)] = val
        object.__setattr__(self, "delta", clean)

    # structural helpers -------------------------------------------------
    def m(self, j: int, i: int) -> int:
        return self.lambda_exp[j - 1][i - 1]

    def lam(self, j: int, i: int) -> RatQ:
        return RatQ.qpow(self.lambda_exp[j - 1][i - 1])

    def delta_entry(self, j: int, i: int) -> NFPoly:
        return self.delta.get((j, i)) or NFPoly.zero(self.n)

    def weight(self, i: int) -> tuple:
        return tuple(row[i - 1] for row in self.weights)

    def h(self, j: int) -> tuple:
        return tuple(row[j - 1] for row in self.h_exp)

    def delta_rows(self) -> set:
        return {j for (j, _) in self.delta}

    def with_delta(self, delta: Mapping[tuple, NFPoly], name: Optional[str] = None) -> "CglPresentation":
        return CglPresentation(
            self.n, self.lambda_exp, delta, self.q_exp, self.torus_rank,
            self.weights, self.h_exp, self.name if name is None else name,
        )

    def with_extra_central(self) -> "CglPresentation":
        """Append a central generator x_{n+1} (weight 0, no derivation)."""
        n = self.n
        lam = [list(r) + [0] for r in self.lambda_exp] + [[0] * (n + 1)]
        delta = {k: NFPoly(n + 1, {m + (0,): c for m, c in v.items()}) for k, v in self.delta.items()}
        return CglPresentation(
            n + 1, lam, delta, self.q_exp + (1,), self.torus_rank,
            [list(r) + [0] for r in self.weights], [list(r) + [0] for r in self.h_exp],
            self.name + "+t",
        )

    def same_data(self, other: "CglPresentation") -> bool:
        return (
            self.n == other.n
            and self.lambda_exp == other.lambda_exp
            and self.delta == other.delta
            and self.q_exp == other.q_exp
            and self.torus_rank == other.torus_rank
            and self.weights == other.weights
            and self.h_exp == other.h_exp
        )

    def __eq__(self, other):
        if not isinstance(other, CglPresentation):
            return NotImplemented
        return self.same_data(other)

    def __hash__(self):
        return hash((self.n, self.lambda_exp, self.q_exp, self.weights, self.h_exp, frozenset(self.delta)))

    # ring structure -------------------------------------------------------
    @property
    def engine(self) -> "_Engine":
        eng = self._cache.get("engine")
        if eng is None:
            eng = self._cache["engine"] = _Engine(self)
        return eng

    def x(self, i: int, power: int = 1) -> NFPoly:
        return NFPoly.gen(self.n, i, power)

    def one(self) -> NFPoly:
        return NFPoly.const(self.n, 1)

    def zero(self) -> NFPoly:
        return NFPoly.zero(self.n)


# ---------------------------------------------------------------------------
# multiplication engine
# ---------------------------------------------------------------------------


def _add_into(acc: dict, terms, scale: RatQ = ONE):
    for m, c in terms:
        v = c if scale is ONE else c * scale
        old = acc.get(m)
        if old is None:
            acc[m] = v
        else:
            v = old + v
            if v:
                acc[m] = v
            else:
                del acc[m]


class _Engine:
    """Memoised PBW products for one presentation.

    Indices are 0-based inside the engine.
    """

    def __init__(self, P: CglPresentation):
        self.P = P
        self.n = P.n
        self.lam = [[RatQ.qpow(x) for x in row] for row in P.lambda_exp]
        self.d = {(j - 1, i - 1): v.terms for (j, i), v in P.delta.items()}
        self._mg = {}
        self._mm = {}
        self._delta = {}

    @staticmethod
    def _top(a) -> int:
        for k in range(len(a) - 1, -1, -1):
            if a[k]:
                return k
        return -1

    @staticmethod
    def _bottom(a) -> int:
        for k, e in enumerate(a):
            if e:
                return k
        return len(a)

    def mono_gen(self, a: tuple, i: int) -> dict:
        """x^a * x_i as {exps: coeff}."""
        key = (a, i)
        hit = self._mg.get(key)
        if hit is not None:
            return hit
        j = self._top(a)
        if j <= i:
            b = list(a)
            b[i] += 1
            out = {tuple(b): ONE}
        else:
            ap = list(a)
            ap[j] -= 1
            ap = tuple(ap)
            out = {}
            lam = self.lam[j][i]
            for m, c in self.mono_gen(ap, i).items():
                mm = list(m)
                mm[j] += 1
                out[tuple(mm)] = c * lam
            dji = self.d.get((j, i))
            if dji:
                for b, cb in dji.items():
                    _add_into(out, self.mono_mono(ap, b).items(), cb)
        self._mg[key] = out
        return out

    def mono_mono(self, a: tuple, b: tuple) -> dict:
        """x^a * x^b as {exps: coeff}."""
        lo = self._bottom(b)
        if lo == len(b):
            return {a: ONE}
        if self._top(a) <= lo:
            return {tuple(x + y for x, y in zip(a, b)): ONE}
        key = (a, b)
        hit = self._mm.get(key)
        if hit is not None:
            return hit
        bp = list(b)
        bp[lo] -= 1
        bp = tuple(bp)
        out = {}
        for m, c in self.mono_gen(a, lo).items():
            _add_into(out, self.mono_mono(m, bp).items(), c)
        self._mm[key] = out
        return out

    def mul_terms(self, f: Mapping, g: Mapping) -> dict:
        out = {}
        for a, ca in f.items():
            for b, cb in g.items():
                _add_into(out, self.mono_mono(a, b).items(), ca * cb)
        return out

    def delta_mono(self, j: int, a: tuple) -> dict:
        """d_j(x^a) for a supported below j (0-based j), via the s-Leibniz rule."""
        key = (j, a)
        hit = self._delta.get(key)
        if hit is not None:
            return hit
        top = self._top(a)
        if top < 0:
            out = {}
        else:
            # x^a = u * x_top with u = x^(a - e_top)
            u = list(a)
            u[top] -= 1
            u = tuple(u)
            out = {}
            dt = self.d.get((j, top))
            if dt:
                # s_j(u) d_j(x_top)
                e = 0
                for k, ek in enumerate(u):
                    if ek:
                        e += self.P.lambda_exp[j][k] * ek
                _add_into(out, self.mul_terms({u: RatQ.qpow(e)}, dt).items())
            du = self.delta_mono(j, u)
            if du:
                # d_j(u) x_top
                for m, c in du.items():
                    _add_into(out, self.mono_gen(m, top).items(), c)
        self._delta[key] = out
        return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def multiply(P: CglPresentation, f: NFPoly, g: NFPoly) -> NFPoly:
    """Normal form of the product f*g in the algebra presented by P."""
    return NFPoly(P.n, P.engine.mul_terms(f.terms, g.terms), _clean=True)


def apply_sigma(P: CglPresentation, j: int, e: int, f: LaurentPoly) -> LaurentPoly:
    """Apply the diagonal automorphism s_j^e, extended to every generator."""
    if e == 0:
        return f
    row = P.lambda_exp[j - 1]
    out = {}
    for m, c in f.terms.items():
        s = 0
        for k, ek in enumerate(m):
            if ek:
                s += row[k] * ek
        out[m] = c * RatQ.qpow(e * s) if s else c
    return f._new(out)


def apply_delta(P: CglPresentation, j: int, f: NFPoly) -> NFPoly:
    """Apply the s_j-derivation d_j to f, which must involve only x_1..x_{j-1}."""
    if not 2 <= j <= P.n:
        raise ValueError(f"generator index {j} out of range 2..{P.n}")
    eng = P.engine
    out = {}
    for m, c in f.terms.items():
        if any(m[k] for k in range(j - 1, P.n)):
            raise ValueError(f"d_{j} is only defined on x_1..x_{j - 1}; got monomial {m}")
        _add_into(out, eng.delta_mono(j - 1, m).items(), c)
    return NFPoly(P.n, out, _clean=True)


def weight_of(P: CglPresentation, f: LaurentPoly) -> Optional[tuple]:
    """Common torus weight of all monomials of f, or None (also for f = 0)."""
    w = None
    for m in f.terms:
        wm = tuple(sum(row[k] * m[k] for k in range(P.n)) for row in P.weights)
        if w is None:
            w = wm
        elif wm != w:
            return None
    return w


def nilpotency_index(P: CglPresentation, j: int, f: NFPoly, cap: int = DEFAULT_NILPOTENCY_CAP) -> int:
    """Least t with d_j^t(f) = 0; raises :class:`NilpotencyError` past ``cap``."""
    t = 0
    while f:
        if t >= cap:
            raise NilpotencyError(f"d_{j} not nilpotent on the given element within {cap} steps")
        f = apply_delta(P, j, f)
        t += 1
    return t


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    group: str
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)
    nilpotency: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def failed_groups(self) -> set:
        return {c.group for c in self.checks if not c.passed}

    def add(self, group, name, passed, detail=""):
        self.checks.append(CheckResult(group, name, bool(passed), detail))

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failed_groups": sorted(self.failed_groups()),
            "checks": [c.__dict__ for c in self.checks],
            "nilpotency": {f"{j},{i}": t for (j, i), t in sorted(self.nilpotency.items())},
        }

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.group:<10} {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        lines.append("VALID" if self.ok else "INVALID: " + ", ".join(sorted(self.failed_groups())))
        return "\n".join(lines)


def _rewrite_word(P: CglPresentation, word: tuple, rightmost: bool, limit: int = 200000) -> NFPoly:
    """Reduce a word in the generators by single adjacent-inversion rewrites.

    ``rightmost`` selects which inversion is rewritten first; for
    consistent data both strategies reach the same normal form.
    """
    n = P.n
    todo = {word: ONE}
    done = {}
    steps = 0
    while todo:
        w, c = todo.popitem()
        pos = None
        rng = range(len(w) - 2, -1, -1) if rightmost else range(len(w) - 1)
        for p in rng:
            if w[p] > w[p + 1]:
                pos = p
                break
        if pos is None:
            m = [0] * n
            for k in w:
                m[k - 1] += 1
            _add_into(done, [(tuple(m), c)])
            continue
        steps += 1
        if steps > limit:
            raise RuntimeError("word rewriting did not terminate within the step limit")
        j, i = w[pos], w[pos + 1]
        pre, post = w[:pos], w[pos + 2:]
        _add_into(todo, [(pre + (i, j) + post, c * P.lam(j, i))])
        for b, cb in P.delta_entry(j, i).terms.items():
            mid = tuple(k + 1 for k in range(n) for _ in range(b[k]))
            _add_into(todo, [(pre + mid + post, c * cb)])
    return NFPoly(n, done, _clean=True)


def validate_cgl(P: CglPresentation, nilpotency_cap: int = DEFAULT_NILPOTENCY_CAP) -> ValidationReport:
    """Certify the CGL conditions for P; failures are report entries."""
    rep = ValidationReport()
    n = P.n
    lam = P.lambda_exp

    # (a) structure
    anti = all(lam[a][b] == -lam[b][a] for a in range(n) for b in range(n))
    rep.add("structure", "lambda_exp antisymmetric with zero diagonal", anti)
    support_ok = True
    for (j, i), v in sorted(P.delta.items()):
        if v.support_max_index() >= j:
            support_ok = False
            rep.add("structure", f"delta.{j}.{i} supported below x{j}", False, str(v))
    if support_ok:
        rep.add("structure", "delta entries supported below their row", True)
    bad_c = [j for j in range(2, n + 1) if P.q_exp[j - 1] == 0]
    rep.add("structure", "q_exp nonzero for j >= 2", not bad_c, f"zero at {bad_c}" if bad_c else "")

    # (b) eigen-consistency of lower derivations under higher twists
    ok_b = True
    for (l, i), v in sorted(P.delta.items()):
        for j in range(l + 1, n + 1):
            lhs = apply_sigma(P, j, 1, v)
            rhs = v.scale(RatQ.qpow(P.m(j, l) + P.m(j, i)))
            if lhs != rhs:
                ok_b = False
                rep.add("eigen", f"s{j}(d{l}(x{i})) = q^(m{j}{l}+m{j}{i}) d{l}(x{i})", False)
    if ok_b:
        rep.add("eigen", "s_j d_l(x_i) scaling for all i < l < j", True)

    # (c) s_j d_j = q_j d_j s_j on generators
    ok_c = True
    for (j, i), v in sorted(P.delta.items()):
        lhs = apply_sigma(P, j, 1, v)
        rhs = v.scale(RatQ.qpow(P.q_exp[j - 1] + P.m(j, i)))
        if lhs != rhs:
            ok_c = False
            rep.add("skew", f"s{j}(d{j}(x{i})) = q^(c{j}+m{j}{i}) d{j}(x{i})", False)
    if ok_c:
        rep.add("skew", "s_j d_j = q_j d_j s_j on generators", True)

    # (d) local nilpotency
    ok_d = True
    if support_ok:
        for j in range(2, n + 1):
            for i in range(1, j):
                try:
                    rep.nilpotency[(j, i)] = nilpotency_index(P, j, P.x(i), nilpotency_cap)
                except NilpotencyError:
                    ok_d = False
                    rep.add("nilpotency", f"d{j} nilpotent on x{i}", False, f"cap {nilpotency_cap} exceeded")
    else:
        ok_d = False
        rep.add("nilpotency", "skipped: delta support invalid", False)
    if ok_d:
        rep.add("nilpotency", f"every d_j locally nilpotent on generators (cap {nilpotency_cap})", True)

    # (e) overlap ambiguities x_k x_j x_i
    ok_e = True
    if support_ok and ok_d:
        for k in range(3, n + 1):
            for j in range(2, k):
                for i in range(1, j):
                    a = _rewrite_word(P, (k, j, i), rightmost=False)
                    b = _rewrite_word(P, (k, j, i), rightmost=True)
                    if a != b:
                        ok_e = False
                        rep.add("diamond", f"x{k} x{j} x{i} resolves", False)
    else:
        ok_e = False
        rep.add("diamond", "skipped: rewriting may not terminate", False)
    if ok_e:
        rep.add("diamond", "all overlaps x_k x_j x_i resolve", True)

    # (f) torus conditions
    ok_f = True
    for j in range(1, n + 1):
        E = P.h(j)
        for i in range(1, j):
            got = sum(a * b for a, b in zip(E, P.weight(i)))
            if got != P.m(j, i):
                ok_f = False
                rep.add("torus", f"<E{j},W{i}> = m{j}{i}", False, f"{got} != {P.m(j, i)}")
        got = sum(a * b for a, b in zip(E, P.weight(j)))
        if got != P.q_exp[j - 1] or got == 0:
            ok_f = False
            rep.add("torus", f"<E{j},W{j}> = c{j} != 0", False, f"<E,W> = {got}, c = {P.q_exp[j - 1]}")
    for (j, i), v in sorted(P.delta.items()):
        want = tuple(a + b for a, b in zip(P.weight(i), P.weight(j)))
        if weight_of(P, v) != want:
            ok_f = False
            rep.add("torus", f"d{j}(x{i}) homogeneous of weight W{i}+W{j}", False)
    if ok_f:
        rep.add("torus", "eigenvalue equations and weight homogeneity", True)
    return rep


def check_defining_relations(P: CglPresentation) -> list:
    """Pairs (j, i) whose defining relation fails under :func:`multiply`."""
    bad = []
    for j in range(2, P.n + 1):
        for i in range(1, j):
            lhs = multiply(P, P.x(j), P.x(i)) - multiply(P, P.x(i), P.x(j)).scale(P.lam(j, i))
            if lhs != P.delta_entry(j, i):
                bad.append((j, i))
    return bad


def polys_from(P: CglPresentation, items: Iterable) -> list:
    return [f if isinstance(f, NFPoly) else NFPoly.parse(f, P.n) for f in items]
