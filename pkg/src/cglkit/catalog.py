"""Built-in presentations, the presentation file format, and test oracles.

Presentation documents are plain text, one ``key = value`` per line::

    # comments start with '#'
    name = weyl_q
    n = 2
    lambda_exp = 0, -1; 1, 0
    delta.2.1 = 1
    q_exp = 1, -1
    torus_rank = 1
    weights = 1, -1
    h_exp = 1, 1

Matrices are written row by row, rows separated by ``;`` and entries by
``,`` (or whitespace).  ``weights`` and ``h_exp`` are ``torus_rank x n``;
with ``torus_rank = 0`` they are left empty.  ``delta.j.i`` holds the
normal form of d_j(x_i) in ``x1 .. x{j-1}`` with coefficients in Q(q),
e.g. ``(q^-1 - q)*x2*x3``.  Keys may appear in any order; ``name`` is
optional.
"""

from __future__ import annotations

import itertools
import re
from importlib import resources
from pathlib import Path

from ._parse import ParseError, parse_poly
from .pbw import CglPresentation, NFPoly
from .qfield import ONE, RatQ

__all__ = [
    "make_quantum_affine",
    "make_weyl_q",
    "make_quantum_matrices",
    "make_quantum_matrices_2",
    "make_jordan_counterexample",
    "le_diagram_oracle",
    "load",
    "loads",
    "save",
    "dumps",
    "builtin",
    "BUILTIN_NAMES",
    "POSITIVE_NAMES",
    "is_builtin",
    "JORDAN_EXPECTED_FAILURES",
    "FormatError",
]


class FormatError(ValueError):
    """Structurally invalid presentation document; ``key`` names the culprit."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = f" (key {key!r}" + (f", line {line}" if line else "") + ")" if key else ""
        super().__init__(message + where)
        self.key = key
        self.line = line


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def make_quantum_affine(n: int, exp=None, name: str | None = None) -> CglPresentation:
    """Quantum affine space: x_j x_i = q^exp[j][i] x_i x_j, no derivations.

    ``exp`` must be antisymmetric; by default ``exp[j][i] = 1`` for j > i.
    The torus is (k^*)^n scaling each generator separately.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if exp is None:
        exp = [[1 if j > i else -1 if j < i else 0 for i in range(n)] for j in range(n)]
    exp = [list(map(int, r)) for r in exp]
    if len(exp) != n or any(len(r) != n for r in exp):
        raise ValueError("exponent matrix must be n x n")
    for i in range(n):
        for j in range(n):
            if exp[i][j] != -exp[j][i]:
                raise ValueError(f"exponent matrix is not antisymmetric at ({i + 1},{j + 1})")
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    # h_j acts on x_i by q^exp[j][i] for i != j and on x_j by q
    h = [[exp[j][i] if i != j else 1 for j in range(n)] for i in range(n)]
    return CglPresentation(n, exp, {}, [1] * n, n, ident, h, name or f"quantum_affine_{n}")


def make_weyl_q() -> CglPresentation:
    """Quantum Weyl algebra: x2 x1 - q x1 x2 = 1."""
    return CglPresentation(
        2, [[0, -1], [1, 0]], {(2, 1): NFPoly.const(2, 1)}, [1, -1], 1,
        [[1, -1]], [[1, 1]], "weyl_q",
    )


def make_quantum_matrices(rows: int, cols: int) -> CglPresentation:
    """Quantum m x n matrices, generators X_ij in row-major order.

    For X_ij before X_kl: same row or same column gives X_kl X_ij = q^-1 X_ij X_kl;
    i < k, j > l commute; i < k, j < l gives
    X_kl X_ij = X_ij X_kl + (q^-1 - q) X_il X_kj.
    The torus is (k^*)^(rows+cols) acting by row and column scalings.
    """
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    N = rows * cols
    pos = lambda i, j: i * cols + j  # noqa: E731
    lam = [[0] * N for _ in range(N)]
    delta = {}
    coeff = RatQ.qpow(-1) - RatQ.qpow(1)
    for k, l in itertools.product(range(rows), range(cols)):
        p = pos(k, l)
        for i, j in itertools.product(range(rows), range(cols)):
            r = pos(i, j)
            if r >= p:
                continue
            if i == k or j == l:
                e = -1
            else:
                e = 0
            lam[p][r] = e
            lam[r][p] = -e
            if i < k and j < l:
                m = [0] * N
                m[pos(i, l)] += 1
                m[pos(k, j)] += 1
                delta[(p + 1, r + 1)] = NFPoly(N, {tuple(m): coeff})
    d = rows + cols
    W = [[0] * N for _ in range(d)]
    E = [[0] * N for _ in range(d)]
    for i, j in itertools.product(range(rows), range(cols)):
        p = pos(i, j)
        W[i][p] = 1
        W[rows + j][p] = 1
        E[i][p] = -1
        E[rows + j][p] = -1
    return CglPresentation(N, lam, delta, [-2] * N, d, W, E, f"quantum_matrices_{rows}x{cols}")


def make_quantum_matrices_2() -> CglPresentation:
    return make_quantum_matrices(2, 2)


#: failure groups :func:`validate_cgl` reports for the Jordan-plane example
JORDAN_EXPECTED_FAILURES = frozenset({"skew", "nilpotency", "diamond", "torus"})


def make_jordan_counterexample() -> CglPresentation:
    """k[x1, x2][x3; d] with d = 2 x2 d/dx1 + (x1 + x2^2) d/dx2.

    Not a valid input: d is not locally nilpotent and no torus makes the
    presentation homogeneous.  Validation is expected to fail with the
    groups in :data:`JORDAN_EXPECTED_FAILURES`.
    """
    n = 3
    delta = {
        (3, 1): NFPoly(n, {(0, 1, 0): RatQ.coerce(2)}),
        (3, 2): NFPoly(n, {(1, 0, 0): ONE, (0, 2, 0): ONE}),
    }
    return CglPresentation(n, [[0] * 3 for _ in range(3)], delta, [1, 1, 1], 0, [], [], "jordan")


_BUILDERS = {
    "weyl_q": make_weyl_q,
    "quantum_plane": lambda: make_quantum_affine(2, name="quantum_plane"),
    "quantum_affine_1": lambda: make_quantum_affine(1),
    "quantum_affine_2": lambda: make_quantum_affine(2),
    "quantum_affine_3": lambda: make_quantum_affine(3),
    "quantum_affine_4": lambda: make_quantum_affine(4),
    "quantum_matrices_2x2": lambda: make_quantum_matrices(2, 2),
    "quantum_matrices_2x3": lambda: make_quantum_matrices(2, 3),
    "jordan": make_jordan_counterexample,
}

BUILTIN_NAMES = tuple(_BUILDERS)

_ALIASES = {"quantum_matrices_2": "quantum_matrices_2x2", "quantum_weyl": "weyl_q"}

#: built-ins expected to pass validation
POSITIVE_NAMES = tuple(k for k in BUILTIN_NAMES if k != "jordan")


def builtin(name: str) -> CglPresentation:
    try:
        return _BUILDERS[_ALIASES.get(name, name)]()
    except KeyError:
        raise KeyError(f"unknown catalog name {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None


def is_builtin(name: str) -> bool:
    return _ALIASES.get(name, name) in _BUILDERS


# ---------------------------------------------------------------------------
# combinatorial oracle
# ---------------------------------------------------------------------------


def le_diagram_oracle(rows: int, cols: int) -> set:
    """Subsets of the rows x cols grid (1-based, row-major) obeying the Le rule.

    A subset is kept when each of its boxes has every box above it in the
    subset, or every box to its left in the subset.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    N = rows * cols
    out = set()
    for mask in range(1 << N):
        black = {p + 1 for p in range(N) if mask >> p & 1}
        ok = True
        for p in black:
            i, j = divmod(p - 1, cols)
            above = all(r * cols + j + 1 in black for r in range(i))
            left = all(i * cols + c + 1 in black for c in range(j))
            if not (above or left):
                ok = False
                break
        if ok:
            out.add(frozenset(black))
    return out


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_KEY = re.compile(r"^(n|name|lambda_exp|q_exp|torus_rank|weights|h_exp|delta\.(\d+)\.(\d+))$")


def _int_rows(text: str, key: str, line: int) -> list:
    text = text.strip()
    if not text:
        return []
    rows = []
    for chunk in text.split(";"):
        items = [t for t in re.split(r"[,\s]+", chunk.strip()) if t]
        try:
            rows.append([int(t) for t in items])
        except ValueError:
            raise FormatError(f"non-integer entry in {chunk.strip()!r}", key, line) from None
    return rows


def _matrix(rows: list, nrows: int, ncols: int, key: str, line: int) -> list:
    if nrows == 0 and rows in ([], [[]]):
        return []
    if len(rows) != nrows:
        raise FormatError(f"expected {nrows} rows, found {len(rows)}", key, line)
    for k, r in enumerate(rows):
        if len(r) != ncols:
            raise FormatError(f"row {k + 1} has {len(r)} entries, expected {ncols}", key, line)
    return rows


def loads(text: str) -> CglPresentation:
    """Parse a presentation document (structural checks only)."""
    fields = {}
    deltas = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, len(raw) - len(raw.lstrip()) + 1)
        key, value = body.split("=", 1)
        key = key.strip()
        m = _KEY.match(key)
        if not m:
            raise ParseError(f"unknown key {key!r}", lineno, raw.index(key) + 1)
        col = body.index("=") + 2 + (len(value) - len(value.lstrip()))
        if m.group(2):
            dk = (int(m.group(2)), int(m.group(3)))
            if dk in deltas:
                raise FormatError("duplicate entry", key, lineno)
            deltas[dk] = (value.strip(), lineno, col, key)
        else:
            if key in fields:
                raise FormatError("duplicate entry", key, lineno)
            fields[key] = (value.strip(), lineno)
    for key in ("n", "lambda_exp", "q_exp", "torus_rank"):
        if key not in fields:
            raise FormatError("missing required entry", key)
    try:
        n = int(fields["n"][0])
    except ValueError:
        raise FormatError("n must be an integer", "n", fields["n"][1]) from None
    if n < 1:
        raise FormatError("n must be positive", "n", fields["n"][1])
    try:
        d = int(fields["torus_rank"][0])
    except ValueError:
        raise FormatError("torus_rank must be an integer", "torus_rank", fields["torus_rank"][1]) from None
    if d < 0:
        raise FormatError("torus_rank must be >= 0", "torus_rank", fields["torus_rank"][1])
    text_, line = fields["lambda_exp"]
    lam = _matrix(_int_rows(text_, "lambda_exp", line), n, n, "lambda_exp", line)
    qrow = _int_rows(fields["q_exp"][0], "q_exp", fields["q_exp"][1])
    if len(qrow) != 1 or len(qrow[0]) != n:
        raise FormatError(f"expected {n} integers", "q_exp", fields["q_exp"][1])
    mats = {}
    for key in ("weights", "h_exp"):
        if key not in fields:
            if d:
                raise FormatError("missing required entry", key)
            mats[key] = []
            continue
        text_, line = fields[key]
        mats[key] = _matrix(_int_rows(text_, key, line), d, n, key, line)
    delta = {}
    for (j, i), (expr, line, col, key) in sorted(deltas.items()):
        if not 1 <= i < j <= n:
            raise FormatError(f"indices must satisfy 1 <= i < j <= {n}", key, line)
        terms = parse_poly(expr, n, line, col)
        for mono in terms:
            if any(mono[k] for k in range(j - 1, n)):
                raise FormatError(f"derivation value may only involve x1..x{j - 1}", key, line)
        delta[(j, i)] = NFPoly(n, terms)
    name = fields.get("name", ("", 0))[0]
    try:
        return CglPresentation(n, lam, delta, qrow[0], d, mats["weights"], mats["h_exp"], name)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load(path) -> CglPresentation:
    return loads(Path(path).read_text())


def _rows(mat) -> str:
    return "; ".join(", ".join(str(x) for x in r) for r in mat)


def dumps(P: CglPresentation) -> str:
    """Canonical document for P; ``loads(dumps(P)) == P``."""
    out = []
    if P.name:
        out.append(f"name = {P.name}")
    out.append(f"n = {P.n}")
    out.append(f"lambda_exp = {_rows(P.lambda_exp)}")
    for (j, i) in sorted(P.delta):
        out.append(f"delta.{j}.{i} = {P.delta[(j, i)]}")
    out.append(f"q_exp = {', '.join(map(str, P.q_exp))}")
    out.append(f"torus_rank = {P.torus_rank}")
    out.append(f"weights = {_rows(P.weights)}")
    out.append(f"h_exp = {_rows(P.h_exp)}")
    return "\n".join(out) + "\n"


def save(P: CglPresentation, path) -> None:
    Path(path).write_text(dumps(P))


def bundled_files() -> dict:
    """Map of bundled data file stem -> path."""
    root = resources.files("cglkit") / "data"
    return {p.name[:-4]: p for p in root.iterdir() if p.name.endswith(".cgl")}
