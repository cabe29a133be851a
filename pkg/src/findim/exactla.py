"""Exact linear algebra over the rationals and prime fields.

Everything else in this package reduces to exact rank/solve questions, and
this module is the only place scalar arithmetic happens.  Rational scalars
are gmpy2.mpq when available (fractions.Fraction otherwise); GF(p) scalars
are canonical ints in [0, p).  Matrices are dense, row-major, immutable by
convention (no operation mutates its inputs).

The pivoting rule everywhere is "first nonzero entry in column order", so
reduced row-echelon forms — and every basis derived from one — are
deterministic across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, UnsupportedField

try:  # pragma: no cover - exercised implicitly by every test
    from gmpy2 import mpq as _mpq

    def _make_rational(num, den=1):
        return _mpq(num, den)

except ImportError:  # pragma: no cover
    from fractions import Fraction as _Fraction

    def _make_rational(num, den=1):
        return _Fraction(num, den)


#### fields ############################################################


class Field:
    """Exact scalar field; subclasses provide element and row kernels.

    Elements are plain Python objects (mpq/Fraction over the rationals,
    int over GF(p)); rows are Python lists of elements.  Row kernels are
    provided here so hot loops pay one method call per row, not per entry.
    """

    kind: str

    # -- element level -------------------------------------------------
    def of(self, x):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def from_str(self, s: str):
        raise NotImplementedError

    # -- row level ------------------------------------------------------
    def zero_row(self, n: int) -> list:
        z = self.zero()
        return [z] * n

    def axpy(self, dst: list, a, src: list) -> list:
        """Return dst + a*src (new list)."""
        raise NotImplementedError

    def scale(self, row: list, a) -> list:
        raise NotImplementedError

    def neg_row(self, row: list) -> list:
        raise NotImplementedError

    def add_rows(self, x: list, y: list) -> list:
        raise NotImplementedError

    def sub_rows(self, x: list, y: list) -> list:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        raise NotImplementedError

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Field({self.kind})"


class Rationals(Field):
    """The field ℚ with arbitrary-precision, always-reduced fractions."""

    kind = "rational"

    def of(self, x):
        if isinstance(x, str):
            return self.from_str(x)
        return _make_rational(x)

    def zero(self):
        return _make_rational(0)

    def one(self):
        return _make_rational(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def to_str(self, a) -> str:
        num, den = a.numerator, a.denominator
        return str(num) if den == 1 else f"{num}/{den}"

    def from_str(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return _make_rational(int(num), int(den))
        return _make_rational(int(s))

    def axpy(self, dst, a, src):
        if not a:
            return list(dst)
        return [d + a * s for d, s in zip(dst, src)]

    def scale(self, row, a):
        return [a * x for x in row]

    def neg_row(self, row):
        return [-x for x in row]

    def add_rows(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def sub_rows(self, x, y):
        return [a - b for a, b in zip(x, y)]

    def key(self):
        return ("rational",)


class PrimeField(Field):
    """GF(p) with canonical representatives in [0, p)."""

    kind = "prime"

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"p = {p} is not prime")
        self.p = p

    def of(self, x):
        if isinstance(x, str):
            return self.from_str(x)
        if hasattr(x, "denominator") and x.denominator != 1:
            num = int(x.numerator) % self.p
            den = int(x.denominator) % self.p
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def to_str(self, a) -> str:
        return str(a % self.p)

    def from_str(self, s: str):
        return int(s.strip()) % self.p

    def axpy(self, dst, a, src):
        if not a:
            return list(dst)
        p = self.p
        return [(d + a * s) % p for d, s in zip(dst, src)]

    def scale(self, row, a):
        p = self.p
        return [(a * x) % p for x in row]

    def neg_row(self, row):
        p = self.p
        return [(-x) % p for x in row]

    def add_rows(self, x, y):
        p = self.p
        return [(a + b) % p for a, b in zip(x, y)]

    def sub_rows(self, x, y):
        p = self.p
        return [(a - b) % p for a, b in zip(x, y)]

    def key(self):
        return ("prime", self.p)


QQ = Rationals()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_json(d: dict) -> Field:
    if d.get("type") == "rational":
        return QQ
    if d.get("type") == "prime":
        return GF(int(d["p"]))
    raise ValueError(f"unknown field description {d!r}")


def field_to_json(f: Field) -> dict:
    if f.kind == "rational":
        return {"type": "rational"}
    return {"type": "prime", "p": f.p}  # type: ignore[attr-defined]


#### matrices ##########################################################


class Matrix:
    """Dense exact matrix; never mutated after construction."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: list[list], rows: int | None = None,
                 cols: int | None = None, _coerce: bool = True):
        self.field = field
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        self.rows = rows
        self.cols = cols
        if _coerce:
            of = field.of
            data = [[of(x) for x in r] for r in data]
        self.data = data

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        return Matrix(field, [field.zero_row(cols) for _ in range(rows)],
                      rows, cols, _coerce=False)

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        data = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return Matrix(field, data, n, n, _coerce=False)

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence]) -> "Matrix":
        return Matrix(field, [list(r) for r in rows])

    @staticmethod
    def column(field: Field, entries: Sequence) -> "Matrix":
        return Matrix(field, [[x] for x in entries])

    @staticmethod
    def from_columns(field: Field, cols: Sequence[Sequence]) -> "Matrix":
        if not cols:
            return Matrix.zeros(field, 0, 0)
        n = len(cols[0])
        data = [[field.of(c[i]) for c in cols] for i in range(n)]
        return Matrix(field, data, n, len(cols), _coerce=False)

    # -- basic ops --------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"matmul {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        odata = other.data
        out = []
        zero_row = f.zero_row(other.cols)
        for arow in self.data:
            acc = zero_row
            for k, a in enumerate(arow):
                if a:
                    acc = f.axpy(acc, a, odata[k])
            out.append(acc)
        return Matrix(f, out, self.rows, other.cols, _coerce=False)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        f = self.field
        return Matrix(f, [f.add_rows(a, b) for a, b in zip(self.data, other.data)],
                      self.rows, self.cols, _coerce=False)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        f = self.field
        return Matrix(f, [f.sub_rows(a, b) for a, b in zip(self.data, other.data)],
                      self.rows, self.cols, _coerce=False)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [f.neg_row(r) for r in self.data],
                      self.rows, self.cols, _coerce=False)

    def scale(self, a) -> "Matrix":
        f = self.field
        a = f.of(a)
        return Matrix(f, [f.scale(r, a) for r in self.data],
                      self.rows, self.cols, _coerce=False)

    def transpose(self) -> "Matrix":
        data = [[self.data[i][j] for i in range(self.rows)]
                for j in range(self.cols)]
        return Matrix(self.field, data, self.cols, self.rows, _coerce=False)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        data = [a + b for a, b in zip(self.data, other.data)]
        return Matrix(self.field, data, self.rows, self.cols + other.cols,
                      _coerce=False)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack col mismatch")
        return Matrix(self.field, self.data + other.data,
                      self.rows + other.rows, self.cols, _coerce=False)

    def col(self, j: int) -> list:
        return [r[j] for r in self.data]

    def columns(self) -> list[list]:
        return [self.col(j) for j in range(self.cols)]

    def flatten(self) -> list:
        """Row-major flattening into a single list."""
        out: list = []
        for r in self.data:
            out.extend(r)
        return out

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product on a plain list."""
        if len(vec) != self.cols:
            raise DimensionMismatch("matrix-vector shape mismatch")
        f = self.field
        out = []
        for row in self.data:
            s = f.zero()
            for a, x in zip(row, vec):
                if a and x:
                    s = f.add(s, f.mul(a, x))
            out.append(s)
        return out

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):  # pragma: no cover - matrices used as values only
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Matrix({self.rows}x{self.cols} over {self.field.kind})"

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")


def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [field.zero_row(cols) for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.data):
            out[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return Matrix(field, out, rows, cols, _coerce=False)


#### row reduction ######################################################


def _rref_rows(field: Field, rows: list[list], ncols: int,
               pivot_limit: int | None = None) -> tuple[list[list], list[int]]:
    """In-place-style RREF on a list of rows; returns (reduced rows, pivots).

    Pivot search: columns in increasing order, first row (in current order)
    with a nonzero entry.  Only columns < pivot_limit are eligible as pivot
    columns (used for augmented solves); reduction applies to full rows.
    """
    if pivot_limit is None:
        pivot_limit = ncols
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(pivot_limit):
        sel = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                sel = i
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        piv = rows[rank][col]
        if piv != field.one():
            rows[rank] = field.scale(rows[rank], field.inv(piv))
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = field.axpy(rows[i], field.neg(rows[i][col]), prow)
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows, pivots


def rref(M: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row-echelon form, pivot columns, and rank (canonical)."""
    rows, pivots = _rref_rows(M.field, M.data, M.cols)
    R = Matrix(M.field, rows, M.rows, M.cols, _coerce=False)
    return R, pivots, len(pivots)


def rank(M: Matrix) -> int:
    return rref(M)[2]


def row_space_basis(field: Field, vectors: Iterable[Sequence], length: int) -> list[list]:
    """Canonical (RREF) basis of the span of the given row vectors."""
    rows = [list(v) for v in vectors]
    for r in rows:
        if len(r) != length:
            raise DimensionMismatch("vector length mismatch")
    if not rows:
        return []
    reduced, pivots = _rref_rows(field, rows, length)
    return reduced[: len(pivots)]


def kernel_basis(M: Matrix) -> list[list]:
    """Basis (list of plain-list column vectors) of {x : M·x = 0}.

    Free variables are taken in increasing column order, and each basis
    vector has a 1 in its free slot — deterministic representatives.
    """
    R, pivots, rk = rref(M)
    field = M.field
    free = [j for j in range(M.cols) if j not in set(pivots)]
    basis = []
    one = field.one()
    for fcol in free:
        v = field.zero_row(M.cols)
        v = list(v)
        v[fcol] = one
        for i, pcol in enumerate(pivots):
            v[pcol] = field.neg(R.data[i][fcol])
        basis.append(v)
    return basis


@dataclass
class SolveSpace:
    """All solutions of A·X = B: particular + span of kernel_basis per column."""

    particular: Optional[Matrix]
    kernel_basis: list[list]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_space(A: Matrix, B: Matrix) -> SolveSpace:
    """Describe {X : A·X = B}; particular is None iff inconsistent.

    kernel_basis spans {x : A·x = 0} (per-column homogeneous solutions).
    """
    if A.rows != B.rows:
        raise DimensionMismatch(f"A has {A.rows} rows, B has {B.rows}")
    field = A.field
    aug = A.hstack(B)
    rows, pivots = _rref_rows(field, aug.data, aug.cols, pivot_limit=A.cols)
    # consistency: no row with zero A-part and nonzero B-part
    for i in range(len(pivots), len(rows)):
        if any(rows[i][A.cols:]):
            return SolveSpace(None, kernel_basis(A))
    part = [field.zero_row(B.cols) for _ in range(A.cols)]
    for i, pcol in enumerate(pivots):
        part[pcol] = rows[i][A.cols:]
    particular = Matrix(field, part, A.cols, B.cols, _coerce=False)
    return SolveSpace(particular, kernel_basis(A))


def in_span(v: Sequence, S: Sequence[Sequence], field: Field | None = None) -> bool:
    """True iff v lies in the linear span of the vectors in S (over `field`, default ℚ)."""
    v = list(v)
    n = len(v)
    for s in S:
        if len(s) != n:
            raise DimensionMismatch("vector length mismatch in in_span")
    if not any(v):
        return True
    if not S:
        return False
    if field is None:
        field = QQ
    basis = row_space_basis(field, [[field.of(x) for x in s] for s in S], n)
    reduced = _reduce_against(field, basis, [field.of(x) for x in v])
    return not any(reduced)


def _reduce_against(field: Field, rref_rows_list: list[list], v: list) -> list:
    v = list(v)
    for row in rref_rows_list:
        pcol = next((j for j, x in enumerate(row) if x), None)
        if pcol is None:
            continue
        if v[pcol]:
            v = field.axpy(v, field.neg(v[pcol]), row)
    return v


#### span solvers #######################################################


class SpanSolver:
    """Coordinates with respect to a fixed (possibly dependent) vector list.

    Maintains an eliminated copy of the vectors with bookkeeping rows, so
    membership tests and coordinate extraction cost one reduction each.
    """

    def __init__(self, field: Field, vectors: Sequence[Sequence], length: int):
        self.field = field
        self.length = length
        self.nvecs = len(vectors)
        self._rows: list[tuple[int, list, list]] = []  # (pivot, row, book)
        for idx, vec in enumerate(vectors):
            if len(vec) != length:
                raise DimensionMismatch("SpanSolver vector length mismatch")
            book = field.zero_row(self.nvecs)
            book = list(book)
            book[idx] = field.one()
            self._insert(list(vec), book)

    def _insert(self, v: list, book: list):
        field = self.field
        for pcol, row, rbook in self._rows:
            if v[pcol]:
                c = field.neg(v[pcol])
                v = field.axpy(v, c, row)
                book = field.axpy(book, c, rbook)
        pcol = next((j for j, x in enumerate(v) if x), None)
        if pcol is None:
            return  # dependent vector: contributes nothing
        inv = field.inv(v[pcol])
        v = field.scale(v, inv)
        book = field.scale(book, inv)
        # keep the row set fully reduced: clear the new pivot column from
        # every existing row so a single reduce() pass is exact
        for i, (pc, row, rbook) in enumerate(self._rows):
            if row[pcol]:
                c = field.neg(row[pcol])
                self._rows[i] = (pc, field.axpy(row, c, v),
                                 field.axpy(rbook, c, book))
        self._rows.append((pcol, v, book))
        self._rows.sort(key=lambda t: t[0])

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence) -> tuple[list, list]:
        """Return (residual, coords) with vec = Σ coords·vectors + residual."""
        field = self.field
        v = [field.of(x) for x in vec]
        coords = field.zero_row(self.nvecs)
        for pcol, row, book in self._rows:
            if v[pcol]:
                c = v[pcol]
                v = field.axpy(v, field.neg(c), row)
                coords = field.axpy(coords, c, book)
        return v, coords

    def contains(self, vec: Sequence) -> bool:
        residual, _ = self.reduce(vec)
        return not any(residual)

    def coords(self, vec: Sequence) -> Optional[list]:
        """Coordinates of vec in the original vector list, or None."""
        residual, coords = self.reduce(vec)
        if any(residual):
            return None
        return coords


#### characteristic polynomials and eigenvalues ########################


def char_poly(M: Matrix) -> list:
    """Coefficients [c_0, ..., c_n] of det(x·I − M), ascending, monic.

    Computed by Hessenberg reduction + the standard recurrence; uses only
    field divisions, so it is valid over GF(p) for any p.
    """
    if M.rows != M.cols:
        raise DimensionMismatch("char_poly needs a square matrix")
    n = M.rows
    field = M.field
    if n == 0:
        return [field.one()]
    H = [list(r) for r in M.data]
    # Hessenberg form via similarity transforms
    for j in range(n - 2):
        sel = None
        for i in range(j + 1, n):
            if H[i][j]:
                sel = i
                break
        if sel is None:
            continue
        if sel != j + 1:
            H[j + 1], H[sel] = H[sel], H[j + 1]
            for row in H:
                row[j + 1], row[sel] = row[sel], row[j + 1]
        piv = H[j + 1][j]
        for i in range(j + 2, n):
            if H[i][j]:
                factor = field.mul(H[i][j], field.inv(piv))
                H[i] = field.axpy(H[i], field.neg(factor), H[j + 1])
                for row in H:
                    row[j + 1] = field.add(row[j + 1], field.mul(factor, row[i]))
    # p_m = char poly of leading m×m minor (ascending coefficient lists)
    one, zero = field.one(), field.zero()
    polys: list[list] = [[one]]
    for m in range(1, n + 1):
        d = H[m - 1][m - 1]
        prev = polys[m - 1]
        # (x − d)·prev
        cur = [zero] * (m + 1)
        for k, c in enumerate(prev):
            cur[k + 1] = field.add(cur[k + 1], c)
            cur[k] = field.sub(cur[k], field.mul(d, c))
        run = one
        for k in range(1, m):
            run = field.mul(run, H[m - k][m - k - 1])
            if not run:
                break
            coeff = field.mul(H[m - 1 - k][m - 1], run)
            if coeff:
                for t, c in enumerate(polys[m - 1 - k]):
                    cur[t] = field.sub(cur[t], field.mul(coeff, c))
        polys.append(cur)
    return polys[n]


def poly_eval(field: Field, coeffs: Sequence, x):
    acc = field.zero()
    for c in reversed(list(coeffs)):
        acc = field.add(field.mul(acc, x), c)
    return acc


_EIG_PRIME_LIMIT = 257


def eigenvalues_in_field(M: Matrix) -> list:
    """Roots of char_poly(M) lying in the ambient field, ascending order."""
    coeffs = char_poly(M)
    field = M.field
    if field.kind == "rational":
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(
            [sympy.Rational(int(c.numerator), int(c.denominator))
             for c in reversed(coeffs)], x, domain="QQ")
        roots = poly.ground_roots()
        vals = [_make_rational(int(r.p), int(r.q)) for r in roots]
        return sorted(vals)
    p = field.p  # type: ignore[attr-defined]
    if p > _EIG_PRIME_LIMIT:
        raise UnsupportedField(
            f"eigenvalue search over GF({p}) exceeds the brute-force limit")
    return [lam for lam in range(p) if not poly_eval(field, coeffs, lam)]
