"""Finite-dimensional associative unital algebras as structure-constant tables.

An Algebra is a value: field, dimension, labeled basis, sparse structure
constants b_i·b_j = Σ_k c_{ij}^k b_k, a unit vector, a complete list of
pairwise-orthogonal idempotents, and (optionally) a structural radical
basis.  The product convention throughout the package is *written order*:
the product u·v means "u then v" wherever elements are composable maps, and
left modules are representations ρ with ρ(u·v) = ρ(u)ρ(v).

Everything here is immutable after construction; derived data
(left/right multiplication matrices, the opposite algebra, the radical)
is memoized on first use.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional, Sequence

from .errors import IndexOutOfRange, NotIdempotent, UnsupportedField
from .exactla import (
    Field,
    Matrix,
    QQ,
    SpanSolver,
    field_from_json,
    field_to_json,
    row_space_basis,
)

#### the Algebra value ##################################################


class Algebra:
    """Structure-constant algebra over an exact field."""

    def __init__(self, field: Field, dim: int, basis_labels: Sequence[str],
                 structure_constants: Iterable[tuple], unit: Sequence,
                 idempotents: Sequence[Sequence],
                 radical_basis: Optional[Sequence[Sequence]] = None):
        self.field = field
        self.dim = dim
        self.basis_labels = [str(s) for s in basis_labels]
        if len(self.basis_labels) != dim:
            raise ValueError("basis_labels length != dim")
        of = field.of
        sc: dict[tuple[int, int], list[tuple[int, object]]] = {}
        for (i, j, k, c) in structure_constants:
            c = of(c)
            if not c:
                continue
            sc.setdefault((int(i), int(j)), []).append((int(k), c))
        for key in sc:
            sc[key].sort(key=lambda t: t[0])
        self._sc = sc
        self.unit = [of(x) for x in unit]
        if len(self.unit) != dim:
            raise ValueError("unit vector length != dim")
        self.idempotents = [[of(x) for x in e] for e in idempotents]
        for e in self.idempotents:
            if len(e) != dim:
                raise ValueError("idempotent vector length != dim")
        self._radical: Optional[list[list]] = (
            [[of(x) for x in r] for r in radical_basis]
            if radical_basis is not None else None)
        self._radical_structural = radical_basis is not None
        self._L: list[Optional[Matrix]] = [None] * dim
        self._R: list[Optional[Matrix]] = [None] * dim
        self._op: Optional["Algebra"] = None
        self._cache: dict = {}

    # -- multiplication ---------------------------------------------------

    def product_row(self, i: int, j: int) -> list[tuple[int, object]]:
        """Sparse coefficients of b_i·b_j."""
        return self._sc.get((i, j), [])

    def mul_vec(self, u: Sequence, v: Sequence) -> list:
        """Coordinates of the product u·v ("u then v")."""
        f = self.field
        acc: dict[int, object] = {}
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = f.mul(a, b)
                for k, c in self.product_row(i, j):
                    val = f.add(acc.get(k, f.zero()), f.mul(ab, c))
                    acc[k] = val
        out = f.zero_row(self.dim)
        out = list(out)
        for k, val in acc.items():
            out[k] = val
        return out

    def L(self, i: int) -> Matrix:
        """Left multiplication matrix of basis element i (columns = b_i·b_j)."""
        if self._L[i] is None:
            f = self.field
            cols = []
            for j in range(self.dim):
                col = list(f.zero_row(self.dim))
                for k, c in self.product_row(i, j):
                    col[k] = c
                cols.append(col)
            self._L[i] = Matrix.from_columns(f, cols)
        return self._L[i]

    def R(self, i: int) -> Matrix:
        """Right multiplication matrix of basis element i (columns = b_j·b_i)."""
        if self._R[i] is None:
            f = self.field
            cols = []
            for j in range(self.dim):
                col = list(f.zero_row(self.dim))
                for k, c in self.product_row(j, i):
                    col[k] = c
                cols.append(col)
            self._R[i] = Matrix.from_columns(f, cols)
        return self._R[i]

    def left_mult_matrix(self, vec: Sequence) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.dim, self.dim)
        acc = out.data
        for i, a in enumerate(vec):
            if a:
                Li = self.L(i).data
                acc = [f.axpy(r, a, lr) for r, lr in zip(acc, Li)]
        return Matrix(f, acc, self.dim, self.dim, _coerce=False)

    def right_mult_matrix(self, vec: Sequence) -> Matrix:
        f = self.field
        acc = Matrix.zeros(f, self.dim, self.dim).data
        for i, a in enumerate(vec):
            if a:
                Ri = self.R(i).data
                acc = [f.axpy(r, a, rr) for r, rr in zip(acc, Ri)]
        return Matrix(f, acc, self.dim, self.dim, _coerce=False)

    def is_idempotent_vec(self, e: Sequence) -> bool:
        e = [self.field.of(x) for x in e]
        return self.mul_vec(e, e) == e

    def idempotent(self, r: int) -> list:
        if not (0 <= r < len(self.idempotents)):
            raise IndexOutOfRange(
                f"idempotent index {r} out of range (have {len(self.idempotents)})")
        return self.idempotents[r]

    @property
    def n_idempotents(self) -> int:
        return len(self.idempotents)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Algebra(dim={self.dim}, field={self.field.kind})"


#### validation #########################################################


@dataclass
class ValidationReport:
    failures: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate(A: Algebra, check_primitivity: bool = True) -> ValidationReport:
    """Check all Algebra invariants; failures are reported, not raised."""
    rep = ValidationReport()
    f = A.field
    n = A.dim

    # unit acts as two-sided identity
    for j in range(n):
        ej = list(f.zero_row(n))
        ej[j] = f.one()
        if A.mul_vec(A.unit, ej) != ej:
            rep.failures.append(f"unit·b_{j} != b_{j}")
        if A.mul_vec(ej, A.unit) != ej:
            rep.failures.append(f"b_{j}·unit != b_{j}")

    # associativity on all basis triples, via sparse rows
    rows = {key: dict(val) for key, val in A._sc.items()}

    def sparse_mul_row(row: dict, j: int) -> dict:
        acc: dict[int, object] = {}
        for t, c in row.items():
            for k, d in A.product_row(t, j):
                acc[k] = f.add(acc.get(k, f.zero()), f.mul(c, d))
        return {k: v for k, v in acc.items() if v}

    def sparse_mul_left(i: int, row: dict) -> dict:
        acc: dict[int, object] = {}
        for t, c in row.items():
            for k, d in A.product_row(i, t):
                acc[k] = f.add(acc.get(k, f.zero()), f.mul(c, d))
        return {k: v for k, v in acc.items() if v}

    for i in range(n):
        for j in range(n):
            rij = rows.get((i, j), {})
            for k in range(n):
                left = sparse_mul_row(rij, k)
                right = sparse_mul_left(i, rows.get((j, k), {}))
                if left != right:
                    rep.failures.append(
                        f"associativity fails at (b_{i}·b_{j})·b_{k}")
                    break
            else:
                continue
            break

    # idempotent system
    total = list(f.zero_row(n))
    for r, e in enumerate(A.idempotents):
        if A.mul_vec(e, e) != e:
            rep.failures.append(f"idempotent {r} is not idempotent")
        total = f.add_rows(total, e)
        for s, e2 in enumerate(A.idempotents):
            if r != s and any(A.mul_vec(e, e2)):
                rep.failures.append(f"idempotents {r},{s} not orthogonal")
    if A.dim and total != A.unit:
        rep.failures.append("idempotents do not sum to the unit")

    # radical checks (when present)
    if A._radical is not None:
        J = A._radical
        if J:
            solver = SpanSolver(f, J, n)
            for r in J:
                for i in range(n):
                    ei = list(f.zero_row(n))
                    ei[i] = f.one()
                    if not solver.contains(A.mul_vec(ei, r)):
                        rep.failures.append("radical not a left ideal")
                        break
                    if not solver.contains(A.mul_vec(r, ei)):
                        rep.failures.append("radical not a right ideal")
                        break
                else:
                    continue
                break
            if not _is_nilpotent_span(A, J):
                rep.failures.append("radical basis is not nilpotent")
        if f.kind == "rational":
            dickson = _dickson_radical(A)
            if row_space_basis(f, dickson, n) != row_space_basis(f, J, n):
                rep.failures.append(
                    "structural radical disagrees with the trace criterion")

    # primitivity of idempotents, via decomposition of A·e_r
    if check_primitivity and not rep.failures:
        from . import modrep  # deferred: modrep depends on this module

        for r in range(A.n_idempotents):
            try:
                dec = modrep.decompose(modrep.proj(A, r))
                if len(dec.copies) != 1:
                    rep.failures.append(
                        f"idempotent {r} is not primitive "
                        f"(A·e_{r} has {len(dec.copies)} summands)")
            except Exception as exc:  # report, never raise
                rep.failures.append(
                    f"primitivity check of idempotent {r} failed: {exc}")
    return rep


def _is_nilpotent_span(A: Algebra, J: list[list]) -> bool:
    f = A.field
    n = A.dim
    power = row_space_basis(f, J, n)
    for _ in range(n + 1):
        if not power:
            return True
        nxt = []
        for u in power:
            for v in J:
                nxt.append(A.mul_vec(u, v))
        power = row_space_basis(f, nxt, n)
    return not power


#### opposite ###########################################################


def opposite(A: Algebra) -> Algebra:
    """The opposite algebra (b_i ∘ b_j := b_j·b_i); involutive by identity."""
    if A._op is None:
        sc = [(j, i, k, c) for (i, j), row in A._sc.items() for (k, c) in row]
        op = Algebra(A.field, A.dim, A.basis_labels, sc, A.unit,
                     A.idempotents,
                     radical_basis=A._radical if A._radical_structural else None)
        if not op._radical_structural and A._radical is not None:
            op._radical = A._radical  # same subspace, already certified
        op._op = A
        A._op = op
    return A._op


#### radical ############################################################


def _dickson_radical(A: Algebra) -> list[list]:
    """Jacobson radical over ℚ: kernel of the trace form t(x,y) = tr(L_{xy})."""
    f = A.field
    n = A.dim
    traces = []
    for k in range(n):
        Lk = A.L(k)
        traces.append(sum((Lk.data[t][t] for t in range(n)), f.zero()))
    gram = []
    for i in range(n):
        row = list(f.zero_row(n))
        for j in range(n):
            s = f.zero()
            for k, c in A.product_row(i, j):
                if traces[k]:
                    s = f.add(s, f.mul(c, traces[k]))
            row[j] = s
        gram.append(row)
    # x ∈ rad ⟺ Σ_i x_i·gram[i][j] = 0 for all j ⟺ gramᵀ·x = 0
    from .exactla import kernel_basis

    G = Matrix(f, gram, n, n, _coerce=False).transpose()
    return kernel_basis(G)


def radical(A: Algebra) -> list[list]:
    """Basis of the Jacobson radical (structural if supplied, else Dickson/ℚ)."""
    if A._radical is not None:
        return A._radical
    if A.field.kind != "rational":
        raise UnsupportedField(
            "radical over GF(p) requires a structural radical basis")
    J = _dickson_radical(A)
    if not _is_nilpotent_span(A, J):  # pragma: no cover - criterion guarantee
        raise ArithmeticError("trace-criterion radical failed nilpotency check")
    A._radical = J
    return J


def has_radical(A: Algebra) -> bool:
    return A._radical is not None or A.field.kind == "rational"


#### corners ############################################################


@dataclass
class CornerData:
    """Transport data for the corner eAe: carries e and a basis of eAe ⊆ A."""

    parent: Algebra
    corner: Algebra
    e: list
    basis: list[list]  # corner basis vectors, in parent coordinates

    def __call__(self, module):
        """Transport an A-module X to the eAe-module eX (see modrep)."""
        from .modrep import corner_transport

        return corner_transport(self, module)


def corner(A: Algebra, e: Sequence) -> tuple[Algebra, CornerData]:
    """The corner algebra eAe with unit e, plus a module transporter."""
    f = A.field
    e = [f.of(x) for x in e]
    if A.mul_vec(e, e) != e:
        raise NotIdempotent("corner element is not idempotent")
    n = A.dim
    spans = []
    for i in range(n):
        ei = list(f.zero_row(n))
        ei[i] = f.one()
        spans.append(A.mul_vec(A.mul_vec(e, ei), e))
    basis = row_space_basis(f, spans, n)
    d = len(basis)
    solver = SpanSolver(f, basis, n) if d else None
    sc = []
    for i in range(d):
        for j in range(d):
            prod = A.mul_vec(basis[i], basis[j])
            coords = solver.coords(prod)
            assert coords is not None, "corner not multiplicatively closed"
            for k, c in enumerate(coords):
                if c:
                    sc.append((i, j, k, c))
    unit_coords = solver.coords(e) if d else []
    assert d == 0 or unit_coords is not None
    # distinguished idempotents below e
    sub = []
    total = list(f.zero_row(n))
    for er in A.idempotents:
        if A.mul_vec(er, e) == er and A.mul_vec(e, er) == er:
            sub.append(er)
            total = f.add_rows(total, er)
    if d == 0:
        idem = []
    elif total == e and sub:
        idem = [solver.coords(er) for er in sub]
    else:
        idem = [unit_coords]
    rad = None
    if A._radical is not None or A.field.kind == "rational":
        parent_rad = radical(A) if has_radical(A) else None
        if parent_rad is not None:
            cut = [A.mul_vec(A.mul_vec(e, r), e) for r in parent_rad]
            cut = row_space_basis(f, cut, n)
            rad = [solver.coords(v) for v in cut] if d else []
    labels = [f"c{i}" for i in range(d)]
    B = Algebra(f, d, labels, sc, unit_coords if d else [], idem,
                radical_basis=rad)
    return B, CornerData(A, B, e, basis)


#### Cartan matrices ####################################################


def cartan_matrix(A: Algebra) -> list[list[int]]:
    """Integer matrix with entry (r,c) = dim_k e_r·A·e_c.

    For an endomorphism algebra End(⊕M_i) with its summand idempotents this
    is dim Hom(M_r, M_c), matching the written-order product convention.
    """
    f = A.field
    n = A.dim
    out = []
    for er in A.idempotents:
        row = []
        left = [A.mul_vec(er, [f.one() if t == i else f.zero() for t in range(n)])
                for i in range(n)]
        for ec in A.idempotents:
            spans = [A.mul_vec(v, ec) for v in left]
            row.append(len(row_space_basis(f, spans, n)))
        out.append(row)
    return out


#### JSON ###############################################################


def _scalar_to_json(field: Field, x):
    if field.kind == "rational":
        return field.to_str(x)
    return int(x)


def _scalar_from_json(field: Field, v):
    if isinstance(v, str):
        return field.from_str(v)
    return field.of(v)


def algebra_to_json(A: Algebra) -> dict:
    f = A.field
    sc = []
    for (i, j), row in sorted(A._sc.items()):
        for k, c in row:
            sc.append([i, j, k, _scalar_to_json(f, c)])
    out = {
        "field": field_to_json(f),
        "dim": A.dim,
        "basis_labels": list(A.basis_labels),
        "unit": [_scalar_to_json(f, x) for x in A.unit],
        "structure_constants": sc,
        "idempotents": [[_scalar_to_json(f, x) for x in e]
                        for e in A.idempotents],
    }
    if A._radical_structural and A._radical is not None:
        out["radical_basis"] = [[_scalar_to_json(f, x) for x in r]
                                for r in A._radical]
    return out


def algebra_from_json(d: dict) -> Algebra:
    f = field_from_json(d["field"])
    sc = [(int(i), int(j), int(k), _scalar_from_json(f, c))
          for (i, j, k, c) in d["structure_constants"]]
    rad = d.get("radical_basis")
    if rad is not None:
        rad = [[_scalar_from_json(f, x) for x in r] for r in rad]
    return Algebra(
        f, int(d["dim"]), d["basis_labels"], sc,
        [_scalar_from_json(f, x) for x in d["unit"]],
        [[_scalar_from_json(f, x) for x in e] for e in d["idempotents"]],
        radical_basis=rad)
