"""Modules, morphisms, and the functor zoo over structure-constant algebras.

Modules are left modules in the written-order product convention: the
action matrices satisfy ρ(u·v) = ρ(u)·ρ(v), acting on column coordinate
vectors.  compose(f, g) means "f then g" and multiplies matrices as G·F.

Hom spaces are computed through a minimal projective presentation whenever
the algebra's radical is available (Hom(Ae_r, N) ≅ e_r·N cuts the linear
system down to a few hundred unknowns even for End of a 34-dimensional
module); a direct intertwining solve is kept as a fallback.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from .algebra import (
    Algebra,
    CornerData,
    _scalar_from_json,
    _scalar_to_json,
    algebra_from_json,
    algebra_to_json,
    has_radical,
    opposite,
    radical,
)
from .errors import (
    AlgebraMismatch,
    DecompositionInconclusive,
    IndexOutOfRange,
    NonSplitEnd,
    NotComposable,
    RadicalUnavailable,
)
from .exactla import (
    Matrix,
    SpanSolver,
    block_diag,
    char_poly,
    eigenvalues_in_field,
    kernel_basis,
    rank,
    row_space_basis,
    solve_space,
)

#### module and morphism values #########################################


class Module:
    """Left module: one action matrix per algebra basis element."""

    def __init__(self, algebra: Algebra, dim: int, action: Sequence[Matrix]):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        self._cache: dict = {}

    def act(self, i: int) -> Matrix:
        return self.action[i]

    def act_elem(self, avec: Sequence) -> Matrix:
        """Action matrix of a general algebra element (coordinate vector)."""
        f = self.algebra.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, c in enumerate(avec):
            if c:
                out = out + self.action[i].scale(c)
        return out

    def act_vec(self, avec: Sequence, v: Sequence) -> list:
        f = self.algebra.field
        out = f.zero_row(self.dim)
        for i, c in enumerate(avec):
            if c:
                out = f.axpy(out, c, self.action[i].apply(v))
        return list(out)

    def __eq__(self, other):
        return (isinstance(other, Module) and self.algebra is other.algebra
                and self.dim == other.dim and self.action == other.action)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Module(dim={self.dim})"


def check_module(M: Module) -> list[str]:
    """Module-axiom failures: ρ(unit) = id and ρ(b_i)ρ(b_j) = ρ(b_i·b_j)."""
    A = M.algebra
    f = A.field
    failures = []
    if M.act_elem(A.unit) != Matrix.identity(f, M.dim):
        failures.append("unit does not act as identity")
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = M.act(i) @ M.act(j)
            rhs = Matrix.zeros(f, M.dim, M.dim)
            for k, c in A.product_row(i, j):
                rhs = rhs + M.act(k).scale(c)
            if lhs != rhs:
                failures.append(f"action breaks b_{i}·b_{j}")
    return failures


class Morphism:
    """Module map; matrix is target.dim × source.dim on column coordinates."""

    def __init__(self, source: Module, target: Module, matrix: Matrix,
                 check: bool = False):
        self.source = source
        self.target = target
        self.matrix = matrix
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ValueError("morphism matrix shape mismatch")
        if check and not self.is_morphism():
            raise ValueError("matrix does not intertwine the actions")

    def is_morphism(self) -> bool:
        return all(self.matrix @ self.source.act(i)
                   == self.target.act(i) @ self.matrix
                   for i in range(self.source.algebra.dim))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Morphism({self.source.dim} → {self.target.dim})"


def compose(f: Morphism, g: Morphism) -> Morphism:
    """The composite "f then g" (matrix product G·F)."""
    if f.target is not g.source and f.target != g.source:
        raise NotComposable("target of f is not the source of g")
    return Morphism(f.source, g.target, g.matrix @ f.matrix)


def identity_morphism(M: Module) -> Morphism:
    return Morphism(M, M, Matrix.identity(M.algebra.field, M.dim))


def zero_morphism(M: Module, N: Module) -> Morphism:
    return Morphism(M, N, Matrix.zeros(M.algebra.field, N.dim, M.dim))


#### constructors ########################################################


def zero_module(A: Algebra) -> Module:
    return Module(A, 0, [Matrix.zeros(A.field, 0, 0)] * A.dim)


def regular(A: Algebra) -> Module:
    """_AA: left multiplication on the algebra's own coordinates."""
    if "regular_module" not in A._cache:
        A._cache["regular_module"] = Module(
            A, A.dim, [A.L(i) for i in range(A.dim)])
    return A._cache["regular_module"]


def proj(A: Algebra, r: int) -> Module:
    """P_r = A·e_r as a submodule of the regular module."""
    key = ("proj", r)
    if key not in A._cache:
        if not (0 <= r < len(A.idempotents)):
            raise IndexOutOfRange(f"no idempotent with index {r}")
        P, incl = submodule_generated(regular(A), [A.idempotents[r]])
        P._cache["regular_inclusion"] = incl
        P._cache["vertex"] = r
        A._cache[key] = P
    return A._cache[key]


def inj(A: Algebra, r: int) -> Module:
    """I_r = D(e_r·A), the dual of the indecomposable projective over A^op."""
    key = ("inj", r)
    if key not in A._cache:
        if not (0 <= r < len(A.idempotents)):
            raise IndexOutOfRange(f"no idempotent with index {r}")
        I = dual(proj(opposite(A), r))
        I._cache["vertex"] = r
        A._cache[key] = I
    return A._cache[key]


def simple(A: Algebra, r: int) -> Module:
    """Top of P_r."""
    key = ("simple", r)
    if key not in A._cache:
        A._cache[key] = top(proj(A, r))[0]
    return A._cache[key]


def module_from_action(A: Algebra, mats: Sequence[Matrix]) -> Module:
    dim = mats[0].rows if mats else 0
    return Module(A, dim, mats)


#### direct sums, kernels, cokernels ####################################


def direct_sum(mods: Sequence[Module]) -> tuple[Module, list[Morphism],
                                                list[Morphism]]:
    """(⊕M_i, inclusions, projections)."""
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    A = mods[0].algebra
    for M in mods:
        if M.algebra is not A:
            raise AlgebraMismatch("direct sum across different algebras")
    f = A.field
    total = sum(M.dim for M in mods)
    action = [block_diag(f, [M.act(i) for M in mods]) for i in range(A.dim)]
    S = Module(A, total, action)
    S.summands = [M for M in mods if M.dim]
    incls, projs = [], []
    offset = 0
    for M in mods:
        inc = Matrix.zeros(f, total, M.dim).data
        prj = Matrix.zeros(f, M.dim, total).data
        one = f.one()
        inc = [list(r) for r in inc]
        prj = [list(r) for r in prj]
        for t in range(M.dim):
            inc[offset + t][t] = one
            prj[t][offset + t] = one
        incls.append(Morphism(M, S, Matrix(f, inc, total, M.dim, _coerce=False)))
        projs.append(Morphism(S, M, Matrix(f, prj, M.dim, total, _coerce=False)))
        offset += M.dim
    return S, incls, projs


def _restricted_module(M: Module, basis: list[list]) -> tuple[Module, Matrix]:
    """Submodule structure on an invariant subspace; returns (module, incl)."""
    A = M.algebra
    f = A.field
    d = len(basis)
    incl = Matrix.from_columns(f, basis) if d else Matrix(f, [f.zero_row(0)
        for _ in range(M.dim)], M.dim, 0, _coerce=False)
    solver = SpanSolver(f, basis, M.dim) if d else None
    action = []
    for i in range(A.dim):
        cols = []
        for b in basis:
            coords = solver.coords(M.act(i).apply(b))
            assert coords is not None, "subspace is not action-invariant"
            cols.append(coords)
        action.append(Matrix.from_columns(f, cols) if d
                      else Matrix.zeros(f, 0, 0))
    return Module(A, d, action), incl


def kernel(fm: Morphism) -> tuple[Module, Morphism]:
    K = kernel_basis(fm.matrix)
    mod, incl = _restricted_module(fm.source, K)
    return mod, Morphism(mod, fm.source, incl)


def _quotient_by_subspace(M: Module, span_rows: list[list]) -> tuple[Module,
                                                                     Morphism]:
    """Quotient of M by an invariant subspace, on non-pivot coordinates."""
    A = M.algebra
    f = A.field
    rows = row_space_basis(f, span_rows, M.dim)
    pivots = [next(j for j, x in enumerate(r) if x) for r in rows]
    pivot_set = set(pivots)
    npiv = [j for j in range(M.dim) if j not in pivot_set]
    q = len(npiv)
    # projection: reduce each unit vector modulo the subspace, keep free coords
    proj_rows = [f.zero_row(M.dim) for _ in range(q)]
    proj_rows = [list(r) for r in proj_rows]
    for t, j in enumerate(npiv):
        proj_rows[t][j] = f.one()
    for row, p in zip(rows, pivots):
        for t, j in enumerate(npiv):
            if row[j]:
                proj_rows[t][p] = f.sub(proj_rows[t][p], row[j])
    # proj_rows[t] is the functional picking the npiv[t]-coordinate of the
    # reduced representative: e_p ↦ −row[j-part], e_j ↦ e_j for free j
    P = Matrix(f, proj_rows, q, M.dim, _coerce=False)
    sect = Matrix.zeros(f, M.dim, q).data
    sect = [list(r) for r in sect]
    for t, j in enumerate(npiv):
        sect[j][t] = f.one()
    S = Matrix(f, sect, M.dim, q, _coerce=False)
    action = [P @ M.act(i) @ S for i in range(A.dim)]
    Q = Module(A, q, action)
    return Q, Morphism(M, Q, P)


def cokernel(fm: Morphism) -> tuple[Module, Morphism]:
    cols = fm.matrix.columns()
    return _quotient_by_subspace(fm.target, cols)


def image(fm: Morphism) -> tuple[Module, Morphism, Morphism]:
    """(image module, inclusion into target, epi from source)."""
    f = fm.source.algebra.field
    V = row_space_basis(f, fm.matrix.columns(), fm.target.dim)
    mod, incl = _restricted_module(fm.target, V)
    if mod.dim:
        solver = SpanSolver(f, V, fm.target.dim)
        cols = [solver.coords(c) for c in fm.matrix.columns()]
        epi = Matrix.from_columns(f, cols)
    else:
        epi = Matrix(f, [], 0, fm.source.dim, _coerce=False)
    return (mod, Morphism(mod, fm.target, incl),
            Morphism(fm.source, mod, epi))


def submodule_generated(M: Module, gens: Sequence[Sequence]) -> tuple[Module,
                                                                      Morphism]:
    A = M.algebra
    f = A.field
    spans = []
    for g in gens:
        g = [f.of(x) for x in g]
        for i in range(A.dim):
            spans.append(M.act(i).apply(g))
    V = row_space_basis(f, spans, M.dim)
    mod, incl = _restricted_module(M, V)
    return mod, Morphism(mod, M, incl)


#### Hom spaces ##########################################################


def _check_same_algebra(M: Module, N: Module):
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("modules live over different algebras")


def hom_basis(M: Module, N: Module) -> list[Morphism]:
    """Basis of Hom_A(M, N) (deterministic representatives)."""
    _check_same_algebra(M, N)
    if M.dim == 0 or N.dim == 0:
        return []
    memo = M._cache.setdefault("homs", [])
    for other, basis in memo:
        if other is N:
            return basis
    if has_radical(M.algebra):
        basis = _hom_presentation(M, N)
    else:
        basis = _hom_direct(M, N)
    memo.append((N, basis))
    return basis


def _hom_direct(M: Module, N: Module) -> list[Morphism]:
    A = M.algebra
    f = A.field
    m, n = M.dim, N.dim
    rows = []
    for b in range(A.dim):
        rm, rn = M.act(b), N.act(b)
        # constraint F·ρ_M(b) − ρ_N(b)·F = 0, F flattened row-major
        for i in range(n):
            for j in range(m):
                row = list(f.zero_row(n * m))
                for k in range(m):
                    if rm.data[k][j]:
                        row[i * m + k] = f.add(row[i * m + k], rm.data[k][j])
                for k in range(n):
                    if rn.data[i][k]:
                        row[k * m + j] = f.sub(row[k * m + j], rn.data[i][k])
                rows.append(row)
    big = Matrix(f, rows, len(rows), n * m, _coerce=False)
    out = []
    for v in kernel_basis(big):
        mat = Matrix(f, [v[i * m:(i + 1) * m] for i in range(n)], n, m,
                     _coerce=False)
        out.append(Morphism(M, N, mat))
    return out


def _cover_data(M: Module):
    """Memoized projective cover plus presentation bookkeeping."""
    if "cover" not in M._cache:
        M._cache["cover"] = projective_cover(M)
    return M._cache["cover"]


def _hom_presentation(M: Module, N: Module) -> list[Morphism]:
    A = M.algebra
    f = A.field
    cover = _cover_data(M)
    P = cover.source
    summands = cover.summands  # list of (vertex index, proj module)
    ker_cols = kernel_basis(cover.matrix)
    # unknowns: one block of coordinates per summand, basis of e_r·N
    psis: list[Matrix] = []
    offset = 0
    for (r, Pr) in summands:
        er_mat = N.act_elem(A.idempotents[r])
        u_basis = row_space_basis(f, er_mat.transpose().data, N.dim)
        pr_vectors = Pr._cache["regular_inclusion"].matrix.columns()
        for u in u_basis:
            acted = [N.act(i).apply(u) for i in range(A.dim)]
            cols_here = []
            for w in pr_vectors:
                col = f.zero_row(N.dim)
                for i, c in enumerate(w):
                    if c:
                        col = f.axpy(col, c, acted[i])
                cols_here.append(list(col))
            full = Matrix.zeros(f, N.dim, P.dim).data
            full = [list(row) for row in full]
            for t, col in enumerate(cols_here):
                for i in range(N.dim):
                    full[i][offset + t] = col[i]
            psis.append(Matrix(f, full, N.dim, P.dim, _coerce=False))
        offset += Pr.dim
    q = len(psis)
    if q == 0:
        return []
    if ker_cols:
        K = Matrix.from_columns(f, ker_cols)
        constraint_cols = [(psi @ K).flatten() for psi in psis]
        big = Matrix.from_columns(f, constraint_cols)
        coeffs = kernel_basis(big)
    else:
        one, zero = f.one(), f.zero()
        coeffs = [[one if t == s else zero for t in range(q)]
                  for s in range(q)]
    sigma = solve_space(cover.matrix, Matrix.identity(f, M.dim)).particular
    assert sigma is not None, "projective cover is not surjective"
    out = []
    for c in coeffs:
        psi = Matrix.zeros(f, N.dim, P.dim)
        for t, ct in enumerate(c):
            if ct:
                psi = psi + psis[t].scale(ct)
        out.append(Morphism(M, N, psi @ sigma))
    return out


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_basis(M, N))


#### duality and the Nakayama functors ##################################


def dual(M: Module) -> Module:
    """k-dual, a module over the opposite algebra (actions transposed)."""
    op = opposite(M.algebra)
    return Module(op, M.dim, [M.act(i).transpose() for i in range(op.dim)])


def _hom_to_regular(M: Module) -> tuple[Module, list[Morphism]]:
    """Hom_A(M, A) as a left module over A^op, with its Hom basis."""
    A = M.algebra
    f = A.field
    basis = hom_basis(M, regular(A))
    d = len(basis)
    op = opposite(A)
    if d == 0:
        return zero_module(op), []
    flat = [h.matrix.flatten() for h in basis]
    solver = SpanSolver(f, flat, len(flat[0]))
    action = []
    for i in range(A.dim):
        Rb = A.R(i)
        cols = []
        for h in basis:
            coords = solver.coords((Rb @ h.matrix).flatten())
            assert coords is not None
            cols.append(coords)
        action.append(Matrix.from_columns(f, cols))
    return Module(op, d, action), basis


def nakayama(M: Module) -> Module:
    """ν(M) = D(Hom_A(M, A))."""
    Q, _ = _hom_to_regular(M)
    return dual(Q)


def _dual_regular(A: Algebra) -> Module:
    """D(A_A) as a left A-module (action (R_b)ᵀ), with right structure (L_b)ᵀ."""
    if "dual_regular" not in A._cache:
        A._cache["dual_regular"] = Module(
            A, A.dim, [A.R(i).transpose() for i in range(A.dim)])
    return A._cache["dual_regular"]


def _nakayama_inv_data(M: Module) -> tuple[Module, list[Morphism]]:
    A = M.algebra
    f = A.field
    DA = _dual_regular(A)
    basis = hom_basis(DA, M)
    d = len(basis)
    if d == 0:
        return zero_module(A), []
    flat = [h.matrix.flatten() for h in basis]
    solver = SpanSolver(f, flat, len(flat[0]))
    sigma = [A.L(i).transpose() for i in range(A.dim)]
    action = []
    for i in range(A.dim):
        cols = []
        for h in basis:
            coords = solver.coords((h.matrix @ sigma[i]).flatten())
            assert coords is not None
            cols.append(coords)
        action.append(Matrix.from_columns(f, cols))
    return Module(A, d, action), basis


def nakayama_inv(M: Module) -> Module:
    """ν⁻(M) = Hom_A(D(A_A), M)."""
    mod, basis = _nakayama_inv_data(M)
    mod._cache["nakayama_inv_basis"] = basis
    return mod


def nakayama_inv_morphism(fm: Morphism, src: Optional[Module] = None,
                          tgt: Optional[Module] = None) -> Morphism:
    """ν⁻ on morphisms: post-composition on Hom(D(A_A), −)."""
    A = fm.source.algebra
    f = A.field
    if src is None:
        src = nakayama_inv(fm.source)
    if tgt is None:
        tgt = nakayama_inv(fm.target)
    sbasis = src._cache["nakayama_inv_basis"]
    tbasis = tgt._cache["nakayama_inv_basis"]
    if not sbasis or not tbasis:
        return zero_morphism(src, tgt)
    flat = [h.matrix.flatten() for h in tbasis]
    solver = SpanSolver(f, flat, len(flat[0]))
    cols = []
    for h in sbasis:
        coords = solver.coords((fm.matrix @ h.matrix).flatten())
        assert coords is not None
        cols.append(coords)
    return Morphism(src, tgt, Matrix.from_columns(f, cols))


#### radical-based structure #############################################


def _radical_vectors(A: Algebra) -> list[list]:
    try:
        return radical(A)
    except Exception as exc:
        raise RadicalUnavailable(str(exc)) from exc


def radical_of(M: Module) -> tuple[Module, Morphism]:
    """rad(A)·M with its inclusion."""
    A = M.algebra
    f = A.field
    spans = []
    for r in _radical_vectors(A):
        spans.extend(M.act_elem(r).transpose().data)  # rows = columns of ρ(r)
    V = row_space_basis(f, spans, M.dim)
    mod, incl = _restricted_module(M, V)
    return mod, Morphism(mod, M, incl)


def top(M: Module) -> tuple[Module, Morphism]:
    """M / rad(A)·M with the projection."""
    A = M.algebra
    spans = []
    for r in _radical_vectors(A):
        spans.extend(M.act_elem(r).transpose().data)
    return _quotient_by_subspace(M, spans)


def socle(M: Module) -> tuple[Module, Morphism]:
    """{m : rad(A)·m = 0} with its inclusion."""
    A = M.algebra
    f = A.field
    rads = _radical_vectors(A)
    if not rads:
        return M, identity_morphism(M)
    stacked = M.act_elem(rads[0])
    for r in rads[1:]:
        stacked = stacked.vstack(M.act_elem(r))
    mod, incl = _restricted_module(M, kernel_basis(stacked))
    return mod, Morphism(mod, M, incl)


def projective_cover(M: Module) -> Morphism:
    """Minimal epi ⊕P_{r_i} → M; the morphism carries .summands metadata."""
    A = M.algebra
    f = A.field
    if M.dim == 0:
        P = zero_module(A)
        cov = Morphism(P, M, Matrix.zeros(f, 0, 0))
        cov.summands = []
        return cov
    spans = []
    for r in _radical_vectors(A):
        spans.extend(M.act_elem(r).transpose().data)
    T, pi = _quotient_by_subspace(M, spans)
    t = T.dim
    chosen: list[tuple[int, list]] = []  # (vertex, generator in M coords)
    accepted: list[list] = []
    solver = SpanSolver(f, accepted, t)
    idem_mats = [M.act_elem(e) for e in A.idempotents]
    for j in range(M.dim):
        if solver.rank == t:
            break
        unit = [f.one() if s == j else f.zero() for s in range(M.dim)]
        for r, em in enumerate(idem_mats):
            g = em.apply(unit)
            if not any(g):
                continue
            cls = pi.matrix.apply(g)
            if not solver.contains(cls):
                accepted.append(cls)
                solver = SpanSolver(f, accepted, t)
                chosen.append((r, g))
                if solver.rank == t:
                    break
    assert solver.rank == t, "top not covered by idempotent components"
    blocks = []
    mods = []
    summands = []
    for (r, g) in chosen:
        Pr = proj(A, r)
        acted = [M.act(i).apply(g) for i in range(A.dim)]
        cols = []
        for w in Pr._cache["regular_inclusion"].matrix.columns():
            col = f.zero_row(M.dim)
            for i, c in enumerate(w):
                if c:
                    col = f.axpy(col, c, acted[i])
            cols.append(list(col))
        blocks.append(Matrix.from_columns(f, cols))
        mods.append(Pr)
        summands.append((r, Pr))
    P, _, _ = direct_sum(mods)
    mat = blocks[0]
    for b in blocks[1:]:
        mat = mat.hstack(b)
    cov = Morphism(P, M, mat)
    cov.summands = summands
    return cov


def injective_envelope(M: Module) -> Morphism:
    """Minimal mono M → ⊕I_{r_i}; the morphism carries .summands metadata."""
    A = M.algebra
    kappa = projective_cover(dual(M))
    I = dual(kappa.source)
    env = Morphism(M, I, kappa.matrix.transpose())
    env.summands = [(r, inj(A, r)) for (r, _) in kappa.summands]
    return env


def syzygy(M: Module, k: int = 1) -> Module:
    for _ in range(k):
        M = kernel(_cover_data(M))[0]
    return M


def cosyzygy(M: Module, k: int = 1) -> Module:
    for _ in range(k):
        M = cokernel(injective_envelope(M))[0]
    return M


#### add-membership and isomorphism #####################################


@dataclass
class AddMembership:
    """Truthy result of in_add with split witnesses when membership holds."""

    member: bool
    section: Optional[Morphism] = None      # X → Y^d
    evaluation: Optional[Morphism] = None   # Y^d → X

    def __bool__(self) -> bool:
        return self.member


def in_add(X: Module, Y: Module) -> AddMembership:
    """Is X a direct summand of a finite direct sum of copies of Y?"""
    _check_same_algebra(X, Y)
    f = X.algebra.field
    if X.dim == 0:
        return AddMembership(True)
    homs = hom_basis(Y, X)
    if not homs:
        return AddMembership(False)
    secs = hom_basis(X, Y)
    if not secs:
        return AddMembership(False)
    d = len(homs)
    # solve Σ c_{ij} (g_j then f_i) = id_X over the product coordinates
    cols = []
    for fi in homs:
        for gj in secs:
            cols.append((fi.matrix @ gj.matrix).flatten())
    target = Matrix.identity(f, X.dim).flatten()
    sol = solve_space(Matrix.from_columns(f, cols),
                      Matrix.column(f, target))
    if not sol.consistent:
        return AddMembership(False)
    c = sol.particular.col(0)
    Yd, incls, _ = direct_sum([Y] * d)
    ev = homs[0].matrix
    for h in homs[1:]:
        ev = ev.hstack(h.matrix)
    evaluation = Morphism(Yd, X, ev)
    sec_mat = None
    for i in range(d):
        block = Matrix.zeros(f, Y.dim, X.dim)
        for j, gj in enumerate(secs):
            cij = c[i * len(secs) + j]
            if cij:
                block = block + gj.matrix.scale(cij)
        sec_mat = block if sec_mat is None else sec_mat.vstack(block)
    section = Morphism(X, Yd, sec_mat)
    return AddMembership(True, section, evaluation)


def iso(M: Module, N: Module) -> bool:
    """Isomorphism test via equal dimension and mutual add-membership."""
    _check_same_algebra(M, N)
    if M.dim != N.dim:
        return False
    if M.dim == 0:
        return True
    return bool(in_add(M, N)) and bool(in_add(N, M))


def is_projective(M: Module) -> bool:
    return bool(in_add(M, regular(M.algebra)))


#### stable Hom modulo projectives ######################################


def stable_hom_proj(X: Module, Y: Module) -> tuple[list[Morphism], int]:
    """(basis of 𝒫(X,Y) = maps factoring through add(A), dim StHom)."""
    _check_same_algebra(X, Y)
    f = X.algebra.field
    homs = hom_basis(X, Y)
    if not homs:
        return [], 0
    to_a = hom_basis(X, regular(X.algebra))
    from_a = hom_basis(regular(X.algebra), Y)
    length = X.dim * Y.dim
    accepted: list[list] = []
    solver = SpanSolver(f, accepted, length)
    basis = []
    for a in to_a:
        for b in from_a:
            mat = b.matrix @ a.matrix
            flatv = mat.flatten()
            if not solver.contains(flatv):
                accepted.append(flatv)
                solver = SpanSolver(f, accepted, length)
                basis.append(Morphism(X, Y, mat))
    return basis, len(homs) - len(basis)


#### decomposition #######################################################


@dataclass
class Decomposition:
    copies: list[tuple[Module, int]]
    pieces: list[Module] = dc_field(default_factory=list)
    witness: Optional[Morphism] = None  # iso ⊕pieces → M

    @property
    def total_dim(self) -> int:
        return sum(m.dim * k for m, k in self.copies)


def _fitting_split(X: Module, g: Matrix):
    """Split X = ker(g^N) ⊕ im(g^N) when proper; None otherwise."""
    f = X.algebra.field
    power = g
    r = rank(power)
    for _ in range(X.dim.bit_length() + 1):
        nxt = power @ power
        rn = rank(nxt)
        if rn == r:
            break
        power, r = nxt, rn
    ker = kernel_basis(power)
    if not ker or len(ker) == X.dim:
        return None
    im = row_space_basis(f, power.transpose().data, X.dim)
    K, ik = _restricted_module(X, ker)
    I, ii = _restricted_module(X, im)
    return (K, ik), (I, ii)


def _end_algebra_of(X: Module, ends: list[Morphism]) -> Algebra:
    f = X.algebra.field
    d = len(ends)
    flat = [h.matrix.flatten() for h in ends]
    solver = SpanSolver(f, flat, X.dim * X.dim)
    sc = []
    for i in range(d):
        for j in range(d):
            coords = solver.coords((ends[j].matrix @ ends[i].matrix).flatten())
            assert coords is not None
            for k, c in enumerate(coords):
                if c:
                    sc.append((i, j, k, c))
    unit = solver.coords(Matrix.identity(f, X.dim).flatten())
    assert unit is not None
    return Algebra(f, d, [f"f{i}" for i in range(d)], sc, unit, [unit])


def _certify_indecomposable(X: Module, ends: list[Morphism]) -> bool:
    """True when End(X) is local with residue field k; may raise NonSplitEnd."""
    A = X.algebra
    f = A.field
    E = _end_algebra_of(X, ends)
    if f.kind == "rational":
        J = radical(E)
        if E.dim - len(J) == 1:
            return True
        # commutative End with an irreducible minimal polynomial of degree
        # > 1 certifies a genuine division-algebra quotient
        commutative = all(
            (ends[i].matrix @ ends[j].matrix)
            == (ends[j].matrix @ ends[i].matrix)
            for i in range(len(ends)) for j in range(i))
        if commutative:
            import sympy

            x = sympy.Symbol("x")
            for h in ends:
                coeffs = char_poly(h.matrix)
                poly = sympy.Poly(
                    [sympy.Rational(int(c.numerator), int(c.denominator))
                     for c in reversed(coeffs)], x, domain="QQ")
                factors = sympy.factor_list(poly)[1]
                if all(p.degree() > 1 for p, _ in factors):
                    raise NonSplitEnd(
                        "End/rad contains a field extension of k")
        return False
    # GF(p): certify a codimension-1 nilpotent ideal
    lam = []
    for h in ends:
        found = None
        for c in range(f.p):  # type: ignore[attr-defined]
            g = h.matrix - Matrix.identity(f, X.dim).scale(c)
            power = g
            for _ in range(X.dim.bit_length() + 1):
                power = power @ power
            if power.is_zero():
                found = c
                break
        if found is None:
            return False
        lam.append(found)
    # N = span{h_i − λ_i·id}: verify it is a nilpotent subalgebra of codim 1
    d = len(ends)
    nil_vecs = []
    for h, c in zip(ends, lam):
        g = h.matrix - Matrix.identity(f, X.dim).scale(c)
        nil_vecs.append(g.flatten())
    N = row_space_basis(f, nil_vecs, X.dim * X.dim)
    if len(N) != d - 1:
        return False
    power_basis = N
    for _ in range(d + 1):
        if not power_basis:
            return True
        nxt = []
        solver = SpanSolver(f, N, X.dim * X.dim)
        m = X.dim
        for u in power_basis:
            um = Matrix(f, [u[i * m:(i + 1) * m] for i in range(m)], m, m,
                        _coerce=False)
            for v in N:
                vm = Matrix(f, [v[i * m:(i + 1) * m] for i in range(m)], m, m,
                            _coerce=False)
                prod = (vm @ um).flatten()
                if not solver.contains(prod):
                    return False  # not multiplicatively closed
                nxt.append(prod)
        power_basis = row_space_basis(f, nxt, X.dim * X.dim)
    return not power_basis


def _split_candidates(ends: list[Morphism], rng: Optional[random.Random]):
    """Fitting-split candidates: basis endos, products, shifted sums.

    Produced lazily so that large endomorphism rings do not materialise
    a quadratic number of matrices before the first split is found.
    """
    n = len(ends)
    plan = [("e", i, 0, 0) for i in range(n)]
    plan += [("p", i, j, 0) for i in range(n) for j in range(n)]
    plan += [("s", i, j, c) for i in range(n) for j in range(i + 1, n)
             for c in (-2, -1, 1, 2)]
    if rng is not None:
        rng.shuffle(plan)
    for kind, i, j, c in plan:
        if kind == "e":
            yield ends[i].matrix
        elif kind == "p":
            yield ends[i].matrix @ ends[j].matrix
        else:
            yield ends[i].matrix + ends[j].matrix.scale(c)


def _verified_blocks(M: Module) -> Optional[list[Module]]:
    """The `summands` metadata when M literally is their ordered sum."""
    blocks = getattr(M, "summands", None)
    if not blocks or not all(isinstance(Z, Module) for Z in blocks):
        return None
    if sum(Z.dim for Z in blocks) != M.dim:
        return None
    bounds = []
    off = 0
    for Z in blocks:
        bounds.append((off, Z))
        off += Z.dim
    for a in range(M.algebra.dim):
        mat = M.act(a).data
        for lo, Z in bounds:
            sub = Z.act(a).data
            for i in range(Z.dim):
                row = mat[lo + i]
                for j in range(M.dim):
                    inside = lo <= j < lo + Z.dim
                    want = sub[i][j - lo] if inside else None
                    if inside:
                        if row[j] != want:
                            return None
                    elif row[j]:
                        return None
    return list(blocks)


def _window(f, total: int, off: int, width: int) -> Matrix:
    data = [[f.one() if j == i - off else f.zero() for j in range(width)]
            for i in range(total)]
    return Matrix(f, data, total, width, _coerce=False)


def decompose(M: Module, rng: Optional[random.Random] = None) -> Decomposition:
    """Krull–Schmidt decomposition via Fitting's lemma.

    `rng` optionally shuffles the candidate search order; by Krull–Schmidt
    the resulting summand multiset is the same for every order.  When the
    module carries verified `summands` block metadata, the blocks are
    decomposed independently.
    """
    f = M.algebra.field
    work: list[tuple[Module, Matrix]] = []

    def push(X: Module, emb: Matrix):
        blocks = _verified_blocks(X)
        if blocks is None:
            work.append((X, emb))
            return
        off = 0
        for Z in blocks:
            if Z.dim:
                push(Z, emb @ _window(f, X.dim, off, Z.dim))
            off += Z.dim

    if M.dim:
        push(M, Matrix.identity(f, M.dim))
    pieces: list[tuple[Module, Matrix]] = []
    while work:
        X, emb = work.pop(0)
        ends = hom_basis(X, X)
        if len(ends) == 1 or X._cache.get("indecomposable"):
            X._cache["indecomposable"] = True
            pieces.append((X, emb))
            continue
        split = None
        for cand in _split_candidates(ends, rng):
            try:
                eigs = eigenvalues_in_field(cand)
            except Exception:
                continue
            for lam in eigs:
                g = cand - Matrix.identity(f, X.dim).scale(lam)
                split = _fitting_split(X, g)
                if split is not None:
                    break
            if split is not None:
                break
        if split is None:
            if _certify_indecomposable(X, ends):
                X._cache["indecomposable"] = True
                pieces.append((X, emb))
                continue
            raise DecompositionInconclusive(
                f"no splitting candidate found for a dim-{X.dim} factor "
                f"with End of dim {len(ends)}")
        (K, ik), (I, ii) = split
        work.append((K, emb @ ik))
        work.append((I, emb @ ii))
    # group by isomorphism, preserving discovery order
    copies: list[tuple[Module, int]] = []
    for X, _ in pieces:
        for idx, (rep, mult) in enumerate(copies):
            if iso(X, rep):
                copies[idx] = (rep, mult + 1)
                break
        else:
            copies.append((X, 1))
    if pieces:
        Sum, _, _ = direct_sum([X for X, _ in pieces])
        wit_mat = pieces[0][1]
        for _, e in pieces[1:]:
            wit_mat = wit_mat.hstack(e)
        witness = Morphism(Sum, M, wit_mat)
    else:
        witness = None
    return Decomposition(copies, [X for X, _ in pieces], witness)


#### transpose and τ⁻ ###################################################


def transpose(M: Module) -> Module:
    """Tr(M) = coker(Hom(P_0, A) → Hom(P_1, A)) over the opposite algebra."""
    A = M.algebra
    cover0 = _cover_data(M)
    K, incl = kernel(cover0)
    if K.dim == 0:
        return zero_module(opposite(A))
    cover1 = projective_cover(K)
    d = compose(cover1, incl)  # P_1 → P_0
    Q0, basis0 = _hom_to_regular(cover0.source)
    Q1, basis1 = _hom_to_regular(cover1.source)
    if Q1.dim == 0:
        return zero_module(opposite(A))
    f = A.field
    flat1 = [h.matrix.flatten() for h in basis1]
    solver = SpanSolver(f, flat1, len(flat1[0]))
    cols = []
    for psi in basis0:
        coords = solver.coords((psi.matrix @ d.matrix).flatten())
        assert coords is not None
        cols.append(coords)
    if Q0.dim:
        hom_d = Morphism(Q0, Q1, Matrix.from_columns(f, cols))
    else:
        hom_d = zero_morphism(Q0, Q1)
    return cokernel(hom_d)[0]


def tau_inv(M: Module) -> Module:
    """τ⁻¹(M) = Tr(D(M))."""
    return transpose(dual(M))


#### corner transport ####################################################


def corner_transport(data: CornerData, X: Module) -> Module:
    """The eAe-module e·X for a corner (eAe, e) of the parent algebra."""
    parent = data.parent
    if X.algebra is not parent:
        raise AlgebraMismatch("module does not live over the corner's parent")
    f = parent.field
    e_mat = X.act_elem(data.e)
    V = row_space_basis(f, e_mat.transpose().data, X.dim)
    d = len(V)
    if d == 0:
        return zero_module(data.corner)
    solver = SpanSolver(f, V, X.dim)
    action = []
    for b in data.basis:
        bm = X.act_elem(b)
        cols = []
        for v in V:
            coords = solver.coords(bm.apply(v))
            assert coords is not None, "corner action leaves e·X"
            cols.append(coords)
        action.append(Matrix.from_columns(f, cols))
    return Module(data.corner, d, action)


#### JSON ###############################################################


def module_to_json(M: Module, algebra_ref=None) -> dict:
    f = M.algebra.field
    return {
        "algebra": algebra_ref if algebra_ref is not None
        else algebra_to_json(M.algebra),
        "dim": M.dim,
        "action": [[[_scalar_to_json(f, x) for x in row] for row in mat.data]
                   for mat in M.action],
    }


def module_from_json(d: dict, algebra: Optional[Algebra] = None,
                     loader: Optional[Callable] = None) -> Module:
    if algebra is None:
        ref = d["algebra"]
        if isinstance(ref, dict):
            algebra = algebra_from_json(ref)
        else:
            if loader is None:
                raise ValueError("algebra reference needs a loader")
            algebra = loader(ref)
    f = algebra.field
    m = int(d["dim"])
    mats = []
    for rows in d["action"]:
        mats.append(Matrix(f, [[_scalar_from_json(f, x) for x in row]
                               for row in rows], m, m))
    return Module(algebra, m, mats)
