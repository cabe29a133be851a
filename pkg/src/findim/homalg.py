"""Resolutions, Ext groups, and minimal add(Y)-approximation sequences.

Resolutions iterate minimal projective covers / injective envelopes.
Right approximations start from the Hom-basis evaluation Y^d → X and
greedily strip indecomposable source summands while the induced map on
Hom(Y, −) stays surjective; by Krull–Schmidt the result is right-minimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import NotGenerated
from .exactla import Matrix, SpanSolver, kernel_basis, rank, row_space_basis
from .modrep import (
    Module,
    Morphism,
    cokernel,
    compose,
    decompose,
    direct_sum,
    dual,
    hom_basis,
    injective_envelope,
    kernel,
    projective_cover,
    zero_module,
    zero_morphism,
)

#### result values #######################################################


@dataclass(frozen=True)
class Finite:
    """An exactly determined homological dimension."""

    value: int

    def __repr__(self):
        return f"Finite({self.value})"


@dataclass(frozen=True)
class AtLeast:
    """A dimension not resolved within the cap: ≥ value."""

    value: int

    def __repr__(self):
        return f"AtLeast({self.value})"


DEFAULT_CAP = 64


#### resolutions #########################################################


@dataclass
class ResolutionSegment:
    """An initial segment of a minimal (co)resolution.

    For direction "projective": modules = [P_0, …, P_ℓ], maps[0] is the
    augmentation P_0 → M and maps[k] is d_k: P_k → P_{k−1}.  For
    "injective" the arrows run M → E_0 → E_1 → ….  `complete` records
    whether the resolution terminated (next kernel/cokernel zero) within
    the requested length; length_achieved is then the actual length.
    """

    direction: str
    modules: list[Module]
    maps: list[Morphism]
    minimal: bool
    length_requested: int
    length_achieved: int
    complete: bool = False


def min_proj_resolution(M: Module, length: int) -> ResolutionSegment:
    cover = projective_cover(M)
    modules = [cover.source]
    maps: list[Morphism] = [cover]
    K, incl = kernel(cover)
    achieved, complete = length, False
    if K.dim == 0:
        achieved, complete = 0, True
    else:
        for k in range(1, length + 1):
            cov = projective_cover(K)
            modules.append(cov.source)
            maps.append(compose(cov, incl))
            K, incl = kernel(cov)
            if K.dim == 0:
                achieved, complete = k, True
                break
    return ResolutionSegment("projective", modules, maps, True, length,
                             achieved, complete)


def min_inj_resolution(M: Module, length: int) -> ResolutionSegment:
    env = injective_envelope(M)
    modules = [env.target]
    maps: list[Morphism] = [env]
    C, pr = cokernel(env)
    achieved, complete = length, False
    if C.dim == 0:
        achieved, complete = 0, True
    else:
        for k in range(1, length + 1):
            nxt = injective_envelope(C)
            modules.append(nxt.target)
            maps.append(compose(pr, nxt))
            C, pr = cokernel(nxt)
            if C.dim == 0:
                achieved, complete = k, True
                break
    return ResolutionSegment("injective", modules, maps, True, length,
                             achieved, complete)


def check_resolution(seg: ResolutionSegment) -> list[str]:
    """Complex + exactness failures of a resolution segment."""
    failures = []
    proj = seg.direction == "projective"
    for k in range(1, len(seg.maps)):
        a, b = seg.maps[k], seg.maps[k - 1]
        comp = b.matrix @ a.matrix if proj else a.matrix @ b.matrix
        if not comp.is_zero():
            failures.append(f"maps {k - 1},{k} do not compose to zero")
        # exactness at the interior node modules[k−1]
        node = seg.modules[k - 1].dim
        into = rank(a.matrix) if proj else rank(b.matrix)
        outof = rank(b.matrix) if proj else rank(a.matrix)
        if into != node - outof:
            failures.append(f"not exact at step {k}")
    return failures


#### Ext groups ##########################################################


@dataclass
class ExtResult:
    dim: int
    cocycles: list[Morphism] = dc_field(default_factory=list)
    route: str = "projective"


def _coordinate_map(src_homs: list[Morphism], tgt_homs: list[Morphism],
                    images: list[Matrix], field) -> Matrix:
    """Matrix of a linear map between Hom spaces in the given bases."""
    if not tgt_homs:
        return Matrix.zeros(field, 0, len(src_homs))
    flat = [h.matrix.flatten() for h in tgt_homs]
    solver = SpanSolver(field, flat, len(flat[0]))
    cols = []
    for img in images:
        coords = solver.coords(img.flatten())
        assert coords is not None, "differential leaves the Hom space"
        cols.append(coords)
    if not cols:
        return Matrix.zeros(field, len(tgt_homs), 0)
    return Matrix.from_columns(field, cols)


def ext(M: Module, N: Module, i: int, route: str = "projective") -> ExtResult:
    """Ext^i_A(M, N) with a cocycle basis (representatives mod coboundaries)."""
    if i < 0:
        raise ValueError("ext needs i ≥ 0")
    f = M.algebra.field
    if M.dim == 0 or N.dim == 0:
        return ExtResult(0, [], route)
    if route == "projective":
        seg = min_proj_resolution(M, i + 1)
        terms = seg.modules

        def hom_at(k):
            return hom_basis(terms[k], N) if k < len(terms) else []

        def delta(k, src):  # Hom(P_k, N) → Hom(P_{k+1}, N): φ ↦ φ∘d_{k+1}
            tgt = hom_at(k + 1)
            if k + 1 >= len(terms):
                return Matrix.zeros(f, 0, len(src)), tgt
            D = seg.maps[k + 1].matrix
            images = [h.matrix @ D for h in src]
            return _coordinate_map(src, tgt, images, f), tgt
    elif route == "injective":
        seg = min_inj_resolution(N, i + 1)
        terms = seg.modules

        def hom_at(k):
            return hom_basis(M, terms[k]) if k < len(terms) else []

        def delta(k, src):  # Hom(M, E_k) → Hom(M, E_{k+1}): φ ↦ d^{k+1}∘φ
            tgt = hom_at(k + 1)
            if k + 1 >= len(terms):
                return Matrix.zeros(f, 0, len(src)), tgt
            D = seg.maps[k + 1].matrix
            images = [D @ h.matrix for h in src]
            return _coordinate_map(src, tgt, images, f), tgt
    else:
        raise ValueError(f"unknown route {route!r}")

    homs_i = hom_at(i)
    if not homs_i:
        return ExtResult(0, [], route)
    d_i, _ = delta(i, homs_i)
    cocycle_coords = kernel_basis(d_i)
    if i == 0:
        image_span: list[list] = []
    else:
        homs_prev = hom_at(i - 1)
        d_prev, _ = delta(i - 1, homs_prev)
        # d_prev is expressed in the homs_i basis directly
        image_span = row_space_basis(f, d_prev.transpose().data, len(homs_i))
    dim = len(cocycle_coords) - len(image_span)
    reps = []
    accepted = list(image_span)
    solver = SpanSolver(f, accepted, len(homs_i))
    base_rank = solver.rank
    for v in cocycle_coords:
        if not solver.contains(v):
            accepted.append(v)
            solver = SpanSolver(f, accepted, len(homs_i))
            mat = Matrix.zeros(f, homs_i[0].matrix.rows,
                               homs_i[0].matrix.cols)
            for t, c in enumerate(v):
                if c:
                    mat = mat + homs_i[t].matrix.scale(c)
            reps.append(Morphism(homs_i[0].source, homs_i[0].target, mat))
    assert len(reps) == dim
    return ExtResult(dim, reps, route)


def proj_dim(M: Module, cap: int = DEFAULT_CAP):
    if M.dim == 0:
        return Finite(0)
    seg = min_proj_resolution(M, cap)
    return Finite(seg.length_achieved) if seg.complete else AtLeast(cap)


def inj_dim(M: Module, cap: int = DEFAULT_CAP):
    if M.dim == 0:
        return Finite(0)
    seg = min_inj_resolution(M, cap)
    return Finite(seg.length_achieved) if seg.complete else AtLeast(cap)


#### approximations ######################################################


def right_approx(Y: Module, X: Module) -> Morphism:
    """Minimal right add(Y)-approximation e: Y' → X.

    The returned morphism carries .pieces = [(indec module, map to X)]
    describing the minimal source decomposition.
    """
    f = Y.algebra.field
    homs = hom_basis(Y, X)
    if not homs or X.dim == 0:
        e = zero_morphism(zero_module(Y.algebra), X)
        e.pieces = []
        return e
    d = len(homs)
    hom_solver = SpanSolver(f, [h.matrix.flatten() for h in homs],
                            Y.dim * X.dim)
    dec = decompose(Y)
    # source pieces: every hom Y → X restricted along each indec embedding
    pieces: list[tuple[Module, Morphism]] = []
    offset = 0
    emb = dec.witness  # ⊕pieces → Y
    for Z in dec.pieces:
        cols = [emb.matrix.col(offset + t) for t in range(Z.dim)]
        incl = Morphism(Z, Y, Matrix.from_columns(f, cols))
        for h in homs:
            pieces.append((Z, compose(incl, h)))
        offset += Z.dim
    # Hom(Y, Z) bases once per distinct piece object; express the composite
    # Y → Z → X in Hom(Y, X)-coordinates so the greedy strip is cheap
    hom_to_piece: dict[int, list[Morphism]] = {}
    for Z, _ in pieces:
        if id(Z) not in hom_to_piece:
            hom_to_piece[id(Z)] = hom_basis(Y, Z)
    piece_vecs: list[list[list]] = []
    for Z, comp in pieces:
        vecs = []
        for g in hom_to_piece[id(Z)]:
            coords = hom_solver.coords((comp.matrix @ g.matrix).flatten())
            assert coords is not None
            vecs.append(coords)
        piece_vecs.append(vecs)

    def span_rank(active: list[int]) -> int:
        vecs = [v for idx in active for v in piece_vecs[idx]]
        return len(row_space_basis(f, vecs, d)) if vecs else 0

    active = list(range(len(pieces)))
    full = span_rank(active)
    changed = True
    while changed:
        changed = False
        for idx in list(active):
            trial = [t for t in active if t != idx]
            if span_rank(trial) == full:
                active = trial
                changed = True
    if not active:
        e = zero_morphism(zero_module(Y.algebra), X)
        e.pieces = []
        return e
    kept = [pieces[idx] for idx in active]
    source, _, _ = direct_sum([Z for Z, _ in kept])
    mat = kept[0][1].matrix
    for _, comp in kept[1:]:
        mat = mat.hstack(comp.matrix)
    e = Morphism(source, X, mat)
    e.pieces = kept
    return e


def left_approx(Y: Module, X: Module) -> Morphism:
    """Minimal left add(Y)-approximation X → Y' (dual construction)."""
    e = right_approx(dual(Y), dual(X))
    target = dual(e.source)
    out = Morphism(X, target, e.matrix.transpose())
    out.target_pieces = [dual(Z) for Z, _ in e.pieces]
    return out


@dataclass
class ApproxSequence:
    """… → Y_1 → Y_0 → X → 0 by iterated minimal right approximations.

    maps[k]: Y_k → Y_{k−1} are complex maps (maps[0] lands in X);
    raw[k]: Y_k → K_{k−1} are the underlying surjective approximations
    onto the successive kernels (K_{−1} = X).
    """

    target: Module
    approximant: Module
    terms: list[Module]
    maps: list[Morphism]
    length: int
    kernels: list[Module] = dc_field(default_factory=list)
    raw: list[Morphism] = dc_field(default_factory=list)
    complete: bool = False


def approx_sequence(Y: Module, X: Module, length: int) -> ApproxSequence:
    """Iterate minimal right add(Y)-approximations on successive kernels.

    Raises NotGenerated as soon as an approximation fails to be surjective
    (the sequence would not be exact).
    """
    terms: list[Module] = []
    maps: list[Morphism] = []
    raw: list[Morphism] = []
    kernels: list[Module] = []
    cur = X
    incl: Optional[Morphism] = None
    complete = False
    for step in range(length + 1):
        if cur.dim == 0:
            complete = True
            break
        e = right_approx(Y, cur)
        if rank(e.matrix) < cur.dim:
            raise NotGenerated(
                f"approximation at step {step} is not surjective")
        terms.append(e.source)
        raw.append(e)
        maps.append(e if incl is None else compose(e, incl))
        K, kincl = kernel(e)
        kernels.append(K)
        cur, incl = K, kincl
    return ApproxSequence(X, Y, terms, maps, len(terms), kernels, raw,
                          complete)


def check_hom_exact(seq: ApproxSequence) -> list[str]:
    """Failures of Hom(Y, −)-exactness of the approximation sequence.

    Since every raw step Y_k → K_{k−1} is surjective, exactness of the
    Hom(Y, −) complex is equivalent to Hom(Y, Y_k) → Hom(Y, K_{k−1})
    being surjective at every stage; checked by rank.
    """
    Y = seq.approximant
    f = Y.algebra.field
    failures = []
    prev = seq.target
    for k, e in enumerate(seq.raw):
        want = len(hom_basis(Y, prev))
        vecs = [(e.matrix @ g.matrix).flatten()
                for g in hom_basis(Y, e.source)]
        got = len(row_space_basis(f, vecs, Y.dim * prev.dim)) if vecs else 0
        if got != want:
            failures.append(f"Hom(Y,−) not exact at stage {k}")
        prev = seq.kernels[k]
    return failures
