"""Bound quiver algebras and the two named algebra families.

Path composition is written order: the path "a*b" means "traverse a, then
b", and is composable iff target(a) = source(b).  Products in the quotient
algebra are concatenation followed by per-degree linear reduction modulo
the two-sided ideal generated by the (homogeneous) relations.

The per-degree reduction eliminates lexicographically larger paths, so the
surviving basis of each degree consists of the lex-smallest representatives
of its path classes.  Because each degree is handled as one exact linear
quotient, non-confluent rewriting overlaps (three distinct normal-form
words in one 1-dimensional degree component) are resolved correctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import Algebra, _scalar_from_json, _scalar_to_json
from .errors import (
    DegreeCapExceeded,
    MalformedInput,
    NonHomogeneousRelation,
)
from .exactla import Field, QQ, _rref_rows, field_from_json, field_to_json

#### quiver data ########################################################


@dataclass(frozen=True)
class Arrow:
    label: str
    src: str
    tgt: str


@dataclass
class Quiver:
    vertices: list[str]
    arrows: list[Arrow]


# A relation is a list of (coefficient, path) terms; each path is the
# sequence of arrow labels traversed in written order.
Relation = list


def make_quiver(vertices: Sequence, arrows: Sequence[tuple]) -> Quiver:
    vs = [str(v) for v in vertices]
    ars = [Arrow(str(lbl), str(src), str(tgt)) for (lbl, src, tgt) in arrows]
    Q = Quiver(vs, ars)
    _check_quiver(Q)
    return Q


def _check_quiver(Q: Quiver):
    if len(set(Q.vertices)) != len(Q.vertices):
        raise MalformedInput("duplicate vertex labels")
    labels = [a.label for a in Q.arrows]
    if len(set(labels)) != len(labels):
        raise MalformedInput("duplicate arrow labels")
    vset = set(Q.vertices)
    for a in Q.arrows:
        if a.src not in vset or a.tgt not in vset:
            raise MalformedInput(f"arrow {a.label} has unknown endpoint")


#### relation validation ################################################


def _parse_relations(Q: Quiver, rels: Sequence[Relation], field: Field):
    """Group validated relations by path length; values are sparse rows."""
    by_label = {a.label: a for a in Q.arrows}
    out: dict[int, list[dict[tuple, object]]] = {}
    for rel in rels:
        row: dict[tuple, object] = {}
        length: Optional[int] = None
        ends: Optional[tuple] = None
        for coeff, path in rel:
            path = tuple(str(s) for s in path)
            for lbl in path:
                if lbl not in by_label:
                    raise MalformedInput(f"unknown arrow label {lbl!r}")
            for a, b in zip(path, path[1:]):
                if by_label[a].tgt != by_label[b].src:
                    raise MalformedInput(
                        f"path {'*'.join(path)} is not composable")
            if len(path) < 2:
                raise NonHomogeneousRelation(
                    "relation term of length < 2 (not in the arrow-ideal square)")
            if length is None:
                length = len(path)
                ends = (by_label[path[0]].src, by_label[path[-1]].tgt)
            elif len(path) != length:
                raise NonHomogeneousRelation("relation mixes path lengths")
            elif ends != (by_label[path[0]].src, by_label[path[-1]].tgt):
                raise NonHomogeneousRelation("relation mixes path endpoints")
            c = field.of(coeff)
            acc = field.add(row.get(path, field.zero()), c)
            if acc:
                row[path] = acc
            else:
                row.pop(path, None)
        if row:
            out.setdefault(length, []).append(row)
    return out


#### the per-degree quotient ############################################

_PATH_SPACE_LIMIT = 200_000


def bound_quiver_algebra(Q: Quiver, rels: Sequence[Relation],
                         degree_cap: int = 64, field: Field = QQ) -> Algebra:
    """Quotient of the path algebra of Q by homogeneous relations.

    Returns an Algebra whose basis is, degree by degree, the set of
    lex-smallest path representatives of the quotient; idempotents are the
    vertex classes and the structural radical is the arrow-ideal part.
    """
    _check_quiver(Q)
    rel_rows = _parse_relations(Q, rels, field)
    by_label = {a.label: a for a in Q.arrows}
    out_of = {}  # vertex → arrows with that source
    for a in Q.arrows:
        out_of.setdefault(a.src, []).append(a)

    # per-degree data: surviving paths and residue maps
    # degree 1 survives untouched (relations live in degree ≥ 2)
    deg_paths: list[list[tuple]] = [
        [()], sorted((a.label,) for a in Q.arrows)]
    residues: list[dict[tuple, list[tuple[int, object]]]] = [
        {}, {p: [(i, field.one())] for i, p in enumerate(deg_paths[1])}]
    path_ends = {(a.label,): (a.src, a.tgt) for a in Q.arrows}

    prev_paths = [((a.label,), a.src, a.tgt) for a in Q.arrows]
    prev_ideal: list[dict[tuple, object]] = []
    d = 1
    while prev_paths:
        d += 1
        if d > degree_cap:
            raise DegreeCapExceeded(
                f"dimension not stabilized by degree {degree_cap}")
        cur = []
        for (labels, src, tgt) in prev_paths:
            for a in out_of.get(tgt, ()):
                cur.append((labels + (a.label,), src, a.tgt))
        if len(cur) > _PATH_SPACE_LIMIT:
            raise DegreeCapExceeded(
                f"path space exceeded {_PATH_SPACE_LIMIT} entries at degree {d}")
        cur.sort(key=lambda t: t[0])
        if not cur:
            break
        for labels, src, tgt in cur:
            path_ends[labels] = (src, tgt)
        # ideal component: arrows·I_{d-1} + I_{d-1}·arrows + relations of length d
        sparse_rows: list[dict[tuple, object]] = []
        for row in prev_ideal:
            for a in Q.arrows:
                pre = {(a.label,) + p: c for p, c in row.items()
                       if path_ends[p][0] == a.tgt}
                if pre:
                    sparse_rows.append(pre)
                post = {p + (a.label,): c for p, c in row.items()
                        if path_ends[p][1] == a.src}
                if post:
                    sparse_rows.append(post)
        sparse_rows.extend(rel_rows.get(d, []))
        # eliminate in descending lex order so lex-smallest paths survive
        desc = [t[0] for t in reversed(cur)]
        col = {p: i for i, p in enumerate(desc)}
        m = len(desc)
        dense = []
        for row in sparse_rows:
            r = list(field.zero_row(m))
            for p, c in row.items():
                r[col[p]] = c
            dense.append(r)
        reduced, pivots = _rref_rows(field, dense, m) if dense else ([], [])
        pivot_paths = {desc[j] for j in pivots}
        survivors = [t[0] for t in cur if t[0] not in pivot_paths]
        surv_index = {p: i for i, p in enumerate(survivors)}
        res: dict[tuple, list[tuple[int, object]]] = {
            p: [(surv_index[p], field.one())] for p in survivors}
        for rowi, j in enumerate(pivots):
            entry = []
            for jj, c in enumerate(reduced[rowi]):
                if jj != j and c:
                    entry.append((surv_index[desc[jj]], field.neg(c)))
            res[desc[j]] = entry
        if not survivors:
            break
        deg_paths.append(survivors)
        residues.append(res)
        prev_ideal = [{desc[jj]: c for jj, c in enumerate(reduced[i]) if c}
                      for i in range(len(pivots))]
        prev_paths = cur

    return _assemble(Q, field, deg_paths, residues, path_ends)


def _assemble(Q: Quiver, field: Field, deg_paths, residues, path_ends) -> Algebra:
    # global basis: vertices in given order, then paths by degree, lex
    entries: list[tuple[int, object]] = [(0, v) for v in Q.vertices]
    for d in range(1, len(deg_paths)):
        entries.extend((d, p) for p in deg_paths[d])
    index = {key: i for i, key in enumerate(entries)}
    n = len(entries)
    labels = []
    degrees = []
    for (d, key) in entries:
        degrees.append(d)
        labels.append(f"e_{key}" if d == 0 else "*".join(key))

    def ends(d, key):
        return (key, key) if d == 0 else path_ends[key]

    max_deg = len(deg_paths) - 1
    sc = []
    for i, (da, ka) in enumerate(entries):
        for j, (db, kb) in enumerate(entries):
            if ends(da, ka)[1] != ends(db, kb)[0]:
                continue
            if da == 0:
                sc.append((i, j, j, field.one()))
            elif db == 0:
                sc.append((i, j, i, field.one()))
            else:
                dd = da + db
                if dd > max_deg:
                    continue
                for (si, c) in residues[dd][ka + kb]:
                    sc.append((i, j, index[(dd, deg_paths[dd][si])], c))

    one, zero = field.one(), field.zero()

    def unit_vec(i):
        return [one if t == i else zero for t in range(n)]

    idempotents = [unit_vec(index[(0, v)]) for v in Q.vertices]
    unit = [one if d == 0 else zero for (d, _) in entries]
    radical = [unit_vec(i) for i, (d, _) in enumerate(entries) if d >= 1]
    A = Algebra(field, n, labels, sc, unit, idempotents, radical_basis=radical)
    A._cache["degrees"] = degrees
    A._cache["vertex_of_idempotent"] = list(Q.vertices)
    return A


#### named families #####################################################


def linear_quiver_algebra(n: int, field: Field = QQ) -> Algebra:
    """The (2n+1)-vertex algebra with arrows β_i: i+1 → i and the single
    unbound length-2 path β_{n+1}β_n."""
    if n < 3:
        raise ValueError("linear quiver family needs n ≥ 3")
    vertices = [str(v) for v in range(1, 2 * n + 2)]
    arrows = [(f"b{i}", str(i + 1), str(i)) for i in range(1, 2 * n + 1)]
    Q = make_quiver(vertices, arrows)
    rels = [[(1, [f"b{i + 1}", f"b{i}"])]
            for i in range(1, 2 * n) if i != n]
    A = bound_quiver_algebra(Q, rels, degree_cap=4, field=field)
    A._cache["linear_quiver_n"] = n
    return A


def liu_schulz(q=2) -> Algebra:
    """The 8-dimensional local symmetric algebra on generators x_0, x_1, x_2
    with x_i² = 0 and x_{i+1}x_i + q·x_ix_{i+1} = 0 (indices mod 3).

    Basis: 1, x_0, x_1, x_2, x_0x_1, x_1x_2, x_2x_0, x_0x_1x_2.  The three
    degree-3 words x_0x_1x_2, x_1x_2x_0, x_2x_0x_1 coincide, and the socle
    is spanned by that product.
    """
    q = QQ.of(q)
    if not q:
        raise ValueError("q must be nonzero")
    labels = ["1", "x_0", "x_1", "x_2", "x_0x_1", "x_1x_2", "x_2x_0",
              "x_0x_1x_2"]
    one = QQ.one()
    nq = QQ.neg(q)
    sc = [(0, 0, 0, one)]
    for j in range(1, 8):
        sc.append((0, j, j, one))
        sc.append((j, 0, j, one))
    sc += [
        # degree 1 · degree 1
        (1, 2, 4, one), (2, 3, 5, one), (3, 1, 6, one),
        (2, 1, 4, nq), (3, 2, 5, nq), (1, 3, 6, nq),
        # x_i · y_{i+1} = z (y_j spans the degree-2 slot 4+j)
        (1, 5, 7, one), (2, 6, 7, one), (3, 4, 7, one),
        # y_j · x_{j+2} = z
        (4, 3, 7, one), (5, 1, 7, one), (6, 2, 7, one),
    ]
    unit = [one] + [QQ.zero()] * 7
    radical = [[one if t == i else QQ.zero() for t in range(8)]
               for i in range(1, 8)]
    A = Algebra(QQ, 8, labels, sc, unit, [unit], radical_basis=radical)
    A._cache["degrees"] = [0, 1, 1, 1, 2, 2, 2, 3]
    A._cache["liu_schulz_q"] = q
    return A


def liu_schulz_quiver(q=2) -> Algebra:
    """The same algebra presented as a bound quiver (independent route)."""
    q = QQ.of(q)
    if not q:
        raise ValueError("q must be nonzero")
    Q = make_quiver(["v"], [("x_0", "v", "v"), ("x_1", "v", "v"),
                            ("x_2", "v", "v")])
    rels = []
    for i in range(3):
        xi, xj = f"x_{i}", f"x_{(i + 1) % 3}"
        rels.append([(1, [xi, xi])])
        rels.append([(1, [xj, xi]), (q, [xi, xj])])
    return bound_quiver_algebra(Q, rels, degree_cap=8)


#### JSON ###############################################################


def quiver_to_json(Q: Quiver, rels: Sequence[Relation], field: Field) -> dict:
    return {
        "vertices": list(Q.vertices),
        "arrows": [{"label": a.label, "src": a.src, "tgt": a.tgt}
                   for a in Q.arrows],
        "relations": [[{"coeff": _scalar_to_json(field, field.of(c)),
                        "path": [str(s) for s in path]}
                       for (c, path) in rel] for rel in rels],
        "field": field_to_json(field),
    }


def quiver_from_json(d: dict) -> tuple[Quiver, list, Field]:
    try:
        field = field_from_json(d["field"])
        Q = make_quiver(d["vertices"],
                        [(a["label"], a["src"], a["tgt"])
                         for a in d["arrows"]])
        rels = [[(_scalar_from_json(field, t["coeff"]), list(t["path"]))
                 for t in rel] for rel in d.get("relations", [])]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad quiver JSON: {exc}") from exc
    return Q, rels, field
