"""Tail extensions: attach a fresh sink vertex behind an independent set of
multipaths and adjoin the connecting element q_F.  One bounded step of the
construction is materialized as a finite-dimensional coalgebra; the
annihilator identity that makes cyclic coideals embed is verified per
instance rather than assumed."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .coalgebra import (CoalgebraError, ClosureBoundError, Coideal,
                        CoidealError, Element, Functional, InternalCheckError,
                        Subcoalgebra, act, coideal_generated, comultiply,
                        convolve, delta_left_groups, element_sort_key,
                        independent_reduce, is_full_multipath,
                        multipath_basis, multipath_hull, subcoalgebra_closure)
from .qcf import EmbeddingCertificate, MorphismMatrix, _certify
from .quiver import Path, Quiver, reaches_cycle


class PoolError(CoalgebraError):
    """The reduction of a coideal needs an independent set outside the
    enumerated pool; carries the set that would be required."""

    def __init__(self, message: str, needed: list[Element]):
        super().__init__(message)
        self.needed = needed


def _is_independent(C: Subcoalgebra, F: list[Element]) -> bool:
    """Linearly independent, and no member lies in the coideal generated by
    another member."""
    vecs = [C.vector(x) for x in F]
    if any(v is None for v in vecs) or linalg.rank(C.field, vecs) != len(F):
        return False
    for x in F:
        gen = coideal_generated(C, x, "right")
        for y in F:
            if y is not x and gen.contains(y):
                return False
    return True


def _normalize(C: Subcoalgebra, x: Element) -> Element:
    c = x.terms[x.leading_path]
    return x if c == C.field.one else x.scale(C.field.inv(c))


def multipath_pool(C: Subcoalgebra, pool_maxlen: int) -> list[Element]:
    """Full multipaths of C with support length at most pool_maxlen, scaled
    to leading coefficient one, in canonical order."""
    pool = [m for m in multipath_basis(C)
            if is_full_multipath(m) and m.max_support_len() <= pool_maxlen]
    return sorted((_normalize(C, m) for m in pool), key=element_sort_key)


def enumerate_independent_sets(C: Subcoalgebra, pool_maxlen: int,
                               max_size: int) -> list[list[Element]]:
    """All independent subsets of the multipath pool with 1..max_size
    members, ordered by (size, pool positions)."""
    pool = multipath_pool(C, pool_maxlen)
    out = []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(len(pool)), size):
            F = [pool[i] for i in combo]
            if _is_independent(C, F):
                out.append(F)
    return out


def set_serial(C: Subcoalgebra, F: list[Element]) -> str:
    """Canonical text form of an independent set, safe for use inside
    identifiers: '-' joins arrows in a path, ':' replaces '/', '*' attaches a
    coefficient, '&' joins terms, ';' joins members."""
    field = C.field
    members = []
    for x in F:
        terms = []
        for p in x.support():
            part = p.source if p.length == 0 else "-".join(p.arrows)
            c = x.terms[p]
            prefix = "" if c == field.one else field.format(c).replace("/", ":") + "*"
            terms.append(prefix + part)
        members.append("&".join(terms))
    return ";".join(members)


@dataclass
class TailExtension:
    base: Subcoalgebra
    members: list[Element]          # the independent set, canonical order
    vertex: str                     # the fresh sink e_F
    arrows: list[str]               # one fresh arrow per member, t(p_i) -> e_F
    quiver: Quiver                  # base quiver plus the fresh vertex/arrows
    q: Element                      # sum of p_i composed with the i-th arrow
    serial: str


def tail_extend(C: Subcoalgebra, F: list[Element]) -> TailExtension:
    """Attach a fresh vertex behind the members of F and build the element
    q_F = sum p_i alpha_i.  Fresh identifiers are derived from F's content so
    the construction is reproducible."""
    if not F:
        raise CoalgebraError("empty set: nothing to extend by")
    F = sorted((_normalize(C, x) for x in F), key=element_sort_key)
    for x in F:
        if not C.contains(x):
            raise CoalgebraError(f"set member {x} is not in the coalgebra")
        if not is_full_multipath(x):
            raise CoalgebraError(f"set member {x} is not a full multipath")
    if not _is_independent(C, F):
        raise CoalgebraError("set is not independent")
    serial = set_serial(C, F)
    taken = set(C.quiver.vertices) | set(C.quiver.arrow_map)
    vertex = "e" + serial
    while vertex in taken:
        vertex += "_"
    taken.add(vertex)
    arrows = []
    for i in range(len(F)):
        name = f"a{i + 1}" + serial
        while name in taken:
            name += "_"
        taken.add(name)
        arrows.append(name)
    targets = [x.leading_path.target for x in F]
    quiver = C.quiver.extended([vertex],
                               [(a, t, vertex) for a, t in zip(arrows, targets)])
    field = C.field
    terms: dict[Path, object] = {}
    for x, aname in zip(F, arrows):
        tail = quiver.arrow_path(aname)
        for p, c in x.terms.items():
            terms[p.compose(tail)] = c
    q = Element(quiver, field, terms)
    # shape of Delta(q): the full element against the sink, plus every proper
    # cut of each member against its suffix-with-tail
    expected: dict[tuple[Path, Path], object] = {}
    sink = Path.trivial(vertex)
    for p, c in q.terms.items():
        expected[(p, sink)] = field.add(expected.get((p, sink), field.zero), c)
    for x, aname in zip(F, arrows):
        tail = quiver.arrow_path(aname)
        for p, c in x.terms.items():
            for u, v in p.splittings():
                key = (u, v.compose(tail))
                expected[key] = field.add(expected.get(key, field.zero), c)
    if comultiply(q) != expected:
        raise InternalCheckError("q_F comultiplication has the wrong shape")
    targets_seen = {p.target for p in q.terms}
    if targets_seen != {vertex}:
        raise InternalCheckError("q_F is not target-homogeneous at the fresh vertex")
    return TailExtension(base=C, members=F, vertex=vertex, arrows=arrows,
                         quiver=quiver, q=q, serial=serial)


@dataclass
class BoundedTailClosure:
    base: Subcoalgebra
    pool_maxlen: int
    max_size: int
    level: int
    extensions: list[TailExtension]
    coalgebra: Subcoalgebra         # one bounded step, Delta-closed
    by_serial: dict[str, TailExtension] = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.by_serial:
            self.by_serial = {e.serial: e for e in self.extensions}

    def extension_for(self, F: list[Element]) -> TailExtension | None:
        FF = sorted((_normalize(self.base, x) for x in F), key=element_sort_key)
        return self.by_serial.get(set_serial(self.base, FF))


def tail_closure_step(C: Subcoalgebra, pool_maxlen: int,
                      max_size: int) -> BoundedTailClosure:
    """One bounded step: extend by every enumerated independent set, then
    close C's basis together with all the q_F under comultiplication."""
    sets = enumerate_independent_sets(C, pool_maxlen, max_size)
    extensions = [tail_extend(C, F) for F in sets]
    new_vertices = [e.vertex for e in extensions]
    new_arrows = [(a, e.quiver.arrow_map[a].source, e.vertex)
                  for e in extensions for a in e.arrows]
    quiver = C.quiver.extended(new_vertices, new_arrows)
    generators = [b.with_quiver(quiver) for b in C.basis]
    generators += [e.q.with_quiver(quiver) for e in extensions]
    bound = max(C.max_support_len(), pool_maxlen + 1)
    try:
        D = subcoalgebra_closure(quiver, generators, bound, field=C.field)
    except ClosureBoundError as exc:  # the bound covers every generator
        raise InternalCheckError(f"closure escaped its length bound: {exc}")
    for b in C.basis:
        if not D.contains(b.with_quiver(quiver)):
            raise InternalCheckError("base coalgebra escaped its tail closure")
    for v in C.quiver.vertices:
        if reaches_cycle(C.quiver, v) and not reaches_cycle(quiver, v):
            raise InternalCheckError("tail extension removed a cycle")
    return BoundedTailClosure(base=C, pool_maxlen=pool_maxlen,
                              max_size=max_size, level=1,
                              extensions=extensions, coalgebra=D)


def single_tail_closure(C: Subcoalgebra, F: list[Element]) -> BoundedTailClosure:
    """The bounded closure carrying just one extension: C together with q_F,
    closed under comultiplication."""
    ext = tail_extend(C, F)
    gens = [b.with_quiver(ext.quiver) for b in C.basis] + [ext.q]
    bound = max(C.max_support_len(), ext.q.max_support_len())
    try:
        D = subcoalgebra_closure(ext.quiver, gens, bound, field=C.field)
    except ClosureBoundError as exc:  # the bound covers every generator
        raise InternalCheckError(f"closure escaped its length bound: {exc}")
    pool = max(m.max_support_len() for m in ext.members)
    return BoundedTailClosure(base=C, pool_maxlen=pool, max_size=len(ext.members),
                              level=1, extensions=[ext], coalgebra=D)


@dataclass
class AnnihilatorReport:
    holds: bool
    annihilator_basis: list[Functional]       # {f : f -> q_F = 0}
    x_basis: list[Functional]                 # vanish on multipaths off the sink
    left_annihilator_basis: list[Functional]  # {f : f g = 0 for g in X}
    multipath_identity: bool
    note: str = ""


def _source_of_multipath(m: Element) -> str:
    return m.leading_path.source


def _functionals(C: Subcoalgebra, vecs: list[list]) -> list[Functional]:
    return [Functional(C, v) for v in vecs]


def annihilator_x_basis(D: Subcoalgebra, sink: str) -> list[Functional]:
    """Basis of the functionals vanishing on every multipath-basis member
    whose source is not the given vertex."""
    rows = [D.coordinates(m) for m in multipath_basis(D)
            if _source_of_multipath(m) != sink]
    return _functionals(D, linalg.nullspace(D.field, rows, ncols=D.dim))


def verify_annihilator_identity(D: Subcoalgebra,
                                ext: TailExtension) -> AnnihilatorReport:
    """Check, inside D, that the annihilator of q_F equals the left
    annihilator of X = {f : f kills every multipath not starting at e_F}.
    Also reports whether the left coideal of q_F is spanned by the multipath
    basis members ending at e_F."""
    field = D.field
    for name in sorted({a for p in ext.q.terms for a in p.arrows}):
        if name not in D.quiver.arrow_map:
            raise CoalgebraError(f"tail arrow {name} is missing from the coalgebra's quiver")
    q = ext.q.with_quiver(D.quiver)
    if not D.contains(q):
        raise CoalgebraError("q_F is not in the coalgebra")
    # I_F: f -> q = sum_u u . f(y_u) = 0 iff f kills every grouped cofactor
    rows = []
    for _, y in delta_left_groups(q):
        v = D.coordinates(y)
        if v is None:
            raise CoalgebraError("q_F's cuts escape the coalgebra; not Delta-closed")
        rows.append(v)
    i_basis = linalg.nullspace(field, rows, ncols=D.dim)
    x_basis = annihilator_x_basis(D, ext.vertex)
    lrows = []
    for g in x_basis:
        for b in D.basis:
            lrows.append(D.coordinates(act(g, b, "left")))
    lx_basis = linalg.nullspace(field, lrows, ncols=D.dim)
    holds = linalg.subspace_equal(field, i_basis, lx_basis)
    left_coideal = coideal_generated(D, q, "left")
    enders = [D.vector(m) for m in multipath_basis(D)
              if m.leading_path.target == ext.vertex]
    ident = linalg.subspace_equal(field,
                                  [D.vector(b) for b in left_coideal.basis],
                                  enders)
    note = "statement about this bounded closure only"
    return AnnihilatorReport(holds=holds,
                             annihilator_basis=_functionals(D, i_basis),
                             x_basis=x_basis,
                             left_annihilator_basis=_functionals(D, lx_basis),
                             multipath_identity=ident,
                             note=note)


def free_embedding_from_annihilator(D: Subcoalgebra, q: Element,
                                    X: list[Functional]) -> EmbeddingCertificate:
    """Realize the embedding of the cyclic coideal of q into a free module:
    each m in <q> is f_m -> q for some functional f_m, and the components
    m |-> f_m * g for g in X are well defined module morphisms whose joint
    map is injective.  Requires the annihilator identity for (q, X)."""
    field = D.field
    q = q.with_quiver(D.quiver) if q.quiver != D.quiver else q
    if not D.contains(q):
        raise CoalgebraError("q is not in the coalgebra")
    irows = [D.coordinates(y) for _, y in delta_left_groups(q)]
    if any(v is None for v in irows):
        raise CoalgebraError("q's cuts escape the coalgebra; not Delta-closed")
    i_basis = linalg.nullspace(field, irows, ncols=D.dim)
    lrows = []
    for g in X:
        if g.coalgebra is not D and g.coalgebra != D:
            raise CoalgebraError("X functional lives on a different coalgebra")
        for b in D.basis:
            lrows.append(D.coordinates(act(g, b, "left")))
    lx_basis = linalg.nullspace(field, lrows, ncols=D.dim)
    if not linalg.subspace_equal(field, i_basis, lx_basis):
        raise CoalgebraError("annihilator identity does not hold for this X")
    M = coideal_generated(D, q, "right")
    if M.dim == 0:
        return EmbeddingCertificate([], True, 0)
    # act-on-q matrix: column j is the j-th dual basis functional acting on q
    cols = [D.coordinates(act(D.dual_basis_functional(j), q, "left"))
            for j in range(D.dim)]
    solver = linalg.LinearSolver(field, cols)
    reps = []
    for m in M.basis:
        coeffs = solver.coordinates(D.coordinates(m))
        if coeffs is None:
            raise InternalCheckError("coideal member is not reachable from q")
        reps.append(Functional(D, coeffs))
    morphisms = [MorphismMatrix(M, [convolve(f, g) for f in reps]) for g in X]
    return _certify(D, M, morphisms)


@dataclass
class ContainmentReport:
    extension: TailExtension | None   # None for the zero coideal
    reduced_set: list[Element]
    coideal: Coideal                 # <q_F> inside the closure
    contained: bool
    witness: list[list]              # coordinates of I's basis in <q_F>'s basis


def embed_coideal_in_qF(closure: BoundedTailClosure,
                        I: Coideal) -> ContainmentReport:
    """Hull the coideal by full multipaths, reduce to an independent set,
    locate the matching tail extension in the closure, and verify membership
    of I inside the right coideal of its q_F."""
    C = closure.base
    if I.coalgebra is not C and I.coalgebra != C:
        raise CoalgebraError("coideal does not live in the closure's base")
    if I.side != "right":
        raise CoidealError("containment is a right-coideal statement")
    D = closure.coalgebra
    if I.dim == 0:
        zero = Coideal(D, "right", [])
        return ContainmentReport(extension=None, reduced_set=[], coideal=zero,
                                 contained=True, witness=[])
    hull = multipath_hull(C, I, "right")
    reduced = independent_reduce(C, list(hull.generators))
    reduced = sorted((_normalize(C, x) for x in reduced), key=element_sort_key)
    ext = closure.extension_for(reduced)
    if ext is None:
        raise PoolError(
            "pool parameters too small: no extension for the reduced set "
            + set_serial(C, reduced), reduced)
    qf_coideal = coideal_generated(D, ext.q.with_quiver(D.quiver), "right")
    witness = []
    for b in I.basis:
        coords = qf_coideal.coordinates(b.with_quiver(D.quiver))
        if coords is None:
            raise InternalCheckError(
                f"coideal member {b} escapes the cyclic coideal of q_F")
        witness.append(coords)
    return ContainmentReport(extension=ext, reduced_set=reduced,
                             coideal=qf_coideal, contained=True,
                             witness=witness)
