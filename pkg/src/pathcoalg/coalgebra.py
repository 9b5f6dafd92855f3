"""The path coalgebra of a quiver and its finite-dimensional subobjects.

For a path p, the comultiplication sums over all two-part factorizations
(trivial ends included) and the counit detects trivial paths.  Everything
here is a linear computation over an exact scalar field: membership and
closure questions are settled by row reduction, never numerically.

Side convention: "right" coideals I satisfy Delta(I) in I (x) C and are the
left C*-modules via f -> (f acts from the left); the left-side variants of
the sided operations are computed through the mirror functor (reverse all
arrows and swap source with target), not by duplicated code.
"""
from __future__ import annotations

from typing import Iterable

from . import linalg
from .linalg import LinearSolver
from .quiver import Path, Quiver, QuiverError


class CoalgebraError(ValueError):
    pass


class CoidealError(CoalgebraError):
    pass


class ClosureBoundError(CoalgebraError):
    pass


class InternalCheckError(RuntimeError):
    """A self-verification failed: a constructed certificate or closure does
    not satisfy its own defining equations.  Never caused by bad input."""


class Element:
    """Exact linear combination of paths of one ambient quiver."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver: Quiver, field, terms: dict[Path, object],
                 validate: bool = True):
        self.quiver = quiver
        self.field = field
        self.terms = {p: c for p, c in terms.items() if not field.is_zero(c)}
        if validate:
            quiver.require_valid()
            for p in self.terms:
                if not quiver.contains_path(p):
                    raise CoalgebraError(f"path {p} does not live in the quiver")

    @classmethod
    def zero(cls, quiver: Quiver, field) -> "Element":
        return cls(quiver, field, {}, validate=False)

    @classmethod
    def from_path(cls, quiver: Quiver, field, p: Path, coeff=None) -> "Element":
        return cls(quiver, field, {p: field.one if coeff is None else coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Path]:
        return sorted(self.terms, key=Path.sort_key)

    @property
    def leading_path(self) -> Path | None:
        return min(self.terms, key=Path.sort_key) if self.terms else None

    def coeff(self, p: Path):
        return self.terms.get(p, self.field.zero)

    def max_support_len(self) -> int:
        return max((p.length for p in self.terms), default=0)

    def add(self, other: "Element") -> "Element":
        assert other.field == self.field
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = self.field.add(terms.get(p, self.field.zero), c)
        return Element(self.quiver, self.field, terms, validate=False)

    def sub(self, other: "Element") -> "Element":
        return self.add(other.scale(self.field.neg(self.field.one)))

    def scale(self, c) -> "Element":
        f = self.field
        return Element(self.quiver, f, {p: f.mul(c, x) for p, x in self.terms.items()},
                       validate=False)

    def with_quiver(self, quiver: Quiver) -> "Element":
        """The same combination viewed in another quiver containing its paths."""
        return Element(quiver, self.field, dict(self.terms))

    def mirror(self, reversed_quiver: Quiver) -> "Element":
        return Element(reversed_quiver, self.field,
                       {p.reversed(): c for p, c in self.terms.items()}, validate=False)

    def split_by_target(self) -> dict[str, "Element"]:
        out: dict[str, dict] = {}
        for p, c in self.terms.items():
            out.setdefault(p.target, {})[p] = c
        return {v: Element(self.quiver, self.field, t, validate=False)
                for v, t in sorted(out.items())}

    def split_by_source(self) -> dict[str, "Element"]:
        out: dict[str, dict] = {}
        for p, c in self.terms.items():
            out.setdefault(p.source, {})[p] = c
        return {v: Element(self.quiver, self.field, t, validate=False)
                for v, t in sorted(out.items())}

    def __eq__(self, other) -> bool:
        return (isinstance(other, Element) and other.quiver == self.quiver
                and other.field == self.field and other.terms == self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.field
        return " + ".join(f"{f.format(c)} {p}"
                          for p, c in sorted(self.terms.items(),
                                             key=lambda it: it[0].sort_key()))

    def __repr__(self) -> str:
        return f"Element({self})"


def element_sort_key(x: Element):
    lp = x.leading_path
    lead = lp.sort_key() if lp is not None else (-1, ())
    return (lead, str(x))


def comultiply(x: Element) -> dict[tuple[Path, Path], object]:
    """Delta(x) as a map (left path, right path) -> coefficient.

    A length-L path contributes exactly L+1 tensor terms, one per splitting,
    including the two with a trivial end.
    """
    field = x.field
    out: dict[tuple[Path, Path], object] = {}
    for p, c in x.terms.items():
        for u, w in p.splittings():
            key = (u, w)
            out[key] = field.add(out.get(key, field.zero), c)
    return {k: v for k, v in out.items() if not field.is_zero(v)}


def counit(x: Element):
    """Sum of the coefficients of the trivial paths in x."""
    total = x.field.zero
    for p, c in x.terms.items():
        if p.is_trivial:
            total = x.field.add(total, c)
    return total


def delta_left_groups(x: Element) -> list[tuple[Path, Element]]:
    """Delta(x) grouped by the left path: pairs (u, y_u) with
    Delta(x) = sum_u u (x) y_u, in deterministic path order."""
    groups: dict[Path, dict[Path, object]] = {}
    for (u, w), c in comultiply(x).items():
        groups.setdefault(u, {})[w] = c
    return [(u, Element(x.quiver, x.field, groups[u], validate=False))
            for u in sorted(groups, key=Path.sort_key)]


def delta_right_groups(x: Element) -> list[tuple[Path, Element]]:
    """Delta(x) grouped by the right path: pairs (w, z_w) with
    Delta(x) = sum_w z_w (x) w."""
    groups: dict[Path, dict[Path, object]] = {}
    for (u, w), c in comultiply(x).items():
        groups.setdefault(w, {})[u] = c
    return [(w, Element(x.quiver, x.field, groups[w], validate=False))
            for w in sorted(groups, key=Path.sort_key)]


def _subword_closure(paths: Iterable[Path]) -> list[Path]:
    closed: set[Path] = set()
    for p in paths:
        closed |= p.subwords()
    return sorted(closed, key=Path.sort_key)


class Subcoalgebra:
    """Finite-dimensional subcoalgebra of a path coalgebra.

    The basis is held over a fixed coordinate path list (the subword closure
    of the basis supports, in path order).  Construction checks linear
    independence and Delta-closure by solving; monomial means every basis
    element is a single unit-coefficient path and the path set is closed
    under prefixes and suffixes.
    """

    def __init__(self, quiver: Quiver, field, basis: list[Element],
                 monomial: bool | None = None, validate: bool = True):
        quiver.require_valid()
        self.quiver = quiver
        self.field = field
        self.basis = list(basis)
        self.coord_paths = _subword_closure(p for b in self.basis for p in b.terms)
        self.path_index = {p: i for i, p in enumerate(self.coord_paths)}
        self.solver = LinearSolver(field, [self.vector(b) for b in self.basis])
        if monomial is None:
            monomial = self._detect_monomial()
        self.monomial = monomial
        self._mirror: Subcoalgebra | None = None
        self._left_groups: list[list[tuple[Path, list]]] | None = None
        if validate:
            self._validate()

    # -- constructors ------------------------------------------------------

    @classmethod
    def monomial_from_paths(cls, quiver: Quiver, field, paths: Iterable[Path]) -> "Subcoalgebra":
        ok, problems = validate_monomial(quiver, set(paths))
        if not ok:
            raise CoalgebraError(f"not a monomial basis: {problems[0]}")
        basis = [Element.from_path(quiver, field, p)
                 for p in sorted(set(paths), key=Path.sort_key)]
        return cls(quiver, field, basis, monomial=True, validate=False)

    @classmethod
    def from_span(cls, quiver: Quiver, field, elements: list[Element],
                  validate: bool = True) -> "Subcoalgebra":
        """Canonical (reduced row echelon) basis of the span of the given
        elements, ordered by leading path."""
        coord_paths = _subword_closure(p for x in elements for p in x.terms)
        index = {p: i for i, p in enumerate(coord_paths)}
        rows = []
        for x in elements:
            row = [field.zero] * len(coord_paths)
            for p, c in x.terms.items():
                row[index[p]] = c
            rows.append(row)
        basis = [Element(quiver, field,
                         {coord_paths[j]: c for j, c in enumerate(r)
                          if not field.is_zero(c)})
                 for r in linalg.row_reduce_basis(field, rows)]
        return cls(quiver, field, basis, validate=validate)

    # -- coordinates -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def max_support_len(self) -> int:
        return max((b.max_support_len() for b in self.basis), default=0)

    def vector(self, x: Element) -> list:
        """Coordinates of x over coord_paths; None if the support escapes."""
        row = [self.field.zero] * len(self.coord_paths)
        for p, c in x.terms.items():
            j = self.path_index.get(p)
            if j is None:
                return None
            row[j] = c
        return row

    def contains(self, x: Element) -> bool:
        v = self.vector(x)
        return v is not None and self.solver.contains(v)

    def coordinates(self, x: Element) -> list | None:
        """Coefficients of x over the stored basis, or None."""
        v = self.vector(x)
        if v is None:
            return None
        return self.solver.coordinates(v)

    def element_from_coords(self, coeffs: list) -> Element:
        out = Element.zero(self.quiver, self.field)
        for c, b in zip(coeffs, self.basis):
            if not self.field.is_zero(c):
                out = out.add(b.scale(c))
        return out

    # -- structure ---------------------------------------------------------

    def _detect_monomial(self) -> bool:
        paths = set()
        for b in self.basis:
            if len(b.terms) != 1:
                return False
            p, c = next(iter(b.terms.items()))
            if c != self.field.one:
                return False
            paths.add(p)
        ok, _ = validate_monomial(self.quiver, paths)
        return ok

    def path_basis(self) -> list[Path]:
        if not self.monomial:
            raise CoalgebraError("coalgebra is not monomial")
        return [next(iter(b.terms)) for b in self.basis]

    def support_vertices(self) -> list[str]:
        return sorted({v for b in self.basis for p in b.terms for v in p.vertices})

    def support_arrows(self) -> list[str]:
        return sorted({a for b in self.basis for p in b.terms for a in p.arrows})

    def gabriel_quiver(self) -> Quiver:
        """The quiver of vertices and arrows appearing in the path basis."""
        paths = self.path_basis()
        vertices = sorted({v for p in paths for v in p.vertices})
        names = {a for p in paths for a in p.arrows}
        arrows = [tuple(a) for a in self.quiver.arrows if a.name in names]
        return Quiver(vertices, arrows)

    def is_discrete(self) -> bool:
        """True iff every support path is trivial (Gabriel quiver has no arrows)."""
        return all(p.is_trivial for b in self.basis for p in b.terms)

    def _validate(self) -> None:
        if self.solver.rank != len(self.basis):
            raise CoalgebraError("basis is linearly dependent")
        for b in self.basis:
            for _, y in delta_left_groups(b):
                if not self.contains(y):
                    raise CoalgebraError(
                        f"not Delta-closed: right leg {y} of {b} escapes the span")
            for _, z in delta_right_groups(b):
                if not self.contains(z):
                    raise CoalgebraError(
                        f"not Delta-closed: left leg {z} of {b} escapes the span")
        for v in self.support_vertices():
            if not self.contains(Element.from_path(self.quiver, self.field,
                                                   Path.trivial(v))):
                raise CoalgebraError(f"support vertex {v!r} missing from the span")
        if self.monomial:
            ok, problems = validate_monomial(
                self.quiver, set(self.path_basis()))
            if not ok:
                raise CoalgebraError(f"not a monomial basis: {problems[0]}")

    # -- functionals and the mirror ----------------------------------------

    def dual_basis_functional(self, i: int) -> "Functional":
        coeffs = [self.field.zero] * self.dim
        coeffs[i] = self.field.one
        return Functional(self, coeffs)

    def path_dual(self, p: Path) -> "Functional":
        """The functional reading off the coefficient of the path p."""
        return Functional(self, [b.coeff(p) for b in self.basis])

    def counit_functional(self) -> "Functional":
        return Functional(self, [counit(b) for b in self.basis])

    def vertex_coeff_functional(self, v: str) -> "Functional":
        return self.path_dual(Path.trivial(v))

    def mirror(self) -> "Subcoalgebra":
        """The same coalgebra over the reversed quiver; basis order is kept
        aligned so functional coefficients transfer positionally."""
        if self._mirror is None:
            rev = self.quiver.reversed()
            m = Subcoalgebra(rev, self.field,
                             [b.mirror(rev) for b in self.basis],
                             monomial=self.monomial, validate=False)
            m._mirror = self
            self._mirror = m
        return self._mirror

    def left_group_coords(self) -> list[list[tuple[Path, list]]]:
        """Per basis element: the left-path groups of Delta with the group
        cofactor expressed in this basis.  Cached; this is the kernel of the
        dual action."""
        if self._left_groups is None:
            table = []
            for b in self.basis:
                entries = []
                for u, y in delta_left_groups(b):
                    coords = self.coordinates(y)
                    if coords is None:
                        raise CoalgebraError(
                            f"not Delta-closed: right leg {y} of {b} escapes the span")
                    entries.append((u, coords))
                table.append(entries)
            self._left_groups = table
        return self._left_groups

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subcoalgebra):
            return False
        if other.quiver != self.quiver or other.field != self.field:
            return False
        a = Subcoalgebra.from_span(self.quiver, self.field, self.basis, validate=False)
        b = Subcoalgebra.from_span(self.quiver, self.field, other.basis, validate=False)
        return a.basis == b.basis and a.monomial == b.monomial

    def __repr__(self) -> str:
        kind = "monomial" if self.monomial else "general"
        return f"Subcoalgebra(dim {self.dim}, {kind})"


class Functional:
    """Linear functional on a fixed finite-dimensional coalgebra, stored as
    one coefficient per basis element."""

    __slots__ = ("coalgebra", "coeffs")

    def __init__(self, coalgebra: Subcoalgebra, coeffs: Iterable):
        self.coalgebra = coalgebra
        self.coeffs = list(coeffs)
        assert len(self.coeffs) == coalgebra.dim

    def eval(self, x: Element):
        coords = self.coalgebra.coordinates(x)
        if coords is None:
            raise CoalgebraError(f"{x} is not in the coalgebra")
        f = self.coalgebra.field
        total = f.zero
        for c, t in zip(coords, self.coeffs):
            total = f.add(total, f.mul(c, t))
        return total

    def is_zero(self) -> bool:
        f = self.coalgebra.field
        return all(f.is_zero(c) for c in self.coeffs)

    def add(self, other: "Functional") -> "Functional":
        f = self.coalgebra.field
        return Functional(self.coalgebra,
                          [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c) -> "Functional":
        f = self.coalgebra.field
        return Functional(self.coalgebra, [f.mul(c, a) for a in self.coeffs])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Functional) and other.coalgebra is self.coalgebra
                and other.coeffs == self.coeffs)

    def __str__(self) -> str:
        f = self.coalgebra.field
        parts = [f"{f.format(c)} [{b}]*"
                 for c, b in zip(self.coeffs, self.coalgebra.basis)
                 if not f.is_zero(c)]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Functional({self})"


def convolve(f: Functional, g: Functional) -> Functional:
    """Convolution product: (fg)(b) = sum f(b_1) g(b_2) = f(g acted on b)."""
    if f.coalgebra is not g.coalgebra and f.coalgebra != g.coalgebra:
        raise CoalgebraError("convolution requires one common coalgebra")
    C = f.coalgebra
    return Functional(C, [f.eval(act(g, b, "left")) for b in C.basis])


def act(f: Functional, x: Element, side: str = "left") -> Element:
    """Left action f -> sum x_1 f(x_2); right action sum f(x_1) x_2.

    The right side is computed through the mirror functor.
    """
    C = f.coalgebra
    if side == "right":
        Cm = C.mirror()
        out = act(Functional(Cm, f.coeffs), x.mirror(Cm.quiver), "left")
        return out.mirror(C.quiver)
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    coords = C.coordinates(x)
    if coords is None:
        raise CoalgebraError(f"{x} is not in the coalgebra")
    field = C.field
    table = C.left_group_coords()
    out = Element.zero(C.quiver, field)
    for xj, entries in zip(coords, table):
        if field.is_zero(xj):
            continue
        for u, ycoords in entries:
            val = field.zero
            for a, b in zip(f.coeffs, ycoords):
                val = field.add(val, field.mul(a, b))
            val = field.mul(xj, val)
            if not field.is_zero(val):
                out = out.add(Element(C.quiver, field, {u: val}, validate=False))
    return out


def validate_monomial(quiver: Quiver, paths: set[Path]) -> tuple[bool, list[str]]:
    """A path set is monomial when it is closed under prefixes and suffixes
    and contains every vertex and arrow of its own Gabriel quiver (the
    vertices and arrows appearing in the set)."""
    problems = []
    for p in paths:
        if not quiver.contains_path(p):
            problems.append(f"path {p} does not live in the quiver")
            return False, problems
    path_set = set(paths)
    for p in paths:
        for q in p.subwords():
            if q not in path_set:
                problems.append(f"missing subword {q} of {p}")
    # subword closure already forces the Gabriel vertices and arrows; the
    # explicit check keeps the diagnostic readable if it ever fires
    for p in paths:
        for v in p.vertices:
            if Path.trivial(v) not in path_set:
                problems.append(f"missing vertex {v} used by {p}")
        for i, a in enumerate(p.arrows):
            if p.subpath(i, i + 1) not in path_set:
                problems.append(f"missing arrow {a} used by {p}")
    return not problems, sorted(set(problems))


def subcoalgebra_closure(quiver: Quiver, generators: list[Element],
                         max_len: int, field=None) -> Subcoalgebra:
    """Smallest Delta-closed subspace containing the generators: iterate
    adding both one-sided dual-cut legs until the dimension stabilizes.

    max_len bounds the path space the cuts range over; generator supports
    must fit under it (cut legs only shorten, so the bound then holds
    throughout; this is asserted).
    """
    if field is None:
        if not generators:
            raise CoalgebraError("empty generators need an explicit field")
        field = generators[0].field
    for g in generators:
        if g.max_support_len() > max_len:
            raise ClosureBoundError(
                f"generator support length {g.max_support_len()} exceeds "
                f"max_len {max_len}")
    coord_paths = _subword_closure(p for g in generators for p in g.terms)
    index = {p: i for i, p in enumerate(coord_paths)}

    def vec(x: Element) -> list:
        row = [field.zero] * len(coord_paths)
        for p, c in x.terms.items():
            row[index[p]] = c
        return row

    current = [g for g in generators if not g.is_zero()]
    while True:
        solver = LinearSolver(field, [vec(x) for x in current])
        new: list[Element] = []
        probe = list(current)
        for x in probe:
            for _, y in delta_left_groups(x):
                if not solver.contains(vec(y)):
                    new.append(y)
            for _, z in delta_right_groups(x):
                if not solver.contains(vec(z)):
                    new.append(z)
        if not new:
            break
        for y in new:
            assert y.max_support_len() <= max_len
        current.extend(new)
    return Subcoalgebra.from_span(quiver, field, current)


class Coideal:
    """One-sided coideal of a fixed finite-dimensional subcoalgebra.

    side "right" means Delta(I) in I (x) C (a left C*-module); side "left"
    mirrors.  The sided closure is checked at construction.
    """

    def __init__(self, coalgebra: Subcoalgebra, side: str, basis: list[Element],
                 generators: list[Element] | None = None, validate: bool = True):
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        self.coalgebra = coalgebra
        self.side = side
        self.basis = list(basis)
        self.generators = list(generators) if generators is not None else None
        rows = []
        for b in self.basis:
            v = coalgebra.vector(b)
            if v is None or not coalgebra.solver.contains(v):
                raise CoidealError(f"{b} is not in the coalgebra")
            rows.append(v)
        self.solver = LinearSolver(coalgebra.field, rows)
        if validate:
            self._validate()

    @classmethod
    def from_span(cls, coalgebra: Subcoalgebra, side: str, elements: list[Element],
                  generators: list[Element] | None = None,
                  validate: bool = True) -> "Coideal":
        span = Subcoalgebra.from_span(coalgebra.quiver, coalgebra.field,
                                      elements, validate=False)
        return cls(coalgebra, side, span.basis, generators=generators,
                   validate=validate)

    @classmethod
    def from_paths(cls, coalgebra: Subcoalgebra, side: str,
                   paths: Iterable[Path]) -> "Coideal":
        basis = [Element.from_path(coalgebra.quiver, coalgebra.field, p)
                 for p in sorted(set(paths), key=Path.sort_key)]
        return cls(coalgebra, side, basis)

    def _validate(self) -> None:
        if self.solver.rank != len(self.basis):
            raise CoidealError("coideal basis is linearly dependent")
        for b in self.basis:
            if self.side == "right":
                # left tensor legs must stay inside I
                for _, z in delta_right_groups(b):
                    if not self.contains(z):
                        raise CoidealError(
                            f"not a right coideal: left leg {z} of {b} escapes")
            else:
                for _, y in delta_left_groups(b):
                    if not self.contains(y):
                        raise CoidealError(
                            f"not a left coideal: right leg {y} of {b} escapes")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Element) -> bool:
        v = self.coalgebra.vector(x)
        return v is not None and self.solver.contains(v)

    def coordinates(self, x: Element) -> list | None:
        v = self.coalgebra.vector(x)
        if v is None:
            return None
        return self.solver.coordinates(v)

    def is_path_spanned(self) -> bool:
        return all(len(b.terms) == 1 and next(iter(b.terms.values())) == self.coalgebra.field.one
                   for b in self.basis)

    def path_set(self) -> list[Path]:
        if not self.is_path_spanned():
            raise CoidealError("coideal has a mixed (non-path) basis")
        return [next(iter(b.terms)) for b in self.basis]

    def mirror(self) -> "Coideal":
        Cm = self.coalgebra.mirror()
        side = "left" if self.side == "right" else "right"
        return Coideal(Cm, side, [b.mirror(Cm.quiver) for b in self.basis],
                       generators=None if self.generators is None
                       else [g.mirror(Cm.quiver) for g in self.generators],
                       validate=False)

    def __eq__(self, other) -> bool:
        if not (isinstance(other, Coideal) and other.side == self.side
                and other.coalgebra == self.coalgebra):
            return False
        return linalg.subspace_equal(
            self.coalgebra.field,
            [self.coalgebra.vector(b) for b in self.basis],
            [self.coalgebra.vector(b) for b in other.basis])

    def __repr__(self) -> str:
        return f"Coideal({self.side}, dim {self.dim})"


def coideal_generated(C: Subcoalgebra, x: Element, side: str = "right") -> Coideal:
    """The one-sided coideal generated by x: the span of all dual-basis
    contractions on the matching tensor leg of Delta(x)."""
    if side == "left":
        Cm = C.mirror()
        m = coideal_generated(Cm, x.mirror(Cm.quiver), "right")
        # Cm.mirror() is the cached original, so this lands back on C
        return m.mirror()
    if side != "right":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not C.contains(x):
        raise CoalgebraError(f"{x} is not in the coalgebra")
    field = C.field
    # Delta(x) = sum_j Y_j (x) b_j after re-expressing right legs in the basis
    components = [Element.zero(C.quiver, field) for _ in range(C.dim)]
    for u, y in delta_left_groups(x):
        coords = C.coordinates(y)
        assert coords is not None
        for j, c in enumerate(coords):
            if not field.is_zero(c):
                components[j] = components[j].add(
                    Element(C.quiver, field, {u: c}, validate=False))
    elements = [e for e in components if not e.is_zero()]
    return Coideal.from_span(C, "right", elements, generators=[x])


def multipath_basis(obj) -> list[Element]:
    """Basis of the same span by target-homogeneous elements (right
    coideals), source-homogeneous ones (left coideals), or full multipaths
    (subcoalgebras), produced by the vertex projections and reduced
    classwise."""
    if isinstance(obj, Subcoalgebra):
        C, field = obj, obj.field
        classes: dict[tuple[str, str], list[Element]] = {}
        for b in C.basis:
            for vt, comp_t in b.split_by_target().items():
                if not C.contains(comp_t):
                    raise CoalgebraError(
                        f"target component {comp_t} of {b} escapes the span")
                for vs, comp in comp_t.split_by_source().items():
                    if not C.contains(comp):
                        raise CoalgebraError(
                            f"source component {comp} of {b} escapes the span")
                    classes.setdefault((vs, vt), []).append(comp)
        quiver = C.quiver
    elif isinstance(obj, Coideal):
        I, field = obj, obj.coalgebra.field
        quiver = I.coalgebra.quiver
        classes = {}
        for b in I.basis:
            split = (b.split_by_target() if I.side == "right"
                     else b.split_by_source())
            for v, comp in split.items():
                if not I.contains(comp):
                    raise CoidealError(
                        f"input not a coideal: component {comp} of {b} escapes")
                classes.setdefault((v,), []).append(comp)
    else:
        raise TypeError(f"expected Subcoalgebra or Coideal, got {type(obj)!r}")
    out: list[Element] = []
    for key in sorted(classes):
        span = Subcoalgebra.from_span(quiver, field, classes[key], validate=False)
        out.extend(span.basis)
    out.sort(key=element_sort_key)
    return out


def is_right_multipath(x: Element) -> bool:
    return len({p.target for p in x.terms}) <= 1


def is_left_multipath(x: Element) -> bool:
    return len({p.source for p in x.terms}) <= 1


def is_full_multipath(x: Element) -> bool:
    return is_right_multipath(x) and is_left_multipath(x)


def path_hull(C: Subcoalgebra, I: "Coideal | list[Element]",
              side: str = "right") -> Coideal:
    """Smallest path-spanned coideal of a monomial C containing span(I):
    collect the support paths of the generators and close under the dual
    action (prefix closure on the right side).  I may be a coideal or a
    plain list of elements of C; the span of a list need not itself be a
    coideal for the hull to make sense."""
    if not C.monomial:
        raise CoalgebraError("path_hull needs a monomial coalgebra")
    gens = list(I.basis) if isinstance(I, Coideal) else list(I)
    for g in gens:
        if not C.contains(g):
            raise CoalgebraError(f"path_hull generator {g} is not in the coalgebra")
    if side == "left":
        Cm = C.mirror()
        hull = path_hull(Cm, [g.mirror(Cm.quiver) for g in gens], "right")
        return Coideal.from_paths(C, "left",
                                  [p.reversed() for p in hull.path_set()])
    if side != "right":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    paths: set[Path] = set()
    for b in gens:
        for p in b.terms:
            paths |= {p.subpath(0, i) for i in range(p.length + 1)}
    return Coideal.from_paths(C, "right", paths)


def multipath_hull(C: Subcoalgebra, I: Coideal, side: str = "right") -> Coideal:
    """Coideal generated by the source-homogeneous components of I's right
    multipath basis; the generators are full multipaths and the result
    contains I."""
    if side != "right":
        raise ValueError("multipath_hull is defined on the right side; mirror first")
    comps: list[Element] = []
    for m in multipath_basis(I):
        comps.extend(m.split_by_source().values())
    comps.sort(key=element_sort_key)
    elements: list[Element] = []
    for comp in comps:
        elements.extend(coideal_generated(C, comp, "right").basis)
    return Coideal.from_span(C, "right", elements, generators=comps)


def independent_reduce(C: Subcoalgebra, B: list[Element]) -> list[Element]:
    """Prune B to an independent subset generating the same coideal: scan in
    the deterministic order removing members of <x> other than x until a
    fixed point, then drop linear dependencies."""
    field = C.field
    current: list[Element] = []
    for x in sorted(B, key=element_sort_key):
        if not any(y == x for y in current):
            current.append(x)
    changed = True
    while changed:
        changed = False
        for x in list(current):
            if not any(y is x for y in current):
                continue
            gen = coideal_generated(C, x, "right")
            survivors = [y for y in current
                         if y is x or not gen.contains(y)]
            if len(survivors) != len(current):
                changed = True
                current = survivors
    keep: list[Element] = []
    vecs: list[list] = []
    for x in current:
        v = C.vector(x)
        if linalg.rank(field, vecs + [v]) > len(keep):
            keep.append(x)
            vecs.append(v)
    return keep


def coef_coalgebra(C: Subcoalgebra, M: Coideal) -> Subcoalgebra:
    """Smallest subcoalgebra D with Delta(M) in M (x) D: the closure of the
    right tensor legs of Delta on M's basis."""
    legs: list[Element] = []
    for b in M.basis:
        legs.extend(y for _, y in delta_left_groups(b))
    legs = [y for y in legs if not y.is_zero()]
    max_len = max((y.max_support_len() for y in legs), default=0)
    if not legs:
        return Subcoalgebra(C.quiver, C.field, [], monomial=True, validate=False)
    return subcoalgebra_closure(C.quiver, legs, max_len, field=C.field)


def injective_envelope(C: Subcoalgebra, v: str, side: str = "right") -> Coideal:
    """Span of the paths (monomial case) or multipath basis members starting
    at v (right side) or ending at v (left side)."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    vertex = Path.trivial(v)
    if not C.contains(Element.from_path(C.quiver, C.field, vertex)):
        raise CoalgebraError(f"unknown vertex {v!r} in the coalgebra")
    if C.monomial:
        if side == "right":
            paths = [p for p in C.path_basis() if p.source == v]
        else:
            paths = [p for p in C.path_basis() if p.target == v]
        return Coideal.from_paths(C, side, paths)
    members = [m for m in multipath_basis(C)
               if (next(iter(m.terms)).source if side == "right"
                   else next(iter(m.terms)).target) == v]
    return Coideal.from_span(C, side, members)
