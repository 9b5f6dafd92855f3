"""Decision procedures for quasi-co-Frobenius behaviour of path coalgebras:
an exact torsionless oracle for finite-dimensional coideals, witness paths,
the monomial classifier with its explicit embedding, and semiperfect checks.

Side convention: side="left" asks about left C*-modules, whose coideals are
right coideals of C; side="right" mirrors everything through the reversed
quiver."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .coalgebra import (CoalgebraError, Coideal, CoidealError, Element,
                        Functional, InternalCheckError, Subcoalgebra,
                        act, delta_right_groups)
from .quiver import (Path, Quiver, one_incoming_condition,
                     one_outgoing_condition, reaches_cycle)


class MorphismMatrix:
    """A linear map F: M -> C* given by one functional per basis element of
    the domain coideal.  Whether it is a module morphism is a separate check
    (is_module_morphism)."""

    def __init__(self, domain: Coideal, values: list[Functional]):
        if len(values) != domain.dim:
            raise CoalgebraError(
                f"need {domain.dim} functionals, got {len(values)}")
        for f in values:
            if f.coalgebra is not domain.coalgebra and f.coalgebra != domain.coalgebra:
                raise CoalgebraError("functional lives on a different coalgebra")
        self.domain = domain
        self.values = list(values)

    def apply(self, x: Element) -> Functional:
        coords = self.domain.coordinates(x)
        if coords is None:
            raise CoidealError(f"{x} is not in the domain coideal")
        field = self.domain.coalgebra.field
        out = Functional(self.domain.coalgebra,
                         [field.zero] * self.domain.coalgebra.dim)
        for c, f in zip(coords, self.values):
            if not field.is_zero(c):
                out = out.add(f.scale(c))
        return out

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.values)

    def mirror(self) -> "MorphismMatrix":
        # basis orders transfer positionally under the reversed-quiver functor
        Mm = self.domain.mirror()
        return MorphismMatrix(Mm, [Functional(Mm.coalgebra, f.coeffs)
                                   for f in self.values])

    def __repr__(self) -> str:
        return f"MorphismMatrix(dim {self.domain.dim} -> C*)"


@dataclass
class EmbeddingCertificate:
    """A verified embedding of the domain coideal into a finite free module
    (C*)^n: each component is a module morphism and the joint map has rank
    equal to the domain dimension."""
    morphisms: list[MorphismMatrix]
    verified: bool
    rank: int

    @property
    def domain(self) -> Coideal | None:
        return self.morphisms[0].domain if self.morphisms else None


@dataclass
class FailureWitness:
    """A nonzero element killed by every module morphism into C*, together
    with a basis of the full morphism space."""
    element: Element
    solution_basis: list[MorphismMatrix]
    note: str = ""


@dataclass
class QcfVerdict:
    side: str
    value: str  # "qcF" | "not-qcF"
    reasons: list[dict] = dc_field(default_factory=list)
    note: str = ""

    def __post_init__(self):
        if self.value not in ("qcF", "not-qcF"):
            raise ValueError(f"bad verdict value {self.value!r}")
        if self.value == "not-qcF" and not self.reasons:
            raise InternalCheckError("negative verdict with no findings")

    @property
    def holds(self) -> bool:
        return self.value == "qcF"


@dataclass
class ExhaustiveResult:
    verdict: QcfVerdict
    log: list[tuple[Coideal, "EmbeddingCertificate | FailureWitness"]]


def _require_right_coideal(C: Subcoalgebra, M: Coideal) -> None:
    if M.coalgebra is not C and M.coalgebra != C:
        raise CoalgebraError("coideal lives in a different coalgebra")
    if M.side != "right":
        raise CoidealError("left C*-module checks need a right coideal")


def is_module_morphism(C: Subcoalgebra, F: MorphismMatrix,
                       side: str = "left") -> bool:
    """Exact check of the module-morphism equation on a basis: for every
    basis m of the domain and x of C,
        sum_w F(z_w)(x) w  ==  F(m) -> x,
    where Delta(m) = sum_w z_w (x) w."""
    if side == "right":
        return is_module_morphism(C.mirror(), F.mirror(), "left")
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    M = F.domain
    _require_right_coideal(C, M)
    field = C.field
    for i, m in enumerate(M.basis):
        groups = []
        for w, z in delta_right_groups(m):
            zc = M.coordinates(z)
            if zc is None:
                raise CoidealError(f"left leg {z} of {m} escapes the coideal")
            groups.append((w, zc))
        for j, x in enumerate(C.basis):
            lhs_terms: dict[Path, object] = {}
            for w, zc in groups:
                val = field.zero
                for l, c in enumerate(zc):
                    if not field.is_zero(c):
                        val = field.add(val, field.mul(c, F.values[l].coeffs[j]))
                if not field.is_zero(val):
                    lhs_terms[w] = field.add(lhs_terms.get(w, field.zero), val)
            lhs = Element(C.quiver, field, lhs_terms, validate=False)
            if lhs != act(F.values[i], x, "left"):
                return False
    return True


def _morphism_system(C: Subcoalgebra, M: Coideal) -> list[list]:
    """Homogeneous system whose solution space is exactly the set of left
    C*-module morphisms M -> C*, in the unknowns t[i*k+j] = F(m_i)(b_j).
    Rows are deduplicated; zero rows dropped."""
    field, d, k = C.field, M.dim, C.dim
    rgroups = []
    for m in M.basis:
        entries = []
        for w, z in delta_right_groups(m):
            zc = M.coordinates(z)
            if zc is None:
                raise CoidealError(f"left leg {z} of {m} escapes the coideal")
            entries.append((w, zc))
        rgroups.append(entries)
    lgroups = C.left_group_coords()
    rows: list[list] = []
    seen: set[tuple] = set()
    for i in range(d):
        zmap = dict(rgroups[i])
        for j in range(k):
            ymap = dict(lgroups[j])
            for u in sorted(set(zmap) | set(ymap)):
                row = [field.zero] * (d * k)
                zc = zmap.get(u)
                if zc is not None:
                    for l, c in enumerate(zc):
                        if not field.is_zero(c):
                            row[l * k + j] = field.add(row[l * k + j], c)
                yc = ymap.get(u)
                if yc is not None:
                    for l, c in enumerate(yc):
                        if not field.is_zero(c):
                            row[i * k + l] = field.sub(row[i * k + l], c)
                if any(not field.is_zero(c) for c in row):
                    key = tuple(row)
                    if key not in seen:
                        seen.add(key)
                        rows.append(row)
    return rows


def morphism_space(C: Subcoalgebra, M: Coideal,
                   side: str = "left") -> list[MorphismMatrix]:
    """Basis of the space of module morphisms M -> C*."""
    if side == "right":
        if M.side != "left":
            raise CoidealError("right C*-module checks need a left coideal")
        sols = morphism_space(C.mirror(), M.mirror(), "left")
        return [_transfer(F, C, M) for F in sols]
    _require_right_coideal(C, M)
    d, k = M.dim, C.dim
    vecs = linalg.nullspace(C.field, _morphism_system(C, M), ncols=d * k)
    return [MorphismMatrix(M, [Functional(C, v[i * k:(i + 1) * k])
                               for i in range(d)]) for v in vecs]


def _transfer(F: MorphismMatrix, C: Subcoalgebra, M: Coideal) -> MorphismMatrix:
    """Rebuild a morphism computed on the mirror side over the original C and
    M, relying on positional basis alignment."""
    return MorphismMatrix(M, [Functional(C, f.coeffs) for f in F.values])


def _joint_rows(M: Coideal, morphisms: list[MorphismMatrix]) -> list[list]:
    return [[c for F in morphisms for c in F.values[i].coeffs]
            for i in range(M.dim)]


def _certify(C: Subcoalgebra, M: Coideal,
             morphisms: list[MorphismMatrix]) -> EmbeddingCertificate:
    for F in morphisms:
        if not is_module_morphism(C, F, "left"):
            raise InternalCheckError("certificate component fails the morphism equation")
    rank = linalg.rank(C.field, _joint_rows(M, morphisms))
    if rank != M.dim:
        raise InternalCheckError("certificate joint map is not injective")
    return EmbeddingCertificate(morphisms=morphisms, verified=True, rank=rank)


def torsionless_oracle(C: Subcoalgebra, M: Coideal,
                       side: str = "left") -> "EmbeddingCertificate | FailureWitness":
    """Decide whether M embeds into a finite free module over the dual
    algebra.  Certifies with verified morphisms or refutes with a nonzero
    element killed by every morphism."""
    if side == "right":
        res = torsionless_oracle(C.mirror(), M.mirror(), "left")
        if isinstance(res, EmbeddingCertificate):
            back = [_transfer(F, C, M) for F in res.morphisms]
            return EmbeddingCertificate(back, res.verified, res.rank)
        return FailureWitness(res.element.mirror(C.quiver),
                              [_transfer(F, C, M) for F in res.solution_basis],
                              res.note)
    _require_right_coideal(C, M)
    field, d = C.field, M.dim
    if d == 0:
        return EmbeddingCertificate([], True, 0)
    sols = morphism_space(C, M, "left")
    chosen = []
    for b in range(d):
        pick = next((F for F in sols if not F.values[b].is_zero()), None)
        if pick is None:
            return FailureWitness(
                M.basis[b], sols,
                "every module morphism into the dual vanishes on this basis element")
        chosen.append(pick)
    # one component per basis element; injectivity of that assembly is the
    # common case but not automatic, so fall back to the joint map of the
    # whole solution space, which is injective iff M is torsionless
    if linalg.rank(field, _joint_rows(M, chosen)) == d:
        return _certify(C, M, chosen)
    if linalg.rank(field, _joint_rows(M, sols)) == d:
        return _certify(C, M, sols)
    kernel = linalg.nullspace(field, _joint_rows(M, sols), ncols=d)
    elt = Element.zero(C.quiver, field)
    for c, m in zip(kernel[0], M.basis):
        elt = elt.add(m.scale(c))
    return FailureWitness(elt, sols,
                          "the joint map of all module morphisms has a kernel")


def fuente_witness(C: Subcoalgebra, M: Coideal, e: str,
                   cert: EmbeddingCertificate) -> Path:
    """Extract from a verified embedding a path p with F(e)(p) != 0 and check
    the two source-path properties it must satisfy: every path of M starting
    at e is a prefix of p with its completing suffix in C, and no nontrivial
    path of C ending at e composes with p inside C.  Also checks s(p) = e and
    that p is nontrivial whenever some nontrivial path of C ends at e.
    Violations are internal-consistency errors, not input errors."""
    if not C.monomial:
        raise CoalgebraError("witness extraction needs a monomial coalgebra")
    _require_right_coideal(C, M)
    if not cert.verified:
        raise CoalgebraError("certificate is not verified")
    C.quiver.require_vertex(e)
    ev = Element.from_path(C.quiver, C.field, Path.trivial(e))
    if not M.contains(ev):
        raise CoidealError(f"vertex {e} is not in the coideal")
    basis_paths = C.path_basis()
    p: Path | None = None
    for F in cert.morphisms:
        fe = F.apply(ev)
        idx = next((i for i, c in enumerate(fe.coeffs)
                    if not C.field.is_zero(c)), None)
        if idx is not None:
            p = basis_paths[idx]
            break
    if p is None:
        raise InternalCheckError(
            "verified embedding vanishes on a coideal vertex")
    path_set = set(basis_paths)
    if p.source != e:
        raise InternalCheckError(f"witness path {p} does not start at {e}")
    for q in basis_paths:
        if q.source != e or not M.contains(Element.from_path(C.quiver, C.field, q)):
            continue
        split = next(((a, b) for a, b in p.splittings() if a == q), None)
        if split is None:
            raise InternalCheckError(
                f"coideal path {q} is not a prefix of the witness {p}")
        if split[1] not in path_set:
            raise InternalCheckError(
                f"completing suffix {split[1]} escapes the coalgebra")
    incoming = [r for r in basis_paths if r.length > 0 and r.target == e]
    for r in incoming:
        if r.compose(p) in path_set:
            raise InternalCheckError(
                f"extension {r.compose(p)} of the witness stays in the coalgebra")
    if incoming and p.length == 0:
        raise InternalCheckError(
            "witness path is trivial although a nontrivial path ends at the vertex")
    return p


def _witness_extension_violations(C: Subcoalgebra, side: str) -> list[dict]:
    """Vertices whose every dual-basis witness dies: with one arrow leaving
    (entering) each vertex the paths from (into) a vertex form a chain, and
    the dual of any of them is a module morphism on the span of the vertex
    only if the chain's maximal path does not compose backward (forward)
    inside C.  Truncated instances can fail this although the arrow counts
    pass."""
    paths = C.path_basis()
    path_set = set(paths)
    out = []
    for e in sorted({p.source for p in paths if p.is_trivial}):
        if side == "left":
            p = max((q for q in paths if q.source == e), key=lambda q: q.length)
            hits = [r.compose(p) for r in paths
                    if r.length > 0 and r.target == e and r.compose(p) in path_set]
        else:
            p = max((q for q in paths if q.target == e), key=lambda q: q.length)
            hits = [p.compose(r) for r in paths
                    if r.length > 0 and r.source == e and p.compose(r) in path_set]
        if hits:
            out.append({"kind": "witness-extension", "vertex": e, "side": side,
                        "witness": str(p),
                        "extension": str(min(hits, key=Path.sort_key))})
    return out


def classify_monomial_qcf(C: Subcoalgebra, side: str = "left") -> QcfVerdict:
    """Classification on the path basis: every nontrivial connected component
    of the Gabriel quiver must have exactly one outgoing (side left) or
    incoming (side right) arrow at each vertex, and no vertex's maximal path
    may extend inside C past an incoming (outgoing) path.  The companion
    path-length condition holds automatically at finite dimension; the
    verdict's note records that.

    Both checks are necessary.  They are decisive when the nontrivial
    components are chains or cycles; components with in-branching can pass
    both and still fail, so the exhaustive oracle stays authoritative."""
    if not C.monomial:
        raise CoalgebraError("classification needs a monomial coalgebra")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    G = C.gabriel_quiver()
    if side == "left":
        ok, details = one_outgoing_condition(G)
    else:
        ok, details = one_incoming_condition(G)
    direction = "outgoing" if side == "left" else "incoming"
    reasons = [{"kind": "arrow-count", "vertex": v, "direction": direction,
                "count": c, "expected": 1}
               for comp in details if not comp["ok"]
               for v, c in comp["violations"]]
    if ok:
        reasons = _witness_extension_violations(C, side)
        ok = not reasons
    note = ("finite paths per vertex holds automatically at finite dimension; "
            "verdict determined by the arrow-count and witness-path conditions")
    return QcfVerdict(side=side, value="qcF" if ok else "not-qcF",
                      reasons=reasons, note=note)


def construct_embedding_monomial(C: Subcoalgebra, M: Coideal,
                                 side: str = "left") -> EmbeddingCertificate:
    """Explicit embedding for a qcF monomial coalgebra: split the path basis
    of M by source; within a source class the paths of C form a prefix chain
    (one outgoing arrow per vertex), so taking p maximal from the source, each
    basis path b completes to p = b b' and b |-> (b')* defines a morphism.
    Never calls the generic oracle."""
    if side == "right":
        res = construct_embedding_monomial(C.mirror(), M.mirror(), "left")
        return EmbeddingCertificate([_transfer(F, C, M) for F in res.morphisms],
                                    res.verified, res.rank)
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not C.monomial:
        raise CoalgebraError("explicit construction needs a monomial coalgebra")
    _require_right_coideal(C, M)
    verdict = classify_monomial_qcf(C, "left")
    if not verdict.holds:
        raise CoalgebraError("coalgebra is not left qcF; no construction applies")
    if not M.is_path_spanned():
        raise CoidealError("coideal has a mixed basis; apply path_hull first")
    mpaths = M.path_set()
    by_source: dict[str, list[Path]] = {}
    for b in mpaths:
        by_source.setdefault(b.source, []).append(b)
    from_source: dict[str, list[Path]] = {}
    for q in C.path_basis():
        from_source.setdefault(q.source, []).append(q)
    field = C.field
    path_index = {q: i for i, q in enumerate(C.path_basis())}
    morphisms = []
    for s in sorted(by_source):
        chain = sorted(from_source[s], key=lambda q: q.length)
        # one outgoing arrow per vertex: the paths from s are totally ordered
        for shorter, longer in zip(chain, chain[1:]):
            assert longer.splittings()[shorter.length][0] == shorter, \
                "paths from a source must form a prefix chain"
        p = chain[-1]
        values = []
        for b in M.basis:
            bp = b.leading_path
            if bp.source != s:
                values.append(Functional(C, [field.zero] * C.dim))
                continue
            left, right = p.splittings()[bp.length]
            assert left == bp, "coideal path must be a prefix of the maximal path"
            coeffs = [field.zero] * C.dim
            coeffs[path_index[right]] = field.one
            values.append(Functional(C, coeffs))
        morphisms.append(MorphismMatrix(M, values))
    return _certify(C, M, morphisms)


def is_semiperfect_path_coalgebra(q: Quiver, scope: str = "full",
                                  side: str = "left") -> tuple[bool, list[dict]]:
    """Full scope asks about the whole path coalgebra: left-semiperfect iff
    no vertex reaches a cycle (finitely many paths from every vertex); the
    right side uses the reversed quiver.  Bounded scope is a finite
    dimension statement and always holds; the finding records the bound."""
    q.require_valid()
    if side == "right":
        held, findings = is_semiperfect_path_coalgebra(q.reversed(), scope, "left")
        for f in findings:
            f["side"] = "right"
        return held, findings
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if scope == "full":
        bad = [v for v in q.vertices if reaches_cycle(q, v)]
        findings = [{"kind": "reaches-cycle", "vertex": v, "side": "left"}
                    for v in bad]
        return not bad, findings
    if scope.startswith("bounded:"):
        try:
            bound = int(scope.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad bounded scope {scope!r}")
        if bound < 0:
            raise ValueError("length bound must be nonnegative")
        return True, [{"kind": "bounded-scope", "bound": bound, "side": "left",
                       "note": "finite dimensional, all envelopes finite"}]
    raise ValueError(f"scope must be 'full' or 'bounded:L', got {scope!r}")


def _action_closed_subsets(paths: list[Path]) -> list[tuple[Path, ...]]:
    """Nonempty prefix-closed subsets of a monomial path basis, in
    (size, lexicographic) order.  These are exactly the path-spanned right
    coideals; proper prefixes of basis paths are again basis paths because
    the basis is subword closed."""
    indexed = sorted(paths, key=Path.sort_key)
    out = []
    for size in range(1, len(indexed) + 1):
        for combo in itertools.combinations(range(len(indexed)), size):
            subset = [indexed[i] for i in combo]
            have = set(subset)
            if all(pref in have for p in subset
                   for pref, _ in p.splittings()[:-1]):
                out.append(tuple(subset))
    return out


def f_qcf_exhaustive(C: Subcoalgebra, side: str = "left") -> ExhaustiveResult:
    """Run the torsionless oracle on every path-spanned coideal of the given
    side and report the conjunction with a full log.  Path-spanned coideals
    suffice: any finite-dimensional coideal embeds into its path hull, which
    shares the obstruction."""
    if not C.monomial:
        raise CoalgebraError("exhaustive check needs a monomial coalgebra")
    if side == "right":
        inner = f_qcf_exhaustive(C.mirror(), "left")
        log = []
        for I, res in inner.log:
            J = I.mirror()  # lands back on C; positional basis alignment
            if isinstance(res, EmbeddingCertificate):
                back = EmbeddingCertificate([_transfer(F, C, J) for F in res.morphisms],
                                            res.verified, res.rank)
            else:
                back = FailureWitness(res.element.mirror(C.quiver),
                                      [_transfer(F, C, J) for F in res.solution_basis],
                                      res.note)
            log.append((J, back))
        failures = [{"kind": "failing-coideal",
                     "paths": [str(p) for p in J.path_set()],
                     "element": str(back.element)}
                    for J, back in log if isinstance(back, FailureWitness)]
        verdict = QcfVerdict(side="right", value=inner.verdict.value,
                             reasons=failures, note=inner.verdict.note)
        return ExhaustiveResult(verdict, log)
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    log = []
    failures = []
    for subset in _action_closed_subsets(C.path_basis()):
        I = Coideal.from_paths(C, "right", list(subset))
        res = torsionless_oracle(C, I, "left")
        log.append((I, res))
        if isinstance(res, FailureWitness):
            failures.append({"kind": "failing-coideal",
                             "paths": [str(p) for p in subset],
                             "element": str(res.element)})
    note = "scope: path-spanned coideals (hulls cover the general case)"
    verdict = QcfVerdict(side="left",
                         value="qcF" if not failures else "not-qcF",
                         reasons=failures, note=note)
    return ExhaustiveResult(verdict, log)


def cofrobenius_map_discrete(C: Subcoalgebra) -> MorphismMatrix:
    """On a coalgebra with discrete Gabriel quiver, the map sending each
    vertex to its dual-basis functional; verified as an injective module
    morphism on both sides."""
    if not C.is_discrete():
        raise CoalgebraError("coalgebra has arrows; the diagonal map needs a discrete one")
    right_dom = Coideal(C, "right", list(C.basis))
    left_dom = Coideal(C, "left", list(C.basis))
    values = [C.dual_basis_functional(i) for i in range(C.dim)]
    phi = MorphismMatrix(right_dom, values)
    if not is_module_morphism(C, phi, "left"):
        raise InternalCheckError("diagonal map fails the left morphism equation")
    phi_left = MorphismMatrix(left_dom, values)
    if not is_module_morphism(C, phi_left, "right"):
        raise InternalCheckError("diagonal map fails the right morphism equation")
    if linalg.rank(C.field, [f.coeffs for f in values]) != C.dim:
        raise InternalCheckError("diagonal map is not injective")
    return phi
