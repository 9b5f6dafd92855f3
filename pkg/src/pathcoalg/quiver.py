"""Quivers and paths.

A quiver is a finite directed multigraph with named vertices and arrows;
loops and parallel arrows are allowed.  A path is a vertex (trivial path)
or a composable arrow sequence; it carries its full vertex itinerary so
that prefixes and suffixes never need a quiver lookup.

Paths are totally ordered by (length, then lexicographic identifiers);
this order fixes every basis order downstream.
"""
from __future__ import annotations

from typing import Iterable, NamedTuple


class QuiverError(ValueError):
    pass


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


# characters that would collide with the file format or path/element syntax
_FORBIDDEN_ID_CHARS = set(".+#,")
_RESERVED_WORDS = {"end", "quiver", "coalgebra", "vertex", "arrow", "field",
                   "mode", "path", "element", "allpaths", "over"}


def _identifier_problem(name: str) -> str | None:
    if not name:
        return "empty identifier"
    if any(ch.isspace() for ch in name):
        return f"identifier {name!r} contains whitespace"
    bad = sorted(_FORBIDDEN_ID_CHARS.intersection(name))
    if bad:
        return f"identifier {name!r} contains reserved character {bad[0]!r}"
    if name in _RESERVED_WORDS:
        return f"identifier {name!r} is a reserved word"
    return None


class Path:
    """A path in a quiver: the vertex itinerary plus the arrow name sequence.

    len(vertices) == len(arrows) + 1 always; a trivial path has one vertex
    and no arrows.
    """

    __slots__ = ("vertices", "arrows", "_hash")

    def __init__(self, vertices: tuple[str, ...], arrows: tuple[str, ...]):
        assert len(vertices) == len(arrows) + 1
        self.vertices = vertices
        self.arrows = arrows
        self._hash = hash((vertices, arrows))

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls((vertex,), ())

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def sort_key(self):
        return (len(self.arrows), self.arrows if self.arrows else self.vertices)

    def compose(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise QuiverError(
                f"paths do not compose: {self} ends at {self.target}, "
                f"{other} starts at {other.source}")
        return Path(self.vertices + other.vertices[1:], self.arrows + other.arrows)

    def subpath(self, i: int, j: int) -> "Path":
        """The segment from vertex position i to vertex position j (0 <= i <= j <= length)."""
        assert 0 <= i <= j <= self.length
        return Path(self.vertices[i:j + 1], self.arrows[i:j])

    def splittings(self) -> list[tuple["Path", "Path"]]:
        """All L+1 two-part factorizations p = (prefix)(suffix), trivial ends included."""
        L = self.length
        return [(self.subpath(0, i), self.subpath(i, L)) for i in range(L + 1)]

    def subwords(self) -> set["Path"]:
        """All contiguous segments, including every vertex on the itinerary."""
        L = self.length
        return {self.subpath(i, j) for i in range(L + 1) for j in range(i, L + 1)}

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)), tuple(reversed(self.arrows)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Path) and other.vertices == self.vertices
                and other.arrows == self.arrows)

    def __lt__(self, other: "Path") -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.is_trivial:
            return self.vertices[0]
        return ".".join(self.arrows)

    def __repr__(self) -> str:
        return f"Path({self})"


class Quiver:
    """Finite directed multigraph.  Construction never raises; validity is a
    diagnostic so that validate_quiver can report on broken inputs."""

    def __init__(self, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(Arrow(*a) for a in arrows)
        self.diagnostics = self._diagnose()
        self.is_valid = not self.diagnostics
        self.arrow_map: dict[str, Arrow] = {}
        self.out_arrows: dict[str, list[Arrow]] = {}
        self.in_arrows: dict[str, list[Arrow]] = {}
        if self.is_valid:
            self.arrow_map = {a.name: a for a in self.arrows}
            self.out_arrows = {v: [] for v in self.vertices}
            self.in_arrows = {v: [] for v in self.vertices}
            for a in sorted(self.arrows, key=lambda a: a.name):
                self.out_arrows[a.source].append(a)
                self.in_arrows[a.target].append(a)

    def _diagnose(self) -> list[str]:
        problems = []
        seen: set[str] = set()
        for v in self.vertices:
            msg = _identifier_problem(v)
            if msg:
                problems.append(msg)
            if v in seen:
                problems.append(f"duplicate identifier {v!r}")
            seen.add(v)
        vertex_set = set(self.vertices)
        for a in self.arrows:
            msg = _identifier_problem(a.name)
            if msg:
                problems.append(msg)
            if a.name in seen:
                problems.append(f"duplicate identifier {a.name!r}")
            seen.add(a.name)
            if a.source not in vertex_set:
                problems.append(f"arrow {a.name!r} has undeclared source {a.source!r}")
            if a.target not in vertex_set:
                problems.append(f"arrow {a.name!r} has undeclared target {a.target!r}")
        return problems

    def require_valid(self) -> None:
        if not self.is_valid:
            raise QuiverError(f"invalid quiver: {self.diagnostics[0]}")

    def require_vertex(self, v: str) -> None:
        self.require_valid()
        if v not in set(self.vertices):
            raise QuiverError(f"unknown vertex {v!r}")

    def trivial_path(self, v: str) -> Path:
        self.require_vertex(v)
        return Path.trivial(v)

    def arrow_path(self, name: str) -> Path:
        self.require_valid()
        a = self.arrow_map.get(name)
        if a is None:
            raise QuiverError(f"unknown arrow {name!r}")
        return Path((a.source, a.target), (a.name,))

    def path_from_arrows(self, names: Iterable[str]) -> Path:
        """Build a path from a composable arrow name sequence."""
        self.require_valid()
        names = list(names)
        if not names:
            raise QuiverError("empty arrow sequence; use a trivial path instead")
        p = self.arrow_path(names[0])
        for name in names[1:]:
            p = p.compose(self.arrow_path(name))
        return p

    def contains_path(self, p: Path) -> bool:
        if not self.is_valid:
            return False
        vertex_set = set(self.vertices)
        if any(v not in vertex_set for v in p.vertices):
            return False
        for i, name in enumerate(p.arrows):
            a = self.arrow_map.get(name)
            if a is None or a.source != p.vertices[i] or a.target != p.vertices[i + 1]:
                return False
        return True

    def reversed(self) -> "Quiver":
        return Quiver(self.vertices, [(a.name, a.target, a.source) for a in self.arrows])

    def extended(self, new_vertices: Iterable[str],
                 new_arrows: Iterable[tuple[str, str, str]]) -> "Quiver":
        q = Quiver(self.vertices + tuple(new_vertices),
                   [tuple(a) for a in self.arrows] + list(new_arrows))
        q.require_valid()
        return q

    def __eq__(self, other) -> bool:
        return (isinstance(other, Quiver) and other.vertices == self.vertices
                and other.arrows == self.arrows)

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def validate_quiver(q: Quiver) -> tuple[bool, list[str]]:
    """Validity flag plus diagnostics naming the first violations found."""
    return q.is_valid, list(q.diagnostics)


def enumerate_paths(q: Quiver, source: str | None = None, max_len: int = 0) -> list[Path]:
    """All paths of length <= max_len, optionally restricted to one source,
    ordered by length then lexicographically by arrow identifiers."""
    q.require_valid()
    if max_len < 0:
        raise QuiverError(f"max_len must be nonnegative, got {max_len}")
    if source is not None:
        q.require_vertex(source)
        frontier = [Path.trivial(source)]
    else:
        frontier = [Path.trivial(v) for v in sorted(q.vertices)]
    out = list(frontier)
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for a in q.out_arrows[p.target]:
                nxt.append(Path(p.vertices + (a.target,), p.arrows + (a.name,)))
        nxt.sort(key=Path.sort_key)
        out.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return out


def _reachable(q: Quiver, start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for a in q.out_arrows[v]:
            if a.target not in seen:
                seen.add(a.target)
                stack.append(a.target)
    return seen


def _cycle_vertices(q: Quiver) -> set[str]:
    on_cycle = set()
    for v in q.vertices:
        # v lies on a cycle iff it is reachable from one of its successors
        for a in q.out_arrows[v]:
            if v in _reachable(q, a.target):
                on_cycle.add(v)
                break
    return on_cycle


def reaches_cycle(q: Quiver, v: str) -> bool:
    """True iff some directed walk from v meets a vertex on a directed cycle."""
    q.require_vertex(v)
    cyc = _cycle_vertices(q)
    return bool(cyc.intersection(_reachable(q, v)))


def connected_components(q: Quiver) -> list[list[str]]:
    """Components of the underlying undirected graph, each sorted, ordered by
    first vertex."""
    q.require_valid()
    neighbors: dict[str, set[str]] = {v: set() for v in q.vertices}
    for a in q.arrows:
        neighbors[a.source].add(a.target)
        neighbors[a.target].add(a.source)
    seen: set[str] = set()
    comps = []
    for v in sorted(q.vertices):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            w = stack.pop()
            for u in neighbors[w]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def one_outgoing_condition(q: Quiver) -> tuple[bool, list[dict]]:
    """Per component: a single arrowless vertex, or exactly one outgoing arrow
    at every vertex.  Returns the global verdict and per-component findings."""
    q.require_valid()
    details = []
    ok_all = True
    for comp in connected_components(q):
        counts = {v: len(q.out_arrows[v]) for v in comp}
        incident = any(counts[v] > 0 or q.in_arrows[v] for v in comp)
        trivial = len(comp) == 1 and not incident
        violations = [] if trivial else [(v, c) for v, c in counts.items() if c != 1]
        ok = trivial or not violations
        ok_all = ok_all and ok
        details.append({
            "vertices": comp,
            "trivial": trivial,
            "ok": ok,
            "violations": violations,
        })
    return ok_all, details


def one_incoming_condition(q: Quiver) -> tuple[bool, list[dict]]:
    ok, details = one_outgoing_condition(q.reversed())
    return ok, details


def parse_path(q: Quiver, text: str) -> Path:
    """Parse "vertexId" or dot-joined arrow identifiers."""
    q.require_valid()
    text = text.strip()
    if not text:
        raise QuiverError("empty path")
    if "." not in text:
        if text in set(q.vertices):
            return Path.trivial(text)
        if text in q.arrow_map:
            return q.arrow_path(text)
        raise QuiverError(f"unknown path {text!r}")
    return q.path_from_arrows(text.split("."))
