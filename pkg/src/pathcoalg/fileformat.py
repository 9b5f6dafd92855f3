"""Workbench files: named quivers and coalgebras over one scalar field, in a
line-oriented text format.

    # comment
    field rational            # or "field gf 5"; once, before any block

    quiver Q
      vertex x
      vertex y
      arrow a x y             # name source target; vertices declared first
    end

    coalgebra C over Q
      mode monomial           # or "mode general"; monomial is the default
      path x                  # a vertex, or arrows joined by dots: a.b
      allpaths maxlen 2       # every path up to the bound
      element g = 1 a.b + -1 c.d   # general mode only
    end

Monomial blocks must list a prefix- and suffix-closed path set; general
blocks close their generators under comultiplication.  serialize emits a
canonical form: parse(serialize(x)) reconstructs equal objects, and the text
is byte-stable from the second pass on.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .coalgebra import CoalgebraError, Element, Subcoalgebra, subcoalgebra_closure
from .fields import FieldError, field_by_name
from .quiver import Path, Quiver, QuiverError, enumerate_paths, parse_path


class FileFormatError(ValueError):
    """Syntax or semantic error in a workbench file, positioned by line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class WorkbenchFile:
    field: object
    quivers: dict[str, Quiver] = dc_field(default_factory=dict)
    coalgebras: dict[str, Subcoalgebra] = dc_field(default_factory=dict)
    coalgebra_quiver: dict[str, str] = dc_field(default_factory=dict)

    def __post_init__(self):
        for name, C in self.coalgebras.items():
            qname = self.coalgebra_quiver.get(name)
            if qname is None or qname not in self.quivers:
                raise CoalgebraError(f"coalgebra {name} references no known quiver")
            if C.quiver != self.quivers[qname]:
                raise CoalgebraError(
                    f"coalgebra {name} does not live in quiver {qname}")
            if C.field != self.field:
                raise CoalgebraError(f"coalgebra {name} uses a different field")

    def quiver(self, name: str) -> Quiver:
        if name not in self.quivers:
            raise CoalgebraError(f"unknown quiver {name!r}")
        return self.quivers[name]

    def coalgebra(self, name: str) -> Subcoalgebra:
        if name not in self.coalgebras:
            raise CoalgebraError(f"unknown coalgebra {name!r}")
        return self.coalgebras[name]

    def __eq__(self, other) -> bool:
        return (isinstance(other, WorkbenchFile)
                and other.field == self.field
                and other.quivers == self.quivers
                and other.coalgebras == self.coalgebras
                and other.coalgebra_quiver == self.coalgebra_quiver)


def parse_element_expr(quiver: Quiver, field, text: str) -> Element:
    """"c1 P1 + c2 P2 + ..." with scalar literals of the ambient field, or
    "0" for the zero element.  Repeated paths accumulate."""
    text = text.strip()
    if text == "0":
        return Element.zero(quiver, field)
    terms: dict[Path, object] = {}
    for part in text.split("+"):
        bits = part.split()
        if len(bits) != 2:
            raise CoalgebraError(
                f"bad term {' '.join(bits)!r}: expected 'coefficient path'")
        c = field.parse(bits[0])
        p = parse_path(quiver, bits[1])
        c = field.add(terms.get(p, field.zero), c)
        if field.is_zero(c):
            terms.pop(p, None)
        else:
            terms[p] = c
    return Element(quiver, field, terms)


class _Parser:
    def __init__(self, text: str):
        self.wf = WorkbenchFile(field=None)
        self.field_line: int | None = None
        self.saw_block = False
        self.lines = text.splitlines()

    def fail(self, n: int, message: str) -> None:
        raise FileFormatError(n, message)

    def run(self) -> WorkbenchFile:
        block: list[tuple[int, list[str]]] | None = None
        header: tuple[int, list[str]] | None = None
        for n, raw in enumerate(self.lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if block is None:
                if tokens[0] == "field":
                    self.read_field(n, tokens)
                elif tokens[0] in ("quiver", "coalgebra"):
                    header, block = (n, tokens), []
                elif tokens[0] == "end":
                    self.fail(n, "'end' outside a block")
                else:
                    self.fail(n, f"expected a block header, got {tokens[0]!r}")
            elif tokens == ["end"]:
                self.finish_block(header, block)
                header, block = None, None
            else:
                block.append((n, tokens))
        if block is not None:
            self.fail(header[0], f"block {header[1][1]!r} is never closed")
        if self.wf.field is None:
            self.wf.field = field_by_name("rational")
        return self.wf

    def read_field(self, n: int, tokens: list[str]) -> None:
        if self.saw_block:
            self.fail(n, "field declaration must precede every block")
        if self.field_line is not None:
            self.fail(n, f"field already declared on line {self.field_line}")
        try:
            self.wf.field = field_by_name(" ".join(tokens[1:]))
        except FieldError as exc:
            self.fail(n, str(exc))
        self.field_line = n

    def finish_block(self, header: tuple[int, list[str]],
                     body: list[tuple[int, list[str]]]) -> None:
        self.saw_block = True
        if self.wf.field is None:
            self.wf.field = field_by_name("rational")
        n, tokens = header
        if tokens[0] == "quiver":
            if len(tokens) != 2:
                self.fail(n, "expected 'quiver NAME'")
            self.read_quiver(n, tokens[1], body)
        else:
            if len(tokens) != 4 or tokens[2] != "over":
                self.fail(n, "expected 'coalgebra NAME over QUIVERNAME'")
            self.read_coalgebra(n, tokens[1], tokens[3], body)

    def check_fresh(self, n: int, kind: str, name: str) -> None:
        if name in self.wf.quivers or name in self.wf.coalgebras:
            self.fail(n, f"duplicate {kind} name {name!r}")

    def read_quiver(self, n: int, name: str, body: list[tuple[int, list[str]]]) -> None:
        self.check_fresh(n, "quiver", name)
        vertices: list[str] = []
        arrows: list[tuple[str, str, str]] = []
        declared: set[str] = set()
        for ln, tokens in body:
            if tokens[0] == "vertex" and len(tokens) == 2:
                vertices.append(tokens[1])
                declared.add(tokens[1])
            elif tokens[0] == "arrow" and len(tokens) == 4:
                if tokens[2] not in declared:
                    self.fail(ln, f"arrow {tokens[1]!r} references undeclared vertex {tokens[2]!r}")
                if tokens[3] not in declared:
                    self.fail(ln, f"arrow {tokens[1]!r} references undeclared vertex {tokens[3]!r}")
                arrows.append((tokens[1], tokens[2], tokens[3]))
            else:
                self.fail(ln, "expected 'vertex ID' or 'arrow ID SOURCE TARGET'")
        q = Quiver(vertices, arrows)
        if not q.is_valid:
            self.fail(n, f"invalid quiver {name!r}: {q.diagnostics[0]}")
        self.wf.quivers[name] = q

    def read_coalgebra(self, n: int, name: str, qname: str,
                       body: list[tuple[int, list[str]]]) -> None:
        self.check_fresh(n, "coalgebra", name)
        if qname not in self.wf.quivers:
            self.fail(n, f"unknown quiver {qname!r}")
        quiver = self.wf.quivers[qname]
        field = self.wf.field
        mode: str | None = None
        paths: list[Path] = []
        generators: list[Element] = []
        for ln, tokens in body:
            kind = tokens[0]
            if kind == "mode":
                if mode is not None:
                    self.fail(ln, "mode already set for this block")
                if len(tokens) != 2 or tokens[1] not in ("monomial", "general"):
                    self.fail(ln, "expected 'mode monomial' or 'mode general'")
                mode = tokens[1]
            elif kind == "path":
                if len(tokens) != 2:
                    self.fail(ln, "expected 'path P'")
                try:
                    paths.append(parse_path(quiver, tokens[1]))
                except QuiverError as exc:
                    self.fail(ln, str(exc))
            elif kind == "allpaths":
                if len(tokens) != 3 or tokens[1] != "maxlen":
                    self.fail(ln, "expected 'allpaths maxlen L'")
                try:
                    bound = int(tokens[2])
                except ValueError:
                    self.fail(ln, f"bad length bound {tokens[2]!r}")
                try:
                    paths.extend(enumerate_paths(quiver, max_len=bound))
                except QuiverError as exc:
                    self.fail(ln, str(exc))
            elif kind == "element":
                if len(tokens) < 3 or tokens[2] != "=":
                    self.fail(ln, "expected 'element NAME = c1 P1 + c2 P2 + ...'")
                try:
                    generators.append(
                        parse_element_expr(quiver, field, " ".join(tokens[3:])))
                except (CoalgebraError, QuiverError, FieldError) as exc:
                    self.fail(ln, str(exc))
            else:
                self.fail(ln, f"unexpected {kind!r} in a coalgebra block")
        if mode is None:
            mode = "general" if generators else "monomial"
        if mode == "monomial" and generators:
            self.fail(n, "element lines need 'mode general'")
        try:
            if mode == "monomial":
                C = Subcoalgebra.monomial_from_paths(quiver, field, paths)
            else:
                gens = generators + [Element.from_path(quiver, field, p)
                                     for p in paths]
                bound = max((g.max_support_len() for g in gens), default=0)
                C = subcoalgebra_closure(quiver, gens, bound, field=field)
        except CoalgebraError as exc:
            self.fail(n, f"coalgebra {name!r}: {exc}")
        self.wf.coalgebras[name] = C
        self.wf.coalgebra_quiver[name] = qname


def parse(text: str) -> WorkbenchFile:
    return _Parser(text).run()


def serialize(wf: WorkbenchFile) -> str:
    out = [f"field {wf.field.name}"]
    for name, q in wf.quivers.items():
        out.append("")
        out.append(f"quiver {name}")
        for v in q.vertices:
            out.append(f"  vertex {v}")
        for a in q.arrows:
            out.append(f"  arrow {a.name} {a.source} {a.target}")
        out.append("end")
    for name, C in wf.coalgebras.items():
        out.append("")
        out.append(f"coalgebra {name} over {wf.coalgebra_quiver[name]}")
        if C.monomial:
            out.append("  mode monomial")
            for p in C.path_basis():
                out.append(f"  path {p}")
        else:
            out.append("  mode general")
            for i, b in enumerate(C.basis):
                out.append(f"  element g{i + 1} = {b}")
        out.append("end")
    return "\n".join(out) + "\n"
