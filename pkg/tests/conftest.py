"""Shared instances: the small quivers and coalgebras every suite exercises."""
from __future__ import annotations

import pytest

from pathcoalg.coalgebra import Element, Subcoalgebra, subcoalgebra_closure
from pathcoalg.fields import QQ
from pathcoalg.quiver import Quiver, enumerate_paths


def element(quiver: Quiver, terms_by_text: dict[str, object], field=QQ) -> Element:
    """Build an element from {path text: coefficient}."""
    from pathcoalg.quiver import parse_path
    terms = {}
    for text, c in terms_by_text.items():
        p = parse_path(quiver, text)
        terms[p] = c if not isinstance(c, int) else field.of_int(c)
    return Element(quiver, field, terms)


def full_monomial(quiver: Quiver, max_len: int, field=QQ) -> Subcoalgebra:
    return Subcoalgebra.monomial_from_paths(
        quiver, field, enumerate_paths(quiver, max_len=max_len))


@pytest.fixture
def chain2_q() -> Quiver:
    return Quiver(["x", "y"], [("a", "x", "y")])


@pytest.fixture
def chain2_C(chain2_q) -> Subcoalgebra:
    return full_monomial(chain2_q, 1)


@pytest.fixture
def chain3_q() -> Quiver:
    return Quiver(["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z")])


@pytest.fixture
def loop_q() -> Quiver:
    return Quiver(["u"], [("lam", "u", "u")])


@pytest.fixture
def cycle2_q() -> Quiver:
    return Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])


@pytest.fixture
def cycle2_C2(cycle2_q) -> Subcoalgebra:
    return full_monomial(cycle2_q, 2)


@pytest.fixture
def branching_q() -> Quiver:
    return Quiver(["r", "s", "sp", "t"],
                  [("alpha", "r", "s"), ("beta", "s", "t"),
                   ("alphap", "r", "sp"), ("betap", "sp", "t")])


@pytest.fixture
def branching_C5(branching_q) -> Subcoalgebra:
    """The monomial coalgebra with basis {r, s, sp, alpha, alphap}."""
    from pathcoalg.quiver import parse_path
    paths = [parse_path(branching_q, t) for t in ["r", "s", "sp", "alpha", "alphap"]]
    return Subcoalgebra.monomial_from_paths(branching_q, QQ, paths)


@pytest.fixture
def branching_C9(branching_q) -> Subcoalgebra:
    """The non-monomial coalgebra: closure of alpha.beta + alphap.betap."""
    gen = element(branching_q, {"alpha.beta": 1, "alphap.betap": 1})
    return subcoalgebra_closure(branching_q, [gen], max_len=2)


@pytest.fixture
def discrete3_q() -> Quiver:
    return Quiver(["d1", "d2", "d3"], [])
