import pytest
from hypothesis import given
from hypothesis import strategies as st

from rht.cohomology import chevalley_eilenberg
from rht.formality import QuadraticPresentation, quadratic_presentation
from rht.linalg import Subspace
from rht.malcev import (bracket_preserved, dualize, invariants, lyndon_element, lyndon_words, malcev_summary,
                        nilpotency_class, presented_level_dims, presented_quotient_dims, witt_dimension)
from rht.minimal import build_tower

from conftest import abelian, filiform5, heisenberg

ROUNDTRIP = [heisenberg(1), heisenberg(2), heisenberg(3), filiform5()] + [abelian(m) for m in range(3, 8)]


@pytest.mark.parametrize("g", ROUNDTRIP, ids=lambda g: g.name)
def test_dualize_recovers_invariants(g):
    lt = dualize(build_tower(chevalley_eilenberg(g)))
    assert invariants(lt.levels[-1]) == invariants(g)


def test_f5_levels_and_projections():
    lt = dualize(build_tower(chevalley_eilenberg(filiform5())))
    assert lt.dims == (2, 3, 4, 5)
    for p, big, small in zip(lt.projections, lt.levels[1:], lt.levels):
        assert bracket_preserved(p, big, small)
    assert nilpotency_class(lt.levels[-1]) == 4


def test_summary_limit_brackets():
    s = malcev_summary(dualize(build_tower(chevalley_eilenberg(heisenberg(1)))))
    assert s["level_dims"] == [2, 3] and s["stabilized"] and s["nilpotency_class"] == 2
    assert len(s["limit"]["brackets"]) == 1


def test_h5_presentation_quotient_matches_levels():
    tower = build_tower(chevalley_eilenberg(heisenberg(2)))
    qp = quadratic_presentation(tower)
    assert (len(qp.generators), len(qp.relations)) == (4, 5)
    lt = dualize(tower)
    assert presented_level_dims(qp, 2) == list(lt.dims) == [4, 5]
    # the quotient is 2-step: nothing new in degree 3 and beyond
    assert presented_quotient_dims(qp, 4) == [4, 1, 0, 0]


def test_h7_presentation_quotient():
    qp = quadratic_presentation(build_tower(chevalley_eilenberg(heisenberg(3))))
    assert presented_level_dims(qp, 3) == [6, 7, 7]


@pytest.mark.parametrize("m,k,expected", [(2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (2, 5, 6), (3, 2, 3), (3, 3, 8)])
def test_witt_formula_values(m, k, expected):
    assert witt_dimension(m, k) == expected


@given(st.integers(1, 3), st.integers(1, 6))
def test_lyndon_count_is_witt(m, k):
    assert len(lyndon_words(m, k)) == witt_dimension(m, k)


@given(st.integers(1, 3), st.integers(1, 5))
def test_lyndon_elements_independent(m, k):
    elems = [lyndon_element(w) for w in lyndon_words(m, k)]
    words = sorted({w for e in elems for w in e})
    vecs = [[e.get(w, 0) for w in words] for e in elems]
    assert Subspace.span(len(words), vecs).dim == len(elems)


def test_free_quotient_without_relations_is_free():
    qp = QuadraticPresentation(("X1", "X2"), ())
    assert presented_quotient_dims(qp, 5) == [witt_dimension(2, k) for k in range(1, 6)]
