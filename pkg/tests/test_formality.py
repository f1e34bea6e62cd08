import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rht.cohomology import LieAlgebra, chevalley_eilenberg, cohomology
from rht.errors import NotDefined, NotNilpotent, NotOneFormal
from rht.formality import (heisenberg_check, is_nilpotent, massey_scan, massey_triple, one_formal,
                           quadratic_presentation, sasakian_obstruction, weight_count_check)
from rht.minimal import build_tower

from conftest import abelian, filiform5, h3_plus_r2, heisenberg

FIXTURES = [heisenberg(1), heisenberg(2), heisenberg(3), filiform5(), h3_plus_r2()] + [abelian(m) for m in (3, 5, 7)]


def report(g):
    return one_formal(build_tower(chevalley_eilenberg(g)))


@pytest.mark.parametrize("n,verdict,dims", [(1, False, [1, 0, 2]), (2, True, [6, 5, 5]), (3, True, [15, 14, 14])])
def test_heisenberg_formality_dichotomy(n, verdict, dims):
    r = report(heisenberg(n))
    assert r.verdict is verdict
    assert r.h2_dims == dims
    assert not r.provisional
    assert (r.witness is None) == verdict


def test_h3_witness_is_outside_cup_image():
    r = report(heisenberg(1))
    assert r.witness is not None and r.witness.degree == 2


@pytest.mark.parametrize("g", [filiform5(), h3_plus_r2()], ids=lambda g: g.name)
def test_non_heisenberg_nilpotent_not_formal(g):
    assert not report(g).verdict


def test_abelian_formal():
    assert report(abelian(4)).verdict


def _permuted(g: LieAlgebra, perm):
    # relabel basis e_i -> f_{perm[i]} and re-enter brackets with i < j
    names = [f"f{perm[i]}" for i in range(g.dim)]
    order = sorted(range(g.dim), key=lambda i: perm[i])
    sc = {}
    for (i, j), val in g.structure_constants.items():
        a, b = names[i], names[j]
        sign = 1
        if perm[i] > perm[j]:
            a, b, sign = b, a, -1
        sc[a, b] = {names[k]: sign * c for k, c in val.items()}
    return LieAlgebra([names[i] for i in order], sc, name=g.name + "'")


@pytest.mark.parametrize("g", FIXTURES[:5], ids=lambda g: g.name)
@given(data=st.data())
def test_verdict_invariant_under_generator_order(g, data):
    perm = data.draw(st.permutations(range(1, g.dim + 1)))
    a, b = report(g), report(_permuted(g, perm))
    assert a.verdict == b.verdict and a.h2_dims == b.h2_dims


# --- Massey products

def test_massey_h3_by_hand():
    ce = chevalley_eilenberg(heisenberg(1))
    x1, x2, x3 = ce.gens()
    h1 = cohomology(ce, 1)
    a, b = h1.class_of(x1), h1.class_of(x2)
    val = massey_triple(ce, a, a, b)
    # xi = 0 (x1 x1 = 0), zeta = -x3 (d(-x3) = x1 x2), value = x1 * zeta = -x1 x3
    assert val.representative.coordinates == cohomology(ce, 2).project(-(x1 * x3))
    assert val.indeterminacy.dim == 0
    assert val.nonzero_mod_indeterminacy


def test_massey_not_defined():
    ce = chevalley_eilenberg(abelian(3))
    h1 = cohomology(ce, 1)
    a, b = h1.classes[0], h1.classes[1]
    with pytest.raises(NotDefined):
        massey_triple(ce, a, b, a)


def test_massey_h5_scan_vanishes():
    t = time.perf_counter()
    vals = massey_scan(chevalley_eilenberg(heisenberg(2)))
    assert time.perf_counter() - t < 10
    assert vals and not any(v.nonzero_mod_indeterminacy for _, v in vals)


@pytest.mark.parametrize("g", FIXTURES, ids=lambda g: g.name)
def test_formal_iff_massey_vanish(g):
    ce = chevalley_eilenberg(g)
    nonzero = any(v.nonzero_mod_indeterminacy for _, v in massey_scan(ce))
    assert report(g).verdict == (not nonzero)


# --- quadratic presentations

@pytest.mark.parametrize("g,gens,rels", [(heisenberg(2), 4, 5), (heisenberg(3), 6, 14), (abelian(3), 3, 3)],
                         ids=["h5", "h7", "ab3"])
def test_quadratic_presentation_sizes(g, gens, rels):
    qp = quadratic_presentation(build_tower(chevalley_eilenberg(g)))
    assert len(qp.generators) == gens and len(qp.relations) == rels


def test_h5_relations_annihilate_symplectic_form():
    tower = build_tower(chevalley_eilenberg(heisenberg(2)))
    qp = quadratic_presentation(tower)
    dv = tower.stages[1].differential[0]
    form = {(m[0][0], m[1][0]): c for m, c in dv.items()}
    for r in qp.relations:
        assert sum(c * form.get(ij, 0) for ij, c in r.items()) == 0


def test_quadratic_presentation_refuses_non_formal():
    with pytest.raises(NotOneFormal):
        quadratic_presentation(build_tower(chevalley_eilenberg(heisenberg(1))))


# --- nilmanifold checks

@pytest.mark.parametrize("g,expected", [(heisenberg(1), True), (heisenberg(2), True), (heisenberg(3), True),
                                        (abelian(5), False), (filiform5(), False), (h3_plus_r2(), False)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_heisenberg_check(g, expected):
    assert heisenberg_check(g) is expected


def test_heisenberg_check_preconditions():
    with pytest.raises(ValueError):
        heisenberg_check(abelian(4))
    nonnil = LieAlgebra(["e1", "e2", "e3"], {("e1", "e2"): {"e2": 1}})
    assert not is_nilpotent(nonnil)
    with pytest.raises(NotNilpotent):
        heisenberg_check(nonnil)


def test_sasakian_obstruction():
    h5 = sasakian_obstruction(heisenberg(2))
    assert h5.verdict and all(c.passed for c in h5.checks)
    f5 = {c.name: c.passed for c in sasakian_obstruction(filiform5()).checks}
    assert f5["b1_equals_2n"] is False
    ab5 = {c.name: c.passed for c in sasakian_obstruction(abelian(5)).checks}
    assert ab5 == {"b1_equals_2n": False, "heisenberg": False}


def test_weight_count_check():
    assert weight_count_check({(1, 0): 2, (0, 1): 2, (1, 1): 1}, 2)
    assert not weight_count_check({(1, 0): 1, (0, 1): 1, (2, 1): 1}, 1)
    assert not weight_count_check({}, 0)


@given(st.integers(1, 4), st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(0, 4),
                                           max_size=5))
def test_weight_count_forces_2n_and_1(n, dims):
    if weight_count_check(dims, n):
        w = {}
        for (p, q), d in dims.items():
            if d:
                w[p + q] = w.get(p + q, 0) + d
        assert w == {1: 2 * n, 2: 1}
