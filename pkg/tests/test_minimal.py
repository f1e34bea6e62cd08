import pytest

from rht.cohomology import chevalley_eilenberg, cohomology
from rht.errors import NonConnected
from rht.formality import lower_central_dims
from rht.gca import FDGA
from rht.linalg import kernel_basis
from rht.minimal import build_tower, check_tower, degree_one_matrix, phi_on_h2, stage1, tower_as_cdga
from rht.linalg import rank

from conftest import abelian, filiform5, h3_plus_r2, heisenberg

CASES = [(heisenberg(1), (2, 1)), (heisenberg(2), (4, 1)), (heisenberg(3), (6, 1)), (abelian(3), (3,)),
         (filiform5(), (2, 1, 1, 1)), (h3_plus_r2(), (4, 1))]


@pytest.mark.parametrize("g,counts", CASES, ids=lambda x: getattr(x, "name", str(x)))
def test_generator_counts(g, counts):
    tower = build_tower(chevalley_eilenberg(g))
    assert tower.generator_counts == counts
    assert tower.stabilized
    assert check_tower(tower) == []


@pytest.mark.parametrize("g,counts", CASES, ids=lambda x: getattr(x, "name", str(x)))
def test_counts_match_lower_central_quotients(g, counts):
    # for a nilpotent g the stages are dual to gamma_n / gamma_{n+1}
    dims = lower_central_dims(g)
    quotients = tuple(a - b for a, b in zip(dims, dims[1:]) if a - b)
    assert quotients == counts


def test_stage_one_is_h1():
    ce = chevalley_eilenberg(heisenberg(2))
    s = stage1(ce)
    assert s.dim == cohomology(ce, 1).betti == 4
    assert all(not d for d in s.differential)


def test_last_stage_is_injective_on_h2():
    tower = build_tower(chevalley_eilenberg(filiform5()))
    assert kernel_basis(phi_on_h2(tower)).dim == 0


def test_degree_one_map_is_iso_for_nilpotent():
    g = heisenberg(2)
    tower = build_tower(chevalley_eilenberg(g))
    m = degree_one_matrix(tower)
    assert m.rows == m.cols == g.dim and rank(m) == g.dim


def test_max_stage_stops_early():
    tower = build_tower(chevalley_eilenberg(filiform5()), max_stage=2)
    assert tower.generator_counts == (2, 1)
    assert not tower.stabilized and tower.pending_dim == 1


def test_stage_cdga_is_one_minimal():
    tower = build_tower(chevalley_eilenberg(filiform5()))
    for n in range(1, tower.last + 1):
        assert tower_as_cdga(tower, n).is_one_minimal


def test_non_connected_target():
    A = FDGA({0: ["1", "e"], 1: ["a"]}, {("e", "e"): {"e": 1}, ("e", "a"): {"a": 1}}, unit="1")
    with pytest.raises(NonConnected):
        build_tower(A)


def test_bad_max_stage():
    with pytest.raises(ValueError):
        build_tower(chevalley_eilenberg(abelian(2)), max_stage=0)
