import pytest
import sympy

from rht.cohomology import betti_numbers, chevalley_eilenberg
from rht.dsl import load
from rht.errors import ValidationFailed
from rht.hodge import DECREASING, Filtration, mhd_check, spectral_E1
from rht.linalg import Subspace
from rht.sasaki import (build_model, heisenberg_ring, hodge_split_check, mhd_fixture, mhs_splitting,
                        sasaki_pipeline, surface_product_ring, validate_basic_ring)

from conftest import heisenberg

RINGS = [heisenberg_ring(1), heisenberg_ring(2), heisenberg_ring(3), surface_product_ring()]


def gysin_betti(r):
    """b_k = dim coker(L: H^{k-2} -> H^k) + dim ker(L: H^{k-1} -> H^{k+1}), ranks by sympy."""
    ring = r.ring
    top = 2 * r.n

    def rank_L(k):
        src = ring.dim(k)
        if not src or not ring.dim(k + 2):
            return 0
        cols = []
        for x in ring.basis_elements(k):
            prod = x * r.omega
            cols.append([complex(c) if not hasattr(c, "numerator") else c for c in ring.to_vector(prod, k + 2)]
                        if prod else [0] * ring.dim(k + 2))
        return sympy.Matrix(cols).T.rank()

    out = []
    for k in range(top + 2):
        coker = ring.dim(k) - (rank_L(k - 2) if k >= 2 else 0)
        ker = ring.dim(k - 1) - rank_L(k - 1) if k >= 1 else 0
        out.append(coker + ker)
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_model_cohomology_matches_heisenberg(n):
    m = build_model(heisenberg_ring(n))
    assert m.cohomology_dims() == betti_numbers(chevalley_eilenberg(heisenberg(n)), range(2 * n + 2))


@pytest.mark.parametrize("r", RINGS, ids=lambda r: r.name)
def test_model_cohomology_gysin_oracle(r):
    assert build_model(r).cohomology_dims() == gysin_betti(r)


def test_sigma2xT2_numbers():
    m = build_model(surface_product_ring())
    assert m.cohomology_dims() == [1, 6, 9, 9, 6, 1]


@pytest.mark.parametrize("r", RINGS, ids=lambda r: r.name)
def test_model_axioms(r):
    m = build_model(r)
    assert all(ok for _, ok, _ in m.A.check_axioms())


@pytest.mark.parametrize("r", RINGS, ids=lambda r: r.name)
def test_validation_passes(r):
    rep = validate_basic_ring(r)
    assert rep.passed, rep.as_dict()
    assert rep.check("poincare_duality").passed


def test_bad_omega_rejected(corpus):
    r = load((corpus / "bad_omega.ring").read_text())
    rep = validate_basic_ring(r)
    assert not rep.passed
    assert not rep.check("omega_type_11").passed
    assert rep.check("hodge_decomposition").passed
    with pytest.raises(ValidationFailed):
        build_model(r)


def test_n_mismatch():
    with pytest.raises(ValueError):
        build_model(heisenberg_ring(2), n=3)


def test_corpus_rings_match_builtins(corpus):
    for fname, builtin in (("heis5.ring", heisenberg_ring(2)), ("sigma2xT2.ring", surface_product_ring())):
        r = load((corpus / fname).read_text())
        assert build_model(r).cohomology_dims() == build_model(builtin).cohomology_dims()


def test_hodge_split_h5():
    m = build_model(heisenberg_ring(2))
    assert mhs_splitting(m, 1).dims() == {(1, 0): 2, (0, 1): 2}
    assert mhs_splitting(m, 2).dims() == {(2, 0): 1, (1, 1): 3, (0, 2): 1}
    assert mhs_splitting(m, 5).dims() == {(3, 3): 1}
    assert hodge_split_check(m).passed


def test_hodge_split_h3_not_weight_two():
    m = build_model(heisenberg_ring(1))
    rep = hodge_split_check(m)
    assert rep.splits[2] == {(1, 2): 1, (2, 1): 1}
    assert rep.passed and rep.findings


@pytest.mark.parametrize("r", RINGS[:2] + RINGS[3:], ids=lambda r: r.name)
def test_mhd_axioms_and_degeneration(r):
    m = build_model(r)
    rep = mhd_check(*mhd_fixture(m))
    assert rep.passed, rep.as_dict()
    pages = spectral_E1(m.A, m.W)
    assert pages.totals(2) == m.cohomology_dims()


def test_heis5_e1_columns():
    m = build_model(heisenberg_ring(2))
    pages = spectral_E1(m.A, m.W)
    assert pages.column(1, -1) == [1, 4, 6, 4, 1]
    assert pages.column(1, 0) == [1, 4, 6, 4, 1]


def test_mhd_rejects_bad_hodge_filtration():
    m = build_model(heisenberg_ring(2))
    A, W, E, WE, _, phi = mhd_fixture(m)
    F = {k: Filtration(A.dim(k), DECREASING, {0: Subspace.full(A.dim(k)), 1: Subspace.zero(A.dim(k))})
         for k in W}
    rep = mhd_check(A, W, E, WE, F, phi)
    assert not rep.passed
    assert not rep.axiom_passed(3)
    assert rep.axiom_passed(1)


@pytest.mark.parametrize("r", [heisenberg_ring(2), heisenberg_ring(3), surface_product_ring()], ids=lambda r: r.name)
def test_pipeline_one_formal(r):
    out = sasaki_pipeline(r)
    assert out["one_formal"] is True
    assert out["v2_types_weight_2"]
    assert {tuple(t) for t in out["v1_types"]} == {(1, 0), (0, 1)}
    assert {tuple(t) for t in out["v2_types"]} <= {(2, 0), (1, 1), (0, 2)}


def test_pipeline_heis5_presentation():
    out = sasaki_pipeline(heisenberg_ring(2))
    assert out["quadratic_presentation"] == {"generators": 4, "relations": 5}
    assert out["tower_counts"] == [4, 1]


def test_pipeline_n1_not_formal():
    out = sasaki_pipeline(heisenberg_ring(1))
    assert out["one_formal"] is False
    assert not out["n_hypothesis_met"]
