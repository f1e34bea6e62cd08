import pytest
from hypothesis import given
from hypothesis import strategies as st

from rht.cohomology import chevalley_eilenberg, cohomology_dga
from rht.errors import TruncationError
from rht.gca import FDGA, DGAMorphism, FreeCDGA
from rht.linalg import SparseMatrix

from conftest import heisenberg


def mixed() -> FreeCDGA:
    # odd generators x, y, u and one even generator z; d^2 = 0 by hand
    gens = [("x", 1), ("y", 1), ("u", 1), ("z", 2)]
    x, y, u, z = FreeCDGA(gens).gens()
    return FreeCDGA(gens, {"u": (x * y).terms, "z": (x * y * u).terms}, name="mixed")


ALGEBRAS = {"mixed": mixed(), "ce_h5": chevalley_eilenberg(heisenberg(2))}


def element(alg, degree):
    keys = alg.degree_slice(degree)
    return st.lists(st.integers(-2, 2), min_size=len(keys), max_size=len(keys)).map(
        lambda cs: alg.from_vector(cs, degree))


def pair_of_elements(alg, max_total):
    return st.tuples(st.integers(0, max_total), st.integers(0, max_total)).filter(
        lambda t: t[0] + t[1] <= max_total).flatmap(lambda t: st.tuples(element(alg, t[0]), element(alg, t[1])))


@pytest.mark.parametrize("name", list(ALGEBRAS))
@given(data=st.data())
def test_koszul_sign_rule(name, data):
    alg = ALGEBRAS[name]
    a, b = data.draw(pair_of_elements(alg, 3))
    if not a or not b:
        return
    sign = -1 if (a.degree * b.degree) % 2 else 1
    assert a * b == sign * (b * a)


@pytest.mark.parametrize("name", list(ALGEBRAS))
@given(data=st.data())
def test_leibniz(name, data):
    alg = ALGEBRAS[name]
    a, b = data.draw(pair_of_elements(alg, 3))
    if not a:
        return
    sign = -1 if a.degree % 2 else 1
    assert (a * b).d() == a.d() * b + sign * (a * b.d())


@given(data=st.data())
def test_associativity(data):
    alg = ALGEBRAS["mixed"]
    a = data.draw(element(alg, 1))
    b = data.draw(element(alg, 1))
    c = data.draw(element(alg, 2))
    assert (a * b) * c == a * (b * c)


def test_odd_squares_vanish_and_even_do_not():
    A = mixed()
    x, y, u, z = A.gens()
    assert not x * x
    assert z * z
    assert x * y == -(y * x)
    assert z * x == x * z


def test_d_squared_report():
    assert mixed().check_d_squared().passed
    A0 = FreeCDGA([("x", 1), ("y", 1), ("z", 1), ("w", 1), ("u", 1)])
    x, y, z, w, u = A0.gens()
    bad = FreeCDGA([("x", 1), ("y", 1), ("z", 1), ("w", 1), ("u", 1)], {"z": (x * y).terms, "y": (w * u).terms})
    rep = bad.check_d_squared()
    assert not rep.passed
    assert [name for name, _ in rep.violations] == ["z"]


def test_degree_check_on_differential():
    A = FreeCDGA([("x", 1), ("y", 1)])
    with pytest.raises(ValueError):
        FreeCDGA([("x", 1), ("y", 1)], {"y": A.gens()[0].terms})


def test_truncation_enforced():
    A = FreeCDGA([("z", 2)], truncation_degree=4)
    z = A.gens()[0]
    assert (z * z).degree == 4
    with pytest.raises(TruncationError):
        z * z * z


def test_fdga_axioms_on_cohomology_ring():
    H = cohomology_dga(chevalley_eilenberg(heisenberg(1)))
    assert all(ok for _, ok, _ in H.check_axioms())


def test_fdga_detects_broken_commutativity():
    good = FDGA({0: ["1"], 1: ["a"], 2: ["b"], 3: ["c"]}, {("a", "b"): {"c": 1}})
    assert all(ok for _, ok, _ in good.check_axioms())
    bad = FDGA({0: ["1"], 1: ["a", "b"], 2: ["c"]}, {("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}})
    assert not dict((n, ok) for n, ok, _ in bad.check_axioms())["graded_commutative"]


def test_morphism_identity_and_chain_check():
    A = chevalley_eilenberg(heisenberg(1))
    assert DGAMorphism.identity(A).check() == []
    # x3 -> 0 does not commute with d
    x1, x2, x3 = A.gens()
    phi = DGAMorphism(A, A, images={0: x1, 1: x2, 2: A.zero()})
    assert phi.check()


def test_fdga_differential_shape_checked():
    with pytest.raises(ValueError):
        FDGA({0: ["1"], 1: ["a", "b"]}, {}, {0: SparseMatrix(1, 1)})
