"""1-formality verdicts, Massey triple products and the nilmanifold checks.

The verdict follows the surjectivity criterion: a connected DGA is 1-formal
iff ``H^2(M(1)) -> H^2(M)`` is onto, where ``M`` is its 1-minimal model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .cohomology import CohomologyClass, LieAlgebra, chevalley_eilenberg, cohomology
from .errors import NotDefined, NotNilpotent, NotOneFormal
from .gca import Element
from .linalg import ZERO, SparseMatrix, Subspace, kernel_basis, rank, solve
from .minimal import Tower, tower_as_cdga, tower_morphism


@dataclass
class FormalityReport:
    verdict: bool
    h2_m1_dim: int
    h2_m_dim: int
    image_dim: int
    # a class of H^2(M) outside the image of H^2(M(1)), as an element of M
    witness: Element | None = None
    stabilized: bool = True
    # computed on a truncated tower and not certified by other means
    provisional: bool = False
    certified_by_target: str | None = None

    @property
    def h2_dims(self) -> list[int]:
        return [self.h2_m1_dim, self.image_dim, self.h2_m_dim]

    def as_dict(self) -> dict:
        return {
            "one_formal": self.verdict,
            "h2_dims": self.h2_dims,
            "stabilized": self.stabilized,
            "provisional": self.provisional,
            "certified_by_target": self.certified_by_target,
            "witness": None if self.witness is None else self.witness.algebra.format(self.witness),
        }


def _cup_image_in_target(tower: Tower) -> tuple[Subspace, Subspace]:
    """Images in ``H^2(target)`` of ``H^2(M(1))`` and of ``H^2(M(last))``."""
    target = tower.target
    h2a = cohomology(target, 2)
    phi = tower_morphism(tower, tower.last)
    m = tower_as_cdga(tower, tower.last)
    n1 = tower.stages[0].dim
    m1_keys = [key for key in m.degree_slice(2) if all(g < n1 for g, _ in key)]
    cup = Subspace.span(h2a.betti, (h2a.project(phi.apply(m.basis_element(k))) for k in m1_keys))
    full = Subspace.span(h2a.betti, (h2a.project(phi.apply(c.representative)) for c in cohomology(m, 2).classes))
    return cup, full


def one_formal(tower: Tower, certificate: str | None = None) -> FormalityReport:
    """Surjectivity test on the last stage of ``tower``.

    On an unstabilized tower the verdict describes ``M(last)`` only and is
    flagged provisional, except that a class of ``H^2(target)`` reached by
    ``M(last)`` but not by cup products of ``H^1`` certifies non-formality
    outright. ``certificate`` lets a caller record an external argument
    (such as purity of the weights on ``H^2``) that settles the
    unstabilized case.
    """
    m = tower_as_cdga(tower, tower.last)
    n1 = tower.stages[0].dim
    h2m = cohomology(m, 2)
    m1_keys = [key for key in m.degree_slice(2) if all(g < n1 for g, _ in key)]
    # every element of the exterior algebra on V_1 is closed in M
    img = Subspace.span(h2m.betti, (h2m.project(m.basis_element(k)) for k in m1_keys))
    verdict = img.dim == h2m.betti
    witness = None
    if not verdict:
        for c in h2m.classes:
            if c.coordinates not in img:
                witness = c.representative
                break
    report = FormalityReport(verdict, len(m1_keys), h2m.betti, img.dim, witness, tower.stabilized)
    if not tower.stabilized:
        cup, full = _cup_image_in_target(tower)
        if full.dim > cup.dim:
            report.verdict = False
            report.certified_by_target = "H^2(M(n)) reaches target classes outside the cup-product image"
            if report.witness is None:
                for c in h2m.classes:
                    v = cohomology(tower.target, 2).project(tower_morphism(tower, tower.last).apply(c.representative))
                    if v not in cup:
                        report.witness = c.representative
                        break
        elif certificate:
            report.verdict = True
            report.witness = None
            report.certified_by_target = certificate
        else:
            report.provisional = True
    return report


@dataclass
class MasseyValue:
    representative: CohomologyClass
    indeterminacy: Subspace
    nonzero_mod_indeterminacy: bool

    def as_dict(self) -> dict:
        rep = self.representative
        return {
            "degree": rep.degree,
            "representative": rep.dga.format(rep.representative),
            "coordinates": [str(c) for c in rep.coordinates],
            "indeterminacy_dim": self.indeterminacy.dim,
            "nonzero_mod_indeterminacy": self.nonzero_mod_indeterminacy,
        }


def _product_span(dga, cls: CohomologyClass, k: int, left: bool) -> list[tuple]:
    h = cohomology(dga, cls.degree + k)
    out = []
    for other in cohomology(dga, k).classes:
        p = cls.representative * other.representative if left else other.representative * cls.representative
        out.append(h.project(p) if p else (ZERO,) * h.betti)
    return out


def massey_triple(dga, a: CohomologyClass, b: CohomologyClass, c: CohomologyClass) -> MasseyValue:
    """``<a, b, c> = [xi*c - (-1)^|a| a*zeta]`` with ``d xi = ab``, ``d zeta = bc``."""
    for x in (a, b, c):
        if x.dga is not dga:
            raise ValueError("classes must live in the given algebra")
    ra, rb, rc = a.representative, b.representative, c.representative
    ab, bc = ra * rb, rb * rc
    deg_ab = a.degree + b.degree
    deg_bc = b.degree + c.degree
    if ab and not cohomology(dga, deg_ab).is_exact(ab):
        raise NotDefined("the product of the first two classes is nonzero in cohomology")
    if bc and not cohomology(dga, deg_bc).is_exact(bc):
        raise NotDefined("the product of the last two classes is nonzero in cohomology")
    xi = dga.from_vector(solve(dga.d_matrix(deg_ab - 1), dga.to_vector(ab, deg_ab)), deg_ab - 1)
    zeta = dga.from_vector(solve(dga.d_matrix(deg_bc - 1), dga.to_vector(bc, deg_bc)), deg_bc - 1)
    sign = -1 if a.degree % 2 else 1
    value = xi * rc - sign * (ra * zeta)
    top = a.degree + b.degree + c.degree - 1
    h = cohomology(dga, top)
    cls = h.class_of(value) if value else h.class_from_coordinates((ZERO,) * h.betti)
    ind = Subspace.span(h.betti, _product_span(dga, a, deg_bc - 1, True) + _product_span(dga, c, deg_ab - 1, False))
    return MasseyValue(cls, ind, cls.coordinates not in ind)


def massey_scan(dga) -> list[tuple[tuple[int, int, int], MasseyValue]]:
    """All defined triples of ``H^1`` basis classes."""
    classes = cohomology(dga, 1).classes
    out = []
    for i, a in enumerate(classes):
        for j, b in enumerate(classes):
            for k, c in enumerate(classes):
                try:
                    out.append(((i, j, k), massey_triple(dga, a, b, c)))
                except NotDefined:
                    pass
    return out


@dataclass
class QuadraticPresentation:
    generators: tuple[str, ...]
    # each relation is {(i, j): coefficient} with i < j, meaning sum c [X_i, X_j]
    relations: tuple[dict, ...]

    def as_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [
                " + ".join(f"{c}*[{self.generators[i]},{self.generators[j]}]" for (i, j), c in sorted(r.items()))
                for r in self.relations
            ],
        }


def quadratic_presentation(tower: Tower, report: FormalityReport | None = None) -> QuadraticPresentation:
    """Relations are the annihilator of ``d(V_2)`` in ``∧^2`` of the dual of ``V_1``."""
    report = report or one_formal(tower)
    if not report.verdict:
        raise NotOneFormal("the target is not 1-formal, so no quadratic presentation exists")
    if report.provisional:
        raise NotOneFormal("tower not stabilized and no certificate given; verdict is only provisional")
    b1 = tower.stages[0].dim
    pairs = list(combinations(range(b1), 2))
    rows = []
    if tower.last >= 2:
        for dv in tower.stages[1].differential:
            row = [ZERO] * len(pairs)
            for mono, c in dv.items():
                (i, _), (j, _) = mono
                row[pairs.index((i, j))] = c
            rows.append(row)
    ann = kernel_basis(SparseMatrix.from_dense(rows, len(pairs)))
    rels = tuple({pairs[t]: c for t, c in enumerate(v) if c} for v in ann.basis)
    gens = tuple(f"X{k + 1}" for k in range(b1))
    return QuadraticPresentation(gens, rels)


def lower_central_dims(g: LieAlgebra) -> list[int]:
    dims = [g.dim]
    cur = Subspace.full(g.dim)
    full = Subspace.full(g.dim)
    while cur.dim:
        nxt = g.span_of_brackets(cur, full)
        if nxt.dim == cur.dim:
            break
        dims.append(nxt.dim)
        cur = nxt
    return dims


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_dims(g)[-1] == 0


def _skew_form_rank(g: LieAlgebra, derived: Subspace) -> int:
    """Rank of ``(x, y) -> [x, y]`` read in the 1-dimensional ``[g, g]``."""
    (z,) = derived.basis
    p = derived.pivots[0]
    n = g.dim
    rows = [[g.bracket_basis(i, j)[p] / z[p] for j in range(n)] for i in range(n)]
    return rank(SparseMatrix.from_dense(rows, n))


def heisenberg_check(g: LieAlgebra) -> bool:
    """True iff ``[g, g]`` is 1-dimensional, central, and the bracket is a
    nondegenerate skew form on ``g / [g, g]``."""
    if g.dim % 2 == 0:
        raise ValueError("heisenberg_check expects an odd-dimensional Lie algebra")
    if not is_nilpotent(g):
        raise NotNilpotent(f"{g.name or 'Lie algebra'} is not nilpotent")
    derived = g.derived_algebra()
    if derived.dim != 1:
        return False
    if not derived.is_subspace_of(g.center()):
        return False
    return _skew_form_rank(g, derived) == g.dim - 1


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ObstructionReport:
    n: int
    checks: list[Check] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"n": self.n, "sasakian_possible": self.verdict,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}


def sasakian_obstruction(g: LieAlgebra) -> ObstructionReport:
    """Necessary conditions for a nilmanifold on ``g`` to carry a Sasakian structure."""
    if g.dim % 2 == 0:
        raise ValueError("a Sasakian nilmanifold has odd dimension")
    if not is_nilpotent(g):
        raise NotNilpotent(f"{g.name or 'Lie algebra'} is not nilpotent")
    n = (g.dim - 1) // 2
    b1 = cohomology(chevalley_eilenberg(g), 1).betti
    rep = ObstructionReport(n)
    rep.checks.append(Check("b1_equals_2n", b1 == 2 * n, f"b1 = {b1}, 2n = {2 * n}"))
    rep.checks.append(Check("heisenberg", heisenberg_check(g)))
    return rep


def weight_counts(dims: Mapping[tuple[int, int], int]) -> dict[int, int]:
    w: dict[int, int] = {}
    for (p, q), d in dims.items():
        if d:
            w[p + q] = w.get(p + q, 0) + d
    return w


def weight_count_check(dims: Mapping[tuple[int, int], int], n: int) -> bool:
    """The weight arithmetic: ``sum w_r = 2n+1`` and ``sum r w_r = 2n+2``
    with ``w_1 = 2n``, ``w_2 = 1`` and no other weights."""
    w = weight_counts(dims)
    total = sum(w.values())
    moment = sum(r * c for r, c in w.items())
    forced = w.get(1, 0) == 2 * n and w.get(2, 0) == 1 and set(w) <= {1, 2}
    return total == 2 * n + 1 and moment == 2 * n + 2 and forced


__all__ = [
    "FormalityReport", "one_formal", "MasseyValue", "massey_triple", "massey_scan", "QuadraticPresentation",
    "quadratic_presentation", "heisenberg_check", "sasakian_obstruction", "ObstructionReport", "Check",
    "weight_counts", "weight_count_check", "lower_central_dims", "is_nilpotent",
]
