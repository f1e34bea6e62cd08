"""Lie algebras, Chevalley-Eilenberg complexes and cohomology of DGAs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import JacobiViolation
from .gca import FDGA, Element, FreeCDGA, GradedAlgebra
from .linalg import (ZERO, RelativeQuotient, SparseMatrix, Subspace, image, kernel_basis, lin_comb,
                     scalar, solve, unit_vector)


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    ``structure_constants`` maps ``(i, j)`` with ``i < j`` to ``{k: c}``,
    meaning ``[e_i, e_j] = sum_k c e_k``. Indices may be given as basis names.
    """

    def __init__(self, basis: Sequence[str], structure_constants: Mapping | None = None, name: str = ""):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis names must be unique")
        self.name = name
        self._index = {b: i for i, b in enumerate(self.basis)}
        sc: dict[tuple[int, int], dict[int, object]] = {}
        for (a, b), val in (structure_constants or {}).items():
            i, j = self.index(a), self.index(b)
            if i == j:
                raise ValueError("bracket of a basis element with itself is zero by antisymmetry")
            if i > j:
                raise ValueError(f"structure constants must be given with i < j, got ({a}, {b})")
            if (i, j) in sc:
                raise ValueError(f"bracket [{a}, {b}] given twice")
            terms = {self.index(k): scalar(v) for k, v in dict(val).items() if scalar(v)}
            if terms:
                sc[i, j] = terms
        self.structure_constants = sc

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < self.dim:
                raise KeyError(key)
            return key
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown basis element {key!r}") from None

    def bracket_basis(self, i: int, j: int) -> tuple:
        v = [ZERO] * self.dim
        if i < j:
            for k, c in self.structure_constants.get((i, j), {}).items():
                v[k] = c
        elif i > j:
            for k, c in self.structure_constants.get((j, i), {}).items():
                v[k] = -c
        return tuple(v)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        out = [ZERO] * n
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b or i == j:
                    continue
                for k, c in enumerate(self.bracket_basis(i, j)):
                    if c:
                        out[k] += a * b * c
        return tuple(out)

    def jacobi_violations(self) -> list[tuple[str, str, str]]:
        """Basis triples where the Jacobi identity fails, computed directly
        from the structure constants."""
        n = self.dim
        e = [unit_vector(n, i) for i in range(n)]
        bad = []
        for i, j, k in combinations(range(n), 3):
            s = [ZERO] * n
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                t = self.bracket(self.bracket(e[a], e[b]), e[c])
                s = [x + y for x, y in zip(s, t)]
            if any(s):
                bad.append((self.basis[i], self.basis[j], self.basis[k]))
        return bad

    def is_abelian(self) -> bool:
        return not self.structure_constants

    def span_of_brackets(self, u: Subspace, w: Subspace) -> Subspace:
        return Subspace.span(self.dim, (self.bracket(a, b) for a in u.basis for b in w.basis))

    def center(self) -> Subspace:
        n = self.dim
        rows = []
        # x in center iff [x, e_j] = 0 for all j: linear conditions on x
        for j in range(n):
            for k in range(n):
                rows.append(tuple(self.bracket_basis(i, j)[k] for i in range(n)))
        return kernel_basis(SparseMatrix.from_dense(rows, n))

    def derived_algebra(self) -> Subspace:
        full = Subspace.full(self.dim)
        return self.span_of_brackets(full, full)

    def change_basis(self, matrix: Sequence[Sequence], names: Sequence[str] | None = None) -> "LieAlgebra":
        """The same Lie algebra in the basis ``f_a = sum_i matrix[a][i] e_i``."""
        n = self.dim
        new = [tuple(scalar(x) for x in row) for row in matrix]
        inv_cols = []
        m = SparseMatrix.from_columns(new, n)
        for i in range(n):
            # coordinates of e_i in the new basis
            inv_cols.append(solve(m, unit_vector(n, i)))
        if any(c is None for c in inv_cols):
            raise ValueError("change-of-basis matrix is singular")
        sc = {}
        for a, b in combinations(range(n), 2):
            br = self.bracket(new[a], new[b])
            coords = lin_comb(br, inv_cols, n)
            terms = {k: c for k, c in enumerate(coords) if c}
            if terms:
                sc[a, b] = terms
        return LieAlgebra(names or [f"f{a + 1}" for a in range(n)], sc, name=self.name)

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim})"


def ce_generator_names(g: LieAlgebra) -> list[str]:
    return [f"x{i + 1}" for i in range(g.dim)]


def chevalley_eilenberg(g: LieAlgebra) -> FreeCDGA:
    """Exterior algebra on the dual basis with ``d x^k = -sum_{i<j} c^k_ij x^i x^j``."""
    names = ce_generator_names(g)
    d: dict[int, dict] = {k: {} for k in range(g.dim)}
    for (i, j), terms in g.structure_constants.items():
        for k, c in terms.items():
            m = ((i, 1), (j, 1))
            d[k][m] = d[k].get(m, ZERO) - c
    ce = FreeCDGA([(nm, 1) for nm in names], d, name=f"CE({g.name})" if g.name else "CE")
    report = ce.check_d_squared()
    if not report.passed:
        bad = g.jacobi_violations()
        raise JacobiViolation(bad[0] if bad else None,
                              f"d^2 != 0 on {', '.join(nm for nm, _ in report.violations)}; "
                              f"Jacobi fails on {bad[0] if bad else '?'}")
    return ce


@dataclass
class CohomologyClass:
    dga: GradedAlgebra
    degree: int
    coordinates: tuple
    representative: Element

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __repr__(self):
        return f"[{self.representative!r}] in H^{self.degree}"


class Cohomology:
    """``H^k`` of a DGA with a canonical basis of representatives."""

    def __init__(self, dga: GradedAlgebra, k: int):
        self.dga = dga
        self.degree = k
        n = dga.dim(k)
        self.cocycles = kernel_basis(dga.d_matrix(k)) if n else Subspace.zero(0)
        if k > 0 and dga.dim(k - 1):
            self.boundaries = image(dga.d_matrix(k - 1))
        else:
            self.boundaries = Subspace.zero(n)
        self._q = RelativeQuotient(self.cocycles, self.boundaries)
        self.classes = [
            CohomologyClass(dga, k, unit_vector(self._q.dim, i), dga.from_vector(rep, k))
            for i, rep in enumerate(self._q.representatives)
        ]

    @property
    def betti(self) -> int:
        return self._q.dim

    @property
    def representatives(self) -> list[tuple]:
        return list(self._q.representatives)

    def is_cocycle(self, v: Sequence) -> bool:
        return v in self.cocycles

    def project(self, x) -> tuple:
        """Coordinates of the class of a cocycle (element or vector)."""
        v = self.dga.to_vector(x, self.degree) if isinstance(x, Element) else tuple(x)
        if not self.cocycles.contains(v):
            raise ValueError("not a cocycle")
        return self._q.project(v)

    def class_of(self, x) -> CohomologyClass:
        coords = self.project(x)
        return self.class_from_coordinates(coords)

    def class_from_coordinates(self, coords: Sequence) -> CohomologyClass:
        coords = tuple(scalar(c) for c in coords)
        rep = self.dga.from_vector(self._q.lift(coords), self.degree)
        return CohomologyClass(self.dga, self.degree, coords, rep)

    def is_exact(self, x) -> bool:
        v = self.dga.to_vector(x, self.degree) if isinstance(x, Element) else tuple(x)
        return v in self.boundaries

    def __repr__(self):
        return f"Cohomology(H^{self.degree}, betti={self.betti})"


def cohomology(dga: GradedAlgebra, k: int) -> Cohomology:
    cache = dga._cache.setdefault("cohomology", {})
    if k not in cache:
        cache[k] = Cohomology(dga, k)
    return cache[k]


def betti_numbers(dga: GradedAlgebra, degrees: Sequence[int] | None = None) -> list[int]:
    if degrees is None:
        degrees = range(dga.top_degree + 1)
    return [cohomology(dga, k).betti for k in degrees]


def cup_product(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    if a.dga is not b.dga:
        raise ValueError("classes live in different algebras")
    h = cohomology(a.dga, a.degree + b.degree)
    prod = a.representative * b.representative
    if not prod:
        return h.class_from_coordinates((ZERO,) * h.betti)
    return h.class_of(prod)


def poincare_check(dga: GradedAlgebra, top: int) -> bool:
    b = betti_numbers(dga, range(top + 1))
    return b[top] == 1 and all(b[k] == b[top - k] for k in range(top + 1))


def euler_characteristic(dga: GradedAlgebra) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti_numbers(dga)))


def cohomology_dga(dga: GradedAlgebra, name: str = "") -> FDGA:
    """The cohomology ring with zero differential."""
    top = dga.top_degree
    groups = {k: cohomology(dga, k) for k in range(top + 1)}
    basis = {k: [f"h{k}_{i + 1}" for i in range(h.betti)] for k, h in groups.items() if h.betti}
    table = {}
    for k1, h1 in groups.items():
        for k2, h2 in groups.items():
            if k1 + k2 > top or not h1.betti or not h2.betti:
                continue
            for i, c1 in enumerate(h1.classes):
                for j, c2 in enumerate(h2.classes):
                    if (k1 == 0 or k2 == 0) and groups[0].betti == 1:
                        continue  # unit products are implicit
                    prod = cup_product(c1, c2)
                    terms = {basis[k1 + k2][t]: v for t, v in enumerate(prod.coordinates) if v}
                    table[basis[k1][i], basis[k2][j]] = terms
    unit = basis[0][0] if groups[0].betti == 1 else None
    return FDGA(basis, table, {}, name=name or f"H({dga.name})", unit=unit)


def is_connected(dga: GradedAlgebra) -> bool:
    h0 = cohomology(dga, 0)
    return h0.betti == 1 and h0.project(dga.one()) != (ZERO,)


def ce_dims_by_degree(dga: GradedAlgebra) -> list[int]:
    return [dga.dim(k) for k in range(dga.top_degree + 1)]


__all__ = [
    "LieAlgebra", "chevalley_eilenberg", "Cohomology", "CohomologyClass", "cohomology", "betti_numbers",
    "cup_product", "poincare_check", "cohomology_dga", "euler_characteristic", "is_connected",
]
