"""Filtrations, mixed Hodge structures and the bigraded bookkeeping around them.

Conjugation is coefficient-wise complex conjugation in the declared (real)
basis of every ambient space. Increasing filtrations ``W`` are read as
``W_i = value at the largest stored key <= i`` (zero below the first key);
decreasing filtrations ``F`` as ``F^i = value at the smallest stored key
>= i`` (zero above the last key, which is normally stored as zero).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cohomology import cohomology
from .errors import (FiltrationNotDStable, HypothesisViolation, InvariantViolation, NotBigradeable,
                     NotMHS)
from .gca import DGAMorphism, Element, FreeCDGA, GradedAlgebra, Generator
from .linalg import (ONE, ZERO, RelativeQuotient, SparseMatrix, Subspace, direct_sum_check, image,
                     kernel_basis, lin_comb, preimage, scalar, solve, vec_conj)


INCREASING = "increasing"
DECREASING = "decreasing"


class Filtration:
    def __init__(self, ambient_dim: int, direction: str, jumps: Mapping[int, Subspace]):
        if direction not in (INCREASING, DECREASING):
            raise ValueError(f"direction must be {INCREASING!r} or {DECREASING!r}")
        self.ambient_dim = ambient_dim
        self.direction = direction
        self.jumps = {k: jumps[k] for k in sorted(jumps)}
        keys = list(self.jumps)
        for s in self.jumps.values():
            if s.ambient_dim != ambient_dim:
                raise ValueError("filtration step lives in a different ambient space")
        for a, b in zip(keys, keys[1:]):
            lo, hi = (self.jumps[a], self.jumps[b]) if direction == INCREASING else (self.jumps[b], self.jumps[a])
            if not lo.is_subspace_of(hi):
                raise ValueError(f"filtration is not nested between indices {a} and {b}")

    @property
    def keys(self) -> list[int]:
        return list(self.jumps)

    def at(self, i: int) -> Subspace:
        if self.direction == INCREASING:
            best = None
            for k in self.jumps:
                if k <= i:
                    best = k
            return self.jumps[best] if best is not None else Subspace.zero(self.ambient_dim)
        for k in self.jumps:
            if k >= i:
                return self.jumps[k]
        return Subspace.zero(self.ambient_dim)

    __getitem__ = at

    def conjugate(self) -> "Filtration":
        return Filtration(self.ambient_dim, self.direction, {k: s.conjugate() for k, s in self.jumps.items()})

    def dims(self) -> dict[int, int]:
        return {k: s.dim for k, s in self.jumps.items()}

    def jump_indices(self) -> list[int]:
        """Indices where the filtration actually changes."""
        out = []
        for k in self.jumps:
            if self.direction == INCREASING:
                if self.at(k) != self.at(k - 1):
                    out.append(k)
            elif self.at(k) != self.at(k + 1):
                out.append(k)
        return out

    def shifted(self, s: int) -> "Filtration":
        """``G_i = self_{i - s}`` (keys move up by ``s``)."""
        return Filtration(self.ambient_dim, self.direction, {k + s: v for k, v in self.jumps.items()})

    def without(self, key: int) -> "Filtration":
        """Drop one stored step, so that index falls back to its neighbour."""
        return Filtration(self.ambient_dim, self.direction, {k: v for k, v in self.jumps.items() if k != key})

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        if (self.ambient_dim, self.direction) != (other.ambient_dim, other.direction):
            return False
        keys = set(self.jumps) | set(other.jumps)
        lo, hi = (min(keys) - 1, max(keys) + 1) if keys else (0, 0)
        return all(self.at(i) == other.at(i) for i in range(lo, hi + 1))

    def __repr__(self):
        return f"Filtration({self.direction}, dims={self.dims()})"


@dataclass
class Bigrading:
    ambient_dim: int
    components: dict[tuple[int, int], Subspace]

    def __post_init__(self):
        self.components = {k: v for k, v in sorted(self.components.items()) if v.dim}

    def dims(self) -> dict[tuple[int, int], int]:
        return {k: v.dim for k, v in self.components.items()}

    def is_direct_sum(self) -> bool:
        ind, span = direct_sum_check(self.components.values(), self.ambient_dim)
        return ind and span

    def component(self, p: int, q: int) -> Subspace:
        return self.components.get((p, q), Subspace.zero(self.ambient_dim))

    def lower_weight(self, w: int) -> Subspace:
        out = Subspace.zero(self.ambient_dim)
        for (r, s), v in self.components.items():
            if r + s < w:
                out = out + v
        return out

    def hypothesis_violation(self) -> tuple[int, int] | None:
        """First ``(p, q)`` with ``conj V_pq`` not inside ``V_qp + lower weights``."""
        for (p, q), v in self.components.items():
            allowed = self.component(q, p) + self.lower_weight(p + q)
            if not v.conjugate().is_subspace_of(allowed):
                return p, q
        return None


def filtrations_from_bigrading(b: Bigrading) -> tuple[Filtration, Filtration]:
    """``W_i = sum_{p+q <= i} V_pq`` and ``F^i = sum_{p >= i} V_pq``."""
    if not b.is_direct_sum():
        raise ValueError("components do not form a direct sum decomposition of the ambient space")
    bad = b.hypothesis_violation()
    if bad is not None:
        raise HypothesisViolation(bad)
    n = b.ambient_dim
    if not b.components:
        return Filtration(n, INCREASING, {}), Filtration(n, DECREASING, {})
    weights = sorted({p + q for p, q in b.components})
    ps = [p for p, _ in b.components]
    W = {}
    for w in range(weights[0], weights[-1] + 1):
        W[w] = Subspace._from_sparse(n, [r for (p, q), v in b.components.items() if p + q <= w for r in v.sparse_basis()])
    F = {}
    for i in range(min(ps), max(ps) + 2):
        F[i] = Subspace._from_sparse(n, [r for (p, q), v in b.components.items() if p >= i for r in v.sparse_basis()])
    return Filtration(n, INCREASING, W), Filtration(n, DECREASING, F)


def _key_range(f: Filtration) -> range:
    return range(min(f.keys), max(f.keys) + 1) if f.keys else range(0)


def deligne_splitting(W: Filtration, F: Filtration) -> Bigrading:
    """``V_pq = R_pq ∩ L_pq`` with ``R_pq = W_{p+q} ∩ F^p`` and
    ``L_pq = W_{p+q} ∩ conj F^q + sum_{i>=2} W_{p+q-i} ∩ conj F^{q-i+1}``."""
    if W.direction != INCREASING or F.direction != DECREASING:
        raise ValueError("expected an increasing W and a decreasing F")
    if W.ambient_dim != F.ambient_dim:
        raise ValueError("W and F live on different spaces")
    n = W.ambient_dim
    if n == 0:
        return Bigrading(0, {})
    Fc = F.conjugate()
    wr = _key_range(W)
    pr = _key_range(F)
    if not wr or not pr:
        raise NotMHS("a filtration with no steps cannot define a mixed Hodge structure")
    wmin = wr.start
    comps: dict[tuple[int, int], Subspace] = {}
    for p in pr:
        for q in pr:
            w = p + q
            if w < wmin:
                continue
            R = W.at(w) & F.at(p)
            if not R.dim:
                continue
            L = W.at(w) & Fc.at(q)
            i = 2
            while w - i >= wmin:
                L = L + (W.at(w - i) & Fc.at(q - i + 1))
                i += 1
            V = R & L
            if V.dim:
                comps[p, q] = V
    b = Bigrading(n, comps)
    if not b.is_direct_sum():
        raise NotMHS("the candidate components are not a direct sum decomposition")
    for i in list(wr) + [wr.stop]:
        want = Subspace._from_sparse(n, [r for (p, q), v in comps.items() if p + q <= i for r in v.sparse_basis()])
        if want != W.at(i):
            raise NotMHS(f"W_{i} is not recovered from the splitting")
    for i in list(pr) + [pr.stop]:
        want = Subspace._from_sparse(n, [r for (p, q), v in comps.items() if p >= i for r in v.sparse_basis()])
        if want != F.at(i):
            raise NotMHS(f"F^{i} is not recovered from the splitting")
    return b


def shifted_weight(W: Filtration, r: int) -> Filtration:
    """``W'_i = W_{i-r}`` on a degree-``r`` cohomology group."""
    return W.shifted(r)


# ---------------------------------------------------------------------------
# filtrations on DGAs, graded by degree

DegreewiseFiltration = Mapping[int, Filtration]


def check_d_stable(dga: GradedAlgebra, filt: DegreewiseFiltration, top: int | None = None) -> tuple[int, int] | None:
    """First ``(degree, index)`` where ``d`` fails to preserve the filtration."""
    top = dga.top_degree if top is None else top
    for k in range(top + 1):
        if k not in filt or not dga.dim(k):
            continue
        f = filt[k]
        nxt = filt.get(k + 1)
        dm = dga.d_matrix(k)
        for i in f.keys:
            img = f.at(i).image_under(dm)
            tgt = nxt.at(i) if nxt is not None else Subspace.zero(dm.rows)
            if not img.is_subspace_of(tgt):
                return k, i
    return None


def check_multiplicative(dga: GradedAlgebra, filt: DegreewiseFiltration) -> tuple | None:
    """First pair of steps with ``W_a * W_b`` not inside ``W_{a+b}`` (increasing)."""
    degs = sorted(k for k in filt if dga.dim(k))
    for k1 in degs:
        for k2 in degs:
            k = k1 + k2
            if k > dga.top_degree or not dga.dim(k):
                continue
            f1, f2, f = filt[k1], filt[k2], filt.get(k)
            for a in f1.keys:
                for b in f2.keys:
                    tgt = f.at(a + b) if f is not None else Subspace.zero(dga.dim(k))
                    for u in f1.at(a).basis:
                        x = dga.from_vector(u, k1)
                        for v in f2.at(b).basis:
                            prod = x * dga.from_vector(v, k2)
                            if prod and dga.to_vector(prod, k) not in tgt:
                                return (k1, a), (k2, b)
    return None


def induced_on_cohomology(dga: GradedAlgebra, k: int, filt: Filtration) -> Filtration:
    """The filtration of ``H^k`` by images of ``filt ∩ cocycles``."""
    h = cohomology(dga, k)
    Z = h.cocycles
    jumps = {}
    for i, s in filt.jumps.items():
        jumps[i] = Subspace.span(h.betti, (h._q.project(v) for v in (s & Z).basis))
    return Filtration(h.betti, filt.direction, jumps)


def mhs_on_cohomology(dga: GradedAlgebra, k: int, W: Filtration, F: Filtration) -> tuple[Filtration, Filtration]:
    """Shifted weight and induced Hodge filtration on ``H^k``."""
    return shifted_weight(induced_on_cohomology(dga, k, W), k), induced_on_cohomology(dga, k, F)


# ---------------------------------------------------------------------------
# spectral sequence of a filtered complex, up to E_2


def _dec(W: Filtration) -> callable:
    # decreasing F^p = W_{-p}
    return lambda p: W.at(-p)


@dataclass
class SpectralPages:
    # (p, q) -> dim, with total degree p + q and F^p = W_{-p}
    E0: dict[tuple[int, int], int]
    E1: dict[tuple[int, int], int]
    E2: dict[tuple[int, int], int]
    d0_ranks: dict[tuple[int, int], int]

    @property
    def d0_zero(self) -> bool:
        return not any(self.d0_ranks.values())

    def column(self, page: int, p: int) -> list[int]:
        """``E_page^{p, q}`` dims for increasing ``q`` over the nonzero range."""
        E = (self.E0, self.E1, self.E2)[page]
        qs = sorted(q for (pp, q), v in E.items() if pp == p and v)
        if not qs:
            return []
        return [E.get((p, q), 0) for q in range(qs[0], qs[-1] + 1)]

    def totals(self, page: int) -> list[int]:
        E = (self.E0, self.E1, self.E2)[page]
        degs = [p + q for (p, q), v in E.items() if v]
        if not degs:
            return []
        return [sum(v for (p, q), v in E.items() if p + q == k) for k in range(0, max(degs) + 1)]


def _Z(dga, W, k, p, r) -> Subspace:
    F = _dec(W[k]) if k in W else (lambda p: Subspace.zero(dga.dim(k)))
    Fn = _dec(W[k + 1]) if k + 1 in W else (lambda p: Subspace.zero(dga.dim(k + 1)))
    if r < 0:
        return F(p)
    return F(p) & preimage(dga.d_matrix(k), Fn(p + r))


def _E_dim(dga, W, k, p, r) -> int:
    Z = _Z(dga, W, k, p, r)
    small = _Z(dga, W, k, p + 1, r - 1)
    if k >= 1 and dga.dim(k - 1):
        small = small + _Z(dga, W, k - 1, p - r + 1, r - 1).image_under(dga.d_matrix(k - 1))
    return Z.dim - (small & Z).dim


def spectral_E1(dga: GradedAlgebra, W: DegreewiseFiltration, check: bool = True) -> SpectralPages:
    """Pages ``E_0``, ``E_1``, ``E_2`` of the spectral sequence of ``F^p = W_{-p}``.

    ``E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`` with
    ``Z_r^p = F^p ∩ d^{-1} F^{p+r}``.
    """
    if check:
        bad = check_d_stable(dga, W)
        if bad is not None:
            raise FiltrationNotDStable(f"d does not preserve the filtration in degree {bad[0]} at index {bad[1]}")
    E0, E1, E2, ranks = {}, {}, {}, {}
    for k in range(dga.top_degree + 1):
        if k not in W or not dga.dim(k):
            continue
        keys = W[k].keys
        for p in range(-max(keys), -min(keys) + 1):
            e0 = _E_dim(dga, W, k, p, 0)
            if not e0:
                continue
            E0[p, k - p] = e0
            E1[p, k - p] = _E_dim(dga, W, k, p, 1)
            E2[p, k - p] = _E_dim(dga, W, k, p, 2)
            ranks[p, k - p] = _dec(W[k])(p).dim - _Z(dga, W, k, p, 1).dim
    return SpectralPages(E0, E1, E2, ranks)


# ---------------------------------------------------------------------------
# mixed Hodge diagrams


@dataclass
class AxiomRecord:
    axiom: int
    name: str
    passed: bool
    bidegree: tuple[int, int] | None = None
    detail: str = ""


@dataclass
class MHDReport:
    records: list[AxiomRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def axiom_passed(self, i: int) -> bool:
        return all(r.passed for r in self.records if r.axiom == i)

    def failures(self) -> list[AxiomRecord]:
        return [r for r in self.records if not r.passed]

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "axioms": {str(i): self.axiom_passed(i) for i in (1, 2, 3)},
            "failures": [{"axiom": r.axiom, "name": r.name, "bidegree": list(r.bidegree) if r.bidegree else None,
                          "detail": r.detail} for r in self.failures()],
        }


def _e1_quotient(dga, W, k, p) -> RelativeQuotient:
    Z = _Z(dga, W, k, p, 1)
    small = _Z(dga, W, k, p + 1, 0)
    if k >= 1 and dga.dim(k - 1):
        small = small + _Z(dga, W, k - 1, p, 0).image_under(dga.d_matrix(k - 1))
    return RelativeQuotient(Z, small & Z)


def _degrees(*algs) -> range:
    return range(max(a.top_degree for a in algs) + 1)


def mhd_check(A: GradedAlgebra, WA: DegreewiseFiltration, E: GradedAlgebra, WE: DegreewiseFiltration,
              FE: DegreewiseFiltration, phi: DGAMorphism) -> MHDReport:
    """Axioms: (1) ``phi`` is an isomorphism on ``E_1``; (2) ``d_0`` is
    strictly compatible with ``F``; (3) ``F`` is a pure Hodge structure of
    weight ``q`` on each ``E_1^{p,q}``."""
    rep = MHDReport()
    for k in _degrees(A, E):
        if not A.dim(k) and not E.dim(k):
            continue
        m = phi.matrix(k)
        for i in sorted(set(WA.get(k, Filtration(A.dim(k), INCREASING, {})).keys)):
            src = WA[k].at(i).image_under(m)
            if not src.is_subspace_of(WE[k].at(i)):
                rep.records.append(AxiomRecord(1, "phi_filtered", False, (-i, k + i), "phi does not preserve W"))
    for name, alg, filt in (("W_A", A, WA), ("W_E", E, WE), ("F_E", E, FE)):
        bad = check_d_stable(alg, filt)
        if bad is not None:
            axiom = 2 if name == "F_E" else 1
            rep.records.append(AxiomRecord(axiom, f"{name}_d_stable", False, None,
                                           f"d leaves the filtration in degree {bad[0]} at index {bad[1]}"))
    if rep.records:
        return rep

    # (1) E_1 isomorphism
    for k in _degrees(A, E):
        keys = set(WA.get(k, Filtration(0, INCREASING, {})).keys) | set(WE.get(k, Filtration(0, INCREASING, {})).keys)
        if not keys:
            continue
        m = phi.matrix(k)
        for p in range(-max(keys), -min(keys) + 1):
            qa = _e1_quotient(A, WA, k, p)
            qe = _e1_quotient(E, WE, k, p)
            cols = [qe.project(m.apply(v)) for v in qa.representatives]
            rk = _rank_of_columns(cols, qe.dim)
            ok = qa.dim == qe.dim == rk
            rep.records.append(AxiomRecord(1, "E1_isomorphism", ok, (p, k - p),
                                           "" if ok else f"dims {qa.dim} -> {qe.dim}, rank {rk}"))

    # (2) strictness of d_0 with respect to F on E_0 = W^p / W^{p+1}
    for k in _degrees(E):
        if k not in WE or k + 1 not in WE or not E.dim(k):
            continue
        dm = E.d_matrix(k)
        Wd = _dec(WE[k])
        Wn = _dec(WE[k + 1])
        keys = WE[k].keys
        for p in range(-max(keys), -min(keys) + 1):
            imd0 = Wd(p).image_under(dm) + Wn(p + 1)
            bad = None
            for a in _full_range(FE[k], FE.get(k + 1)):
                # d_0(F^a E_0) = im d_0 ∩ F^a E_0, lifted to W^p
                lhs = (FE[k].at(a) & Wd(p)).image_under(dm) + Wn(p + 1)
                rhs = imd0 & ((FE[k + 1].at(a) & Wn(p)) + Wn(p + 1))
                if lhs != rhs:
                    bad = a
                    break
            rep.records.append(AxiomRecord(2, "strictness", bad is None, (p, k - p),
                                           "" if bad is None else f"fails for F^{bad}"))

    # (3) purity of F on E_1^{p,q}
    for k in _degrees(E):
        if k not in WE or not E.dim(k):
            continue
        keys = WE[k].keys
        for p in range(-max(keys), -min(keys) + 1):
            q = k - p
            qe = _e1_quotient(E, WE, k, p)
            if not qe.dim:
                continue
            Z = qe.big
            induced = {}
            for a in _full_range(FE[k]):
                induced[a] = Subspace.span(qe.dim, (qe.project(v) for v in (FE[k].at(a) & Z).basis))
            Fi = Filtration(qe.dim, DECREASING, induced)
            ok = True
            for a in _full_range(FE[k]):
                s1, s2 = Fi.at(a), Fi.at(q + 1 - a).conjugate()
                ind, span = direct_sum_check([s1, s2], qe.dim)
                if not (ind and span):
                    ok = False
                    detail = f"F^{a} + conj F^{q + 1 - a} is not a direct sum decomposition"
                    break
            rep.records.append(AxiomRecord(3, "pure_hodge_structure", ok, (p, q), "" if ok else detail))
    return rep


def _full_range(*filts) -> range:
    keys = [k for f in filts if f is not None for k in f.keys]
    if not keys:
        return range(0)
    return range(min(keys) - 1, max(keys) + 2)


def _rank_of_columns(cols: Sequence[Sequence], n: int) -> int:
    return Subspace.span(n, cols).dim


# ---------------------------------------------------------------------------
# bicomplexes


class Bicomplex:
    """A finite bicomplex on named basis vectors placed in bidegrees ``(p, q)``.

    ``del_map`` and ``delbar_map`` send a basis name to ``{name: coeff}``.
    """

    def __init__(self, components: Mapping[tuple[int, int], Sequence[str]], del_map: Mapping | None = None,
                 delbar_map: Mapping | None = None, name: str = ""):
        self.name = name
        self.names: list[str] = []
        self.bidegree: list[tuple[int, int]] = []
        for pq in sorted(components):
            for nm in components[pq]:
                self.names.append(nm)
                self.bidegree.append(tuple(pq))
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.components = {tuple(pq): tuple(v) for pq, v in sorted(components.items())}
        n = len(self.names)
        self.dim = n
        self.del_ = self._matrix(del_map or {}, (1, 0))
        self.delbar = self._matrix(delbar_map or {}, (0, 1))
        self.d = SparseMatrix(n, n, _sum_entries(self.del_, self.delbar))
        problems = []
        if not (self.del_ @ self.del_).is_zero():
            problems.append("del^2 != 0")
        if not (self.delbar @ self.delbar).is_zero():
            problems.append("delbar^2 != 0")
        if not SparseMatrix(n, n, _sum_entries(self.del_ @ self.delbar, self.delbar @ self.del_)).is_zero():
            problems.append("del delbar + delbar del != 0")
        if problems:
            raise ValueError("not a bicomplex: " + ", ".join(problems))

    def _matrix(self, mapping: Mapping, shift: tuple[int, int]) -> SparseMatrix:
        entries = []
        for src, img in mapping.items():
            c = self.index[src]
            p, q = self.bidegree[c]
            for tgt, v in img.items():
                r = self.index[tgt]
                if self.bidegree[r] != (p + shift[0], q + shift[1]):
                    raise ValueError(f"map from {src} to {tgt} does not have bidegree {shift}")
                if scalar(v):
                    entries.append((r, c, scalar(v)))
        return SparseMatrix(len(self.names), len(self.names), entries)

    def total_degrees(self) -> list[int]:
        return sorted({p + q for p, q in self.bidegree})

    def coordinate_subspace(self, pred) -> Subspace:
        return Subspace.coordinate(self.dim, [i for i, pq in enumerate(self.bidegree) if pred(pq)])

    def degree_part(self, k: int) -> Subspace:
        return self.coordinate_subspace(lambda pq: pq[0] + pq[1] == k)


def _sum_entries(a: SparseMatrix, b: SparseMatrix):
    acc: dict = {}
    for r, c, v in list(a.entries) + list(b.entries):
        acc[r, c] = acc.get((r, c), ZERO) + v
    return [(r, c, v) for (r, c), v in acc.items() if v]


def _bicomplex_spaces(b: Bicomplex) -> dict[str, Subspace]:
    K = kernel_basis(b.del_) & kernel_basis(b.delbar)
    return {
        "K": K,
        "ddbar": image(b.del_ @ b.delbar),
        "Zd": kernel_basis(b.d),
        "Bd": image(b.d),
    }


@dataclass
class DDbarResult:
    holds: bool
    failing_degrees: list[int]

    def __bool__(self):
        return self.holds


def ddbar_check(b: Bicomplex) -> DDbarResult:
    """``ker del ∩ ker delbar ∩ im d = im del delbar`` in every total degree."""
    s = _bicomplex_spaces(b)
    lhs = s["K"] & s["Bd"]
    bad = []
    for k in b.total_degrees():
        part = b.degree_part(k)
        if (lhs & part) != (s["ddbar"] & part):
            bad.append(k)
    return DDbarResult(not bad, bad)


@dataclass
class BottChern:
    components: dict[tuple[int, int], int]
    natural_map_iso: bool
    de_rham: dict[int, int]

    def as_dict(self) -> dict:
        return {"components": {f"{p},{q}": v for (p, q), v in sorted(self.components.items())},
                "natural_map_iso": self.natural_map_iso,
                "total_cohomology": {str(k): v for k, v in sorted(self.de_rham.items())}}


def bott_chern(b: Bicomplex) -> BottChern:
    s = _bicomplex_spaces(b)
    K, B, Zd, Bd = s["K"], s["ddbar"], s["Zd"], s["Bd"]
    comps = {}
    for pq in b.components:
        part = b.coordinate_subspace(lambda x, pq=pq: x == pq)
        dim = (K & part).dim - (B & part).dim
        comps[pq] = dim
    # K/B -> Zd/Bd is injective iff K ∩ Bd = B and surjective iff K + Bd = Zd
    iso = (K & Bd) == B and (K + Bd) == Zd
    de_rham = {}
    for k in b.total_degrees():
        part = b.degree_part(k)
        de_rham[k] = (Zd & part).dim - (Bd & part).dim
    return BottChern(comps, iso, de_rham)


# ---------------------------------------------------------------------------
# bigraded 1-minimal towers


@dataclass
class BigradedStage:
    index: int
    generators: tuple[str, ...]
    bidegrees: tuple[tuple[int, int], ...]

    def type_counts(self) -> dict[tuple[int, int], int]:
        out: dict = {}
        for t in self.bidegrees:
            out[t] = out.get(t, 0) + 1
        return dict(sorted(out.items()))


@dataclass
class BigradedTower:
    stages: list[BigradedStage]
    cdga: FreeCDGA
    phi: DGAMorphism
    stabilized: bool
    # None when no H^2 bigrading of the target was supplied
    target_h2_split: bool | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "stages": [{"index": s.index, "types": {f"{p},{q}": c for (p, q), c in s.type_counts().items()}}
                       for s in self.stages],
            "stabilized": self.stabilized,
            "target_h2_split": self.target_h2_split,
            "notes": list(self.notes),
        }


def _bigraded_cdga(gens: list[tuple[str, tuple[int, int]]], d: dict) -> FreeCDGA:
    return FreeCDGA([Generator(0, nm, 1, bd) for nm, bd in gens], d, name="M_C")


def bigraded_tower(tower, h1: Bigrading, h2: Bigrading | None = None) -> BigradedTower:
    """Rebuild ``tower`` over the complex numbers in a basis adapted to the
    ``H^1`` splitting, decomposing each ``ker phi_n`` by bidegree.

    ``h1`` lives on the coordinates of ``H^1(target)``; ``h2``, when given,
    is the bigrading of ``H^2(target)`` and is used only to report whether
    it is concentrated in total weight 2.
    """
    target = tower.target
    H1 = cohomology(target, 1)
    if h1.ambient_dim != H1.betti:
        raise ValueError("the H^1 bigrading has the wrong dimension")
    if not h1.is_direct_sum():
        raise NotBigradeable("the H^1 components do not split H^1")
    gens: list[tuple[str, tuple[int, int]]] = []
    images: list[tuple] = []
    for (p, q), sub in h1.components.items():
        for v in sub.basis:
            gens.append((f"w1_{len(gens) + 1}", (p, q)))
            images.append(lin_comb(v, H1.representatives, target.dim(1)))
    d: dict = {}
    stages = [BigradedStage(1, tuple(g for g, _ in gens), tuple(b for _, b in gens))]
    stabilized = False
    d1 = target.d_matrix(1)
    n = 1
    while True:
        m = _bigraded_cdga(gens, d)
        phi = DGAMorphism(m, target, images={i: target.from_vector(v, 1) for i, v in enumerate(images)})
        if n >= tower.last and not tower.stabilized:
            break
        h2m = cohomology(m, 2)
        h2a = cohomology(target, 2)
        cols = [h2a.project(phi.apply(c.representative)) for c in h2m.classes]
        ker = kernel_basis(SparseMatrix.from_columns(cols, h2a.betti))
        # H^2(M_C(n)) by bidegree of monomials
        slice2 = m.degree_slice(2)
        types = sorted({m.monomial_bidegree(key) for key in slice2})
        Z = h2m.cocycles
        parts = {}
        for t in types:
            coord = Subspace.coordinate(len(slice2), [i for i, key in enumerate(slice2) if m.monomial_bidegree(key) == t])
            zt = coord & Z
            parts[t] = (zt, Subspace.span(h2m.betti, (h2m.project(v) for v in zt.basis)))
        kparts = {t: ker & hp for t, (_, hp) in parts.items()}
        ind, span = direct_sum_check([k for k in kparts.values()], h2m.betti)
        if not (ind and Subspace._from_sparse(h2m.betti, [r for k in kparts.values() for r in k.sparse_basis()]) == ker):
            raise NotBigradeable(f"ker phi_{n} does not split into bidegree components")
        new = []
        for t in types:
            zt, hp = parts[t]
            kp = kparts[t]
            if not kp.dim:
                continue
            # lift each kernel class to a cocycle of type t
            proj_cols = [h2m.project(v) for v in zt.basis]
            lift = SparseMatrix.from_columns(proj_cols, h2m.betti)
            for kappa in kp.basis:
                coeffs = solve(lift, kappa)
                if coeffs is None:
                    raise InvariantViolation("kernel class has no homogeneous representative")
                cocycle = lin_comb(coeffs, zt.basis, len(slice2))
                new.append((t, m.from_vector(cocycle, 2)))
        if not new:
            stabilized = True
            break
        n += 1
        names = []
        bds = []
        for t, cocycle in new:
            nm = f"w{n}_{len(names) + 1}"
            rhs = target.to_vector(phi.apply(cocycle), 2)
            xi = solve(d1, rhs)
            if xi is None:
                raise InvariantViolation("phi(dv) is not exact in the target")
            d[nm] = dict(cocycle.terms)
            gens.append((nm, t))
            images.append(xi)
            names.append(nm)
            bds.append(t)
        stages.append(BigradedStage(n, tuple(names), tuple(bds)))
        if n > tower.last:
            raise InvariantViolation("complex tower outgrew the rational tower")
    m = _bigraded_cdga(gens, d)
    phi = DGAMorphism(m, target, images={i: target.from_vector(v, 1) for i, v in enumerate(images)})
    for g in m.generators:
        for key in m.d_generator(g.id).terms:
            if m.monomial_bidegree(key) != g.bidegree:
                raise InvariantViolation(f"d is not of type (0,0) on {g.name}")
    counts = tuple(len(s.generators) for s in stages)
    if counts != tower.generator_counts[:len(counts)]:
        raise InvariantViolation(f"complex tower counts {counts} differ from {tower.generator_counts}")
    out = BigradedTower(stages, m, phi, stabilized)
    if h2 is not None:
        out.target_h2_split = all(p + q == 2 for p, q in h2.components)
        if not out.target_h2_split:
            out.notes.append("H^2 of the target is not concentrated in weight 2; the weight argument for "
                             "1-formality does not apply")
    return out


def bigrading_from_types(dim: int, types: Mapping[tuple[int, int], Sequence[Sequence]]) -> Bigrading:
    """A bigrading from explicit spanning vectors per bidegree."""
    return Bigrading(dim, {tuple(k): Subspace.span(dim, [tuple(scalar(x) for x in v) for v in vs])
                           for k, vs in types.items()})


__all__ = [
    "Filtration", "Bigrading", "INCREASING", "DECREASING", "deligne_splitting", "filtrations_from_bigrading",
    "shifted_weight", "induced_on_cohomology", "mhs_on_cohomology", "check_d_stable", "check_multiplicative",
    "SpectralPages", "spectral_E1", "MHDReport", "AxiomRecord", "mhd_check", "Bicomplex", "ddbar_check",
    "DDbarResult", "bott_chern", "BottChern", "BigradedTower", "BigradedStage", "bigraded_tower",
    "bigrading_from_types",
]
