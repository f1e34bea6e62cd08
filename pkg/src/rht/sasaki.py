"""The finite model ``A = H_B ⊗ ∧(y)``, ``dy = omega``, of a Sasakian manifold
built from its basic cohomology ring, with its weight and Hodge filtrations
and the 1-formality pipeline on top of it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cohomology import betti_numbers, cohomology
from .errors import ValidationFailed
from .formality import Check, one_formal, quadratic_presentation
from .gca import FDGA, DGAMorphism, Element, FreeCDGA
from .hodge import (DECREASING, INCREASING, Bigrading, BigradedTower, Filtration, bigraded_tower,
                    deligne_splitting, mhs_on_cohomology)
from .linalg import (ONE, ZERO, I, SparseMatrix, Subspace, direct_sum_check, is_real, quotient, rank,
                     unit_vector)
from .malcev import dualize, malcev_summary, presented_level_dims
from .minimal import build_tower


def free_exterior(names: Sequence[str]) -> FreeCDGA:
    """Exterior algebra on degree-1 generators with zero differential."""
    return FreeCDGA([(nm, 1) for nm in names], name="free")


@dataclass
class BasicRing:
    name: str
    n: int
    ring: FDGA
    # (p, q) -> subspace of the degree p+q coordinates of ``ring``
    components: dict[tuple[int, int], Subspace]
    omega: Element

    @classmethod
    def from_presentation(cls, name: str, n: int, free: FreeCDGA, relations: Sequence[Element] = (),
                          components: Mapping[tuple[int, int], Sequence[Element]] | None = None,
                          omega: Element | None = None) -> "BasicRing":
        """``free / (relations)`` with Hodge components generated from degree 1.

        ``components`` lists spanning elements of ``H^{1,0}`` and optionally
        ``H^{0,1}`` (the conjugate is used when the latter is missing).
        Higher ``H^{p,q}`` are spanned by products.
        """
        if not free.is_exterior or any(g.degree != 1 for g in free.generators):
            raise ValueError("basic rings are presented on degree-1 generators")
        rels = [free.rebind(r) for r in relations]
        top = free.top_degree
        quot = {}
        for k in range(top + 1):
            span = []
            for r in rels:
                dr = r.degree
                if dr is None:
                    raise ValueError("relations must be homogeneous")
                if dr > k:
                    continue
                for m in free.basis_elements(k - dr):
                    prod = r * m
                    if prod:
                        span.append(free.to_vector(prod, k))
            ideal = Subspace.span(free.dim(k), span)
            reps, project = quotient(free.dim(k), ideal)
            keys = free.degree_slice(k)
            quot[k] = ([keys[v.index(ONE)] for v in reps], project)
        graded_basis = {k: [free.key_name(key) for key in quot[k][0]] for k in quot if quot[k][0]}
        glob = {}
        for k, (keys, _) in quot.items():
            for key in keys:
                glob[key] = free.key_name(key)

        def to_ring_terms(e: Element, k: int) -> dict:
            coords = quot[k][1](free.to_vector(e, k)) if k in quot else ()
            return {free.key_name(key): c for key, c in zip(quot[k][0], coords) if c} if k in quot else {}

        table = {}
        for k1, (keys1, _) in quot.items():
            for k2, (keys2, _) in quot.items():
                if k1 == 0 or k2 == 0 or k1 + k2 > top:
                    continue
                for a in keys1:
                    for b in keys2:
                        prod = free.basis_element(a) * free.basis_element(b)
                        table[glob[a], glob[b]] = to_ring_terms(prod, k1 + k2) if prod else {}
        ring = FDGA(graded_basis, table, {}, name=name, unit="1" if "1" in graded_basis.get(0, ()) else None)

        def ring_vec(e: Element, k: int) -> tuple:
            e = free.rebind(e)
            return quot[k][1](free.to_vector(e, k))

        comps: dict[tuple[int, int], Subspace] = {}
        if quot.get(0) and quot[0][0]:
            comps[0, 0] = Subspace.full(len(quot[0][0]))
        components = dict(components or {})
        if 1 in quot:
            d1 = len(quot[1][0])
            h10 = [free.rebind(e) for e in components.get((1, 0), ())]
            h01 = [free.rebind(e) for e in components.get((0, 1), ())] or [e.conjugate() for e in h10]
            comps[1, 0] = Subspace.span(d1, (ring_vec(e, 1) for e in h10))
            comps[0, 1] = Subspace.span(d1, (ring_vec(e, 1) for e in h01))
            # spanning elements of H^{p,q} as elements of the free algebra
            elems = {(1, 0): h10, (0, 1): h01}
            for k in range(2, top + 1):
                if k not in quot or not quot[k][0]:
                    continue
                for p in range(k + 1):
                    q = k - p
                    if p > 0:
                        prev = elems.get((p - 1, q), [])
                        new = [a * b for a in prev for b in h10]
                    else:
                        prev = elems.get((p, q - 1), [])
                        new = [a * b for a in prev for b in h01]
                    # keep a spanning set small: reduce to independent images
                    kept, vecs = [], Subspace.zero(free.dim(k))
                    for e in new:
                        if not e:
                            continue
                        v = free.to_vector(e, k)
                        if v not in vecs:
                            vecs = vecs + Subspace.span(free.dim(k), [v])
                            kept.append(e)
                    elems[p, q] = kept
                    comps[p, q] = Subspace.span(len(quot[k][0]), (quot[k][1](free.to_vector(e, k)) for e in kept))
        om = ring.zero() if omega is None else ring.element(
            {ring.index(nm): c for nm, c in to_ring_terms(free.rebind(omega), 2).items()})
        comps = {k: v for k, v in comps.items() if v.dim}
        return cls(name, n, ring, comps, om)

    def component(self, p: int, q: int) -> Subspace:
        return self.components.get((p, q), Subspace.zero(self.ring.dim(p + q)))

    def dims(self) -> dict[int, int]:
        return {k: self.ring.dim(k) for k in range(self.ring.top_degree + 1)}


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    warnings: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks + self.warnings:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
                "warnings": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.warnings]}


def _omega_power(r: BasicRing, k: int) -> Element:
    out = r.ring.one()
    for _ in range(k):
        out = out * r.omega
    return out


def validate_basic_ring(r: BasicRing, n: int | None = None) -> ValidationReport:
    n = r.n if n is None else n
    ring = r.ring
    rep = ValidationReport()
    add = rep.checks.append
    add(Check("n_positive", n >= 1, f"n = {n}"))
    add(Check("h00_scalars", ring.dim(0) == 1, f"dim H^0 = {ring.dim(0)}"))
    top = ring.top_degree
    add(Check("top_degree", top <= 2 * n, f"top degree {top}, 2n = {2 * n}"))
    axioms = {name: (ok, detail) for name, ok, detail in ring.check_axioms()}
    ok = all(axioms[k][0] for k in ("graded_commutative", "associative", "unital"))
    add(Check("ring_axioms", ok, "; ".join(f"{k}: {d}" for k, (o, d) in axioms.items() if not o)))
    bad_split = []
    for k in range(top + 1):
        parts = [v for (p, q), v in r.components.items() if p + q == k]
        ind, span = direct_sum_check(parts, ring.dim(k))
        if not (ind and span):
            bad_split.append(k)
    add(Check("hodge_decomposition", not bad_split, f"fails in degrees {bad_split}" if bad_split else ""))
    bad_conj = [pq for pq, v in r.components.items() if v.conjugate() != r.component(pq[1], pq[0])]
    add(Check("conjugation_symmetry", not bad_conj, f"fails at {bad_conj}" if bad_conj else ""))
    om = ring.to_vector(r.omega, 2) if r.omega and r.omega.degree == 2 else None
    add(Check("omega_degree_2", om is not None, "" if om is not None else "omega must be a nonzero degree-2 class"))
    if om is not None:
        add(Check("omega_real", all(is_real(c) for c in om)))
        add(Check("omega_type_11", om in r.component(1, 1)))
        if n >= 2:
            cols = [ring.to_vector(x * r.omega, 3) if (x * r.omega) else (ZERO,) * ring.dim(3)
                    for x in ring.basis_elements(1)]
            rk = rank(SparseMatrix.from_columns(cols, ring.dim(3))) if cols else 0
            add(Check("omega_injective_h1_h3", rk == ring.dim(1), f"rank {rk} of {ring.dim(1)}"))
        else:
            add(Check("omega_injective_h1_h3", True, "skipped for n = 1"))
        if n >= 1:
            add(Check("omega_power_nonzero", bool(_omega_power(r, n)), f"omega^{n}"))
    dims = [ring.dim(k) for k in range(top + 1)]
    pd = bool(dims) and dims[-1] == 1 and dims == dims[::-1]
    rep.warnings.append(Check("poincare_duality", pd, f"dims {dims}"))
    return rep


@dataclass
class SasakiModel:
    basic: BasicRing
    n: int
    A: FDGA
    # per degree: the bigrading A_pq = H^{pq} ⊕ H^{p-1,q-1} y and the filtrations
    bigrading: dict[int, Bigrading]
    W: dict[int, Filtration]
    F: dict[int, Filtration]

    def cohomology_dims(self) -> list[int]:
        return betti_numbers(self.A, range(2 * self.n + 2))


def _y_name(b: str) -> str:
    return "y" if b == "1" else f"{b}*y"


def build_model(r: BasicRing, n: int | None = None) -> SasakiModel:
    n = r.n if n is None else n
    if n != r.n:
        raise ValueError(f"ring was declared with n = {r.n}, got n = {n}")
    report = validate_basic_ring(r, n)
    if not report.passed:
        raise ValidationFailed(report)
    ring = r.ring
    top = ring.top_degree
    basic = {k: list(ring.graded_basis.get(k, ())) for k in range(top + 1)}
    graded = {}
    for k in range(top + 2):
        names = basic.get(k, []) + [_y_name(b) for b in basic.get(k - 1, [])]
        if names:
            graded[k] = names
    deg = {b: k for k, bs in basic.items() for b in bs}
    if "y" in deg:
        raise ValueError("the name y is reserved for the model's degree-1 generator")
    ymap = {_y_name(b): b for b in deg}
    table = {}
    for k1, bs1 in basic.items():
        for k2, bs2 in basic.items():
            for a in bs1:
                for b in bs2:
                    if a == "1" or b == "1":
                        continue
                    prod = ring[a] * ring[b]
                    terms = {ring.names[i]: c for i, c in prod.terms.items()}
                    table[a, b] = terms
                    # (a y) b = (-1)^|b| ab y, a (b y) = ab y
                    s = -1 if k2 % 2 else 1
                    table[_y_name(a), b] = {_y_name(nm): s * c for nm, c in terms.items()}
                    table[a, _y_name(b)] = {_y_name(nm): c for nm, c in terms.items()}
    for k1, bs1 in basic.items():
        for b in bs1:
            if b == "1":
                continue
            s = -1 if k1 % 2 else 1
            table["y", b] = {_y_name(b): s}
            table[b, "y"] = {_y_name(b): ONE}
            for bs2 in basic.values():
                for c in bs2:
                    table[_y_name(b), _y_name(c)] = {}
            table[_y_name(b), "y"] = {}
            table["y", _y_name(b)] = {}
    table["y", "y"] = {}
    # d(b y) = (-1)^|b| b omega
    dmats = {}
    for k in range(top + 1):
        src = graded.get(k, [])
        tgt = graded.get(k + 1, [])
        if not src:
            continue
        tidx = {nm: i for i, nm in enumerate(tgt)}
        entries = []
        for c, nm in enumerate(src):
            if nm not in ymap:
                continue
            b = ymap[nm]
            s = -1 if deg[b] % 2 else 1
            prod = ring[b] * r.omega
            for i, v in prod.terms.items():
                entries.append((tidx[ring.names[i]], c, s * v))
        dmats[k] = SparseMatrix(len(tgt), len(src), entries)
    A = FDGA(graded, table, dmats, name=f"A({r.name})", unit="1")
    bigr, W, F = {}, {}, {}
    for k, names in graded.items():
        nb = len(basic.get(k, []))
        ny = len(names) - nb
        dim = nb + ny
        comps = {}
        for (p, q), sub in r.components.items():
            if p + q == k:
                comps[p, q] = Subspace.span(dim, (tuple(v) + (ZERO,) * ny for v in sub.basis))
            if p + q == k - 1:
                t = (p + 1, q + 1)
                comps[t] = Subspace.span(dim, ((ZERO,) * nb + tuple(v) for v in sub.basis))
        bigr[k] = Bigrading(dim, comps)
        W[k] = Filtration(dim, INCREASING, {0: Subspace.coordinate(dim, range(nb)), 1: Subspace.full(dim)})
        ps = [p for p, _ in comps] or [0]
        F[k] = Filtration(dim, DECREASING, {
            a: Subspace._from_sparse(dim, [row for (p, q), v in comps.items() if p >= a for row in v.sparse_basis()])
            for a in range(min(ps), max(ps) + 2)})
    return SasakiModel(r, n, A, bigr, W, F)


def mhs_splitting(m: SasakiModel, r: int) -> Bigrading:
    """Deligne splitting of the mixed Hodge structure on ``H^r`` of the model."""
    if r not in m.W:
        return Bigrading(0, {})
    W, F = mhs_on_cohomology(m.A, r, m.W[r], m.F[r])
    return deligne_splitting(W, F)


@dataclass
class HodgeSplitReport:
    n: int
    splits: dict[int, dict[tuple[int, int], int]]
    checks: list[Check] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed,
                "splits": {str(r): {f"{p},{q}": d for (p, q), d in sorted(s.items())} for r, s in self.splits.items()},
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
                "findings": list(self.findings)}


def hodge_split_check(m: SasakiModel) -> HodgeSplitReport:
    n = m.n
    splits = {r: mhs_splitting(m, r).dims() for r in range(2 * n + 2)}
    rep = HodgeSplitReport(n, splits)
    rep.checks.append(Check("H0_is_V00", set(splits[0]) <= {(0, 0)}, str(splits[0])))
    rep.checks.append(Check("H1_split_10_01", set(splits[1]) <= {(1, 0), (0, 1)}, str(splits[1])))
    top = 2 * n + 1
    rep.checks.append(Check("Htop_pure", set(splits[top]) <= {(n + 1, n + 1)}, str(splits[top])))
    if n >= 2:
        rep.checks.append(Check("H2_weight_2", set(splits[2]) <= {(2, 0), (1, 1), (0, 2)}, str(splits[2])))
    else:
        rep.findings.append(f"n = 1: H^2 splits as {splits[2]}, not in weight 2")
    return rep


def mhd_fixture(m: SasakiModel):
    """``(A, W, E, W, F, phi)`` ready for :func:`rht.hodge.mhd_check`."""
    return m.A, m.W, m.A, m.W, m.F, DGAMorphism.identity(m.A)


WEIGHT_TWO_CERTIFICATE = ("H^2 of the model is pure of weight 2 and V_1 has weight 1, so H^2 of the "
                          "minimal model is spanned by products of V_1")


def sasaki_pipeline(r: BasicRing, n: int | None = None, max_stage: int = 2) -> dict:
    n = r.n if n is None else n
    m = build_model(r, n)
    tower = build_tower(m.A, max_stage)
    h1 = mhs_splitting(m, 1)
    h2 = mhs_splitting(m, 2)
    bt = bigraded_tower(tower, h1, h2)
    v1_types = sorted(bt.stages[0].type_counts())
    v2_types = sorted(bt.stages[1].type_counts()) if len(bt.stages) > 1 else []
    weight_one = set(v1_types) <= {(1, 0), (0, 1)}
    certificate = WEIGHT_TWO_CERTIFICATE if (n >= 2 and bt.target_h2_split and weight_one) else None
    fr = one_formal(tower, certificate)
    out = {
        "ring": r.name,
        "n": n,
        "n_hypothesis_met": n >= 2,
        "model_dims": [m.A.dim(k) for k in range(2 * n + 2)],
        "cohomology": m.cohomology_dims(),
        "tower_counts": list(tower.generator_counts),
        "stabilized": tower.stabilized,
        "v1_types": [list(t) for t in v1_types],
        "v2_types": [list(t) for t in v2_types],
        "v2_types_weight_2": set(v2_types) <= {(2, 0), (1, 1), (0, 2)},
        "formality": fr.as_dict(),
        "one_formal": fr.verdict,
        "notes": list(bt.notes),
    }
    if n < 2:
        out["notes"].append("n = 1: the weight argument needs n >= 2")
    if fr.verdict and not fr.provisional:
        qp = quadratic_presentation(tower, fr)
        out["quadratic_presentation"] = {"generators": len(qp.generators), "relations": len(qp.relations)}
        lt = dualize(tower)
        out["malcev"] = malcev_summary(lt)
        if tower.stabilized:
            depth = len(lt.levels) + 1
            out["presented_level_dims"] = presented_level_dims(qp, depth)
    return out


# ---------------------------------------------------------------------------
# fixture rings


def heisenberg_ring(n: int) -> BasicRing:
    """Basic cohomology of the Heisenberg nilmanifold: the torus ring on 2n
    classes with omega = x1 x2 + ... + x_{2n-1} x_{2n}."""
    free = free_exterior([f"x{i + 1}" for i in range(2 * n)])
    x = free.gens()
    h10 = [x[2 * k] + I * x[2 * k + 1] for k in range(n)]
    omega = free.zero()
    for k in range(n):
        omega = omega + x[2 * k] * x[2 * k + 1]
    return BasicRing.from_presentation(f"heis{2 * n + 1}", n, free, (), {(1, 0): h10}, omega)


def surface_product_ring() -> BasicRing:
    """Cohomology of a genus-2 surface times a torus, omega the sum of area classes."""
    free = free_exterior(["a1", "b1", "a2", "b2", "c", "e"])
    a1, b1, a2, b2, c, e = free.gens()
    rels = [a1 * a2, a1 * b2, b1 * a2, b1 * b2, a1 * b1 - a2 * b2]
    h10 = [a1 + I * b1, a2 + I * b2, c + I * e]
    return BasicRing.from_presentation("sigma2xT2", 2, free, rels, {(1, 0): h10}, a1 * b1 + c * e)


__all__ = [
    "BasicRing", "free_exterior", "ValidationReport", "validate_basic_ring", "SasakiModel", "build_model",
    "mhs_splitting", "hodge_split_check", "HodgeSplitReport", "mhd_fixture", "sasaki_pipeline",
    "heisenberg_ring", "surface_product_ring",
]
