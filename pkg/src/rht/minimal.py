"""The canonical 1-minimal model tower M(1) ⊂ M(2) ⊂ ... of a DGA.

Stage 1 is the exterior algebra on one degree-1 generator per class of
``H^1`` of the target, with zero differential. Stage ``n+1`` adds one
generator for each basis vector of the kernel of
``phi_n: H^2(M(n)) -> H^2(target)``, with differential the corresponding
cocycle; its image in the target is a primitive of ``phi(dv)`` chosen by
the exact solver (free variables set to zero).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from .cohomology import cohomology
from .errors import InvariantViolation, NonConnected
from .gca import DGAMorphism, Element, FreeCDGA, GradedAlgebra
from .linalg import SparseMatrix, Subspace, kernel_basis, lin_comb, solve


@dataclass(frozen=True)
class TowerStage:
    index: int
    generators: tuple[str, ...]
    # d of each new generator, as raw monomial terms over the generators of M(index-1)
    differential: tuple[dict, ...]
    # image of each new generator, as a degree-1 coordinate vector of the target
    phi: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.generators)


@dataclass
class Tower:
    target: GradedAlgebra
    stages: list[TowerStage] = field(default_factory=list)
    stabilized: bool = False
    # dimension of the next stage when construction stopped at max_stage
    pending_dim: int = 0

    @property
    def generator_counts(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.stages)

    @property
    def last(self) -> int:
        return len(self.stages)

    def cdga(self, stage: int | None = None) -> FreeCDGA:
        return tower_as_cdga(self, self.last if stage is None else stage)

    def phi(self, stage: int | None = None) -> DGAMorphism:
        return tower_morphism(self, self.last if stage is None else stage)


def generator_name(stage: int, k: int) -> str:
    return f"v{stage}_{k + 1}"


def stage1(target: GradedAlgebra) -> TowerStage:
    h0 = cohomology(target, 0)
    if h0.betti != 1:
        raise NonConnected(f"H^0 of the target has dimension {h0.betti}, expected 1")
    h1 = cohomology(target, 1)
    return TowerStage(
        index=1,
        generators=tuple(generator_name(1, k) for k in range(h1.betti)),
        differential=tuple({} for _ in range(h1.betti)),
        phi=tuple(h1.representatives),
    )


def tower_as_cdga(tower: Tower, stage: int) -> FreeCDGA:
    """``M(stage)`` as a free CDGA on ``V_1 ⊕ ... ⊕ V_stage``."""
    if not 1 <= stage <= tower.last:
        raise ValueError(f"stage {stage} not built (tower has {tower.last} stages)")
    cache = tower.__dict__.setdefault("_cdga_cache", {})
    key = (stage, tower.generator_counts[:stage])
    if key not in cache:
        gens, d = [], {}
        for s in tower.stages[:stage]:
            for nm, dv in zip(s.generators, s.differential):
                gens.append((nm, 1))
                d[nm] = dv
        cache[key] = FreeCDGA(gens, d, name=f"M({stage})")
    return cache[key]


def tower_morphism(tower: Tower, stage: int) -> DGAMorphism:
    m = tower_as_cdga(tower, stage)
    cache = tower.__dict__.setdefault("_phi_cache", {})
    key = (stage, tower.generator_counts[:stage])
    if key not in cache:
        images = {}
        gid = 0
        for s in tower.stages[:stage]:
            for vec in s.phi:
                images[gid] = tower.target.from_vector(vec, 1)
                gid += 1
        cache[key] = DGAMorphism(m, tower.target, images=images)
    return cache[key]


def phi_on_h2(tower: Tower, stage: int | None = None) -> SparseMatrix:
    """Matrix of ``phi_n: H^2(M(n)) -> H^2(target)`` in the canonical bases."""
    stage = tower.last if stage is None else stage
    m = tower_as_cdga(tower, stage)
    phi = tower_morphism(tower, stage)
    h2m = cohomology(m, 2)
    h2a = cohomology(tower.target, 2)
    cols = [h2a.project(phi.apply(c.representative)) for c in h2m.classes]
    return SparseMatrix.from_columns(cols, h2a.betti)


def extend(tower: Tower) -> TowerStage:
    """The next stage of the tower (possibly with no generators)."""
    if not tower.stages:
        raise ValueError("tower has no stages; build stage 1 first")
    n = tower.last
    m = tower_as_cdga(tower, n)
    phi = tower_morphism(tower, n)
    h2m = cohomology(m, 2)
    ker = kernel_basis(phi_on_h2(tower, n))
    target = tower.target
    d1 = target.d_matrix(1)
    gens, diffs, images = [], [], []
    reps = h2m.representatives
    for k, kappa in enumerate(ker.basis):
        cocycle_vec = lin_comb(kappa, reps, m.dim(2))
        cocycle = m.from_vector(cocycle_vec, 2)
        rhs = target.to_vector(phi.apply(cocycle), 2)
        xi = solve(d1, rhs)
        if xi is None:
            raise InvariantViolation(f"phi(dv) is not exact in the target at stage {n + 1}")
        gens.append(generator_name(n + 1, k))
        diffs.append(dict(cocycle.terms))
        images.append(xi)
    return TowerStage(n + 1, tuple(gens), tuple(diffs), tuple(images))


def build_tower(target: GradedAlgebra, max_stage: int = 5) -> Tower:
    if max_stage < 1:
        raise ValueError("max_stage must be at least 1")
    tower = Tower(target, [stage1(target)])
    while True:
        nxt = extend(tower)
        if nxt.dim == 0:
            tower.stabilized = True
            tower.pending_dim = 0
            break
        if tower.last >= max_stage:
            tower.pending_dim = nxt.dim
            break
        tower.stages.append(nxt)
    return tower


def check_tower(tower: Tower) -> list[str]:
    """Exact re-verification of the stage invariants; returns failures."""
    problems = []
    for n in range(1, tower.last + 1):
        phi = tower_morphism(tower, n)
        bad = phi.check()
        if bad:
            problems.append(f"stage {n}: phi does not commute with d on {bad}")
        if n >= 2:
            prev = tower_as_cdga(tower, n - 1)
            h2 = cohomology(prev, 2)
            ker = kernel_basis(phi_on_h2(tower, n - 1))
            vecs = []
            for dv in tower.stages[n - 1].differential:
                e = prev.rebind(dv)
                if prev.differential(e):
                    problems.append(f"stage {n}: d(v) is not a cocycle of M({n - 1})")
                    continue
                vecs.append(h2.project(e))
            span = Subspace.span(h2.betti, vecs)
            if span.dim != len(vecs) or span != ker:
                problems.append(f"stage {n}: classes of d(V_{n}) do not form a basis of ker phi_{n - 1}")
    return problems


def degree_one_matrix(tower: Tower, stage: int | None = None) -> SparseMatrix:
    """Matrix of phi on degree 1: columns are images of the generators."""
    stage = tower.last if stage is None else stage
    cols = [vec for s in tower.stages[:stage] for vec in s.phi]
    return SparseMatrix.from_columns(cols, tower.target.dim(1))


def stage_differentials(tower: Tower, stage: int | None = None) -> dict[str, Element]:
    m = tower.cdga(stage)
    return {g.name: m.d_generator(g.id) for g in m.generators}


__all__ = [
    "TowerStage", "Tower", "stage1", "extend", "build_tower", "tower_as_cdga", "tower_morphism", "phi_on_h2",
    "check_tower", "degree_one_matrix", "stage_differentials",
]
