"""Nilpotent Lie algebra towers dual to 1-minimal towers, and free Lie
algebras for checking quadratic presentations."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cohomology import LieAlgebra
from .errors import InvariantViolation
from .formality import QuadraticPresentation, lower_central_dims
from .linalg import ONE, ZERO, SparseMatrix, Subspace
from .minimal import Tower, tower_as_cdga


@dataclass
class LieTower:
    levels: list[LieAlgebra]
    # projections[i] is the matrix of L_{i+2} -> L_{i+1}
    projections: list[SparseMatrix] = field(default_factory=list)
    stabilized: bool = False

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g.dim for g in self.levels)


def dual_name(generator: str) -> str:
    return "X" + generator[1:]


def _level(tower: Tower, stage: int) -> LieAlgebra:
    m = tower_as_cdga(tower, stage)
    basis = [dual_name(g.name) for g in m.generators]
    sc: dict[tuple[int, int], dict[int, object]] = {}
    # <d xi, X ∧ Y> = -<xi, [X, Y]>
    for g in m.generators:
        for mono, c in m.d_generator(g.id).terms.items():
            (a, _), (b, _) = mono
            sc.setdefault((a, b), {})
            sc[a, b][g.id] = sc[a, b].get(g.id, ZERO) - c
    return LieAlgebra(basis, {k: v for k, v in sc.items() if any(v.values())}, name=f"L{stage}")


def _projection(big: LieAlgebra, small: LieAlgebra) -> SparseMatrix:
    return SparseMatrix(small.dim, big.dim, ((i, i, ONE) for i in range(small.dim)))


def bracket_preserved(p: SparseMatrix, big: LieAlgebra, small: LieAlgebra) -> bool:
    for i in range(big.dim):
        for j in range(i + 1, big.dim):
            lhs = p.apply(big.bracket_basis(i, j))
            rhs = small.bracket(p.column(i), p.column(j))
            if lhs != rhs:
                return False
    return True


def dualize(tower: Tower) -> LieTower:
    levels = []
    for n in range(1, tower.last + 1):
        g = _level(tower, n)
        bad = g.jacobi_violations()
        if bad:
            raise InvariantViolation(f"dual of stage {n} violates Jacobi on {bad[0]}")
        levels.append(g)
    projections = []
    for big, small in zip(levels[1:], levels):
        p = _projection(big, small)
        if not bracket_preserved(p, big, small):
            raise InvariantViolation(f"projection {big.name} -> {small.name} is not a Lie homomorphism")
        projections.append(p)
    return LieTower(levels, projections, tower.stabilized)


def nilpotency_class(g: LieAlgebra) -> int | None:
    dims = lower_central_dims(g)
    if dims[-1] != 0:
        return None
    return len(dims) - 1 if g.dim else 0


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    full = Subspace.full(g.dim)
    out = [full]
    while out[-1].dim:
        nxt = g.span_of_brackets(out[-1], full)
        if nxt.dim == out[-1].dim:
            break
        out.append(nxt)
    return out


def derived_series(g: LieAlgebra) -> list[Subspace]:
    out = [Subspace.full(g.dim)]
    while out[-1].dim:
        nxt = g.span_of_brackets(out[-1], out[-1])
        if nxt.dim == out[-1].dim:
            break
        out.append(nxt)
    return out


def invariants(g: LieAlgebra) -> dict:
    """Isomorphism invariants used to compare Lie algebras."""
    return {
        "dim": g.dim,
        "lower_central": [s.dim for s in lower_central_series(g)],
        "derived": [s.dim for s in derived_series(g)],
        "center": g.center().dim,
    }


def malcev_summary(lt: LieTower) -> dict:
    last = lt.levels[-1] if lt.levels else None
    out = {
        "level_dims": list(lt.dims),
        "stabilized": lt.stabilized,
        "nilpotency_class": nilpotency_class(last) if last else 0,
        "limit": None,
    }
    if lt.stabilized and last is not None:
        out["limit"] = {
            "basis": list(last.basis),
            "brackets": [
                {"i": last.basis[i], "j": last.basis[j],
                 "value": {last.basis[k]: str(c) for k, c in sorted(t.items())}}
                for (i, j), t in sorted(last.structure_constants.items())
            ],
        }
    return out


# ---------------------------------------------------------------------------
# free Lie algebras, realized inside the tensor algebra


def lyndon_words(m: int, k: int) -> list[tuple[int, ...]]:
    """Lyndon words of length ``k`` over ``0..m-1`` (Duval's algorithm)."""
    out = []
    if k == 0 or m == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == k:
            out.append(tuple(w))
        n = len(w)
        while len(w) < k:
            w.append(w[len(w) - n])
        while w and w[-1] == m - 1:
            w.pop()
    return out


def _standard_factor(w: tuple[int, ...]) -> tuple[tuple, tuple]:
    # split w = uv with v the longest proper Lyndon suffix
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError("word of length 1 has no standard factorization")


def _is_lyndon(w: tuple[int, ...]) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else len(w) == 1


def tensor_bracket(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            for word, s in ((u + v, x * y), (v + u, -x * y)):
                val = out.get(word, ZERO) + s
                if val:
                    out[word] = val
                else:
                    out.pop(word, None)
    return out


@lru_cache(maxsize=None)
def _lyndon_element(w: tuple[int, ...]) -> tuple:
    if len(w) == 1:
        return ((w, ONE),)
    u, v = _standard_factor(w)
    return tuple(sorted(tensor_bracket(dict(_lyndon_element(u)), dict(_lyndon_element(v))).items()))


def lyndon_element(w: tuple[int, ...]) -> dict:
    """The Lyndon basis element for ``w`` as a tensor (word -> coefficient)."""
    return dict(_lyndon_element(tuple(w)))


def witt_dimension(m: int, k: int) -> int:
    """Dimension of the degree-``k`` part of the free Lie algebra on ``m`` generators."""
    if k < 1:
        return 0
    total = 0
    for d in range(1, k + 1):
        if k % d == 0:
            total += _mobius(d) * m ** (k // d)
    return total // k


def _mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def _span_of_tensors(elements: list[dict], k: int) -> tuple[Subspace, list]:
    words = sorted({w for e in elements for w in e})
    idx = {w: i for i, w in enumerate(words)}
    vecs = []
    for e in elements:
        v = [ZERO] * len(words)
        for w, c in e.items():
            v[idx[w]] = c
        vecs.append(v)
    return Subspace.span(len(words), vecs), words


def presented_quotient_dims(qp: QuadraticPresentation, depth: int) -> list[int]:
    """Degree-wise dimensions of ``free Lie / <relations>`` up to ``depth``.

    The ideal generated in degree 2 has ``I_k = [L_1, I_{k-1}]``.
    """
    m = len(qp.generators)
    gens = [{(i,): ONE} for i in range(m)]
    ideal = []
    for r in qp.relations:
        e: dict = {}
        for (i, j), c in r.items():
            for w, v in tensor_bracket(gens[i], gens[j]).items():
                e[w] = e.get(w, ZERO) + c * v
        ideal.append({w: v for w, v in e.items() if v})
    dims = []
    for k in range(1, depth + 1):
        free_dim = witt_dimension(m, k)
        if k == 1:
            dims.append(m)
            continue
        if k > 2:
            ideal = [tensor_bracket(g, e) for g in gens for e in ideal]
            ideal = [e for e in ideal if e]
            if ideal:
                sub, words = _span_of_tensors(ideal, k)
                ideal = [{words[c]: v for c, v in enumerate(b) if v} for b in sub.basis]
        idim = _span_of_tensors(ideal, k)[0].dim if ideal else 0
        dims.append(free_dim - idim)
    return dims


def presented_level_dims(qp: QuadraticPresentation, depth: int) -> list[int]:
    """Dimensions of the nilpotent quotients ``L / L_{k+1}``, ``k = 1..depth``."""
    out, acc = [], 0
    for d in presented_quotient_dims(qp, depth):
        acc += d
        out.append(acc)
    return out


__all__ = [
    "LieTower", "dualize", "malcev_summary", "lower_central_series", "derived_series", "nilpotency_class",
    "invariants", "bracket_preserved", "lyndon_words", "lyndon_element", "witt_dimension", "tensor_bracket",
    "presented_quotient_dims", "presented_level_dims",
]
