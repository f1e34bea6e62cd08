"""Graded-commutative algebras, differentials and DGA morphisms.

Two concrete algebra kinds share one element type:

* :class:`FreeCDGA` -- free graded-commutative algebra on finitely many
  generators, keyed by monomials, with a differential given on generators
  and extended as a graded derivation.
* :class:`FDGA` -- a finite-dimensional DGA given by a graded basis, a sparse
  multiplication table and one differential matrix per degree.

Sign convention: ``d(ab) = da*b + (-1)^|a| a*db``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvariantViolation, TruncationError
from .linalg import ONE, ZERO, SparseMatrix, conj, format_scalar, scalar

Monomial = tuple  # sorted tuple of (generator id, exponent)
UNIT: Monomial = ()


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    degree: int
    bidegree: tuple[int, int] | None = None

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name} must have positive degree")


class Element:
    """A finite linear combination of basis keys of some algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "GradedAlgebra", terms: Mapping | None = None):
        self.algebra = algebra
        clean = {}
        for k, v in (terms or {}).items():
            v = scalar(v)
            if v:
                clean[k] = v
        self.terms = clean

    @property
    def degree(self) -> int | None:
        degs = {self.algebra.key_degree(k) for k in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key):
        return self.terms.get(key, ZERO)

    def _same(self, other: "Element"):
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        if isinstance(other, Element):
            self._same(other)
            t = dict(self.terms)
            for k, v in other.terms.items():
                t[k] = t.get(k, ZERO) + v
            return Element(self.algebra, t)
        if other == 0:
            return self
        return self + self.algebra.one() * other

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        c = scalar(other)
        return Element(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = scalar(other)
        return Element(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __pow__(self, n: int):
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def d(self) -> "Element":
        return self.algebra.differential(self)

    def conjugate(self) -> "Element":
        return Element(self.algebra, {k: conj(v) for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra is other.algebra and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return self.algebra.format(self)


@dataclass
class DSquaredReport:
    passed: bool
    violations: list = field(default_factory=list)  # (name, Element d²)


class GradedAlgebra:
    """Shared machinery; subclasses provide the basis and structure maps."""

    name: str = ""
    truncation_degree: int = 0

    def __init__(self):
        self._cache: dict = {}

    # --- structure supplied by subclasses --------------------------------
    def key_degree(self, key) -> int:
        raise NotImplementedError

    def key_name(self, key) -> str:
        raise NotImplementedError

    def _mul_keys(self, k1, k2) -> dict:
        raise NotImplementedError

    def _d_key(self, key) -> dict:
        raise NotImplementedError

    def _slice(self, k: int) -> list:
        raise NotImplementedError

    unit_key = None

    # --- elements -------------------------------------------------------
    def element(self, terms: Mapping | None = None) -> Element:
        return Element(self, terms)

    def one(self) -> Element:
        return Element(self, {self.unit_key: ONE})

    def zero(self) -> Element:
        return Element(self)

    def basis_element(self, key) -> Element:
        return Element(self, {key: ONE})

    def _mul_terms(self, t1: Mapping, t2: Mapping) -> dict:
        out: dict = {}
        for k1, a in t1.items():
            for k2, b in t2.items():
                for k, c in self._mul_keys(k1, k2).items():
                    v = out.get(k, ZERO) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        out = Element(self, self._mul_terms(a.terms, b.terms))
        self._check_truncation(out)
        return out

    def differential(self, a: Element) -> Element:
        if a.algebra is not self:
            raise ValueError("element belongs to a different algebra")
        out: dict = {}
        for k, c in a.terms.items():
            for k2, v in self._d_key_cached(k).items():
                nv = out.get(k2, ZERO) + c * v
                if nv:
                    out[k2] = nv
                else:
                    out.pop(k2, None)
        res = Element(self, out)
        self._check_truncation(res)
        return res

    def _d_key_cached(self, key) -> dict:
        dc = self._cache.setdefault("d", {})
        if key not in dc:
            dc[key] = self._d_key(key)
        return dc[key]

    def _check_truncation(self, e: Element):
        for k in e.terms:
            if self.key_degree(k) > self.truncation_degree:
                raise TruncationError(
                    f"degree {self.key_degree(k)} exceeds truncation degree {self.truncation_degree} in {self.name or 'algebra'}")

    # --- graded pieces ----------------------------------------------------
    def degree_slice(self, k: int) -> list:
        sc = self._cache.setdefault("slice", {})
        if k not in sc:
            keys = self._slice(k) if k >= 0 else []
            if keys and k > self.truncation_degree:
                raise TruncationError(f"degree {k} exceeds truncation degree {self.truncation_degree}")
            sc[k] = keys
        return sc[k]

    def dim(self, k: int) -> int:
        return len(self.degree_slice(k))

    def slice_index(self, k: int) -> dict:
        ic = self._cache.setdefault("index", {})
        if k not in ic:
            ic[k] = {key: i for i, key in enumerate(self.degree_slice(k))}
        return ic[k]

    def basis_elements(self, k: int) -> list[Element]:
        return [self.basis_element(key) for key in self.degree_slice(k)]

    def to_vector(self, a: Element, k: int) -> tuple:
        idx = self.slice_index(k)
        v = [ZERO] * len(idx)
        for key, c in a.terms.items():
            if key not in idx:
                raise ValueError(f"element has a term outside degree {k}: {self.key_name(key)}")
            v[idx[key]] = c
        return tuple(v)

    def from_vector(self, v: Sequence, k: int) -> Element:
        keys = self.degree_slice(k)
        if len(v) != len(keys):
            raise ValueError(f"vector of length {len(v)} for degree {k} of dimension {len(keys)}")
        return Element(self, {key: c for key, c in zip(keys, v) if c})

    def d_matrix(self, k: int) -> SparseMatrix:
        """Matrix of ``d: A^k -> A^{k+1}`` in the degree-slice bases."""
        mc = self._cache.setdefault("dmat", {})
        if k not in mc:
            src = self.degree_slice(k)
            tgt = self.slice_index(k + 1)
            entries = []
            for c, key in enumerate(src):
                for k2, v in self._d_key_cached(key).items():
                    entries.append((tgt[k2], c, v))
            mc[k] = SparseMatrix(len(tgt), len(src), entries)
        return mc[k]

    @property
    def top_degree(self) -> int:
        return max((k for k in range(self.truncation_degree + 1) if self.degree_slice(k)), default=0)

    def check_d_squared(self) -> DSquaredReport:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        if not a.terms:
            return "0"
        parts = []
        for key in sorted(a.terms, key=self._sort_key):
            c = a.terms[key]
            name = self.key_name(key)
            cs = format_scalar(c)
            if name == "1":
                parts.append(cs)
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                if "+" in cs[1:] or "-" in cs[1:]:
                    cs = f"({cs})"
                parts.append(f"{cs}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def _sort_key(self, key):
        return (self.key_degree(key), key)


def _as_terms(x) -> dict:
    if isinstance(x, Element):
        return dict(x.terms)
    return dict(x or {})


class FreeCDGA(GradedAlgebra):
    """Free graded-commutative algebra with a differential on generators."""

    def __init__(self, generators: Iterable, differential: Mapping | None = None,
                 truncation_degree: int | None = None, name: str = ""):
        super().__init__()
        gens = []
        for i, g in enumerate(generators):
            if isinstance(g, Generator):
                g = Generator(i, g.name, g.degree, g.bidegree)
            else:
                g = Generator(i, *g)
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.name = name
        self._by_name = {g.name: g.id for g in gens}
        self._gdeg = tuple(g.degree for g in gens)
        odd_top = sum(g.degree for g in gens if g.degree % 2)
        if truncation_degree is None:
            if all(g.degree % 2 for g in gens):
                truncation_degree = odd_top
            else:
                truncation_degree = max(4, odd_top)
        self.truncation_degree = truncation_degree
        self.unit_key = UNIT
        d: dict[int, dict] = {}
        for key, value in (differential or {}).items():
            gid = self.gen_id(key)
            d[gid] = _as_terms(value)
        self._d = {g.id: d.get(g.id, {}) for g in gens}
        for g in gens:
            for m in self._d[g.id]:
                if self.key_degree(m) != g.degree + 1:
                    raise ValueError(f"d({g.name}) must have degree {g.degree + 1}")

    # --- lookup -----------------------------------------------------------
    def gen_id(self, key) -> int:
        if isinstance(key, Generator):
            return key.id
        if isinstance(key, int):
            if not 0 <= key < len(self.generators):
                raise KeyError(key)
            return key
        try:
            return self._by_name[key]
        except KeyError:
            raise KeyError(f"unknown generator {key!r}") from None

    def gen(self, key) -> Element:
        return Element(self, {((self.gen_id(key), 1),): ONE})

    def gens(self) -> list[Element]:
        return [self.gen(g.id) for g in self.generators]

    def d_generator(self, key) -> Element:
        return Element(self, self._d[self.gen_id(key)])

    @property
    def is_exterior(self) -> bool:
        return all(g.degree % 2 for g in self.generators)

    # --- structure --------------------------------------------------------
    def key_degree(self, m: Monomial) -> int:
        return sum(self._gdeg[g] * e for g, e in m)

    def key_name(self, m: Monomial) -> str:
        if not m:
            return "1"
        return "*".join(self.generators[g].name + (f"^{e}" if e > 1 else "") for g, e in m)

    def monomial_bidegree(self, m: Monomial) -> tuple[int, int] | None:
        p = q = 0
        for g, e in m:
            bd = self.generators[g].bidegree
            if bd is None:
                return None
            p += bd[0] * e
            q += bd[1] * e
        return p, q

    def _mul_keys(self, m1: Monomial, m2: Monomial) -> dict:
        if not m1:
            return {m2: ONE}
        if not m2:
            return {m1: ONE}
        degs = self._gdeg
        sign = 0
        merged = dict(m1)
        for g, e in m2:
            pb = (degs[g] * e) & 1
            if pb:
                for h, f in m1:
                    if h > g and (degs[h] * f) & 1:
                        sign ^= 1
            if g in merged:
                if degs[g] & 1:
                    return {}
                merged[g] += e
            else:
                merged[g] = e
        return {tuple(sorted(merged.items())): -ONE if sign else ONE}

    def _d_key(self, m: Monomial) -> dict:
        out: dict = {}
        prefix_deg = 0
        for idx, (g, e) in enumerate(m):
            dg = self._d[g]
            gd = self._gdeg[g]
            if dg:
                left = m[:idx] + (((g, e - 1),) if e > 1 else ())
                # g^e with e > 1 forces g even, so d(g^e) = e g^(e-1) dg
                coeff = ONE * e * (-1 if prefix_deg % 2 else 1)
                t = self._mul_terms({left: coeff}, dg)
                t = self._mul_terms(t, {m[idx + 1:]: ONE})
                for k, v in t.items():
                    nv = out.get(k, ZERO) + v
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
            prefix_deg += gd * e
        return out

    def _slice(self, k: int) -> list:
        gens = self.generators
        out = []

        def rec(i, rem, acc):
            if rem == 0:
                out.append(tuple(acc))
                return
            if i == len(gens):
                return
            g = gens[i]
            rec(i + 1, rem, acc)
            if g.degree % 2:
                if g.degree <= rem:
                    rec(i + 1, rem - g.degree, acc + [(g.id, 1)])
            else:
                e = 1
                while e * g.degree <= rem:
                    rec(i + 1, rem - e * g.degree, acc + [(g.id, e)])
                    e += 1

        rec(0, k, [])
        return sorted(out)

    def degree_slice(self, k: int) -> list:
        if k > self.truncation_degree:
            keys = self._slice(k)
            if keys:
                raise TruncationError(f"degree {k} exceeds truncation degree {self.truncation_degree}")
            return []
        return super().degree_slice(k)

    def d_matrix(self, k: int) -> SparseMatrix:
        mc = self._cache.setdefault("dmat", {})
        if k not in mc:
            src = self.degree_slice(k)
            tgt = self.slice_index(k + 1) if src else {}
            if not src:
                mc[k] = SparseMatrix(self._safe_dim(k + 1), 0)
            else:
                entries = []
                for c, key in enumerate(src):
                    for k2, v in self._d_key_cached(key).items():
                        entries.append((tgt[k2], c, v))
                mc[k] = SparseMatrix(len(tgt), len(src), entries)
        return mc[k]

    def _safe_dim(self, k: int) -> int:
        try:
            return len(self.degree_slice(k))
        except TruncationError:
            return 0

    def check_d_squared(self) -> DSquaredReport:
        bad = []
        for g in self.generators:
            if g.degree + 2 > self.truncation_degree and not self.is_exterior:
                continue
            dd = self.differential(self.d_generator(g.id))
            if dd:
                bad.append((g.name, dd))
        return DSquaredReport(not bad, bad)

    def is_minimal(self) -> bool:
        """Differential of every generator is decomposable and lands in the
        subalgebra generated by earlier generators (in id order)."""
        for g in self.generators:
            for m in self._d[g.id]:
                if sum(e for _, e in m) < 2:
                    return False
                if any(h >= g.id for h, _ in m):
                    return False
        return True

    def is_one_minimal(self) -> bool:
        return self.is_minimal() and all(g.degree == 1 for g in self.generators)

    def rebind(self, x) -> Element:
        """Reinterpret an element (or raw terms) of a compatible algebra here."""
        terms = _as_terms(x)
        for m in terms:
            for g, _ in m:
                if g >= len(self.generators):
                    raise ValueError("element uses generators unknown to this algebra")
        return Element(self, terms)

    def __repr__(self):
        return f"FreeCDGA({self.name or '?'}, generators={[g.name for g in self.generators]})"


class FDGA(GradedAlgebra):
    """Finite-dimensional DGA on an explicit graded basis.

    ``mult_table`` maps pairs of basis names (or global indices) to linear
    combinations (dicts name/index -> scalar). Products with the unit are
    implicit. A pair given in only one order is completed by graded
    commutativity.
    """

    def __init__(self, graded_basis: Mapping[int, Sequence[str]], mult_table: Mapping | None = None,
                 differential: Mapping[int, SparseMatrix] | None = None, name: str = "", unit=None):
        super().__init__()
        self.name = name
        names, degs = [], []
        self._offset: dict[int, int] = {}
        for k in sorted(graded_basis):
            self._offset[k] = len(names)
            for nm in graded_basis[k]:
                names.append(nm)
                degs.append(k)
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        self.names = tuple(names)
        self.degrees = tuple(degs)
        self.graded_basis = {k: tuple(graded_basis[k]) for k in sorted(graded_basis)}
        self._index = {nm: i for i, nm in enumerate(names)}
        self.truncation_degree = max(degs, default=0)
        if unit is None:
            zero_deg = self.graded_basis.get(0, ())
            unit = zero_deg[0] if zero_deg else None
        self.unit_key = self.index(unit) if unit is not None else None
        table: dict[tuple[int, int], dict] = {}
        for (a, b), val in (mult_table or {}).items():
            i, j = self.index(a), self.index(b)
            table[i, j] = {self.index(k): scalar(v) for k, v in _as_terms(val).items() if v}
        for (i, j), val in list(table.items()):
            if (j, i) not in table:
                s = -1 if (degs[i] * degs[j]) % 2 else 1
                table[j, i] = {k: s * v for k, v in val.items()}
        self._table = table
        self._dmats: dict[int, SparseMatrix] = {}
        for k, m in (differential or {}).items():
            want = (len(self.graded_basis.get(k + 1, ())), len(self.graded_basis.get(k, ())))
            if (m.rows, m.cols) != want:
                raise ValueError(f"differential in degree {k} has shape {(m.rows, m.cols)}, expected {want}")
            self._dmats[k] = m

    def index(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < len(self.names):
                raise KeyError(key)
            return key
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown basis element {key!r}") from None

    def __getitem__(self, key) -> Element:
        return self.basis_element(self.index(key))

    def key_degree(self, i: int) -> int:
        return self.degrees[i]

    def key_name(self, i: int) -> str:
        return self.names[i]

    def _sort_key(self, key):
        return key

    def _mul_keys(self, i: int, j: int) -> dict:
        if i == self.unit_key:
            return {j: ONE}
        if j == self.unit_key:
            return {i: ONE}
        return self._table.get((i, j), {})

    def _d_key(self, i: int) -> dict:
        k = self.degrees[i]
        m = self._dmats.get(k)
        if m is None:
            return {}
        col = i - self._offset[k]
        off = self._offset.get(k + 1, 0)
        return {off + r: v for r, v in enumerate(m.column(col)) if v}

    def _slice(self, k: int) -> list:
        off = self._offset.get(k)
        if off is None:
            return []
        return list(range(off, off + len(self.graded_basis[k])))

    def degree_slice(self, k: int) -> list:
        return self._slice(k)

    def d_matrix(self, k: int) -> SparseMatrix:
        m = self._dmats.get(k)
        if m is None:
            m = SparseMatrix(len(self.graded_basis.get(k + 1, ())), len(self.graded_basis.get(k, ())))
        return m

    @property
    def mult_table(self) -> dict:
        return {k: dict(v) for k, v in self._table.items()}

    def check_d_squared(self) -> DSquaredReport:
        bad = []
        for k in self.graded_basis:
            dd = self.d_matrix(k + 1) @ self.d_matrix(k)
            for c in range(dd.cols):
                col = dd.column(c)
                if any(col):
                    i = self._offset[k] + c
                    bad.append((self.names[i], self.from_vector(col, k + 2)))
        return DSquaredReport(not bad, bad)

    def check_axioms(self) -> list[tuple[str, bool, str]]:
        """Graded commutativity, associativity, unit, d² = 0 and Leibniz on
        the whole basis. Returns ``(name, passed, detail)`` records."""
        n = len(self.names)
        out = []
        bad = None
        for i in range(n):
            for j in range(n):
                s = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                ab = self._mul_keys(i, j)
                ba = self._mul_keys(j, i)
                if ab != {k: s * v for k, v in ba.items()}:
                    bad = (self.names[i], self.names[j])
                    break
            if bad:
                break
        out.append(("graded_commutative", bad is None, f"fails on {bad}" if bad else ""))
        bad = None
        for i in range(n):
            for j in range(n):
                ij = self._mul_keys(i, j)
                if not ij and all(not self._mul_keys(j, k) for k in range(n)):
                    continue
                for k in range(n):
                    left = self._mul_terms(ij, {k: ONE})
                    right = self._mul_terms({i: ONE}, self._mul_keys(j, k))
                    if left != right:
                        bad = (self.names[i], self.names[j], self.names[k])
                        break
                if bad:
                    break
            if bad:
                break
        out.append(("associative", bad is None, f"fails on {bad}" if bad else ""))
        out.append(("unital", self.unit_key is not None, "" if self.unit_key is not None else "no unit"))
        dsq = self.check_d_squared()
        out.append(("d_squared_zero", dsq.passed, ", ".join(nm for nm, _ in dsq.violations)))
        bad = None
        for i in range(n):
            for j in range(n):
                a, b = self.basis_element(i), self.basis_element(j)
                lhs = self.differential(a * b)
                sign = -1 if self.degrees[i] % 2 else 1
                rhs = a.d() * b + sign * (a * b.d())
                if lhs != rhs:
                    bad = (self.names[i], self.names[j])
                    break
            if bad:
                break
        out.append(("leibniz", bad is None, f"fails on {bad}" if bad else ""))
        return out

    def __repr__(self):
        return f"FDGA({self.name or '?'}, dims={ {k: len(v) for k, v in self.graded_basis.items()} })"


def degree_slice(dga: GradedAlgebra, k: int) -> list:
    return dga.degree_slice(k)


def multiply(a: Element, b: Element) -> Element:
    return a.algebra.multiply(a, b)


def differential(dga: GradedAlgebra, a: Element) -> Element:
    return dga.differential(a)


def check_d_squared(dga: GradedAlgebra) -> DSquaredReport:
    return dga.check_d_squared()


class DGAMorphism:
    """A morphism of DGAs.

    For a :class:`FreeCDGA` source give ``images`` (generator -> target
    element); for an :class:`FDGA` source give per-degree ``matrices``.
    """

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra,
                 images: Mapping | None = None, matrices: Mapping[int, SparseMatrix] | None = None):
        self.source = source
        self.target = target
        self._images: dict[int, Element] = {}
        self._matrices: dict[int, SparseMatrix] = dict(matrices or {})
        self._mono_cache: dict = {}
        if isinstance(source, FreeCDGA):
            for key, img in (images or {}).items():
                gid = source.gen_id(key)
                if not isinstance(img, Element):
                    img = target.element(img)
                if img.algebra is not target:
                    raise ValueError("generator image must live in the target algebra")
                g = source.generators[gid]
                if img and img.degree != g.degree:
                    raise ValueError(f"image of {g.name} has the wrong degree")
                self._images[gid] = img
        elif images:
            raise ValueError("images are only meaningful for a free source; pass matrices")

    @classmethod
    def identity(cls, alg: GradedAlgebra) -> "DGAMorphism":
        if isinstance(alg, FreeCDGA):
            return cls(alg, alg, images={g.id: alg.gen(g.id) for g in alg.generators})
        mats = {k: SparseMatrix.identity(len(v)) for k, v in alg.graded_basis.items()}
        return cls(alg, alg, matrices=mats)

    def image_of_generator(self, key) -> Element:
        gid = self.source.gen_id(key)
        return self._images.get(gid, self.target.zero())

    def _apply_key(self, key) -> Element:
        if key in self._mono_cache:
            return self._mono_cache[key]
        src = self.source
        if isinstance(src, FreeCDGA):
            out = self.target.one()
            for g, e in key:
                img = self._images.get(g, self.target.zero())
                for _ in range(e):
                    out = out * img
        else:
            k = src.key_degree(key)
            m = self._matrices.get(k)
            if m is None:
                out = self.target.zero()
            else:
                col = key - src._offset[k]
                out = self.target.from_vector(m.column(col), k)
        self._mono_cache[key] = out
        return out

    def apply(self, a: Element) -> Element:
        if a.algebra is not self.source:
            raise ValueError("element does not belong to the source algebra")
        out: dict = {}
        for key, c in a.terms.items():
            for k2, v in self._apply_key(key).terms.items():
                nv = out.get(k2, ZERO) + c * v
                if nv:
                    out[k2] = nv
                else:
                    out.pop(k2, None)
        return self.target.element(out)

    __call__ = apply

    def matrix(self, k: int) -> SparseMatrix:
        src = self.source.degree_slice(k)
        cols = [self.target.to_vector(self._apply_key(key), k) for key in src]
        return SparseMatrix.from_columns(cols, self.target.dim(k))

    def check(self) -> list[str]:
        """Names of basis elements/generators where d∘φ ≠ φ∘d (and, for a
        finite source, where φ fails to be multiplicative)."""
        bad = []
        src = self.source
        if isinstance(src, FreeCDGA):
            for g in src.generators:
                x = src.gen(g.id)
                if self.target.differential(self.apply(x)) != self.apply(src.differential(x)):
                    bad.append(g.name)
        else:
            for i in range(len(src.names)):
                x = src.basis_element(i)
                if self.target.differential(self.apply(x)) != self.apply(src.differential(x)):
                    bad.append(src.names[i])
            for i in range(len(src.names)):
                for j in range(len(src.names)):
                    x, y = src.basis_element(i), src.basis_element(j)
                    if self.apply(x * y) != self.apply(x) * self.apply(y):
                        bad.append(f"{src.names[i]}*{src.names[j]}")
        return bad


def apply_morphism(phi: DGAMorphism, a: Element) -> Element:
    return phi.apply(a)


def assert_chain_map(phi: DGAMorphism):
    bad = phi.check()
    if bad:
        raise InvariantViolation(f"morphism does not commute with d on {bad}")
