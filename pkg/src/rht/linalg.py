"""Exact linear algebra over the rationals and the Gaussian rationals.

Vectors are plain tuples of scalars. Scalars are ``fractions.Fraction`` for
rational values and :class:`Gaussian` for values with a nonzero imaginary
part; :func:`gauss` always returns the narrowest representation, so a
Gaussian with zero imaginary part never leaks out of arithmetic.

Every "pick a basis" step goes through the same row reduction with
smallest-column pivots, so results are canonical.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class Gaussian:
    """A Gaussian rational ``re + im*i`` with ``im != 0``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def conjugate(self):
        return gauss(self.re, -self.im)

    def _parts(self):
        return self.re, self.im

    def __add__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return gauss(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return gauss(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return gauss(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        c, d = o
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero")
        a, b = self.re, self.im
        return gauss((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        a, b = o
        c, d = self.re, self.im
        n = c * c + d * d
        return gauss((a * c + b * d) / n, (b * c - a * d) / n)

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return True  # im != 0 by construction

    def __eq__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


def _parts(x):
    if isinstance(x, Gaussian):
        return x.re, x.im
    if isinstance(x, (int, Rational)):
        return Fraction(x), ZERO
    return None


def gauss(re, im=0):
    """Return ``re + im*i`` as a Fraction when ``im == 0``, else a Gaussian."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return Gaussian(re, im)


I = Gaussian(0, 1)


def scalar(x):
    """Coerce ints, Fractions, Gaussians and Python complex numbers with
    integral parts into the scalar representation used everywhere."""
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, complex):
        return gauss(Fraction(x.real), Fraction(x.imag))
    return Fraction(x)


def conj(x):
    return x.conjugate() if isinstance(x, Gaussian) else x


def is_real(x) -> bool:
    return not isinstance(x, Gaussian)


def format_scalar(x) -> str:
    if isinstance(x, Gaussian):
        re, im = x.re, x.im
        ims = "i" if im == 1 else "-i" if im == -1 else f"{im}i"
        if re == 0:
            return ims
        return f"{re}+{ims}" if im > 0 else f"{re}{ims}"
    return str(Fraction(x))


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`."""
    text = text.strip()
    if not text.endswith("i"):
        return Fraction(text)
    body = text[:-1]
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut <= 0 or body[cut - 1] in "/":
        re, im = "0", body
    else:
        re, im = body[:cut], body[cut:]
    if im in ("", "+"):
        im = "1"
    elif im == "-":
        im = "-1"
    return gauss(Fraction(re), Fraction(im))


# ---------------------------------------------------------------------------
# vectors


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> tuple:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def vec_conj(v: Sequence) -> tuple:
    return tuple(conj(x) for x in v)


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vec_is_zero(v: Sequence) -> bool:
    return not any(v)


def lin_comb(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> tuple:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return tuple(out)


def _to_sparse(v: Sequence) -> dict:
    return {i: scalar(a) for i, a in enumerate(v) if a}


def _to_dense(row: dict, n: int) -> tuple:
    out = [ZERO] * n
    for i, a in row.items():
        out[i] = a
    return tuple(out)


# ---------------------------------------------------------------------------
# row reduction engine


class _Echelon:
    """Incrementally maintained reduced row echelon form.

    ``rows`` maps pivot column -> sparse row (dict) with a 1 at the pivot and
    zeros in every other pivot column.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in sorted(k for k in v if k in self.rows):
            c = v.get(p)
            if not c:
                continue
            for j, a in self.rows[p].items():
                nv = v.get(j, ZERO) - c * a
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
        return v

    def insert(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = ONE / v[p]
        v = {j: a * inv for j, a in v.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for j, a in v.items():
                    nv = row.get(j, ZERO) - c * a
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        self.rows[p] = v
        return True

    def sorted_rows(self) -> list[tuple[int, dict]]:
        return sorted(self.rows.items())


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Immutable sparse matrix; ``entries`` is canonical (row-major, no zeros)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        self.rows = rows
        self.cols = cols
        data: dict[int, dict] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = scalar(v)
            if not v:
                continue
            row = data.setdefault(r, {})
            if c in row:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            row[c] = v
        self._data = data

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], cols: int | None = None) -> "SparseMatrix":
        nrows = len(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(nrows, cols, ((r, c, v) for r, row in enumerate(rows) for c, v in enumerate(row) if v))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "SparseMatrix":
        return cls(rows, len(columns), ((r, c, v) for c, col in enumerate(columns) for r, v in enumerate(col) if v))

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> tuple:
        return tuple((r, c, self._data[r][c]) for r in sorted(self._data) for c in sorted(self._data[r]))

    def row(self, r: int) -> dict:
        return dict(self._data.get(r, {}))

    def sparse_rows(self) -> list[dict]:
        return [dict(self._data.get(r, {})) for r in range(self.rows)]

    def to_dense(self) -> list[list]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def column(self, c: int) -> tuple:
        return tuple(self._data.get(r, {}).get(c, ZERO) for r in range(self.rows))

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, ((c, r, v) for r, c, v in self.entries))

    def conjugate(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, ((r, c, conj(v)) for r, c, v in self.entries))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        out = [ZERO] * self.rows
        for r, row in self._data.items():
            s = ZERO
            for c, a in row.items():
                x = v[c]
                if x:
                    s += a * x
            out[r] = s
        return tuple(out)

    __call__ = apply

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        acc: dict[tuple, object] = {}
        for r, row in self._data.items():
            for k, a in row.items():
                for c, b in other._data.get(k, {}).items():
                    acc[r, c] = acc.get((r, c), ZERO) + a * b
        return SparseMatrix(self.rows, other.cols, ((r, c, v) for (r, c), v in acc.items()))

    def is_zero(self) -> bool:
        return not self._data

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"SparseMatrix({self.rows}, {self.cols}, {list(self.entries)!r})"


def _echelon_of_rows(rows: Iterable[dict]) -> _Echelon:
    e = _Echelon()
    for row in rows:
        if row:
            e.insert(row)
    return e


def rank(m: SparseMatrix) -> int:
    return len(_echelon_of_rows(m.sparse_rows()).rows)


def rref(m: SparseMatrix) -> tuple[SparseMatrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    rows = _echelon_of_rows(m.sparse_rows()).sorted_rows()
    pivots = tuple(p for p, _ in rows)
    return SparseMatrix(len(rows), m.cols, ((i, c, v) for i, (_, row) in enumerate(rows) for c, v in row.items())), pivots


def kernel_basis(m: SparseMatrix) -> "Subspace":
    e = _echelon_of_rows(m.sparse_rows())
    free = [c for c in range(m.cols) if c not in e.rows]
    vectors = []
    for f in free:
        v = {f: ONE}
        for p, row in e.rows.items():
            a = row.get(f)
            if a:
                v[p] = -a
        vectors.append(v)
    return Subspace._from_sparse(m.cols, vectors)


def solve(m: SparseMatrix, b: Sequence):
    """Some ``x`` with ``m x = b``, or None. Free variables are set to zero."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {m.rows} rows")
    n = m.cols
    rows = m.sparse_rows()
    for r, val in enumerate(b):
        val = scalar(val)
        if val:
            rows[r][n] = val
    e = _echelon_of_rows(rows)
    if n in e.rows:
        return None
    x = [ZERO] * n
    for p, row in e.rows.items():
        x[p] = row.get(n, ZERO)
    return tuple(x)


def image(m: SparseMatrix) -> "Subspace":
    return Subspace.span(m.rows, (m.column(c) for c in range(m.cols)))


def preimage(m: SparseMatrix, sub: "Subspace") -> "Subspace":
    """``{x : m x in sub}``."""
    ann = sub.annihilator_matrix()
    return kernel_basis(ann @ m)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``ambient_dim``-space, stored as its RREF basis."""

    __slots__ = ("ambient_dim", "_rows", "_basis")

    def __init__(self, ambient_dim: int, basis: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        e = _Echelon()
        for v in basis:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in a {ambient_dim}-dimensional space")
            e.insert(_to_sparse(v))
        self._rows = tuple(e.sorted_rows())
        self._basis = None

    @classmethod
    def _from_sparse(cls, ambient_dim: int, rows: Iterable[dict]) -> "Subspace":
        s = cls.__new__(cls)
        s.ambient_dim = ambient_dim
        s._rows = tuple(_echelon_of_rows(rows).sorted_rows())
        s._basis = None
        return s

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        return cls(ambient_dim, vectors)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls._from_sparse(n, ({i: ONE} for i in range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls._from_sparse(n, ({i: ONE} for i in indices))

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self):
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._rows)

    @property
    def basis(self) -> tuple[tuple, ...]:
        if self._basis is None:
            self._basis = tuple(_to_dense(row, self.ambient_dim) for _, row in self._rows)
        return self._basis

    def sparse_basis(self) -> list[dict]:
        return [dict(row) for _, row in self._rows]

    def _echelon(self) -> _Echelon:
        e = _Echelon()
        e.rows = {p: dict(row) for p, row in self._rows}
        return e

    def residual(self, v: Sequence) -> tuple:
        e = self._echelon()
        return _to_dense(e.reduce(_to_sparse(v)), self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        return not self._echelon().reduce(_to_sparse(v))

    __contains__ = contains

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the RREF basis; ``v`` must lie in the subspace."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(scalar(v[p]) for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        e = other._echelon()
        return all(not e.reduce(row) for _, row in self._rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace._from_sparse(self.ambient_dim, [r for _, r in self._rows] + [r for _, r in other._rows])

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self._rows or not other._rows:
            return Subspace.zero(self.ambient_dim)
        ann = other.annihilator_matrix()
        # coefficient vectors c with ann (sum c_i b_i) = 0
        cols = [ann.apply(b) for b in self.basis]
        k = kernel_basis(SparseMatrix.from_columns(cols, ann.rows))
        return Subspace.span(self.ambient_dim, (lin_comb(c, self.basis, self.ambient_dim) for c in k.basis))

    __and__ = intersect

    def annihilator_matrix(self) -> SparseMatrix:
        """Matrix whose kernel is exactly this subspace (bilinear pairing)."""
        n = self.ambient_dim
        rows = SparseMatrix(self.dim, n, ((i, c, v) for i, (_, row) in enumerate(self._rows) for c, v in row.items()))
        comp = kernel_basis(rows)
        return SparseMatrix(comp.dim, n, ((i, c, v) for i, row in enumerate(comp.sparse_basis()) for c, v in row.items()))

    def conjugate(self) -> "Subspace":
        return Subspace._from_sparse(self.ambient_dim, ({c: conj(v) for c, v in row.items()} for _, row in self._rows))

    def image_under(self, m: SparseMatrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise ValueError("shape mismatch")
        return Subspace.span(m.rows, (m.apply(b) for b in self.basis))

    def is_real(self) -> bool:
        return all(is_real(v) for _, row in self._rows for v in row.values())

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient_dim, tuple((p, tuple(sorted(r.items()))) for p, r in self._rows)))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def direct_sum_check(parts: Iterable[Subspace], ambient_dim: int) -> tuple[bool, bool]:
    """(independent, spanning) for a family of subspaces."""
    parts = list(parts)
    total = sum(p.dim for p in parts)
    joined = Subspace._from_sparse(ambient_dim, [r for p in parts for r in p.sparse_basis()])
    return joined.dim == total, joined.dim == ambient_dim


def quotient(ambient_dim: int, sub: Subspace) -> tuple[list[tuple], Callable[[Sequence], tuple]]:
    """Representatives of ``ambient / sub`` and the projection onto their coordinates.

    Representatives are the standard basis vectors at the non-pivot columns of
    ``sub``; the projection reduces by ``sub`` and reads those columns.
    """
    if sub.ambient_dim != ambient_dim:
        raise ValueError("subspace lives in a different ambient space")
    pivots = set(sub.pivots)
    free = [c for c in range(ambient_dim) if c not in pivots]
    reps = [unit_vector(ambient_dim, c) for c in free]
    e = sub._echelon()

    def project(v: Sequence) -> tuple:
        if len(v) != ambient_dim:
            raise ValueError("vector has the wrong length")
        r = e.reduce(_to_sparse(v))
        return tuple(r.get(c, ZERO) for c in free)

    return reps, project


class RelativeQuotient:
    """``big / small`` for subspaces ``small <= big`` of a common ambient space.

    ``representatives`` are vectors of ``big``; ``project`` sends a vector of
    ``big`` to coordinates against them.
    """

    def __init__(self, big: Subspace, small: Subspace):
        if not small.is_subspace_of(big):
            raise ValueError("small is not contained in big")
        self.big = big
        self.small = small
        n = big.ambient_dim
        small_coords = Subspace.span(big.dim, (big.coordinates(b) for b in small.basis))
        reps, proj = quotient(big.dim, small_coords)
        self._proj = proj
        self.representatives = [lin_comb(r, big.basis, n) for r in reps]

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def project(self, v: Sequence) -> tuple:
        return self._proj(self.big.coordinates(v))

    def lift(self, coords: Sequence) -> tuple:
        return lin_comb(coords, self.representatives, self.big.ambient_dim)
