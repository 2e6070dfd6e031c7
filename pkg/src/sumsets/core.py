"""Exact finite point sets in Q^d and the primitive operations on them.

Coordinates are exact rationals.  A coordinate whose value is integral is
stored as a plain ``int``; anything else is a ``fractions.Fraction`` in
lowest terms.  The two representations interoperate transparently (equal
values compare and hash equally), so membership, ordering and serialisation
never depend on which one a value happens to use.  Floats are rejected
outright: one rounding error corrupts a cardinality, and exact cardinalities
are the whole point of this library.

All values are immutable once constructed and every operation is a pure
function, so everything here may be shared freely between threads.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

__all__ = [
    "Scalar",
    "DimensionMismatch",
    "EmptyOperand",
    "DegenerateDilation",
    "as_scalar",
    "point",
    "PointSet",
    "LinearMap",
    "sumset",
    "dilate",
    "dilate_sum",
    "apply_map",
    "transform_sum",
    "difference_set",
    "affine_dim",
    "has_no_real_eigenvalue",
]

Scalar = Union[int, Fraction]


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


class EmptyOperand(ValueError):
    """The operation requires a non-empty point set."""


class DegenerateDilation(UserWarning):
    """dilate() was called with q = 0, collapsing the set to a single point."""


def _nrm(value):
    # canonical scalar: integral Fractions become plain ints
    if type(value) is int:
        return value
    if value.denominator == 1:
        return value.numerator
    return value


def as_scalar(value) -> Scalar:
    """Coerce an int, Fraction or 'num/den' string to a canonical exact scalar."""
    if type(value) is int:
        return value
    if isinstance(value, Fraction):
        return _nrm(value)
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return int(value)
    if isinstance(value, str):
        return _nrm(Fraction(value))
    if isinstance(value, float):
        raise TypeError(
            f"floats are not exact; write the rational explicitly: {value!r}"
        )
    raise TypeError(f"exact scalar expected, got {type(value).__name__}: {value!r}")


def point(*coords) -> tuple:
    """Build a point (a tuple of canonical exact scalars)."""
    return tuple(as_scalar(c) for c in coords)


class PointSet:
    """Deduplicated finite subset of Q^d.

    Iteration follows the canonical (lexicographic) point order, so every
    derived result is deterministic across runs and thread counts.
    Instances are immutable.
    """

    __slots__ = ("dim", "points", "_members")

    def __init__(self, dim: int, points: Iterable[Sequence] = ()):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim!r}")
        seen = set()
        for p in points:
            t = tuple(as_scalar(c) for c in p)
            if len(t) != dim:
                raise DimensionMismatch(
                    f"point {t!r} has {len(t)} coordinates, expected {dim}"
                )
            seen.add(t)
        self.dim = dim
        self.points = tuple(sorted(seen))
        self._members = frozenset(seen)

    @classmethod
    def _trusted(cls, dim: int, pts) -> "PointSet":
        # internal: pts must already be canonical tuples of the right length
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.points = tuple(sorted(pts))
        obj._members = frozenset(obj.points)
        return obj

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(as_scalar(c) for c in p) in self._members

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.dim == other.dim
            and self._members == other._members
        )

    def __hash__(self) -> int:
        return hash((self.dim, self._members))

    def __repr__(self) -> str:
        head = ", ".join(repr(p) for p in self.points[:4])
        tail = ", ..." if len(self.points) > 4 else ""
        return f"PointSet(dim={self.dim}, {{{head}{tail}}} size={len(self)})"

    # operator sugar; the module-level functions are the contract surface
    def __add__(self, other):
        return sumset(self, other)

    def __sub__(self, other):
        return difference_set(self, other)

    def __rmul__(self, q):
        return dilate(q, self)

    def translate(self, vec) -> "PointSet":
        """Translate every point by the given vector."""
        v = point(*vec)
        if len(v) != self.dim:
            raise DimensionMismatch("translation vector has wrong length")
        return PointSet._trusted(
            self.dim,
            {tuple(_nrm(c + w) for c, w in zip(p, v)) for p in self.points},
        )

    def is_integral(self) -> bool:
        """True iff every coordinate is an integer."""
        return all(type(c) is int for p in self.points for c in p)


def _check_nonempty(a: PointSet, op: str):
    if len(a) == 0:
        raise EmptyOperand(f"{op} requires a non-empty set")


def _check_same_dim(a: PointSet, b: PointSet):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def sumset(a: PointSet, b: PointSet) -> PointSet:
    """A + B: all pairwise sums, deduplicated."""
    _check_same_dim(a, b)
    _check_nonempty(a, "sumset")
    _check_nonempty(b, "sumset")
    pts = {
        tuple(_nrm(x + y) for x, y in zip(p, q))
        for p in a.points
        for q in b.points
    }
    return PointSet._trusted(a.dim, pts)


def difference_set(a: PointSet, b: PointSet) -> PointSet:
    """A - B: all pairwise differences, deduplicated."""
    _check_same_dim(a, b)
    _check_nonempty(a, "difference_set")
    _check_nonempty(b, "difference_set")
    pts = {
        tuple(_nrm(x - y) for x, y in zip(p, q))
        for p in a.points
        for q in b.points
    }
    return PointSet._trusted(a.dim, pts)


def dilate(q: int, a: PointSet) -> PointSet:
    """q . A: coordinatewise scaling by the integer q.

    q = 0 is permitted but collapses the set to the origin; a
    DegenerateDilation warning flags it.
    """
    if not isinstance(q, int):
        raise TypeError("dilation factor must be an integer")
    _check_nonempty(a, "dilate")
    if q == 0:
        warnings.warn(
            "dilation by 0 collapses the set to a single point",
            DegenerateDilation,
            stacklevel=2,
        )
    if q == 1:
        return a
    return PointSet._trusted(
        a.dim, {tuple(_nrm(q * c) for c in p) for p in a.points}
    )


def dilate_sum(q: int, s: int, a: PointSet) -> PointSet:
    """q . A + s . A."""
    return sumset(dilate(q, a), dilate(s, a))


class LinearMap:
    """Exact d x d rational matrix acting on points."""

    __slots__ = ("dim", "rows", "_det")

    def __init__(self, rows: Iterable[Sequence]):
        mat = tuple(tuple(as_scalar(c) for c in row) for row in rows)
        d = len(mat)
        if d < 1 or any(len(r) != d for r in mat):
            raise ValueError("matrix must be square and non-empty")
        self.dim = d
        self.rows = mat
        self._det = None

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def scalar(cls, dim: int, value) -> "LinearMap":
        v = as_scalar(value)
        return cls([[v if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def rotation90(cls) -> "LinearMap":
        """Exact counterclockwise quarter turn in the plane."""
        return cls([[0, -1], [1, 0]])

    @classmethod
    def from_string(cls, text: str) -> "LinearMap":
        """Parse row-major 'a/b,c/d;e/f,g/h' syntax."""
        rows = [
            [tok.strip() for tok in row.split(",")]
            for row in text.strip().split(";")
        ]
        return cls(rows)

    def to_string(self) -> str:
        return ";".join(",".join(str(c) for c in row) for row in self.rows)

    def apply(self, p: Sequence) -> tuple:
        """Matrix-vector product, exact."""
        v = tuple(as_scalar(c) for c in p)
        if len(v) != self.dim:
            raise DimensionMismatch("point has wrong length for this map")
        return tuple(
            _nrm(sum(r[j] * v[j] for j in range(self.dim))) for r in self.rows
        )

    def det(self) -> Scalar:
        """Exact determinant."""
        if self._det is None:
            self._det = _nrm(_det_fractions([list(r) for r in self.rows]))
        return self._det

    def is_invertible(self) -> bool:
        return self.det() != 0

    def trace(self) -> Scalar:
        return _nrm(sum(self.rows[i][i] for i in range(self.dim)))

    def inverse(self) -> "LinearMap":
        """Exact inverse; raises ValueError when singular."""
        if not self.is_invertible():
            raise ValueError("map is singular")
        d = self.dim
        aug = [
            [Fraction(self.rows[i][j]) for j in range(d)]
            + [Fraction(1 if i == j else 0) for j in range(d)]
            for i in range(d)
        ]
        for col in range(d):
            piv = next(i for i in range(col, d) if aug[i][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for i in range(d):
                if i != col and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
        return LinearMap([row[d:] for row in aug])

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"LinearMap({self.to_string()!r})"


def _det_fractions(rows) -> Fraction:
    d = len(rows)
    m = [[Fraction(c) for c in row] for row in rows]
    det = Fraction(1)
    for col in range(d):
        piv = next((i for i in range(col, d) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, d):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return det


def apply_map(m: LinearMap, a: PointSet) -> PointSet:
    """L(A): exact image of every point."""
    if m.dim != a.dim:
        raise DimensionMismatch(f"map dim {m.dim} vs set dim {a.dim}")
    return PointSet._trusted(a.dim, {m.apply(p) for p in a.points})


def transform_sum(a: PointSet, m: LinearMap) -> PointSet:
    """A + L(A) for an invertible map L."""
    if not m.is_invertible():
        raise ValueError("transform_sum requires an invertible map")
    _check_nonempty(a, "transform_sum")
    return sumset(a, apply_map(m, a))


def _int_rows(vectors) -> list:
    # clear denominators rowwise; rank is invariant under row scaling
    out = []
    for vec in vectors:
        mult = 1
        for c in vec:
            if type(c) is not int:
                mult = mult * c.denominator // gcd(mult, c.denominator)
        out.append([int(c * mult) for c in vec])
    return out


def _int_rank(rows: list) -> int:
    """Rank of integer row vectors by fraction-free elimination."""
    work = [r[:] for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pr = work[rank]
        pc = pr[col]
        for i in range(rank + 1, len(work)):
            ri = work[i]
            if ri[col]:
                g = gcd(abs(ri[col]), abs(pc))
                m1, m2 = pc // g, ri[col] // g
                new = [m1 * x - m2 * y for x, y in zip(ri, pr)]
                shrink = 0
                for v in new:
                    shrink = gcd(shrink, abs(v))
                    if shrink == 1:
                        break
                work[i] = [v // shrink for v in new] if shrink > 1 else new
        rank += 1
        if rank == len(work):
            break
    return rank


def affine_dim(a: PointSet) -> int:
    """Dimension of the affine subspace spanned by A (exact rank)."""
    _check_nonempty(a, "affine_dim")
    if len(a) == 1:
        return 0
    base = a.points[0]
    diffs = [
        [x - y for x, y in zip(p, base)] for p in a.points[1:]
    ]
    return _int_rank(_int_rows(diffs))


def has_no_real_eigenvalue(m: LinearMap) -> bool:
    """True iff the 2x2 map has no real eigenvalue: trace^2 - 4 det < 0, exact."""
    if m.dim != 2:
        raise DimensionMismatch(
            "the no-real-eigenvalue predicate is defined for 2x2 maps only"
        )
    tr = Fraction(m.trace())
    return tr * tr - 4 * Fraction(m.det()) < 0
