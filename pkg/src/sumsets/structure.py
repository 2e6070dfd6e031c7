"""Parallel-line decompositions of point sets.

A set is partitioned into fibers (its intersections with translates of a
line), the fibers are ranked by size, and the square-root cutoff keeps the
leading block: the largest r fibers with |fiber_r|^2 >= |fiber_1|.  The grid
profile intersects that structure with its image under a planar map lacking
real eigenvalues, producing two transversal line families.

Everything is exact: candidate directions are primitive integer vectors,
fiber membership is decided by integer cross products after clearing
denominators, and the cutoff compares squared integers (never roots).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple

from .core import (
    DimensionMismatch,
    LinearMap,
    PointSet,
    _nrm,
    apply_map,
    as_scalar,
    has_no_real_eigenvalue,
)

__all__ = [
    "DIRECTION_SCAN_LIMIT",
    "Direction",
    "Fiber",
    "LineDecomposition",
    "GridProfile",
    "DecompositionCheck",
    "fibers_along",
    "best_direction",
    "sqrt_cutoff_decompose",
    "grid_profile",
    "verify_decomposition",
    "decomposition_to_text",
    "grid_profile_to_text",
]

# above this cardinality best_direction switches to the sampled scan
DIRECTION_SCAN_LIMIT = 2000
_SAMPLE_SIZE = 2000
_SAMPLE_CANDIDATES = 512


@dataclass(frozen=True, order=False)
class Direction:
    """Primitive integer vector with canonical sign (first nonzero > 0)."""

    vector: tuple

    def __post_init__(self):
        v = self.vector
        if not v or any(type(c) is not int for c in v):
            raise ValueError("direction must be a tuple of ints")
        if all(c == 0 for c in v):
            raise ValueError("direction must be nonzero")
        g = 0
        for c in v:
            g = gcd(g, abs(c))
        if g != 1:
            raise ValueError("direction must be primitive")
        lead = next(c for c in v if c != 0)
        if lead < 0:
            raise ValueError("direction sign not canonical")

    @classmethod
    def of(cls, vec) -> "Direction":
        """Canonicalise any nonzero rational vector to a Direction."""
        v = [as_scalar(c) for c in vec]
        if all(c == 0 for c in v):
            raise ValueError("direction must be nonzero")
        mult = 1
        for c in v:
            if type(c) is not int:
                mult = mult * c.denominator // gcd(mult, c.denominator)
        iv = [int(c * mult) for c in v]
        g = 0
        for c in iv:
            g = gcd(g, abs(c))
        iv = [c // g for c in iv]
        lead = next(c for c in iv if c != 0)
        if lead < 0:
            iv = [-c for c in iv]
        return cls(tuple(iv))

    @property
    def dim(self) -> int:
        return len(self.vector)

    def sort_key(self) -> tuple:
        # colexicographic: orders the standard basis e1 < e2 < ...
        return tuple(reversed(self.vector))


class Fiber(NamedTuple):
    base: tuple  # canonical line id: orthogonal projection of the fiber
    members: PointSet


@dataclass(frozen=True)
class LineDecomposition:
    direction: Direction
    fibers: tuple  # Fiber entries, sorted by size desc then base lex
    leftover: PointSet
    r_selected: int


@dataclass(frozen=True)
class GridProfile:
    dir1: Direction
    r1: int
    dir2: Direction
    r2: int
    covered: PointSet  # the structured part, on r1 lines along dir1
    leftover: PointSet  # everything the cutoff dropped


@dataclass(frozen=True)
class DecompositionCheck:
    ok: bool
    problems: tuple

    def __bool__(self) -> bool:
        return self.ok


def _int_scale(a: PointSet):
    """Clear denominators uniformly; returns (scale, int point list)."""
    mult = 1
    for p in a.points:
        for c in p:
            if type(c) is not int:
                mult = mult * c.denominator // gcd(mult, c.denominator)
    if mult == 1:
        return 1, list(a.points)
    return mult, [tuple(int(c * mult) for c in p) for p in a.points]


def _line_key(dvec, p):
    # identifies the line through integer point p along integer direction dvec
    piv = next(i for i, c in enumerate(dvec) if c != 0)
    return tuple(
        p[i] * dvec[piv] - p[piv] * dvec[i]
        for i in range(len(dvec))
        if i != piv
    )


def _projection_base(member, dvec):
    # orthogonal projection of a fiber member onto the direction's complement;
    # constant across the fiber, hence a canonical line id
    num = sum(Fraction(m) * d for m, d in zip(member, dvec))
    den = sum(d * d for d in dvec)
    t = num / den
    return tuple(_nrm(m - t * d) for m, d in zip(member, dvec))


def _partition(a: PointSet, direction: Direction):
    dvec = direction.vector
    _, ipts = _int_scale(a)
    groups = {}
    for ip, p in zip(ipts, a.points):
        groups.setdefault(_line_key(dvec, ip), []).append(p)
    fibers = []
    for members in groups.values():
        base = _projection_base(members[0], dvec)
        fibers.append(Fiber(base, PointSet._trusted(a.dim, members)))
    fibers.sort(key=lambda f: (-len(f.members), f.base))
    return fibers


def _as_direction(direction) -> Direction:
    if isinstance(direction, Direction):
        return direction
    return Direction.of(direction)


def fibers_along(a: PointSet, direction) -> LineDecomposition:
    """Partition A by translates of the line along `direction`.

    All fibers are kept (r_selected = fiber count, empty leftover).
    """
    if len(a) == 0:
        raise ValueError("cannot decompose an empty set")
    d = _as_direction(direction)
    if d.dim != a.dim:
        raise DimensionMismatch("direction has wrong length")
    fibers = _partition(a, d)
    return LineDecomposition(
        direction=d,
        fibers=tuple(fibers),
        leftover=PointSet._trusted(a.dim, ()),
        r_selected=len(fibers),
    )


def _pair_stats(ipts, idx_pairs):
    """Per primitive direction: pair counts grouped by line."""
    stats = {}
    d = len(ipts[0])
    for i, j in idx_pairs:
        p, q = ipts[i], ipts[j]
        diff = [q[t] - p[t] for t in range(d)]
        g = 0
        for c in diff:
            g = gcd(g, abs(c))
        prim = tuple(c // g for c in diff)
        lead = next(c for c in prim if c != 0)
        if lead < 0:
            prim = tuple(-c for c in prim)
        lines = stats.setdefault(prim, {})
        key = _line_key(prim, p)
        lines[key] = lines.get(key, 0) + 1
    return stats


def _direction_score(n, per_line_pairs):
    # a line carrying m points contributes m(m-1)/2 pairs; invert exactly
    largest = 0
    covered_minus_lines = 0
    for c in per_line_pairs.values():
        m = (1 + isqrt(1 + 8 * c)) // 2
        largest = max(largest, m)
        covered_minus_lines += m - 1
    total_fibers = n - covered_minus_lines
    return largest, total_fibers


def best_direction(a: PointSet) -> Direction:
    """Direction maximising the largest fiber.

    Ties break on fewer total fibers, then on colexicographically least
    direction.  Exhaustive over all pairwise differences up to
    DIRECTION_SCAN_LIMIT points; beyond that, candidates come from an
    evenly spaced sample of the canonical order and only the strongest
    candidates are evaluated against the full set.
    """
    n = len(a)
    if n < 2:
        raise ValueError("best_direction needs at least two points")
    _, ipts = _int_scale(a)
    if n <= DIRECTION_SCAN_LIMIT:
        pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
        stats = _pair_stats(ipts, pairs)
        candidates = stats.items()
    else:
        step = n / _SAMPLE_SIZE
        sample = sorted({int(k * step) for k in range(_SAMPLE_SIZE)})
        pairs = (
            (sample[i], sample[j])
            for i in range(len(sample))
            for j in range(i + 1, len(sample))
        )
        sampled = _pair_stats(ipts, pairs)
        ranked = sorted(
            sampled.items(),
            key=lambda kv: (-sum(kv[1].values()), tuple(reversed(kv[0]))),
        )[:_SAMPLE_CANDIDATES]
        # re-evaluate the shortlisted directions over the full set
        candidates = []
        for prim, _ in ranked:
            lines = {}
            for ip in ipts:
                key = _line_key(prim, ip)
                lines[key] = lines.get(key, 0) + 1
            per_line_pairs = {
                k: m * (m - 1) // 2 for k, m in lines.items() if m >= 2
            }
            candidates.append((prim, per_line_pairs))
    best = None
    for prim, per_line in candidates:
        largest, fibers = _direction_score(n, per_line)
        key = (-largest, fibers, tuple(reversed(prim)))
        if best is None or key < best[0]:
            best = (key, prim)
    return Direction(best[1])


def sqrt_cutoff_decompose(a: PointSet) -> LineDecomposition:
    """Best-direction fibers with the square-root cutoff applied.

    Keeps the maximal leading block with |fiber_r|^2 >= |fiber_1| (integer
    comparison); every dropped fiber's points go to the leftover.
    """
    if len(a) < 2:
        raise ValueError("sqrt_cutoff_decompose needs at least two points")
    d = best_direction(a)
    fibers = _partition(a, d)
    top = len(fibers[0].members)
    r = 0
    for f in fibers:
        if len(f.members) ** 2 >= top:
            r += 1
        else:
            break
    left = set()
    for f in fibers[r:]:
        left.update(f.members.points)
    return LineDecomposition(
        direction=d,
        fibers=tuple(fibers),
        leftover=PointSet._trusted(a.dim, left),
        r_selected=r,
    )


def grid_profile(a: PointSet, m: LinearMap) -> GridProfile:
    """Two-direction profile of the structured part of A under the map."""
    if a.dim != 2 or m.dim != 2:
        raise DimensionMismatch("grid_profile is a planar operation")
    if not has_no_real_eigenvalue(m):
        raise ValueError("map must have no real eigenvalue")
    if len(a) < 2:
        raise ValueError("grid_profile needs at least two points")
    dec = sqrt_cutoff_decompose(a)
    covered = set()
    for f in dec.fibers[: dec.r_selected]:
        covered.update(f.members.points)
    s = PointSet._trusted(2, covered)
    image = apply_map(m, s)
    r2 = len(fibers_along(image, dec.direction).fibers)
    dir2 = Direction.of(m.inverse().apply(dec.direction.vector))
    if dir2 == dec.direction:
        raise ValueError("map fixes the fiber direction; hypothesis violated")
    return GridProfile(
        dir1=dec.direction,
        r1=dec.r_selected,
        dir2=dir2,
        r2=r2,
        covered=s,
        leftover=dec.leftover,
    )


def verify_decomposition(a: PointSet, dec: LineDecomposition) -> DecompositionCheck:
    """Check every LineDecomposition invariant against A; never raises."""
    problems = []
    dvec = dec.direction.vector
    if len(dvec) != a.dim:
        return DecompositionCheck(False, ("direction has wrong dimension",))

    sizes = [len(f.members) for f in dec.fibers]
    if any(s == 0 for s in sizes):
        problems.append("empty fiber")
    if any(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1)):
        problems.append("fiber order violated")

    seen = set()
    for idx, f in enumerate(dec.fibers):
        pts = f.members.points
        if f.members.dim != a.dim:
            problems.append(f"fiber {idx} has wrong dimension")
            continue
        if seen & set(pts):
            problems.append("fibers overlap")
        seen.update(pts)
        _, ipts = _int_scale(f.members)
        keys = {_line_key(dvec, ip) for ip in ipts}
        if len(keys) > 1:
            problems.append(f"fiber {idx} not collinear")
            continue
        if pts and f.base != _projection_base(pts[0], dvec):
            problems.append(f"fiber {idx} base point mismatch")

    union = seen | set(dec.leftover.points)
    missing = set(a.points) - union
    extra = union - set(a.points)
    if missing:
        problems.append(f"cover incomplete: {len(missing)} point(s) missing")
    if extra:
        problems.append(f"cover excess: {len(extra)} point(s) not in the set")

    r = dec.r_selected
    if not 0 <= r <= len(sizes):
        problems.append("r_selected out of range")
    elif sizes:
        # a full cover (nothing dropped) carries no cutoff claim
        if r < len(sizes):
            top = sizes[0]
            if any(sizes[i] ** 2 < top for i in range(r)):
                problems.append("cutoff violated: kept fiber below the threshold")
            if any(sizes[i] ** 2 >= top for i in range(r, len(sizes))):
                problems.append("cutoff violated: dropped fiber above the threshold")
        dropped = set()
        for f in dec.fibers[r:]:
            dropped.update(f.members.points)
        if not dropped <= set(dec.leftover.points):
            problems.append("leftover mismatch: dropped fiber not in leftover")
        kept = set()
        for f in dec.fibers[:r]:
            kept.update(f.members.points)
        if kept & set(dec.leftover.points):
            problems.append("leftover mismatch: kept point in leftover")

    return DecompositionCheck(not problems, tuple(problems))


def _fmt_point(p) -> str:
    return " ".join(str(c) for c in p)


def decomposition_to_text(dec: LineDecomposition) -> str:
    """Stable text form: direction, cutoff, fibers, leftover block."""
    lines = [
        "direction " + _fmt_point(dec.direction.vector),
        f"r_selected {dec.r_selected}",
        f"fibers {len(dec.fibers)}",
    ]
    for f in dec.fibers:
        members = "; ".join(_fmt_point(p) for p in f.members.points)
        lines.append(f"fiber {_fmt_point(f.base)} | {len(f.members)} | {members}")
    lines.append(f"leftover {len(dec.leftover)}")
    for p in dec.leftover.points:
        lines.append(_fmt_point(p))
    return "\n".join(lines) + "\n"


def grid_profile_to_text(gp: GridProfile) -> str:
    """Stable text form: both directions, line counts, S and B blocks."""
    lines = [
        "dir1 " + _fmt_point(gp.dir1.vector),
        f"r1 {gp.r1}",
        "dir2 " + _fmt_point(gp.dir2.vector),
        f"r2 {gp.r2}",
        f"S {len(gp.covered)}",
    ]
    for p in gp.covered.points:
        lines.append(_fmt_point(p))
    lines.append(f"B {len(gp.leftover)}")
    for p in gp.leftover.points:
        lines.append(_fmt_point(p))
    return "\n".join(lines) + "\n"
