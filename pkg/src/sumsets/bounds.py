"""Inequality checkers with exact slack certificates.

Every checker measures one bound on concrete inputs and returns a
BoundReport: the exact left-hand cardinality, the bound's main term, and
their difference.  Nothing is ever asserted about a theorem; unconditional
inequalities that fail raise InequalityViolation (a build-breaking event),
while negative slack on an asymptotic main term is an ordinary result.

Hypothesis checking is strict: a checker refuses inputs violating its
bound's preconditions (coprimality, dimension, eigenvalue predicate,
collinearity) instead of silently proceeding.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Optional

from . import io as pio
from .core import (
    LinearMap,
    PointSet,
    Scalar,
    _nrm,
    affine_dim,
    apply_map,
    as_scalar,
    difference_set,
    dilate_sum,
    has_no_real_eigenvalue,
    sumset,
    transform_sum,
)
from .structure import Direction, fibers_along

__all__ = [
    "BoundReport",
    "KConstant",
    "HypothesisViolation",
    "InequalityViolation",
    "check_dilate_main",
    "check_transform_main",
    "check_ruzsa_triangle",
    "check_ruzsa_sum_diff",
    "check_ruzsa_dim",
    "check_trivial_lower",
    "check_gs",
    "check_onedim_dilate",
    "check_lin_product",
    "check_doubling_chain",
    "check_lines_bound",
    "check_grid_bound",
    "probe_bukh_conjecture",
    "run_batch",
]


class HypothesisViolation(ValueError):
    """The inputs do not satisfy the bound's preconditions."""


class InequalityViolation(RuntimeError):
    """An unconditional inequality failed; carries the offending report."""

    def __init__(self, report: "BoundReport"):
        super().__init__(
            f"unconditional inequality {report.inequality!r} violated: "
            f"lhs={report.lhs}, rhs_main={report.rhs_main}, slack={report.slack}"
        )
        self.report = report


@dataclass(frozen=True)
class BoundReport:
    """One inequality evaluation with an exact slack certificate."""

    inequality: str
    lhs: int
    rhs_main: Scalar
    slack: Scalar  # always lhs - rhs_main, exact
    constant_param: Optional[Scalar] = None
    holds_with_param: Optional[bool] = None
    inputs_digest: str = ""
    note: str = ""

    def to_record(self) -> dict:
        rec = {"inequality": self.inequality, "lhs": self.lhs, "rhs_main": str(self.rhs_main)}
        if self.constant_param is not None:
            rec["constant_param"] = str(self.constant_param)
        rec["slack"] = str(self.slack)
        if self.holds_with_param is not None:
            rec["holds"] = self.holds_with_param
        rec["inputs_digest"] = self.inputs_digest
        if self.note:
            rec["note"] = self.note
        return rec

    def to_json_line(self) -> str:
        return json.dumps(self.to_record())


@dataclass(frozen=True)
class KConstant:
    """The composite constant d(d+1)*c + d(d+1) + c for a supplied stand-in c."""

    q: int
    s: int
    d: int
    c_qs: Scalar

    @property
    def value(self) -> Scalar:
        c = Fraction(self.c_qs)
        dd = self.d * (self.d + 1)
        return _nrm(dd * c + dd + c)


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, PointSet):
            h.update(pio.dumps_points(part).encode())
        elif isinstance(part, LinearMap):
            h.update(part.to_string().encode())
        else:
            h.update(str(part).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


def _require(cond: bool, msg: str):
    if not cond:
        raise HypothesisViolation(msg)


def _report_lower(name, lhs, rhs_main, digest, *, param=None, note="", fatal=False):
    """Lower bound lhs >= rhs_main (minus param when supplied)."""
    rhs_main = _nrm(Fraction(rhs_main))
    slack = _nrm(lhs - Fraction(rhs_main))
    holds = None
    if param is not None:
        param = _nrm(Fraction(param))
        holds = lhs >= Fraction(rhs_main) - Fraction(param)
    rep = BoundReport(name, lhs, rhs_main, slack, param, holds, digest, note)
    if fatal and lhs < Fraction(rhs_main):
        raise InequalityViolation(rep)
    return rep


def _report_upper(name, lhs, rhs_main, digest, *, note="", fatal=False):
    """Upper bound lhs <= rhs_main; holds is direction-aware (param 0)."""
    rhs_main = _nrm(Fraction(rhs_main))
    slack = _nrm(lhs - Fraction(rhs_main))
    holds = lhs <= Fraction(rhs_main)
    rep = BoundReport(name, lhs, rhs_main, slack, 0, holds, digest, note)
    if fatal and not holds:
        raise InequalityViolation(rep)
    return rep


def _coprime_dilate_pair(q: int, s: int):
    _require(isinstance(q, int) and isinstance(s, int), "q and s must be integers")
    _require(gcd(abs(q), abs(s)) == 1, f"q={q}, s={s} are not coprime")
    _require(q * s > 1, f"need qs > 1, got qs = {q * s}")


def check_dilate_main(a: PointSet, q: int, s: int) -> BoundReport:
    """|qA + sA| against the main term (|q|+|s|+2d-2)|A| for full-dimensional A.

    Asymptotic: slack may be negative (the error term absorbs it).
    """
    _coprime_dilate_pair(q, s)
    _require(
        affine_dim(a) == a.dim,
        f"set must be full-dimensional: affine_dim {affine_dim(a)} != {a.dim}",
    )
    lhs = len(dilate_sum(q, s, a))
    rhs = (abs(q) + abs(s) + 2 * a.dim - 2) * len(a)
    return _report_lower(
        "dilate-main", lhs, rhs, _digest(a, q, s), note=f"d={a.dim} n={len(a)}"
    )


def check_transform_main(a: PointSet, m: LinearMap) -> BoundReport:
    """|A + L(A)| against 4|A| for planar maps with no real eigenvalue."""
    _require(a.dim == 2, "set must be planar")
    _require(has_no_real_eigenvalue(m), "map must have no real eigenvalue")
    lhs = len(transform_sum(a, m))
    return _report_lower("transform-main", lhs, 4 * len(a), _digest(a, m))


def check_ruzsa_triangle(u: PointSet, v: PointSet, w: PointSet) -> BoundReport:
    """|U||V-W| <= |U-V||U-W|; unconditional, violation is fatal."""
    lhs = len(u) * len(difference_set(v, w))
    rhs = len(difference_set(u, v)) * len(difference_set(u, w))
    return _report_upper("ruzsa-triangle", lhs, rhs, _digest(u, v, w), fatal=True)


def check_ruzsa_sum_diff(u: PointSet, v: PointSet) -> BoundReport:
    """|U+V| <= |U-V|^3 / (|U||V|); unconditional, violation is fatal."""
    lhs = len(sumset(u, v))
    diff = len(difference_set(u, v))
    rhs = Fraction(diff**3, len(u) * len(v))
    return _report_upper("ruzsa-sum-diff", lhs, rhs, _digest(u, v), fatal=True)


def check_ruzsa_dim(a: PointSet, b: PointSet) -> BoundReport:
    """|A+B| >= |A| + d|B| - d(d+1)/2 when A+B spans dimension d.

    Unconditional under its hypotheses (|A| >= |B|, dim(A+B) = d).
    """
    _require(len(a) >= len(b) >= 1, "need |A| >= |B| >= 1")
    total = sumset(a, b)
    d = a.dim
    _require(
        affine_dim(total) == d,
        f"A+B must span dimension {d}, got {affine_dim(total)}",
    )
    rhs = Fraction(len(a)) + d * len(b) - Fraction(d * (d + 1), 2)
    return _report_lower(
        "ruzsa-dim", len(total), rhs, _digest(a, b), param=0, fatal=True
    )


def check_trivial_lower(a: PointSet, b: PointSet) -> BoundReport:
    """|A+B| >= |A| + |B| - 1; unconditional."""
    lhs = len(sumset(a, b))
    rhs = len(a) + len(b) - 1
    return _report_lower(
        "trivial-lower", lhs, rhs, _digest(a, b), param=0, fatal=True
    )


def check_gs(a: PointSet, b: PointSet, direction) -> BoundReport:
    """|A+B| >= (|A|/r1 + |B|/r2 - 1)(r1 + r2 - 1) for planar sets.

    r1, r2 count the lines parallel to `direction` meeting A resp. B.
    Unconditional.
    """
    _require(a.dim == 2 and b.dim == 2, "sets must be planar")
    d = direction if isinstance(direction, Direction) else Direction.of(direction)
    r1 = len(fibers_along(a, d).fibers)
    r2 = len(fibers_along(b, d).fibers)
    rhs = (Fraction(len(a), r1) + Fraction(len(b), r2) - 1) * (r1 + r2 - 1)
    lhs = len(sumset(a, b))
    return _report_lower(
        "gs-lines",
        lhs,
        rhs,
        _digest(a, b, d.vector),
        param=0,
        note=f"r1={r1} r2={r2}",
        fatal=True,
    )


def check_onedim_dilate(
    a: PointSet, q: int, s: int, c_param=None
) -> BoundReport:
    """|qA + sA| against (|q|+|s|)|A| for collinear A; slack measures C_{q,s}.

    The additive constant is never fixed by theory here: the caller may
    supply a stand-in to get a holds verdict, otherwise the slack itself is
    the measurement.
    """
    _require(isinstance(q, int) and isinstance(s, int), "q and s must be integers")
    _require(q != s, "q and s must be distinct")
    _require(gcd(abs(q), abs(s)) == 1, f"q={q}, s={s} are not coprime")
    _require(affine_dim(a) == 1, "set must be one-dimensional (collinear, >= 2 points)")
    lhs = len(dilate_sum(q, s, a))
    rhs = (abs(q) + abs(s)) * len(a)
    param = None if c_param is None else as_scalar(c_param)
    return _report_lower(
        "onedim-dilate", lhs, rhs, _digest(a, q, s, param), param=param
    )


def _collinear_direction(a: PointSet):
    """Direction of a set contained in one line; None for singletons."""
    dim = affine_dim(a)
    _require(dim <= 1, "set must be contained in a line")
    if dim == 0:
        return None
    base = a.points[0]
    other = next(p for p in a.points[1:] if p != base)
    return Direction.of([x - y for x, y in zip(other, base)])


def check_lin_product(a1: PointSet, a2: PointSet, m: LinearMap) -> BoundReport:
    """|A1 + L(A2)| = |A1||A2| for parallel collinear sets, L eigenvalue-free.

    Exact equality; any deviation is fatal.
    """
    _require(a1.dim == 2 and a2.dim == 2, "sets must be planar")
    _require(has_no_real_eigenvalue(m), "map must have no real eigenvalue")
    d1 = _collinear_direction(a1)
    d2 = _collinear_direction(a2)
    if d1 is not None and d2 is not None:
        _require(d1 == d2, "the two lines must be parallel")
    lhs = len(sumset(a1, apply_map(m, a2)))
    rhs = len(a1) * len(a2)
    rep = _report_lower(
        "lin-product", lhs, rhs, _digest(a1, a2, m), param=0, fatal=True
    )
    if lhs != rhs:
        raise InequalityViolation(rep)
    return rep


def check_doubling_chain(a: PointSet, m: LinearMap) -> BoundReport:
    """From c = |A+L(A)|/|A|: verify |A-A| <= c^2|A| and |A+A| <= c^6|A|.

    Both are unconditional consequences; either failing is fatal.  The report
    compares |A+A| against c^6|A| and carries all three ratios in the note.
    """
    _require(m.is_invertible(), "map must be invertible")
    _require(m.dim == a.dim, "map and set dimensions differ")
    n = len(a)
    _require(n >= 1, "set must be non-empty")
    c = Fraction(len(sumset(a, apply_map(m, a))), n)
    diff = len(difference_set(a, a))
    summ = len(sumset(a, a))
    note = f"c={c} |A-A|={diff} c^2|A|={c * c * n} |A+A|={summ}"
    digest = _digest(a, m)
    if diff > c * c * n:
        raise InequalityViolation(
            BoundReport("doubling-chain", diff, _nrm(c * c * n), _nrm(diff - c * c * n), 0, False, digest, note)
        )
    return _report_upper("doubling-chain", summ, c**6 * n, digest, note=note, fatal=True)


def check_lines_bound(
    a: PointSet, q: int, s: int, decomp, c_qs
) -> BoundReport:
    """|qA + sA| against (|q|+|s|+2d-2)|A| - K r for a full line cover of A.

    K is the composite constant built from the caller-supplied c_qs; the
    decomposition must cover A exactly (empty leftover).
    """
    from .structure import verify_decomposition

    _coprime_dilate_pair(q, s)
    d = a.dim
    _require(affine_dim(a) == d, "set must be full-dimensional")
    check = verify_decomposition(a, decomp)
    _require(check.ok, f"decomposition invalid: {'; '.join(check.problems)}")
    _require(len(decomp.leftover) == 0, "decomposition must cover A (empty leftover)")
    r = len(decomp.fibers)
    k = KConstant(q, s, d, as_scalar(c_qs)).value
    rhs = (abs(q) + abs(s) + 2 * d - 2) * len(a) - Fraction(k) * r
    lhs = len(dilate_sum(q, s, a))
    return _report_lower(
        "lines-bound",
        lhs,
        rhs,
        _digest(a, q, s, decomp.direction.vector, c_qs),
        param=as_scalar(c_qs),
        note=f"K={k} r={r}",
    )


def check_grid_bound(a: PointSet, m: LinearMap, profile) -> BoundReport:
    """|A + L(A)| against |A| (r2/r1 + r1/r2 + 2) from a grid profile.

    Asymptotic: slack may be negative.
    """
    _require(a.dim == 2, "set must be planar")
    _require(has_no_real_eigenvalue(m), "map must have no real eigenvalue")
    union = set(profile.covered.points) | set(profile.leftover.points)
    _require(union == set(a.points), "profile does not partition the input set")
    _require(
        profile.r1 * profile.r2 >= len(profile.covered),
        "profile inconsistent: r1*r2 < |S|",
    )
    r1, r2 = profile.r1, profile.r2
    rhs = len(a) * (Fraction(r2, r1) + Fraction(r1, r2) + 2)
    lhs = len(transform_sum(a, m))
    return _report_lower(
        "grid-bound", lhs, rhs, _digest(a, m), note=f"r1={r1} r2={r2}"
    )


def _nth_root_floor(x: int, k: int) -> int:
    """Largest r with r^k <= x, exact."""
    if x < 0 or k < 1:
        raise ValueError("x >= 0 and k >= 1 required")
    if k == 1 or x in (0, 1):
        return x
    if k == 2:
        return isqrt(x)
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


_ROOT_SCALE_DIGITS = 35  # interval width 2*10^-35 < the spec'd 10^-30


def _root_interval(value: Fraction, k: int):
    """[lo, hi] rationals bracketing value^(1/k); exact when the root is rational."""
    p, q = value.numerator, value.denominator
    rp, rq = _nth_root_floor(p, k), _nth_root_floor(q, k)
    if rp**k == p and rq**k == q:
        exact = Fraction(rp, rq)
        return exact, exact
    scale = 10**_ROOT_SCALE_DIGITS
    n = p * scale**k
    lo = _nth_root_floor(n // q, k)
    hi = _nth_root_floor(n // q + 1, k) + 1
    return Fraction(lo, scale), Fraction(hi, scale)


def probe_bukh_conjecture(a: PointSet, maps) -> BoundReport:
    """|L1(A) + ... + Lk(A)| against (sum |det Li|^(1/d))^d |A|.

    Conjectural and informational only; never fatal.  The only inexact
    quantity in the library, carried as a rational interval so the verdict
    (holds / fails / straddles) is still certain whenever the interval
    allows it.
    """
    maps = list(maps)
    _require(len(maps) >= 1, "need at least one map")
    for m in maps:
        _require(m.dim == a.dim, "map and set dimensions differ")
        _require(m.is_invertible(), "all maps must be invertible")
    d = a.dim
    total = reduce(sumset, (apply_map(m, a) for m in maps))
    lhs = len(total)
    lo = hi = Fraction(0)
    exact = True
    for m in maps:
        rlo, rhi = _root_interval(abs(Fraction(m.det())), d)
        lo += rlo
        hi += rhi
        exact = exact and rlo == rhi
    rhs_lo = lo**d * len(a)
    rhs_hi = hi**d * len(a)
    if lhs >= rhs_hi:
        verdict = "holds"
    elif lhs < rhs_lo:
        verdict = "fails"
    else:
        verdict = "straddles"
    note = f"conjectural: informational only; verdict={verdict}"
    if not exact:
        note += f"; rhs interval [{rhs_lo}, {rhs_hi}]"
    digest = _digest(a, *maps)
    rhs_main = _nrm(rhs_hi)
    return BoundReport(
        "bukh-probe", lhs, rhs_main, _nrm(lhs - rhs_hi), None, None, digest, note
    )


def run_batch(checker, instances, threads: int = 1):
    """Apply a checker to many argument tuples; reports sorted by digest.

    The sort makes aggregation deterministic regardless of execution order,
    so fanning out across threads cannot change the output.
    """
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda args: checker(*args), instances))
    else:
        reports = [checker(*args) for args in instances]
    return sorted(reports, key=lambda r: r.inputs_digest)
