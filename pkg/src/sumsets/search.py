"""Exhaustive, canonicalized, pruned minimisation of sumset cardinalities.

The search walks all n-subsets of a small box, one translation class each
(subsets touching every zero coordinate hyperplane), in lexicographic cell
order.  The objective cardinality is monotone under adding points, so a
partial set already above the best known value is cut.  Work splits at a
fixed depth into independent subtree tasks processed in fixed-size batches;
improvements propagate between batches only, which keeps every statistic
(including node counts) identical for any thread count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import permutations, product
from math import comb, gcd, isqrt
from typing import Optional, Union

from . import kernels
from .core import (
    LinearMap,
    PointSet,
    affine_dim,
    apply_map,
    dilate_sum,
    has_no_real_eigenvalue,
    sumset,
    transform_sum,
)

__all__ = [
    "BudgetExceeded",
    "InfeasibleSpec",
    "DilateSumObjective",
    "TransformObjective",
    "MultiMapObjective",
    "SearchSpec",
    "SearchResult",
    "ProfileRow",
    "canonicalize",
    "minimize",
    "slack_profile",
]

_POOL_FACTOR = 8
_BATCH_SIZE = 64


class BudgetExceeded(ValueError):
    """Search space larger than the node budget; carries the computed size."""

    def __init__(self, space: int, budget: int):
        super().__init__(
            f"search space has {space} subsets, over the budget of {budget}"
        )
        self.space = space
        self.budget = budget


class InfeasibleSpec(ValueError):
    """No subset can satisfy the spec's constraint."""


@dataclass(frozen=True)
class DilateSumObjective:
    """Minimise |qA + sA| over n-subsets."""

    q: int
    s: int

    def validate(self, dim: int):
        if gcd(abs(self.q), abs(self.s)) != 1 or self.q * self.s <= 1:
            raise InfeasibleSpec(
                f"(q, s) = ({self.q}, {self.s}) must be coprime with qs > 1"
            )

    def maps(self, dim: int):
        return [LinearMap.scalar(dim, self.q), LinearMap.scalar(dim, self.s)]

    def value(self, a: PointSet) -> int:
        return len(dilate_sum(self.q, self.s, a))

    def main_term(self, n: int, dim: int) -> int:
        return (abs(self.q) + abs(self.s) + 2 * dim - 2) * n

    def symmetry(self, dim: int):
        # dilation commutes with signed coordinate permutations
        if dim > 4:
            return [LinearMap.identity(dim)]
        out = []
        for perm in permutations(range(dim)):
            for signs in product((1, -1), repeat=dim):
                out.append(
                    LinearMap(
                        [
                            [signs[i] if perm[i] == j else 0 for j in range(dim)]
                            for i in range(dim)
                        ]
                    )
                )
        return out

    def label(self) -> str:
        return f"dilate:{self.q},{self.s}"


@dataclass(frozen=True)
class TransformObjective:
    """Minimise |A + L(A)| for a planar map without real eigenvalues."""

    matrix: LinearMap

    def validate(self, dim: int):
        if dim != 2 or self.matrix.dim != 2:
            raise InfeasibleSpec("transform objective is planar")
        if not has_no_real_eigenvalue(self.matrix):
            raise InfeasibleSpec("map must have no real eigenvalue")

    def maps(self, dim: int):
        return [LinearMap.identity(2), self.matrix]

    def value(self, a: PointSet) -> int:
        return len(transform_sum(a, self.matrix))

    def main_term(self, n: int, dim: int) -> int:
        return 4 * n

    def symmetry(self, dim: int):
        # a general map need not commute with reflections; translations only
        return [LinearMap.identity(dim)]

    def label(self) -> str:
        return f"transform:{self.matrix.to_string()}"


@dataclass(frozen=True)
class MultiMapObjective:
    """Minimise |L1(A) + ... + Lk(A)|."""

    maps_list: tuple

    def validate(self, dim: int):
        if not self.maps_list:
            raise InfeasibleSpec("need at least one map")
        for m in self.maps_list:
            if m.dim != dim:
                raise InfeasibleSpec("map dimension mismatch")
            if not m.is_invertible():
                raise InfeasibleSpec("all maps must be invertible")

    def maps(self, dim: int):
        return list(self.maps_list)

    def value(self, a: PointSet) -> int:
        return len(reduce(sumset, (apply_map(m, a) for m in self.maps_list)))

    def main_term(self, n: int, dim: int):
        raise InfeasibleSpec("no closed main term for a multi-map objective")

    def symmetry(self, dim: int):
        return [LinearMap.identity(dim)]

    def label(self) -> str:
        return "multi:" + "|".join(m.to_string() for m in self.maps_list)


Objective = Union[DilateSumObjective, TransformObjective, MultiMapObjective]


@dataclass(frozen=True)
class SearchSpec:
    """One minimisation problem over n-subsets of [0, box_side)^dim."""

    dim: int
    box_side: int
    n: int
    objective: Objective
    full_dimensional: bool = False
    node_budget: int = 10**9
    witness_cap: int = 16
    split_depth: int = 2


@dataclass(frozen=True)
class SearchResult:
    min_value: int
    witnesses: tuple  # canonical PointSets achieving the minimum (capped)
    nodes_explored: int
    canonical_classes: int  # constraint-satisfying translation classes seen
    runtime_ms: int
    witness_cap: int


@dataclass(frozen=True)
class ProfileRow:
    n: int
    min_value: int
    main_term: int
    slack: int


def canonicalize(a: PointSet, objective: Optional[Objective] = None) -> PointSet:
    """Translate the lex-min point to the origin, then take the least image
    under the objective's symmetry group.  Idempotent."""
    if len(a) == 0:
        raise ValueError("cannot canonicalize an empty set")
    group = (
        objective.symmetry(a.dim)
        if objective is not None
        else [LinearMap.identity(a.dim)]
    )
    best = None
    for g in group:
        img = apply_map(g, a)
        lex_min = img.points[0]
        shifted = img.translate([-c for c in lex_min])
        if best is None or shifted.points < best.points:
            best = shifted
    return best


def _warm_candidates(spec: SearchSpec):
    """Structured n-subsets of the box that seed the incumbent."""
    d, side, n = spec.dim, spec.box_side, spec.n
    cands = []
    cells = sorted(product(range(side), repeat=d))
    cands.append(PointSet(d, cells[:n]))  # lex prefix of the box
    if n <= side:  # progression along the first axis
        cands.append(PointSet(d, [tuple(i if j == 0 else 0 for j in range(d)) for i in range(n)]))
    if d == 2:  # near-square grid block
        w = max(1, isqrt(n))
        if w <= side and (n + w - 1) // w <= side:
            cands.append(PointSet(2, [(i % w, i // w) for i in range(n)]))
    out = []
    for c in cands:
        if len(c) != n:
            continue
        if spec.full_dimensional and affine_dim(c) != d:
            continue
        if c not in out:
            out.append(c)
    return out


def _feasible_prefixes(problem, depth):
    """All DFS prefixes of the given depth, lex order, cheap feasibility only."""
    ncells, n, dim = problem.ncells, problem.n, problem.dim
    out = []

    def rec(prefix, lo, flags):
        if len(prefix) == depth:
            out.append(tuple(prefix))
            return
        need = n - len(prefix)
        for c in range(lo, ncells - need + 1):
            newflags = flags | problem.axis_zero[c]
            if need > 1:
                feasible = all(
                    (newflags >> j & 1) or problem.zero_next[j][c + 1] < ncells
                    for j in range(dim)
                )
                if not feasible:
                    continue
            prefix.append(c)
            rec(prefix, c + 1, newflags)
            prefix.pop()

    rec([], 0, 0)
    return out


def minimize(spec: SearchSpec, threads: int = 1, backend: str = "auto") -> SearchResult:
    """Exact minimum of the objective over all constrained n-subsets.

    Deterministic: the result, including node counts, is identical for any
    thread count and either kernel backend.
    """
    t0 = time.perf_counter()
    d, side, n = spec.dim, spec.box_side, spec.n
    if d < 1 or side < 1 or n < 1:
        raise InfeasibleSpec("dim, box_side and n must all be positive")
    if n > side**d:
        raise InfeasibleSpec(f"n = {n} exceeds the box ({side ** d} cells)")
    spec.objective.validate(d)
    if spec.full_dimensional and n <= d:
        raise InfeasibleSpec(
            f"full-dimensional constraint needs n > dim, got n={n}, dim={d}"
        )
    space = comb(side**d, n)
    if space > spec.node_budget:
        raise BudgetExceeded(space, spec.node_budget)

    problem = kernels.prepare(
        d, side, n, spec.objective.maps(d), spec.full_dimensional, spec.witness_cap
    )

    warm = _warm_candidates(spec)
    incumbent = min((spec.objective.value(w) for w in warm), default=kernels.INF)

    depth = min(spec.split_depth, n)
    prefixes = _feasible_prefixes(problem, depth)

    best = incumbent
    pool = []
    nodes = 0
    classes = 0
    pool_cap = spec.witness_cap * _POOL_FACTOR

    def run(prefix, cut):
        return kernels.run_task(
            problem, prefix, (prefix[-1] + 1) if prefix else 0, cut, backend
        )

    for lo in range(0, len(prefixes), _BATCH_SIZE):
        batch = prefixes[lo : lo + _BATCH_SIZE]
        cut = best  # fixed for the whole batch: results do not depend on timing
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(lambda p: run(p, cut), batch))
        else:
            results = [run(p, cut) for p in batch]
        for res in results:
            nodes += res.nodes
            classes += res.valid_leaves
            if res.best < best:
                best = res.best
                pool = list(res.leaves)
            elif res.best == best:
                pool.extend(res.leaves)
        pool = sorted(set(pool))[:pool_cap]

    if best >= kernels.INF:
        raise InfeasibleSpec("no subset satisfies the constraint")

    witnesses = []
    seen = set()
    for cell_tuple in pool:
        ps = PointSet(d, [problem.coords[c] for c in cell_tuple])
        w = canonicalize(ps, spec.objective)
        if w not in seen:
            seen.add(w)
            witnesses.append(w)
    witnesses.sort(key=lambda w: w.points)
    witnesses = witnesses[: spec.witness_cap]

    # re-verify every witness through the exact core path
    for w in witnesses:
        got = spec.objective.value(w)
        if got != best:
            raise AssertionError(
                f"witness re-verification failed: {got} != {best} for {w!r}"
            )
    floor = 2 * n - 1 if len(spec.objective.maps(d)) >= 2 else n
    if best < floor:
        raise AssertionError(
            f"minimum {best} below the unconditional floor {floor}"
        )

    return SearchResult(
        min_value=best,
        witnesses=tuple(witnesses),
        nodes_explored=nodes,
        canonical_classes=classes,
        runtime_ms=int((time.perf_counter() - t0) * 1000),
        witness_cap=spec.witness_cap,
    )


def slack_profile(spec: SearchSpec, n_values, threads: int = 1, backend: str = "auto"):
    """One minimize run per n; slack = min_value - main_term."""
    rows = []
    for n in n_values:
        sub = SearchSpec(
            dim=spec.dim,
            box_side=spec.box_side,
            n=n,
            objective=spec.objective,
            full_dimensional=spec.full_dimensional,
            node_budget=spec.node_budget,
            witness_cap=spec.witness_cap,
            split_depth=spec.split_depth,
        )
        res = minimize(sub, threads=threads, backend=backend)
        main = spec.objective.main_term(n, spec.dim)
        rows.append(ProfileRow(n, res.min_value, main, res.min_value - main))
    return rows
