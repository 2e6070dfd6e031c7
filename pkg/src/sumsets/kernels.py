"""Hot-kernel plumbing for the subset-minimisation search.

The DFS evaluates |f_1(A) + ... + f_k(A)| incrementally over bitmasks: every
map image and every partial sumset lives on one shared integer window, so
adding a point is a handful of shifted ORs and the objective cardinality is
a popcount.  This module builds that window (the Problem) and dispatches
each subtree task to the compiled kernel when one is available and
applicable, else to the pure-Python big-int fallback.  Both backends follow
the same enumeration order and produce identical results, node counts
included.

Set SUMSETS_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import _dfs_py

try:  # compiled extension is optional
    from . import _dfs_c  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _dfs_c = None

__all__ = ["Problem", "TaskResult", "HAVE_COMPILED", "prepare", "run_task", "backend_for"]

HAVE_COMPILED = _dfs_c is not None

_MAX_COMPILED_BITS = 1 << 21
_MAX_COMPILED_DEPTH = 64


@dataclass(frozen=True)
class TaskResult:
    best: int  # objective of the best valid leaf in the subtree (INF if none)
    leaves: tuple  # up to `cap` lex-least cell-index tuples achieving best
    nodes: int
    valid_leaves: int


INF = 1 << 62


@dataclass
class Problem:
    """Geometry of one search: cells, shift tables, constraint tables."""

    dim: int
    side: int
    n: int
    k: int
    ncells: int
    nbits: int
    off: int
    coords: list  # cell index -> integer coordinate tuple
    deltas: list  # deltas[i][c]: bit shift contributed by map i at cell c
    axis_zero: list  # cell index -> bitmask of axes with coordinate 0
    zero_next: list  # zero_next[axis][i]: first cell >= i with that axis 0
    full_dimensional: bool
    witness_cap: int
    _arrays: dict = field(default_factory=dict, repr=False)

    def compiled_arrays(self):
        """Flat buffers for the compiled kernel, built once per problem."""
        import array

        if not self._arrays:
            self._arrays = {
                "delta1": array.array("q", self.deltas[0]),
                "delta2": array.array("q", self.deltas[1]),
                "axis_zero": array.array("i", self.axis_zero),
                "zero_next": array.array(
                    "i", [v for row in self.zero_next for v in row]
                ),
                "cx": array.array("q", [c[0] for c in self.coords]),
                "cy": array.array(
                    "q", [c[1] if self.dim > 1 else 0 for c in self.coords]
                ),
            }
        return self._arrays


def _scaled_int_maps(maps):
    """Clear denominators across all map entries; cardinalities are invariant."""
    mult = 1
    for m in maps:
        for row in m.rows:
            for c in row:
                if type(c) is not int:
                    mult = mult * c.denominator // gcd(mult, c.denominator)
    out = []
    for m in maps:
        out.append(
            [[int(Fraction(c) * mult) for c in row] for row in m.rows]
        )
    return out


def prepare(dim, side, n, maps, full_dimensional, witness_cap) -> Problem:
    """Build the shared bitmask geometry for a box search."""
    imaps = _scaled_int_maps(maps)
    k = len(imaps)
    span = side - 1
    # per-axis window covering every subset-of-maps sum over the box
    mins = [0] * dim
    maxs = [0] * dim
    for m in imaps:
        for j in range(dim):
            mins[j] += sum(min(0, m[j][t] * span) for t in range(dim))
            maxs[j] += sum(max(0, m[j][t] * span) for t in range(dim))
    widths = [maxs[j] - mins[j] + 1 for j in range(dim)]
    strides = [1] * dim
    for j in range(1, dim):
        strides[j] = strides[j - 1] * widths[j - 1]
    nbits = strides[-1] * widths[-1]
    off = -sum(mins[j] * strides[j] for j in range(dim))

    cells = sorted(_product_cells(side, dim))
    ncells = len(cells)
    deltas = []
    for m in imaps:
        row = []
        for p in cells:
            img = [sum(m[j][t] * p[t] for t in range(dim)) for j in range(dim)]
            row.append(sum(img[j] * strides[j] for j in range(dim)))
        deltas.append(row)

    axis_zero = [
        sum(1 << j for j in range(dim) if p[j] == 0) for p in cells
    ]
    zero_next = []
    for j in range(dim):
        nxt = [ncells] * (ncells + 1)
        for i in range(ncells - 1, -1, -1):
            nxt[i] = i if cells[i][j] == 0 else nxt[i + 1]
        zero_next.append(nxt)

    return Problem(
        dim=dim,
        side=side,
        n=n,
        k=k,
        ncells=ncells,
        nbits=nbits,
        off=off,
        coords=cells,
        deltas=deltas,
        axis_zero=axis_zero,
        zero_next=zero_next,
        full_dimensional=full_dimensional,
        witness_cap=witness_cap,
    )


def _product_cells(side, dim):
    from itertools import product

    return [tuple(p) for p in product(range(side), repeat=dim)]


def backend_for(problem: Problem, backend: str = "auto") -> str:
    """Resolve which kernel will run this problem."""
    if backend not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    forced_py = os.environ.get("SUMSETS_PURE_PYTHON") == "1"
    usable = (
        HAVE_COMPILED
        and not forced_py
        and problem.k == 2
        and problem.n <= _MAX_COMPILED_DEPTH
        and problem.nbits <= _MAX_COMPILED_BITS
        and (not problem.full_dimensional or problem.dim <= 2)
    )
    if backend == "compiled":
        if not usable:
            raise ValueError("compiled kernel unavailable for this problem")
        return "compiled"
    if backend == "python" or not usable:
        return "python"
    return "compiled"


def run_task(problem: Problem, prefix, start, cut, backend: str = "auto") -> TaskResult:
    """Explore one DFS subtree; identical output on either backend."""
    which = backend_for(problem, backend)
    if which == "compiled":
        arrs = problem.compiled_arrays()
        import array

        best, leaves, nodes, valid = _dfs_c.run_task(
            problem.ncells,
            problem.n,
            problem.nbits,
            problem.off,
            arrs["delta1"],
            arrs["delta2"],
            arrs["axis_zero"],
            arrs["zero_next"],
            problem.dim,
            1 if problem.full_dimensional else 0,
            arrs["cx"],
            arrs["cy"],
            array.array("i", prefix),
            start,
            min(cut, INF),
            problem.witness_cap,
        )
        return TaskResult(best, tuple(map(tuple, leaves)), nodes, valid)
    return _dfs_py.run_task(problem, tuple(prefix), start, cut)
