"""Constructors for the named set families plus progression and random inputs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import DimensionMismatch, PointSet, point

__all__ = [
    "RNG_NAME",
    "SplitMix64",
    "ImproperProgression",
    "ProperProgression",
    "gen_an",
    "gen_bn",
    "gen_cn",
    "gen_ap",
    "gen_proper_progression",
    "gen_random_box",
]

# identifier recorded next to every seed in serialized outputs
RNG_NAME = "splitmix64"

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


class SplitMix64:
    """splitmix64 in counter mode: out_i = mix(seed + (i+1)*golden).

    Counter-based and fully determined by the seed, so identical streams on
    every platform and interpreter.
    """

    def __init__(self, seed: int):
        self._seed = seed & _MASK
        self._i = 0

    def next_u64(self) -> int:
        self._i += 1
        z = (self._seed + self._i * _GOLDEN) & _MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), rejection-sampled (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound


class ImproperProgression(ValueError):
    """Progression sums collide; the message names a colliding pair."""


@dataclass(frozen=True)
class ProperProgression:
    """v0 + u_1 v_1 + ... + u_s v_s with 0 <= u_i < L_i, all sums distinct."""

    v0: tuple
    generators: tuple  # ((vector, length), ...)

    @property
    def arithmetic_dim(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        n = 1
        for _, length in self.generators:
            n *= length
        return n


def gen_an(d: int, n: int) -> PointSet:
    """Basis vectors e_1..e_d plus the progression 2e_1..Ne_1.

    Cardinality n + d - 1; spans a d-dimensional affine subspace for n >= 2.
    """
    if d < 1 or n < d:
        raise ValueError(f"need n >= d >= 1, got d={d}, n={n}")
    pts = []
    for i in range(d):
        pts.append(tuple(1 if j == i else 0 for j in range(d)))
    for k in range(2, n + 1):
        pts.append(tuple(k if j == 0 else 0 for j in range(d)))
    return PointSet(d, pts)


def gen_bn(n: int) -> PointSet:
    """The n x n lattice grid [0, n)^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return PointSet(2, [(x, y) for x in range(n) for y in range(n)])


def gen_cn(n: int) -> PointSet:
    """Two parallel horizontal rows of n-1 lattice points each."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return PointSet(2, [(t, e) for t in range(1, n) for e in (0, 1)])


def gen_ap(start, step, n: int) -> PointSet:
    """Arithmetic progression: start, start+step, ..., n terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = point(*start)
    v = point(*step)
    if len(s) != len(v):
        raise DimensionMismatch("start and step have different lengths")
    if all(c == 0 for c in v):
        raise ValueError("step must be nonzero")
    return PointSet(
        len(s), [tuple(a + k * b for a, b in zip(s, v)) for k in range(n)]
    )


def gen_proper_progression(p: ProperProgression) -> PointSet:
    """Materialise a progression, verifying properness (all sums distinct)."""
    v0 = point(*p.v0)
    gens = [(point(*v), int(length)) for v, length in p.generators]
    for v, length in gens:
        if len(v) != len(v0):
            raise DimensionMismatch("generator has wrong length")
        if length < 1:
            raise ValueError("generator lengths must be positive")
    seen = {}
    pts = []
    for us in product(*(range(length) for _, length in gens)):
        q = list(v0)
        for u, (v, _) in zip(us, gens):
            for j in range(len(q)):
                q[j] += u * v[j]
        q = tuple(q)
        if q in seen:
            raise ImproperProgression(
                f"sums collide: u={seen[q]} and u={us} both give {q}"
            )
        seen[q] = us
        pts.append(q)
    return PointSet(len(v0), pts)


def gen_random_box(d: int, side: int, n: int, seed: int) -> PointSet:
    """n distinct lattice points of [0, side)^d, reproducible from the seed."""
    if d < 1 or side < 1:
        raise ValueError("d and side must be positive")
    space = side**d
    if not 1 <= n <= space:
        raise ValueError(f"need 1 <= n <= side^d = {space}, got n={n}")
    rng = SplitMix64(seed)
    if n > space // 2:
        # dense draw: partial Fisher-Yates over the whole index range
        idx = list(range(space))
        for i in range(n):
            j = i + rng.below(space - i)
            idx[i], idx[j] = idx[j], idx[i]
        chosen = idx[:n]
    else:
        picked = set()
        chosen = []
        while len(chosen) < n:
            v = rng.below(space)
            if v not in picked:
                picked.add(v)
                chosen.append(v)
    pts = []
    for v in chosen:
        coords = []
        for _ in range(d):
            coords.append(v % side)
            v //= side
        pts.append(tuple(coords))
    return PointSet(d, pts)
