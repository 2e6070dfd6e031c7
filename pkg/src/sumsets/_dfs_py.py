"""Pure-Python DFS kernel: big-int bitmasks, shifted-OR sumset accumulation.

Reference implementation for any number of maps; the compiled kernel mirrors
it exactly for the two-map case.  Results (minimum, witness leaves, node and
leaf counts) are identical between the two by construction.
"""

from __future__ import annotations

from bisect import insort

INF = 1 << 62


def _subset_update_order(k):
    # masks indexed by subset-of-maps bitmask; update smaller subsets first
    order = sorted(range(1, 1 << k), key=lambda s: (bin(s).count("1"), s))
    members = {s: [i for i in range(k) if s >> i & 1] for s in order}
    return order, members


def _rank_ge(coords, dim):
    # affine rank == dim test over integer coordinates
    base = coords[0]
    rows = [[c - b for c, b in zip(p, base)] for p in coords[1:]]
    from math import gcd

    rank = 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            if ri[col]:
                g = gcd(abs(ri[col]), abs(pr[col]))
                m1, m2 = pr[col] // g, ri[col] // g
                rows[i] = [m1 * x - m2 * y for x, y in zip(ri, pr)]
        rank += 1
        if rank == dim:
            return True
    return rank == dim


def run_task(pb, prefix, start, cut):
    """Explore the subtree below `prefix`, pruning above `cut` (strict).

    Returns (best, leaves, nodes, valid_leaves) with `leaves` the at most
    `cap` lexicographically least cell tuples achieving `best`.
    """
    from .kernels import TaskResult

    k = pb.k
    order, members = _subset_update_order(k)
    deltas = pb.deltas
    axis_zero = pb.axis_zero
    zero_next = pb.zero_next
    all_axes = (1 << pb.dim) - 1
    full = (1 << k) - 1
    n = pb.n
    ncells = pb.ncells
    cap = pb.witness_cap
    fulldim = pb.full_dimensional
    coords = pb.coords

    def update(masks, c):
        nm = masks.copy()
        for s in order:
            acc = nm[s]
            for i in members[s]:
                src = nm[s & ~(1 << i)]
                t = deltas[i][c]
                acc |= src << t if t >= 0 else src >> -t
            nm[s] = acc
        return nm

    masks0 = [0] * (1 << k)
    masks0[0] = 1 << pb.off
    flags0 = 0
    for c in prefix:
        masks0 = update(masks0, c)
        flags0 |= axis_zero[c]

    best = INF
    wits = []
    nodes = 0
    valid_leaves = 0

    def leaf_ok(cells, flags):
        if flags != all_axes:
            return False
        if fulldim:
            return _rank_ge([coords[c] for c in cells], pb.dim)
        return True

    def record(cells, val):
        nonlocal best, wits, valid_leaves
        valid_leaves += 1
        if val < best:
            best = val
            wits = [tuple(cells)]
        elif val == best:
            t = tuple(cells)
            if len(wits) < cap:
                insort(wits, t)
            elif t < wits[-1]:
                insort(wits, t)
                wits.pop()

    if len(prefix) == n:
        nodes = 1
        val = masks0[full].bit_count()
        if val <= min(cut, INF) and leaf_ok(prefix, flags0):
            record(prefix, val)
        return TaskResult(best, tuple(wits), nodes, valid_leaves)

    # a prefix already above the cut cannot improve: objective is monotone
    if masks0[full].bit_count() > cut:
        return TaskResult(INF, (), 0, 0)

    chosen = list(prefix) + [0] * (n - len(prefix))

    def dfs(depth, lo, masks, flags):
        nonlocal nodes
        need = n - depth
        for c in range(lo, ncells - need + 1):
            nodes += 1
            child = update(masks, c)
            val = child[full].bit_count()
            effective = cut if cut < best else best
            if val > effective:
                continue
            newflags = flags | axis_zero[c]
            chosen[depth] = c
            if need == 1:
                if leaf_ok(chosen, newflags):
                    record(chosen, val)
            else:
                feasible = True
                for j in range(pb.dim):
                    if not newflags >> j & 1 and zero_next[j][c + 1] >= ncells:
                        feasible = False
                        break
                if feasible:
                    dfs(depth + 1, c + 1, child, newflags)

    dfs(len(prefix), start, masks0, flags0)
    return TaskResult(best, tuple(wits), nodes, valid_leaves)
