# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DFS kernel for two-map objectives.

Word-array bitmasks with shifted-OR accumulation; mirrors _dfs_py exactly
(same enumeration order, same pruning, same counters) so either backend can
stand in for the other.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int sumsets_popcountll(unsigned long long x) { return __builtin_popcountll(x); }
    #else
    static inline int sumsets_popcountll(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; ++c; }
        return c;
    }
    #endif
    """
    int sumsets_popcountll(unsigned long long x) nogil

ctypedef unsigned long long u64
ctypedef long long i64

cdef i64 _INF = (<i64>1) << 62


cdef struct State:
    int ncells
    int n
    int nwords
    int dim
    int all_axes
    bint fulldim
    long off
    i64* delta1
    i64* delta2
    int* axis_zero
    int* zero_next      # dim rows of (ncells + 1)
    i64* cx
    i64* cy
    u64* stack          # (n + 1) levels of 3 masks
    int* chosen
    i64 best
    i64 cut
    i64 nodes
    i64 valid_leaves
    int* wits           # cap rows of n cell indices, sorted lexicographically
    int wit_count
    int cap


cdef inline void set_bit(u64* mask, long pos) nogil:
    mask[pos >> 6] |= (<u64>1) << (pos & 63)


cdef inline void shift_or(u64* dst, u64* src, long t, int nwords) nogil:
    # dst |= src << t (t may be negative); src bits land in-window by
    # construction, so nothing is ever shifted out of range
    cdef int wq, bq, i
    if t >= 0:
        wq = <int>(t >> 6)
        bq = <int>(t & 63)
        if wq >= nwords:
            return
        if bq == 0:
            for i in range(nwords - 1, wq - 1, -1):
                dst[i] |= src[i - wq]
        else:
            for i in range(nwords - 1, wq, -1):
                dst[i] |= (src[i - wq] << bq) | (src[i - wq - 1] >> (64 - bq))
            dst[wq] |= src[0] << bq
    else:
        t = -t
        wq = <int>(t >> 6)
        bq = <int>(t & 63)
        if wq >= nwords:
            return
        if bq == 0:
            for i in range(nwords - wq):
                dst[i] |= src[i + wq]
        else:
            for i in range(nwords - wq - 1):
                dst[i] |= (src[i + wq] >> bq) | (src[i + wq + 1] << (64 - bq))
            dst[nwords - wq - 1] |= src[nwords - 1] >> bq


cdef inline i64 popcount_arr(u64* mask, int nwords) nogil:
    cdef i64 total = 0
    cdef int i
    for i in range(nwords):
        total += sumsets_popcountll(mask[i])
    return total


cdef inline void apply_cell(State* st, u64* parent, u64* child, int c) nogil:
    cdef int nw = st.nwords
    memcpy(child, parent, 3 * nw * sizeof(u64))
    set_bit(child, st.off + st.delta1[c])
    set_bit(child + nw, st.off + st.delta2[c])
    shift_or(child + 2 * nw, child + nw, st.delta1[c], nw)
    shift_or(child + 2 * nw, child, st.delta2[c], nw)


cdef inline int lexcmp(int* a, int* b, int n) nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0


cdef inline bint leaf_fulldim_ok(State* st) nogil:
    # affine rank must equal dim; cells are distinct so dim 1 always passes
    cdef i64 x0, y0, dx1, dy1
    cdef int i
    if not st.fulldim or st.dim == 1:
        return True
    x0 = st.cx[st.chosen[0]]
    y0 = st.cy[st.chosen[0]]
    dx1 = st.cx[st.chosen[1]] - x0
    dy1 = st.cy[st.chosen[1]] - y0
    for i in range(2, st.n):
        if dx1 * (st.cy[st.chosen[i]] - y0) != dy1 * (st.cx[st.chosen[i]] - x0):
            return True
    return False


cdef void record(State* st, i64 val) nogil:
    cdef int n = st.n
    cdef int pos, i, last
    st.valid_leaves += 1
    if val < st.best:
        st.best = val
        st.wit_count = 1
        memcpy(st.wits, st.chosen, n * sizeof(int))
        return
    if val != st.best:
        return
    if st.wit_count == st.cap:
        if lexcmp(st.chosen, st.wits + (st.cap - 1) * n, n) >= 0:
            return
    pos = 0
    while pos < st.wit_count and lexcmp(st.wits + pos * n, st.chosen, n) < 0:
        pos += 1
    last = st.wit_count if st.wit_count < st.cap else st.cap - 1
    for i in range(last, pos, -1):
        memcpy(st.wits + i * n, st.wits + (i - 1) * n, n * sizeof(int))
    memcpy(st.wits + pos * n, st.chosen, n * sizeof(int))
    if st.wit_count < st.cap:
        st.wit_count += 1


cdef void dfs(State* st, int depth, int lo, int flags) nogil:
    cdef int need = st.n - depth
    cdef int c, j, newflags
    cdef i64 val, effective
    cdef bint feasible
    cdef u64* parent = st.stack + depth * 3 * st.nwords
    cdef u64* child = st.stack + (depth + 1) * 3 * st.nwords
    for c in range(lo, st.ncells - need + 1):
        st.nodes += 1
        apply_cell(st, parent, child, c)
        val = popcount_arr(child + 2 * st.nwords, st.nwords)
        effective = st.cut if st.cut < st.best else st.best
        if val > effective:
            continue
        newflags = flags | st.axis_zero[c]
        st.chosen[depth] = c
        if need == 1:
            if newflags == st.all_axes and leaf_fulldim_ok(st):
                record(st, val)
        else:
            feasible = True
            for j in range(st.dim):
                if not (newflags >> j) & 1:
                    if st.zero_next[j * (st.ncells + 1) + c + 1] >= st.ncells:
                        feasible = False
                        break
            if feasible:
                dfs(st, depth + 1, c + 1, newflags)


def run_task(
    int ncells,
    int n,
    long nbits,
    long off,
    i64[::1] delta1,
    i64[::1] delta2,
    int[::1] axis_zero,
    int[::1] zero_next,
    int dim,
    int fulldim,
    i64[::1] cx,
    i64[::1] cy,
    int[::1] prefix,
    int start,
    i64 cut,
    int cap,
):
    """Explore one subtree; returns (best, leaves, nodes, valid_leaves)."""
    cdef State st
    cdef int nwords = <int>((nbits + 63) >> 6)
    cdef int nprefix = prefix.shape[0]
    cdef int i, flags
    cdef i64 val
    cdef u64* level0
    cdef list leaves

    st.ncells = ncells
    st.n = n
    st.nwords = nwords
    st.dim = dim
    st.all_axes = (1 << dim) - 1
    st.fulldim = <bint>fulldim
    st.off = off
    st.delta1 = &delta1[0]
    st.delta2 = &delta2[0]
    st.axis_zero = &axis_zero[0]
    st.zero_next = &zero_next[0]
    st.cx = &cx[0]
    st.cy = &cy[0]
    st.best = _INF
    st.cut = cut
    st.nodes = 0
    st.valid_leaves = 0
    st.wit_count = 0
    st.cap = cap

    st.stack = <u64*>malloc((n + 1) * 3 * nwords * sizeof(u64))
    st.chosen = <int*>malloc(n * sizeof(int) if n > 0 else sizeof(int))
    st.wits = <int*>malloc(cap * n * sizeof(int) if cap * n > 0 else sizeof(int))
    if st.stack == NULL or st.chosen == NULL or st.wits == NULL:
        free(st.stack)
        free(st.chosen)
        free(st.wits)
        raise MemoryError()

    try:
        with nogil:
            # all three masks start empty; the empty-subset mask of the
            # python kernel is implicit in apply_cell's set_bit calls
            level0 = st.stack
            for i in range(3 * nwords):
                level0[i] = 0

            flags = 0
            for i in range(nprefix):
                apply_cell(
                    &st,
                    st.stack + i * 3 * nwords,
                    st.stack + (i + 1) * 3 * nwords,
                    prefix[i],
                )
                st.chosen[i] = prefix[i]
                flags |= st.axis_zero[prefix[i]]

            if nprefix == n:
                st.nodes = 1
                val = popcount_arr(
                    st.stack + n * 3 * nwords + 2 * nwords, nwords
                )
                if val <= st.cut and flags == st.all_axes and leaf_fulldim_ok(&st):
                    record(&st, val)
            else:
                val = popcount_arr(
                    st.stack + nprefix * 3 * nwords + 2 * nwords, nwords
                )
                if val <= st.cut:
                    dfs(&st, nprefix, start, flags)

        leaves = []
        for i in range(st.wit_count):
            leaves.append(tuple(st.wits[i * n + j] for j in range(n)))
        return (st.best if st.best < _INF else _INF), leaves, st.nodes, st.valid_leaves
    finally:
        free(st.stack)
        free(st.chosen)
        free(st.wits)
