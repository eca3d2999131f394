# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled solver kernel: hot backtracking loops for (L, Pi)-coloring.

Mirrors the flat-encoding contract of ``_pykern`` (see its docstring); the
pure-Python module is the import-time fallback when this extension is not
built.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef struct Ctx:
    int n
    int universe
    unsigned long long *avail
    int *nbr_ptr
    int *nbr
    int *fwd
    int *color
    long long nodes
    long long budget
    long long total


cdef inline int _pick(Ctx *ctx) nogil:
    cdef int v, best = -1
    cdef int c, bestc = 1 << 30
    for v in range(ctx.n):
        if ctx.color[v] < 0:
            c = __builtin_popcountll(ctx.avail[v])
            if c < bestc:
                best = v
                bestc = c
                if c <= 1:
                    break
    return best


cdef int _rec_solve(Ctx *ctx) nogil:
    """1 = sat, 0 = unsat, -1 = budget exhausted."""
    cdef int v = _pick(ctx)
    if v < 0:
        return 1
    cdef unsigned long long cand = ctx.avail[v]
    cdef unsigned long long bit, old
    cdef int c, s, u, b, ok, status, nundo, i
    cdef int undo_v[256]
    cdef unsigned long long undo_m[256]
    while cand:
        bit = cand & (~cand + 1)
        cand ^= bit
        c = __builtin_ctzll(bit)
        ctx.nodes += 1
        if ctx.nodes > ctx.budget:
            return -1
        nundo = 0
        ok = 1
        for s in range(ctx.nbr_ptr[v], ctx.nbr_ptr[v + 1]):
            u = ctx.nbr[s]
            if ctx.color[u] >= 0:
                continue
            b = ctx.fwd[s * ctx.universe + c]
            if b >= 0 and (ctx.avail[u] >> b) & 1:
                undo_v[nundo] = u
                undo_m[nundo] = ctx.avail[u]
                nundo += 1
                ctx.avail[u] &= ~(1ULL << b)
                if ctx.avail[u] == 0:
                    ok = 0
                    break
        if ok:
            ctx.color[v] = c
            status = _rec_solve(ctx)
            if status != 0:
                return status
            ctx.color[v] = -1
        for i in range(nundo):
            ctx.avail[undo_v[i]] = undo_m[i]
    return 0


cdef int _rec_count(Ctx *ctx, int depth) nogil:
    """1 = finished, 0 = budget exhausted; leaves accumulate in ctx.total."""
    if depth == ctx.n:
        ctx.total += 1
        return 1
    cdef int v = _pick(ctx)
    cdef unsigned long long cand = ctx.avail[v]
    cdef unsigned long long bit
    cdef int c, s, u, b, ok, nundo, i
    cdef int undo_v[256]
    cdef unsigned long long undo_m[256]
    while cand:
        bit = cand & (~cand + 1)
        cand ^= bit
        c = __builtin_ctzll(bit)
        ctx.nodes += 1
        if ctx.nodes > ctx.budget:
            return 0
        nundo = 0
        ok = 1
        for s in range(ctx.nbr_ptr[v], ctx.nbr_ptr[v + 1]):
            u = ctx.nbr[s]
            if ctx.color[u] >= 0:
                continue
            b = ctx.fwd[s * ctx.universe + c]
            if b >= 0 and (ctx.avail[u] >> b) & 1:
                undo_v[nundo] = u
                undo_m[nundo] = ctx.avail[u]
                nundo += 1
                ctx.avail[u] &= ~(1ULL << b)
                if ctx.avail[u] == 0:
                    ok = 0
                    break
        if ok:
            ctx.color[v] = c
            if not _rec_count(ctx, depth + 1):
                return 0
            ctx.color[v] = -1
        for i in range(nundo):
            ctx.avail[undo_v[i]] = undo_m[i]
    return 1


cdef Ctx *_make_ctx(int n, int universe, avail, nbr_ptr, nbr, fwd, long long budget):
    cdef Ctx *ctx = <Ctx *> malloc(sizeof(Ctx))
    ctx.n = n
    ctx.universe = universe
    ctx.nodes = 0
    ctx.budget = budget
    ctx.total = 0
    ctx.avail = <unsigned long long *> malloc(n * sizeof(unsigned long long))
    ctx.color = <int *> malloc(n * sizeof(int))
    ctx.nbr_ptr = <int *> malloc((n + 1) * sizeof(int))
    cdef int deg_total = nbr_ptr[n] if n >= 0 else 0
    ctx.nbr = <int *> malloc(max(deg_total, 1) * sizeof(int))
    ctx.fwd = <int *> malloc(max(deg_total * universe, 1) * sizeof(int))
    cdef int i
    for i in range(n):
        ctx.avail[i] = avail[i]
        ctx.color[i] = -1
    for i in range(n + 1):
        ctx.nbr_ptr[i] = nbr_ptr[i]
    for i in range(deg_total):
        ctx.nbr[i] = nbr[i]
    for i in range(deg_total * universe):
        ctx.fwd[i] = fwd[i]
    return ctx


cdef void _free_ctx(Ctx *ctx):
    free(ctx.avail)
    free(ctx.color)
    free(ctx.nbr_ptr)
    free(ctx.nbr)
    free(ctx.fwd)
    free(ctx)


def solve_kernel(int n, int universe, avail, nbr_ptr, nbr, fwd, long long budget):
    if n == 0:
        return "sat", [], 0
    cdef Ctx *ctx = _make_ctx(n, universe, avail, nbr_ptr, nbr, fwd, budget)
    try:
        status = _rec_solve(ctx)
        if status == 1:
            return "sat", [ctx.color[i] for i in range(n)], ctx.nodes
        if status == 0:
            return "unsat", None, ctx.nodes
        return "budget", None, ctx.nodes
    finally:
        _free_ctx(ctx)


def count_kernel(int n, int universe, avail, nbr_ptr, nbr, fwd, long long budget):
    if n == 0:
        return "sat", 1, 0
    cdef Ctx *ctx = _make_ctx(n, universe, avail, nbr_ptr, nbr, fwd, budget)
    try:
        finished = _rec_count(ctx, 0)
        if finished:
            return "sat", ctx.total, ctx.nodes
        return "budget", ctx.total, ctx.nodes
    finally:
        _free_ctx(ctx)


# ---------------------------------------------------------------------------
# Alive-set search over full exact assignments (counterexample hunt)
# ---------------------------------------------------------------------------

cdef struct ACtx:
    int k
    int nwords
    int r
    int P
    unsigned long long *cells   # [r][k][k][nwords]
    int *perms                  # [P][k]
    int *choice                 # [r], perm index or -1
    unsigned char *in_pool      # [P]
    unsigned long long *alive_stack  # [(r+2)][nwords]
    unsigned long long *child_buf    # [(r+2)][P][nwords], sibling dedupe
    int *kills_buf              # [(r+2)][r*P]
    long long nodes
    long long budget


cdef inline int _popcount_words(unsigned long long *w, int nwords) nogil:
    cdef int i, c = 0
    for i in range(nwords):
        c += __builtin_popcountll(w[i])
    return c


cdef int _rec_search(ACtx *ctx, int depth, unsigned long long *alive,
                     unsigned int remaining, int is_root) nogil:
    """1 = witness found (choices recorded), 0 = none, -1 = budget."""
    ctx.nodes += 1
    if ctx.nodes > ctx.budget:
        return -1
    cdef int na = _popcount_words(alive, ctx.nwords)
    if na == 0:
        return 1
    if remaining == 0:
        return 0
    cdef int k = ctx.k, P = ctx.P, nwords = ctx.nwords
    cdef int *kills = ctx.kills_buf + depth * ctx.r * P
    cdef int cnt[36]
    cdef int caps[32]
    cdef int need[32]
    cdef int e, a, b, p, i, w, kl, cap, total_cap = 0
    cdef unsigned long long *cell
    for e in range(ctx.r):
        if not (remaining >> e) & 1:
            continue
        for a in range(k):
            for b in range(k):
                cell = ctx.cells + ((e * k + a) * k + b) * nwords
                kl = 0
                for w in range(nwords):
                    kl += __builtin_popcountll(alive[w] & cell[w])
                cnt[a * k + b] = kl
        cap = 0
        for p in range(P):
            kl = 0
            for a in range(k):
                kl += cnt[a * k + ctx.perms[p * k + a]]
            kills[e * P + p] = kl
            if kl > cap:
                cap = kl
        caps[e] = cap
        total_cap += cap
    if na > total_cap:
        return 0
    cdef int best_e = -1, best_nopts = 1 << 30, nopts
    for e in range(ctx.r):
        if not (remaining >> e) & 1:
            continue
        need[e] = na - (total_cap - caps[e])
        nopts = 0
        for p in range(P):
            if kills[e * P + p] >= need[e]:
                nopts += 1
        if nopts == 0:
            return 0
        if nopts < best_nopts:
            best_e = e
            best_nopts = nopts
    if is_root:
        # first remaining edge; conjugacy representatives only
        for e in range(ctx.r):
            if (remaining >> e) & 1:
                best_e = e
                break
    cdef unsigned long long *child = ctx.alive_stack + (depth + 1) * nwords
    cdef unsigned long long *kids = ctx.child_buf + depth * P * nwords
    cdef unsigned int rem2 = remaining & ~(1u << best_e)
    cdef int used[720]
    for p in range(P):
        used[p] = 0
    cdef int t, bestp, bestkill, res, nkids = 0, j, dup
    for t in range(P):
        bestp = -1
        bestkill = -1
        for p in range(P):
            if used[p]:
                continue
            if kills[best_e * P + p] < need[best_e]:
                continue
            if is_root and not ctx.in_pool[p]:
                continue
            if kills[best_e * P + p] > bestkill:
                bestp = p
                bestkill = kills[best_e * P + p]
        if bestp < 0:
            break
        used[bestp] = 1
        for w in range(nwords):
            child[w] = alive[w]
        for a in range(k):
            cell = ctx.cells + ((best_e * k + a) * k + ctx.perms[bestp * k + a]) * nwords
            for w in range(nwords):
                child[w] &= ~cell[w]
        # skip children identical to an already-explored sibling
        dup = 0
        for j in range(nkids):
            dup = 1
            for w in range(nwords):
                if kids[j * nwords + w] != child[w]:
                    dup = 0
                    break
            if dup:
                break
        if dup:
            continue
        for w in range(nwords):
            kids[nkids * nwords + w] = child[w]
        nkids += 1
        res = _rec_search(ctx, depth + 1, child, rem2, 0)
        if res == 1:
            ctx.choice[best_e] = bestp
            return 1
        if res == -1:
            return -1
    return 0


def assignment_search(int k, int nwords, alive0, int r, cells, int P, perms,
                      pool, long long budget):
    """Search for an assignment of matchings killing every coloring.

    Returns (status, choice, nodes) with status "found", "none" or
    "budget"; choice maps free-edge positions to perm indices (-1 keeps the
    identity, possible when the alive set empties early).
    """
    if k > 6 or r > 31 or P > 720:
        raise ValueError("instance outside compiled-kernel limits")
    cdef ACtx ctx
    ctx.k = k
    ctx.nwords = nwords
    ctx.r = r
    ctx.P = P
    ctx.nodes = 0
    ctx.budget = budget
    ctx.cells = <unsigned long long *> malloc(max(r * k * k * nwords, 1) * sizeof(unsigned long long))
    ctx.perms = <int *> malloc(P * k * sizeof(int))
    ctx.choice = <int *> malloc(max(r, 1) * sizeof(int))
    ctx.in_pool = <unsigned char *> malloc(P * sizeof(unsigned char))
    ctx.alive_stack = <unsigned long long *> malloc((r + 2) * nwords * sizeof(unsigned long long))
    ctx.child_buf = <unsigned long long *> malloc((r + 2) * P * nwords * sizeof(unsigned long long))
    ctx.kills_buf = <int *> malloc((r + 2) * max(r, 1) * P * sizeof(int))
    cdef int i
    try:
        for i in range(r * k * k * nwords):
            ctx.cells[i] = cells[i]
        for i in range(P * k):
            ctx.perms[i] = perms[i]
        for i in range(r):
            ctx.choice[i] = -1
        for i in range(P):
            ctx.in_pool[i] = 0
        for i in pool:
            ctx.in_pool[i] = 1
        for i in range(nwords):
            ctx.alive_stack[i] = alive0[i]
        res = _rec_search(&ctx, 0, ctx.alive_stack, (1u << r) - 1 if r else 0, 1)
        if res == 1:
            return "found", [ctx.choice[i] for i in range(r)], ctx.nodes
        if res == 0:
            return "none", None, ctx.nodes
        return "budget", None, ctx.nodes
    finally:
        free(ctx.cells)
        free(ctx.perms)
        free(ctx.choice)
        free(ctx.in_pool)
        free(ctx.alive_stack)
        free(ctx.child_buf)
        free(ctx.kills_buf)
