# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-BFS kernels; mirrors ``_pykernels`` exactly."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset

BUDGET_EXCEEDED = -2


cdef inline bint is_single(unsigned int m) nogil:
    return (m & (m - 1)) == 0


cdef inline int low_index(unsigned int m) nogil:
    cdef int i = 0
    while not (m & 1):
        m >>= 1
        i += 1
    return i


cdef class SyncKernel:
    """Shortest-synchronizing-word queries over a fixed pool of DFA symbols."""

    cdef public int n
    cdef public int size
    cdef unsigned short *tables      # size * 2^n subset images
    cdef unsigned char *seen
    cdef unsigned int *queue
    cdef unsigned int *par_set
    cdef int *par_sym
    cdef int *sel

    def __cinit__(self, maps, int n):
        cdef int k = len(maps)
        cdef int nsub = 1 << n
        cdef int i, m, low
        cdef unsigned short *t
        self.n = n
        self.size = k
        self.tables = <unsigned short *> malloc(max(k, 1) * nsub * sizeof(unsigned short))
        self.seen = <unsigned char *> malloc(nsub)
        self.queue = <unsigned int *> malloc(nsub * sizeof(unsigned int))
        self.par_set = <unsigned int *> malloc(nsub * sizeof(unsigned int))
        self.par_sym = <int *> malloc(nsub * sizeof(int))
        self.sel = <int *> malloc((max(k, 1) + 1) * sizeof(int))
        if not (self.tables and self.seen and self.queue and self.par_set
                and self.par_sym and self.sel):
            raise MemoryError()
        for i in range(k):
            targets = maps[i]
            t = self.tables + i * nsub
            t[0] = 0
            for m in range(1, nsub):
                low = low_index(m)
                t[m] = t[m & (m - 1)] | (1 << <int> targets[low])

    def __dealloc__(self):
        free(self.tables)
        free(self.seen)
        free(self.queue)
        free(self.par_set)
        free(self.par_sym)
        free(self.sel)

    cdef int _load(self, indices) except -1:
        cdef int j = 0
        for i in indices:
            if i < 0 or i >= self.size:
                raise IndexError(i)
            if j >= self.size:
                raise ValueError("more indices than pool symbols")
            self.sel[j] = i
            j += 1
        return j

    cdef int _length(self, int count) nogil:
        cdef int nsub = 1 << self.n
        cdef unsigned int full = nsub - 1
        cdef int head = 0, tail = 0, level_end, dist = 0, j
        cdef unsigned int s, r
        if is_single(full):
            return 0
        memset(self.seen, 0, nsub)
        self.seen[full] = 1
        self.queue[tail] = full
        tail += 1
        while head < tail:
            dist += 1
            level_end = tail
            while head < level_end:
                s = self.queue[head]
                head += 1
                for j in range(count):
                    r = self.tables[self.sel[j] * nsub + s]
                    if not self.seen[r]:
                        if is_single(r):
                            return dist
                        self.seen[r] = 1
                        self.queue[tail] = r
                        tail += 1
        return -1

    def length(self, indices):
        cdef int count = self._load(indices)
        return self._length(count)

    def search(self, indices):
        cdef int count = self._load(indices)
        cdef int nsub = 1 << self.n
        cdef unsigned int full = nsub - 1
        cdef int head = 0, tail = 0, j
        cdef unsigned int s, r, cur
        if is_single(full):
            return 0, [], 0
        memset(self.seen, 0, nsub)
        self.seen[full] = 1
        self.queue[tail] = full
        tail += 1
        while head < tail:
            s = self.queue[head]
            head += 1
            for j in range(count):
                r = self.tables[self.sel[j] * nsub + s]
                if self.seen[r]:
                    continue
                self.seen[r] = 1
                self.par_set[r] = s
                self.par_sym[r] = j
                if is_single(r):
                    word = []
                    cur = r
                    while cur != full:
                        word.append(self.sel[self.par_sym[cur]])
                        cur = self.par_set[cur]
                    word.reverse()
                    return len(word), word, low_index(r)
                self.queue[tail] = r
                tail += 1
        return -1, None, -1

    def filter(self, base, candidates, int target):
        cdef int count = self._load(base)
        cdef int d
        out = []
        for c in candidates:
            if c < 0 or c >= self.size:
                raise IndexError(c)
            self.sel[count] = c
            d = self._length(count + 1)
            if d < 0 or d >= target:
                out.append(c)
        return out


def choice_images(images, unsigned int s, int n, long long budget):
    cdef int nsub = 1 << n
    cdef unsigned int *imgs = <unsigned int *> malloc(n * sizeof(unsigned int))
    cdef unsigned int *a = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef unsigned int *b = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef unsigned int *stamp = <unsigned int *> calloc(nsub, sizeof(unsigned int))
    cdef unsigned int gen = 0
    cdef int count = 0, i
    cdef unsigned int *res
    try:
        for i in range(n):
            imgs[i] = images[i]
        res = _choice_core(imgs, s, a, b, stamp, &gen, budget, &count)
        if res == NULL:
            return None
        return [res[i] for i in range(count)]
    finally:
        free(imgs)
        free(a)
        free(b)
        free(stamp)


cdef unsigned int *_choice_core(unsigned int *images, unsigned int s,
                                unsigned int *cur, unsigned int *nxt,
                                unsigned int *stamp, unsigned int *gen,
                                long long budget, int *out_count) nogil:
    """Distinct choice images of ``s``; returns the buffer holding them or NULL."""
    cdef int ncur = 1, nnext, i, q = 0
    cdef unsigned int img, m, low, part, r
    cdef unsigned int *tmp
    cdef long long work = 0
    cur[0] = 0
    while s:
        if s & 1:
            img = images[q]
            gen[0] += 1
            nnext = 0
            for i in range(ncur):
                part = cur[i]
                m = img
                while m:
                    low = m & (~m + 1)
                    m ^= low
                    r = part | low
                    if stamp[r] != gen[0]:
                        stamp[r] = gen[0]
                        nxt[nnext] = r
                        nnext += 1
            work += nnext
            if work > budget:
                return NULL
            tmp = cur
            cur = nxt
            nxt = tmp
            ncur = nnext
        s >>= 1
        q += 1
    out_count[0] = ncur
    return cur


def nfa_search(symbols, int n, long long budget):
    cdef int k = len(symbols)
    cdef int nsub = 1 << n
    cdef unsigned int full = nsub - 1
    cdef unsigned int *imgs = <unsigned int *> malloc(max(k, 1) * n * sizeof(unsigned int))
    cdef unsigned int *a = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef unsigned int *b = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef unsigned int *stamp = <unsigned int *> calloc(nsub, sizeof(unsigned int))
    cdef unsigned char *seen = <unsigned char *> calloc(nsub, 1)
    cdef unsigned int *queue = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef unsigned int *par_set = <unsigned int *> malloc(nsub * sizeof(unsigned int))
    cdef int *par_sym = <int *> malloc(nsub * sizeof(int))
    cdef unsigned int gen = 0
    cdef int head = 0, tail = 0, j, i, count
    cdef unsigned int s, r, cur
    cdef unsigned int *res
    try:
        if not (imgs and a and b and stamp and seen and queue and par_set and par_sym):
            raise MemoryError()
        for j in range(k):
            for i in range(n):
                imgs[j * n + i] = symbols[j][i]
        if is_single(full):
            return 0, [], 0
        seen[full] = 1
        queue[tail] = full
        tail += 1
        while head < tail:
            s = queue[head]
            head += 1
            for j in range(k):
                res = _choice_core(imgs + j * n, s, a, b, stamp, &gen, budget, &count)
                if res == NULL:
                    return BUDGET_EXCEEDED, None, -1
                for i in range(count):
                    r = res[i]
                    if seen[r]:
                        continue
                    seen[r] = 1
                    par_set[r] = s
                    par_sym[r] = j
                    if is_single(r):
                        word = []
                        cur = r
                        while cur != full:
                            word.append(par_sym[cur])
                            cur = par_set[cur]
                        word.reverse()
                        return len(word), word, low_index(r)
                    queue[tail] = r
                    tail += 1
        return -1, None, -1
    finally:
        free(imgs)
        free(a)
        free(b)
        free(stamp)
        free(seen)
        free(queue)
        free(par_set)
        free(par_sym)
