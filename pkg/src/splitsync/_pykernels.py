"""Pure-Python subset-BFS kernels; same API as the compiled ``_ckernels``."""

from collections import deque

BUDGET_EXCEEDED = -2


def _subset_table(targets, n):
    size = 1 << n
    table = [0] * size
    for m in range(1, size):
        low = m & -m
        table[m] = table[m ^ low] | (1 << targets[low.bit_length() - 1])
    return table


def _is_single(m):
    return m & (m - 1) == 0


class SyncKernel:
    """Shortest-synchronizing-word queries over a fixed pool of DFA symbols.

    ``maps[i]`` holds the 0-based targets of symbol ``i``; queries name
    symbols by pool index. Image tables over all subsets are built once.
    """

    def __init__(self, maps, n):
        self.n = n
        self.size = len(maps)
        self._tables = [_subset_table(list(t), n) for t in maps]

    def length(self, indices):
        """Length of a shortest synchronizing word, or -1 if there is none."""
        n = self.n
        full = (1 << n) - 1
        if _is_single(full):
            return 0
        tables = [self._tables[i] for i in indices]
        seen = bytearray(1 << n)
        seen[full] = 1
        frontier = [full]
        dist = 0
        while frontier:
            dist += 1
            nxt = []
            for s in frontier:
                for t in tables:
                    r = t[s]
                    if not seen[r]:
                        if _is_single(r):
                            return dist
                        seen[r] = 1
                        nxt.append(r)
            frontier = nxt
        return -1

    def search(self, indices):
        """``(length, word, state)``; ``word`` lists pool indices, ``state`` is 0-based."""
        indices = list(indices)
        n = self.n
        full = (1 << n) - 1
        if _is_single(full):
            return 0, [], 0
        tables = [self._tables[i] for i in indices]
        parent = {full: None}
        queue = deque([full])
        while queue:
            s = queue.popleft()
            for pos, t in enumerate(tables):
                r = t[s]
                if r in parent:
                    continue
                parent[r] = (s, pos)
                if _is_single(r):
                    word = []
                    cur = r
                    while parent[cur] is not None:
                        prev, p = parent[cur]
                        word.append(indices[p])
                        cur = prev
                    word.reverse()
                    return len(word), word, r.bit_length() - 1
                queue.append(r)
        return -1, None, -1

    def filter(self, base, candidates, target):
        """Candidates ``c`` with ``length(base + [c])`` either -1 or ``>= target``."""
        base = list(base)
        out = []
        for c in candidates:
            d = self.length(base + [c])
            if d < 0 or d >= target:
                out.append(c)
        return out


def choice_images(images, s, n, budget):
    """All sets ``{f(q) : q in s}`` with ``f(q)`` drawn from ``images[q]``.

    Returns ``None`` when more than ``budget`` partial sets are generated.
    """
    cur = [0]
    work = 0
    q = 0
    while s:
        if s & 1:
            img = images[q]
            seen = set()
            nxt = []
            for part in cur:
                m = img
                while m:
                    low = m & -m
                    m ^= low
                    r = part | low
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            work += len(nxt)
            if work > budget:
                return None
            cur = nxt
        s >>= 1
        q += 1
    return cur


def nfa_search(symbols, n, budget):
    """BFS over subsets of a CNFA under all deterministic sub-symbols.

    ``symbols[i]`` is a tuple of image bitmasks. Returns ``(length, word,
    state)`` with ``word`` as symbol indices, ``(-1, None, -1)`` when no
    singleton is reachable, or ``(BUDGET_EXCEEDED, None, -1)``.
    """
    full = (1 << n) - 1
    if _is_single(full):
        return 0, [], 0
    parent = {full: None}
    queue = deque([full])
    while queue:
        s = queue.popleft()
        for pos, images in enumerate(symbols):
            succ = choice_images(images, s, n, budget)
            if succ is None:
                return BUDGET_EXCEEDED, None, -1
            for r in succ:
                if r in parent:
                    continue
                parent[r] = (s, pos)
                if _is_single(r):
                    word = []
                    cur = r
                    while parent[cur] is not None:
                        prev, p = parent[cur]
                        word.append(p)
                        cur = prev
                    word.reverse()
                    return len(word), word, r.bit_length() - 1
                queue.append(r)
    return -1, None, -1
