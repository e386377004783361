"""Alternation-free word families and their layered path graphs.

Words are tuples over the alphabet 0..n-1.  A family is scanned for an
"alternation": indices a < b < c and a window u < v where all three words
have equal prefix sums (mod n) at u, equal prefix sums at v or v at the very
end, and the window of word a equals that of word c but not that of word b.
Words map to paths in layered shift graphs; vertex position within a layer
is the running prefix sum, which makes the word-level and path-level
alternation notions coincide and tests exploit that.

The doubling family: starting from each base-n digit string of length
`levels` (least significant digit first), fold by inserting the next digit
after every symbol of the word so far.  The resulting n^levels words of
length 2^(levels-1) are alternation-free.  The binary expansion maps each
symbol i to 1^i 0^(n-1-i), giving binary words that stay alternation-free
with respect to the same modulus.
"""

from __future__ import annotations

from .exact import AffineForm
from .graph import Edge, ParametricGraph, _maximal_runs

Word = tuple[int, ...]


def word_weight(word: Word, n: int) -> int:
    """Sum of symbols mod n."""
    return sum(word) % n


def interleave_after(word: Word, symbol: int) -> Word:
    """Insert `symbol` after every symbol of `word` (doubles the length)."""
    out = []
    for s in word:
        out.append(s)
        out.append(symbol)
    return tuple(out)


def _digits(value: int, n: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        value, digit = divmod(value, n)
        out.append(digit)
    return out


def doubling_words(n: int, levels: int) -> list[Word]:
    """The n^levels doubling words of length 2^(levels-1)."""
    if n < 2 or levels < 1:
        raise ValueError("need n >= 2 and levels >= 1")
    words = []
    for i in range(n**levels):
        digits = _digits(i, n, levels)
        word: Word = (digits[0],)
        for d in digits[1:]:
            word = interleave_after(word, d)
        words.append(word)
    return words


def binary_expanded_words(n: int, levels: int) -> list[Word]:
    """Doubling words with each symbol i expanded to 1^i 0^(n-1-i)."""
    blocks = {i: (1,) * i + (0,) * (n - 1 - i) for i in range(n)}
    out = []
    for word in doubling_words(n, levels):
        expanded: list[int] = []
        for s in word:
            expanded.extend(blocks[s])
        out.append(tuple(expanded))
    return out


def _mask(lo: int, hi: int) -> int:
    """Bits lo..hi inclusive."""
    if hi < lo:
        return 0
    return (1 << (hi + 1)) - (1 << lo)


def find_alternation(words, n: int) -> tuple[int, int, int, int, int] | None:
    """First alternation in an ordered same-length word family, or None.

    Returns (a, b, c, u, v): word indices a < b < c and the prefix window
    [u, v).  Scans triples in lexicographic order using per-pair equality
    bitmasks; within a triple the witness window is the one around the
    leftmost usable symbol difference.
    """
    words = [tuple(w) for w in words]
    if not words:
        return None
    length = len(words[0])
    for w in words:
        if len(w) != length:
            raise ValueError("words must share one length")
        if any(not 0 <= s < n for s in w):
            raise ValueError("symbol out of range")
    if len(words) < 3 or length == 0:
        return None

    count = len(words)
    prefixes = []
    for w in words:
        acc = 0
        pref = [0]
        for s in w:
            acc = (acc + s) % n
            pref.append(acc)
        prefixes.append(pref)

    eq_sym = [[0] * count for _ in range(count)]
    eq_pre = [[0] * count for _ in range(count)]
    for i in range(count):
        for k in range(i + 1, count):
            ms = 0
            for p in range(length):
                if words[i][p] == words[k][p]:
                    ms |= 1 << p
            mp = 0
            for p in range(length + 1):
                if prefixes[i][p] == prefixes[k][p]:
                    mp |= 1 << p
            eq_sym[i][k] = ms
            eq_pre[i][k] = mp

    full_sym = (1 << length) - 1
    runs_cache: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for a in range(count):
        for b in range(a + 1, count):
            diff_ab = full_sym ^ eq_sym[a][b]
            if not diff_ab:
                continue
            pre_ab = eq_pre[a][b]
            for c in range(b + 1, count):
                all_pre = pre_ab & eq_pre[a][c]
                key = (a, c)
                if key not in runs_cache:
                    runs_cache[key] = _maximal_runs(eq_sym[a][c])
                for s, e, _ in runs_cache[key]:
                    starts = all_pre & _mask(s, e)
                    if not starts:
                        continue
                    ends = (all_pre | (1 << length)) & _mask(s + 1, e + 1)
                    if not ends:
                        continue
                    u_min = (starts & -starts).bit_length() - 1
                    v_max = ends.bit_length() - 1
                    hits = diff_ab & _mask(u_min, v_max - 1)
                    if not hits:
                        continue
                    d = (hits & -hits).bit_length() - 1
                    u = (starts & ((1 << (d + 1)) - 1)).bit_length() - 1
                    above = ends & ~((1 << (d + 1)) - 1)
                    v = (above & -above).bit_length() - 1
                    return (a, b, c, u, v)
    return None


def is_alternation_free(words, n: int) -> bool:
    return find_alternation(words, n) is None


def _layered_graph(n: int, layers: int, shifts) -> ParametricGraph:
    """s, then `layers` columns of n vertices, then t; edges step one column
    and move the row index by a shift mod n.  All weights are zero."""
    if n < 2 or layers < 1:
        raise ValueError("need n >= 2 and layers >= 1")
    zero = AffineForm(0, 0)
    total = 2 + n * layers
    sink = total - 1

    def vid(row: int, col: int) -> int:
        return 1 + col * n + row

    edges = [Edge(0, vid(i, 0), zero) for i in range(n)]
    for col in range(layers - 1):
        for row in range(n):
            for shift in shifts:
                edges.append(Edge(vid(row, col), vid((row + shift) % n, col + 1), zero))
    for row in range(n):
        edges.append(Edge(vid(row, layers - 1), sink, zero))
    layer_index = [0] + [col + 1 for col in range(layers) for _ in range(n)] + [layers + 1]
    return ParametricGraph(total, 0, sink, edges, layers=layer_index)


def complete_layered_graph(n: int, layers: int) -> ParametricGraph:
    """All shifts allowed: consecutive columns are completely joined."""
    return _layered_graph(n, layers, range(n))


def cyclic_shift_graph(n: int, layers: int) -> ParametricGraph:
    """Shifts 0 and 1 only (drawable on a cylinder without crossings)."""
    return _layered_graph(n, layers, (0, 1))


def word_to_path(word: Word, n: int) -> tuple[int, ...]:
    """Path taken by a word: row index is the running prefix sum mod n.

    Vertex ids follow the layered layout of `complete_layered_graph` /
    `cyclic_shift_graph` with len(word) columns.
    """
    if not word:
        raise ValueError("empty word")
    if any(not 0 <= s < n for s in word):
        raise ValueError("symbol out of range")
    layers = len(word)
    path = [0]
    row = 0
    for col, s in enumerate(word):
        row = (row + s) % n
        path.append(1 + col * n + row)
    path.append(1 + layers * n)
    return tuple(path)


def is_davenport_schinzel(seq, order: int) -> bool:
    """No immediate repeats; no two symbols alternating order+2 times."""
    if order < 1:
        raise ValueError("order must be >= 1")
    seq = list(seq)
    for x, y in zip(seq, seq[1:]):
        if x == y:
            return False
    positions: dict[object, list[int]] = {}
    for idx, s in enumerate(seq):
        positions.setdefault(s, []).append(idx)
    symbols = list(positions)
    for i, a in enumerate(symbols):
        pa = positions[a]
        for b in symbols[i + 1 :]:
            merged = sorted(pa + positions[b])
            blocks = 0
            last = None
            for idx in merged:
                if seq[idx] != last:
                    blocks += 1
                    last = seq[idx]
            if blocks >= order + 2:
                return False
    return True


def ackermann(m: int, x: int) -> int:
    """Two-argument Ackermann by the plain recursion (small arguments only)."""
    if m < 0 or x < 0:
        raise ValueError("arguments must be nonnegative")
    cache: dict[tuple[int, int], int] = {}

    def rec(mm: int, xx: int) -> int:
        if mm == 0:
            return xx + 1
        key = (mm, xx)
        if key in cache:
            return cache[key]
        if xx == 0:
            val = rec(mm - 1, 1)
        else:
            val = rec(mm - 1, rec(mm, xx - 1))
        cache[key] = val
        return val

    return rec(m, x)


def _ackermann_capped(m: int, x: int, cap: int) -> int:
    """min(A(m, x), cap) without computing astronomically past the cap.

    Closed forms for the bottom rows (A(1,x) = x+2, A(2,x) = 2x+3) keep the
    iteration count proportional to log(cap) at row 3 and above.
    """
    if m == 0:
        return min(x + 1, cap)
    if m == 1:
        return min(x + 2, cap)
    if m == 2:
        return min(2 * x + 3, cap)
    val = _ackermann_capped(m - 1, 1, cap)
    for _ in range(x):
        if val >= cap:
            return cap
        val = _ackermann_capped(m - 1, val, cap)
    return min(val, cap)


def inverse_ackermann(n: int) -> int:
    """Least r with A(r, r) >= n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = 0
    while _ackermann_capped(r, r, n) < n:
        r += 1
    return r
