"""Code objects: binary inner codes, outer codes over GF(2^k0), concatenation.

Conventions fixed here and used everywhere else:

* Generator matrices are message-on-left: a message is a row vector and the
  codeword is ``m @ G``, so a k-dimensional length-n code has a k x n
  generator.
* The derived multiset Omega of a concatenated code lists, in column order,
  the columns of the inner generator read as GF(2^k0) elements through the
  self-dual basis.  (In the transposed n0 x k0 view of the inner generator
  these are its rows.)  Omega keeps duplicates and order: the bias statistic
  sums over it with multiplicity.
* Concatenated codeword bits are packed alpha-major: bit alpha * n0 + beta is
  bit beta of the inner encoding of outer symbol alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .field import FieldCtx
from .linalg import BitMatrix, FieldMatrix, nullspace_basis, rank
from .rng import SplitMix64


@dataclass(frozen=True)
class BinaryCode:
    """A binary linear [n0, k0] code given by a full-rank k0 x n0 generator."""

    gen: BitMatrix

    def __post_init__(self):
        if rank(self.gen) != self.gen.nrows:
            raise ValueError("generator matrix is not full rank")

    @property
    def n0(self) -> int:
        return self.gen.cols

    @property
    def k0(self) -> int:
        return self.gen.nrows

    @property
    def rate(self) -> float:
        return self.k0 / self.n0

    def encode(self, msg_bits: int) -> int:
        """Codeword of a k0-bit message (XOR of the selected generator rows)."""
        cw = 0
        for i, row in enumerate(self.gen.rows):
            if (msg_bits >> i) & 1:
                cw ^= row
        return cw

    def dual(self) -> BitMatrix:
        """Generator of the dual code, one basis row per dual dimension."""
        return nullspace_basis(self.gen, "right")


@dataclass(frozen=True)
class OuterCode:
    """A linear [n, k] code over GF(2^k0), full-rank k x n generator."""

    gen: FieldMatrix

    def __post_init__(self):
        if rank(self.gen) != self.gen.nrows:
            raise ValueError("generator matrix is not full rank")

    @property
    def ctx(self) -> FieldCtx:
        return self.gen.ctx

    @property
    def n(self) -> int:
        return self.gen.cols

    @property
    def k(self) -> int:
        return self.gen.nrows

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, msg: Sequence[int]) -> Tuple[int, ...]:
        """Codeword of a length-k message over the field."""
        if len(msg) != self.k:
            raise ValueError(f"message length {len(msg)} != k={self.k}")
        ctx = self.ctx
        out = [0] * self.n
        for mi, row in zip(msg, self.gen.rows):
            if mi:
                for a in range(self.n):
                    if row[a]:
                        out[a] ^= ctx.mul(mi, row[a])
        return tuple(out)

    def dual_membership(self, x: Sequence[int]) -> bool:
        """True iff x is orthogonal to every generator row (x in the dual code)."""
        if len(x) != self.n:
            raise ValueError(f"vector length {len(x)} != n={self.n}")
        ctx = self.ctx
        for row in self.gen.rows:
            s = 0
            for g, c in zip(row, x):
                if g and c:
                    s ^= ctx.mul(g, c)
            if s != 0:
                return False
        return True


@dataclass(frozen=True)
class ConcatCode:
    """outer . inner: outer over GF(2^k0) whose symbols are inner-encoded."""

    outer: OuterCode
    inner: BinaryCode

    def __post_init__(self):
        if self.inner.k0 != self.outer.ctx.k0:
            raise ValueError(
                f"alphabet mismatch: inner k0={self.inner.k0}, "
                f"outer field degree={self.outer.ctx.k0}"
            )

    @property
    def ctx(self) -> FieldCtx:
        return self.outer.ctx

    @property
    def N(self) -> int:
        return self.outer.n * self.inner.n0

    @property
    def K(self) -> int:
        return self.outer.k * self.inner.k0

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def omega(self) -> Tuple[int, ...]:
        """The derived multiset: inner generator columns as field elements."""
        ctx = self.ctx
        return tuple(
            ctx.from_coords(self.inner.gen.column(beta))
            for beta in range(self.inner.n0)
        )

    def encode(self, msg: Sequence[int]) -> int:
        """Concatenated codeword of a message in GF(2^k0)^k, as an N-bit int."""
        ctx = self.ctx
        n0 = self.inner.n0
        word = 0
        for alpha, sym in enumerate(self.outer.encode(msg)):
            if sym:
                word |= self.inner.encode(ctx.coords(sym)) << (alpha * n0)
        return word

    def message_basis_words(self) -> List[int]:
        """Codewords of the K single-bit messages; the concat map is GF(2)-linear,
        so every codeword is an XOR of these."""
        k0 = self.inner.k0
        words = []
        for i in range(self.outer.k):
            for j in range(k0):
                msg = [0] * self.outer.k
                msg[i] = self.ctx.from_coords(1 << j)
                words.append(self.encode(msg))
        return words


def encode_concat(cc: ConcatCode, msg: Sequence[int]) -> int:
    return cc.encode(msg)


def bias(cc: ConcatCode, msg: Sequence[int]) -> int:
    """The bias X_m: (#zeros - #ones) of the concatenated codeword.

    Evaluated from its defining double sum over outer coordinates and Omega,
    using Tr(symbol * b) as the GF(2) inner product; the encoding path is not
    involved, which lets tests cross-check this against the weight identity
    weight = (N - X_m) / 2.
    """
    ctx = cc.ctx
    omega = cc.omega
    n0 = cc.inner.n0
    x = 0
    for sym in cc.outer.encode(msg):
        ones = 0
        for b in omega:
            ones += ctx.trace(ctx.mul(sym, b))
        x += n0 - 2 * ones
    return x


@dataclass(frozen=True)
class WeightDistribution:
    """delta[j] = number of codewords of Hamming weight j, j = 0..length."""

    delta: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.delta) - 1

    @property
    def total(self) -> int:
        return sum(self.delta)


def _basis_words_and_length(code: BinaryCode | ConcatCode):
    if isinstance(code, BinaryCode):
        return list(code.gen.rows), code.n0
    if isinstance(code, ConcatCode):
        return code.message_basis_words(), code.N
    raise TypeError(f"unsupported code type {type(code).__name__}")


def _gray_weights(words: List[int], length: int, start: int, stop: int):
    """Yield (counter, weight) for codewords of Gray-ordered message counters
    in [start, stop).  Counter 0 is the zero message."""
    if start >= stop:
        return
    cw = 0
    prev = 0
    if start > 0:
        g = start ^ (start >> 1)
        for i in range(len(words)):
            if (g >> i) & 1:
                cw ^= words[i]
        prev = g
    yield start, cw.bit_count()
    for t in range(start + 1, stop):
        g = t ^ (t >> 1)
        diff = g ^ prev
        cw ^= words[(diff & -diff).bit_length() - 1]
        prev = g
        yield t, cw.bit_count()


def weight_distribution(
    code: BinaryCode | ConcatCode,
    budget: int = 1 << 24,
    msg_range: Tuple[int, int] | None = None,
) -> WeightDistribution:
    """Exact weight enumerator by Gray-code iteration over all messages.

    ``msg_range`` restricts the scan to a range of message counters so callers
    can shard the enumeration; partial results merge by adding the delta
    arrays (the zero message sits at counter 0 of the first shard).
    """
    words, length = _basis_words_and_length(code)
    size = 1 << len(words)
    if size > budget:
        raise ValueError(f"code size {size} exceeds budget {budget}")
    start, stop = (0, size) if msg_range is None else msg_range
    if not 0 <= start <= stop <= size:
        raise ValueError(f"invalid message range {msg_range}")
    counts = [0] * (length + 1)
    for _, w in _gray_weights(words, length, start, stop):
        counts[w] += 1
    return WeightDistribution(tuple(counts))


def min_distance(
    code: BinaryCode | ConcatCode,
    mode: str = "exact",
    budget: int = 1 << 24,
    seed: int = 0,
    msg_range: Tuple[int, int] | None = None,
) -> Tuple[int, bool]:
    """Minimum nonzero codeword weight.

    exact: full Gray-code enumeration (requires code size <= budget); returns
    (distance, True).  montecarlo: minimum over `budget` random nonzero
    codewords, an upper bound on the distance; returns (value, False).
    """
    words, length = _basis_words_and_length(code)
    if mode == "exact":
        size = 1 << len(words)
        if size > budget:
            raise ValueError(f"code size {size} exceeds budget {budget}")
        start, stop = (0, size) if msg_range is None else msg_range
        if not 0 <= start <= stop <= size:
            raise ValueError(f"invalid message range {msg_range}")
        best = length + 1
        for t, w in _gray_weights(words, length, start, stop):
            if t and w < best:
                best = w
        return best, True
    if mode == "montecarlo":
        rng = SplitMix64(seed)
        dim = len(words)
        best = length + 1
        for _ in range(budget):
            m = 0
            while m == 0:
                m = rng.bits(dim)
            cw = 0
            for i in range(dim):
                if (m >> i) & 1:
                    cw ^= words[i]
            w = cw.bit_count()
            if w < best:
                best = w
        return best, False
    raise ValueError(f"unknown mode {mode!r}")


def outer_min_distance(outer: OuterCode, budget: int = 1 << 24) -> int:
    """Exact minimum symbol weight of the outer code, by message enumeration."""
    q = outer.ctx.q
    if q**outer.k > budget:
        raise ValueError("outer code too large for exact distance")
    best = outer.n + 1
    for counter in range(1, q**outer.k):
        msg = []
        c = counter
        for _ in range(outer.k):
            msg.append(c % q)
            c //= q
        w = sum(1 for s in outer.encode(msg) if s)
        if w < best:
            best = w
    return best


def outer_dual_membership(outer: OuterCode, x: Sequence[int]) -> bool:
    return outer.dual_membership(x)


def all_messages(outer: OuterCode) -> Iterable[Tuple[int, ...]]:
    """All q^k messages of the outer code, zero first, in odometer order."""
    q = outer.ctx.q
    k = outer.k
    msg = [0] * k
    yield tuple(msg)
    for _ in range(q**k - 1):
        i = 0
        while msg[i] == q - 1:
            msg[i] = 0
            i += 1
        msg[i] += 1
        yield tuple(msg)
