"""Certifiers for the three sufficient conditions, plus weight statistics.

* tau-niceness of the inner code: every weight class of the inner dual holds
  at most binom(n0, i) * 2^(-n0 (eps - tau)) codewords, eps = k0/n0.
* soft-decoding condition on the outer code: the probability that an i.i.d.
  product of the sparse-combination distribution lands in the nonzero dual,
  compared against 1/q^k.
* smooth min-entropy of outer codewords' empirical symbol distributions.

C_TILDE_DEFAULT = 4 ln 2 and C_DEFAULT = 128 sqrt(e) are the documented
defaults for the free constants; they come from worst-case analysis slack,
not tuning, so sweeps should treat them as knobs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .codes import BinaryCode, OuterCode, WeightDistribution, all_messages
from .field import FieldCtx
from .linalg import nullspace_basis
from .rng import SplitMix64

C_TILDE_DEFAULT = 4 * math.log(2)
C_DEFAULT = 128 * math.sqrt(math.e)


# ---------------------------------------------------------------------------
# Probability mass functions over the field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pmf:
    """A pmf over GF(2^k0), indexed by field element value."""

    ctx: FieldCtx
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) != self.ctx.q:
            raise ValueError(f"pmf needs {self.ctx.q} entries, got {len(self.probs)}")
        if any(p < 0 for p in self.probs):
            raise ValueError("pmf entries must be nonnegative")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"pmf sums to {sum(self.probs)!r}, not 1")
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    def __getitem__(self, element: int) -> float:
        return self.probs[element]


def d_pmf(ctx: FieldCtx, omega: Sequence[int], p: float) -> Pmf:
    """Exact law of sum(zeta_b * b for b in omega), zeta_b i.i.d. Bernoulli(p).

    Sequential convolution over omega; field addition is XOR of values.
    Accumulation order is fixed (omega order) so results are bit-stable.
    """
    if not 0 <= p <= 0.5:
        raise ValueError(f"p={p} outside [0, 1/2]")
    if not omega:
        raise ValueError("omega must be nonempty")
    probs = [0.0] * ctx.q
    probs[0] = 1.0
    for b in omega:
        if b == 0:
            continue  # zeta * 0 never moves mass
        new = [0.0] * ctx.q
        for v, pv in enumerate(probs):
            if pv:
                new[v] += (1 - p) * pv
                new[v ^ b] += p * pv
        probs = new
    return Pmf(ctx, tuple(probs))


def bernoulli_p(c_tilde: float, eps: float) -> float:
    """The Bernoulli parameter (1 - e^(-2 c~ eps^2)) / 2 of the distribution D."""
    return (1.0 - math.exp(-2.0 * c_tilde * eps * eps)) / 2.0


def sample_d(ctx: FieldCtx, omega: Sequence[int], p: float, seed: int) -> int:
    """One draw from the distribution computed by :func:`d_pmf`."""
    return sample_d_many(ctx, omega, p, seed, 1)[0]


def sample_d_many(
    ctx: FieldCtx, omega: Sequence[int], p: float, seed: int, count: int
) -> List[int]:
    """`count` i.i.d. draws from one seeded stream."""
    if not 0 <= p <= 0.5:
        raise ValueError(f"p={p} outside [0, 1/2]")
    rng = SplitMix64(seed)
    out = []
    for _ in range(count):
        acc = 0
        for b in omega:
            if rng.uniform() < p:
                acc ^= b
        out.append(acc)
    return out


def sample_pmf_many(pmf: Pmf, seed: int, count: int) -> List[int]:
    """Draws from an arbitrary pmf by CDF inversion (used by Monte Carlo modes)."""
    cdf = []
    acc = 0.0
    for p in pmf.probs:
        acc += p
        cdf.append(acc)
    cdf[-1] = 1.0
    rng = SplitMix64(seed)
    out = []
    for _ in range(count):
        u = rng.uniform()
        lo, hi = 0, len(cdf) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cdf[mid] > u:
                hi = mid
            else:
                lo = mid + 1
        out.append(lo)
    return out


# ---------------------------------------------------------------------------
# tau-niceness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NicenessReport:
    tau: float
    ok: bool
    per_weight: Tuple[Tuple[int, float], ...]  # (count, bound) for i = 1..n0
    worst_ratio: float

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "ok": self.ok,
            "per_weight": [[c, b] for c, b in self.per_weight],
            "worst_ratio": self.worst_ratio,
        }


def gf2_weight_counts(basis_rows: Sequence[int], n: int) -> List[int]:
    """Weight enumerator of the GF(2) span of basis_rows (all 2^dim words).

    Subset-XOR enumeration by doubling, vectorized; n must fit in 64 bits.
    """
    if n > 64:
        raise ValueError("vectorized enumeration supports n <= 64")
    arr = np.zeros(1, dtype=np.uint64)
    for b in basis_rows:
        arr = np.concatenate([arr, arr ^ np.uint64(b)])
    weights = np.bitwise_count(arr)
    counts = np.bincount(weights, minlength=n + 1)
    return [int(c) for c in counts]


def check_nice(inner: BinaryCode, tau: float, budget: int = 1 << 20) -> NicenessReport:
    """Exact tau-niceness check of the inner code by enumerating its dual."""
    n0, k0 = inner.n0, inner.k0
    eps = k0 / n0
    if not 0 < tau < eps:
        raise ValueError(f"tau={tau} outside (0, eps={eps})")
    dual_dim = n0 - k0
    if 1 << dual_dim > budget:
        raise ValueError(f"dual size 2^{dual_dim} exceeds budget {budget}")
    counts = gf2_weight_counts(list(inner.dual().rows), n0)
    scale = 2.0 ** (-n0 * (eps - tau))
    per_weight = []
    worst = 0.0
    ok = True
    for i in range(1, n0 + 1):
        bound = math.comb(n0, i) * scale
        count = counts[i]
        per_weight.append((count, bound))
        if count > bound:
            ok = False
        if bound > 0:
            worst = max(worst, count / bound)
    return NicenessReport(tau, ok, tuple(per_weight), worst)


# ---------------------------------------------------------------------------
# Soft-decoding condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SoftReport:
    prob: float
    delta: float
    is_exact: bool
    ci_low: float | None = None
    ci_high: float | None = None
    draws: int | None = None

    def as_dict(self) -> dict:
        return {
            "prob": self.prob,
            "delta": self.delta,
            "is_exact": self.is_exact,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "draws": self.draws,
        }


def _dual_generator(outer: OuterCode) -> "OuterCode | None":
    dual_gen = nullspace_basis(outer.gen, "right")
    if dual_gen.nrows == 0:
        return None
    return OuterCode(dual_gen)


def soft_condition(
    outer: OuterCode,
    pmf: Pmf,
    mode: str = "exact",
    budget: int = 1 << 20,
    seed: int = 0,
    msg_range: Tuple[int, int] | None = None,
) -> SoftReport:
    """Pr[x ~ pmf^n lands in the nonzero dual], and delta = prob * q^k - 1.

    exact: sums prod(pmf[g_alpha]) over all q^(n-k) dual codewords, in dual
    message index order (shardable via ``msg_range``, partial sums add).
    montecarlo: draws `budget` vectors x ~ pmf^n, tests dual membership, and
    returns a Wilson 95% confidence interval flagged is_exact=False.
    """
    if pmf.ctx != outer.ctx:
        raise ValueError("pmf field does not match outer code field")
    q = outer.ctx.q
    qk = q**outer.k
    if mode == "exact":
        dual = _dual_generator(outer)
        if dual is None:
            prob = 0.0
        else:
            size = q**dual.k
            if size > budget:
                raise ValueError(f"dual size {size} exceeds budget {budget}")
            start, stop = (0, size) if msg_range is None else msg_range
            prob = 0.0
            for counter in range(start, stop):
                msg = []
                c = counter
                for _ in range(dual.k):
                    msg.append(c % q)
                    c //= q
                if counter == 0:
                    continue  # exclude the zero dual codeword
                term = 1.0
                for sym in dual.encode(msg):
                    term *= pmf[sym]
                    if term == 0.0:
                        break
                prob += term
        return SoftReport(prob, prob * qk - 1.0, True)
    if mode == "montecarlo":
        rng_seed = seed
        draws = budget
        n = outer.n
        samples = sample_pmf_many(pmf, rng_seed, draws * n)
        hits = 0
        for t in range(draws):
            x = samples[t * n : (t + 1) * n]
            if any(x) and outer.dual_membership(x):
                hits += 1
        phat, lo, hi = wilson_interval(hits, draws)
        return SoftReport(phat, phat * qk - 1.0, False, lo, hi, draws)
    raise ValueError(f"unknown mode {mode!r}")


def wilson_interval(hits: int, trials: int, z: float = 1.959963984540054):
    """Wilson score 95% interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == trials else min(1.0, center + half)
    return phat, lo, hi


# ---------------------------------------------------------------------------
# Smoothed min-entropy
# ---------------------------------------------------------------------------


def empirical_dist(ctx: FieldCtx, codeword: Sequence[int]) -> Pmf:
    """Empirical symbol distribution of a word over the field."""
    n = len(codeword)
    if n == 0:
        raise ValueError("empty codeword")
    counts = [0] * ctx.q
    for sym in codeword:
        counts[sym] += 1
    return Pmf(ctx, tuple(c / n for c in counts))


def smooth_min_entropy(pmf: Pmf, eta: float, halved_tv: bool = True) -> float:
    """Best min-entropy within total-variation distance eta, in bits.

    Water-filling: the optimal smoothed distribution caps every probability at
    a level t and refills the trimmed mass below the cap, which costs TV
    distance sum(max(P - t, 0)) under the halved convention
    Delta_TV = 1/2 sum|P - Q|.  Binary-search the smallest feasible cap
    t >= 1/q; the entropy is -log2(t).  With the unhalved convention the same
    move costs twice as much, so the budget is eta / 2.
    """
    if not 0 <= eta < 1:
        raise ValueError(f"eta={eta} outside [0, 1)")
    budget = eta if halved_tv else eta / 2.0
    q = pmf.ctx.q
    probs = pmf.probs

    def excess(t: float) -> float:
        return sum(p - t for p in probs if p > t)

    lo = 1.0 / q
    hi = max(probs)
    if hi <= lo or excess(lo) <= budget:
        return math.log2(q)
    for _ in range(100):
        mid = (lo + hi) / 2
        if excess(mid) <= budget:
            hi = mid
        else:
            lo = mid
    return max(0.0, -math.log2(hi))


@dataclass(frozen=True)
class EntropyReport:
    eta: float
    threshold: float
    min_entropy: float
    ok: bool
    n_checked: int
    n0_ratio: float | None = None  # n0 * eps^2 / log2(1/eps), reported not asserted

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "threshold": self.threshold,
            "min_entropy": self.min_entropy,
            "ok": self.ok,
            "n_checked": self.n_checked,
            "n0_ratio": self.n0_ratio,
        }


def entropy_hypothesis(
    outer: OuterCode,
    cgamma: float,
    ceta: float,
    budget: int = 1 << 20,
    n0: int | None = None,
    halved_tv: bool = True,
) -> EntropyReport:
    """Check every nonzero codeword's smoothed min-entropy against the
    threshold (1 - cgamma * eps) * log2(q), with smoothing level ceta * eps
    and eps the outer rate."""
    ctx = outer.ctx
    q = ctx.q
    if q**outer.k > budget:
        raise ValueError(f"codeword count {q**outer.k} exceeds budget {budget}")
    eps = outer.k / outer.n
    eta = ceta * eps
    if not 0 <= eta < 1:
        raise ValueError(f"smoothing level ceta*eps = {eta} outside [0, 1)")
    threshold = (1.0 - cgamma * eps) * math.log2(q)
    min_entropy = math.inf
    n_checked = 0
    for msg in all_messages(outer):
        if not any(msg):
            continue
        c = outer.encode(msg)
        h = smooth_min_entropy(empirical_dist(ctx, c), eta, halved_tv)
        min_entropy = min(min_entropy, h)
        n_checked += 1
    ratio = None
    if n0 is not None and 0 < eps < 1:
        ratio = n0 * eps * eps / math.log2(1.0 / eps)
    return EntropyReport(eta, threshold, min_entropy, min_entropy >= threshold, n_checked, ratio)


# ---------------------------------------------------------------------------
# Weight-distribution statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightStats:
    T: int
    j_star: int
    alpha: float
    avg_weight_ratio: float
    next_slab_ratio: float

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "j_star": self.j_star,
            "alpha": self.alpha,
            "avg_weight_ratio": self.avg_weight_ratio,
            "next_slab_ratio": self.next_slab_ratio,
        }


def weight_stats(delta: WeightDistribution, T: int) -> WeightStats:
    """j* = minimal j with sum(delta[0..j]) >= T, and the two slab ratios."""
    if not 1 <= T <= delta.total:
        raise ValueError(f"T={T} outside [1, {delta.total}]")
    n = delta.length
    acc = 0
    j_star = n
    for j, dj in enumerate(delta.delta):
        acc += dj
        if acc >= T:
            j_star = j
            break
    prefix = sum(delta.delta[: j_star + 1])
    weighted = sum(i * delta.delta[i] for i in range(j_star + 1))
    avg_ratio = weighted / (j_star * prefix) if j_star > 0 else 0.0
    next_slab = delta.delta[j_star + 1] if j_star + 1 <= n else 0
    return WeightStats(T, j_star, j_star / n, avg_ratio, next_slab / prefix)
