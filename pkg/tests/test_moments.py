import itertools
import math
from fractions import Fraction

import pytest

from concatgv.certify import check_nice
from concatgv.codes import BinaryCode, ConcatCode, OuterCode, bias, all_messages
from concatgv.field import make_field
from concatgv.linalg import BitMatrix, FieldMatrix, sample_binary_code, sample_field_code
from concatgv.moments import (
    bad_bound,
    count_W,
    g_of_tuple,
    moment_direct,
    moment_dual,
    poisson_product_check,
    tuple_counts,
    w_count_bound,
)
from concatgv.rng import derive_seed

F2 = make_field(1)
F4 = make_field(2)


def one_bit_instance() -> ConcatCode:
    inner = BinaryCode(BitMatrix((1,), 1))
    outer = OuterCode(FieldMatrix(((1,),), 1, F2))
    return ConcatCode(outer, inner)


def grid_instances(codes_per_cell=5, master=123):
    cell = 0
    for q, n, n0 in itertools.product((2, 4), (1, 2, 3), (2, 3)):
        k0 = q.bit_length() - 1
        if k0 > n0:
            continue
        ctx = make_field(k0)
        for trial in range(codes_per_cell):
            gi = sample_binary_code(n0, k0, derive_seed(master, cell * 100 + 2 * trial))
            go = sample_field_code(ctx, n, 1, derive_seed(master, cell * 100 + 2 * trial + 1))
            yield ConcatCode(OuterCode(go), BinaryCode(gi))
        cell += 1


def test_g_of_tuple_examples():
    cc = next(grid_instances(1))
    n = cc.outer.n
    assert g_of_tuple(cc, []) == (0,) * n
    # a repeated pair self-cancels in characteristic 2
    assert g_of_tuple(cc, [(0, 1), (0, 1)]) == (0,) * n
    g = g_of_tuple(cc, [(0, 1)])
    assert g[0] == cc.omega[1] and all(v == 0 for v in g[1:])
    with pytest.raises(IndexError):
        g_of_tuple(cc, [(n, 0)])
    with pytest.raises(IndexError):
        g_of_tuple(cc, [(0, cc.inner.n0)])


def test_moment_r0_is_one():
    cc = one_bit_instance()
    assert moment_direct(cc, 0) == Fraction(1)
    assert moment_dual(cc, 0) == Fraction(1)


def test_one_bit_instance_moments():
    # Hand enumeration: the single nonzero message has X = -1.
    cc = one_bit_instance()
    assert bias(cc, (1,)) == -1
    for r in range(7):
        assert moment_direct(cc, r) == Fraction((-1) ** r)
        assert moment_dual(cc, r) == Fraction((-1) ** r)


def test_even_moments_nonnegative():
    for cc in grid_instances(2):
        for r in (2, 4):
            assert moment_direct(cc, r) >= 0


def test_moment_identity_on_grid():
    for cc in grid_instances(5):
        for r in (1, 2, 3):
            assert moment_direct(cc, r) == moment_dual(cc, r)


def test_moment_budgets():
    cc = one_bit_instance()
    with pytest.raises(ValueError):
        moment_direct(cc, 1, budget=1)
    with pytest.raises(ValueError):
        moment_dual(cc, 6, budget=0)


def test_tuple_counts_sharding():
    cc = next(grid_instances(1, master=9))
    m = cc.outer.n * cc.inner.n0
    for r in (1, 2, 3):
        whole = tuple_counts(cc, r)
        a = tuple_counts(cc, r, lead_range=(0, m // 2))
        b = tuple_counts(cc, r, lead_range=(m // 2, m))
        assert (a[0] + b[0], a[1] + b[1]) == whole


def test_bad_bound_rejects_odd_r():
    cc = one_bit_instance()
    with pytest.raises(ValueError):
        bad_bound(cc, 3, 1.0)


def test_bad_bound_large_c_no_bad_messages():
    for cc in grid_instances(2):
        rep = bad_bound(cc, 2, c=10.0 / (cc.inner.k0 / cc.inner.n0))
        # threshold > N, but |X_m| <= N always
        assert rep.threshold > cc.N
        assert rep.bad_count == 0


def test_bad_bound_scaling_in_c():
    cc = next(grid_instances(1, master=17))
    for r in (2, 4):
        r1 = bad_bound(cc, r, 1.0)
        r2 = bad_bound(cc, r, 2.0)
        assert r2.b_r * 2**r == r1.b_r


def test_bad_count_at_most_b_r_on_grid():
    for cc in grid_instances(3):
        for r in (2, 4):
            for c in (1.0, 4.0):
                rep = bad_bound(cc, r, c)
                assert Fraction(rep.bad_count) <= rep.b_r


def test_bad_count_from_bias_definition():
    # cross-check bad_count against a direct scan using bias()
    cc = next(grid_instances(1, master=23))
    rep = bad_bound(cc, 2, 1.0)
    manual = sum(
        1
        for m in all_messages(cc.outer)
        if any(m) and abs(bias(cc, m)) >= rep.threshold
    )
    assert rep.bad_count == manual


def test_count_w_empty_tuple():
    cc = one_bit_instance()
    rep = count_W(cc, 0)
    assert rep.count == 1
    assert rep.bound >= 1


def test_count_w_r1_zero_when_rows_nonzero():
    # single pair folds to e_alpha * omega_beta, zero only if a generator column is zero
    for cc in grid_instances(3, master=29):
        if all(b != 0 for b in cc.omega):
            assert count_W(cc, 1).count == 0


def test_count_w_equals_zero_fold_count():
    for cc in grid_instances(2, master=31):
        for r in (1, 2, 3):
            rep = count_W(cc, r)
            brute = 0
            m = cc.outer.n * cc.inner.n0
            pairs = [(a, b) for a in range(cc.outer.n) for b in range(cc.inner.n0)]
            for combo in itertools.product(pairs, repeat=r):
                if all(v == 0 for v in g_of_tuple(cc, combo)):
                    brute += 1
            assert rep.count == brute


def test_count_w_bound_when_nice():
    checked = 0
    for cc in grid_instances(5, master=37):
        n0, k0 = cc.inner.n0, cc.inner.k0
        tau = 1 / math.sqrt(n0)
        if not 0 < tau < k0 / n0:
            continue
        if not check_nice(cc.inner, tau).ok:
            continue
        for r in (1, 2, 3):
            rep = count_W(cc, r)
            assert rep.nice is True
            assert rep.count <= rep.bound
            checked += 1
    assert checked > 0


def test_count_w_invariant_under_omega_permutation():
    gi = sample_binary_code(3, 2, 77)
    perm = [2, 0, 1]
    rows_p = tuple(
        sum(((row >> j) & 1) << i for i, j in enumerate(perm)) for row in gi.rows
    )
    go = sample_field_code(F4, 2, 1, 78)
    c1 = ConcatCode(OuterCode(go), BinaryCode(gi))
    c2 = ConcatCode(OuterCode(go), BinaryCode(BitMatrix(rows_p, 3)))
    for r in (1, 2, 3):
        assert count_W(c1, r).count == count_W(c2, r).count
        assert bad_bound(c1, 2, 1.0).b_r == bad_bound(c2, 2, 1.0).b_r
        assert bad_bound(c1, 2, 1.0).bad_count == bad_bound(c2, 2, 1.0).bad_count


def test_w_count_bound_r0():
    assert w_count_bound(6, 3, 2 / 3, 0) == 2.0 ** (12 / math.sqrt(3) + math.log2(6))


def test_poisson_product_lambda_zero():
    cc = next(grid_instances(1, master=41))
    assert poisson_product_check(cc, 0.0) == 0.0


def test_poisson_product_single_bernoulli():
    # n = 1, omega = {1} over F2: both sides are Bernoulli((1 - e^(-2 lam)) / 2)
    cc = one_bit_instance()
    lam = 0.37
    gap = poisson_product_check(cc, lam, tail_eps=1e-14)
    assert gap <= 1e-12
    # closed form for the one-coordinate marginal
    from concatgv.certify import d_pmf

    p = (1 - math.exp(-2 * lam)) / 2
    pm = d_pmf(F2, cc.omega, p)
    assert pm[1] == pytest.approx(p, abs=1e-15)


def test_poisson_product_acceptance_instances():
    cc_a = ConcatCode(
        OuterCode(sample_field_code(F4, 2, 1, 11)),
        BinaryCode(sample_binary_code(3, 2, 12)),
    )
    assert poisson_product_check(cc_a, 0.2, 1e-12) <= 1e-9
    cc_b = ConcatCode(
        OuterCode(sample_field_code(F4, 1, 1, 13)),
        BinaryCode(sample_binary_code(4, 2, 14)),
    )
    assert poisson_product_check(cc_b, 0.5, 1e-12) <= 1e-9


def test_zero_omega_entry_is_consistent_everywhere():
    # a zero inner-generator column puts 0 into omega; every path must agree
    inner = BinaryCode(BitMatrix((0b001, 0b100), 3))
    outer = OuterCode(FieldMatrix(((1, 2),), 2, F4))
    cc = ConcatCode(outer, inner)
    assert 0 in cc.omega
    for m in all_messages(cc.outer):
        assert cc.encode(m).bit_count() == (cc.N - bias(cc, m)) // 2
    for r in (1, 2, 3, 4):
        assert moment_direct(cc, r) == moment_dual(cc, r)
    # each coordinate paired once with the zero entry folds to 0
    assert count_W(cc, 1).count == cc.outer.n
    assert poisson_product_check(cc, 0.3, 1e-12) <= 1e-9


def test_poisson_mixture_matches_explicit_tuple_oracle():
    # oracle: mixture over r of the exhaustive uniform-tuple law of the fold,
    # truncated where the Poisson tail drops below tail_eps
    tail_eps = 1e-9
    inner = BinaryCode(sample_binary_code(2, 1, 3))
    outer = OuterCode(sample_field_code(F2, 2, 1, 4))
    cc = ConcatCode(outer, inner)
    lam = 0.15
    n, k0 = cc.outer.n, cc.ctx.k0
    m = n * cc.inner.n0
    states = cc.ctx.q**n
    pairs = [(a, b) for a in range(n) for b in range(cc.inner.n0)]

    mean = lam * m
    mix = [0.0] * states
    pois = math.exp(-mean)
    covered = pois
    mix[0] += pois  # r = 0: empty tuple folds to zero
    r = 0
    while 1.0 - covered > tail_eps:
        r += 1
        pois *= mean / r
        covered += pois
        for combo in itertools.product(pairs, repeat=r):
            g = g_of_tuple(cc, combo)
            packed = sum(v << (a * k0) for a, v in enumerate(g))
            mix[packed] += pois / m**r

    from concatgv.certify import d_pmf

    p = (1 - math.exp(-2 * lam)) / 2
    coord = d_pmf(cc.ctx, cc.omega, p).probs
    oracle_gap = 0.0
    for packed in range(states):
        prod = 1.0
        for a in range(n):
            prod *= coord[(packed >> (a * k0)) & (cc.ctx.q - 1)]
        oracle_gap = max(oracle_gap, abs(mix[packed] - prod))
    assert oracle_gap <= tail_eps + 1e-12

    ours = poisson_product_check(cc, lam, tail_eps=tail_eps)
    assert abs(ours - oracle_gap) <= 1e-12


def test_poisson_budget():
    ctx = make_field(8)
    inner = BinaryCode(sample_binary_code(10, 8, 5))
    outer = OuterCode(sample_field_code(ctx, 3, 1, 6))
    with pytest.raises(ValueError):
        poisson_product_check(ConcatCode(outer, inner), 0.1)  # 256^3 > 2^20
