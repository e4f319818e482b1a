import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from homprod import bounds, chain, gf2, product, soundness, stab
from homprod.chain import ChainComplex

REP2 = gf2.as_bin([[1, 1]])
REP3 = gf2.as_bin([[1, 1, 0], [0, 1, 1]])


def cyclic(length):
    h = np.zeros((length, length), dtype=np.uint8)
    for i in range(length):
        h[i, i] = 1
        h[i, (i + 1) % length] = 1
    return h


def single(h):
    return product.single_product(ChainComplex([gf2.as_bin(h)], j_min=0))


@pytest.fixture(scope="module")
def tilde_rep3():
    return single(REP3)


@pytest.fixture(scope="module")
def tilde_rep2():
    return single(REP2)


@pytest.fixture(scope="module")
def breve_rep2(tilde_rep2):
    return product.double_product(tilde_rep2)


class TestProfile:
    def test_zero_syndrome_entry(self, tilde_rep3):
        prof = soundness.profile_map(tilde_rep3.delta(0).T, 2, 4)
        assert prof.worst[0] == 0

    def test_rep3_middle_maps_within_quadratic(self, tilde_rep3):
        # both product maps stay below x^2/4 for all x below the threshold
        for delta in (tilde_rep3.delta(0).T, tilde_rep3.delta(-1)):
            prof = soundness.certify_map(delta, 3, bounds.QUADRATIC_OVER_4)
            assert prof.verdict.certified

    def test_toric_direction_violates_quadratic(self):
        # the qubit-to-check map of the torus-like product: a two-check
        # syndrome can need an error crossing the lattice, growing with size
        worst_at_two = {}
        for length in (3, 4, 5):
            s = single(cyclic(length))
            prof = soundness.profile_map(s.delta(0), 2, length + 2)
            worst_at_two[length] = prof.worst[2]
            assert Fraction(prof.worst[2]) > bounds.QUADRATIC_OVER_4(2)
        assert worst_at_two == {3: 2, 4: 4, 5: 4}

    def test_certify_counterexample_carries_witness(self):
        s = single(cyclic(3))
        prof = soundness.certify_map(s.delta(0), 4, bounds.QUADRATIC_OVER_4)
        assert prof.verdict.kind == "counterexample"
        r = prof.verdict.counterexample
        assert r is not None
        syndrome = gf2.mat_vec(s.delta(0), r)
        x = gf2.weight(syndrome)
        assert x < 4
        best = gf2.min_weight_solution(s.delta(0), syndrome, 8)
        assert Fraction(best[1]) > bounds.QUADRATIC_OVER_4(x)

    def test_image_first_matches_error_first(self, tilde_rep3):
        delta = tilde_rep3.delta(0).T
        a = soundness.profile_map(delta, 6, 10)
        b = soundness.profile_map_error_first(delta)
        for x, w in a.worst.items():
            assert b.worst[x] == w


class TestSingleProductPreimage:
    def test_zero(self):
        w = soundness.single_product_preimage(
            REP3, np.zeros(13, dtype=np.uint8), "from_checks", 3
        )
        assert not w.r.any() and w.bound_guaranteed

    def test_exhaustive_rep2(self, tilde_rep2):
        # every image syndrome of the redundancy-side map, any weight
        delta = tilde_rep2.delta(-1)
        for code in range(2 ** delta.shape[1]):
            r0 = gf2.as_bin([(code >> i) & 1 for i in range(delta.shape[1])])
            s = gf2.mat_vec(delta, r0)
            w = soundness.single_product_preimage(REP2, s, "from_redundancy", 2)
            assert (gf2.mat_vec(delta, w.r) == s).all()
            x = gf2.weight(s)
            if x < 2:
                assert Fraction(gf2.weight(w.r)) <= bounds.QUADRATIC_OVER_4(x)

    def test_exhaustive_rep3_both_sides(self, tilde_rep3):
        for side, delta in (
            ("from_checks", tilde_rep3.delta(0).T),
            ("from_redundancy", tilde_rep3.delta(-1)),
        ):
            for code in range(2 ** delta.shape[1]):
                r0 = gf2.as_bin([(code >> i) & 1 for i in range(delta.shape[1])])
                s = gf2.mat_vec(delta, r0)
                w = soundness.single_product_preimage(REP3, s, side, 3)
                assert (gf2.mat_vec(delta, w.r) == s).all()
                x = gf2.weight(s)
                if x < 3:
                    assert Fraction(gf2.weight(w.r)) <= bounds.QUADRATIC_OVER_4(x)

    def test_weight_three_syndromes_reduce_to_quarter(self, tilde_rep3):
        # observed on every image syndrome of weight 3: witness within 9/4
        delta = tilde_rep3.delta(0).T
        seen = 0
        for code in range(1, 2 ** delta.shape[1]):
            r0 = gf2.as_bin([(code >> i) & 1 for i in range(delta.shape[1])])
            s = gf2.mat_vec(delta, r0)
            if gf2.weight(s) != 3:
                continue
            seen += 1
            w = soundness.single_product_preimage(REP3, s, "from_checks", 3)
            assert gf2.weight(w.r) <= 2
            best = gf2.min_weight_solution(delta, s, 3)
            assert best[1] <= gf2.weight(w.r)
        assert seen > 0

    def test_rejects_non_image(self, tilde_rep3):
        s = np.zeros(13, dtype=np.uint8)
        s[0] = 1  # weight-1 vectors are never image syndromes here
        with pytest.raises(soundness.PreimageError):
            soundness.single_product_preimage(REP3, s, "from_checks", 3)


def make_error_state(tilde, rng, weight):
    """A partial-decode input triple harvested from an actual error."""
    n_m1, n_0, n_1 = tilde.size(-1), tilde.size(0), tilde.size(1)
    r_a = gf2.zeros(n_m1, n_m1)
    r_b = gf2.zeros(n_0, n_0)
    r_c = gf2.zeros(n_1, n_1)
    total = n_m1 * n_m1 + n_0 * n_0 + n_1 * n_1
    for flat in rng.choice(total, size=weight, replace=False):
        if flat < n_m1 * n_m1:
            r_a[flat // n_m1, flat % n_m1] ^= 1
        elif flat < n_m1 * n_m1 + n_0 * n_0:
            flat -= n_m1 * n_m1
            r_b[flat // n_0, flat % n_0] ^= 1
        else:
            flat -= n_m1 * n_m1 + n_0 * n_0
            r_c[flat // n_1, flat % n_1] ^= 1
    d_low, d_high = tilde.delta(-1), tilde.delta(0)
    s_l = gf2.mat_mul(d_low, r_a) ^ gf2.mat_mul(r_b, d_low)
    s_r = gf2.mat_mul(d_high, r_b) ^ gf2.mat_mul(r_c, d_high)
    return r_b, s_l, s_r


def check_partial_properties(state, tilde):
    d_low, d_high = tilde.delta(-1), tilde.delta(0)
    # correctness and the declared support conditions
    assert (gf2.mat_mul(gf2.mat_mul(d_high, state.r_b), d_low) == state.m).all()
    assert all(state.support_conditions(d_high, d_low))
    # middle block no heavier than the product of syndrome block weights
    assert gf2.weight(state.r_b) <= gf2.weight(state.s_l) * gf2.weight(state.s_r)
    # left remainder: kernel columns confined to the left block's supports
    q_l = state.s_l ^ gf2.mat_mul(state.r_b, d_low)
    assert gf2.row_support(q_l) <= gf2.row_support(state.s_l)
    assert gf2.col_support(q_l) <= gf2.col_support(state.s_l)
    w_l = gf2.weight(state.s_l)
    cols = [q_l[:, j] for j in np.flatnonzero(q_l.any(axis=0))]
    assert len(cols) <= w_l
    for alpha in cols:
        assert gf2.weight(alpha) <= w_l
        assert not gf2.mat_vec(d_high, alpha).any()
    # right remainder: mirrored
    q_r = state.s_r ^ gf2.mat_mul(d_high, state.r_b)
    assert gf2.row_support(q_r) <= gf2.row_support(state.s_r)
    assert gf2.col_support(q_r) <= gf2.col_support(state.s_r)
    w_r = gf2.weight(state.s_r)
    rows = [q_r[i] for i in np.flatnonzero(q_r.any(axis=1))]
    assert len(rows) <= w_r
    for beta in rows:
        assert gf2.weight(beta) <= w_r
        assert not gf2.mat_vec(d_low.T, beta).any()


class TestPartialDecode:
    def test_all_zero_skips_every_loop(self, tilde_rep3):
        n0 = tilde_rep3.size(0)
        state = soundness.partial_decode(
            gf2.zeros(n0, n0),
            gf2.zeros(n0, tilde_rep3.size(-1)),
            gf2.zeros(tilde_rep3.size(1), n0),
            tilde_rep3.delta(0),
            tilde_rep3.delta(-1),
        )
        assert state.loop_counters == [0] * 6
        assert not state.r_b.any()

    def test_random_error_states(self, tilde_rep2):
        rng = np.random.default_rng(5)
        for _ in range(100):
            r_b, s_l, s_r = make_error_state(tilde_rep2, rng, int(rng.integers(1, 5)))
            state = soundness.partial_decode(
                r_b, s_l, s_r, tilde_rep2.delta(0), tilde_rep2.delta(-1)
            )
            check_partial_properties(state, tilde_rep2)

    def test_kernel_row_is_dropped(self, tilde_rep3):
        # a middle-block row invisible to the lower map is simply zeroed
        d_low = tilde_rep3.delta(-1)
        v = chain.cohomological_distance(tilde_rep3, -1, 4).witness
        assert v is not None and not gf2.mat_vec(d_low.T, v).any()
        n0 = tilde_rep3.size(0)
        r_b = gf2.zeros(n0, n0)
        r_b[4] = v
        s_l = gf2.mat_mul(r_b, d_low)
        s_r = gf2.mat_mul(tilde_rep3.delta(0), r_b)
        assert not s_l.any()
        state = soundness.partial_decode(
            r_b, s_l, s_r, tilde_rep3.delta(0), d_low
        )
        assert state.loop_counters[2] >= 1
        assert not state.r_b[4].any()

    def test_rejects_inconsistent_inputs(self, tilde_rep3):
        n0 = tilde_rep3.size(0)
        s_l = gf2.zeros(n0, tilde_rep3.size(-1))
        s_l[0, 0] = 1
        bad_sr = gf2.zeros(tilde_rep3.size(1), n0)
        with pytest.raises(ValueError, match="precondition"):
            soundness.partial_decode(
                gf2.zeros(n0, n0), s_l, bad_sr,
                tilde_rep3.delta(0), tilde_rep3.delta(-1),
            )

    def test_m_preserved_under_every_transform(self, tilde_rep2):
        # check_every_step asserts M after each single mutation
        rng = np.random.default_rng(11)
        for _ in range(25):
            r_b, s_l, s_r = make_error_state(tilde_rep2, rng, int(rng.integers(1, 6)))
            soundness.partial_decode(
                r_b, s_l, s_r, tilde_rep2.delta(0), tilde_rep2.delta(-1),
                check_every_step=True,
            )


class TestDoubleProductPreimage:
    def test_zero(self, tilde_rep2, breve_rep2):
        zero = np.zeros(breve_rep2.size(1), dtype=np.uint8)
        out = soundness.double_product_preimage(
            REP2, tilde_rep2, breve_rep2, zero, threshold=2
        )
        assert not out.r.any() and out.bound_guaranteed

    def test_exhaustive_weight_one_sources(self, tilde_rep2, breve_rep2):
        d0 = breve_rep2.delta(0)
        for q in range(33):
            r0 = np.zeros(33, dtype=np.uint8)
            r0[q] = 1
            s = gf2.mat_vec(d0, r0)
            out = soundness.double_product_preimage(
                REP2, tilde_rep2, breve_rep2, s, threshold=2
            )
            if not out.used_fallback:
                assert (gf2.mat_vec(d0, out.r) == s).all()
            if gf2.weight(s) < 2:
                assert out.bound_guaranteed and not out.used_fallback
                assert Fraction(gf2.weight(out.r)) <= bounds.CUBIC_OVER_4(gf2.weight(s))

    def test_assembly_bound_from_column_pieces(self, tilde_rep3):
        # |r_a| stays within the sum of quadratic bounds of its column pieces
        breve = product.double_product(tilde_rep3)
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(200):
            r0 = np.zeros(241, dtype=np.uint8)
            r0[rng.choice(241, size=2, replace=False)] = 1
            s = gf2.mat_vec(breve.delta(0), r0)
            out = soundness.double_product_preimage(
                REP3, tilde_rep3, breve, s, threshold=3
            )
            if out.used_fallback or out.r_a is None:
                continue
            budget = sum(
                bounds.QUADRATIC_OVER_4(gf2.weight(t.vector)) for t in out.left_terms
            )
            assert Fraction(gf2.weight(out.r_a)) <= budget
            budget_r = sum(
                bounds.QUADRATIC_OVER_4(gf2.weight(t.vector)) for t in out.right_terms
            )
            assert Fraction(gf2.weight(out.r_c)) <= budget_r
            checked += 1
        assert checked > 100

    def test_rejects_metacheck_failure(self, tilde_rep2, breve_rep2):
        s = np.zeros(breve_rep2.size(1), dtype=np.uint8)
        s[0] = 1
        assert gf2.mat_vec(breve_rep2.delta(1), s).any()
        with pytest.raises(soundness.PreimageError, match="metacheck"):
            soundness.double_product_preimage(
                REP2, tilde_rep2, breve_rep2, s, threshold=2
            )

    def test_rejects_non_image_metacheck_cycle(self):
        # cyclic input: a weight-3 metacheck-passing non-image syndrome exists
        tilde = single(cyclic(3))
        breve = product.double_product(tilde)
        witness = chain.homological_distance(breve, 1, 3).witness
        s = np.concatenate([witness, np.zeros(breve.size(1) - witness.shape[0], dtype=np.uint8)])
        if gf2.mat_vec(breve.delta(1), s).any():
            pytest.skip("witness embedding failed metachecks")
        with pytest.raises(soundness.PreimageError, match="image"):
            soundness.double_product_preimage(
                cyclic(3), tilde, breve, s, threshold=3
            )


class TestCertifyChecks:
    def test_diagonalized_frames_linear_sound(self):
        hamming = gf2.as_bin(
            [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]
        )
        rep3_quantum = np.zeros((2, 6), dtype=np.uint8)
        rep3_quantum[0, 3] = rep3_quantum[0, 4] = 1
        rep3_quantum[1, 4] = rep3_quantum[1, 5] = 1
        check_sets = [
            stab.SymplecticChecks.from_css(hamming, hamming),
            stab.SymplecticChecks(rep3_quantum),
        ]
        for checks in check_sets:
            diag = stab.diagonalize(checks)
            verdict = soundness.certify_checks(diag.generators, math.inf, bounds.LINEAR)
            assert verdict.certified

    def test_counterexample_detected(self):
        # plain toric-patch checks are not linearly sound
        patch = single(REP2)
        from homprod import css

        code = css.from_complex(patch)
        checks = stab.SymplecticChecks.from_css(code.z_checks, code.x_checks)
        verdict = soundness.certify_checks(checks.matrix, math.inf, bounds.PolyBound(1, Fraction(1, 4)))
        assert verdict.kind == "counterexample"
