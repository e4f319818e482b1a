import math

import numpy as np
import pytest

from homprod import bounds, chain, css, gf2, product, stab
from homprod.chain import ChainComplex

HAMMING = gf2.as_bin(
    [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]
)


def pauli_rows(strings):
    n = len(strings[0])
    rows = np.zeros((len(strings), 2 * n), dtype=np.uint8)
    for r, s in enumerate(strings):
        for q, ch in enumerate(s):
            if ch in "XY":
                rows[r, q] = 1
            if ch in "ZY":
                rows[r, n + q] = 1
    return rows


def rep_chain(n):
    h = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        h[i, i] = h[i, i + 1] = 1
    return h


FIVE_QUBIT = pauli_rows(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])

DIAG_CODES = {
    "single_z": gf2.as_bin([[0, 1]]),
    "rep3_quantum": pauli_rows(["ZZI", "IZZ"]),
    "steane": stab.SymplecticChecks.from_css(HAMMING, HAMMING).matrix,
    "five_qubit": FIVE_QUBIT,
    "ising4": stab.SymplecticChecks.from_css(rep_chain(4), gf2.zeros(0, 4)).matrix,
    "surface_patch": None,  # filled in below
}


def surface_patch_checks():
    patch = product.single_product(ChainComplex([gf2.as_bin([[1, 1]])], j_min=0))
    code = css.from_complex(patch)
    return stab.SymplecticChecks.from_css(code.z_checks, code.x_checks).matrix


DIAG_CODES["surface_patch"] = surface_patch_checks()


class TestSymplecticChecks:
    def test_rejects_noncommuting(self):
        with pytest.raises(ValueError, match="commute"):
            stab.SymplecticChecks(pauli_rows(["XII", "ZII"]))

    def test_counts(self):
        checks = stab.SymplecticChecks(FIVE_QUBIT)
        assert checks.n == 5
        assert checks.num_generators == 4
        assert checks.num_logical == 1

    def test_css_split(self):
        assert stab.SymplecticChecks(DIAG_CODES["steane"]).is_css()
        assert not stab.SymplecticChecks(FIVE_QUBIT).is_css()


class TestDiagonalize:
    def test_single_qubit_z(self):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES["single_z"]))
        assert diag.generators.tolist() == [[1, 0]]  # became X after the frame swap
        s = diag.syndrome(diag.pure_error(0))
        assert s.tolist() == [1]

    def test_rep3_pure_errors_on_first_two_qubits(self):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES["rep3_quantum"]))
        assert diag.num_generators == 2
        for j in range(2):
            e = diag.pure_error(j)
            # single-qubit Z at position j
            assert stab.pauli_vector_weight(e) == 1
            assert e[diag.n + j] == 1

    @pytest.mark.parametrize("name", sorted(k for k in DIAG_CODES))
    def test_anticommutation_identity_pattern(self, name):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES[name]))
        r = diag.num_generators
        pattern = np.array(
            [diag.syndrome(diag.pure_error(j)) for j in range(r)], dtype=np.uint8
        ).T
        assert (pattern == gf2.identity(r)).all()

    @pytest.mark.parametrize("name", sorted(k for k in DIAG_CODES))
    def test_span_preserved_through_frame(self, name):
        checks = stab.SymplecticChecks(DIAG_CODES[name])
        diag = stab.diagonalize(checks)
        back = np.array(
            [diag.to_original_frame(g) for g in diag.generators], dtype=np.uint8
        )
        stacked = np.vstack([checks.matrix, back])
        assert gf2.rank(stacked) == gf2.rank(checks.matrix) == gf2.rank(back)

    def test_frame_round_trip(self):
        diag = stab.diagonalize(stab.SymplecticChecks(FIVE_QUBIT))
        rng = np.random.default_rng(9)
        for _ in range(20):
            v = gf2.as_bin(rng.integers(0, 2, 10))
            there = diag.from_original_frame(v)
            assert (diag.to_original_frame(there) == v).all()
            assert stab.pauli_vector_weight(there) == stab.pauli_vector_weight(v)

    def test_steane_six_generators(self):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES["steane"]))
        assert diag.num_generators == 6
        assert diag.num_logical == 1


class TestPureErrorPreimage:
    def test_zero_syndrome(self):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES["steane"]))
        assert not stab.pure_error_preimage(diag, np.zeros(6, dtype=np.uint8)).any()

    def test_unit_syndromes(self):
        diag = stab.diagonalize(stab.SymplecticChecks(FIVE_QUBIT))
        for j in range(4):
            s = np.zeros(4, dtype=np.uint8)
            s[j] = 1
            e = stab.pure_error_preimage(diag, s)
            assert stab.pauli_vector_weight(e) == 1
            assert (diag.syndrome(e) == s).all()

    @pytest.mark.parametrize("name", sorted(k for k in DIAG_CODES))
    def test_exhaustive_weight_bound(self, name):
        diag = stab.diagonalize(stab.SymplecticChecks(DIAG_CODES[name]))
        r = diag.num_generators
        for code in range(2**r):
            s = gf2.as_bin([(code >> i) & 1 for i in range(r)])
            e = stab.pure_error_preimage(diag, s)
            assert (diag.syndrome(e) == s).all()
            assert stab.pauli_vector_weight(e) <= int(s.sum())


class TestLowWeightLogical:
    @pytest.mark.parametrize(
        "name", [k for k in sorted(DIAG_CODES) if k not in ("ising4",)]
    )
    def test_witness_properties(self, name):
        checks = stab.SymplecticChecks(DIAG_CODES[name])
        diag = stab.diagonalize(checks)
        if diag.num_logical == 0:
            pytest.skip("no logical qubits")
        witness = stab.low_weight_logical(diag)
        degrees = (
            diag.generators[:, : diag.n] | diag.generators[:, diag.n :]
        ).sum(axis=0)
        assert witness.weight <= int(degrees.max()) + 1
        assert not diag.syndrome(witness.pauli).any()
        stacked = np.vstack([diag.generators, witness.pauli])
        assert gf2.rank(stacked) == diag.num_generators + 1

    def test_rejects_zero_logical(self):
        # a [2, 0] code: stabilisers fill the space
        checks = stab.SymplecticChecks(pauli_rows(["XX", "ZZ"]))
        diag = stab.diagonalize(checks)
        with pytest.raises(ValueError):
            stab.low_weight_logical(diag)


class TestEnergyBarrier:
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_ising_chain_barrier_is_one(self, n):
        checks = stab.SymplecticChecks.from_css(rep_chain(n), gf2.zeros(0, n))
        report = stab.energy_barrier(checks, "x")
        assert report.barrier == 1
        assert report.sector == "x"
        self._replay(checks, report, "x")

    def test_surface_patch_barrier(self):
        checks = stab.SymplecticChecks(DIAG_CODES["surface_patch"])
        report = stab.energy_barrier(checks, "x")
        assert report.barrier == 1
        self._replay(checks, report, "x")

    def test_weight_one_logical_degenerate(self):
        # a qubit untouched by any check carries a weight-1 logical; the
        # walk steps straight into the target at zero cost
        checks = stab.SymplecticChecks.from_css(
            gf2.as_bin([[1, 1, 0]]), gf2.zeros(0, 3)
        )
        report = stab.energy_barrier(checks, "x")
        assert report.barrier == 0
        assert len(report.walk) == 1

    def test_full_sector_five_qubit(self):
        checks = stab.SymplecticChecks(FIVE_QUBIT)
        report = stab.energy_barrier(checks, "full")
        assert report.barrier >= 1
        self._replay(checks, report, "full")

    def test_rejects_oversize(self):
        checks = stab.SymplecticChecks.from_css(rep_chain(9), gf2.zeros(0, 9))
        with pytest.raises(ValueError):
            stab.energy_barrier(checks, "x", n_limit=8)

    @staticmethod
    def _replay(checks, report, sector):
        """The witness walk reaches a zero-syndrome nontrivial class while
        never exceeding the claimed barrier."""
        n = checks.n
        if sector == "x":
            state = np.zeros(2 * n, dtype=np.uint8)
        else:
            state = np.zeros(2 * n, dtype=np.uint8)
        peak = 0
        for qubit, letter in report.walk:
            q = qubit - 1
            if letter in ("X", "Y"):
                state[q] ^= 1
            if letter in ("Z", "Y"):
                state[n + q] ^= 1
            peak = max(peak, int(checks.syndrome(state).sum()))
        assert not checks.syndrome(state).any()
        assert peak <= report.barrier
        assert state.any()


class TestBarrierBound:
    def test_identity_bound(self):
        b = stab.barrier_bound(3, math.inf, bounds.LINEAR, 2)
        assert b.w == 1 and b.as_float == 1.0
        assert b.satisfied_by(1)

    def test_quadratic_bound(self):
        b = stab.barrier_bound(3, 3, bounds.QUADRATIC_OVER_4, 4)
        assert float(b.w) == 0.5
        assert abs(b.as_float - math.sqrt(2)) < 1e-12
        assert not b.satisfied_by(1)
        assert b.satisfied_by(2)

    def test_degenerate_threshold(self):
        b = stab.barrier_bound(5, 1, bounds.CUBIC_OVER_4, 3)
        assert b.w == 0 and b.as_float == 0.0
        assert b.satisfied_by(0)

    def test_diagonalized_five_qubit_meets_bound(self):
        # certified linear soundness of the diagonalized frame plus the
        # known distance give barrier >= 1; the search agrees exactly
        diag = stab.diagonalize(stab.SymplecticChecks(FIVE_QUBIT))
        from homprod import soundness

        assert soundness.certify_checks(diag.generators, math.inf, bounds.LINEAR).certified
        diag_checks = stab.SymplecticChecks(diag.generators)
        report = stab.energy_barrier(diag_checks, "full")
        bound = stab.barrier_bound(3, math.inf, bounds.LINEAR, int(diag_checks.qubit_degrees().max()))
        assert bound.satisfied_by(report.barrier)
        assert report.barrier >= 1
